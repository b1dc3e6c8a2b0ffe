/** Browser bootstrap: wire the store to the page and offer a session picker. */

import { ApiClient } from './api.js';
import { WorkbenchStore } from './state.js';
import { render } from './views.js';

const SERVICE_URL =
  new URLSearchParams(window.location.search).get('service') ?? 'http://127.0.0.1:8642';

const api = new ApiClient(SERVICE_URL);
const store = new WorkbenchStore(api);

const root = document.getElementById('app');
if (!root) throw new Error('missing #app element');

store.subscribe(() => render(store, root));

const form = document.getElementById('loader') as HTMLFormElement | null;
if (form) {
  form.addEventListener('submit', (event) => {
    event.preventDefault();
    const data = new FormData(form);
    const ontology = String(data.get('ontology') ?? 'pizza.onto');
    const missing = String(data.get('missing') ?? 'pizza.missing');
    void store
      .createFromPaths(ontology, missing)
      .catch((error) => {
        root.textContent = `failed to load session: ${error}`;
      });
  });
}

render(store, root);
