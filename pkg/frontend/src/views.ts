/**
 * DOM construction for the workbench screens.  All controls dispatch store
 * methods; the whole tree is re-rendered from the store on every change.
 */

import { WorkbenchStore } from './state.js';
import { renderHierarchySvg } from './hierarchy.js';

function el<K extends keyof HTMLElementTagNameMap>(
  doc: Document,
  tag: K,
  attrs: Record<string, string> = {},
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = doc.createElement(tag);
  for (const [key, value] of Object.entries(attrs)) node.setAttribute(key, value);
  if (text !== undefined) node.textContent = text;
  return node;
}

function statusLabel(doc: Document, status: string): HTMLElement {
  const repaired = status === 'repaired';
  return el(
    doc,
    'span',
    { class: repaired ? 'status status-repaired' : 'status status-unrepaired' },
    repaired ? 'Repaired' : 'Not Repaired',
  );
}

export function render(store: WorkbenchStore, root: HTMLElement): void {
  const doc = root.ownerDocument;
  root.textContent = '';
  const view = store.view;
  if (!view) {
    root.appendChild(el(doc, 'p', { id: 'no-session' }, 'No session loaded.'));
    return;
  }

  if (store.message) {
    root.appendChild(el(doc, 'p', { id: 'message', class: 'message' }, store.message));
  }

  // -- missing-relation picker ------------------------------------------------
  const picker = el(doc, 'section', { id: 'entry-picker' });
  picker.appendChild(el(doc, 'h2', {}, 'Missing is-a relations'));
  const entrySelect = el(doc, 'select', { id: 'entry-select' });
  view.entries.forEach((entry, i) => {
    const option = el(doc, 'option', { value: String(i) }, entry.relation);
    if (i === store.selectedEntry) option.setAttribute('selected', 'selected');
    entrySelect.appendChild(option);
  });
  entrySelect.addEventListener('change', () => {
    void store.selectEntry(Number((entrySelect as HTMLSelectElement).value));
  });
  picker.appendChild(entrySelect);

  const entry = store.entry();
  if (entry) picker.appendChild(statusLabel(doc, entry.status));
  const generate = el(doc, 'button', { id: 'generate' }, 'Generate Repairing Actions');
  generate.addEventListener('click', () => void store.generate());
  picker.appendChild(generate);
  root.appendChild(picker);

  if (entry) renderEntrySections(store, root, entry);

  // -- session summary -----------------------------------------------------------
  const summary = el(doc, 'section', { id: 'summary' });
  summary.appendChild(
    el(
      doc,
      'p',
      { id: 'summary-counts' },
      `${view.repaired_count} repaired, ${view.unrepaired_count} not repaired`,
    ),
  );
  summary.appendChild(
    el(doc, 'p', { id: 'summary-edits' }, `ontology edits: ${view.edits.join(', ') || '(none)'}`),
  );
  root.appendChild(summary);
}

function renderEntrySections(
  store: WorkbenchStore,
  root: HTMLElement,
  entry: NonNullable<ReturnType<WorkbenchStore['entry']>>,
): void {
  const doc = root.ownerDocument;

  // -- repairing actions --------------------------------------------------------
  const actionsSection = el(doc, 'section', { id: 'actions' });
  actionsSection.appendChild(el(doc, 'h2', {}, 'Repairing actions'));
  if (entry.actions === null) {
    actionsSection.appendChild(el(doc, 'p', { id: 'actions-empty' }, 'Not generated yet.'));
    root.appendChild(actionsSection);
    return;
  }
  if (entry.actions.length === 0) {
    actionsSection.appendChild(el(doc, 'p', { id: 'actions-empty' }, 'No repairing actions left.'));
    root.appendChild(actionsSection);
    return;
  }
  const actionSelect = el(doc, 'select', { id: 'action-select' });
  entry.actions.forEach((action, i) => {
    const option = el(doc, 'option', { value: String(i) }, `{${action.axioms.join(', ')}}`);
    if (i === store.selectedAction) option.setAttribute('selected', 'selected');
    actionSelect.appendChild(option);
  });
  actionSelect.addEventListener('change', () => {
    void store.selectAction(Number((actionSelect as HTMLSelectElement).value));
  });
  actionsSection.appendChild(actionSelect);

  const action = store.action();
  if (action) {
    // validation dialog: one row per axiom with correct/incorrect marks
    const dialog = el(doc, 'div', { id: 'validation-dialog' });
    dialog.appendChild(el(doc, 'h3', {}, 'Validate is-a relations in repairing action'));
    for (const axiom of action.axioms) {
      const row = el(doc, 'div', { class: 'axiom-row', 'data-axiom': axiom });
      row.appendChild(el(doc, 'span', { class: 'axiom-text' }, axiom));
      const verdict = action.verdicts[axiom] ?? 'unvalidated';
      row.appendChild(el(doc, 'span', { class: `verdict verdict-${verdict}` }, verdict));
      row.appendChild(
        el(
          doc,
          'span',
          { class: 'axiom-status' },
          entry.per_axiom[axiom] === 'repaired' ? 'Repaired' : 'Not Repaired',
        ),
      );
      if (verdict === 'unvalidated') {
        const markCorrect = el(doc, 'button', { class: 'mark-correct' }, 'correct');
        markCorrect.addEventListener('click', () => void store.validateAxiom(axiom, 'correct'));
        const markIncorrect = el(doc, 'button', { class: 'mark-incorrect' }, 'incorrect');
        markIncorrect.addEventListener('click', () => void store.validateAxiom(axiom, 'incorrect'));
        row.appendChild(markCorrect);
        row.appendChild(markIncorrect);
      }
      dialog.appendChild(row);
    }
    actionsSection.appendChild(dialog);
  }

  const revoke = el(doc, 'button', { id: 'revoke' }, 'Revoke Repairing Actions');
  revoke.addEventListener('click', () => void store.revokeEntry());
  actionsSection.appendChild(revoke);
  root.appendChild(actionsSection);

  // -- source/target repair panels ---------------------------------------------
  const repairSection = el(doc, 'section', { id: 'repair-panels' });
  repairSection.appendChild(el(doc, 'h2', {}, 'Repair validated is-a relations'));
  for (const panel of store.panels.values()) {
    const box = el(doc, 'div', { class: 'st-panel', 'data-axiom': panel.axiom });
    box.appendChild(el(doc, 'h3', {}, panel.axiom));

    const columns = el(doc, 'div', { class: 'st-columns' });
    const sourceList = el(doc, 'ul', { class: 'source-set' });
    for (const concept of panel.source) {
      const item = el(doc, 'li', {});
      const button = el(
        doc,
        'button',
        {
          class: concept === panel.chosenSource ? 'concept chosen' : 'concept',
          'data-concept': concept,
        },
        concept,
      );
      button.addEventListener('click', () => store.chooseSource(panel.axiom, concept));
      item.appendChild(button);
      sourceList.appendChild(item);
    }
    const targetList = el(doc, 'ul', { class: 'target-set' });
    for (const concept of panel.target) {
      const item = el(doc, 'li', {});
      const button = el(
        doc,
        'button',
        {
          class: concept === panel.chosenTarget ? 'concept chosen' : 'concept',
          'data-concept': concept,
        },
        concept,
      );
      button.addEventListener('click', () => store.chooseTarget(panel.axiom, concept));
      item.appendChild(button);
      targetList.appendChild(item);
    }
    columns.appendChild(sourceList);
    columns.appendChild(targetList);
    box.appendChild(columns);

    if (store.hierarchy) {
      const [sub, sup] = panel.axiom.split('<=').map((s) => s.trim());
      box.appendChild(renderHierarchySvg(doc, store.hierarchy, new Set([sub, sup])));
    }

    const repairButton = el(doc, 'button', { class: 'repair' }, 'Repair');
    repairButton.addEventListener('click', () => void store.repairAxiom(panel.axiom));
    box.appendChild(repairButton);
    repairSection.appendChild(box);
  }
  root.appendChild(repairSection);
}
