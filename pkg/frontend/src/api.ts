/**
 * Typed client for the isarepair HTTP service.
 *
 * Every session response carries a monotonically increasing revision;
 * mutating calls echo the last seen revision and the service rejects stale
 * ones, so lost updates from a second tab surface as ApiError("stale_revision").
 */

export interface Axiom {
  sub: string;
  sup: string;
}

export interface ActionView {
  axioms: string[];
  verdicts: Record<string, string>;
  repaired: string[];
}

export interface EntryView {
  relation: string;
  status: 'repaired' | 'unrepaired';
  actions: ActionView[] | null;
  per_axiom: Record<string, string>;
  chosen_action: number | null;
}

export interface SessionView {
  session_id: string;
  revision: number;
  entries: EntryView[];
  verdicts: Record<string, string>;
  edits: string[];
  repaired_count: number;
  unrepaired_count: number;
}

export interface SourceTargetView {
  axiom: Axiom;
  source: string[];
  target: string[];
}

export interface HierarchyEdge {
  sub: string;
  sup: string;
  provenance: 'asserted' | 'inferred' | 'added-by-repair' | 'missing-unrepaired';
}

export interface HierarchyView {
  nodes: string[];
  edges: HierarchyEdge[];
}

export class ApiError extends Error {
  constructor(
    readonly code: string,
    message: string,
    readonly status: number,
  ) {
    super(message);
  }
}

export function parseAxiom(text: string): Axiom {
  const parts = text.split('<=');
  if (parts.length !== 2) throw new Error(`not an is-a statement: ${text}`);
  return { sub: parts[0].trim(), sup: parts[1].trim() };
}

export class ApiClient {
  constructor(readonly baseUrl: string) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await fetch(this.baseUrl + path, {
      headers: { 'Content-Type': 'application/json' },
      ...init,
    });
    const text = await response.text();
    const body = text ? JSON.parse(text) : {};
    if (!response.ok) {
      throw new ApiError(body.code ?? 'error', body.message ?? text, response.status);
    }
    return body as T;
  }

  createSession(ontologyPath: string, missingPath: string): Promise<SessionView> {
    return this.request('/sessions', {
      method: 'POST',
      body: JSON.stringify({ ontology_path: ontologyPath, missing_path: missingPath }),
    });
  }

  createSessionFromText(ontologyText: string, missingText: string): Promise<SessionView> {
    return this.request('/sessions', {
      method: 'POST',
      body: JSON.stringify({ ontology_text: ontologyText, missing_text: missingText }),
    });
  }

  listSessions(): Promise<{ sessions: string[] }> {
    return this.request('/sessions');
  }

  getSession(sid: string): Promise<SessionView> {
    return this.request(`/sessions/${sid}`);
  }

  generate(sid: string, entry: number, revision: number, variant = 'basic', force = false): Promise<SessionView> {
    return this.request(`/sessions/${sid}/entries/${entry}/generate`, {
      method: 'POST',
      body: JSON.stringify({ revision, variant, force }),
    });
  }

  validate(sid: string, revision: number, axiom: Axiom, verdict: string): Promise<SessionView> {
    return this.request(`/sessions/${sid}/validate`, {
      method: 'POST',
      body: JSON.stringify({ revision, axiom, verdict }),
    });
  }

  sourceTarget(sid: string, axiom: Axiom): Promise<SourceTargetView> {
    const params = new URLSearchParams({ sub: axiom.sub, sup: axiom.sup });
    return this.request(`/sessions/${sid}/source-target?${params}`);
  }

  repair(
    sid: string,
    entry: number,
    revision: number,
    axiom: Axiom,
    source: string,
    target: string,
  ): Promise<SessionView> {
    return this.request(`/sessions/${sid}/entries/${entry}/repair`, {
      method: 'POST',
      body: JSON.stringify({ revision, axiom, source, target }),
    });
  }

  revoke(sid: string, entry: number, revision: number): Promise<SessionView> {
    return this.request(`/sessions/${sid}/entries/${entry}/revoke`, {
      method: 'POST',
      body: JSON.stringify({ revision }),
    });
  }

  hierarchy(sid: string): Promise<HierarchyView> {
    return this.request(`/sessions/${sid}/hierarchy`);
  }

  async ontologyText(sid: string): Promise<string> {
    const response = await fetch(`${this.baseUrl}/sessions/${sid}/ontology`);
    return response.text();
  }
}
