/**
 * Workbench state: a thin mirror of the server's session view plus UI
 * selections.  No reasoning result is ever computed here; every fact shown
 * comes from a service response, so the store is only orchestration.
 */

import {
  ApiClient,
  ApiError,
  Axiom,
  HierarchyView,
  SessionView,
  SourceTargetView,
  parseAxiom,
} from './api.js';

export interface SourceTargetPanel {
  axiom: string;
  source: string[];
  target: string[];
  chosenSource: string | null;
  chosenTarget: string | null;
}

type Listener = () => void;

export class WorkbenchStore {
  view: SessionView | null = null;
  hierarchy: HierarchyView | null = null;
  selectedEntry = 0;
  selectedAction = 0;
  /** panels keyed by axiom text for the currently selected action */
  panels = new Map<string, SourceTargetPanel>();
  message: string | null = null;

  private listeners: Listener[] = [];

  constructor(readonly api: ApiClient) {}

  subscribe(listener: Listener): void {
    this.listeners.push(listener);
  }

  private emit(): void {
    for (const listener of this.listeners) listener();
  }

  private async mutate(run: () => Promise<SessionView>): Promise<void> {
    if (!this.view) throw new Error('no session loaded');
    try {
      this.view = await run();
      this.message = null;
    } catch (error) {
      if (error instanceof ApiError && error.code === 'stale_revision') {
        // another tab moved the session on; refresh and ask the user to retry
        this.view = await this.api.getSession(this.view.session_id);
        this.message = 'session changed elsewhere; view refreshed, please retry';
      } else if (error instanceof ApiError) {
        this.message = `${error.code}: ${error.message}`;
      } else {
        throw error;
      }
    }
    await this.refreshDerived();
    this.emit();
  }

  private async refreshDerived(): Promise<void> {
    if (!this.view) return;
    this.hierarchy = await this.api.hierarchy(this.view.session_id);
    const entry = this.view.entries[this.selectedEntry];
    if (!entry || entry.actions === null || entry.actions.length === 0) {
      this.panels = new Map();
      return;
    }
    if (this.selectedAction >= entry.actions.length) this.selectedAction = 0;
    const action = entry.actions[this.selectedAction];
    const panels = new Map<string, SourceTargetPanel>();
    for (const axiomText of action.axioms) {
      if (action.verdicts[axiomText] !== 'correct') continue;
      const previous = this.panels.get(axiomText);
      const sets: SourceTargetView = await this.api.sourceTarget(
        this.view.session_id,
        parseAxiom(axiomText),
      );
      panels.set(axiomText, {
        axiom: axiomText,
        source: sets.source,
        target: sets.target,
        chosenSource:
          previous && sets.source.includes(previous.chosenSource ?? '')
            ? previous.chosenSource
            : sets.source.length === 1
              ? sets.source[0]
              : null,
        chosenTarget:
          previous && sets.target.includes(previous.chosenTarget ?? '')
            ? previous.chosenTarget
            : sets.target.length === 1
              ? sets.target[0]
              : null,
      });
    }
    this.panels = panels;
  }

  async createFromPaths(ontologyPath: string, missingPath: string): Promise<void> {
    this.view = await this.api.createSession(ontologyPath, missingPath);
    this.selectedEntry = 0;
    this.selectedAction = 0;
    await this.refreshDerived();
    this.emit();
  }

  async openSession(sid: string): Promise<void> {
    this.view = await this.api.getSession(sid);
    this.selectedEntry = 0;
    this.selectedAction = 0;
    await this.refreshDerived();
    this.emit();
  }

  entry() {
    return this.view?.entries[this.selectedEntry] ?? null;
  }

  action() {
    const entry = this.entry();
    if (!entry || !entry.actions) return null;
    return entry.actions[this.selectedAction] ?? null;
  }

  async selectEntry(index: number): Promise<void> {
    this.selectedEntry = index;
    this.selectedAction = 0;
    await this.refreshDerived();
    this.emit();
  }

  async selectAction(index: number): Promise<void> {
    this.selectedAction = index;
    await this.refreshDerived();
    this.emit();
  }

  async generate(variant: 'basic' | 'optimized' = 'basic'): Promise<void> {
    const entry = this.entry();
    const force = entry !== null && entry.actions !== null;
    await this.mutate(() =>
      this.api.generate(
        this.view!.session_id,
        this.selectedEntry,
        this.view!.revision,
        variant,
        force,
      ),
    );
  }

  async validateAxiom(axiomText: string, verdict: 'correct' | 'incorrect'): Promise<void> {
    await this.mutate(() =>
      this.api.validate(this.view!.session_id, this.view!.revision, parseAxiom(axiomText), verdict),
    );
  }

  chooseSource(axiomText: string, concept: string): void {
    const panel = this.panels.get(axiomText);
    if (panel && panel.source.includes(concept)) {
      panel.chosenSource = concept;
      this.emit();
    }
  }

  chooseTarget(axiomText: string, concept: string): void {
    const panel = this.panels.get(axiomText);
    if (panel && panel.target.includes(concept)) {
      panel.chosenTarget = concept;
      this.emit();
    }
  }

  async repairAxiom(axiomText: string): Promise<void> {
    const panel = this.panels.get(axiomText);
    if (!panel || !panel.chosenSource || !panel.chosenTarget) {
      this.message = 'choose one source and one target concept first';
      this.emit();
      return;
    }
    await this.mutate(() =>
      this.api.repair(
        this.view!.session_id,
        this.selectedEntry,
        this.view!.revision,
        parseAxiom(axiomText),
        panel.chosenSource!,
        panel.chosenTarget!,
      ),
    );
  }

  async revokeEntry(): Promise<void> {
    await this.mutate(() =>
      this.api.revoke(this.view!.session_id, this.selectedEntry, this.view!.revision),
    );
  }
}
