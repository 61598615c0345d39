import { ApiClient } from "./api.js";
import { defaultForm, defaultProfile, scenarioFromForm, type FormState } from "./form.js";
import {
  renderControls,
  renderMitigations,
  renderOffline,
  renderProfilePanel,
  renderVerdict,
  setControlsDisabled,
} from "./render.js";
import type {
  AssessmentPayload,
  MitigationPayload,
  ProfilePayload,
  TablesPayload,
} from "./types.js";

export interface AppElements {
  offline: HTMLElement;
  profile: HTMLElement;
  controls: HTMLElement;
  verdict: HTMLElement;
  mitigations: HTMLElement;
  undo: HTMLButtonElement;
}

/** The single screen: enter the activity, read the color, click a
 * mitigation, repeat. All scoring happens on the service; the screen only
 * mirrors the most recent response for the current form state. */
export class App {
  tables: TablesPayload | null = null;
  form: FormState = { selections: {}, label: "" };
  profile: ProfilePayload = defaultProfile();
  lastAssessment: AssessmentPayload | null = null;
  mitigations: MitigationPayload[] = [];
  offline = false;

  // monotone counters: requests carry the sequence they were issued at,
  // stale responses are dropped (latest wins)
  private formRevision = 0;
  private assessSequence = 0;
  private appliedSequence = 0;
  private mitigationsRevision = -1;
  private undoStack: FormState[] = [];
  private pending: Set<Promise<void>> = new Set();

  constructor(
    readonly api: ApiClient,
    readonly elements: AppElements,
  ) {}

  async init(): Promise<void> {
    try {
      this.tables = await this.api.tables();
      const stored = await this.api.storedProfile();
      if (stored !== null) {
        this.profile = stored;
      }
    } catch (error) {
      this.setOffline(true, error);
      renderVerdict(this.elements.verdict, null);
      return;
    }
    this.setOffline(false);
    this.form = defaultForm(this.tables);
    this.renderStatic();
    await this.refresh();
  }

  /** Resolves once every in-flight request issued so far has settled. */
  async idle(): Promise<void> {
    while (this.pending.size > 0) {
      await Promise.allSettled([...this.pending]);
    }
  }

  private track(task: Promise<void>): Promise<void> {
    this.pending.add(task);
    void task.finally(() => this.pending.delete(task));
    return task;
  }

  private setOffline(offline: boolean, error?: unknown): void {
    this.offline = offline;
    renderOffline(
      this.elements.offline,
      offline,
      error instanceof Error ? error.message : "",
    );
    setControlsDisabled(this.elements.controls, offline);
    setControlsDisabled(this.elements.profile, offline);
  }

  private renderStatic(): void {
    if (this.tables === null) return;
    renderControls(this.elements.controls, this.tables, this.form, (field, value) => {
      this.setField(field, value);
    });
    renderProfilePanel(this.elements.profile, this.profile, (profile) => {
      void this.setProfile(profile);
    });
    this.elements.undo.onclick = () => void this.undo();
  }

  setField(field: string, value: number | string): Promise<void> {
    this.form = {
      ...this.form,
      selections: { ...this.form.selections, [field]: value },
    };
    this.formRevision += 1;
    return this.refresh();
  }

  async setProfile(profile: ProfilePayload): Promise<void> {
    this.profile = profile;
    this.formRevision += 1;
    this.renderStatic();
    const save = this.track(
      this.api.saveProfile(profile).then(
        () => undefined,
        () => undefined, // persistence is a convenience, not a blocker
      ),
    );
    await Promise.all([save, this.refresh()]);
  }

  /** Re-assess the current form; superseded responses are discarded. */
  refresh(): Promise<void> {
    const sequence = ++this.assessSequence;
    const scenario = scenarioFromForm(this.form);
    const revision = this.formRevision;
    const task = (async () => {
      try {
        const body = await this.api.whatif(scenario, this.profile);
        if (sequence <= this.appliedSequence) {
          return; // a newer response already rendered
        }
        this.appliedSequence = sequence;
        this.lastAssessment = body.original;
        this.mitigations = body.mitigations;
        this.mitigationsRevision = revision;
        this.setOffline(false);
        renderVerdict(this.elements.verdict, body.original);
        renderMitigations(this.elements.mitigations, body.mitigations, (index) => {
          void this.applyMitigation(index);
        });
      } catch (error) {
        if (sequence > this.appliedSequence) {
          this.setOffline(true, error);
        }
      }
    })();
    return this.track(task);
  }

  /** Apply a suggested change to the form and re-assess, closing the
   * decision loop. A suggestion computed for an older form state is not
   * applied; the list is refreshed instead. */
  async applyMitigation(index: number): Promise<void> {
    const mitigation = this.mitigations[index];
    if (mitigation === undefined) return;
    if (this.mitigationsRevision !== this.formRevision) {
      await this.refresh();
      return;
    }
    this.undoStack.push(this.form);
    for (const change of mitigation.changes) {
      this.form = {
        ...this.form,
        selections: { ...this.form.selections, [change.field]: change.to },
      };
    }
    this.formRevision += 1;
    if (this.tables !== null) {
      renderControls(this.elements.controls, this.tables, this.form, (field, value) => {
        this.setField(field, value);
      });
    }
    await this.refresh();
  }

  async undo(): Promise<void> {
    const previous = this.undoStack.pop();
    if (previous === undefined) return;
    this.form = previous;
    this.formRevision += 1;
    if (this.tables !== null) {
      renderControls(this.elements.controls, this.tables, this.form, (field, value) => {
        this.setField(field, value);
      });
    }
    await this.refresh();
  }
}
