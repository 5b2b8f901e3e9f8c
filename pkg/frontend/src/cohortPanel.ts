import { ApiError } from './api';
import type { CohortCreated, CohortRequest, CohortSnapshot, EngineApi } from './types';

const STORAGE_KEY = 'pathcase.cohort.job';

interface StoredJob {
  job_id: string;
  inclusion: string;
  exclusion: string;
}

type StorageLike = Pick<Storage, 'getItem' | 'setItem' | 'removeItem'>;

export interface CohortPanelOptions {
  /** Poll interval in milliseconds; the service contract is one GET every 2 s. */
  pollMs?: number;
  /** Where the active job id is persisted so a reload can reattach. */
  storage?: StorageLike;
}

function decisionLabel(decision: number | null): string {
  if (decision === 1) return 'include';
  if (decision === 0) return 'exclude';
  return 'unparsed';
}

/**
 * Criteria editor plus a live job monitor. Starting a job POSTs once and
 * then polls GET /v1/cohorts/{id} on a fixed interval; progress only moves
 * forward on screen even if polls arrive out of order. Cancel is local
 * (stop polling, the job keeps running server side). The active job id is
 * kept in storage so reloading mid-run reattaches without losing anything.
 */
export class CohortPanel {
  private readonly inclusion: HTMLTextAreaElement;
  private readonly exclusion: HTMLTextAreaElement;
  private readonly validation: HTMLElement;
  private readonly prefilterToggle: HTMLInputElement;
  private readonly prefilterQuery: HTMLInputElement;
  private readonly prefilterThreshold: HTMLInputElement;
  private readonly stateBadge: HTMLElement;
  private readonly progressText: HTMLElement;
  private readonly progressBar: HTMLElement;
  private readonly statsLine: HTMLElement;
  private readonly banner: HTMLElement;
  private readonly decisionBody: HTMLTableSectionElement;
  private readonly pollMs: number;
  private readonly storage: StorageLike | null;
  private timer: ReturnType<typeof setInterval> | null = null;
  private maxDone = 0;
  private lastSpec: { inclusion: string; exclusion: string } | null = null;

  constructor(
    root: HTMLElement,
    private readonly api: EngineApi,
    options: CohortPanelOptions = {}
  ) {
    this.pollMs = options.pollMs ?? 2000;
    this.storage = options.storage ?? null;
    root.innerHTML = '';

    this.inclusion = document.createElement('textarea');
    this.inclusion.dataset.role = 'inclusion-criteria';
    this.inclusion.placeholder = 'inclusion criteria';
    this.exclusion = document.createElement('textarea');
    this.exclusion.dataset.role = 'exclusion-criteria';
    this.exclusion.placeholder = 'exclusion criteria';

    this.validation = document.createElement('div');
    this.validation.dataset.role = 'criteria-validation';
    this.validation.hidden = true;

    this.prefilterToggle = document.createElement('input');
    this.prefilterToggle.type = 'checkbox';
    this.prefilterToggle.dataset.role = 'prefilter-toggle';
    this.prefilterQuery = document.createElement('input');
    this.prefilterQuery.dataset.role = 'prefilter-query';
    this.prefilterQuery.placeholder = 'prefilter query';
    this.prefilterThreshold = document.createElement('input');
    this.prefilterThreshold.dataset.role = 'prefilter-threshold';
    this.prefilterThreshold.value = '0.2';

    const start = document.createElement('button');
    start.dataset.role = 'start-job';
    start.textContent = 'Start cohort job';
    start.addEventListener('click', () => {
      void this.start();
    });
    const cancel = document.createElement('button');
    cancel.dataset.role = 'cancel-job';
    cancel.textContent = 'Cancel (stop watching)';
    cancel.addEventListener('click', () => {
      this.cancel();
    });
    const duplicate = document.createElement('button');
    duplicate.dataset.role = 'duplicate-job';
    duplicate.textContent = 'Duplicate and edit';
    duplicate.addEventListener('click', () => {
      this.duplicate();
    });

    this.stateBadge = document.createElement('span');
    this.stateBadge.dataset.role = 'job-state';
    this.stateBadge.textContent = 'idle';
    this.progressText = document.createElement('span');
    this.progressText.dataset.role = 'job-progress';
    this.progressBar = document.createElement('div');
    this.progressBar.dataset.role = 'job-progress-bar';
    this.statsLine = document.createElement('div');
    this.statsLine.dataset.role = 'job-stats';

    this.banner = document.createElement('div');
    this.banner.dataset.role = 'cohort-banner';
    this.banner.hidden = true;

    const table = document.createElement('table');
    table.dataset.role = 'decision-table';
    const head = document.createElement('thead');
    const headRow = document.createElement('tr');
    for (const column of ['case', 'decision', 'rationale', 'parse']) {
      const cell = document.createElement('th');
      cell.textContent = column;
      headRow.append(cell);
    }
    head.append(headRow);
    this.decisionBody = document.createElement('tbody');
    table.append(head, this.decisionBody);

    root.append(
      this.inclusion,
      this.exclusion,
      this.validation,
      this.prefilterToggle,
      this.prefilterQuery,
      this.prefilterThreshold,
      start,
      cancel,
      duplicate,
      this.stateBadge,
      this.progressText,
      this.progressBar,
      this.statsLine,
      this.banner,
      table
    );
  }

  /** Reattach to a stored in-flight job after a page reload. */
  init(): void {
    const stored = this.loadStored();
    if (!stored) {
      return;
    }
    this.inclusion.value = stored.inclusion;
    this.exclusion.value = stored.exclusion;
    this.lastSpec = { inclusion: stored.inclusion, exclusion: stored.exclusion };
    this.attach(stored.job_id);
  }

  /** True while a poll timer is live. */
  get polling(): boolean {
    return this.timer !== null;
  }

  async start(): Promise<void> {
    if (!this.validateCriteria()) {
      return; // flagged inline, nothing sent
    }
    this.hideBanner();
    const body: CohortRequest = {
      inclusion_criteria: this.inclusion.value.trim(),
      exclusion_criteria: this.exclusion.value.trim(),
      prefilter: this.prefilterToggle.checked
        ? {
            query: this.prefilterQuery.value.trim(),
            threshold: Number(this.prefilterThreshold.value),
          }
        : null,
    };
    let created: CohortCreated;
    try {
      created = await this.api.createCohort(body);
    } catch (err) {
      if (err instanceof ApiError && err.status === 422) {
        this.flagCriteria(err.message);
      } else {
        this.showBanner(err instanceof Error ? err.message : 'request failed');
      }
      return;
    }
    this.lastSpec = {
      inclusion: this.inclusion.value,
      exclusion: this.exclusion.value,
    };
    this.saveStored({
      job_id: created.job_id,
      inclusion: this.inclusion.value,
      exclusion: this.exclusion.value,
    });
    this.attach(created.job_id);
  }

  /** Start watching a job id: reset the monitor and poll on the interval. */
  attach(jobId: string): void {
    this.stopPolling();
    this.maxDone = 0;
    this.decisionBody.innerHTML = '';
    this.statsLine.textContent = '';
    this.stateBadge.textContent = 'queued';
    this.progressText.textContent = '';
    this.timer = setInterval(() => {
      void this.poll(jobId);
    }, this.pollMs);
    void this.poll(jobId); // immediate first look so reattach is instant
  }

  /** Stop watching. The server-side job is unaffected. */
  cancel(): void {
    if (this.timer === null) {
      return;
    }
    this.stopPolling();
    this.stateBadge.textContent = 'detached';
  }

  /** Prefill the editor from the last started or reattached job. */
  duplicate(): void {
    if (!this.lastSpec) {
      return;
    }
    this.inclusion.value = this.lastSpec.inclusion;
    this.exclusion.value = this.lastSpec.exclusion;
    this.validation.hidden = true;
    this.inclusion.classList.remove('invalid');
    this.exclusion.classList.remove('invalid');
  }

  private async poll(jobId: string): Promise<void> {
    let snapshot: CohortSnapshot;
    try {
      snapshot = await this.api.getCohort(jobId);
    } catch (err) {
      this.stopPolling();
      if (err instanceof ApiError && err.status === 404) {
        this.clearStored(); // job id no longer exists, forget it
      }
      this.showBanner(err instanceof Error ? err.message : 'poll failed');
      return;
    }
    this.renderProgress(snapshot);
    if (snapshot.state === 'done') {
      this.stopPolling();
      this.clearStored();
      this.renderDecisions(snapshot);
    } else if (snapshot.state === 'failed') {
      this.stopPolling();
      this.clearStored();
      this.showBanner(snapshot.error ?? 'job failed');
    }
  }

  private renderProgress(snapshot: CohortSnapshot): void {
    // Progress never moves backwards on screen.
    this.maxDone = Math.max(this.maxDone, snapshot.progress.done);
    const total = snapshot.progress.total;
    this.stateBadge.textContent = snapshot.state;
    this.progressText.textContent = `${this.maxDone}/${total}`;
    const fraction = total > 0 ? this.maxDone / total : 0;
    this.progressBar.style.width = `${(fraction * 100).toFixed(1)}%`;
  }

  private renderDecisions(snapshot: CohortSnapshot): void {
    this.decisionBody.innerHTML = '';
    for (const decision of snapshot.decisions ?? []) {
      const row = document.createElement('tr');
      row.dataset.role = 'decision-row';
      row.dataset.caseNumber = decision.case_number;
      const cells = [
        decision.case_number,
        decisionLabel(decision.decision),
        decision.rationale,
        decision.parse_status,
      ];
      for (const text of cells) {
        const cell = document.createElement('td');
        cell.textContent = text;
        row.append(cell);
      }
      this.decisionBody.append(row);
    }
    const stats = snapshot.stats;
    if (stats) {
      this.statsLine.textContent =
        `${stats.candidates} candidates, ${stats.llm_calls} model calls, ` +
        `${stats.failures} failures, ${stats.seconds.toFixed(2)} s`;
    }
  }

  private validateCriteria(): boolean {
    // Mirrors the service rule: at least one criterion must be non-empty.
    const ok =
      this.inclusion.value.trim() !== '' || this.exclusion.value.trim() !== '';
    if (!ok) {
      this.flagCriteria('enter at least one criterion');
    } else {
      this.validation.hidden = true;
      this.inclusion.classList.remove('invalid');
      this.exclusion.classList.remove('invalid');
    }
    return ok;
  }

  private flagCriteria(message: string): void {
    this.validation.hidden = false;
    this.validation.textContent = message;
    this.inclusion.classList.add('invalid');
    this.exclusion.classList.add('invalid');
  }

  private showBanner(message: string): void {
    this.banner.hidden = false;
    this.banner.textContent = message;
  }

  private hideBanner(): void {
    this.banner.hidden = true;
    this.banner.textContent = '';
  }

  private loadStored(): StoredJob | null {
    if (!this.storage) {
      return null;
    }
    const raw = this.storage.getItem(STORAGE_KEY);
    if (!raw) {
      return null;
    }
    try {
      const parsed = JSON.parse(raw) as StoredJob;
      return typeof parsed.job_id === 'string' ? parsed : null;
    } catch {
      return null;
    }
  }

  private saveStored(job: StoredJob): void {
    this.storage?.setItem(STORAGE_KEY, JSON.stringify(job));
  }

  private clearStored(): void {
    this.storage?.removeItem(STORAGE_KEY);
  }

  private stopPolling(): void {
    if (this.timer !== null) {
      clearInterval(this.timer);
      this.timer = null;
    }
  }
}
