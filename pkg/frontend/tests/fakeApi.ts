import { ApiError } from '../src/api';
import type {
  CohortCreated,
  CohortDecision,
  CohortRequest,
  CohortSnapshot,
  CohortStats,
  EngineApi,
  ReportPayload,
  SearchHit,
  SearchResponse,
  TransformResponse,
} from '../src/types';

export function makeHit(overrides: Partial<SearchHit> = {}): SearchHit {
  return {
    report_id: 'R0000',
    fused: 0.5,
    s_doc: 0.4,
    s_chunk: 0.3,
    s_bm25: 0.2,
    best_chunk_id: 'R0000:0',
    best_chunk_section: 'DIAGNOSIS',
    snippet: 'Invasive carcinoma identified.',
    ...overrides,
  };
}

export function makeSearchResponse(hits: SearchHit[]): SearchResponse {
  return { hits, answer: null, warning: null };
}

export function makeReport(overrides: Partial<ReportPayload> = {}): ReportPayload {
  const gross = 'Specimen received fresh, measuring 3.1 cm.';
  const diagnosis = 'Invasive carcinoma identified. Margins are negative.';
  return {
    report_id: 'R0000',
    text: `${gross}\n${diagnosis}`,
    wsi_id: 'WSI-0000',
    sections: [
      { label: 'GROSS DESCRIPTION', start: 0, end: gross.length, text: gross },
      {
        label: 'DIAGNOSIS',
        start: gross.length + 1,
        end: gross.length + 1 + diagnosis.length,
        text: diagnosis,
      },
    ],
    ...overrides,
  };
}

interface Deferred {
  query: string;
  resolve: (response: SearchResponse) => void;
  reject: (err: unknown) => void;
}

interface StubJob {
  total: number;
  step: number;
  done: number;
  failWith: string | null;
}

function jobDecisions(total: number): CohortDecision[] {
  const decisions: CohortDecision[] = [];
  for (let i = 0; i < total; i++) {
    decisions.push({
      case_number: `R${String(i).padStart(4, '0')}`,
      decision: i % 2,
      rationale: i % 2 ? 'criteria met' : 'criteria not met',
      parse_status: 'ok',
      attempts: 1,
    });
  }
  return decisions;
}

function jobStats(total: number): CohortStats {
  return { llm_calls: total, seconds: 1.5, candidates: total, failures: 0 };
}

/**
 * Scripted stand-in for the REST client. Search answers come from a queue
 * or a per-query map; cohort jobs advance a fixed number of cases on every
 * poll so tests can walk a job from 0 to done deterministically.
 */
export class FakeApi implements EngineApi {
  searchCalls: string[] = [];
  cohortPosts: CohortRequest[] = [];
  getCohortCalls = 0;
  reportCalls: string[] = [];
  transformCalls: Array<{ reportId: string; kind: string }> = [];

  /** Per-query scripted responses; `defaultSearch` answers everything else. */
  scripted = new Map<string, SearchResponse>();
  defaultSearch: SearchResponse = makeSearchResponse([makeHit()]);
  /** When true, search() parks until resolveSearch/rejectSearch is called. */
  manualSearch = false;
  pendingSearches: Deferred[] = [];
  searchError: ApiError | null = null;

  createCohortError: ApiError | null = null;
  jobTotal = 50;
  jobStep = 10;
  private jobs = new Map<string, StubJob>();
  private created = 0;

  reports = new Map<string, ReportPayload>();
  transformError: ApiError | null = null;

  search(query: string): Promise<SearchResponse> {
    this.searchCalls.push(query);
    if (this.manualSearch) {
      return new Promise<SearchResponse>((resolve, reject) => {
        this.pendingSearches.push({ query, resolve, reject });
      });
    }
    if (this.searchError) {
      return Promise.reject(this.searchError);
    }
    return Promise.resolve(this.scripted.get(query) ?? this.defaultSearch);
  }

  resolveSearch(query: string, response: SearchResponse): void {
    const index = this.pendingSearches.findIndex((p) => p.query === query);
    if (index < 0) {
      throw new Error(`no pending search for ${query}`);
    }
    const [pending] = this.pendingSearches.splice(index, 1);
    pending.resolve(response);
  }

  async createCohort(body: CohortRequest): Promise<CohortCreated> {
    this.cohortPosts.push(body);
    if (this.createCohortError) {
      throw this.createCohortError;
    }
    this.created += 1;
    const jobId = `job-${this.created}`;
    this.jobs.set(jobId, {
      total: this.jobTotal,
      step: this.jobStep,
      done: 0,
      failWith: null,
    });
    return { job_id: jobId, state: 'queued' };
  }

  failJob(jobId: string, error: string): void {
    this.job(jobId).failWith = error;
  }

  /** Force the next snapshot to report this done count (stale-poll tests). */
  setJobDone(jobId: string, done: number): void {
    this.job(jobId).done = done;
  }

  private job(jobId: string): StubJob {
    const job = this.jobs.get(jobId);
    if (!job) {
      throw new Error(`no such stub job ${jobId}`);
    }
    return job;
  }

  async getCohort(jobId: string): Promise<CohortSnapshot> {
    this.getCohortCalls += 1;
    const job = this.jobs.get(jobId);
    if (!job) {
      throw new ApiError(404, 'not_found', `unknown job {${jobId}}`);
    }
    if (job.failWith) {
      return {
        job_id: jobId,
        state: 'failed',
        progress: { done: job.done, total: job.total },
        error: job.failWith,
      };
    }
    const snapshot: CohortSnapshot = {
      job_id: jobId,
      state: job.done >= job.total ? 'done' : 'running',
      progress: { done: job.done, total: job.total },
      error: null,
    };
    if (snapshot.state === 'done') {
      snapshot.decisions = jobDecisions(job.total);
      snapshot.stats = jobStats(job.total);
    } else {
      job.done = Math.min(job.total, job.done + job.step);
    }
    return snapshot;
  }

  async getReport(reportId: string): Promise<ReportPayload> {
    this.reportCalls.push(reportId);
    const report = this.reports.get(reportId);
    if (!report) {
      throw new ApiError(404, 'not_found', `unknown report_id {${reportId}}`);
    }
    return report;
  }

  async transform(reportId: string, kind: string): Promise<TransformResponse> {
    this.transformCalls.push({ reportId, kind });
    if (this.transformError) {
      throw this.transformError;
    }
    return { report_id: reportId, kind, text: `${kind} rendering of ${reportId}` };
  }
}
