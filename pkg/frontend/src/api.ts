import type {
  CohortCreated,
  CohortRequest,
  CohortSnapshot,
  EngineApi,
  ReportPayload,
  SearchResponse,
  TransformResponse,
} from './types';

/** Structured failure carrying the server's {code, message} envelope. */
export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly code: string,
    message: string
  ) {
    super(message);
    this.name = 'ApiError';
  }
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiClient implements EngineApi {
  constructor(
    private readonly baseUrl = '',
    private readonly fetchImpl: FetchLike = (input, init) => fetch(input, init),
    private readonly authToken = ''
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const headers: Record<string, string> = { 'content-type': 'application/json' };
    if (this.authToken) {
      headers['authorization'] = `Bearer ${this.authToken}`;
    }
    const resp = await this.fetchImpl(`${this.baseUrl}${path}`, { ...init, headers });
    const body: unknown = await resp.json().catch(() => null);
    if (!resp.ok) {
      const envelope = (body ?? {}) as { code?: unknown; message?: unknown };
      const code = typeof envelope.code === 'string' ? envelope.code : 'http_error';
      const message =
        typeof envelope.message === 'string' ? envelope.message : `HTTP ${resp.status}`;
      throw new ApiError(resp.status, code, message);
    }
    return body as T;
  }

  search(query: string, k = 10): Promise<SearchResponse> {
    return this.request<SearchResponse>('/v1/search', {
      method: 'POST',
      body: JSON.stringify({ query, k }),
    });
  }

  createCohort(body: CohortRequest): Promise<CohortCreated> {
    return this.request<CohortCreated>('/v1/cohorts', {
      method: 'POST',
      body: JSON.stringify(body),
    });
  }

  getCohort(jobId: string): Promise<CohortSnapshot> {
    return this.request<CohortSnapshot>(`/v1/cohorts/${encodeURIComponent(jobId)}`);
  }

  getReport(reportId: string): Promise<ReportPayload> {
    return this.request<ReportPayload>(`/v1/reports/${encodeURIComponent(reportId)}`);
  }

  transform(reportId: string, kind: string): Promise<TransformResponse> {
    return this.request<TransformResponse>('/v1/transform', {
      method: 'POST',
      body: JSON.stringify({ report_id: reportId, kind }),
    });
  }
}
