/** Payload shapes of the engine's REST API, mirrored field for field. */

export interface SearchHit {
  report_id: string;
  fused: number;
  s_doc: number;
  s_chunk: number;
  s_bm25: number;
  best_chunk_id: string | null;
  best_chunk_section: string | null;
  snippet: string;
}

export interface SearchResponse {
  hits: SearchHit[];
  answer: string | null;
  warning: string | null;
}

export interface ReportSection {
  label: string;
  start: number;
  end: number;
  text: string;
}

export interface ReportPayload {
  report_id: string;
  text: string;
  wsi_id: string | null;
  sections: ReportSection[];
}

export interface CohortDecision {
  case_number: string;
  decision: number | null;
  rationale: string;
  parse_status: string;
  attempts: number;
}

export interface CohortStats {
  llm_calls: number;
  seconds: number;
  candidates: number;
  failures: number;
}

export interface CohortSnapshot {
  job_id: string;
  state: 'queued' | 'running' | 'done' | 'failed';
  progress: { done: number; total: number };
  error: string | null;
  decisions?: CohortDecision[];
  stats?: CohortStats;
}

export interface PrefilterRequest {
  query: string;
  threshold: number;
}

export interface CohortRequest {
  inclusion_criteria: string;
  exclusion_criteria: string;
  prefilter?: PrefilterRequest | null;
}

export interface CohortCreated {
  job_id: string;
  state: string;
}

export interface TransformResponse {
  report_id: string;
  kind: string;
  text: string;
}

export const TRANSFORM_KINDS = [
  'synoptic',
  'clinical_summary',
  'oncologist',
  'tumor_board',
  'patient_friendly',
] as const;

export type TransformKind = (typeof TRANSFORM_KINDS)[number];

/** The only surface the console talks to; no direct index access. */
export interface EngineApi {
  search(query: string, k?: number): Promise<SearchResponse>;
  createCohort(body: CohortRequest): Promise<CohortCreated>;
  getCohort(jobId: string): Promise<CohortSnapshot>;
  getReport(reportId: string): Promise<ReportPayload>;
  transform(reportId: string, kind: string): Promise<TransformResponse>;
}
