/**
 * Typed client for the evaluation service HTTP API.  The UI talks to the
 * service only through this module, and payloads are transmitted exactly as
 * entered -- no client-side score transformation.
 */

export type TaskType = "highlight" | "content" | "content_nohl" | "fluency" | "clarity";

export interface QualityItem {
  item_id: string;
  text: string;
}

export interface TaskPayload {
  task_id: string;
  type: TaskType;
  doc_id?: string;
  budget_k?: number;
  sanity_statement?: string;
  summary_id?: string;
  summary_text?: string;
  heatmap?: number[];
  metric?: string;
  items?: QualityItem[];
}

export type NextTaskResponse =
  | { status: "ok"; task: TaskPayload }
  | { status: "exhausted" };

export interface HighlightSubmission {
  judge_id: string;
  task_id: string;
  spans: [number, number][];
  sanity_answer: boolean;
}

export interface ContentSubmission {
  judge_id: string;
  task_id: string;
  scores: { content_precision: number; content_recall: number };
  sanity_answer: boolean;
  metadata?: Record<string, unknown>;
}

export interface QualitySubmission {
  judge_id: string;
  task_id: string;
  scores: Record<string, number>;
  metadata?: Record<string, unknown>;
}

export type Submission = HighlightSubmission | ContentSubmission | QualitySubmission;

export type SubmitResponse =
  | { status: "accepted" }
  | { status: "rejected"; reason: string };

export interface DocumentToken {
  surface: string;
  char_start: number;
  char_end: number;
}

export interface DocumentPayload {
  doc_id: string;
  raw: string;
  tokens: DocumentToken[];
  sentence_bounds: [number, number][];
  heatmap: number[];
  n_annotators: number;
}

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly detail: string,
  ) {
    super(`service error ${status}: ${detail}`);
  }
}

type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  private readonly base: string;
  private readonly fetchImpl: FetchLike;

  constructor(baseUrl: string, fetchImpl?: FetchLike) {
    this.base = baseUrl.replace(/\/+$/, "");
    this.fetchImpl = fetchImpl ?? ((input, init) => fetch(input, init));
  }

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await this.fetchImpl(`${this.base}${path}`, init);
    if (!response.ok) {
      let detail = response.statusText;
      try {
        const body = (await response.json()) as { detail?: string };
        if (body.detail) detail = body.detail;
      } catch {
        // non-JSON error body; keep the status text
      }
      throw new ApiError(response.status, detail);
    }
    return (await response.json()) as T;
  }

  nextTask(judge: string, type: TaskType): Promise<NextTaskResponse> {
    const query = new URLSearchParams({ judge, type });
    return this.request(`/api/tasks/next?${query}`);
  }

  submit(payload: Submission): Promise<SubmitResponse> {
    return this.request("/api/submissions", {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(payload),
    });
  }

  document(docId: string): Promise<DocumentPayload> {
    return this.request(`/api/documents/${encodeURIComponent(docId)}`);
  }

  async reportCsv(section: "content" | "quality" | "hrouge"): Promise<string> {
    const response = await this.fetchImpl(`${this.base}/api/reports/${section}?format=csv`);
    if (!response.ok) throw new ApiError(response.status, response.statusText);
    return response.text();
  }
}
