/**
 * Typed client for the textfactor labeling service.
 *
 * Every score-bearing response carries `snapshot_pass`, the training pass
 * of the model snapshot that produced it; the UI keeps that number next
 * to the scores it renders and never mixes snapshots within one view.
 */

export interface CorpusSummary {
  m: number;
  added_texts: number;
  n1: number;
  vocab_size: number;
  warning?: string;
}

export interface LabelInfo {
  label_id: number;
  name: string;
  created_at: number;
  owner: string;
}

export interface ScoreEntry {
  label_id: number;
  name: string;
  score: number;
  annotated: 0 | 1 | null;
}

export interface TextScores {
  row_id: number;
  raw: string;
  snapshot_pass: number;
  scores: ScoreEntry[];
}

export interface RankedText {
  row_id: number;
  score: number;
  rank: number;
  raw: string;
}

export interface TopTexts {
  label_id: number;
  snapshot_pass: number;
  items: RankedText[];
}

export interface AnnotationAck {
  row_id: number;
  label_id: number;
  value: 0 | 1;
  refreshed: boolean;
  snapshot_pass: number;
  scores: ScoreEntry[];
}

export type TrainingState = "idle" | "training" | "converged";

export interface ServiceStatus {
  state: TrainingState;
  total_passes: number;
  snapshot_pass: number;
  last_val_rmse: number | null;
  queue_depth: number;
  m: number;
  n1: number;
  n2: number;
  active_labels: number;
  observed_cells: number;
}

export class ApiError extends Error {
  constructor(readonly status: number, detail: string) {
    super(detail);
    this.name = "ApiError";
  }
}

/** The surface the store depends on; ApiClient is the HTTP implementation. */
export interface Api {
  importCorpus(payload: string, format?: "text" | "csv",
               textColumn?: string): Promise<CorpusSummary>;
  listLabels(): Promise<LabelInfo[]>;
  createLabel(name: string): Promise<LabelInfo>;
  deleteLabel(labelId: number): Promise<void>;
  annotate(rowId: number, labelId: number, value: 0 | 1): Promise<AnnotationAck>;
  topTexts(labelId: number, limit?: number,
           includeAnnotated?: boolean): Promise<TopTexts>;
  textScores(rowId: number): Promise<TextScores>;
  exportCsv(labelIds?: number[]): Promise<string>;
  status(): Promise<ServiceStatus>;
}

export class ApiClient implements Api {
  constructor(private readonly baseUrl: string = "",
              private readonly fetchFn: typeof fetch = fetch) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await this.fetchFn(`${this.baseUrl}${path}`, init);
    if (!response.ok) {
      let detail = `${response.status} ${response.statusText}`;
      try {
        const body = (await response.json()) as { detail?: unknown };
        if (body && body.detail !== undefined) detail = String(body.detail);
      } catch {
        // non-JSON error body; keep the status line
      }
      throw new ApiError(response.status, detail);
    }
    return (await response.json()) as T;
  }

  private post<T>(path: string, body: unknown): Promise<T> {
    return this.request<T>(path, {
      method: "POST",
      headers: { "content-type": "application/json" },
      body: JSON.stringify(body),
    });
  }

  importCorpus(payload: string, format: "text" | "csv" = "text",
               textColumn?: string): Promise<CorpusSummary> {
    return this.post<CorpusSummary>("/corpus", {
      payload,
      format,
      text_column: textColumn ?? null,
    });
  }

  listLabels(): Promise<LabelInfo[]> {
    return this.request<LabelInfo[]>("/labels");
  }

  createLabel(name: string): Promise<LabelInfo> {
    return this.post<LabelInfo>("/labels", { name });
  }

  async deleteLabel(labelId: number): Promise<void> {
    await this.request<unknown>(`/labels/${labelId}`, { method: "DELETE" });
  }

  annotate(rowId: number, labelId: number, value: 0 | 1): Promise<AnnotationAck> {
    return this.post<AnnotationAck>("/annotations", {
      row_id: rowId,
      label_id: labelId,
      value,
    });
  }

  topTexts(labelId: number, limit = 50,
           includeAnnotated = false): Promise<TopTexts> {
    const params = new URLSearchParams({
      limit: String(limit),
      include_annotated: String(includeAnnotated),
    });
    return this.request<TopTexts>(`/labels/${labelId}/top?${params}`);
  }

  textScores(rowId: number): Promise<TextScores> {
    return this.request<TextScores>(`/texts/${rowId}/scores`);
  }

  async exportCsv(labelIds?: number[]): Promise<string> {
    const query = labelIds && labelIds.length
      ? `?labels=${labelIds.join(",")}`
      : "";
    const response = await this.fetchFn(`${this.baseUrl}/export${query}`);
    if (!response.ok) {
      throw new ApiError(response.status, `export failed: ${response.status}`);
    }
    return response.text();
  }

  status(): Promise<ServiceStatus> {
    return this.request<ServiceStatus>("/status");
  }
}
