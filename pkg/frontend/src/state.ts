/**
 * View state and actions behind the three panels.
 *
 * Invariants the store maintains:
 * - rendered scores always travel with the `snapshot_pass` they came from;
 * - at most one annotation request is in flight per (row, label), rapid
 *   re-clicks coalesce to the latest value and never double-submit;
 * - an optimistically inserted label is rolled back if the server
 *   rejects it (duplicate name).
 */

import type {Api, CorpusSummary, LabelInfo, RankedText, ServiceStatus,
             TrainingState} from "./api.js";
import {ApiError} from "./api.js";

export interface ViewState {
  labels: LabelInfo[];
  selectedLabel: number | null;
  items: RankedText[];
  itemsSnapshotPass: number | null;
  includeAnnotated: boolean;
  rankingStale: boolean;
  status: ServiceStatus | null;
  lastImport: CorpusSummary | null;
  pendingAnnotations: number;
  busy: boolean;
  error: string | null;
}

type Listener = (state: ViewState) => void;

const RANK_LIMIT = 50;

export class AppStore {
  readonly state: ViewState = {
    labels: [],
    selectedLabel: null,
    items: [],
    itemsSnapshotPass: null,
    includeAnnotated: false,
    rankingStale: false,
    status: null,
    lastImport: null,
    pendingAnnotations: 0,
    busy: false,
    error: null,
  };

  private listeners: Listener[] = [];
  private inFlight = new Map<string, 0 | 1>();
  private queued = new Map<string, 0 | 1>();
  private pollTimer: ReturnType<typeof setInterval> | null = null;

  constructor(private readonly api: Api) {}

  subscribe(listener: Listener): () => void {
    this.listeners.push(listener);
    return () => {
      this.listeners = this.listeners.filter((l) => l !== listener);
    };
  }

  private emit(): void {
    for (const listener of this.listeners) listener(this.state);
  }

  private fail(err: unknown): void {
    this.state.error = err instanceof Error ? err.message : String(err);
    this.emit();
  }

  clearError(): void {
    this.state.error = null;
    this.emit();
  }

  // ---- corpus ----------------------------------------------------------

  async importText(payload: string, format: "text" | "csv" = "text",
                   textColumn?: string): Promise<void> {
    this.state.busy = true;
    this.state.error = null;
    this.emit();
    try {
      this.state.lastImport = await this.api.importCorpus(payload, format,
                                                          textColumn);
      await this.refreshStatus();
      if (this.state.selectedLabel !== null) await this.refreshRanking();
    } catch (err) {
      this.fail(err);
    } finally {
      this.state.busy = false;
      this.emit();
    }
  }

  // ---- labels ----------------------------------------------------------

  async refreshLabels(): Promise<void> {
    try {
      this.state.labels = await this.api.listLabels();
      this.emit();
    } catch (err) {
      this.fail(err);
    }
  }

  async addLabel(name: string): Promise<LabelInfo | null> {
    // optimistic insert; rolled back when the server reports a conflict
    const placeholder: LabelInfo = {
      label_id: -1,
      name,
      created_at: Date.now() / 1000,
      owner: "pending",
    };
    this.state.labels = [...this.state.labels, placeholder];
    this.state.error = null;
    this.emit();
    try {
      const created = await this.api.createLabel(name);
      this.state.labels = this.state.labels.map(
        (l) => (l === placeholder ? created : l));
      this.emit();
      return created;
    } catch (err) {
      this.state.labels = this.state.labels.filter((l) => l !== placeholder);
      if (err instanceof ApiError && err.status === 409) {
        this.state.error = `label "${name}" already exists`;
        this.emit();
      } else {
        this.fail(err);
      }
      return null;
    }
  }

  async removeLabel(labelId: number): Promise<void> {
    try {
      await this.api.deleteLabel(labelId);
      this.state.labels = this.state.labels.filter(
        (l) => l.label_id !== labelId);
      if (this.state.selectedLabel === labelId) {
        this.state.selectedLabel = null;
        this.state.items = [];
        this.state.itemsSnapshotPass = null;
      }
      this.emit();
    } catch (err) {
      this.fail(err);
    }
  }

  // ---- ranking ---------------------------------------------------------

  async selectLabel(labelId: number | null): Promise<void> {
    this.state.selectedLabel = labelId;
    this.state.items = [];
    this.state.itemsSnapshotPass = null;
    this.emit();
    if (labelId !== null) await this.refreshRanking();
  }

  async setIncludeAnnotated(include: boolean): Promise<void> {
    this.state.includeAnnotated = include;
    if (this.state.selectedLabel !== null) await this.refreshRanking();
    else this.emit();
  }

  async refreshRanking(): Promise<void> {
    const labelId = this.state.selectedLabel;
    if (labelId === null) return;
    try {
      const top = await this.api.topTexts(labelId, RANK_LIMIT,
                                          this.state.includeAnnotated);
      // a slow response for a previously selected label must not clobber
      if (this.state.selectedLabel !== labelId) return;
      this.state.items = top.items;
      this.state.itemsSnapshotPass = top.snapshot_pass;
      this.state.rankingStale = false;
      this.emit();
    } catch (err) {
      this.fail(err);
    }
  }

  // ---- annotations -----------------------------------------------------

  async annotate(rowId: number, value: 0 | 1,
                 labelId?: number): Promise<void> {
    const label = labelId ?? this.state.selectedLabel;
    if (label === null || label === undefined) return;
    const key = `${rowId}:${label}`;
    if (this.inFlight.has(key)) {
      // coalesce: remember only the latest intent for this cell
      this.queued.set(key, value);
      this.emit();
      return;
    }
    await this.send(key, rowId, label, value);
  }

  private async send(key: string, rowId: number, label: number,
                     value: 0 | 1): Promise<void> {
    this.inFlight.set(key, value);
    this.state.pendingAnnotations = this.inFlight.size + this.queued.size;
    this.emit();
    try {
      const ack = await this.api.annotate(rowId, label, value);
      this.state.rankingStale = !ack.refreshed;
    } catch (err) {
      this.fail(err);
    } finally {
      this.inFlight.delete(key);
    }
    const queuedValue = this.queued.get(key);
    this.queued.delete(key);
    if (queuedValue !== undefined && queuedValue !== value) {
      await this.send(key, rowId, label, queuedValue);
      return;
    }
    this.state.pendingAnnotations = this.inFlight.size + this.queued.size;
    if (this.inFlight.size === 0 && this.queued.size === 0) {
      await this.refreshRanking();
    }
    this.emit();
  }

  // ---- status polling --------------------------------------------------

  async refreshStatus(): Promise<void> {
    try {
      const previous = this.state.status;
      this.state.status = await this.api.status();
      // new training passes mean the ranking scores may be outdated
      if (previous
          && this.state.status.snapshot_pass !== previous.snapshot_pass
          && this.state.itemsSnapshotPass !== null
          && this.state.status.snapshot_pass !== this.state.itemsSnapshotPass) {
        this.state.rankingStale = true;
      }
      this.emit();
    } catch (err) {
      this.fail(err);
    }
  }

  startPolling(intervalMs = 1000): void {
    this.stopPolling();
    this.pollTimer = setInterval(() => {
      void this.refreshStatus();
    }, intervalMs);
  }

  stopPolling(): void {
    if (this.pollTimer !== null) {
      clearInterval(this.pollTimer);
      this.pollTimer = null;
    }
  }

  // ---- export ----------------------------------------------------------

  exportPath(labelIds?: number[]): string {
    const ids = labelIds ?? (this.state.selectedLabel !== null
      ? [this.state.selectedLabel]
      : undefined);
    return ids && ids.length ? `/export?labels=${ids.join(",")}` : "/export";
  }
}

export function describeState(state: TrainingState,
                               passes: number): string {
  switch (state) {
    case "training":
      return `training (pass ${passes})`;
    case "converged":
      return `converged after ${passes} passes`;
    default:
      return "idle";
  }
}
