/**
 * DOM panels: label management (left), import/export (top), text
 * exploration with annotate buttons (main), and the training banner.
 *
 * Rendering is a full redraw of each dynamic region on store change;
 * the corpus sizes this UI targets keep that well under a frame.
 */

import type {RankedText} from "./api.js";
import type {AppStore, ViewState} from "./state.js";
import {describeState} from "./state.js";

const SCORE_CUE_THRESHOLD = 0.5;

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K, className?: string, text?: string): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

export function renderApp(root: HTMLElement, store: AppStore): void {
  root.innerHTML = "";
  const banner = el("div", "tf-banner");
  const error = el("div", "tf-error");
  const topPanel = el("section", "tf-import");
  const layout = el("div", "tf-layout");
  const labelPanel = el("aside", "tf-labels");
  const explorePanel = el("main", "tf-explore");
  layout.append(labelPanel, explorePanel);
  root.append(banner, error, topPanel, layout);

  renderImportPanel(topPanel, store);
  store.subscribe((state) => {
    renderBanner(banner, state);
    renderError(error, store, state);
    renderLabelPanel(labelPanel, store, state);
    renderExplorePanel(explorePanel, store, state);
  });
  void store.refreshLabels();
  void store.refreshStatus();
}

function renderBanner(node: HTMLElement, state: ViewState): void {
  node.innerHTML = "";
  const status = state.status;
  node.append(el("strong", undefined, "textfactor"));
  if (!status) return;
  node.append(el("span", "tf-status",
                 describeState(status.state, status.total_passes)));
  node.append(el("span", "tf-dims",
                 `${status.m} texts · ${status.n1} n-grams · `
                 + `${status.active_labels} labels`));
  if (status.queue_depth > 0 || state.pendingAnnotations > 0) {
    node.append(el("span", "tf-queue",
                   `${state.pendingAnnotations} pending corrections`));
  }
}

function renderError(node: HTMLElement, store: AppStore,
                     state: ViewState): void {
  node.innerHTML = "";
  if (!state.error) {
    node.style.display = "none";
    return;
  }
  node.style.display = "block";
  node.append(el("span", undefined, state.error));
  const dismiss = el("button", "tf-dismiss", "dismiss");
  dismiss.addEventListener("click", () => store.clearError());
  node.append(dismiss);
}

function renderImportPanel(node: HTMLElement, store: AppStore): void {
  const textarea = el("textarea", "tf-paste");
  textarea.placeholder = "paste texts, one per line";
  textarea.rows = 3;
  const importButton = el("button", undefined, "import texts");
  importButton.addEventListener("click", () => {
    if (textarea.value.trim()) {
      void store.importText(textarea.value).then(() => {
        textarea.value = "";
        renderSummary();
      });
    }
  });
  const exportLink = el("a", "tf-export", "export CSV");
  const summary = el("span", "tf-import-summary");
  const renderSummary = () => {
    const last = store.state.lastImport;
    summary.textContent = last
      ? `${last.added_texts} texts imported (vocabulary ${last.vocab_size})`
        + (last.warning ? ` — ${last.warning}` : "")
      : "";
    exportLink.setAttribute("href", store.exportPath());
  };
  store.subscribe(renderSummary);
  node.append(textarea, importButton, exportLink, summary);
}

function renderLabelPanel(node: HTMLElement, store: AppStore,
                          state: ViewState): void {
  node.innerHTML = "";
  node.append(el("h2", undefined, "labels"));
  const list = el("ul", "tf-label-list");
  for (const label of state.labels) {
    const item = el("li",
                    label.label_id === state.selectedLabel ? "selected" : "");
    const pick = el("button", "tf-label-name", label.name);
    pick.disabled = label.label_id < 0; // optimistic placeholder
    pick.addEventListener("click", () => void store.selectLabel(label.label_id));
    const remove = el("button", "tf-label-delete", "×");
    remove.title = `delete ${label.name}`;
    remove.addEventListener("click", () => void store.removeLabel(label.label_id));
    item.append(pick, remove);
    list.append(item);
  }
  node.append(list);

  const form = el("div", "tf-label-form");
  const input = el("input");
  input.placeholder = "new label";
  const add = el("button", undefined, "add");
  const submit = () => {
    const name = input.value.trim();
    if (name) {
      void store.addLabel(name).then((created) => {
        if (created) {
          input.value = "";
          void store.selectLabel(created.label_id);
        }
      });
    }
  };
  add.addEventListener("click", submit);
  input.addEventListener("keydown", (event) => {
    if ((event as KeyboardEvent).key === "Enter") submit();
  });
  form.append(input, add);
  node.append(form);
}

function renderExplorePanel(node: HTMLElement, store: AppStore,
                            state: ViewState): void {
  node.innerHTML = "";
  if (state.selectedLabel === null) {
    node.append(el("p", "tf-hint",
                   "select a label to explore ranked texts"));
    return;
  }
  const header = el("div", "tf-explore-header");
  header.append(el("h2", undefined, "ranked texts"));
  if (state.itemsSnapshotPass !== null) {
    header.append(el("span", "tf-snapshot",
                     `snapshot pass ${state.itemsSnapshotPass}`));
  }
  if (state.rankingStale) {
    header.append(el("span", "tf-refreshing", "refreshing…"));
  }
  const toggle = el("label", "tf-toggle");
  const checkbox = el("input");
  checkbox.type = "checkbox";
  checkbox.checked = state.includeAnnotated;
  checkbox.addEventListener("change",
                            () => void store.setIncludeAnnotated(checkbox.checked));
  toggle.append(checkbox, document.createTextNode(" show annotated"));
  header.append(toggle);
  node.append(header);

  const table = el("table", "tf-table");
  for (const item of state.items) {
    table.append(renderRow(item, store));
  }
  node.append(table);
}

function renderRow(item: RankedText, store: AppStore): HTMLTableRowElement {
  const row = document.createElement("tr");
  row.dataset["rowId"] = String(item.row_id);
  const rank = el("td", "tf-rank", String(item.rank));
  const score = el("td",
                   item.score >= SCORE_CUE_THRESHOLD
                     ? "tf-score above"
                     : "tf-score below",
                   item.score.toFixed(3));
  const text = el("td", "tf-text", item.raw);
  const actions = el("td", "tf-actions");
  const positive = el("button", "tf-plus", "+");
  positive.title = "annotate positively";
  positive.addEventListener("click",
                            () => void store.annotate(item.row_id, 1));
  const negative = el("button", "tf-minus", "−");
  negative.title = "annotate negatively";
  negative.addEventListener("click",
                            () => void store.annotate(item.row_id, 0));
  actions.append(positive, negative);
  row.append(rank, score, text, actions);
  return row;
}
