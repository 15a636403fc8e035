"""Interactive labeling session: the live state behind the HTTP service.

A session owns one corpus, its vocabulary and observation store, a label
registry, an append-only annotation log, and the factor model. Training
runs on a single background worker that owns all model mutation; API-side
readers only ever see immutable snapshots published at pass boundaries.
User corrections are enqueued to the worker, applied as bounded local
refreshes between passes, and acknowledged within a configurable wait.
"""

from __future__ import annotations

import csv
import io
import json
import queue
import threading
import time
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Iterable, Optional, Sequence

import numpy as np

from . import engine, ranking
from .datasets import ParseError, parse_csv_corpus, parse_text_corpus
from .engine import FactorModel, HyperParams
from .featurize import NGramVocab, TextDoc, encode
from .store import ObservationStore

FORMAT_VERSION = 1

IDLE = "idle"
TRAINING = "training"
CONVERGED = "converged"


class NotFoundError(KeyError):
    """Unknown row, label or session resource."""


class ConflictError(ValueError):
    """Uniqueness violation, e.g. a duplicate label name."""


class PayloadTooLargeError(ValueError):
    """Import payload exceeds the configured limit."""


class MigrationError(RuntimeError):
    """Persisted session format is not readable by this version."""


@dataclass
class LabelDef:
    """One user-defined label; its id doubles as the store's label index."""

    label_id: int
    name: str
    created_at: float
    owner: str = "default"
    retired: bool = False


@dataclass
class AnnotationEvent:
    """Append-only record of one user annotation."""

    seq: int
    row_id: int
    label_id: int
    value: int
    timestamp: float
    supersedes: Optional[int] = None


@dataclass
class LabelDeletion:
    """Tombstone: all cells of this label were dropped at this point."""

    seq: int
    label_id: int
    timestamp: float


@dataclass
class SessionStatus:
    state: str
    total_passes: int
    snapshot_pass: int
    last_val_rmse: Optional[float]
    queue_depth: int
    m: int
    n1: int
    n2: int
    active_labels: int
    observed_cells: int


class Session:
    """Single-tenant labeling session with a background training worker.

    With ``start_worker=False`` everything runs synchronously in the
    calling thread (imports do not auto-train; call :meth:`run_training`),
    which is the deterministic mode used by batch jobs and tests.
    """

    def __init__(self, hp: Optional[HyperParams] = None, min_count: int = 2,
                 namespace: str = "default", data_dir: Optional[str | Path] = None,
                 correction_timeout: float = 2.0,
                 max_payload_bytes: int = 64_000_000,
                 start_worker: bool = True) -> None:
        self.hp = hp or HyperParams()
        self.namespace = namespace
        self.data_dir = Path(data_dir) if data_dir is not None else None
        self.correction_timeout = correction_timeout
        self.max_payload_bytes = max_payload_bytes

        self.corpus: list[TextDoc] = []
        self.vocab = NGramVocab(min_count=min_count)
        self.store = ObservationStore(0, 0, 0)
        self.labels: dict[int, LabelDef] = {}
        self.events: list[AnnotationEvent | LabelDeletion] = []

        self._model: Optional[FactorModel] = None
        self._snapshot: Optional[tuple[np.ndarray, np.ndarray, int]] = None
        self._lock = threading.RLock()
        self._snap_lock = threading.Lock()
        self._state = IDLE
        self._generation = 0
        self._total_passes = 0
        self._last_val_rmse: Optional[float] = None
        self._struct_rng = np.random.default_rng(
            np.random.SeedSequence([self.hp.seed, 1]))
        self._train_rng = np.random.default_rng(
            np.random.SeedSequence([self.hp.seed, 2]))

        self._queue: queue.Queue = queue.Queue()
        self._worker: Optional[threading.Thread] = None
        if start_worker:
            self._worker = threading.Thread(target=self._worker_loop,
                                            name="textfactor-trainer",
                                            daemon=True)
            self._worker.start()

    # -- lifecycle -------------------------------------------------------

    def close(self) -> None:
        if self._worker is not None:
            self._queue.put(("stop",))
            self._worker.join(timeout=30)
            self._worker = None

    def __enter__(self) -> "Session":
        return self

    def __exit__(self, *exc) -> None:
        self.close()

    # -- corpus ----------------------------------------------------------

    def import_corpus(self, payload: str, fmt: str = "text",
                      text_column: Optional[str] = None) -> dict:
        """Add texts, extend the vocabulary, and kick off (re)training.

        Row ids continue from the current corpus; existing rows are
        re-encoded because a new batch can push old n-grams over the
        frequency threshold. Surviving factors are kept, new rows and
        columns get fresh random ones.
        """
        if len(payload.encode("utf-8")) > self.max_payload_bytes:
            raise PayloadTooLargeError(
                f"payload exceeds {self.max_payload_bytes} bytes")
        with self._lock:
            offset = len(self.corpus)
            if fmt == "text":
                new_docs = parse_text_corpus(payload)
            elif fmt == "csv":
                if not text_column:
                    raise ParseError("<csv>", 1, "text_column is required for CSV")
                new_docs = parse_csv_corpus(payload, text_column)
            else:
                raise ValueError(f"unknown corpus format {fmt!r}")
            if not new_docs:
                raise ParseError("<payload>", 1, "empty corpus payload")
            for doc in new_docs:
                doc.row_id += offset
            self.corpus.extend(new_docs)
            added_cols = self.vocab.extend(new_docs)

            old_n1 = self.store.n1
            self.store.add_rows(len(new_docs))
            self.store.widen_features(self.vocab.n1)
            to_encode = self.corpus if added_cols else new_docs
            for doc in to_encode:
                self.store.set_features(doc.row_id, encode(doc, self.vocab))

            self._rebuild_model(old_m=offset, old_n1=old_n1)
            self._generation += 1
            summary = {
                "m": self.store.m,
                "added_texts": len(new_docs),
                "n1": self.store.n1,
                "vocab_size": self.vocab.n1,
            }
            if self.vocab.n1 == 0:
                summary["warning"] = ("no n-gram reached the frequency "
                                      "threshold; rows have no feature cells")
        self._request_training()
        return summary

    def _rebuild_model(self, old_m: int, old_n1: int) -> None:
        """Resize factors after corpus growth, keeping what was learned."""
        m, n = self.store.m, self.store.n
        if m < 1 or n < 1:
            return
        hp = self.hp
        fresh = engine.FactorModel(
            row_factors=self._struct_rng.uniform(-hp.init_scale, hp.init_scale,
                                                 (m, hp.k)),
            col_factors=self._struct_rng.uniform(-hp.init_scale, hp.init_scale,
                                                 (n, hp.k)),
        )
        old = self._model
        if old is not None:
            fresh.row_factors[:old_m] = old.row_factors[:old_m]
            fresh.col_factors[:old_n1] = old.col_factors[:old_n1]
            # label columns sit after the feature block and may have shifted
            n2 = self.store.n2
            if n2:
                fresh.col_factors[self.store.n1:] = old.col_factors[old_n1:old_n1 + n2]
        self._model = fresh
        self._publish(fresh)

    # -- labels ------------------------------------------------------------

    def create_label(self, name: str) -> LabelDef:
        with self._lock:
            name = name.strip()
            if not name:
                raise ValueError("label name must be non-empty")
            for label in self.labels.values():
                if not label.retired and label.name == name:
                    raise ConflictError(f"label {name!r} already exists")
            label_id = self.store.add_label()
            label = LabelDef(label_id=label_id, name=name,
                             created_at=time.time(), owner=self.namespace)
            self.labels[label_id] = label
            self._widen_model_for_label()
            self._generation += 1
        return label

    def delete_label(self, label_id: int) -> None:
        """Retire the label: cells dropped, column id never reused."""
        with self._lock:
            label = self._get_label(label_id)
            label.retired = True
            self.store.clear_label(label_id)
            self.events.append(LabelDeletion(seq=len(self.events),
                                             label_id=label_id,
                                             timestamp=time.time()))
            self._generation += 1
        self._request_training()

    def list_labels(self) -> list[LabelDef]:
        with self._lock:
            return [l for l in self.labels.values() if not l.retired]

    def _get_label(self, label_id: int) -> LabelDef:
        label = self.labels.get(label_id)
        if label is None or label.retired:
            raise NotFoundError(f"unknown label id {label_id}")
        return label

    def _widen_model_for_label(self) -> None:
        if self._model is None:
            if self.store.m >= 1 and self.store.n >= 1:
                self._rebuild_model(old_m=self.store.m, old_n1=self.store.n1)
            return
        hp = self.hp
        new_col = self._struct_rng.uniform(-hp.init_scale, hp.init_scale,
                                           (1, hp.k))
        self._model = engine.FactorModel(
            row_factors=self._model.row_factors.copy(),
            col_factors=np.vstack([self._model.col_factors, new_col]),
        )
        self._publish(self._model)

    # -- annotations -------------------------------------------------------

    def annotate(self, row_id: int, label_id: int, value: int) -> dict:
        """Record one positive/negative annotation and refresh its row.

        The event is applied to the store before this call returns. The
        model refresh happens on the worker; the acknowledgment waits for
        it up to ``correction_timeout`` seconds and flags stale scores.
        """
        if value not in (0, 1):
            raise ValueError(f"annotation value must be 0 or 1, got {value!r}")
        with self._lock:
            self._get_label(label_id)
            if not 0 <= row_id < self.store.m:
                raise NotFoundError(f"unknown row id {row_id}")
            supersedes = None
            for ev in reversed(self.events):
                if (isinstance(ev, AnnotationEvent) and ev.row_id == row_id
                        and ev.label_id == label_id):
                    supersedes = ev.seq
                    break
            event = AnnotationEvent(seq=len(self.events), row_id=row_id,
                                    label_id=label_id, value=value,
                                    timestamp=time.time(),
                                    supersedes=supersedes)
            self.events.append(event)
            self.store.set_label(row_id, label_id, value)

        if self._worker is None:
            with self._lock:
                engine.apply_correction(self._model, self.store, row_id,
                                        label_id, value, self.hp,
                                        rng=self._train_rng)
                self._publish(self._model)
            refreshed = True
        else:
            done = threading.Event()
            self._queue.put(("correct", row_id, label_id, value, done))
            refreshed = done.wait(timeout=self.correction_timeout)
        view = self.text_scores(row_id)
        return {
            "row_id": row_id,
            "label_id": label_id,
            "value": value,
            "refreshed": refreshed,
            "snapshot_pass": view["snapshot_pass"],
            "scores": view["scores"],
        }

    def fold_annotation_log(self) -> dict[tuple[int, int], int]:
        """Replay the event log to its effective (row, label) -> value map."""
        cells: dict[tuple[int, int], int] = {}
        for ev in self.events:
            if isinstance(ev, AnnotationEvent):
                cells[(ev.row_id, ev.label_id)] = ev.value
            else:
                cells = {key: v for key, v in cells.items()
                         if key[1] != ev.label_id}
        return cells

    # -- queries -----------------------------------------------------------

    def snapshot_model(self) -> tuple[Optional[FactorModel], int]:
        """Latest published (immutable) model and its pass number."""
        with self._snap_lock:
            if self._snapshot is None:
                return None, 0
            row_f, col_f, pass_no = self._snapshot
            return FactorModel(row_f, col_f), pass_no

    def top_texts(self, label_id: int, limit: int = 1000,
                  include_annotated: bool = False) -> dict:
        with self._lock:
            self._get_label(label_id)
            model, pass_no = self.snapshot_model()
            if model is None:
                return {"label_id": label_id, "snapshot_pass": 0, "items": []}
            items = ranking.top_texts_for_label(model, self.store, label_id,
                                                limit=limit,
                                                include_annotated=include_annotated)
            return {
                "label_id": label_id,
                "snapshot_pass": pass_no,
                "items": [
                    {"row_id": it.item_id, "score": it.score, "rank": it.rank,
                     "raw": self.corpus[it.item_id].raw}
                    for it in items
                ],
            }

    def text_scores(self, row_id: int) -> dict:
        with self._lock:
            if not 0 <= row_id < self.store.m:
                raise NotFoundError(f"unknown row id {row_id}")
            model, pass_no = self.snapshot_model()
            scores = []
            active = sorted(l.label_id for l in self.labels.values()
                            if not l.retired)
            if model is not None and active:
                block = ranking.full_label_block(model, self.store, [row_id])[0]
            for label_id in active:
                scores.append({
                    "label_id": label_id,
                    "name": self.labels[label_id].name,
                    "score": float(block[label_id]) if model is not None else 0.0,
                    "annotated": self.store.get_label(row_id, label_id),
                })
            return {"row_id": row_id, "raw": self.corpus[row_id].raw,
                    "snapshot_pass": pass_no, "scores": scores}

    def status(self) -> SessionStatus:
        with self._lock:
            _, pass_no = self.snapshot_model()
            return SessionStatus(
                state=self._state,
                total_passes=self._total_passes,
                snapshot_pass=pass_no,
                last_val_rmse=self._last_val_rmse,
                queue_depth=self._queue.qsize(),
                m=self.store.m,
                n1=self.store.n1,
                n2=self.store.n2,
                active_labels=len(self.list_labels()),
                observed_cells=self.store.observed_count,
            )

    # -- export / bulk import ----------------------------------------------

    def export_csv(self, label_ids: Optional[Sequence[int]] = None) -> str:
        """Scores and annotations per text as RFC-4180 CSV.

        Columns: text_id, raw_text, one ``score:<name>`` per requested
        label (raw prediction), one ``ann:<name>`` per label (1/0/empty).
        """
        with self._lock:
            if label_ids is None:
                label_ids = sorted(l.label_id for l in self.labels.values()
                                   if not l.retired)
            labels = [self._get_label(i) for i in label_ids]
            model, _ = self.snapshot_model()
            block = None
            if model is not None and labels:
                block = ranking.full_label_block(model, self.store)
            buf = io.StringIO()
            writer = csv.writer(buf, lineterminator="\n")
            writer.writerow(["text_id", "raw_text"]
                            + [f"score:{l.name}" for l in labels]
                            + [f"ann:{l.name}" for l in labels])
            for doc in self.corpus:
                row = [doc.row_id, doc.raw]
                for l in labels:
                    row.append(repr(float(block[doc.row_id, l.label_id]))
                               if block is not None else "")
                for l in labels:
                    ann = self.store.get_label(doc.row_id, l.label_id)
                    row.append("" if ann is None else ann)
                writer.writerow(row)
            return buf.getvalue()

    def import_annotations(self, csv_text: str) -> int:
        """Bulk-apply annotations from CSV; returns the number applied.

        Accepts the export layout (``text_id`` plus ``ann:<name>``
        columns) or simple ``row_id,label,value`` triples. Missing labels
        are created. No per-row model refresh; call training afterwards.
        """
        reader = csv.reader(io.StringIO(csv_text))
        try:
            header = next(reader)
        except StopIteration:
            return 0
        applied = 0
        with self._lock:
            name_to_id = {l.name: l.label_id for l in self.list_labels()}

            def label_id_for(name: str) -> int:
                if name not in name_to_id:
                    name_to_id[name] = self.create_label(name).label_id
                return name_to_id[name]

            if "text_id" in header:
                ann_cols = [(i, col[len("ann:"):]) for i, col in enumerate(header)
                            if col.startswith("ann:")]
                id_col = header.index("text_id")
                for line_no, parts in enumerate(reader, start=2):
                    if not parts:
                        continue
                    row_id = int(parts[id_col])
                    for i, name in ann_cols:
                        if i < len(parts) and parts[i] != "":
                            self._append_annotation(row_id, label_id_for(name),
                                                    int(parts[i]))
                            applied += 1
            else:
                rows = list(reader)
                if header and not _is_triple_header(header):
                    rows.insert(0, header)
                for parts in rows:
                    if not parts:
                        continue
                    row_id, name, value = int(parts[0]), parts[1], int(parts[2])
                    self._append_annotation(row_id, label_id_for(name), value)
                    applied += 1
        return applied

    def _append_annotation(self, row_id: int, label_id: int, value: int) -> None:
        if value not in (0, 1):
            raise ValueError(f"annotation value must be 0 or 1, got {value!r}")
        if not 0 <= row_id < self.store.m:
            raise NotFoundError(f"unknown row id {row_id}")
        event = AnnotationEvent(seq=len(self.events), row_id=row_id,
                                label_id=label_id, value=value,
                                timestamp=time.time())
        self.events.append(event)
        self.store.set_label(row_id, label_id, value)

    # -- training ------------------------------------------------------------

    def run_training(self) -> Optional[engine.TrainReport]:
        """Synchronous fit (worker-less mode): trains until early stop."""
        with self._lock:
            if self._model is None or self.store.observed_count == 0:
                self._state = IDLE
                return None
            model, store = self._model, self.store
        self._state = TRAINING

        def on_pass(pass_no: int, val_rmse: float) -> Optional[str]:
            self._total_passes += 1
            self._last_val_rmse = val_rmse
            return None

        report = engine.train(model, store, self.hp, on_pass=on_pass)
        self._publish(model)
        self._state = CONVERGED
        return report

    def wait_converged(self, timeout: float = 60.0) -> bool:
        """Poll until the worker reports convergence (worker mode only)."""
        deadline = time.monotonic() + timeout
        while time.monotonic() < deadline:
            if self._state == CONVERGED and self._queue.qsize() == 0:
                return True
            time.sleep(0.01)
        return False

    def _request_training(self) -> None:
        if self._worker is not None:
            self._queue.put(("train",))

    def _publish(self, model: FactorModel) -> None:
        with self._lock:
            # A worker pass may race a structural change (import, new label);
            # never publish a snapshot whose dims disagree with the store.
            if model.m != self.store.m or model.n != self.store.n:
                return
            with self._snap_lock:
                self._snapshot = (model.row_factors.copy(),
                                  model.col_factors.copy(),
                                  self._total_passes)

    # -- worker ----------------------------------------------------------------

    def _worker_loop(self) -> None:
        while True:
            task = self._queue.get()
            if task[0] == "stop":
                return
            if task[0] == "correct":
                with self._lock:
                    model, store = self._model, self.store
                self._do_correction(model, store, task)
            self._run_training_on_worker()

    def _do_correction(self, model: Optional[FactorModel],
                       store: ObservationStore, task: tuple) -> None:
        _, row_id, label_id, value, done = task
        try:
            with self._lock:
                label = self.labels.get(label_id)
                if model is None or label is None or label.retired:
                    return
                if model.m != store.m or model.n != store.n:
                    return  # raced a structural change; retraining follows
                engine.apply_correction(model, store, row_id, label_id, value,
                                        self.hp, rng=self._train_rng)
                self._publish(model)
        except (ValueError, IndexError):
            pass  # stale refs; the store already holds the annotation
        finally:
            done.set()

    def _run_training_on_worker(self) -> None:
        while True:
            with self._lock:
                gen = self._generation
                model, store = self._model, self.store
                trainable = model is not None and store.observed_count > 0
            if not trainable:
                self._state = IDLE
                return
            self._state = TRAINING

            def on_pass(pass_no: int, val_rmse: float) -> Optional[str]:
                with self._lock:
                    self._total_passes += 1
                    self._last_val_rmse = val_rmse
                self._publish(model)
                signal = None
                corrected = False
                while True:
                    try:
                        task = self._queue.get_nowait()
                    except queue.Empty:
                        break
                    if task[0] == "stop":
                        self._queue.put(task)
                        return engine.STOP
                    if task[0] == "correct":
                        self._do_correction(model, store, task)
                        corrected = True
                    # a pending "train" task is redundant while training
                with self._lock:
                    if self._generation != gen:
                        return engine.STOP
                return engine.RESET if corrected else signal

            try:
                engine.train(model, store, self.hp, on_pass=on_pass)
            except ValueError:
                # store/model changed shape under us; restart with fresh refs
                continue
            with self._lock:
                restart = self._generation != gen
            if restart:
                continue
            self._publish(model)
            self._state = CONVERGED
            return

    # -- persistence -------------------------------------------------------------

    def persist(self, directory: Optional[str | Path] = None) -> Path:
        """Write the full session to a directory; returns the path."""
        directory = Path(directory) if directory is not None else self.data_dir
        if directory is None:
            raise ValueError("no data directory configured")
        directory.mkdir(parents=True, exist_ok=True)
        with self._lock:
            manifest = {
                "format_version": FORMAT_VERSION,
                "hp": asdict(self.hp),
                "min_count": self.vocab.min_count,
                "namespace": self.namespace,
                "state": CONVERGED if self._state == CONVERGED else IDLE,
                "total_passes": self._total_passes,
                "last_val_rmse": self._last_val_rmse,
                "labels": [asdict(l) for l in self.labels.values()],
                "events": [
                    {"type": "annotate", **asdict(ev)}
                    if isinstance(ev, AnnotationEvent)
                    else {"type": "delete_label", **asdict(ev)}
                    for ev in self.events
                ],
                "m": self.store.m,
                "n1": self.store.n1,
                "n2": self.store.n2,
            }
            (directory / "manifest.json").write_text(
                json.dumps(manifest, sort_keys=True, indent=2), encoding="utf-8")
            with open(directory / "corpus.jsonl", "w", encoding="utf-8") as fh:
                for doc in self.corpus:
                    fh.write(json.dumps({"row_id": doc.row_id, "raw": doc.raw},
                                        ensure_ascii=False) + "\n")
            (directory / "vocab.json").write_text(
                json.dumps({
                    "terms": [self.vocab.term_of(i) for i in range(self.vocab.n1)],
                    "counts": dict(self.vocab.counts),
                }, ensure_ascii=False), encoding="utf-8")
            arrays = {}
            rows, cols, vals, f_indptr, f_indices = self.store.arrays()
            arrays["f_indptr"] = f_indptr
            arrays["f_indices"] = f_indices
            l_cells = np.asarray(self.store.label_cells(), dtype=np.int64)
            arrays["l_cells"] = l_cells if l_cells.size else np.empty((0, 3),
                                                                      dtype=np.int64)
            with self._snap_lock:
                if self._snapshot is not None:
                    row_f, col_f, pass_no = self._snapshot
                    arrays["row_factors"] = row_f
                    arrays["col_factors"] = col_f
                    arrays["snapshot_pass"] = np.asarray([pass_no])
            np.savez(directory / "arrays.npz", **arrays)
        return directory

    @classmethod
    def restore(cls, directory: str | Path, start_worker: bool = True,
                correction_timeout: float = 2.0) -> "Session":
        """Rebuild a session from :meth:`persist` output, scores intact."""
        directory = Path(directory)
        manifest_path = directory / "manifest.json"
        if not manifest_path.exists():
            raise FileNotFoundError(f"no session at {directory}")
        manifest = json.loads(manifest_path.read_text(encoding="utf-8"))
        if manifest.get("format_version") != FORMAT_VERSION:
            raise MigrationError(
                f"session format {manifest.get('format_version')!r} is not "
                f"supported by this version (want {FORMAT_VERSION})")

        session = cls(hp=HyperParams(**manifest["hp"]),
                      min_count=manifest["min_count"],
                      namespace=manifest["namespace"],
                      data_dir=directory,
                      correction_timeout=correction_timeout,
                      start_worker=False)
        with open(directory / "corpus.jsonl", "r", encoding="utf-8") as fh:
            for line in fh:
                rec = json.loads(line)
                doc = TextDoc(row_id=rec["row_id"], raw=rec["raw"])
                session.corpus.append(doc)
        vocab_data = json.loads((directory / "vocab.json").read_text(encoding="utf-8"))
        for term in vocab_data["terms"]:
            session.vocab.terms[term] = len(session.vocab._id_to_term)
            session.vocab._id_to_term.append(term)
        session.vocab.counts.update(vocab_data["counts"])

        arrays = np.load(directory / "arrays.npz")
        store = ObservationStore(manifest["m"], manifest["n1"], manifest["n2"])
        f_indptr = arrays["f_indptr"]
        f_indices = arrays["f_indices"]
        for row in range(manifest["m"]):
            cols = f_indices[f_indptr[row]:f_indptr[row + 1]]
            if cols.size:
                store.set_features(row, cols)
        l_cells = arrays["l_cells"]
        if l_cells.size:
            store.bulk_set_labels(l_cells[:, 0], l_cells[:, 1], l_cells[:, 2])
        session.store = store

        for rec in manifest["labels"]:
            session.labels[rec["label_id"]] = LabelDef(**rec)
        for rec in manifest["events"]:
            kind = rec.pop("type")
            if kind == "annotate":
                session.events.append(AnnotationEvent(**rec))
            else:
                session.events.append(LabelDeletion(**rec))

        session._total_passes = manifest["total_passes"]
        session._last_val_rmse = manifest["last_val_rmse"]
        session._state = manifest["state"]
        if "row_factors" in arrays:
            row_f = arrays["row_factors"]
            col_f = arrays["col_factors"]
            session._model = FactorModel(row_f.copy(), col_f.copy())
            session._snapshot = (row_f, col_f, int(arrays["snapshot_pass"][0]))
        if start_worker:
            session._worker = threading.Thread(target=session._worker_loop,
                                               name="textfactor-trainer",
                                               daemon=True)
            session._worker.start()
        return session


def _is_triple_header(parts: list[str]) -> bool:
    try:
        int(parts[0])
        return False
    except (ValueError, IndexError):
        return True
