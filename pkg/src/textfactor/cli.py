"""Batch entry points: evaluate, train, predict, export, serve.

Exit codes: 0 success, 1 user error (arguments, data, validation),
2 internal error.
"""

from __future__ import annotations

import argparse
import json
import sys
import traceback
from pathlib import Path
from typing import Optional

from .datasets import ParseError
from .engine import HyperParams
from .evaluation import run_benchmark
from .session import MigrationError, NotFoundError, Session


class UserError(Exception):
    """Bad input from the operator; reported without a traceback."""


_HP_FLAGS = ("alpha", "gamma", "k", "init_scale", "patience", "val_fraction",
             "max_passes", "neg_ratio", "correction_epochs", "seed")


def _add_hp_flags(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("hyperparameters")
    group.add_argument("--alpha", type=float, help="learning rate")
    group.add_argument("--gamma", type=float, help="regularization rate")
    group.add_argument("--k", type=int, help="latent dimension")
    group.add_argument("--init-scale", type=float, dest="init_scale")
    group.add_argument("--patience", type=int,
                       help="non-improving passes before stopping")
    group.add_argument("--val-fraction", type=float, dest="val_fraction")
    group.add_argument("--max-passes", type=int, dest="max_passes")
    group.add_argument("--neg-ratio", type=int, dest="neg_ratio",
                       help="sampled negatives per feature cell")
    group.add_argument("--correction-epochs", type=int, dest="correction_epochs")
    group.add_argument("--seed", type=int, help="RNG seed")


def _hyperparams(args: argparse.Namespace) -> HyperParams:
    overrides = {name: getattr(args, name) for name in _HP_FLAGS
                 if getattr(args, name, None) is not None}
    try:
        return HyperParams(**overrides)
    except ValueError as exc:
        raise UserError(str(exc)) from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="textfactor",
        description="Multi-label short-text classification via sparse "
                    "matrix factorization.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_eval = sub.add_parser("eval", help="cross-validated benchmark")
    p_eval.add_argument("--path", required=True, help="dataset file or directory")
    p_eval.add_argument("--format", default="csv",
                        choices=("movielens", "csv", "text"))
    p_eval.add_argument("--folds", type=int, default=10)
    p_eval.add_argument("--threshold", type=float, default=0.5)
    p_eval.add_argument("--subsample", type=int, default=None,
                        help="evaluate a seeded subset of this many cells")
    p_eval.add_argument("--min-count", type=int, default=2, dest="min_count")
    p_eval.add_argument("--json-out", dest="json_out",
                        help="write the report as JSON to this file")
    _add_hp_flags(p_eval)
    p_eval.set_defaults(func=cmd_eval)

    p_train = sub.add_parser("train", help="fit a session and persist it")
    p_train.add_argument("--path", required=True, help="corpus file")
    p_train.add_argument("--format", default="text", choices=("text", "csv"))
    p_train.add_argument("--text-column", dest="text_column")
    p_train.add_argument("--annotations",
                         help="CSV of annotations (row_id,label,value or "
                              "export layout)")
    p_train.add_argument("--session-dir", required=True, dest="session_dir")
    p_train.add_argument("--min-count", type=int, default=2, dest="min_count")
    _add_hp_flags(p_train)
    p_train.set_defaults(func=cmd_train)

    p_pred = sub.add_parser("predict", help="ranked texts for a label, or "
                                            "label scores for a text")
    p_pred.add_argument("--session-dir", required=True, dest="session_dir")
    p_pred.add_argument("--label", help="label name or id")
    p_pred.add_argument("--row", type=int, help="text row id")
    p_pred.add_argument("--top", type=int, default=10)
    p_pred.add_argument("--include-annotated", action="store_true",
                        dest="include_annotated")
    p_pred.add_argument("--json", action="store_true")
    p_pred.set_defaults(func=cmd_predict)

    p_export = sub.add_parser("export", help="write scores + annotations CSV")
    p_export.add_argument("--session-dir", required=True, dest="session_dir")
    p_export.add_argument("--labels", help="comma-separated names or ids")
    p_export.add_argument("--out", help="output file (default stdout)")
    p_export.set_defaults(func=cmd_export)

    p_serve = sub.add_parser("serve", help="run the HTTP service")
    p_serve.add_argument("--config", help="JSON config file")
    p_serve.add_argument("--session-dir", dest="session_dir",
                         help="restore and serve this persisted session")
    p_serve.add_argument("--host")
    p_serve.add_argument("--port", type=int)
    p_serve.add_argument("--data-dir", dest="data_dir")
    _add_hp_flags(p_serve)
    p_serve.set_defaults(func=cmd_serve)

    return parser


def cmd_eval(args: argparse.Namespace) -> int:
    hp = _hyperparams(args)
    report = run_benchmark(args.path, fmt=args.format, hp=hp,
                           folds=args.folds, seed=hp.seed,
                           threshold=args.threshold,
                           subsample=args.subsample,
                           min_count=args.min_count)
    print(report.summary_table())
    if args.json_out:
        Path(args.json_out).write_text(report.to_json() + "\n",
                                       encoding="utf-8")
        print(f"report written to {args.json_out}")
    return 0


def cmd_train(args: argparse.Namespace) -> int:
    hp = _hyperparams(args)
    path = Path(args.path)
    if not path.exists():
        raise UserError(f"corpus file not found: {path}")
    session = Session(hp=hp, min_count=args.min_count, start_worker=False)
    summary = session.import_corpus(path.read_text(encoding="utf-8"),
                                    fmt=args.format,
                                    text_column=args.text_column)
    if args.annotations:
        ann_path = Path(args.annotations)
        if not ann_path.exists():
            raise UserError(f"annotations file not found: {ann_path}")
        applied = session.import_annotations(ann_path.read_text(encoding="utf-8"))
        summary["annotations"] = applied
    report = session.run_training()
    if report is None:
        raise UserError("nothing to train: corpus produced no observed cells")
    session.persist(args.session_dir)
    summary["passes"] = report.passes_run
    summary["val_rmse"] = report.val_rmse_history[-1]
    summary["session_dir"] = str(args.session_dir)
    print(json.dumps(summary, sort_keys=True))
    return 0


def _restore(session_dir: str) -> Session:
    try:
        return Session.restore(session_dir, start_worker=False)
    except FileNotFoundError as exc:
        raise UserError(str(exc)) from None
    except MigrationError as exc:
        raise UserError(str(exc)) from None


def _resolve_label(session: Session, label: str) -> int:
    for ldef in session.list_labels():
        if ldef.name == label:
            return ldef.label_id
    try:
        label_id = int(label)
    except ValueError:
        raise UserError(f"unknown label {label!r}") from None
    if not any(l.label_id == label_id for l in session.list_labels()):
        raise UserError(f"unknown label id {label_id}")
    return label_id


def cmd_predict(args: argparse.Namespace) -> int:
    if (args.label is None) == (args.row is None):
        raise UserError("pass exactly one of --label or --row")
    session = _restore(args.session_dir)
    if args.label is not None:
        label_id = _resolve_label(session, args.label)
        result = session.top_texts(label_id, limit=args.top,
                                   include_annotated=args.include_annotated)
        if args.json:
            print(json.dumps(result, sort_keys=True))
        else:
            for item in result["items"]:
                print(f"{item['rank']:>4}  {item['score']:+.4f}  "
                      f"#{item['row_id']}  {item['raw']}")
    else:
        result = session.text_scores(args.row)
        if args.json:
            print(json.dumps(result, sort_keys=True))
        else:
            print(f"#{result['row_id']}  {result['raw']}")
            for entry in result["scores"]:
                ann = entry["annotated"]
                mark = "" if ann is None else f"  (annotated {ann})"
                print(f"  {entry['score']:+.4f}  {entry['name']}{mark}")
    return 0


def cmd_export(args: argparse.Namespace) -> int:
    session = _restore(args.session_dir)
    label_ids: Optional[list[int]] = None
    if args.labels:
        label_ids = [_resolve_label(session, part.strip())
                     for part in args.labels.split(",")]
    csv_text = session.export_csv(label_ids)
    if args.out:
        Path(args.out).write_text(csv_text, encoding="utf-8")
        print(f"exported to {args.out}")
    else:
        sys.stdout.write(csv_text)
    return 0


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .server import AppConfig, create_app

    config = AppConfig.load(args.config)
    if args.host:
        config.host = args.host
    if args.port is not None:
        config.port = args.port
    if args.data_dir:
        config.data_dir = args.data_dir
    for name in _HP_FLAGS:
        value = getattr(args, name, None)
        if value is not None:
            config.hp[name] = value

    if args.session_dir:
        session = Session.restore(args.session_dir)
        session.correction_timeout = config.correction_timeout
    else:
        session = Session(hp=config.hyperparams(),
                          min_count=config.min_count,
                          data_dir=config.data_dir,
                          correction_timeout=config.correction_timeout,
                          max_payload_bytes=config.max_payload_bytes)
    app = create_app(session, config)
    uvicorn.run(app, host=config.host, port=config.port, log_level="warning")
    return 0


def main(argv: Optional[list[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 1
    try:
        return args.func(args)
    except UserError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (ParseError, NotFoundError, FileNotFoundError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except Exception:
        traceback.print_exc()
        return 2


if __name__ == "__main__":
    sys.exit(main())
