"""JSON-over-HTTP front of a labeling session.

Endpoints:
  POST   /corpus                 import texts (plain lines or CSV)
  GET    /labels                 list labels
  POST   /labels                 create a label
  DELETE /labels/{id}            retire a label
  POST   /annotations            annotate one (text, label) with 0/1
  GET    /labels/{id}/top        ranked texts for a label
  GET    /texts/{id}/scores      per-label scores for a text
  GET    /export                 CSV of scores + annotations
  GET    /status                 training state and queue depth
  POST   /admin/persist          write the session to its data directory

Configuration comes from an optional JSON file plus TEXTFACTOR_* env
overrides (data dir, host/port, payload limit, hyperparameters).
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field, fields as dc_fields
from pathlib import Path
from typing import Optional

from fastapi import FastAPI, HTTPException, Query, Response
from fastapi.middleware.cors import CORSMiddleware
from pydantic import BaseModel, Field

from .datasets import ParseError
from .engine import HyperParams
from .session import (ConflictError, NotFoundError, PayloadTooLargeError,
                      Session)

ENV_PREFIX = "TEXTFACTOR_"


@dataclass
class AppConfig:
    host: str = "127.0.0.1"
    port: int = 8765
    data_dir: Optional[str] = None
    max_payload_bytes: int = 64_000_000
    correction_timeout: float = 2.0
    min_count: int = 2
    static_dir: Optional[str] = None
    hp: dict = field(default_factory=dict)

    @classmethod
    def load(cls, path: Optional[str | Path] = None) -> "AppConfig":
        """File values first, then TEXTFACTOR_* environment overrides."""
        cfg = cls()
        if path is not None:
            data = json.loads(Path(path).read_text(encoding="utf-8"))
            for f in dc_fields(cls):
                if f.name in data:
                    setattr(cfg, f.name, data[f.name])
        env_casts = {
            "host": str, "port": int, "data_dir": str,
            "max_payload_bytes": int, "correction_timeout": float,
            "min_count": int, "static_dir": str,
        }
        for name, cast in env_casts.items():
            raw = os.environ.get(ENV_PREFIX + name.upper())
            if raw is not None:
                setattr(cfg, name, cast(raw))
        hp_env = os.environ.get(ENV_PREFIX + "HP")
        if hp_env:
            cfg.hp.update(json.loads(hp_env))
        return cfg

    def hyperparams(self) -> HyperParams:
        return HyperParams(**self.hp)


class CorpusIn(BaseModel):
    payload: str
    format: str = "text"
    text_column: Optional[str] = None


class LabelIn(BaseModel):
    name: str


class AnnotationIn(BaseModel):
    row_id: int = Field(ge=0)
    label_id: int = Field(ge=0)
    value: int


class PersistIn(BaseModel):
    path: Optional[str] = None


def create_app(session: Session, config: Optional[AppConfig] = None) -> FastAPI:
    config = config or AppConfig()
    app = FastAPI(title="textfactor", version="0.1.0")
    app.state.session = session
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    @app.exception_handler(NotFoundError)
    async def _not_found(request, exc):
        return _error(404, exc)

    @app.exception_handler(ConflictError)
    async def _conflict(request, exc):
        return _error(409, exc)

    @app.exception_handler(ParseError)
    async def _parse_error(request, exc):
        return _error(400, exc)

    @app.exception_handler(PayloadTooLargeError)
    async def _too_large(request, exc):
        return _error(413, exc)

    @app.exception_handler(ValueError)
    async def _bad_value(request, exc):
        return _error(400, exc)

    @app.post("/corpus")
    def import_corpus(body: CorpusIn):
        return session.import_corpus(body.payload, fmt=body.format,
                                     text_column=body.text_column)

    @app.get("/labels")
    def list_labels():
        return [
            {"label_id": l.label_id, "name": l.name,
             "created_at": l.created_at, "owner": l.owner}
            for l in session.list_labels()
        ]

    @app.post("/labels", status_code=201)
    def create_label(body: LabelIn):
        label = session.create_label(body.name)
        return {"label_id": label.label_id, "name": label.name,
                "created_at": label.created_at, "owner": label.owner}

    @app.delete("/labels/{label_id}")
    def delete_label(label_id: int):
        session.delete_label(label_id)
        return {"deleted": label_id}

    @app.post("/annotations")
    def annotate(body: AnnotationIn):
        if body.value not in (0, 1):
            raise HTTPException(status_code=422,
                                detail="value must be 0 or 1")
        return session.annotate(body.row_id, body.label_id, body.value)

    @app.get("/labels/{label_id}/top")
    def top_texts(label_id: int, limit: int = Query(default=1000, ge=1),
                  include_annotated: bool = False):
        return session.top_texts(label_id, limit=limit,
                                 include_annotated=include_annotated)

    @app.get("/texts/{row_id}/scores")
    def text_scores(row_id: int):
        return session.text_scores(row_id)

    @app.get("/export")
    def export(labels: Optional[str] = None):
        label_ids = None
        if labels is not None and labels.strip() != "":
            label_ids = [int(part) for part in labels.split(",")]
        csv_text = session.export_csv(label_ids)
        return Response(
            content=csv_text,
            media_type="text/csv",
            headers={"Content-Disposition": 'attachment; filename="export.csv"'},
        )

    @app.get("/status")
    def status():
        st = session.status()
        return {
            "state": st.state,
            "total_passes": st.total_passes,
            "snapshot_pass": st.snapshot_pass,
            "last_val_rmse": st.last_val_rmse,
            "queue_depth": st.queue_depth,
            "m": st.m,
            "n1": st.n1,
            "n2": st.n2,
            "active_labels": st.active_labels,
            "observed_cells": st.observed_cells,
        }

    @app.post("/admin/persist")
    def persist(body: PersistIn):
        path = session.persist(body.path)
        return {"ok": True, "path": str(path)}

    static_dir = config.static_dir
    if static_dir and Path(static_dir).is_dir():
        from fastapi.staticfiles import StaticFiles
        app.mount("/ui", StaticFiles(directory=static_dir, html=True),
                  name="ui")

    return app


def _error(status_code: int, exc: Exception):
    from fastapi.responses import JSONResponse
    message = str(exc)
    if isinstance(exc, KeyError) and message.startswith(("'", '"')):
        message = message[1:-1]
    return JSONResponse(status_code=status_code, content={"detail": message})
