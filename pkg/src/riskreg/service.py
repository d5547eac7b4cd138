"""HTTP service exposing the register over JSON endpoints.

State lives in a RegisterStore guarded by a lock; every mutation must quote
the store's current revision and bumps it on success, so two concurrent
writers cannot silently overwrite each other (the loser gets 409). What-if
analysis never touches the store. Error bodies are always
{"code", "message", "field"?}.
"""

from __future__ import annotations

import threading
from pathlib import Path
from typing import Any, Callable

from fastapi import Body, FastAPI
from fastapi.exceptions import RequestValidationError
from fastapi.responses import HTMLResponse, JSONResponse
from fastapi.staticfiles import StaticFiles

from .appetite import (
    AppetiteAnchor,
    appetite_midpoint,
    build_heatmap,
    severity_band,
    treatment_for_band,
)
from .controls import Control, ControlPlan, apply_plan, defense_in_depth_check
from .errors import (
    NotApplicableError,
    RangeError,
    RiskregError,
    UnknownControlError,
    UnknownEntryError,
)
from .model import (
    ASSET_VALUE_MAX,
    ASSET_VALUE_MIN,
    LIKELIHOOD_MAX,
    LIKELIHOOD_MIN,
    Asset,
    AssetCategory,
    RiskEntry,
    RiskRegister,
    Threat,
    Vulnerability,
)
from .register_io import emit_register_csv
from .scoring import compute_risk, score_register

_MUTATOR = Callable[[RiskRegister], RiskRegister]


class RevisionMismatchError(RiskregError):
    """The caller's revision is stale; carries the store's current revision."""

    def __init__(self, current: int):
        super().__init__(f"register is at revision {current}")
        self.current = current


class RegisterStore:
    """In-memory register shared by the HTTP handlers; single writer at a time."""

    def __init__(
        self,
        register: RiskRegister,
        catalog: list[Control] | tuple[Control, ...] = (),
        source_path: str | None = None,
    ):
        self._lock = threading.Lock()
        self._register = score_register(register)
        self._revision = 1
        self.catalog = list(catalog)
        self.source_path = source_path

    def snapshot(self) -> tuple[RiskRegister, int]:
        with self._lock:
            return self._register, self._revision

    def mutate(self, expected_revision: int, mutator: _MUTATOR) -> tuple[RiskRegister, int]:
        with self._lock:
            if expected_revision != self._revision:
                raise RevisionMismatchError(self._revision)
            self._register = score_register(mutator(self._register))
            self._revision += 1
            return self._register, self._revision


class ApiError(Exception):
    """Maps to a JSON error response with the shared {code, message, field?} shape."""

    def __init__(self, status: int, code: str, message: str, field: str | None = None):
        super().__init__(message)
        self.status = status
        self.code = code
        self.message = message
        self.field = field

    def payload(self) -> dict[str, str]:
        body = {"code": self.code, "message": self.message}
        if self.field is not None:
            body["field"] = self.field
        return body


def _bad_request(code: str, message: str, field: str | None = None) -> ApiError:
    return ApiError(422, code, message, field)


def _require_dict(value: Any, field: str) -> dict:
    if not isinstance(value, dict):
        raise _bad_request("InvalidRequest", f"{field} must be an object", field)
    return value


def _get_int(body: dict, key: str, *, lo: int, hi: int | None = None, prefix: str = "") -> int:
    field = prefix + key
    if key not in body:
        raise _bad_request("MissingField", f"{field} is required", field)
    value = body[key]
    if not isinstance(value, int) or isinstance(value, bool):
        raise _bad_request("InvalidRequest", f"{field} must be an integer", field)
    if value < lo or (hi is not None and value > hi):
        bound = f">= {lo}" if hi is None else f"in [{lo}, {hi}]"
        raise _bad_request("RangeError", f"{field} must be {bound}, got {value}", field)
    return value


def _get_str(body: dict, key: str, prefix: str = "") -> str:
    field = prefix + key
    if key not in body:
        raise _bad_request("MissingField", f"{field} is required", field)
    value = body[key]
    if not isinstance(value, str) or not value.strip():
        raise _bad_request("InvalidRequest", f"{field} must be a non-empty string", field)
    return value


def _entry_json(entry: RiskEntry, appetite: int) -> dict:
    band = severity_band(entry.risk, appetite)
    return {
        "id": entry.id,
        "asset": {
            "name": entry.asset.name,
            "category": entry.asset.category.value,
            "owner": entry.asset.owner,
            "value": entry.asset.value,
        },
        "threat": {"name": entry.threat.name, "likelihood": entry.threat.likelihood},
        "vulnerability": {
            "name": entry.vulnerability.name,
            "likelihood": entry.vulnerability.likelihood,
        },
        "risk": entry.risk,
        "band": band.value,
        "treatment": treatment_for_band(band).value,
    }


def _register_json(register: RiskRegister, revision: int) -> dict:
    return {
        "revision": revision,
        "appetite": register.appetite,
        "entries": [_entry_json(entry, register.appetite) for entry in register.entries],
    }


def _control_json(control: Control) -> dict:
    return {
        "id": control.id,
        "name": control.name,
        "category": control.category.value,
        "functions": sorted(f.value for f in control.functions),
        "applies_to": sorted(control.applies_to),
        "threat_reduction": control.effect.threat_reduction,
        "vulnerability_reduction": control.effect.vulnerability_reduction,
        "compensating_for": control.compensating_for,
    }


_ASSET_KEYS = {"name", "category", "owner", "value"}
_LIKELIHOOD_KEYS = {"name", "likelihood"}


def _parse_asset(body: dict, base: Asset | None, register: RiskRegister) -> Asset:
    merged = {
        "name": base.name if base else None,
        "category": base.category.value if base else None,
        "owner": base.owner if base else None,
        "value": base.value if base else None,
    }
    for key in body:
        if key not in _ASSET_KEYS:
            raise _bad_request("InvalidRequest", f"unknown key asset.{key}", f"asset.{key}")
    merged.update(body)
    name = _get_str(merged, "name", "asset.")
    raw_category = _get_str(merged, "category", "asset.")
    try:
        category = AssetCategory(raw_category)
    except ValueError:
        raise _bad_request(
            "UnknownCategory", f"unknown asset category {raw_category!r}", "asset.category"
        ) from None
    owner = _get_str(merged, "owner", "asset.")
    value = _get_int(merged, "value", lo=ASSET_VALUE_MIN, hi=ASSET_VALUE_MAX, prefix="asset.")
    for entry in register.entries:
        existing = entry.asset
        if (existing.name, existing.category, existing.owner, existing.value) == (
            name,
            category,
            owner,
            value,
        ):
            return Asset(existing.id, name, category, owner, value)
    next_id = max((entry.asset.id for entry in register.entries), default=0) + 1
    return Asset(next_id, name, category, owner, value)


def _parse_likelihood_record(
    body: dict, base, register: RiskRegister, kind: str, factory
) -> Any:
    merged = {
        "name": base.name if base else None,
        "likelihood": base.likelihood if base else None,
    }
    for key in body:
        if key not in _LIKELIHOOD_KEYS:
            raise _bad_request("InvalidRequest", f"unknown key {kind}.{key}", f"{kind}.{key}")
    merged.update(body)
    name = _get_str(merged, "name", f"{kind}.")
    likelihood = _get_int(
        merged, "likelihood", lo=LIKELIHOOD_MIN, hi=LIKELIHOOD_MAX, prefix=f"{kind}."
    )
    existing_records = (
        (e.threat for e in register.entries)
        if kind == "threat"
        else (e.vulnerability for e in register.entries)
    )
    max_id = 0
    for record in existing_records:
        max_id = max(max_id, record.id)
        if (record.name, record.likelihood) == (name, likelihood):
            return factory(record.id, name, likelihood)
    return factory(max_id + 1, name, likelihood)


def _build_entry(
    entry_id: int, body: dict, register: RiskRegister, base: RiskEntry | None
) -> RiskEntry:
    for key in body:
        if key not in {"revision", "id", "asset", "threat", "vulnerability"}:
            raise _bad_request("InvalidRequest", f"unknown key {key}", key)
    if base is None:
        for section in ("asset", "threat", "vulnerability"):
            if section not in body:
                raise _bad_request("MissingField", f"{section} is required", section)
    asset = _parse_asset(
        _require_dict(body.get("asset", {}), "asset"), base.asset if base else None, register
    )
    threat = _parse_likelihood_record(
        _require_dict(body.get("threat", {}), "threat"),
        base.threat if base else None,
        register,
        "threat",
        Threat,
    )
    vulnerability = _parse_likelihood_record(
        _require_dict(body.get("vulnerability", {}), "vulnerability"),
        base.vulnerability if base else None,
        register,
        "vulnerability",
        Vulnerability,
    )
    risk = compute_risk(asset.value, threat.likelihood, vulnerability.likelihood)
    return RiskEntry(entry_id, asset, threat, vulnerability, risk)


def create_app(store: RegisterStore, static_dir: str | None = None) -> FastAPI:
    app = FastAPI(title="riskreg", docs_url=None, redoc_url=None, openapi_url=None)

    @app.exception_handler(ApiError)
    async def _api_error(request, exc: ApiError):
        return JSONResponse(status_code=exc.status, content=exc.payload())

    @app.exception_handler(RevisionMismatchError)
    async def _revision_mismatch(request, exc: RevisionMismatchError):
        return JSONResponse(
            status_code=409,
            content={"code": "RevisionMismatch", "message": str(exc), "field": "revision"},
        )

    @app.exception_handler(RequestValidationError)
    async def _request_invalid(request, exc: RequestValidationError):
        first = exc.errors()[0]
        loc = ".".join(str(part) for part in first.get("loc", ()) if part not in ("body", "query"))
        content = {"code": "InvalidRequest", "message": first.get("msg", "invalid request")}
        if loc:
            content["field"] = loc
        return JSONResponse(status_code=422, content=content)

    @app.get("/api/health")
    def health() -> dict:
        register, revision = store.snapshot()
        return {"status": "ok", "revision": revision, "entries": len(register.entries)}

    @app.get("/api/register")
    def get_register() -> dict:
        register, revision = store.snapshot()
        return _register_json(register, revision)

    @app.get("/api/appetite")
    def get_appetite() -> dict:
        register, revision = store.snapshot()
        return {"revision": revision, "appetite": register.appetite}

    @app.put("/api/appetite")
    def put_appetite(payload: dict = Body(...)) -> dict:
        revision = _get_int(payload, "revision", lo=1)
        has_value = "appetite" in payload
        has_anchors = "anchors" in payload
        if has_value == has_anchors:
            raise _bad_request(
                "InvalidRequest", "provide exactly one of appetite or anchors", "appetite"
            )
        if has_value:
            appetite = _get_int(payload, "appetite", lo=1)
        else:
            anchors = payload["anchors"]
            if not isinstance(anchors, list) or len(anchors) != 2:
                raise _bad_request(
                    "InvalidRequest", "anchors must be two [A, T, V] triples", "anchors"
                )
            triples = []
            for i, raw in enumerate(anchors):
                if (
                    not isinstance(raw, list)
                    or len(raw) != 3
                    or any(not isinstance(x, int) or isinstance(x, bool) for x in raw)
                ):
                    raise _bad_request(
                        "InvalidRequest",
                        "each anchor must be an [A, T, V] integer triple",
                        f"anchors.{i}",
                    )
                triples.append(AppetiteAnchor(*raw))
            try:
                appetite = appetite_midpoint(*triples)
            except RangeError as exc:
                raise _bad_request("RangeError", str(exc), "anchors") from None

        register, new_revision = store.mutate(
            revision, lambda reg: RiskRegister(reg.entries, appetite)
        )
        return _register_json(register, new_revision)

    @app.post("/api/entries")
    def create_entry(payload: dict = Body(...)) -> dict:
        revision = _get_int(payload, "revision", lo=1)

        def mutator(register: RiskRegister) -> RiskRegister:
            if "id" in payload:
                entry_id = _get_int(payload, "id", lo=1)
                if register.entry(entry_id) is not None:
                    raise _bad_request("DuplicateId", f"entry {entry_id} already exists", "id")
            else:
                entry_id = max(register.ids(), default=0) + 1
            entry = _build_entry(entry_id, payload, register, base=None)
            return RiskRegister(register.entries + (entry,), register.appetite)

        register, new_revision = store.mutate(revision, mutator)
        return _register_json(register, new_revision)

    @app.put("/api/entries/{entry_id}")
    def update_entry(entry_id: int, payload: dict = Body(...)) -> dict:
        revision = _get_int(payload, "revision", lo=1)

        def mutator(register: RiskRegister) -> RiskRegister:
            base = register.entry(entry_id)
            if base is None:
                raise ApiError(404, "UnknownEntry", f"no entry with id {entry_id}")
            entry = _build_entry(entry_id, payload, register, base=base)
            entries = tuple(entry if e.id == entry_id else e for e in register.entries)
            return RiskRegister(entries, register.appetite)

        register, new_revision = store.mutate(revision, mutator)
        return _register_json(register, new_revision)

    @app.delete("/api/entries/{entry_id}")
    def delete_entry(entry_id: int, revision: int) -> dict:
        def mutator(register: RiskRegister) -> RiskRegister:
            if register.entry(entry_id) is None:
                raise ApiError(404, "UnknownEntry", f"no entry with id {entry_id}")
            entries = tuple(e for e in register.entries if e.id != entry_id)
            return RiskRegister(entries, register.appetite)

        register, new_revision = store.mutate(revision, mutator)
        return _register_json(register, new_revision)

    @app.get("/api/heatmap")
    def get_heatmap() -> dict:
        register, revision = store.snapshot()
        heatmap = build_heatmap(register, register.appetite)
        rows = []
        for value in range(5, 0, -1):
            cells = []
            for column in range(1, 11):
                cell = heatmap.cell(value, column)
                cells.append(
                    {
                        "column": column,
                        "band": cell.band.value,
                        "entry_ids": list(cell.entry_ids),
                    }
                )
            rows.append({"asset_value": value, "cells": cells})
        return {"revision": revision, "appetite": register.appetite, "rows": rows}

    @app.get("/api/controls")
    def get_controls() -> dict:
        return {"controls": [_control_json(c) for c in sorted(store.catalog, key=lambda c: c.id)]}

    @app.post("/api/whatif")
    def whatif(payload: dict = Body(...)) -> dict:
        register, revision = store.snapshot()
        raw_assignments = payload.get("assignments", [])
        if not isinstance(raw_assignments, list):
            raise _bad_request("InvalidRequest", "assignments must be a list", "assignments")
        plan_map: dict[int, list[str]] = {}
        for i, raw in enumerate(raw_assignments):
            item = _require_dict(raw, f"assignments.{i}")
            entry_id = _get_int(item, "entry_id", lo=1, prefix=f"assignments.{i}.")
            control_ids = item.get("control_ids")
            if not isinstance(control_ids, list) or any(
                not isinstance(cid, str) for cid in control_ids
            ):
                raise _bad_request(
                    "InvalidRequest",
                    "control_ids must be a list of strings",
                    f"assignments.{i}.control_ids",
                )
            plan_map.setdefault(entry_id, []).extend(control_ids)

        try:
            snapshot = apply_plan(register, store.catalog, ControlPlan.from_mapping(plan_map))
        except UnknownEntryError as exc:
            raise _bad_request("UnknownEntry", str(exc), "assignments") from None
        except UnknownControlError as exc:
            raise _bad_request("UnknownControl", str(exc), "assignments") from None
        except NotApplicableError as exc:
            raise _bad_request("NotApplicable", str(exc), "assignments") from None

        by_id = {control.id: control for control in store.catalog}
        deltas = []
        for delta in snapshot.deltas:
            if delta.entry_id not in plan_map:
                continue
            applied = [by_id[cid] for cid in sorted(set(plan_map[delta.entry_id]))]
            check = defense_in_depth_check(
                register.entry(delta.entry_id), applied, register.appetite
            )
            deltas.append(
                {
                    "entry_id": delta.entry_id,
                    "risk_before": delta.risk_before,
                    "risk_after": delta.risk_after,
                    "band_before": delta.band_before.value,
                    "band_after": delta.band_after.value,
                    "defense_in_depth": {
                        "satisfied": check.satisfied,
                        "missing_categories": [c.value for c in check.missing_categories],
                    },
                }
            )
        return {
            "revision": revision,
            "appetite": register.appetite,
            "total_before": snapshot.total_before,
            "total_after": snapshot.total_after,
            "deltas": deltas,
        }

    @app.post("/api/save")
    def save(payload: dict = Body(default={})) -> dict:
        target = payload.get("path") or store.source_path
        if not target:
            raise _bad_request("NoPath", "no target path: pass path or serve a file", "path")
        if not isinstance(target, str):
            raise _bad_request("InvalidRequest", "path must be a string", "path")
        register, revision = store.snapshot()
        try:
            Path(target).write_bytes(emit_register_csv(register))
        except OSError as exc:
            raise ApiError(500, "WriteFailed", f"could not write {target}: {exc}") from None
        return {"path": target, "revision": revision, "entries": len(register.entries)}

    if static_dir is not None:
        app.mount("/", StaticFiles(directory=static_dir, html=True), name="static")
    else:

        @app.get("/", response_class=HTMLResponse)
        def index() -> str:
            return (
                "<!doctype html><title>riskreg</title>"
                "<h1>riskreg service</h1>"
                "<p>No web UI assets configured. JSON API lives under /api/.</p>"
            )

    return app
