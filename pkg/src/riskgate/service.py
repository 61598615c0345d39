"""Local JSON service over the assessment engine.

Local-first and unauthenticated by design: it binds loopback unless
configured otherwise and holds no per-user state beyond the single
persisted profile. All engine state (matrix, band tables, incidence) is
read-only after startup, so requests can be handled concurrently without
coordination.
"""

from __future__ import annotations

import datetime as dt
import threading
from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles

from . import serialize
from .config import AppConfig, load_matrix, load_profile, save_profile
from .incidence import IncidenceLookupError, load_incidence
from .model import ValidationError
from .scenario import (
    ParseError,
    assess,
    assess_schedule,
    parse_profile,
    parse_scenario,
    parse_schedule,
    what_if,
)


def _error_body(message: str, location: str | None = None) -> dict:
    return {"error": {"message": message, "location": location}}


async def _json_object(request: Request) -> dict:
    try:
        body = await request.json()
    except Exception:
        raise ParseError("body", "request body is not valid JSON") from None
    if not isinstance(body, dict):
        raise ParseError("body", "request body must be a JSON object")
    return body


def create_app(config: AppConfig, ui_path: str | Path | None = None) -> FastAPI:
    """Build the service; loads and validates everything up front so a
    misconfigured instance fails at startup, not on first request."""
    matrix = load_matrix(config)
    incidence = (
        load_incidence(config.incidence_source, cache_path=config.incidence_cache)
        if config.incidence_source
        else None
    )
    tables = serialize.tables_payload(config.max_persons)
    matrix_doc = serialize.matrix_payload(matrix)
    profile_lock = threading.Lock()

    app = FastAPI(title="riskgate", docs_url=None, redoc_url=None)
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
    )

    async def _validation_error(request: Request, exc: ValidationError):
        return JSONResponse(
            status_code=400,
            content=_error_body(str(exc), getattr(exc, "location", None)),
        )

    async def _lookup_error(request: Request, exc: IncidenceLookupError):
        return JSONResponse(status_code=404, content=_error_body(str(exc)))

    async def _internal_error(request: Request, exc: Exception):
        # opaque on purpose; details stay in the server log
        return JSONResponse(status_code=500, content=_error_body("internal error"))

    app.add_exception_handler(ValidationError, _validation_error)
    app.add_exception_handler(IncidenceLookupError, _lookup_error)
    app.add_exception_handler(Exception, _internal_error)

    def _stored_profile():
        with profile_lock:
            return load_profile(config.profile_path)

    async def _scenario_and_profile(request: Request):
        body = await _json_object(request)
        unknown = set(body) - {"scenario", "profile"}
        if unknown:
            raise ParseError("body", f"unknown fields {sorted(unknown)}")
        if "scenario" not in body:
            raise ParseError("body", "missing required field 'scenario'")
        scenario = parse_scenario(body["scenario"], incidence=incidence)
        if "profile" in body:
            profile = parse_profile(body["profile"])
        else:
            profile = _stored_profile()
            if profile is None:
                raise ParseError("profile", "no profile in request and none stored")
        return scenario, profile

    @app.get("/health")
    async def health():
        return {
            "status": "ok",
            "matrix": matrix.name,
            "incidence_loaded": incidence is not None,
        }

    @app.post("/assess")
    async def assess_endpoint(request: Request):
        scenario, profile = await _scenario_and_profile(request)
        result = assess(scenario, profile, matrix, max_persons=config.max_persons)
        return serialize.assessment_payload(result)

    @app.post("/whatif")
    async def whatif_endpoint(request: Request):
        scenario, profile = await _scenario_and_profile(request)
        original = assess(scenario, profile, matrix, max_persons=config.max_persons)
        mitigations = what_if(scenario, profile, matrix, max_persons=config.max_persons)
        return serialize.whatif_payload(original, mitigations)

    @app.post("/schedule")
    async def schedule_endpoint(request: Request):
        body = await _json_object(request)
        unknown = set(body) - {"entries", "profile"}
        if unknown:
            raise ParseError("body", f"unknown fields {sorted(unknown)}")
        if "entries" not in body:
            raise ParseError("body", "missing required field 'entries'")
        schedule = parse_schedule(body["entries"], incidence=incidence)
        if "profile" in body:
            profile = parse_profile(body["profile"])
        else:
            profile = _stored_profile()
            if profile is None:
                raise ParseError("profile", "no profile in request and none stored")
        assessed = assess_schedule(schedule, profile, matrix, max_persons=config.max_persons)
        return serialize.schedule_payload(assessed)

    @app.get("/matrix")
    async def matrix_endpoint():
        return matrix_doc

    @app.get("/tables")
    async def tables_endpoint():
        return tables

    @app.get("/incidence")
    async def incidence_endpoint(region: str = "", date: str = ""):
        if incidence is None:
            return JSONResponse(
                status_code=503, content=_error_body("no incidence source configured")
            )
        if not region:
            raise ParseError("region", "query parameter 'region' is required")
        if date:
            try:
                requested = dt.date.fromisoformat(date)
            except ValueError:
                raise ParseError("date", f"not an ISO date: {date!r}") from None
        else:
            requested = dt.date.today()
        resolution = incidence.resolve(region, requested)
        return serialize.incidence_payload(resolution)

    @app.get("/profile")
    async def get_profile():
        profile = _stored_profile()
        return {"profile": serialize.profile_payload(profile) if profile else None}

    @app.put("/profile")
    async def put_profile(request: Request):
        body = await _json_object(request)
        profile = parse_profile(body)
        with profile_lock:
            save_profile(config.profile_path, profile)
        return {"profile": serialize.profile_payload(profile)}

    if ui_path is not None:
        app.mount("/", StaticFiles(directory=str(ui_path), html=True), name="ui")

    return app


def serve(config: AppConfig, ui_path: str | Path | None = None) -> None:
    """Run the service until interrupted."""
    import uvicorn

    app = create_app(config, ui_path=ui_path)
    uvicorn.run(app, host=config.listen_host, port=config.listen_port, log_level="info")
