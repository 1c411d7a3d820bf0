"""HTTP front end.  Run with ``fibsynth serve`` or ``uvicorn fibsynth.api.app:app``."""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse, PlainTextResponse

from ..approx import TrialLimitExceeded
from . import handlers as h
from . import schemas as s

app = FastAPI(title="fibsynth", version="0.1.0")


@app.exception_handler(TrialLimitExceeded)
async def _trial_limit(_: Request, exc: TrialLimitExceeded) -> JSONResponse:
    return JSONResponse(status_code=409, content={"error": "trial_limit", "detail": str(exc)})


@app.exception_handler(ValueError)
async def _bad_value(_: Request, exc: ValueError) -> JSONResponse:
    return JSONResponse(status_code=422, content={"error": "invalid", "detail": str(exc)})


@app.get("/health")
def health() -> dict:
    return {"status": "ok"}


@app.post("/compile/rotation", response_model=s.CompileResponse)
def compile_rotation(req: s.RotationRequest) -> s.CompileResponse:
    return h.compile_rotation(req)


@app.post("/compile/unitary", response_model=s.CompileResponse)
def compile_unitary(req: s.UnitaryRequest) -> s.CompileResponse:
    return h.compile_matrix(req)


@app.post("/synthesize-exact", response_model=s.SynthesizeResponse)
def synthesize(req: s.SynthesizeRequest) -> s.SynthesizeResponse:
    return h.synthesize(req)


@app.post("/solve-norm", response_model=s.SolveNormResponse)
def solve_norm(req: s.SolveNormRequest) -> s.SolveNormResponse:
    return h.solve_norm(req)


@app.post("/verify", response_model=s.VerifyResponse)
def verify(req: s.VerifyRequest) -> s.VerifyResponse:
    return h.verify(req)


@app.post("/experiment", response_class=PlainTextResponse)
def experiment(req: s.ExperimentRequest) -> str:
    return h.experiment(req)


@app.get("/oracle/stats")
def oracle_stats() -> dict:
    db = h.resolve_oracle()
    return {"max_depth": db.max_depth, "census": db.census, "entries": len(db)}
