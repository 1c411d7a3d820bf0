"""Request handlers; the HTTP app and the in-process CLI both call these."""

from __future__ import annotations

import os
from typing import Optional

from ..approx import compile_rz, compile_rzx, compile_unitary, parse_angle
from ..braid import parse_braid
from ..circuit import (
    distance,
    evaluate_braid,
    format_decimal,
    peephole_optimize,
    rz,
    rzx,
)
from ..exact import (
    ExactUnitary,
    exact_synthesize,
    ft_to_braid,
    parse_ft,
    synthesis_trace,
)
from ..experiment import Grid, run_experiment
from ..numtheory import easy_factor, solve_norm_equation
from ..oracle import OracleDB, build_database, load
from ..precision import context, working_bits
from ..rings import format_zomega, format_ztau, parse_zomega, parse_ztau
from ..rng import check_seed, make_rng
from . import schemas as s

ORACLE_ENV = "FIBSYNTH_ORACLE"
DEFAULT_DEPTH = 12

_cache: dict[object, OracleDB] = {}


def resolve_oracle(path: Optional[str] = None, depth: int = DEFAULT_DEPTH) -> OracleDB:
    """Database from ``path``, else ``$FIBSYNTH_ORACLE``, else built in memory."""
    path = path or os.environ.get(ORACLE_ENV)
    key = path or depth
    if key not in _cache:
        _cache[key] = load(path) if path else build_database(depth, budget=max(depth, DEFAULT_DEPTH))
    return _cache[key]


def parse_matrix(rows: list[list[str]], bits: int):
    from ..circuit import Matrix2

    ctx = context(bits)
    try:
        (a, b), (c, d) = [[ctx.mpmathify(x.replace(" ", "")) for x in row] for row in rows]
    except (ValueError, TypeError) as exc:
        raise ValueError(f"bad matrix entry: {exc}") from exc
    return Matrix2(ctx.mpc(a), ctx.mpc(b), ctx.mpc(c), ctx.mpc(d), bits)


def _response(res, raw_count: int, eps_text: str) -> s.CompileResponse:
    return s.CompileResponse(
        target=res.target,
        epsilon=eps_text,
        seed=res.seed,
        braid=str(res.braid),
        ft=str(res.ft),
        sigma_count=res.sigma_count,
        distance=format_decimal(res.achieved_distance),
        trials=res.trials,
        elapsed_ms=res.elapsed_ms,
        kind=res.kind,
        raw_sigma_count=raw_count,
    )


def compile_rotation(req: s.RotationRequest, oracle: Optional[OracleDB] = None) -> s.CompileResponse:
    seed = check_seed(req.seed)
    bits = req.precision_bits or working_bits(req.eps)
    angle = parse_angle(req.angle, bits)
    fn = compile_rz if req.kind == "rz" else compile_rzx
    label = f"{'Rz' if req.kind == 'rz' else 'RzX'}({req.angle})"
    res = fn(angle, context(bits).mpf(req.eps), make_rng(seed), bits=bits, max_trials=req.max_trials, target=label, seed=seed)
    return _finish(res, req, oracle)


def compile_matrix(req: s.UnitaryRequest, oracle: Optional[OracleDB] = None) -> s.CompileResponse:
    seed = check_seed(req.seed)
    bits = req.precision_bits or working_bits(req.eps)
    U = parse_matrix(req.matrix, bits)
    label = "U[" + "; ".join(", ".join(r) for r in req.matrix) + "]"
    res = compile_unitary(U, context(bits).mpf(req.eps), make_rng(seed), bits=bits, max_trials=req.max_trials, target=label, seed=seed)
    return _finish(res, req, oracle)


def _finish(res, req: s._Compile, oracle: Optional[OracleDB]) -> s.CompileResponse:
    raw = res.sigma_count
    if req.peephole:
        res.braid = peephole_optimize(res.braid, oracle if oracle is not None else resolve_oracle())
    return _response(res, raw, req.eps)


def synthesize(req: s.SynthesizeRequest) -> s.SynthesizeResponse:
    if req.ft is not None:
        U = parse_ft(req.ft).to_exact()
    elif req.u is not None and req.v is not None:
        U = ExactUnitary(parse_zomega(req.u), parse_zomega(req.v), req.k).check()
    else:
        raise ValueError("give either ft or both u and v")
    word = exact_synthesize(U)
    braid = ft_to_braid(word)
    return s.SynthesizeResponse(
        exact=str(U), ft=str(word), braid=str(braid), sigma_count=braid.sigma_count, gauss_trace=synthesis_trace(U)
    )


def solve_norm(req: s.SolveNormRequest) -> s.SolveNormResponse:
    xi = parse_ztau(req.xi)
    x = solve_norm_equation(xi, make_rng(check_seed(req.seed)))
    factors = [(format_ztau(f), m) for f, m in easy_factor(xi)] if xi else []
    return s.SolveNormResponse(xi=format_ztau(xi), solved=x is not None, x=None if x is None else format_zomega(x), factors=factors)


def verify(req: s.VerifyRequest) -> s.VerifyResponse:
    bits = req.precision_bits
    word = parse_braid(req.braid)
    if req.kind == "unitary":
        if req.matrix is None:
            raise ValueError("kind 'unitary' needs a matrix")
        target = parse_matrix(req.matrix, bits)
    else:
        if req.angle is None:
            raise ValueError(f"kind {req.kind!r} needs an angle")
        angle = parse_angle(req.angle, bits)
        target = rz(angle, bits) if req.kind == "rz" else rzx(angle, bits)
    d = distance(evaluate_braid(word, bits), target)
    ok = None if req.eps is None else bool(d <= context(bits).mpf(req.eps))
    return s.VerifyResponse(distance=format_decimal(d), sigma_count=word.sigma_count, ok=ok)


def experiment(req: s.ExperimentRequest) -> str:
    grid = Grid(
        kind=req.kind,
        k_values=tuple(range(req.k_min, req.k_max + 1)),
        denominator=req.denominator,
        epsilons=tuple(req.epsilons),
        repetitions=req.repetitions,
        seed=req.seed,
        oracle_depth=req.oracle_depth,
        timing=req.timing,
    )
    return run_experiment(grid, workers=req.workers)
