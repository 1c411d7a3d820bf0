"""Command-line front end.

Every compute subcommand turns its flags into a request model (validated
before any work starts) and then either calls the handler in-process or, with
``--server URL``, posts the same JSON to a running ``fibsynth serve``.

Exit codes: 0 success, 1 compile failure, 2 usage error, 3 I/O error.
"""

from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import dataclass
from typing import Optional

from pydantic import BaseModel, ValidationError

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3


class UsageError(Exception):
    pass


class CompileFailure(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    request: Optional[BaseModel] = None
    output_format: str = "braid"
    oracle_path: Optional[str] = None
    server: Optional[str] = None
    out: Optional[str] = None
    args: Optional[argparse.Namespace] = None


# -- argument parsing ------------------------------------------------------------------


def _add_compile_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--eps", default="1e-10", help="target distance (default 1e-10)")
    p.add_argument("--seed", type=int, help="unsigned 64-bit seed; a fresh one is printed if omitted")
    p.add_argument("--precision", type=int, dest="precision_bits", help="working precision in bits")
    p.add_argument("--format", choices=("braid", "ft", "json"), default="braid")
    p.add_argument("--oracle", help="FIBDB1 file for peephole (default $FIBSYNTH_ORACLE, else built in memory)")
    p.add_argument("--no-peephole", action="store_true")
    p.add_argument("--max-trials", type=int, default=10**6)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fibsynth", description="Compile single-qubit unitaries into Fibonacci anyon braids.")
    parser.add_argument("--server", help="send the request to a running `fibsynth serve` at this URL")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    for name, help_ in (("compile-rz", "approximate Rz(angle)"), ("compile-rzx", "approximate Rz(angle) X")):
        p = sub.add_parser(name, help=help_)
        p.add_argument("--angle", required=True, help="e.g. pi/128, 3pi/7, 0.45")
        _add_compile_flags(p)

    p = sub.add_parser("compile-unitary", help="approximate an arbitrary 2x2 unitary")
    p.add_argument("--matrix", required=True, help='rows split by ";", entries by ",": "0,1;1,0"')
    _add_compile_flags(p)

    p = sub.add_parser("synthesize-exact", help="exact F/T word and braid for an exact unitary")
    p.add_argument("--ft", help='F/T word such as "w^3 T^2 F T"')
    p.add_argument("--u", help="Z[omega] element, e.g. 1+w-w3")
    p.add_argument("--v")
    p.add_argument("--k", type=int, default=0)
    p.add_argument("--format", choices=("braid", "ft", "json"), default="braid")

    p = sub.add_parser("solve-norm", help="solve |x|^2 = xi over Z[omega]")
    p.add_argument("--xi", required=True, help="element of Z[tau], e.g. 760-780*t")
    p.add_argument("--seed", type=int)
    p.add_argument("--format", choices=("text", "json"), default="text")

    p = sub.add_parser("oracle-build", help="enumerate optimal braids up to a depth")
    p.add_argument("--depth", type=int, default=12)
    p.add_argument("--budget", type=int, default=12, help="largest depth allowed without raising it explicitly")
    p.add_argument("--out", required=True)
    p.add_argument("--json", dest="json_out", help="also write a JSON export here")

    p = sub.add_parser("oracle-stats", help="print the census table of a database file")
    p.add_argument("path")

    p = sub.add_parser("verify", help="distance between a braid and a target")
    p.add_argument("--braid", required=True)
    p.add_argument("--kind", choices=("rz", "rzx", "unitary"), default="rz")
    p.add_argument("--angle")
    p.add_argument("--matrix")
    p.add_argument("--eps")
    p.add_argument("--precision", type=int, dest="precision_bits", default=256)

    p = sub.add_parser("experiment", help="batch compiles over an angle grid, CSV out")
    p.add_argument("--kind", choices=("rz", "rzx"), default="rz")
    p.add_argument("--k-min", type=int, default=1)
    p.add_argument("--k-max", type=int, default=10)
    p.add_argument("--denominator", type=int, default=4000, help="angles are 2 pi k / denominator")
    p.add_argument("--eps", default="1e-2,1e-5,1e-10", help="comma-separated list")
    p.add_argument("--reps", type=int, default=1)
    p.add_argument("--seed", type=int)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--oracle-depth", type=int, default=12, help="peephole database depth; -1 disables")
    p.add_argument("--no-timing", action="store_true", help="write 0 in the ms column so output is byte-reproducible")
    p.add_argument("--out", help="CSV path (default stdout)")

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    return parser


def _matrix_rows(text: str) -> list[list[str]]:
    rows = [[e.strip() for e in row.split(",")] for row in text.split(";")]
    if len(rows) != 2 or any(len(r) != 2 for r in rows):
        raise UsageError("--matrix needs two rows of two entries, e.g. '0,1;1,0'")
    return rows


def _seed(value: Optional[int]) -> int:
    from .rng import check_seed

    seed = check_seed(value)
    if value is None:
        print(f"seed: {seed}", file=sys.stderr)
    return seed


def _request(ns: argparse.Namespace) -> Optional[BaseModel]:
    from .api import schemas as s

    cmd = ns.command
    if cmd in ("compile-rz", "compile-rzx"):
        return s.RotationRequest(
            kind="rz" if cmd == "compile-rz" else "rzx",
            angle=ns.angle,
            eps=ns.eps,
            seed=_seed(ns.seed),
            precision_bits=ns.precision_bits,
            peephole=not ns.no_peephole,
            max_trials=ns.max_trials,
        )
    if cmd == "compile-unitary":
        return s.UnitaryRequest(
            matrix=_matrix_rows(ns.matrix),
            eps=ns.eps,
            seed=_seed(ns.seed),
            precision_bits=ns.precision_bits,
            peephole=not ns.no_peephole,
            max_trials=ns.max_trials,
        )
    if cmd == "synthesize-exact":
        if ns.ft is None and (ns.u is None or ns.v is None):
            raise UsageError("give --ft, or both --u and --v")
        return s.SynthesizeRequest(ft=ns.ft, u=ns.u, v=ns.v, k=ns.k)
    if cmd == "solve-norm":
        return s.SolveNormRequest(xi=ns.xi, seed=_seed(ns.seed))
    if cmd == "verify":
        if ns.kind == "unitary" and ns.matrix is None:
            raise UsageError("--kind unitary needs --matrix")
        if ns.kind != "unitary" and ns.angle is None:
            raise UsageError(f"--kind {ns.kind} needs --angle")
        return s.VerifyRequest(
            braid=ns.braid,
            kind=ns.kind,
            angle=ns.angle,
            matrix=_matrix_rows(ns.matrix) if ns.matrix else None,
            eps=ns.eps,
            precision_bits=ns.precision_bits,
        )
    if cmd == "experiment":
        return s.ExperimentRequest(
            kind=ns.kind,
            k_min=ns.k_min,
            k_max=ns.k_max,
            denominator=ns.denominator,
            epsilons=[e.strip() for e in ns.eps.split(",") if e.strip()],
            repetitions=ns.reps,
            seed=_seed(ns.seed),
            oracle_depth=None if ns.oracle_depth < 0 else ns.oracle_depth,
            timing=not ns.no_timing,
            workers=ns.workers,
        )
    return None


def parse_args(argv: Optional[list[str]] = None) -> RunConfig:
    """Parse and validate; raises SystemExit(2) on any usage problem."""
    parser = build_parser()
    ns = parser.parse_args(argv)
    try:
        req = _request(ns)
        if ns.command == "verify":
            from .braid import parse_braid

            parse_braid(ns.braid)
        if ns.command == "oracle-build" and ns.depth < 0:
            raise UsageError("--depth must be non-negative")
    except (UsageError, ValidationError, ValueError) as exc:
        parser.error(_one_line(exc))
    return RunConfig(
        command=ns.command,
        request=req,
        output_format=getattr(ns, "format", "braid"),
        oracle_path=getattr(ns, "oracle", None),
        server=ns.server,
        out=getattr(ns, "out", None),
        args=ns,
    )


def _one_line(exc: Exception) -> str:
    if isinstance(exc, ValidationError):
        return "; ".join(f"{'.'.join(map(str, e['loc']))}: {e['msg']}" for e in exc.errors())
    return str(exc)


# -- execution ------------------------------------------------------------------------------

_ENDPOINTS = {
    "compile-rz": "/compile/rotation",
    "compile-rzx": "/compile/rotation",
    "compile-unitary": "/compile/unitary",
    "synthesize-exact": "/synthesize-exact",
    "solve-norm": "/solve-norm",
    "verify": "/verify",
    "experiment": "/experiment",
}


def _remote(cfg: RunConfig):
    import httpx

    from .api import schemas as s

    url = cfg.server.rstrip("/") + _ENDPOINTS[cfg.command]
    try:
        resp = httpx.post(url, json=cfg.request.model_dump(), timeout=None)
    except httpx.HTTPError as exc:
        raise OSError(f"cannot reach {cfg.server}: {exc}") from exc
    if resp.status_code == 409:
        raise CompileFailure(resp.json().get("detail", "compile failed"))
    if resp.status_code == 422:
        raise UsageError(resp.text)
    if resp.status_code != 200:
        raise OSError(f"server answered {resp.status_code}: {resp.text}")
    if cfg.command == "experiment":
        return resp.text
    model = {
        "compile-rz": s.CompileResponse,
        "compile-rzx": s.CompileResponse,
        "compile-unitary": s.CompileResponse,
        "synthesize-exact": s.SynthesizeResponse,
        "solve-norm": s.SolveNormResponse,
        "verify": s.VerifyResponse,
    }[cfg.command]
    return model.model_validate(resp.json())


def _local(cfg: RunConfig):
    from .api import handlers as h

    cmd = cfg.command
    if cmd in ("compile-rz", "compile-rzx", "compile-unitary"):
        oracle = None
        if cfg.request.peephole:
            oracle = h.resolve_oracle(cfg.oracle_path)
        if cmd == "compile-unitary":
            return h.compile_matrix(cfg.request, oracle)
        return h.compile_rotation(cfg.request, oracle)
    return {
        "synthesize-exact": h.synthesize,
        "solve-norm": h.solve_norm,
        "verify": h.verify,
        "experiment": h.experiment,
    }[cmd](cfg.request)


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        with open(out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _render(cfg: RunConfig, result) -> int:
    cmd, fmt = cfg.command, cfg.output_format
    if cmd == "experiment":
        _emit(result, cfg.out)
        return EXIT_OK
    if fmt == "json":
        _emit(result.model_dump_json(indent=2), None)
    elif cmd == "solve-norm":
        _emit(result.x if result.solved else "unsolved", None)
    elif cmd == "verify":
        _emit(result.distance + ("" if result.ok is None else ("  ok" if result.ok else "  FAIL")), None)
    else:
        _emit(result.ft if fmt == "ft" else result.braid, None)
    if cmd == "solve-norm" and not result.solved:
        return EXIT_FAIL
    if cmd == "verify" and result.ok is False:
        return EXIT_FAIL
    return EXIT_OK


def _oracle_build(ns: argparse.Namespace) -> int:
    from .oracle import build_database, save, to_json

    db = build_database(ns.depth, budget=ns.budget)
    save(db, ns.out)
    if ns.json_out:
        with open(ns.json_out, "w") as fh:
            fh.write(to_json(db))
    print(f"{len(db)} unitaries up to depth {db.max_depth} written to {ns.out}")
    return EXIT_OK


def _oracle_stats(ns: argparse.Namespace) -> int:
    from .oracle import census_fit, load

    db = load(ns.path)
    print(f"format FIBDB1 v{db.version}, max depth {db.max_depth}, {len(db)} entries")
    print(f"{'depth':>5}  {'count':>8}  {'cumulative':>10}")
    total = 0
    for depth, count in enumerate(db.census):
        total += count
        print(f"{depth:>5}  {count:>8}  {total:>10}")
    if db.max_depth >= 8:
        b, m = census_fit(db.census)
        print(f"fit (depth 6..{db.max_depth}): log10(count) = {b:.4f} + {m:.4f} * depth")
    return EXIT_OK


def _serve(ns: argparse.Namespace) -> int:
    import uvicorn

    uvicorn.run("fibsynth.api.app:app", host=ns.host, port=ns.port)
    return EXIT_OK


def run(cfg: RunConfig) -> int:
    from .approx import TrialLimitExceeded
    from .oracle import BudgetExceeded, DatabaseFormatError

    try:
        if cfg.command == "oracle-build":
            return _oracle_build(cfg.args)
        if cfg.command == "oracle-stats":
            return _oracle_stats(cfg.args)
        if cfg.command == "serve":
            return _serve(cfg.args)
        result = _remote(cfg) if cfg.server else _local(cfg)
        return _render(cfg, result)
    except (TrialLimitExceeded, CompileFailure) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except (UsageError, BudgetExceeded) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (OSError, DatabaseFormatError) as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main(argv: Optional[list[str]] = None) -> int:
    cfg = parse_args(argv)
    logging.basicConfig(level=logging.INFO if cfg.args.verbose else logging.WARNING, format="%(message)s")
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
