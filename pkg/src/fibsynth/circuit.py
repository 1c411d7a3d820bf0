"""Numeric evaluation of circuits, the phase-invariant distance, and peephole rewriting."""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Optional

from .braid import BraidWord
from .exact import ExactUnitary, FTWord, _sigma_power, exact_mul
from .precision import context

# extra bits carried internally so that sqrt in the distance does not eat half
# of the nominal precision
GUARD_BITS = 32


def _wctx(bits: int):
    return context(bits + GUARD_BITS)


@dataclass(frozen=True)
class Matrix2:
    """2x2 complex matrix ``[[a, b], [c, d]]`` with entries at ``bits`` precision."""

    a: object
    b: object
    c: object
    d: object
    bits: int

    @property
    def ctx(self):
        return _wctx(self.bits)

    def __matmul__(self, o: Matrix2) -> Matrix2:
        return Matrix2(
            self.a * o.a + self.b * o.c,
            self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c,
            self.c * o.b + self.d * o.d,
            min(self.bits, o.bits),
        )

    def dagger(self) -> Matrix2:
        cj = self.ctx.conj
        return Matrix2(cj(self.a), cj(self.c), cj(self.b), cj(self.d), self.bits)

    def scale(self, s) -> Matrix2:
        return Matrix2(self.a * s, self.b * s, self.c * s, self.d * s, self.bits)

    def trace(self):
        return self.a + self.d

    def det(self):
        return self.a * self.d - self.b * self.c

    def entries(self) -> tuple:
        return (self.a, self.b, self.c, self.d)

    def to_complex(self) -> list[list[complex]]:
        return [[complex(self.a), complex(self.b)], [complex(self.c), complex(self.d)]]

    def unitarity_error(self):
        p = self @ self.dagger()
        ctx = self.ctx
        return max(abs(p.a - 1), abs(p.b), abs(p.c), abs(p.d - 1)) + ctx.mpf(0)


def identity(bits: int) -> Matrix2:
    ctx = _wctx(bits)
    return Matrix2(ctx.mpc(1), ctx.mpc(0), ctx.mpc(0), ctx.mpc(1), bits)


def omega_power(n: int, bits: int):
    ctx = _wctx(bits)
    return ctx.expjpi(ctx.mpf(n % 10) / 5)


def _sqrt_tau(bits: int):
    ctx = _wctx(bits)
    return ctx.sqrt((ctx.sqrt(5) - 1) / 2)


def f_matrix(bits: int) -> Matrix2:
    ctx = _wctx(bits)
    tau = (ctx.sqrt(5) - 1) / 2
    st = ctx.sqrt(tau)
    return Matrix2(ctx.mpc(tau), ctx.mpc(st), ctx.mpc(st), ctx.mpc(-tau), bits)


def t_matrix(power: int, bits: int) -> Matrix2:
    ctx = _wctx(bits)
    return Matrix2(ctx.mpc(1), ctx.mpc(0), ctx.mpc(0), omega_power(power, bits), bits)


def sigma_matrix(gen: int, exp: int, bits: int) -> Matrix2:
    """``sigma_gen^exp`` with ``sigma_1 = w^6 diag(1, w^7)`` and ``sigma_2 = F sigma_1 F``."""
    ctx = _wctx(bits)
    s1 = Matrix2(omega_power(6 * exp, bits), ctx.mpc(0), ctx.mpc(0), omega_power(13 * exp, bits), bits)
    if gen == 1:
        return s1
    f = f_matrix(bits)
    return f @ s1 @ f


def rz(angle, bits: int) -> Matrix2:
    ctx = _wctx(bits)
    half = ctx.mpf(angle) / 2
    return Matrix2(ctx.expj(-half), ctx.mpc(0), ctx.mpc(0), ctx.expj(half), bits)


def rzx(angle, bits: int) -> Matrix2:
    """``R_z(angle) @ X``."""
    ctx = _wctx(bits)
    half = ctx.mpf(angle) / 2
    return Matrix2(ctx.mpc(0), ctx.expj(-half), ctx.expj(half), ctx.mpc(0), bits)


def evaluate_braid(word: BraidWord, bits: int) -> Matrix2:
    acc = identity(bits)
    for gen, exp in word.runs:
        acc = acc @ sigma_matrix(gen, exp, bits)
    return acc


def evaluate_ft(word: FTWord, bits: int) -> Matrix2:
    acc = identity(bits).scale(omega_power(word.phase, bits))
    f = f_matrix(bits)
    for ch, n in word.runs():
        if ch == "T":
            acc = acc @ t_matrix(n, bits)
        else:
            for _ in range(n):
                acc = acc @ f
    return acc


def evaluate_exact(U: ExactUnitary, bits: int) -> Matrix2:
    ctx = _wctx(bits)
    u = U.u.to_complex(bits + GUARD_BITS)
    v = U.v.to_complex(bits + GUARD_BITS)
    st = _sqrt_tau(bits)
    wk = omega_power(U.k, bits)
    return Matrix2(ctx.mpc(u), ctx.conj(v) * st * wk, v * st, -ctx.conj(u) * wk, bits)


def distance(A: Matrix2, B: Matrix2):
    """Global-phase-invariant distance ``sqrt(1 - |tr(A B^dagger)| / 2)``."""
    bits = min(A.bits, B.bits)
    ctx = _wctx(bits)
    t = abs((A @ B.dagger()).trace()) / 2
    return ctx.sqrt(ctx.mpf(1) - t) if t < 1 else ctx.mpf(0)


def matrix_from_complex(m, bits: int) -> Matrix2:
    """Wrap a nested 2x2 sequence of numbers (python, numpy or mpmath) as :class:`Matrix2`."""
    ctx = _wctx(bits)
    (a, b), (c, d) = m
    return Matrix2(ctx.mpc(a), ctx.mpc(b), ctx.mpc(c), ctx.mpc(d), bits)


# -- peephole -----------------------------------------------------------------


def peephole_optimize(word: BraidWord, db: Optional["OracleLike"] = None) -> BraidWord:
    """Shorten ``word`` without changing its unitary (up to global phase).

    Without a database only run merging happens (already done by
    :class:`BraidWord`).  With one, every window of at most ``db.max_depth``
    unit moves whose unitary has a strictly shorter stored word is replaced,
    repeating until no window improves.
    """
    if db is None:
        return BraidWord(word.runs)
    from .oracle import canonical_key  # local: oracle imports circuit

    steps = {(g, e): _sigma_power(g, e) for g in (1, 2) for e in (1, -1)}
    current = word
    changed = True
    while changed:
        changed = False
        letters = current.letters()
        n = len(letters)
        i = 0
        out: list[tuple[int, int]] = []
        while i < n:
            best = None
            acc = None
            for j in range(i, min(n, i + db.max_depth + 1)):
                step = steps[letters[j]]
                acc = step if acc is None else exact_mul(acc, step)
                length = j - i + 1
                if length < 2:
                    continue
                hit = db.entries.get(canonical_key(acc))
                if hit is not None and hit[0] < length:
                    best = (j + 1, hit[1])
            # a window one longer than the database depth can still shrink
            if best is None:
                out.append(letters[i])
                i += 1
            else:
                end, repl = best
                out.extend(repl.letters())
                i = end
                changed = True
        candidate = BraidWord(tuple(out))
        if candidate.sigma_count >= current.sigma_count:
            break
        current = candidate
    return current


class OracleLike:  # pragma: no cover - typing aid only
    max_depth: int
    entries: dict


# -- serialization --------------------------------------------------------------

RESULT_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": [
        "target",
        "epsilon",
        "seed",
        "braid",
        "ft",
        "sigma_count",
        "distance",
        "trials",
        "elapsed_ms",
    ],
    "properties": {
        "target": {"type": "string"},
        "epsilon": {"type": "string"},
        "seed": {"type": "integer", "minimum": 0},
        "braid": {"type": "string", "pattern": r"^(s[12](\^-?[1-5])?( s[12](\^-?[1-5])?)*)?$"},
        "ft": {"type": "string"},
        "sigma_count": {"type": "integer", "minimum": 0},
        "distance": {"type": "string", "pattern": r"^[0-9.eE+-]+$"},
        "trials": {"type": "integer", "minimum": 0},
        "elapsed_ms": {"type": "integer", "minimum": 0},
    },
    "additionalProperties": True,
}


def result_to_dict(result) -> dict:
    return {
        "target": result.target,
        "epsilon": format_decimal(result.epsilon),
        "seed": result.seed,
        "braid": str(result.braid),
        "ft": str(result.ft),
        "sigma_count": result.sigma_count,
        "distance": format_decimal(result.achieved_distance),
        "trials": result.trials,
        "elapsed_ms": result.elapsed_ms,
    }


def to_json(result) -> str:
    return json.dumps(result_to_dict(result), indent=2)


def format_decimal(x, digits: int = 20) -> str:
    import mpmath

    ctx = getattr(x, "context", mpmath.mp)
    return ctx.nstr(ctx.mpf(x), digits, min_fixed=-4, max_fixed=6)
