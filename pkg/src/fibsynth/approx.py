"""Approximation of rotations by exact unitaries, and the top-level compile loops."""

from __future__ import annotations

import random
import re
import time
from dataclasses import dataclass, field
from typing import Optional

from .braid import BraidWord
from .circuit import Matrix2, distance, evaluate_exact, peephole_optimize, rz, rzx
from .exact import (
    F_GATE,
    ExactUnitary,
    FTWord,
    exact_mul,
    exact_synthesize,
    ft_to_braid,
)
from .numtheory import easy_factor, easy_solvable, solve_from_factors
from .precision import context, working_bits
from .rings import PHI, TAU, THETA, ZOmega, ZTau

MAX_TRIALS = 10**6
TAU_Z = TAU.to_zomega()


class DegenerateRegion(ValueError):
    """The sampling region is too small to hold ``N > 2`` grid lines."""


class TrialLimitExceeded(RuntimeError):
    def __init__(self, trials: int) -> None:
        super().__init__(f"no easy norm equation found in {trials} trials")
        self.trials = trials


class NotUnitary(ValueError):
    pass


class AngleSyntaxError(ValueError):
    pass


# -- real approximation -----------------------------------------------------------


def fibonacci(n: int) -> int:
    if n < 0:
        raise ValueError("n must be non-negative")
    a, b = 0, 1
    for _ in range(n):
        a, b = b, a + b
    return a


def _round_div(n: int, d: int) -> int:
    # floor(n/d + 1/2) for d > 0
    return (2 * n + d) // (2 * d)


def approx_real(x, n: int) -> tuple[int, int]:
    """Integers ``(a, b)`` with ``|x - (a + b tau)| <= tau^(n-1) (1 - tau^n)`` and ``|b| <= phi^n``."""
    if n < 2:
        raise ValueError("n must be at least 2")
    p, q = fibonacci(n), fibonacci(n + 1)
    sign = -1 if n % 2 == 0 else 1
    u = sign * p
    v = -sign * fibonacci(n - 1)
    if not hasattr(x, "context"):
        # python numbers are converted exactly, with room for the scaling by q
        x = context(max(64, n + 64)).mpf(x)
    ctx = x.context
    c = int(ctx.floor(x * q + ctx.mpf(1) / 2))
    r = _round_div(c * u, q)
    return c * v + p * r, c * u - q * r


# -- sampling -----------------------------------------------------------------------


def region_exponent(eps, r, ctx) -> int:
    """``m = ceil(log_tau(C eps r)) + 1`` with ``C = sqrt(phi / (4 r))``."""
    phi = (1 + ctx.sqrt(5)) / 2
    tau = phi - 1
    C = ctx.sqrt(phi / (4 * r))
    return int(ctx.ceil(ctx.log(C * ctx.mpf(eps) * r) / ctx.log(tau))) + 1


@dataclass(frozen=True)
class Region:
    """The sampling parallelogram for ``random_sample(theta, eps, r)``."""

    theta: object
    eps: object
    r: object
    m: int
    y_min: object
    y_max: object
    x_max: object
    width: object
    bits: int

    def contains(self, z: ZOmega) -> bool:
        ctx = context(self.bits)
        w = z.to_complex(self.bits)
        X, Y = ctx.re(w), ctx.im(w)
        if not self.y_min <= Y <= self.y_max:
            return False
        right = self.x_max - (Y - self.y_min) * ctx.tan(self.theta)
        return right - self.width <= X <= right


def sampling_region(theta, eps, r, bits: int, x_max_sign: int = 1) -> Region:
    """Corner data of the parallelogram.

    ``x_max_sign=-1`` flips the sign of the ``sin(theta)`` term in ``x_max``.
    That variant's parallelogram misses the target segment; it is kept only
    so the two can be compared.
    """
    ctx = context(bits)
    theta, eps, r = ctx.mpf(theta), ctx.mpf(eps), ctx.mpf(r)
    phi = (1 + ctx.sqrt(5)) / 2
    m = region_exponent(eps, r, ctx)
    scale = r * phi**m
    s, c = ctx.sin(theta), ctx.cos(theta)
    root = ctx.sqrt(4 - eps**2)
    y_min = scale * (s - eps * (root * c + eps * s) / 2)
    y_max = scale * (s + eps * (root * c - eps * s) / 2)
    x_max = scale * ((1 - eps**2 / 2) * c + x_max_sign * eps * ctx.sqrt(1 - eps**2 / 4) * s)
    width = scale * eps**2 / (2 * c)
    return Region(theta, eps, r, m, y_min, y_max, x_max, width, bits)


def random_sample(theta, eps, r, rng: random.Random, bits: Optional[int] = None, x_max_sign: int = 1) -> ZOmega:
    """Random ``u0 = a_x + b_x tau + (w + w^4)(a_y + b_y tau)`` in the epsilon parallelogram."""
    bits = bits or working_bits(eps)
    ctx = context(bits)
    reg = sampling_region(theta, eps, r, bits, x_max_sign)
    phi = (1 + ctx.sqrt(5)) / 2
    N = int(ctx.ceil(phi**reg.m))
    if N <= 2:
        raise DegenerateRegion(f"N = {N} for eps = {eps}")
    x_c = reg.x_max - reg.width / 2
    j = rng.randint(1, N - 1)
    y = reg.y_min + j * (reg.y_max - reg.y_min) / N
    sqrt_2mt = ctx.sqrt(2 - (phi - 1))
    a_y, b_y = approx_real(y / sqrt_2mt, reg.m)
    y_hat = (a_y + b_y * (phi - 1)) * sqrt_2mt
    x = x_c - (y_hat - reg.y_min) * ctx.tan(reg.theta)
    a_x, b_x = approx_real(x, reg.m)
    return ZOmega(a_x, 0, b_x, -b_x) + THETA * ZOmega(a_y, 0, b_y, -b_y)


# -- compile loops -------------------------------------------------------------------


@dataclass
class CompileResult:
    exact: ExactUnitary
    ft: FTWord
    braid: BraidWord
    achieved_distance: object
    trials: int
    epsilon: object
    target: str = ""
    seed: Optional[int] = None
    elapsed_ms: int = 0
    kind: str = "rz"
    segments: list = field(default_factory=list)

    @property
    def sigma_count(self) -> int:
        return self.braid.sigma_count

    sigma_gate_count = sigma_count


def _k_for(value, ctx) -> int:
    # largest k with value - pi k / 5 >= 0, so that the angle lands in [0, pi/5]
    return int(ctx.floor(5 * value / ctx.pi))


def _phi_power(n: int) -> ZTau:
    return PHI**n


def _finish(U: ExactUnitary, target: Matrix2, bits: int, db) -> tuple[FTWord, BraidWord, object]:
    ft = exact_synthesize(U)
    braid = peephole_optimize(ft_to_braid(ft), db)
    return ft, braid, distance(evaluate_exact(U, bits), target)


def _trial_loop(kind: str, angle, eps, rng: random.Random, bits: int, max_trials: int):
    """Return ``(U, trials)`` for the first sample whose norm equation is easy."""
    ctx = context(bits)
    angle = ctx.mpf(angle)
    if kind == "rz":
        r = ctx.mpf(1)
        k = _k_for(-angle / 2, ctx)
        theta = -angle / 2 - ctx.pi * k / 5
    else:
        r = ctx.sqrt((1 + ctx.sqrt(5)) / 2)
        k = _k_for(angle / 2 + ctx.pi / 2, ctx)
        theta = angle / 2 + ctx.pi / 2 - ctx.pi * k / 5
    wk = ZOmega.omega_power(k)
    trials = 0
    sample_eps = ctx.mpf(eps)
    phi = (1 + ctx.sqrt(5)) / 2
    m = region_exponent(sample_eps, r, ctx)
    while ctx.ceil(phi**m) <= 2:
        # coarse epsilon: sample a smaller region, the caller's bound still holds
        sample_eps /= 2
        m = region_exponent(sample_eps, r, ctx)
    tau_m = (TAU**m).to_zomega()
    phi_2m = _phi_power(2 * m)
    while trials < max_trials:
        trials += 1
        u0 = random_sample(theta, sample_eps, r, rng, bits)
        n0 = u0.norm_i()
        if kind == "rz":
            xi = PHI * (phi_2m - n0)
        else:
            xi = phi_2m - TAU * n0
            assert xi.bullet().sign() > 0
        if xi.sign() < 0 or xi.bullet().sign() < 0:
            continue
        if not xi:
            x = ZOmega(0)
        else:
            fl = easy_factor(xi)
            if not easy_solvable(fl, rng):
                continue
            x = solve_from_factors(xi, fl, rng)
        # k = 5 (lower-right entry +conj(u)) is the member of the family whose
        # distance to the target is the one the sampling region was built for
        if kind == "rz":
            U = ExactUnitary(wk * tau_m * u0, tau_m * x, 5)
        else:
            U = ExactUnitary(tau_m * x, wk * tau_m * u0, 5)
        assert U.is_unitary()
        return U, trials
    raise TrialLimitExceeded(trials)


def _compile_rotation(kind, angle, eps, rng, bits, max_trials, db, target_text, seed) -> CompileResult:
    start = time.perf_counter()
    rng_ = rng if isinstance(rng, random.Random) else random.Random(rng)
    bits = bits or working_bits(eps)
    ctx = context(bits)
    eps_mp = ctx.mpf(eps)
    target = rz(angle, bits) if kind == "rz" else rzx(angle, bits)
    total = 0
    while True:
        U, trials = _trial_loop(kind, angle, eps_mp, rng_, bits, max_trials - total)
        total += trials
        ft, braid, d = _finish(U, target, bits, db)
        if d <= eps_mp:
            break
        # only reachable if the region and the distance disagree; keep sampling
    elapsed = int((time.perf_counter() - start) * 1000)
    return CompileResult(U, ft, braid, d, total, eps_mp, target_text, seed, elapsed, kind)


def _angle_text(kind: str, angle) -> str:
    import mpmath

    return f"{'Rz' if kind == 'rz' else 'RzX'}({mpmath.nstr(mpmath.mpf(angle), 20)})"


def compile_rz(angle, eps, rng=None, *, bits=None, max_trials=MAX_TRIALS, db=None, target=None, seed=None) -> CompileResult:
    """Braid approximating ``R_z(angle)`` to within ``eps``."""
    rng = rng if rng is not None else random.Random(seed)
    return _compile_rotation("rz", angle, eps, rng, bits, max_trials, db, target or _angle_text("rz", angle), seed)


def compile_rzx(angle, eps, rng=None, *, bits=None, max_trials=MAX_TRIALS, db=None, target=None, seed=None) -> CompileResult:
    """Braid approximating ``R_z(angle) X`` to within ``eps``."""
    rng = rng if rng is not None else random.Random(seed)
    return _compile_rotation("rzx", angle, eps, rng, bits, max_trials, db, target or _angle_text("rzx", angle), seed)


# -- general unitaries ---------------------------------------------------------------


@dataclass(frozen=True)
class Decomposition:
    """How a target splits into compilable pieces.

    ``rz``: ``R_z(angles[0])``.  ``rzx``: ``R_z(angles[0]) X``.
    ``three_rotation``: ``R_z(a) F R_z(b) F R_z(c)``.  ``fallback``: the three_rotation form of
    ``U X`` followed by ``X`` (written as ``R_z(0) X``).  All up to global phase.
    """

    kind: str
    angles: tuple


UNITARY_TOL = 1e-9


def nearest_unitary(U: Matrix2, tol=UNITARY_TOL) -> Matrix2:
    """Gram-Schmidt the columns of ``U`` at its working precision.

    Inputs typed as doubles are only unitary to about 1e-16; anything further
    off than ``tol`` is rejected.
    """
    ctx = U.ctx
    if U.unitarity_error() > tol:
        raise NotUnitary("target is not unitary")
    n1 = ctx.sqrt(abs(U.a) ** 2 + abs(U.c) ** 2)
    a, c = U.a / n1, U.c / n1
    proj = ctx.conj(a) * U.b + ctx.conj(c) * U.d
    b, d = U.b - proj * a, U.d - proj * c
    n2 = ctx.sqrt(abs(b) ** 2 + abs(d) ** 2)
    return Matrix2(a, b / n2, c, d / n2, U.bits)


def _special(U: Matrix2) -> Matrix2:
    U = nearest_unitary(U)
    return U.scale(1 / U.ctx.sqrt(U.det()))


def _three_rotation_angles(S: Matrix2):
    ctx = S.ctx
    tau = (ctx.sqrt(5) - 1) / 2
    a, b = S.a, S.b
    cos_b = (abs(a) ** 2 / tau**2 - 1 - tau**2) / (2 * tau)
    beta = ctx.acos(max(-1, min(1, cos_b)))
    inner = tau * ctx.expj(beta / 2) + tau**2 * ctx.expj(-beta / 2)
    total = 2 * (ctx.arg(inner) - ctx.arg(a))
    if abs(b) > ctx.mpf(2) ** (-(S.bits // 2)):
        diff = 2 * (ctx.arg(b) + ctx.pi / 2)
    else:
        diff = -total
    return ((total - diff) / 2, beta, (total + diff) / 2)


def decompose_general(U: Matrix2) -> Decomposition:
    S = _special(U)
    ctx = S.ctx
    tol = ctx.mpf(2) ** (-(S.bits // 2))
    lower = ctx.sqrt(5) - 2  # 2 tau - 1
    au = abs(S.a)
    if au <= tol:
        return Decomposition("rzx", (ctx.arg(S.c) - ctx.arg(S.b),))
    if abs(S.b) <= tol:
        return Decomposition("rz", (ctx.arg(S.d) - ctx.arg(S.a),))
    if au >= lower:
        return Decomposition("three_rotation", _three_rotation_angles(S))
    UX = _special(Matrix2(S.b, S.a, S.d, S.c, S.bits))
    return Decomposition("fallback", _three_rotation_angles(UX))


def decomposition_matrix(dec: Decomposition, bits: int) -> Matrix2:
    from .circuit import f_matrix

    if dec.kind == "rz":
        return rz(dec.angles[0], bits)
    if dec.kind == "rzx":
        return rzx(dec.angles[0], bits)
    a, b, c = dec.angles
    f = f_matrix(bits)
    m = rz(a, bits) @ f @ rz(b, bits) @ f @ rz(c, bits)
    return m @ rzx(0, bits) if dec.kind == "fallback" else m


def compile_unitary(U: Matrix2, eps, rng=None, *, bits=None, max_trials=MAX_TRIALS, db=None, target="U", seed=None) -> CompileResult:
    """Compile an arbitrary 2x2 unitary by splitting it into rotation segments.

    Each segment gets an equal share of ``eps``; if the assembled circuit misses
    the bound the shares are cut to ``eps/6`` and the segments are recompiled once.
    """
    start = time.perf_counter()
    rng = rng if rng is not None else random.Random(seed)
    bits = bits or working_bits(eps)
    ctx = context(bits)
    eps_mp = ctx.mpf(eps)
    target_m = nearest_unitary(Matrix2(*(ctx.mpc(x) for x in U.entries()), bits=max(U.bits, bits)))
    dec = decompose_general(target_m)
    plan: list[tuple[str, object]]
    if dec.kind in ("rz", "rzx"):
        plan = [(dec.kind, dec.angles[0])]
    else:
        a, b, c = dec.angles
        plan = [("rz", a), ("F", None), ("rz", b), ("F", None), ("rz", c)]
        if dec.kind == "fallback":
            plan.append(("rzx", ctx.mpf(0)))
    n_seg = sum(1 for k, _ in plan if k != "F")
    for share in (eps_mp / n_seg, eps_mp / 6):
        product: Optional[ExactUnitary] = None
        trials = 0
        segments = []
        for kind, angle in plan:
            if kind == "F":
                piece = F_GATE
            else:
                fn = compile_rz if kind == "rz" else compile_rzx
                res = fn(angle, share, rng, bits=working_bits(share), max_trials=max_trials - trials)
                trials += res.trials
                piece = res.exact
                segments.append(res)
            product = piece if product is None else exact_mul(product, piece)
        ft, braid, d = _finish(product, target_m, bits, db)
        if d <= eps_mp or n_seg == 1:
            break
    elapsed = int((time.perf_counter() - start) * 1000)
    return CompileResult(product, ft, braid, d, trials, eps_mp, target, seed, elapsed, dec.kind, segments)


# -- angle expressions ------------------------------------------------------------------

_PI_EXPR = re.compile(r"^([+-]?)(\d+(?:/\d+)*)?\*?pi(?:/(\d+))?$")
_DECIMAL = re.compile(r"^[+-]?(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?$")


def parse_angle(text: str, bits: int = 256):
    """Parse ``pi/128``, ``3pi/7``, ``-2/3pi``, ``0.45`` into an mpf at ``bits``."""
    ctx = context(bits)
    s = text.strip().replace(" ", "")
    m = _PI_EXPR.match(s)
    if m:
        sign, coef, den = m.groups()
        value = ctx.pi
        if coef:
            parts = [int(x) for x in coef.split("/")]
            if any(p == 0 for p in parts[1:]):
                raise AngleSyntaxError(f"division by zero in {text!r}")
            value *= parts[0]
            for p in parts[1:]:
                value /= p
        if den is not None:
            if int(den) == 0:
                raise AngleSyntaxError(f"division by zero in {text!r}")
            value /= int(den)
        return -value if sign == "-" else value
    if _DECIMAL.match(s):
        return ctx.mpf(s)
    raise AngleSyntaxError(f"cannot parse angle {text!r}")
