"""Explicit-precision real and complex scalars.

Every high-precision computation in the package goes through an
``mpmath.MPContext`` obtained from :func:`context`.  Contexts are cached
per bit count and never mutated after creation, so precision is always a
parameter of the call rather than ambient state.
"""

from __future__ import annotations

import math
from functools import lru_cache

import mpmath

MIN_BITS = 64


@lru_cache(maxsize=None)
def context(bits: int) -> mpmath.ctx_mp.MPContext:
    """Return a dedicated mpmath context working at ``bits`` of precision."""
    if bits < MIN_BITS:
        raise ValueError(f"precision must be at least {MIN_BITS} bits, got {bits}")
    ctx = mpmath.MPContext()
    ctx.prec = bits
    return ctx


def digits_to_bits(digits: int) -> int:
    return int(math.ceil(digits * math.log2(10)))


def working_bits(epsilon: float) -> int:
    """Bits used by the compile pipeline for target precision ``epsilon``.

    The decimal-digit budget is ``6*log10(1/eps) + 50``.
    """
    eps = mpmath.mpf(epsilon)
    if not 0 < eps < 1:
        raise ValueError(f"epsilon must lie in (0, 1), got {epsilon!r}")
    digits = int(math.ceil(6 * log10_inv(eps))) + 50
    return max(MIN_BITS, digits_to_bits(digits))


def log10_inv(epsilon) -> float:
    """``log10(1/epsilon)`` that survives epsilons below the double range."""
    eps = mpmath.mpf(epsilon)
    return float(-mpmath.log10(eps))
