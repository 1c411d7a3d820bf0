"""Exact arithmetic in the golden integers Z[tau] and the cyclotomic ring Z[omega].

``tau = (sqrt(5) - 1) / 2`` satisfies ``tau**2 = 1 - tau`` and ``omega`` is the
primitive tenth root of unity ``exp(i*pi/5)``.  Elements are immutable and
hashable; all coordinates are Python integers, so nothing ever overflows.
"""

from __future__ import annotations

import re
from functools import total_ordering

from .precision import context


class NotDivisible(ArithmeticError):
    """Raised when an exact quotient does not exist in the ring."""


def _floor_half_div(n: int, d: int) -> int:
    """Nearest integer to n/d for d > 0, ties rounded up."""
    return (2 * n + d) // (2 * d)


@total_ordering
class ZTau:
    """The real quadratic integer ``a + b*tau``.

    Ordering follows the real embedding and is decided with integer
    arithmetic only.
    """

    __slots__ = ("a", "b")

    def __init__(self, a: int = 0, b: int = 0) -> None:
        object.__setattr__(self, "a", int(a))
        object.__setattr__(self, "b", int(b))

    def __setattr__(self, name, value):
        raise AttributeError("ZTau is immutable")

    @classmethod
    def coerce(cls, x: int | ZTau) -> ZTau:
        if isinstance(x, ZTau):
            return x
        if isinstance(x, int):
            return cls(x, 0)
        raise TypeError(f"cannot interpret {x!r} as ZTau")

    def __repr__(self) -> str:
        return f"ZTau({self.a}, {self.b})"

    def __str__(self) -> str:
        return format_ztau(self)

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = ZTau(other)
        if not isinstance(other, ZTau):
            return NotImplemented
        return self.a == other.a and self.b == other.b

    def __hash__(self) -> int:
        return hash(("ZTau", self.a, self.b))

    def __lt__(self, other) -> bool:
        return (self - ZTau.coerce(other)).sign() < 0

    def __bool__(self) -> bool:
        return bool(self.a or self.b)

    def __neg__(self) -> ZTau:
        return ZTau(-self.a, -self.b)

    def __add__(self, other) -> ZTau:
        if isinstance(other, int):
            return ZTau(self.a + other, self.b)
        if isinstance(other, ZTau):
            return ZTau(self.a + other.a, self.b + other.b)
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other) -> ZTau:
        if isinstance(other, (int, ZTau)):
            return self + (-ZTau.coerce(other))
        return NotImplemented

    def __rsub__(self, other) -> ZTau:
        return ZTau.coerce(other) - self

    def __mul__(self, other) -> ZTau:
        if isinstance(other, int):
            return ZTau(self.a * other, self.b * other)
        if isinstance(other, ZTau):
            a, b, c, d = self.a, self.b, other.a, other.b
            # (a + b t)(c + d t) with t^2 = 1 - t
            bd = b * d
            return ZTau(a * c + bd, a * d + b * c - bd)
        return NotImplemented

    __rmul__ = __mul__

    def __pow__(self, n: int) -> ZTau:
        if n < 0:
            return self.inverse() ** (-n)
        result, base = ZTau(1), self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def bullet(self) -> ZTau:
        """Galois conjugate: ``tau -> -1 - tau``."""
        return ZTau(self.a - self.b, -self.b)

    def norm(self) -> int:
        """``x * bullet(x) = a^2 - a*b - b^2``."""
        a, b = self.a, self.b
        return a * a - a * b - b * b

    def sign(self) -> int:
        """Sign of the real value, using integer arithmetic only."""
        # 2*(a + b*tau) = (2a - b) + b*sqrt(5)
        p, q = 2 * self.a - self.b, self.b
        if p >= 0 and q >= 0:
            return 0 if p == 0 and q == 0 else 1
        if p <= 0 and q <= 0:
            return -1
        diff = p * p - 5 * q * q
        if p > 0:
            return 1 if diff > 0 else -1
        return 1 if diff < 0 else -1

    def inverse(self) -> ZTau:
        n = self.norm()
        if n not in (1, -1):
            raise NotDivisible(f"{self} is not a unit")
        return self.bullet() * n

    def divide_exact(self, other: int | ZTau) -> ZTau:
        """Return ``q`` with ``q * other == self`` or raise :class:`NotDivisible`."""
        other = ZTau.coerce(other)
        if not other:
            raise ZeroDivisionError("division by zero in Z[tau]")
        n = other.norm()
        num = self * other.bullet()
        if num.a % n or num.b % n:
            raise NotDivisible(f"{self} is not divisible by {other}")
        return ZTau(num.a // n, num.b // n)

    def to_zomega(self) -> ZOmega:
        """Embed via ``tau = omega^2 - omega^3``."""
        return ZOmega(self.a, 0, self.b, -self.b)

    def to_real(self, bits: int):
        ctx = context(bits)
        t = (ctx.sqrt(5) - 1) / 2
        return self.a + self.b * t


class ZOmega:
    """The cyclotomic integer ``a + b*w + c*w^2 + d*w^3`` with ``w = exp(i*pi/5)``."""

    __slots__ = ("a", "b", "c", "d")

    def __init__(self, a: int = 0, b: int = 0, c: int = 0, d: int = 0) -> None:
        object.__setattr__(self, "a", int(a))
        object.__setattr__(self, "b", int(b))
        object.__setattr__(self, "c", int(c))
        object.__setattr__(self, "d", int(d))

    def __setattr__(self, name, value):
        raise AttributeError("ZOmega is immutable")

    @classmethod
    def coerce(cls, x: int | ZTau | ZOmega) -> ZOmega:
        if isinstance(x, ZOmega):
            return x
        if isinstance(x, ZTau):
            return x.to_zomega()
        if isinstance(x, int):
            return cls(x)
        raise TypeError(f"cannot interpret {x!r} as ZOmega")

    @classmethod
    def omega_power(cls, k: int) -> ZOmega:
        k %= 10
        sign = -1 if k >= 5 else 1
        k %= 5
        if k == 4:
            return cls(-sign, sign, -sign, sign)
        coords = [0, 0, 0, 0]
        coords[k] = sign
        return cls(*coords)

    @property
    def coords(self) -> tuple[int, int, int, int]:
        return (self.a, self.b, self.c, self.d)

    def __repr__(self) -> str:
        return f"ZOmega({self.a}, {self.b}, {self.c}, {self.d})"

    def __str__(self) -> str:
        return format_zomega(self)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, ZTau)):
            other = ZOmega.coerce(other)
        if not isinstance(other, ZOmega):
            return NotImplemented
        return self.coords == other.coords

    def __hash__(self) -> int:
        return hash(("ZOmega",) + self.coords)

    def __bool__(self) -> bool:
        return any(self.coords)

    def __neg__(self) -> ZOmega:
        return ZOmega(-self.a, -self.b, -self.c, -self.d)

    def __add__(self, other) -> ZOmega:
        if not isinstance(other, (int, ZTau, ZOmega)):
            return NotImplemented
        o = ZOmega.coerce(other)
        return ZOmega(self.a + o.a, self.b + o.b, self.c + o.c, self.d + o.d)

    __radd__ = __add__

    def __sub__(self, other) -> ZOmega:
        if not isinstance(other, (int, ZTau, ZOmega)):
            return NotImplemented
        return self + (-ZOmega.coerce(other))

    def __rsub__(self, other) -> ZOmega:
        return ZOmega.coerce(other) - self

    def __mul__(self, other) -> ZOmega:
        if isinstance(other, int):
            return ZOmega(self.a * other, self.b * other, self.c * other, self.d * other)
        if not isinstance(other, (ZTau, ZOmega)):
            return NotImplemented
        o = ZOmega.coerce(other)
        x0, x1, x2, x3 = self.coords
        y0, y1, y2, y3 = o.coords
        c0 = x0 * y0
        c1 = x0 * y1 + x1 * y0
        c2 = x0 * y2 + x1 * y1 + x2 * y0
        c3 = x0 * y3 + x1 * y2 + x2 * y1 + x3 * y0
        c4 = x1 * y3 + x2 * y2 + x3 * y1
        c5 = x2 * y3 + x3 * y2
        c6 = x3 * y3
        # w^4 = -1 + w - w^2 + w^3, w^5 = -1, w^6 = -w
        return ZOmega(c0 - c4 - c5, c1 + c4 - c6, c2 - c4, c3 + c4)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> ZOmega:
        if n < 0:
            raise ValueError("negative powers are not defined in Z[omega]")
        result, base = ZOmega(1), self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def conj(self) -> ZOmega:
        """Complex conjugate, ``w -> w^9``."""
        a, b, c, d = self.coords
        return ZOmega(a + b, -b, b - d, -b - c)

    def bullet(self) -> ZOmega:
        """The automorphism ``w -> w^3``; applying it twice conjugates."""
        a, b, c, d = self.coords
        return ZOmega(a + d, -c - d, d, b - d)

    def mul_omega(self, k: int) -> ZOmega:
        """Multiply by ``w^k`` via coordinate rotation."""
        x = self
        for _ in range(k % 10):
            a, b, c, d = x.coords
            # w * (a + b w + c w^2 + d w^3) = -d + (a + d) w + (b - d) w^2 + (c + d) w^3
            x = ZOmega(-d, a + d, b - d, c + d)
        return x

    def to_ztau(self) -> ZTau:
        """Inverse of :meth:`ZTau.to_zomega`; raises ValueError if not in the image."""
        if self.b != 0 or self.c != -self.d:
            raise ValueError(f"{self} does not lie in Z[tau]")
        return ZTau(self.a, self.c)

    def norm_i(self) -> ZTau:
        """``x * conj(x)``, the squared absolute value, as an element of Z[tau]."""
        n = self * self.conj()
        assert n.b == 0 and n.c == -n.d, f"N_i({self}) = {n} left Z[tau]"
        return ZTau(n.a, n.c)

    def abs_norm(self) -> int:
        """Absolute norm to Z, always non-negative."""
        return self.norm_i().norm()

    def gauss_complexity(self) -> int:
        """``|x|^2 + |bullet(x)|^2`` as a rational integer."""
        n = self.norm_i()
        # n + bullet(n) = (a + b t) + (a - b - b t)
        return 2 * n.a - n.b

    def divide_exact(self, other: int | ZTau | ZOmega) -> ZOmega:
        """Return ``q`` with ``q * other == self`` or raise :class:`NotDivisible`."""
        other = ZOmega.coerce(other)
        if not other:
            raise ZeroDivisionError("division by zero in Z[omega]")
        # other * cofactor = N(other) in Z
        ni = other.norm_i()
        cofactor = other.conj() * ni.bullet().to_zomega()
        n = ni.norm()
        num = self * cofactor
        if any(x % n for x in num.coords):
            raise NotDivisible(f"{self} is not divisible by {other}")
        return ZOmega(*(x // n for x in num.coords))

    def divides(self, other: ZOmega) -> bool:
        try:
            ZOmega.coerce(other).divide_exact(self)
        except NotDivisible:
            return False
        return True

    def to_complex(self, bits: int):
        ctx = context(bits)
        w = ctx.expjpi(ctx.mpf(1) / 5)
        return self.a + w * (self.b + w * (self.c + w * self.d))


OMEGA = ZOmega(0, 1)
ONE = ZOmega(1)
TAU = ZTau(0, 1)
PHI = ZTau(1, 1)
# primitive element w + w^4, whose square is tau - 2
THETA = ZOmega(-1, 2, -1, 1)


def ztau_mul(x: ZTau, y: ZTau) -> ZTau:
    return x * y


def zomega_mul(x: ZOmega, y: ZOmega) -> ZOmega:
    return x * y


def bullet_tau(x: ZTau) -> ZTau:
    return x.bullet()


def bullet_omega(x: ZOmega) -> ZOmega:
    return x.bullet()


def conj_omega(x: ZOmega) -> ZOmega:
    return x.conj()


def norm_tau(x: ZTau) -> int:
    return x.norm()


def norm_i(x: ZOmega) -> ZTau:
    return x.norm_i()


def gauss_complexity(x: ZOmega) -> int:
    return x.gauss_complexity()


def ztau_sign(x: ZTau) -> int:
    return x.sign()


def ztau_div_exact(x: ZTau, y: ZTau) -> ZTau:
    return x.divide_exact(y)


def zomega_div_exact(x: ZOmega, y: ZOmega) -> ZOmega:
    return x.divide_exact(y)


def to_real(x: ZTau, bits: int):
    return x.to_real(bits)


def to_complex(x: ZOmega, bits: int):
    return x.to_complex(bits)


# -- textual encoding ------------------------------------------------------

_TERM = re.compile(r"\s*([+-]?)\s*(\d*)\s*(\*?\s*(t|w3|w2|w))?\s*")


def _parse_terms(text: str, symbols: dict[str, int], size: int, kind: str) -> list[int]:
    coords = [0] * size
    s = text.strip()
    if not s:
        raise ValueError(f"empty {kind} literal")
    pos = 0
    first = True
    while pos < len(s):
        m = _TERM.match(s, pos)
        if not m or m.end() == pos:
            raise ValueError(f"bad {kind} literal {text!r} at position {pos}")
        sign, digits, _, sym = m.groups()
        if not first and not sign:
            raise ValueError(f"bad {kind} literal {text!r}: missing operator at {pos}")
        if not digits and not sym:
            raise ValueError(f"bad {kind} literal {text!r} at position {pos}")
        coef = int(digits) if digits else 1
        if sign == "-":
            coef = -coef
        if sym is None:
            idx = 0
        elif sym in symbols:
            idx = symbols[sym]
        else:
            raise ValueError(f"symbol {sym!r} not allowed in a {kind} literal")
        coords[idx] += coef
        pos = m.end()
        first = False
    return coords


def parse_ztau(text: str) -> ZTau:
    """Parse ``a+b*t`` (terms in any order, coefficients optional)."""
    return ZTau(*_parse_terms(text, {"t": 1}, 2, "Z[tau]"))


def parse_zomega(text: str) -> ZOmega:
    """Parse ``a+b*w+c*w2+d*w3``."""
    return ZOmega(*_parse_terms(text, {"w": 1, "w2": 2, "w3": 3}, 4, "Z[omega]"))


def _format_terms(coords, names) -> str:
    parts = []
    for coef, name in zip(coords, names):
        if coef == 0:
            continue
        if not name:
            parts.append(f"{coef:+d}")
        elif coef in (1, -1):
            parts.append(("+" if coef > 0 else "-") + name)
        else:
            parts.append(f"{coef:+d}*{name}")
    if not parts:
        return "0"
    out = "".join(parts)
    return out[1:] if out.startswith("+") else out


def format_ztau(x: ZTau) -> str:
    return _format_terms((x.a, x.b), ("", "t"))


def format_zomega(x: ZOmega) -> str:
    return _format_terms(x.coords, ("", "w", "w2", "w3"))
