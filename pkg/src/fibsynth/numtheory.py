"""Relative norm equations ``|x|^2 = xi`` over Z[omega], and their helpers.

The solver handles the "easy" right-hand sides: after a cheap factorization
every odd-multiplicity factor must have a prime norm ``p`` with ``p = 5`` or
``p = 1 (mod 5)``.  Anything else is reported as unsolved, which is not a proof
that no solution exists.
"""

from __future__ import annotations

import math
import random
from typing import Optional

from .rings import TAU, THETA, NotDivisible, ZOmega, ZTau

FactorList = list[tuple[ZTau, int]]

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71)

ONE_PLUS_OMEGA = ZOmega(1, 1)
TWO_MINUS_TAU = ZTau(2, -1)
FIVE = ZTau(5)
# 2*tau + 1 has |.|^2 = 5
ROOT_OF_FIVE = ZTau(1, 2)


class NotAResidue(ValueError):
    pass


class NotAUnit(ValueError):
    pass


def _default_rng(rng: Optional[random.Random]) -> random.Random:
    return rng if rng is not None else random.Random(0)


def is_prime(n: int, rounds: int = 40, rng: Optional[random.Random] = None) -> bool:
    """Miller-Rabin probable-prime test.

    The false-positive probability for composite ``n`` is at most ``4**-rounds``.
    Bases are drawn from ``rng`` so the verdict is reproducible.
    """
    if n < 2:
        return False
    for p in _SMALL_PRIMES:
        if n == p:
            return True
        if n % p == 0:
            return False
    rng = _default_rng(rng)
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for _ in range(rounds):
        x = pow(rng.randrange(2, n - 1), d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def tonelli_shanks(n: int, p: int, rng: Optional[random.Random] = None) -> int:
    """Square root of ``n`` modulo the odd prime ``p``.

    Returns the smaller of the two roots ``{r, p - r}``.  Raises
    :class:`NotAResidue` when ``n`` turns out not to be a quadratic residue.
    """
    n %= p
    if n == 0:
        return 0
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    if s == 1:
        r = pow(n, (p + 1) // 4, p)
        if r * r % p != n:
            raise NotAResidue(f"{n} is not a square modulo {p}")
        return min(r, p - r)
    rng = _default_rng(rng)
    while True:
        z = rng.randrange(2, p)
        if pow(z, (p - 1) // 2, p) == p - 1:
            break
    c = pow(z, q, p)
    r = pow(n, (q + 1) // 2, p)
    t = pow(n, q, p)
    m = s
    while t != 1:
        i, t2 = 0, t
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
            if i == m:
                raise NotAResidue(f"{n} is not a square modulo {p}")
        b = pow(c, 1 << (m - i - 1), p)
        r = r * b % p
        c = b * b % p
        t = t * c % p
        m = i
    return min(r, p - r)


def splitting_root(xi: ZTau, rng: Optional[random.Random] = None) -> int:
    """Integer ``M`` with ``M^2 = tau - 2`` modulo ``xi``.

    Requires ``N(xi)`` to be an odd prime ``p = 1 (mod 5)``; since ``Z[tau]/(xi)``
    is then ``Z/p`` with ``tau = -a/b``, the root is taken modulo ``p``.
    """
    p = abs(xi.norm())
    if p % 5 != 1:
        raise ValueError(f"norm {p} of {xi} is not 1 mod 5")
    if xi.b % p == 0:
        raise ValueError(f"{xi}: b is divisible by its norm {p}")
    b1 = pow(xi.b, -1, p)
    return tonelli_shanks((-xi.a * b1 - 2) % p, p, rng)


def _residue(x: ZOmega) -> int:
    # Z[w]/(1+w) = Z/5, with w = -1
    return (x.a - x.b + x.c - x.d) % 5


def _strip_one_plus_omega(x: ZOmega) -> ZOmega:
    while x and _residue(x) == 0:
        x = x.divide_exact(ONE_PLUS_OMEGA)
    return x


def _unit_table() -> dict[int, list[ZOmega]]:
    table: dict[int, list[ZOmega]] = {r: [] for r in range(1, 5)}
    for j in range(-2, 3):
        tj = (TAU**j).to_zomega()
        for k in range(10):
            unit = tj.mul_omega(k)
            table[_residue(unit)].append(unit)
    return table


_UNITS_BY_RESIDUE = _unit_table()


def binary_gcd(x: ZOmega, y: ZOmega) -> ZOmega:
    """A greatest common divisor in Z[omega], unique only up to a unit.

    Shared factors of ``1 + omega`` are peeled off first.  Then the pair is
    repeatedly replaced by the smaller element and a unit combination
    ``a - w*b`` that vanishes modulo ``1 + omega``; among the admissible units the
    one minimizing the absolute norm is taken.
    """
    a, b = ZOmega.coerce(x), ZOmega.coerce(y)
    common = ZOmega(1)
    while a and b and _residue(a) == 0 and _residue(b) == 0:
        a = a.divide_exact(ONE_PLUS_OMEGA)
        b = b.divide_exact(ONE_PLUS_OMEGA)
        common = common * ONE_PLUS_OMEGA
    # (1 + w) is prime and no longer common, so it can be dropped from either side
    a, b = _strip_one_plus_omega(a), _strip_one_plus_omega(b)
    na, nb = a.abs_norm(), b.abs_norm()
    while a and b:
        if na < nb:
            a, b, na, nb = b, a, nb, na
        want = _residue(a) * pow(_residue(b), -1, 5) % 5
        best, best_norm = None, None
        for unit in _UNITS_BY_RESIDUE[want]:
            cand = a - unit * b
            n = cand.abs_norm()
            if best_norm is None or n < best_norm:
                best, best_norm = cand, n
        a = _strip_one_plus_omega(best)
        na = a.abs_norm()
    return common * (a if a else b)


_SMALL_UNITS = {
    (1, 0): 0,
    (0, 1): 1,
    (1, -1): 2,
    (1, 1): -1,
}


def unit_dlog(u: ZTau) -> tuple[int, int]:
    """Return ``(s, k)`` with ``u == s * tau**k`` and ``s`` in ``{1, -1}``."""
    if abs(u.norm()) != 1:
        raise NotAUnit(f"{u} is not a unit of Z[tau]")
    a, b = u.a, u.b
    s, k = 1, 0
    if a < 0 or (a == 0 and b < 0):
        a, b, s = -a, -b, -s
    mu = a * b
    while abs(mu) > 1:
        if mu > 1:
            # multiply by tau
            a, b = b, a - b
            k -= 1
        else:
            # multiply by 1/tau = 1 + tau
            a, b = a + b, a
            k += 1
        mu = a * b
    if (a, b) in _SMALL_UNITS:
        return s, k + _SMALL_UNITS[(a, b)]
    if (-a, -b) in _SMALL_UNITS:
        return -s, k + _SMALL_UNITS[(-a, -b)]
    raise AssertionError(f"unit reduction of {u} ended at {a}+{b}t")


def easy_factor(xi: ZTau) -> FactorList:
    """Minimum-effort factorization of ``xi``.

    Integer content ``c`` is split off as ``d^2`` or ``5*d^2`` (otherwise the input
    is returned whole), and a single factor ``2 - tau`` is split off when the
    remaining norm is divisible by 5.  Content ``1`` and unit factors are not
    listed, so the product equals ``xi`` only up to a unit.
    """
    if not xi:
        raise ValueError("cannot factor zero")
    c = math.gcd(xi.a, xi.b)
    xi1 = ZTau(xi.a // c, xi.b // c)
    d = math.isqrt(c)
    out: FactorList = []
    if d * d == c:
        if d > 1:
            out.append((ZTau(d), 2))
    elif c % 5 == 0 and math.isqrt(c // 5) ** 2 == c // 5:
        d = math.isqrt(c // 5)
        if d > 1:
            out.append((ZTau(d), 2))
        out.append((FIVE, 1))
    else:
        return [(xi, 1)]
    if xi1.norm() % 5 == 0:
        out.append((TWO_MINUS_TAU, 1))
        xi1 = xi1.divide_exact(TWO_MINUS_TAU)
    if abs(xi1.norm()) != 1:
        out.append((xi1, 1))
    return out


def easy_solvable(fl: FactorList, rng: Optional[random.Random] = None, rounds: int = 40) -> bool:
    """True when every odd-multiplicity factor is 5 or has prime norm 0 or 1 mod 5."""
    for xi, k in fl:
        if k % 2 == 1 and xi != FIVE:
            p = xi.norm()
            if p % 5 not in (0, 1) or not is_prime(p, rounds, rng):
                return False
    return True


def _positive_unit_sqrt(u: ZTau) -> ZTau:
    s, m = unit_dlog(u)
    assert s == 1 and m % 2 == 0, f"unit {u} = {s}*tau^{m} is not a positive square"
    return TAU ** (m // 2)


def _prime_factor_solution(xi: ZTau, rng: Optional[random.Random]) -> ZOmega:
    if abs(xi.norm()) == 5:
        # associate of 2 - tau
        unit = xi.divide_exact(TWO_MINUS_TAU)
        return THETA * _positive_unit_sqrt(unit)
    m = splitting_root(xi, rng)
    y = binary_gcd(xi.to_zomega(), ZOmega(m) - THETA)
    unit = xi.divide_exact(y.norm_i())
    return y * _positive_unit_sqrt(unit)


def solve_from_factors(xi: ZTau, fl: FactorList, rng: Optional[random.Random] = None) -> ZOmega:
    """Solve ``|x|^2 = xi`` given an easy-solvable factor list of ``xi``."""
    x = ZOmega(1)
    for factor, mult in fl:
        if mult // 2:
            x = x * factor ** (mult // 2)
        if mult % 2 == 1:
            if factor == FIVE:
                x = x * ROOT_OF_FIVE
            elif factor == TWO_MINUS_TAU:
                x = x * THETA
            else:
                x = x * _prime_factor_solution(factor, rng)
    # units dropped by easy_factor are restored here
    residual = xi.divide_exact(x.norm_i())
    x = x * _positive_unit_sqrt(residual)
    assert x.norm_i() == xi, f"norm equation solution {x} is wrong for {xi}"
    return x


def solve_norm_equation(xi: ZTau, rng: Optional[random.Random] = None) -> Optional[ZOmega]:
    """Find ``x`` in Z[omega] with ``|x|^2 == xi``, or return None (unsolved).

    None means the instance was negative or not easy; it does not certify
    that no solution exists.
    """
    if not xi:
        return ZOmega(0)
    if xi.sign() < 0 or xi.bullet().sign() < 0:
        return None
    fl = easy_factor(xi)
    if not easy_solvable(fl, rng):
        return None
    return solve_from_factors(xi, fl, rng)


__all__ = [
    "FactorList",
    "NotAResidue",
    "NotAUnit",
    "NotDivisible",
    "binary_gcd",
    "easy_factor",
    "easy_solvable",
    "is_prime",
    "solve_from_factors",
    "solve_norm_equation",
    "splitting_root",
    "tonelli_shanks",
    "unit_dlog",
]
