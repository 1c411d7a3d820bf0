"""Exact unitaries ``U[u, v, k]`` and their synthesis into F/T words.

``U[u, v, k]`` is the matrix::

    [[ u,          conj(v) * sqrt(tau) * w^k ],
     [ v*sqrt(tau), -conj(u) * w^k           ]]

with ``u, v`` in Z[omega] and ``|u|^2 + tau*|v|^2 = 1``.  Products of the
generators ``T = diag(1, w)`` and ``F = [[tau, sqrt(tau)], [sqrt(tau), -tau]]``
stay in this form, and every such matrix is a finite F/T word.

Words are written in matrix-product order: the leftmost letter is the
leftmost factor.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Iterator

from .braid import BraidWord
from .rings import TAU, ZOmega, ZTau

TAU_Z = TAU.to_zomega()


class FormViolation(ArithmeticError):
    """A matrix expected to be exact is not of the form ``U[u, v, k]``."""


class NoTerminalForm(ArithmeticError):
    pass


@dataclass(frozen=True)
class ExactUnitary:
    u: ZOmega
    v: ZOmega
    k: int = 0

    def __post_init__(self) -> None:
        object.__setattr__(self, "u", ZOmega.coerce(self.u))
        object.__setattr__(self, "v", ZOmega.coerce(self.v))
        object.__setattr__(self, "k", self.k % 10)

    def is_unitary(self) -> bool:
        return self.u.norm_i() + TAU * self.v.norm_i() == ZTau(1)

    def check(self) -> ExactUnitary:
        if not self.is_unitary():
            raise FormViolation(f"|u|^2 + tau|v|^2 != 1 for {self}")
        return self

    def __matmul__(self, other: ExactUnitary) -> ExactUnitary:
        return exact_mul(self, other)

    def gauss(self) -> int:
        return self.u.gauss_complexity()

    def __str__(self) -> str:
        return f"U[{self.u}, {self.v}, {self.k}]"


IDENTITY = ExactUnitary(ZOmega(1), ZOmega(0), 5)
T_GATE = ExactUnitary(ZOmega(1), ZOmega(0), 6)
F_GATE = ExactUnitary(TAU_Z, ZOmega(1), 0)


def exact_mul(a: ExactUnitary, b: ExactUnitary) -> ExactUnitary:
    """Exact matrix product ``a @ b`` in ``U[u, v, k]`` form."""
    wk = ZOmega.omega_power(a.k)
    u = a.u * b.u + TAU_Z * wk * a.v.conj() * b.v
    v = a.v * b.u - wk * a.u.conj() * b.v
    return ExactUnitary(u, v, a.k + b.k + 5)


def apply_T(a: ExactUnitary, power: int = 1) -> ExactUnitary:
    """``T^power @ a``: scales the second row by ``w^power``."""
    return ExactUnitary(a.u, a.v.mul_omega(power), a.k + power)


def apply_F(a: ExactUnitary) -> ExactUnitary:
    """``F @ a``."""
    return ExactUnitary(TAU_Z * (a.u + a.v), a.u - TAU_Z * a.v, a.k + 5)


def apply_phase(a: ExactUnitary, s: int) -> ExactUnitary:
    """``w^s @ a``."""
    return ExactUnitary(a.u.mul_omega(s), a.v.mul_omega(s), a.k + 2 * s)


def gauss_of(a: ExactUnitary) -> int:
    return a.gauss()


@dataclass(frozen=True)
class FTWord:
    """``w^phase`` times a product of F and T letters.

    ``letters`` is a string over ``"F"`` and ``"T"``.
    """

    phase: int = 0
    letters: str = ""

    def __post_init__(self) -> None:
        object.__setattr__(self, "phase", self.phase % 10)
        if set(self.letters) - {"F", "T"}:
            raise ValueError(f"FT word may only contain F and T, got {self.letters!r}")

    def __len__(self) -> int:
        return len(self.letters)

    def __str__(self) -> str:
        return format_ft(self)

    def runs(self) -> list[tuple[str, int]]:
        out: list[tuple[str, int]] = []
        for ch in self.letters:
            if out and out[-1][0] == ch:
                out[-1] = (ch, out[-1][1] + 1)
            else:
                out.append((ch, 1))
        return out

    def to_exact(self) -> ExactUnitary:
        acc = apply_phase(IDENTITY, self.phase)
        # left-multiply from the rightmost letter inwards
        for ch, n in reversed(self.runs()):
            if ch == "T":
                acc = apply_T(acc, n)
            else:
                for _ in range(n):
                    acc = apply_F(acc)
        return acc

    @classmethod
    def from_exponents(cls, exponents, phase: int = 0) -> FTWord:
        """Build ``w^phase T^e0 F T^e1 F ... F T^en``."""
        parts = ["T" * (e % 10) for e in exponents]
        return cls(phase, "F".join(parts))


def format_ft(word: FTWord) -> str:
    items = [] if word.phase == 0 else [f"w^{word.phase}"]
    for ch, n in word.runs():
        items.append(ch if n == 1 else f"{ch}^{n}")
    return " ".join(items) if items else "I"


_FT_ITEM = re.compile(r"^(w|F|T)(?:\^(\d+))?$")


def parse_ft(text: str) -> FTWord:
    """Inverse of :func:`format_ft`; ``I`` denotes the empty word."""
    phase, letters = 0, []
    for pos, item in enumerate(text.split()):
        if item == "I":
            continue
        m = _FT_ITEM.match(item)
        if not m:
            raise ValueError(f"bad FT item {item!r} (item {pos})")
        sym, n = m.group(1), int(m.group(2) or 1)
        if sym == "w":
            phase += n
        else:
            letters.append(sym * n)
    return FTWord(phase, "".join(letters))


def _reduction_steps(U: ExactUnitary) -> Iterator[tuple[int, ExactUnitary]]:
    """Yield ``(J, F T^J U_r)`` for each greedy step until G <= 2."""
    current = U
    g = current.gauss()
    while g > 2:
        best_j, best, best_g = None, None, None
        for j in range(1, 11):
            cand = apply_F(apply_T(current, j))
            cg = cand.gauss()
            if best_g is None or cg < best_g:
                best_j, best, best_g = j, cand, cg
        current, g = best, best_g
        yield best_j, current


def synthesis_trace(U: ExactUnitary) -> list[int]:
    """Gauss complexities ``[G(U), G(U_1), ...]`` visited by :func:`exact_synthesize`."""
    return [U.gauss()] + [r.gauss() for _, r in _reduction_steps(U)]


def exact_synthesize(U: ExactUnitary) -> FTWord:
    """F/T word (with phase) whose product is exactly ``U``.

    Greedily multiplies by ``F T^J`` with ``J`` minimizing the Gauss complexity
    (ties go to the smallest ``J``) until the remainder is ``w^k T^j``.
    """
    exps: list[int] = []
    remainder = U
    for j, remainder in _reduction_steps(U):
        exps.append((10 - j) % 10)
    for k in range(10):
        for j in range(10):
            if apply_phase(apply_T(IDENTITY, j), k) == remainder:
                return FTWord.from_exponents(exps + [j], phase=k)
    raise NoTerminalForm(f"{remainder} is not w^k T^j")


def step_bound(U: ExactUnitary, slack: int = 5) -> float:
    return math.log(U.gauss(), 3) + slack


# sigma_1 = w^6 T^7 and sigma_2 = F sigma_1 F
SIGMA1 = apply_phase(apply_T(IDENTITY, 7), 6)
SIGMA2 = apply_F(exact_mul(SIGMA1, F_GATE))


def _sigma_power(gen: int, exp: int) -> ExactUnitary:
    # sigma_1^e = w^(6e) T^(7e)
    m = apply_phase(apply_T(IDENTITY, 7 * exp), 6 * exp)
    return m if gen == 1 else apply_F(exact_mul(m, F_GATE))


def braid_to_exact(word: BraidWord) -> ExactUnitary:
    acc = IDENTITY
    for gen, exp in word.runs:
        acc = exact_mul(acc, _sigma_power(gen, exp))
    return acc


def ft_to_braid(word: FTWord) -> BraidWord:
    """Rewrite an F/T word as a braid, dropping global phase.

    Uses ``T = w^2 sigma_1^3`` and ``F = w^4 sigma_1 sigma_2 sigma_1``.
    """
    items: list[tuple[int, int]] = []
    for ch, n in word.runs():
        if ch == "T":
            items.append((1, 3 * n))
        else:
            items.extend([(1, 1), (2, 1), (1, 1)] * n)
    return BraidWord(tuple(items))
