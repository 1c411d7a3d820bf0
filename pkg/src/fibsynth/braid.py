"""Braid words over the generators sigma_1, sigma_2 of the three-strand braid group.

Since ``sigma_i^10`` is the identity, runs of one generator are merged and their
exponents kept in the balanced range ``-4..5``.  The cost of a word is the
number of elementary moves, ``sum(|e|)``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable


class BraidSyntaxError(ValueError):
    def __init__(self, message: str, position: int) -> None:
        super().__init__(f"{message} (at character {position})")
        self.position = position


def balanced(e: int) -> int:
    e %= 10
    return e - 10 if e > 5 else e


def _normalize(items: Iterable[tuple[int, int]]) -> tuple[tuple[int, int], ...]:
    stack: list[tuple[int, int]] = []
    for gen, exp in items:
        if gen not in (1, 2):
            raise ValueError(f"generator must be 1 or 2, got {gen}")
        if stack and stack[-1][0] == gen:
            exp += stack.pop()[1]
        exp = balanced(exp)
        if exp:
            stack.append((gen, exp))
    return tuple(stack)


@dataclass(frozen=True)
class BraidWord:
    """Sequence of ``(generator, exponent)`` runs in matrix-product order."""

    runs: tuple[tuple[int, int], ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "runs", _normalize(self.runs))

    @classmethod
    def from_letters(cls, letters: Iterable[tuple[int, int]]) -> BraidWord:
        return cls(tuple(letters))

    def letters(self) -> list[tuple[int, int]]:
        """Expand into unit moves ``(gen, +1 | -1)``."""
        out = []
        for gen, exp in self.runs:
            step = 1 if exp > 0 else -1
            out.extend([(gen, step)] * abs(exp))
        return out

    @property
    def sigma_count(self) -> int:
        return sum(abs(e) for _, e in self.runs)

    def __len__(self) -> int:
        return self.sigma_count

    def __add__(self, other: BraidWord) -> BraidWord:
        return BraidWord(self.runs + other.runs)

    def inverse(self) -> BraidWord:
        return BraidWord(tuple((g, -e) for g, e in reversed(self.runs)))

    def __str__(self) -> str:
        return format_braid(self)


def format_braid(word: BraidWord) -> str:
    return " ".join(f"s{g}" if e == 1 else f"s{g}^{e}" for g, e in word.runs)


_ITEM = re.compile(r"s([12])(?:\^([+-]?\d+))?")


def parse_braid(text: str) -> BraidWord:
    """Parse ``s1^3 s2^-2 s1``; exponents must lie in ``[-5, 5]`` and be nonzero."""
    items = []
    pos, n = 0, len(text)
    while pos < n:
        if text[pos].isspace():
            pos += 1
            continue
        m = _ITEM.match(text, pos)
        if not m:
            raise BraidSyntaxError("expected s1 or s2", pos)
        end = m.end()
        if end < n and not text[end].isspace():
            raise BraidSyntaxError("expected whitespace between items", end)
        exp = 1 if m.group(2) is None else int(m.group(2))
        if exp == 0 or not -5 <= exp <= 5:
            raise BraidSyntaxError(f"exponent {exp} outside [-5, 5] \\ {{0}}", m.start(2))
        items.append((int(m.group(1)), exp))
        pos = end
    return BraidWord(tuple(items))
