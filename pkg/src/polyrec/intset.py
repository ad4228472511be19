"""Finite integer sets A inside [1, n] and deterministic set generators."""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable


@dataclass(frozen=True)
class IntegerSet:
    """A subset of [1, n], stored sorted.  Element n plays the role of 0
    when the set is read modulo n."""

    n: int
    elements: tuple[int, ...]

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("ambient bound must be a positive integer")
        elems = tuple(sorted(set(int(e) for e in self.elements)))
        if elems and (elems[0] < 1 or elems[-1] > self.n):
            raise ValueError(f"elements must lie in [1, {self.n}]")
        object.__setattr__(self, "elements", elems)

    @classmethod
    def from_iterable(cls, n: int, items: Iterable[int]) -> "IntegerSet":
        return cls(n, tuple(items))

    @property
    def size(self) -> int:
        return len(self.elements)

    @property
    def density(self) -> Fraction:
        return Fraction(self.size, self.n)

    def residues(self) -> tuple[int, ...]:
        """Images modulo n (so the element n becomes 0)."""
        return tuple(e % self.n for e in self.elements)

    def __contains__(self, x) -> bool:
        return x in set(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)


def generate_set(kind: str, n: int, *, start: int = 1, step: int = 1,
                 density: float = 0.5, seed: int = 0) -> IntegerSet:
    """Build one of the stock test sets inside [1, n].

    kind 'full' is all of [1, n]; 'evens' the even numbers; 'ap' the
    arithmetic progression start, start+step, ... capped at n; 'random'
    keeps each element independently with the given density, drawn from
    the Mersenne Twister seeded with `seed` (portable across platforms).
    """
    if n < 1:
        raise ValueError("n must be positive")
    if kind == "full":
        elems: Iterable[int] = range(1, n + 1)
    elif kind == "evens":
        elems = range(2, n + 1, 2)
    elif kind == "ap":
        if step < 1 or start < 1:
            raise ValueError("ap needs start >= 1 and step >= 1")
        elems = range(start, n + 1, step)
    elif kind == "random":
        if not 0.0 <= density <= 1.0:
            raise ValueError("density must lie in [0, 1]")
        rng = random.Random(seed)
        elems = [x for x in range(1, n + 1) if rng.random() < density]
    else:
        raise ValueError(f"unknown set kind {kind!r} (want full|evens|ap|random)")
    return IntegerSet(n, tuple(elems))
