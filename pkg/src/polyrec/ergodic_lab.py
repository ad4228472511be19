"""Finite measure-preserving systems and constructive recurrence searches.

A FiniteMPSystem is a permutation T of {0, ..., m-1} carrying uniform
measure.  recurrence_measure computes mu(A intersect T^-n A) exactly.
khintchine_search finds a pair of prescribed times whose difference
nearly achieves the optimal intersection level mu(A)^2, by the
Cauchy-Schwarz averaging argument; success is guaranteed once the time
list is longer than 1/eps.  griesmer_search extends this to several
shift constants at once through a Ramsey edge-coloring recursion.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

__all__ = [
    "FiniteMPSystem",
    "KhintchineResult",
    "LevelInfo",
    "GriesmerResult",
    "recurrence_measure",
    "khintchine_search",
    "griesmer_search",
]


@dataclass(frozen=True)
class FiniteMPSystem:
    """A bijection of {0, ..., m-1} with uniform measure."""

    mapping: tuple[int, ...]

    def __post_init__(self):
        mapping = tuple(int(x) for x in self.mapping)
        if not mapping:
            raise ValueError("system must be nonempty")
        if sorted(mapping) != list(range(len(mapping))):
            raise ValueError("mapping is not a permutation")
        object.__setattr__(self, "mapping", mapping)

    @classmethod
    def rotation(cls, m: int, a: int = 1) -> "FiniteMPSystem":
        """x -> x + a on Z_m."""
        if m < 1:
            raise ValueError("need m >= 1")
        return cls(tuple((x + a) % m for x in range(m)))

    @classmethod
    def skew_product(cls, m: int, a: int = 1) -> "FiniteMPSystem":
        """(x, y) -> (x + a, y + x) on Z_m x Z_m, flattened as x*m + y."""
        if m < 1:
            raise ValueError("need m >= 1")
        out = []
        for x in range(m):
            for y in range(m):
                out.append(((x + a) % m) * m + (y + x) % m)
        return cls(tuple(out))

    @classmethod
    def from_permutation(cls, perm: Sequence[int]) -> "FiniteMPSystem":
        return cls(tuple(perm))

    @property
    def size(self) -> int:
        return len(self.mapping)

    def cycles(self) -> list[list[int]]:
        seen = [False] * self.size
        out = []
        for start in range(self.size):
            if seen[start]:
                continue
            cyc = [start]
            seen[start] = True
            x = self.mapping[start]
            while x != start:
                cyc.append(x)
                seen[x] = True
                x = self.mapping[x]
            out.append(cyc)
        return out

    def order(self) -> int:
        """Least t >= 1 with T^t = identity (lcm of cycle lengths)."""
        out = 1
        for cyc in self.cycles():
            out = math.lcm(out, len(cyc))
        return out

    def power_map(self, shift: int) -> tuple[int, ...]:
        """T^shift as a permutation tuple; shift may be negative or huge.

        Each cycle is rotated by shift mod its length, so the cost does
        not depend on the magnitude of the shift.
        """
        out = [0] * self.size
        for cyc in self.cycles():
            r = shift % len(cyc)
            for i, x in enumerate(cyc):
                out[x] = cyc[(i + r) % len(cyc)]
        return tuple(out)

    def power_system(self, c: int) -> "FiniteMPSystem":
        """The system with map T^c on the same space."""
        return FiniteMPSystem(self.power_map(c))

    def validate_subset(self, subset) -> frozenset:
        pts = frozenset(int(x) for x in subset)
        if any(x < 0 or x >= self.size for x in pts):
            raise ValueError("subset contains points outside the space")
        return pts


def recurrence_measure(system: FiniteMPSystem, subset, shift: int) -> Fraction:
    """mu(A intersect T^-shift A), exactly.

    A point x lies in the intersection iff x and T^shift(x) both lie in
    A; the measure is symmetric under shift -> -shift and periodic with
    period order(T).
    """
    pts = system.validate_subset(subset)
    fwd = system.power_map(shift)
    hits = sum(1 for x in pts if fwd[x] in pts)
    return Fraction(hits, system.size)


@dataclass(frozen=True)
class KhintchineResult:
    found: bool
    pair: Optional[tuple[int, int]]   # 1-based indices (j, k), j < k
    n: Optional[int]                  # v_k - v_j
    measure: Optional[Fraction]
    threshold: Fraction
    strict: Optional[bool]            # whether measure > threshold strictly
    pairs_scanned: int


def khintchine_search(system: FiniteMPSystem, subset, eps: float,
                      times: Sequence[int],
                      permissive: bool = False) -> KhintchineResult:
    """First pair of times whose difference nearly attains mu(A)^2.

    Scans pairs (j, k) with j < k in lexicographic order and returns the
    first with mu(A intersect T^-(v_k - v_j) A) >= mu(A)^2 - eps; all
    comparisons are exact rational arithmetic.  When the time list has
    at least ceil(1/eps) entries, a success is guaranteed to exist (the
    averaging argument: if every pair failed, the second moment of
    sum_j 1_{T^-v_j A} would fall below its Cauchy-Schwarz floor), and
    exhausting the scan raises AssertionError.  Shorter lists are
    rejected unless permissive=True, in which case exhaustion is a
    reported failure.
    """
    if eps <= 0:
        raise ValueError("need eps > 0")
    times = [int(v) for v in times]
    if len(set(times)) != len(times):
        raise ValueError("times must be distinct")
    needed = max(2, math.ceil(1.0 / eps))
    guaranteed = len(times) >= needed
    if not guaranteed and not permissive:
        raise ValueError(
            f"need at least {needed} times for the guarantee "
            f"(got {len(times)}); pass permissive=True to search anyway"
        )
    pts = system.validate_subset(subset)
    mu_a = Fraction(len(pts), system.size)
    threshold = mu_a * mu_a - Fraction(eps)
    scanned = 0
    cache: dict[int, Fraction] = {}
    for j in range(len(times)):
        for k in range(j + 1, len(times)):
            scanned += 1
            d = times[k] - times[j]
            if d not in cache:
                cache[d] = recurrence_measure(system, pts, d)
            if cache[d] >= threshold:
                return KhintchineResult(
                    found=True, pair=(j + 1, k + 1), n=d,
                    measure=cache[d], threshold=threshold,
                    strict=cache[d] > threshold, pairs_scanned=scanned,
                )
    if guaranteed:
        raise AssertionError("guaranteed pair not found; search is buggy")
    return KhintchineResult(found=False, pair=None, n=None, measure=None,
                            threshold=threshold, strict=None,
                            pairs_scanned=scanned)


@dataclass(frozen=True)
class LevelInfo:
    """One edge-coloring round of the recursion."""

    constants: tuple[int, ...]   # the half used for coloring at this level
    num_vertices: int
    red_edges: int
    total_edges: int
    clique_size: int


@dataclass(frozen=True)
class GriesmerResult:
    found: bool
    n: Optional[int]
    measures: tuple[Fraction, ...]    # one per original constant, at n
    threshold: Fraction
    constants: tuple[int, ...]
    padded_constants: tuple[int, ...]
    levels: tuple[LevelInfo, ...]
    failure_reason: Optional[str] = None


def _pad_to_power_of_two(constants: Sequence[int]) -> tuple[int, ...]:
    out = list(constants)
    while len(out) & (len(out) - 1):
        out.append(out[-1])
    return tuple(out)


def _greedy_red_clique(num: int, red) -> list[int]:
    """Indices of a red clique via majority-neighborhood peeling.

    Repeatedly take the lowest remaining vertex; keep whichever of its
    red/blue neighborhoods is larger, and admit the vertex to the clique
    only when the red side won.  Every admitted vertex is red-adjacent
    to all later survivors, so admitted vertices form a red clique.
    """
    verts = list(range(num))
    clique = []
    while verts:
        v = verts[0]
        rest = verts[1:]
        red_nbrs = [u for u in rest if red(v, u)]
        blue_nbrs = [u for u in rest if not red(v, u)]
        if len(red_nbrs) >= len(blue_nbrs):
            clique.append(v)
            verts = red_nbrs
        else:
            verts = blue_nbrs
    return clique


def griesmer_search(system: FiniteMPSystem, subset, eps: float,
                    constants: Sequence[int],
                    times: Sequence[int]) -> GriesmerResult:
    """Search for n in (B - B) \\ {0} with mu(A intersect T^-(c_i n) A)
    >= mu(A)^2 - eps for every constant c_i simultaneously.

    The constant list is padded to a power of two (duplicating the last
    entry, which adds no new condition).  Each recursion level colors
    the complete graph on the current times red where the first half of
    the constants all satisfy the inequality for that difference, peels
    off a red clique greedily, and recurses on the clique with the
    remaining constants; the base case is khintchine_search on T^c.
    Any returned n is re-verified against all original constants from
    scratch, and a verification failure is a hard error.  At desk scale
    the time list can be too short for the tower-size hypothesis the
    guarantee needs, so running out of vertices is a reported failure,
    not an error.
    """
    if eps <= 0:
        raise ValueError("need eps > 0")
    constants = tuple(int(c) for c in constants)
    if not constants or any(c == 0 for c in constants):
        raise ValueError("constants must be nonzero")
    times = [int(v) for v in times]
    if len(set(times)) != len(times):
        raise ValueError("times must be distinct")
    pts = system.validate_subset(subset)
    mu_a = Fraction(len(pts), system.size)
    threshold = mu_a * mu_a - Fraction(eps)
    padded = _pad_to_power_of_two(constants)
    levels: list[LevelInfo] = []
    cache: dict[int, Fraction] = {}

    def shifted_measure(shift: int) -> Fraction:
        if shift not in cache:
            cache[shift] = recurrence_measure(system, pts, shift)
        return cache[shift]

    def recurse(active: tuple[int, ...], verts: list[int]) -> Optional[int]:
        if len(verts) < 2:
            return None
        if len(active) == 1:
            c = active[0]
            result = khintchine_search(system.power_system(c), pts, eps,
                                       verts, permissive=True)
            return result.n if result.found else None
        half = active[:len(active) // 2]
        rest = active[len(active) // 2:]

        def red(i: int, j: int) -> bool:
            d = abs(verts[j] - verts[i])
            return all(shifted_measure(c * d) >= threshold for c in half)

        num = len(verts)
        red_count = sum(red(i, j) for i in range(num) for j in range(i + 1, num))
        clique_idx = _greedy_red_clique(num, red)
        levels.append(LevelInfo(
            constants=half, num_vertices=num, red_edges=red_count,
            total_edges=num * (num - 1) // 2, clique_size=len(clique_idx),
        ))
        return recurse(rest, [verts[i] for i in clique_idx])

    n = recurse(padded, times)
    if n is None:
        return GriesmerResult(
            found=False, n=None, measures=(), threshold=threshold,
            constants=constants, padded_constants=padded,
            levels=tuple(levels),
            failure_reason="clique exhausted; time list too short",
        )
    measures = tuple(recurrence_measure(system, pts, c * n) for c in constants)
    if any(mu < threshold for mu in measures):
        raise RuntimeError(
            f"re-verification failed for n={n}: search returned a bad shift"
        )
    return GriesmerResult(
        found=True, n=n, measures=measures, threshold=threshold,
        constants=constants, padded_constants=padded, levels=tuple(levels),
    )
