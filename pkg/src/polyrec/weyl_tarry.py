"""Weighted polynomial exponential sums and exact equal-power-sum counts.

The object of interest is S_w(xi) = sum_{n<=M} w(n) e(P(n) xi / N) with
weights w(n) = +-1.  Its 2K-th moment over the dual group ties, exactly,
to the number of 2K-tuples solving sum P(n_j) = sum P(m_j) mod N, which
in turn (once N dwarfs the value spread) equals the integer-side count.
The classical diagonal count J(K, k, M) of tuples matching all power sums
n^i, i <= k, is computed exactly with arbitrary-precision accumulators.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import product
from typing import Optional, Sequence

import numpy as np

from .polyfam import IntPolynomial

__all__ = [
    "WeylSum",
    "TarryCount",
    "GrowthRow",
    "GrowthProbe",
    "weyl_sum",
    "moment_2k",
    "count_solutions_mod",
    "tarry_count",
    "tarry_count_poly",
    "growth_probe",
    "value_range",
    "wrap_free",
]

#: Dense signature-space estimate above which the layered convolution
#: falls back to meet-in-the-middle enumeration.
SIGNATURE_BUDGET = 5_000_000
#: Enumeration cap for the meet-in-the-middle fallback (M^K tuples).
MITM_BUDGET = 20_000_000


@dataclass(frozen=True)
class WeylSum:
    """S_w over the dual of Z_N for P on [1, M] with +-1 weights."""

    poly: IntPolynomial
    length: int          # M
    modulus: int         # N
    weights: tuple[int, ...]
    values: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.values, dtype=np.complex128).copy()
        arr.setflags(write=False)
        object.__setattr__(self, "values", arr)


def _check_weights(weights: Optional[Sequence[int]], m: int) -> tuple[int, ...]:
    if weights is None:
        return (1,) * m
    w = tuple(int(x) for x in weights)
    if len(w) != m:
        raise ValueError(f"need {m} weights, got {len(w)}")
    if any(x not in (-1, 1) for x in w):
        raise ValueError("weights must be +-1")
    return w


def weyl_sum(poly: IntPolynomial, m: int, n_modulus: int,
             weights: Optional[Sequence[int]] = None) -> WeylSum:
    """S_w(xi) = sum_{n=1}^{M} w(n) e(P(n) xi / N) for every frequency xi.

    Computed as the length-N transform of the signed point-mass array that
    drops w(n) on the residue P(n) mod N; direct evaluation agrees to
    floating accuracy.
    """
    if m < 1 or n_modulus < 1:
        raise ValueError("need M >= 1 and N >= 1")
    w = _check_weights(weights, m)
    mass = np.zeros(n_modulus, dtype=np.int64)
    residues = [poly.evaluate(n) % n_modulus for n in range(1, m + 1)]
    np.add.at(mass, residues, w)
    values = np.fft.ifft(mass) * n_modulus  # sum_y mass[y] e(+y xi / N)
    return WeylSum(poly=poly, length=m, modulus=n_modulus, weights=w, values=values)


def moment_2k(s: WeylSum, k_order: int) -> float:
    """The even moment sum_xi |S(xi)|^(2K)."""
    if k_order < 1:
        raise ValueError("moment order K must be >= 1")
    power = np.abs(s.values) ** 2
    return float(np.sum(power ** k_order))


def value_range(poly: IntPolynomial, m: int) -> tuple[int, int]:
    """Exact (min, max) of P over [1, M]."""
    vals = [poly.evaluate(n) for n in range(1, m + 1)]
    return min(vals), max(vals)


def wrap_free(poly: IntPolynomial, m: int, n_modulus: int, k_order: int) -> bool:
    """True when K-fold value sums cannot wrap mod N, so the mod-N
    solution count coincides with the integer-side count."""
    lo, hi = value_range(poly, m)
    return k_order * (hi - lo) < n_modulus


def _fold_mod(full: np.ndarray, n_modulus: int) -> np.ndarray:
    out = np.zeros(n_modulus, dtype=full.dtype)
    for start in range(0, full.size, n_modulus):
        out[: min(n_modulus, full.size - start)] += full[start:start + n_modulus]
    return out


def count_solutions_mod(poly: IntPolynomial, m: int, n_modulus: int,
                        k_order: int) -> int:
    """Exact number of 2K-tuples with sum_j P(n_j) = sum_j P(m_j) mod N.

    Layered cyclic convolution of the residue distribution; accumulators
    go through Python integers whenever int64 could overflow.
    """
    if m < 1 or n_modulus < 1 or k_order < 1:
        raise ValueError("need M >= 1, N >= 1, K >= 1")
    dist = np.zeros(n_modulus, dtype=np.int64)
    for n in range(1, m + 1):
        dist[poly.evaluate(n) % n_modulus] += 1
    # The final count is at most M^(2K); go through Python integers when
    # that nears the int64 ceiling.
    if m ** (2 * k_order) > 2 ** 62:
        dist = dist.astype(object)
    layer = dist.copy()
    for _ in range(k_order - 1):
        layer = _fold_mod(np.convolve(layer, dist), n_modulus)
    return int(np.sum(layer * layer))


@dataclass(frozen=True)
class TarryCount:
    """An exact solution count with the method that produced it."""

    k_order: int
    m: int
    count: int
    method: str
    degree: Optional[int] = None
    poly: Optional[IntPolynomial] = None

    @property
    def theory_exponent(self) -> float:
        if self.degree is None:
            raise ValueError("theory exponent applies to the power-sum count")
        return 2 * self.k_order - self.degree * (self.degree + 1) / 2


def _signature(n: int, degree: int) -> tuple[int, ...]:
    return tuple(n ** i for i in range(1, degree + 1))


def _tarry_convolution(k_order: int, degree: int, m: int) -> int:
    layer: dict[tuple[int, ...], int] = {_signature(n, degree): 1 for n in range(1, m + 1)}
    for _ in range(k_order - 1):
        nxt: dict[tuple[int, ...], int] = {}
        for sig, cnt in layer.items():
            for n in range(1, m + 1):
                key = tuple(a + b for a, b in zip(sig, _signature(n, degree)))
                nxt[key] = nxt.get(key, 0) + cnt
        layer = nxt
    return sum(c * c for c in layer.values())


def _tarry_mitm(k_order: int, degree: int, m: int) -> int:
    if m ** k_order > MITM_BUDGET:
        raise ValueError("budget exceeded with no fallback possible")
    buckets: dict[tuple[int, ...], int] = {}
    for tup in product(range(1, m + 1), repeat=k_order):
        sig = tuple(sum(n ** i for n in tup) for i in range(1, degree + 1))
        buckets[sig] = buckets.get(sig, 0) + 1
    return sum(c * c for c in buckets.values())


def tarry_count(k_order: int, degree: int, m: int, method: str = "auto") -> TarryCount:
    """J(K, k, M): 2K-tuples over [1, M] with equal power sums up to degree k.

    Always at least M^K (diagonal tuples); exact over the integers.  The
    layered signature convolution is primary; when the dense signature-box
    estimate prod_i (K M^i + 1) exceeds the budget, falls back to
    meet-in-the-middle hashing of K-tuple signatures.
    """
    if k_order < 1 or degree < 1 or m < 1:
        raise ValueError("need K >= 1, k >= 1, M >= 1")
    estimate = math.prod(k_order * m ** i + 1 for i in range(1, degree + 1))
    if method == "auto":
        method = "convolution" if estimate <= SIGNATURE_BUDGET else "mitm"
    if method == "convolution":
        if estimate > SIGNATURE_BUDGET:
            raise ValueError("signature budget exceeded; use method='mitm'")
        count = _tarry_convolution(k_order, degree, m)
    elif method == "mitm":
        count = _tarry_mitm(k_order, degree, m)
    else:
        raise ValueError(f"unknown method {method!r}")
    return TarryCount(k_order=k_order, m=m, count=count, method=method, degree=degree)


def tarry_count_poly(poly: IntPolynomial, k_order: int, m: int) -> TarryCount:
    """Exact 2K-tuple count for the single equation sum P(n_j) = sum P(m_j) over Z."""
    if k_order < 1 or m < 1:
        raise ValueError("need K >= 1 and M >= 1")
    lo, hi = value_range(poly, m)
    spread = hi - lo + 1
    work = sum(min(m ** j, k_order * spread) * m for j in range(1, k_order))
    if work > MITM_BUDGET:
        raise ValueError("budget exceeded with no fallback possible")
    layer: dict[int, int] = {}
    for n in range(1, m + 1):
        v = poly.evaluate(n)
        layer[v] = layer.get(v, 0) + 1
    base = dict(layer)
    for _ in range(k_order - 1):
        nxt: dict[int, int] = {}
        for s, cnt in layer.items():
            for v, c in base.items():
                nxt[s + v] = nxt.get(s + v, 0) + cnt * c
        layer = nxt
    count = sum(c * c for c in layer.values())
    return TarryCount(k_order=k_order, m=m, count=count, method="convolution", poly=poly)


@dataclass(frozen=True)
class GrowthRow:
    m: int
    count: int
    log_count: float
    fitted_slope: Optional[float]
    theory_exponent: float


@dataclass(frozen=True)
class GrowthProbe:
    k_order: int
    degree: int
    rows: tuple[GrowthRow, ...]

    @property
    def slope(self) -> float:
        """Least-squares slope of log count against log M over all rows."""
        last = self.rows[-1].fitted_slope
        if last is None:
            raise ValueError("need at least two sample points for a slope")
        return last

    def csv_lines(self) -> list[str]:
        lines = ["M,count,log_count,fitted_slope,theory_exponent"]
        for r in self.rows:
            slope = "" if r.fitted_slope is None else f"{r.fitted_slope:.6f}"
            lines.append(f"{r.m},{r.count},{r.log_count:.6f},{slope},{r.theory_exponent}")
        return lines


def growth_probe(k_order: int, degree: int, m_values: Sequence[int]) -> GrowthProbe:
    """Sample J(K, k, M) on a grid and fit log-log growth cumulatively.

    Row i's fitted_slope regresses rows 0..i; the final row is the overall
    fit, to set against the theory exponent 2K - k(k+1)/2.
    """
    ms = sorted(set(int(v) for v in m_values))
    if len(ms) < 2:
        raise ValueError("growth probe needs at least two M values")
    rows: list[GrowthRow] = []
    logs_m, logs_c = [], []
    for m in ms:
        res = tarry_count(k_order, degree, m)
        logs_m.append(math.log(m))
        logs_c.append(math.log(res.count))
        if len(logs_m) >= 2:
            slope = float(np.polyfit(logs_m, logs_c, 1)[0])
        else:
            slope = None
        rows.append(GrowthRow(m=m, count=res.count, log_count=logs_c[-1],
                              fitted_slope=slope,
                              theory_exponent=res.theory_exponent))
    return GrowthProbe(k_order=k_order, degree=degree, rows=tuple(rows))
