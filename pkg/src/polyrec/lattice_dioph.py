"""Product-lattice Gaussian sums and diophantine approximation scans.

A product lattice Lambda = Lambda_1 x ... x Lambda_k (one block per
polynomial degree, blocks may be zero-dimensional) supports the theta
function Theta(t, x) = sum over lattice points of exp(-pi t |x - m|^2),
its dual-side form obtained by Poisson summation, the invariant
A = det(Lambda) * Theta(1, 0), and the Gaussian average

    F(N) = det(Lambda) * (1/N) sum_{n<=N} Theta(1, n*alpha),

where n*alpha dilates block j by n^j.  Largeness of F(N) witnesses that
the weighted orbit {n*alpha} keeps returning near the lattice; the scans
in this module extract the structured explanation (a denominator q and a
dual direction) when it does not.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import product as iter_product
from numbers import Rational
from typing import Optional, Sequence

import numpy as np

from .config import DEFAULT_TOLERANCES, Tolerances

__all__ = [
    "ProductLattice",
    "BlockVector",
    "GoodSet",
    "AverageBoundsReport",
    "SchmidtReport",
    "WeylDenominatorReport",
    "nearest_integer_norm",
    "theta",
    "gaussian_mass",
    "gaussian_average",
    "approx_good_set_power",
    "approx_good_set_family",
    "check_average_bounds",
    "schmidt_scan",
    "weyl_denominator",
]

_ENUM_BUDGET = 2_000_000      # integer boxes enumerated per block
_DUAL_COMBO_BUDGET = 200_000  # product dual points in the average's dual form
_MAX_CONDITION = 1e8


def _frozen_matrix(mat) -> np.ndarray:
    arr = np.asarray(mat, dtype=float).copy()
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ValueError("block basis must be a square matrix")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class ProductLattice:
    """Product of full-rank sublattices of R^{d_j}; rows are basis vectors."""

    blocks: tuple[np.ndarray, ...]

    def __post_init__(self):
        blocks = tuple(_frozen_matrix(b) for b in self.blocks)
        if not blocks:
            raise ValueError("need at least one block")
        for b in blocks:
            if b.shape[0] == 0:
                continue
            if abs(np.linalg.det(b)) < 1e-300:
                raise ValueError("block basis is singular")
            if np.linalg.cond(b) > _MAX_CONDITION:
                raise ValueError("block basis too ill-conditioned")
        object.__setattr__(self, "blocks", blocks)

    @classmethod
    def integers(cls, dims: Sequence[int]) -> "ProductLattice":
        """Z^{d_1} x ... x Z^{d_k}."""
        return cls(tuple(np.eye(int(d)) for d in dims))

    @classmethod
    def scaled_integers(cls, scale: float, dims: Sequence[int]) -> "ProductLattice":
        return cls(tuple(float(scale) * np.eye(int(d)) for d in dims))

    @classmethod
    def from_spec(cls, spec: Sequence[dict]) -> "ProductLattice":
        """Build from [{'dim': d, 'basis': [[...], ...]}, ...] (row-major)."""
        blocks = []
        for i, entry in enumerate(spec):
            d = int(entry["dim"])
            if d < 0:
                raise ValueError(f"block {i}: dim must be >= 0")
            basis = np.array(entry.get("basis", np.eye(d)), dtype=float)
            if basis.shape != (d, d):
                raise ValueError(f"block {i}: basis must be {d}x{d}")
            blocks.append(basis)
        return cls(tuple(blocks))

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(b.shape[0] for b in self.blocks)

    @property
    def dimension(self) -> int:
        return sum(self.dims)

    @property
    def determinant(self) -> float:
        out = 1.0
        for b in self.blocks:
            if b.shape[0]:
                out *= abs(np.linalg.det(b))
        return out

    @property
    def block_condition_numbers(self) -> tuple[float, ...]:
        return tuple(
            float(np.linalg.cond(b)) if b.shape[0] else 1.0 for b in self.blocks
        )

    def dual(self) -> "ProductLattice":
        """Blockwise inverse-transpose basis; dual of dual recovers this."""
        return ProductLattice(tuple(
            np.linalg.inv(b).T if b.shape[0] else b for b in self.blocks
        ))

    def scale(self, factor: float) -> "ProductLattice":
        if factor <= 0:
            raise ValueError("scale factor must be positive")
        return ProductLattice(tuple(factor * b for b in self.blocks))

    def split(self, flat: Sequence[float]) -> list[np.ndarray]:
        """Cut a flat coordinate vector into per-block pieces."""
        flat = np.asarray(flat, dtype=np.longdouble)
        if flat.shape != (self.dimension,):
            raise ValueError(f"point must have {self.dimension} coordinates")
        out, pos = [], 0
        for d in self.dims:
            out.append(flat[pos:pos + d])
            pos += d
        return out


def _entry_is_rational(x) -> bool:
    return isinstance(x, Rational)


@dataclass(frozen=True)
class BlockVector:
    """Per-block real vectors alpha_j; dilation by n multiplies block j by n^j."""

    entries: tuple[tuple, ...]

    def __post_init__(self):
        entries = tuple(tuple(e) for e in self.entries)
        object.__setattr__(self, "entries", entries)

    @classmethod
    def from_flat(cls, dims: Sequence[int], flat: Sequence) -> "BlockVector":
        flat = list(flat)
        if len(flat) != sum(dims):
            raise ValueError("flat vector length does not match block dims")
        out, pos = [], 0
        for d in dims:
            out.append(tuple(flat[pos:pos + d]))
            pos += d
        return cls(tuple(out))

    @classmethod
    def zero(cls, dims: Sequence[int]) -> "BlockVector":
        return cls(tuple((0,) * d for d in dims))

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(len(e) for e in self.entries)

    @property
    def is_rational(self) -> bool:
        return all(_entry_is_rational(x) for e in self.entries for x in e)

    def block_arrays(self) -> list[np.ndarray]:
        return [np.asarray([float(x) for x in e], dtype=np.longdouble)
                for e in self.entries]

    def dilate(self, n: int) -> np.ndarray:
        """Flat coordinates of n*alpha = (n^1 a_1, n^2 a_2, ..., n^k a_k)."""
        pieces = []
        for j, arr in enumerate(self.block_arrays(), start=1):
            pieces.append(np.longdouble(n) ** j * arr)
        return np.concatenate(pieces) if pieces else np.zeros(0, dtype=np.longdouble)


def nearest_integer_norm(x) -> float:
    """Distance to the nearest integer point (Euclidean for vectors)."""
    arr = np.asarray(x, dtype=np.longdouble)
    d = np.abs(arr - np.rint(arr))
    if arr.ndim == 0:
        return float(d)
    return float(np.sqrt(np.sum(d * d)))


def _tail_radius(t: float, sigma: float, d: int, tau: float) -> float:
    """Radius R with sum over lattice points beyond R of exp(-pi t r^2) < tau,
    for any lattice whose shortest vector is at least sigma (packing bound)."""
    radius = max(1.0, math.sqrt(max(d, math.log(1.0 / tau)) / (math.pi * t)))
    while True:
        total = 0.0
        for j in range(400):
            s = radius + j
            try:
                term = ((2.0 * (s + 1.0) + sigma) / sigma) ** d * math.exp(-math.pi * t * s * s)
            except OverflowError:
                term = math.inf
            total += term
            if term < tau * 1e-6:
                break
        if total < tau:
            return radius
        radius += 0.25


def _lattice_points_within(basis: np.ndarray, radius: float
                           ) -> tuple[np.ndarray, np.ndarray]:
    """All integer combinations of the basis rows with |point| <= radius.

    Returns (integer coordinates, points).  The coordinate box is sized
    from the inverse basis, so nothing inside the ball is missed; a few
    points straddling the boundary may be kept, which only helps accuracy.
    """
    d = basis.shape[0]
    if d == 0:
        return np.zeros((1, 0), dtype=np.int64), np.zeros((1, 0))
    inv = np.linalg.inv(basis)
    col_norms = np.linalg.norm(inv, axis=0)
    bounds = np.floor(radius * col_norms).astype(np.int64) + 1
    if math.prod(int(2 * b + 1) for b in bounds) > _ENUM_BUDGET:
        raise ValueError(
            "lattice enumeration budget exceeded (very dense block); "
            "use the dual-side evaluation instead"
        )
    ranges = [np.arange(-b, b + 1, dtype=np.int64) for b in bounds]
    grid = np.meshgrid(*ranges, indexing="ij")
    offsets = np.stack([g.ravel() for g in grid], axis=1)
    pts = offsets.astype(float) @ basis
    keep = np.einsum("ij,ij->i", pts, pts) <= radius * radius + 1e-12
    return offsets[keep], pts[keep]


def _sigma_min(basis: np.ndarray) -> float:
    return float(np.linalg.svd(basis, compute_uv=False)[-1])


def _block_theta_direct(basis: np.ndarray, xs: np.ndarray, t: float,
                        tail: float) -> np.ndarray:
    """sum_m exp(-pi t |x - m|^2) for each row x of xs (one lattice block).

    Offsets are first reduced into the fundamental cell (exactness of the
    reduction is in extended precision, so huge dilates stay safe), then a
    fixed point cloud around the cell covers every term above the tail.
    """
    num = xs.shape[0]
    d = basis.shape[0]
    if d == 0:
        return np.ones(num)
    inv = np.linalg.inv(basis)
    c_real = xs @ inv.astype(np.longdouble)
    xs_red = np.asarray((c_real - np.floor(c_real)) @ basis.astype(np.longdouble),
                        dtype=float)
    cell_diam = float(np.sum(np.linalg.norm(basis, axis=1)))
    radius = _tail_radius(t, _sigma_min(basis), d, tail)
    _, pts = _lattice_points_within(basis, radius + cell_diam)
    diff = xs_red[:, None, :] - pts[None, :, :]
    d2 = np.einsum("abj,abj->ab", diff, diff)
    return np.exp(-math.pi * t * d2).sum(axis=1)


def _theta_direct_many(lattice: ProductLattice, t: float, xs_flat: np.ndarray,
                       tail: float) -> np.ndarray:
    """Theta(t, x) for many x at once (rows of xs_flat), direct side."""
    out = np.ones(xs_flat.shape[0])
    pos = 0
    for basis in lattice.blocks:
        d = basis.shape[0]
        out *= _block_theta_direct(basis, xs_flat[:, pos:pos + d], t, tail)
        pos += d
    return out


def theta(lattice: ProductLattice, t: float, x: Sequence[float],
          side: str = "direct", tol: Tolerances = DEFAULT_TOLERANCES) -> float:
    """Gaussian point sum over the lattice, or its dual-side evaluation.

    side='direct' sums exp(-pi t |x-m|^2) over lattice points; side='dual'
    evaluates t^(-D/2) det^-1 sum over dual vectors of
    exp(-pi |xi|^2 / t) e(xi . x).  The two agree (Poisson summation); both
    truncate with tail below tol.theta_tail.
    """
    if t <= 0:
        raise ValueError("t must be positive")
    xs = np.asarray(x, dtype=np.longdouble)[None, :]
    if xs.shape[1] != lattice.dimension:
        raise ValueError(f"point must have {lattice.dimension} coordinates")
    if side == "direct":
        return float(_theta_direct_many(lattice, t, xs, tol.theta_tail)[0])
    if side != "dual":
        raise ValueError(f"side must be 'direct' or 'dual', got {side!r}")
    value = 1.0 + 0.0j
    pos = 0
    for basis in lattice.blocks:
        d = basis.shape[0]
        if d == 0:
            continue
        x_j = np.asarray(xs[0, pos:pos + d], dtype=float)
        pos += d
        dual_basis = np.linalg.inv(basis).T
        radius = _tail_radius(1.0 / t, _sigma_min(dual_basis), d, tol.theta_tail)
        _, pts = _lattice_points_within(dual_basis, radius)
        w = np.exp(-math.pi / t * np.einsum("ij,ij->i", pts, pts))
        phases = np.exp(2j * math.pi * (pts @ x_j))
        value *= (w * phases).sum() / (t ** (d / 2.0) * abs(np.linalg.det(basis)))
    return float(value.real)


def gaussian_mass(lattice: ProductLattice,
                  tol: Tolerances = DEFAULT_TOLERANCES) -> float:
    """det(Lambda) * sum_m exp(-pi |m|^2); equals the same sum over the dual.

    Both sides are computed and must agree to tol.poisson_rel; the
    direct-side value is returned.
    """
    zero = np.zeros((1, lattice.dimension), dtype=np.longdouble)
    direct = lattice.determinant * float(
        _theta_direct_many(lattice, 1.0, zero, tol.theta_tail)[0])
    dual_lat = lattice.dual()
    dual = float(_theta_direct_many(
        dual_lat, 1.0, np.zeros((1, dual_lat.dimension), dtype=np.longdouble),
        tol.theta_tail)[0])
    if abs(direct - dual) > tol.poisson_rel * max(abs(direct), abs(dual)):
        raise AssertionError(
            f"two-sided evaluations disagree: {direct!r} vs {dual!r}"
        )
    return direct


def _dilate_matrix(alpha: BlockVector, n_range: int) -> np.ndarray:
    rows = [alpha.dilate(n) for n in range(1, n_range + 1)]
    return np.stack(rows, axis=0)


def gaussian_average(lattice: ProductLattice, alpha: BlockVector, n_range: int,
                     check_dual: bool = False,
                     tol: Tolerances = DEFAULT_TOLERANCES) -> float:
    """F(N) = det * (1/N) sum_{n<=N} Theta(1, n*alpha) along the dilated orbit.

    With check_dual=True the dual-side form, a weighted average of the
    polynomial exponential sums (1/N) sum_n e(xi . (n*alpha)), is computed
    as well and must agree to tol.average_agreement_rel.
    """
    if n_range < 1:
        raise ValueError("need N >= 1")
    if alpha.dims != lattice.dims:
        raise ValueError("alpha blocks do not match lattice blocks")
    xs = _dilate_matrix(alpha, n_range)
    direct = lattice.determinant * float(
        np.mean(_theta_direct_many(lattice, 1.0, xs, tol.theta_tail)))
    if not check_dual:
        return direct

    # Dual side: enumerate product dual vectors with Gaussian weight, then
    # average the resulting polynomial phases over n.
    block_pts: list[np.ndarray] = []
    for basis in lattice.blocks:
        d = basis.shape[0]
        if d == 0:
            block_pts.append(np.zeros((1, 0)))
            continue
        dual_basis = np.linalg.inv(basis).T
        radius = _tail_radius(1.0, _sigma_min(dual_basis), d, tol.theta_tail)
        _, pts = _lattice_points_within(dual_basis, radius)
        block_pts.append(pts)
    combos = math.prod(p.shape[0] for p in block_pts)
    if combos > _DUAL_COMBO_BUDGET:
        raise ValueError("dual-side combination budget exceeded")

    arrays = alpha.block_arrays()
    # gamma[c, j] = xi_j . alpha_j for combination c, in extended precision.
    gammas = np.zeros((combos, len(lattice.blocks)), dtype=np.longdouble)
    weights = np.ones(combos)
    for j, pts in enumerate(block_pts):
        reps_inner = math.prod(p.shape[0] for p in block_pts[j + 1:])
        reps_outer = combos // (pts.shape[0] * reps_inner)
        dots = pts.astype(np.longdouble) @ arrays[j] if pts.shape[1] else \
            np.zeros(pts.shape[0], dtype=np.longdouble)
        norms2 = np.einsum("ij,ij->i", pts, pts)
        gammas[:, j] = np.tile(np.repeat(dots, reps_inner), reps_outer)
        weights = weights * np.tile(np.repeat(np.exp(-math.pi * norms2), reps_inner),
                                    reps_outer)
    ns = np.arange(1, n_range + 1, dtype=np.int64)
    powers = np.stack([ns.astype(np.longdouble) ** j
                       for j in range(1, len(lattice.blocks) + 1)], axis=1)
    acc = np.zeros(combos)
    chunk = max(1, 2_000_000 // max(n_range, 1))
    for start in range(0, combos, chunk):
        g = gammas[start:start + chunk]
        args = powers @ g.T          # (N, chunk) in extended precision
        args -= np.floor(args)
        mean_re = np.cos(2.0 * math.pi * args.astype(float)).mean(axis=0)
        acc[start:start + chunk] = mean_re
    dual = float(np.sum(weights * acc))
    scale = max(abs(direct), abs(dual), 1e-300)
    if abs(direct - dual) > tol.average_agreement_rel * scale + 1e-12:
        raise AssertionError(
            f"average disagrees between sides: direct {direct!r}, dual {dual!r}"
        )
    return direct


@dataclass(frozen=True)
class GoodSet:
    """Solutions n <= N of a system of nearest-integer inequalities."""

    n_range: int
    eps: float
    members: tuple[int, ...]
    exact: bool

    @property
    def density(self) -> Fraction:
        return Fraction(len(self.members), self.n_range)

    @property
    def empty(self) -> bool:
        return not self.members


def _rational_distance(value: Fraction) -> Fraction:
    frac = value - math.floor(value)
    return min(frac, 1 - frac)


def approx_good_set_power(alpha: BlockVector, eps: float, n_range: int) -> GoodSet:
    """All n <= N with |n^j alpha_j| within eps of Z^{d_j} for every block.

    Runs in exact rational arithmetic whenever all entries of alpha are
    rational; otherwise extended-precision floats.
    """
    if eps <= 0 or n_range < 1:
        raise ValueError("need eps > 0 and N >= 1")
    members = []
    if alpha.is_rational:
        eps2 = Fraction(eps) ** 2
        entries = [[Fraction(x) for x in block] for block in alpha.entries]
        for n in range(1, n_range + 1):
            ok = True
            for j, block in enumerate(entries, start=1):
                total = sum(_rational_distance(Fraction(n) ** j * x) ** 2
                            for x in block)
                if total >= eps2:
                    ok = False
                    break
            if ok:
                members.append(n)
        return GoodSet(n_range, eps, tuple(members), exact=True)
    arrays = alpha.block_arrays()
    for n in range(1, n_range + 1):
        ok = True
        for j, arr in enumerate(arrays, start=1):
            val = np.longdouble(n) ** j * arr
            if nearest_integer_norm(val) >= eps:
                ok = False
                break
        if ok:
            members.append(n)
    return GoodSet(n_range, eps, tuple(members), exact=False)


def approx_good_set_family(family, thetas: Sequence, eps: float,
                           n_range: int) -> GoodSet:
    """All n <= N with |P_i(n) theta_r| < eps for every polynomial P_i and
    every real theta_r; exact rational arithmetic when the thetas are."""
    if eps <= 0 or n_range < 1:
        raise ValueError("need eps > 0 and N >= 1")
    members = []
    if all(_entry_is_rational(th) for th in thetas):
        eps_f = Fraction(eps)
        ths = [Fraction(th) for th in thetas]
        for n in range(1, n_range + 1):
            vals = [p.evaluate(n) for p in family]
            if all(_rational_distance(v * th) < eps_f for v in vals for th in ths):
                members.append(n)
        return GoodSet(n_range, eps, tuple(members), exact=True)
    ths = np.asarray([float(th) for th in thetas], dtype=np.longdouble)
    for n in range(1, n_range + 1):
        ok = True
        for p in family:
            prods = np.longdouble(p.evaluate(n)) * ths
            if np.any(np.abs(prods - np.rint(prods)) >= eps):
                ok = False
                break
        if ok:
            members.append(n)
    return GoodSet(n_range, eps, tuple(members), exact=False)


@dataclass(frozen=True)
class AverageBoundsReport:
    """Scaling, subsampling, and perturbation behavior of the average F."""

    n: int
    c: float
    q: int
    f_n: float
    f_scaled: float          # F(floor(cN))
    f_subsampled: float      # F(floor(N/q))
    holds_scaling: bool      # F(N) >= (c/2) F(floor(cN))
    holds_subsampling: bool  # F(N) >= (1/2q) F(floor(N/q))
    perturbation_eps: float
    perturbation_ratio: float  # min_n theta ratio against the perturbed pair


def _perturbed_vector(alpha: BlockVector, n: int, eps: float) -> BlockVector:
    """beta with |beta_j - alpha_j| = eps * N^-j, pushed along the first axis."""
    out = []
    for j, block in enumerate(alpha.entries, start=1):
        if not block:
            out.append(())
            continue
        delta = eps * float(n) ** (-j)
        vals = [float(x) for x in block]
        vals[0] += delta
        out.append(tuple(vals))
    return BlockVector(tuple(out))


def check_average_bounds(lattice: ProductLattice, alpha: BlockVector, n: int,
                         c: float, q: int,
                         perturbation_eps: Optional[float] = None,
                         beta: Optional[BlockVector] = None,
                         tol: Tolerances = DEFAULT_TOLERANCES) -> AverageBoundsReport:
    """Check the range-scaling and subsampling lower bounds for F, and
    report the perturbation ratio.

    (i)  F(N) >= (c/2) F(floor(cN)) for 1/10 < c < 1;
    (ii) F(N) >= (1/2q) F(floor(N/q)) for integers q <= N/2;
    (iii) the reported ratio min_n Theta(1, n*alpha) / Theta_scaled(1,
          n*(1+eps)beta) over the (1+eps)-dilated lattice, not asserted.
    """
    if n <= 20:
        raise ValueError("need N > 20")
    if not 0.1 < c < 1.0:
        raise ValueError("need 1/10 < c < 1")
    if q < 1 or q > n // 2:
        raise ValueError("need integer 1 <= q <= N/2")
    if alpha.dims != lattice.dims:
        raise ValueError("alpha blocks do not match lattice blocks")
    k = len(lattice.dims)
    if perturbation_eps is None:
        perturbation_eps = min(1.0 / max(lattice.dimension, 1), 0.5)
    f_n = gaussian_average(lattice, alpha, n, tol=tol)
    f_scaled = gaussian_average(lattice, alpha, int(c * n), tol=tol)
    f_sub = gaussian_average(lattice, alpha, n // q, tol=tol)

    if beta is None:
        beta = _perturbed_vector(alpha, n, perturbation_eps)
    scaled_lattice = lattice.scale(1.0 + perturbation_eps)
    xs_top = _dilate_matrix(alpha, n)
    stretched = BlockVector(tuple(
        tuple((1.0 + perturbation_eps) * float(x) for x in block)
        for block in beta.entries
    ))
    xs_bot = _dilate_matrix(stretched, n)
    top = _theta_direct_many(lattice, 1.0, xs_top, tol.theta_tail)
    bot = _theta_direct_many(scaled_lattice, 1.0, xs_bot, tol.theta_tail)
    ratio = float(np.min(top / bot))

    return AverageBoundsReport(
        n=n, c=c, q=q,
        f_n=f_n, f_scaled=f_scaled, f_subsampled=f_sub,
        holds_scaling=f_n >= (c / 2.0) * f_scaled,
        holds_subsampling=f_n >= f_sub / (2.0 * q),
        perturbation_eps=perturbation_eps,
        perturbation_ratio=ratio,
    )


@dataclass(frozen=True)
class SchmidtReport:
    """Either the average is large, or a structured obstruction was found."""

    alternative: int                     # 1: F(N) >= 1/2; 2: scan result
    f_value: float
    q: Optional[int] = None
    directions: tuple = ()               # per nonzero block: dual vector used
    distances: tuple = ()                # per nonzero block: |q xi . alpha|
    objective: Optional[float] = None    # max_j N^j * distance_j
    beats_quality: Optional[bool] = None


def schmidt_scan(lattice: ProductLattice, alpha: BlockVector, n: int,
                 q_max: int, radius_max: float, quality: float,
                 tol: Tolerances = DEFAULT_TOLERANCES) -> SchmidtReport:
    """The large-average / good-denominator alternative, by exhaustive scan.

    If F(N) >= 1/2 that is the report.  Otherwise every q <= q_max is
    paired with, per nonzero block j, the primitive dual vector xi_j
    (|xi_j| <= radius_max) minimizing |q xi_j . alpha_j| near integers;
    the returned q minimizes the objective max_j N^j |q xi_j . alpha_j|,
    and beats_quality records whether it stays below
    quality * N^-j blockwise.
    """
    if q_max < 1 or radius_max <= 0 or quality <= 0:
        raise ValueError("need q_max >= 1, radius_max > 0, quality > 0")
    if alpha.dims != lattice.dims:
        raise ValueError("alpha blocks do not match lattice blocks")
    f_value = gaussian_average(lattice, alpha, n, tol=tol)
    if f_value >= 0.5:
        return SchmidtReport(alternative=1, f_value=f_value)

    arrays = alpha.block_arrays()
    block_data = []  # (power j, candidate dots) per nonzero block
    for j, basis in enumerate(lattice.blocks, start=1):
        if basis.shape[0] == 0:
            continue
        dual_basis = np.linalg.inv(basis).T
        offsets, pts = _lattice_points_within(dual_basis, radius_max)
        nonzero = np.any(offsets != 0, axis=1)
        primitive = nonzero & (np.gcd.reduce(np.abs(offsets), axis=1) == 1)
        if not np.any(primitive):
            continue
        cand = pts[primitive]
        dots = cand.astype(np.longdouble) @ arrays[j - 1]
        block_data.append((j, cand, dots))
    if not block_data:
        raise ValueError("no primitive dual vectors within radius_max")

    best = None
    for q in range(1, q_max + 1):
        worst = 0.0
        picks = []
        dists = []
        for j, cand, dots in block_data:
            vals = np.asarray(q * dots, dtype=np.longdouble)
            dist = np.abs(vals - np.rint(vals)).astype(float)
            idx = int(np.argmin(dist))
            picks.append(tuple(float(v) for v in cand[idx]))
            dists.append(float(dist[idx]))
            worst = max(worst, float(n) ** j * dist[idx])
        if best is None or worst < best[0]:
            best = (worst, q, tuple(picks), tuple(dists))
    objective, q_best, picks, dists = best
    return SchmidtReport(
        alternative=2,
        f_value=f_value,
        q=q_best,
        directions=picks,
        distances=dists,
        objective=objective,
        beats_quality=objective <= quality,
    )


@dataclass(frozen=True)
class WeylDenominatorReport:
    s_abs: float
    q: Optional[int]
    distances: tuple[float, ...]
    thresholds: tuple[float, ...]

    @property
    def found(self) -> bool:
        return self.q is not None


def weyl_denominator(thetas: Sequence, n: int, delta: float, q_max: int,
                     c_exponent: float = 2.0,
                     thresholds: Optional[Sequence[float]] = None
                     ) -> WeylDenominatorReport:
    """|S_N| for S_N = (1/N) sum_n e(n th_1 + ... + n^k th_k), plus the
    smallest q <= q_max with |q th_i| below the threshold for every i.

    Thresholds default to delta^-C * N^-i.  This is the computational
    face of the inverse principle: a large |S_N| should force such a q.
    """
    if n < 1 or q_max < 1:
        raise ValueError("need N >= 1 and q_max >= 1")
    if not 0 < delta <= 0.5:
        raise ValueError("need 0 < delta <= 1/2")
    k = len(thetas)
    if k < 1:
        raise ValueError("need at least one coordinate")
    if float(n) ** k > 1e12:
        raise ValueError("N^k too large for reliable phase reduction")
    ths = np.asarray([float(t) for t in thetas], dtype=np.longdouble)
    ns = np.arange(1, n + 1, dtype=np.int64).astype(np.longdouble)
    args = np.zeros(n, dtype=np.longdouble)
    for j in range(1, k + 1):
        args += ns ** j * ths[j - 1]
    args -= np.floor(args)
    s_val = np.exp(2j * math.pi * args.astype(float)).mean()

    if thresholds is None:
        thresholds = [delta ** (-c_exponent) * float(n) ** (-i)
                      for i in range(1, k + 1)]
    else:
        thresholds = [float(b) for b in thresholds]
        if len(thresholds) != k:
            raise ValueError("need one threshold per coordinate")
    q_found = None
    dists_found: tuple[float, ...] = ()
    for q in range(1, q_max + 1):
        vals = q * ths
        dist = np.abs(vals - np.rint(vals)).astype(float)
        if all(d < b for d, b in zip(dist, thresholds)):
            q_found = q
            dists_found = tuple(float(d) for d in dist)
            break
    return WeylDenominatorReport(
        s_abs=float(abs(s_val)),
        q=q_found,
        distances=dists_found,
        thresholds=tuple(thresholds),
    )
