"""Discrete Fourier analysis on Z_N under the probability normalization.

Functions on Z_N carry the uniform probability measure, their transforms
carry counting measure.  Writing e(x) = exp(2*pi*i*x), the transform and
its inverse are

    F(xi) = (1/N) sum_x f(x) e(-x xi / N),      f(x) = sum_xi F(xi) e(x xi / N),

so the transform of an indicator has F(0) equal to the set's density,
Plancherel reads lp_norm(f, 2) == ellp_norm(F, 2), and correlations of
real functions are spectral sums of |F|^2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .intset import IntegerSet

__all__ = [
    "ZnFunction",
    "Spectrum",
    "dft",
    "inverse_dft",
    "lp_norm",
    "ellp_norm",
    "indicator",
    "balanced_function",
    "correlation",
]


def _frozen_complex(values) -> np.ndarray:
    arr = np.asarray(values, dtype=np.complex128).copy()
    if arr.ndim != 1 or arr.size < 1:
        raise ValueError("expected a nonempty one-dimensional array of values")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class ZnFunction:
    """A function Z_N -> C, stored as its value array of length N."""

    modulus: int
    values: np.ndarray

    def __post_init__(self):
        if self.modulus < 1:
            raise ValueError("modulus must be a positive integer")
        arr = _frozen_complex(self.values)
        if arr.size != self.modulus:
            raise ValueError(f"need exactly {self.modulus} values, got {arr.size}")
        object.__setattr__(self, "values", arr)


@dataclass(frozen=True)
class Spectrum:
    """Fourier coefficients on the dual of Z_N, indexed by frequency."""

    modulus: int
    coefficients: np.ndarray

    def __post_init__(self):
        if self.modulus < 1:
            raise ValueError("modulus must be a positive integer")
        arr = _frozen_complex(self.coefficients)
        if arr.size != self.modulus:
            raise ValueError(f"need exactly {self.modulus} coefficients, got {arr.size}")
        object.__setattr__(self, "coefficients", arr)


def dft(f: ZnFunction) -> Spectrum:
    """Transform with the 1/N-normalized kernel e(-x xi / N)."""
    return Spectrum(f.modulus, np.fft.fft(f.values) / f.modulus)


def inverse_dft(spectrum: Spectrum) -> ZnFunction:
    """Inverse transform f(x) = sum_xi F(xi) e(x xi / N)."""
    return ZnFunction(spectrum.modulus, np.fft.ifft(spectrum.coefficients) * spectrum.modulus)


def _p_norm(arr: np.ndarray, p: float, weight: float) -> float:
    if p != p or p < 1:  # NaN or below 1
        raise ValueError("norm exponent must satisfy p >= 1")
    mags = np.abs(arr)
    if math.isinf(p):
        return float(mags.max())
    return float((weight * np.sum(mags ** p)) ** (1.0 / p))


def lp_norm(f: ZnFunction, p: float) -> float:
    """L^p norm under the uniform probability measure on Z_N; p=inf is the max."""
    return _p_norm(f.values, p, 1.0 / f.modulus)


def ellp_norm(spectrum: Spectrum, p: float) -> float:
    """Counting-measure norm of the coefficient array; p=inf is the max."""
    return _p_norm(spectrum.coefficients, p, 1.0)


def indicator(a: IntegerSet) -> ZnFunction:
    """0/1 indicator of A read modulo n (the element n lands on residue 0)."""
    vals = np.zeros(a.n, dtype=np.complex128)
    for r in a.residues():
        vals[r] = 1.0
    return ZnFunction(a.n, vals)


def balanced_function(a: IntegerSet) -> ZnFunction:
    """Indicator of A minus its density; the transform vanishes at frequency 0."""
    vals = np.full(a.n, -float(a.density), dtype=np.complex128)
    for r in a.residues():
        vals[r] += 1.0
    return ZnFunction(a.n, vals)


def correlation(h: ZnFunction, g: ZnFunction) -> np.ndarray:
    """All shifted averages out[t] = (1/N) sum_x h(x) g(x - t), computed spectrally.

    For real f, correlation(f, f)[t] equals sum_xi |F(xi)|^2 e(t xi / N).
    """
    if h.modulus != g.modulus:
        raise ValueError("h and g must live on the same Z_N")
    n = h.modulus
    # out[t] = (1/N) * (h * g~)(t) with g~(y) = g(-y), a cyclic convolution.
    g_rev = np.roll(g.values[::-1], 1)
    out = np.fft.ifft(np.fft.fft(h.values) * np.fft.fft(g_rev)) / n
    return out
