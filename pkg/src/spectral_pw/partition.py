"""Dyadic quadratic partition of unity on the spectral axis."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import SpectralModel, apply_multiplier
from .errors import CoverageError


def _bump(u):
    """``exp(-1/u)`` for ``u > 0``, zero otherwise."""
    u = np.asarray(u, dtype=float)
    out = np.zeros_like(u)
    pos = u > 0
    out[pos] = np.exp(-1.0 / u[pos])
    return out


def cutoff(lam):
    """Smooth nonincreasing ``g``: 1 on ``[0, 1]``, 0 on ``[2, inf)``."""
    lam = np.asarray(lam, dtype=float)
    left = _bump(2.0 - lam)
    right = _bump(lam - 1.0)
    denom = left + right
    mid = np.divide(left, denom, out=np.zeros_like(lam), where=denom > 0)
    return np.where(lam <= 1.0, 1.0, np.where(lam >= 2.0, 0.0, mid))


@dataclass(frozen=True)
class PartitionOfUnity:
    J_max: int

    def g(self, lam):
        return cutoff(lam)

    def h(self, lam):
        lam = np.asarray(lam, dtype=float)
        return np.clip(cutoff(lam) - cutoff(2.0 * lam), 0.0, None)

    def G(self, j: int, lam):
        lam = np.asarray(lam, dtype=float)
        if j == 0:
            return self.g(lam)
        return self.h(lam / 2.0**j)

    def F(self, j: int, lam):
        return np.sqrt(self.G(j, lam))

    def support(self, j: int) -> tuple:
        return (0.0, 2.0) if j == 0 else (2.0 ** (j - 1), 2.0 ** (j + 1))

    @property
    def supports(self) -> list:
        return [self.support(j) for j in range(self.J_max + 1)]

    @property
    def coverage(self) -> float:
        """Largest ``lam`` with ``sum_{j <= J_max} G_j(lam) = 1``."""
        return 2.0**self.J_max


def build_partition(J_max: int) -> PartitionOfUnity:
    if J_max < 1:
        raise ValueError("J_max must be at least 1")
    return PartitionOfUnity(J_max)


def required_levels(model: SpectralModel) -> int:
    """Smallest ``J >= 1`` whose partition covers the spectrum of ``model``."""
    top = float(model.sqrt_eigenvalues[-1])
    return max(1, math.ceil(math.log2(top))) if top > 1 else 1


def check_coverage(model: SpectralModel, pou: PartitionOfUnity):
    top = float(model.sqrt_eigenvalues[-1])
    if top > pou.coverage:
        raise CoverageError(
            f"partition with J_max={pou.J_max} covers [0, {pou.coverage:g}] but the spectrum "
            f"reaches {top:g}; need J_max >= {required_levels(model)}"
        )


def lp_decompose(model: SpectralModel, pou: PartitionOfUnity, f) -> list:
    """Littlewood-Paley pieces ``F_j(sqrt(L)) f`` for ``j = 0..J_max``."""
    check_coverage(model, pou)
    return [apply_multiplier(model, lambda lam, j=j: pou.F(j, lam), f) for j in range(pou.J_max + 1)]


def lp_reconstruct(model: SpectralModel, pou: PartitionOfUnity, pieces) -> np.ndarray:
    """``sum_j F_j(sqrt(L)) piece_j``; inverts :func:`lp_decompose`."""
    out = np.zeros(model.dim, dtype=complex)
    for j, piece in enumerate(pieces):
        out += apply_multiplier(model, lambda lam, j=j: pou.F(j, lam), piece)
    return out


def partition_table(pou: PartitionOfUnity, lam) -> np.ndarray:
    """Rows ``(lam, G_0(lam), ..., G_J(lam))``."""
    lam = np.asarray(lam, dtype=float)
    cols = [lam] + [pou.G(j, lam) for j in range(pou.J_max + 1)]
    return np.column_stack(cols)
