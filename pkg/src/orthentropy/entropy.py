"""Entropy of orthogonal matrices.

Each row of an orthogonal matrix is a unit vector, so its squared entries
form a probability distribution. The matrix entropy is the sum of the row
entropies, ``H(O) = -sum_ij O_ij**2 ln O_ij**2`` (nats, ``0 ln 0 = 0``),
bounded above by ``n ln n``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .matrices import as_array, as_orthogonal


@dataclass(frozen=True)
class RowProbabilities:
    n: int
    p: np.ndarray


def row_probabilities(O) -> RowProbabilities:
    a = as_array(as_orthogonal(O))
    return RowProbabilities(a.shape[0], a * a)


@dataclass(frozen=True)
class EntropyReport:
    n: int
    entropy: float
    bound: float
    deficit: float
    per_row: tuple[float, ...]

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "entropy": self.entropy,
            "bound": self.bound,
            "deficit": self.deficit,
            "per_row": list(self.per_row),
        }


@dataclass(frozen=True)
class StationarityResidual:
    """Antisymmetric residual of the symmetric-multiplier conditions.

    ``residuals[j, l]`` is ``sum_i w(O_ij) O_ij O_il - sum_i w(O_il) O_il O_ij``
    with ``w(x) = (x**2)**(alpha-1)``, or ``w(x) = ln x**2`` for ``alpha == 1``.
    """

    alpha: float
    residuals: np.ndarray
    max_abs: float


def entropy_bound(n: int) -> float:
    n = int(n)
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    return n * math.log(n)


def entropy_value(O) -> float:
    """Shannon entropy of ``O`` without orthogonality validation."""
    return float(np.sum(kernels.row_entropies(as_array(O))))


def shannon_entropy(O) -> EntropyReport:
    a = as_array(as_orthogonal(O))
    n = a.shape[0]
    per_row = kernels.row_entropies(a)
    h = float(np.sum(per_row))
    bound = entropy_bound(n)
    return EntropyReport(n, h, bound, bound - h, tuple(float(x) for x in per_row))


def _check_alpha(alpha: float) -> float:
    alpha = float(alpha)
    if not alpha > 0 or not math.isfinite(alpha):
        raise ValueError(f"alpha must be a positive finite number, got {alpha}")
    return alpha


def renyi_power_sum(O, alpha: float) -> float:
    """``sum_ij (O_ij**2)**alpha``; zero entries contribute 0 for every alpha."""
    alpha = _check_alpha(alpha)
    return float(kernels.power_sum(as_array(as_orthogonal(O)), alpha))


def euclidean_gradient(O) -> np.ndarray:
    """Unconstrained gradient ``-2 O_ij (1 + ln O_ij**2)`` (0 where O_ij = 0)."""
    return kernels.entropy_gradient(as_array(as_orthogonal(O)))


def stationarity_residual(O, alpha: float) -> StationarityResidual:
    alpha = _check_alpha(alpha)
    R = kernels.stationarity_residual(as_array(as_orthogonal(O)), alpha)
    return StationarityResidual(alpha, R, float(np.max(np.abs(R))) if R.size else 0.0)


# Objective used by the ascent. For alpha == 1 it is the Shannon entropy;
# otherwise (sum u**alpha - n) / (1 - alpha), which is increasing in the
# power sum for alpha < 1, decreasing for alpha > 1, and tends to the
# Shannon entropy as alpha -> 1.

def objective_value(a: np.ndarray, alpha: float) -> float:
    if alpha == 1.0:
        return float(np.sum(kernels.row_entropies(a)))
    return (kernels.power_sum(a, alpha) - a.shape[0]) / (1.0 - alpha)


def objective_gradient(a: np.ndarray, alpha: float) -> np.ndarray:
    if alpha == 1.0:
        return kernels.entropy_gradient(a)
    return kernels.power_gradient(a, alpha) / (1.0 - alpha)


def objective_gain(old: np.ndarray, new: np.ndarray, alpha: float) -> float:
    """``objective_value(new) - objective_value(old)`` without cancellation."""
    return kernels.objective_gain(old, new, alpha)
