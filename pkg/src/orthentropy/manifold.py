"""Riemannian gradient ascent of the entropy over O(n).

Tangent vectors at ``O`` are written ``O @ A`` with ``A`` skew-symmetric.
The Riemannian gradient of ``f`` at ``O`` is ``O @ skew(O.T @ grad f)`` and
its norm is the Frobenius norm of the skew factor.
"""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import entropy as _entropy
from .matrices import (
    VALIDATION_TOL,
    OrthogonalMatrix,
    as_array,
    as_orthogonal,
    haar_orthogonal_array,
    orthogonality_defect,
)

MIN_STEP = 1e-16


class NumericalError(RuntimeError):
    pass


@dataclass(frozen=True, eq=False)
class TangentDirection:
    """Skew-symmetric ``A``; the tangent vector at ``O`` is ``O @ A``."""

    A: np.ndarray

    def __post_init__(self):
        a = np.array(self.A, dtype=float)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError(f"expected a square matrix, got shape {a.shape}")
        # keep the strict upper triangle, mirror it: A + A.T == 0 exactly
        upper = np.triu(a, 1)
        a = upper - upper.T
        a.setflags(write=False)
        object.__setattr__(self, "A", a)

    @classmethod
    def from_coordinates(cls, x, n: int) -> TangentDirection:
        """Build from the strict upper triangle in row-major order."""
        a = np.zeros((n, n))
        a[np.triu_indices(n, 1)] = x
        return cls(a)

    def coordinates(self) -> np.ndarray:
        return self.A[np.triu_indices(self.A.shape[0], 1)]

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.A))


@dataclass(frozen=True)
class OptimizerConfig:
    n: int
    alpha: float = 1.0
    max_iters: int = 10000
    grad_tol: float = 1e-10
    step_init: float = 1.0
    armijo_c: float = 1e-4
    armijo_shrink: float = 0.5
    restarts: int = 1
    master_seed: int = 0

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("n must be >= 1")
        if not self.alpha > 0:
            raise ValueError("alpha must be positive")
        if self.max_iters < 0:
            raise ValueError("max_iters must be >= 0")
        for name in ("grad_tol", "step_init"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        for name in ("armijo_c", "armijo_shrink"):
            if not 0 < getattr(self, name) < 1:
                raise ValueError(f"{name} must lie in (0, 1)")
        if self.restarts < 1:
            raise ValueError("restarts must be >= 1")
        if self.master_seed < 0:
            raise ValueError("master_seed must be non-negative")

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "alpha": float(self.alpha),
            "max_iters": self.max_iters,
            "grad_tol": float(self.grad_tol),
            "step_init": float(self.step_init),
            "armijo_c": float(self.armijo_c),
            "armijo_shrink": float(self.armijo_shrink),
            "restarts": self.restarts,
            "master_seed": self.master_seed,
        }


@dataclass(frozen=True, eq=False)
class RunReport:
    start_seed: int | None
    iterations: int
    final_matrix: OrthogonalMatrix
    final_entropy: float
    final_grad_norm: float
    converged: bool
    stalled: bool = False
    # objective after each accepted step, starting value first; built from
    # per-step gains so it is nondecreasing by construction
    objective_trace: tuple[float, ...] = field(default=(), repr=False)
    max_defect: float = 0.0

    def summary(self) -> dict:
        return {
            "start_seed": self.start_seed,
            "iterations": self.iterations,
            "final_entropy": self.final_entropy,
            "final_grad_norm": self.final_grad_norm,
            "converged": self.converged,
            "stalled": self.stalled,
            "max_defect": self.max_defect,
        }


def _skew(m: np.ndarray) -> np.ndarray:
    return 0.5 * (m - m.T)


def tangent_project(O, G) -> TangentDirection:
    """``skew(O.T @ G)``; ``O @ A`` is the Riemannian gradient for Euclidean gradient ``G``."""
    o = as_array(O)
    g = as_array(G)
    if o.shape != g.shape:
        raise ValueError(f"dimension mismatch: {o.shape} vs {g.shape}")
    return TangentDirection(_skew(o.T @ g))


def _qf(m: np.ndarray) -> np.ndarray:
    q, r = np.linalg.qr(m)
    d = np.sign(np.diag(r))
    d[d == 0] = 1.0
    return np.ascontiguousarray(q * d)


def retract_array(o: np.ndarray, a: np.ndarray, t: float) -> np.ndarray:
    """QR retraction ``qf(O + t O A)`` (Q factor with positive-diagonal R)."""
    if t == 0.0 or not np.any(a):
        return o
    return _qf(o + t * (o @ a))


def retract(O, A, t: float) -> OrthogonalMatrix:
    if not math.isfinite(t):
        raise ValueError("step must be finite")
    O = as_orthogonal(O)
    a = A.A if isinstance(A, TangentDirection) else np.asarray(A, dtype=float)
    out = retract_array(O.entries, a, float(t))
    if out is O.entries:
        return O
    return OrthogonalMatrix.validate(out)


def _lagrangian_gain(o, o_new, sym, alpha):
    """Objective gain from ``o`` to ``o_new`` with the normal component removed.

    On exact manifold points this equals the plain difference. Rounding in
    the retraction leaves ``o_new`` off the manifold by ~1e-16 along normal
    directions, where the Euclidean gradient is O(1); subtracting
    ``<sym, (o_new.T o_new - o.T o)/2>`` with the frozen multiplier ``sym``
    cancels that first-order noise, so gains stay resolvable down to
    gradient norms far below sqrt(eps).
    """
    d = o_new - o
    gain = _entropy.objective_gain(o, o_new, alpha)
    corr = np.sum(sym * (o.T @ d)) + 0.5 * np.sum(sym * (d.T @ d))
    return float(gain - corr)


def _ascend(o: np.ndarray, config: OptimizerConfig, start_seed=None) -> RunReport:
    alpha = float(config.alpha)
    c = config.armijo_c
    value = _entropy.objective_value(o, alpha)
    trace = [value]
    max_defect = orthogonality_defect(o)
    t = config.step_init
    converged = stalled = False
    iterations = 0
    g = math.inf
    while True:
        m = o.T @ _entropy.objective_gradient(o, alpha)
        a = _skew(m)
        sym = m - a
        g = float(np.linalg.norm(a))
        if g <= config.grad_tol:
            converged = True
            break
        if iterations >= config.max_iters:
            break
        slope = g * g
        while True:
            o_new = retract_array(o, a, t)
            gain = _lagrangian_gain(o, o_new, sym, alpha)
            if gain >= c * t * slope:
                break
            # peak of the quadratic model with initial slope `slope` through (t, gain)
            t_quad = slope * t * t / (2.0 * (slope * t - gain))
            t = min(max(t_quad, 0.1 * t), config.armijo_shrink * t)
            if t < MIN_STEP:
                stalled = True
                break
        if stalled:
            break
        defect = orthogonality_defect(o_new)
        if defect > VALIDATION_TOL:
            raise NumericalError(f"iterate left the manifold: defect {defect:.3g}")
        max_defect = max(max_defect, defect)
        o = o_new
        value += gain
        trace.append(value)
        iterations += 1
        # next trial: the quadratic model's optimum along this step, capped
        denom = slope * t - gain
        t_next = slope * t * t / (2.0 * denom) if denom > 0 else 2.0 * t
        t = min(config.step_init, t_next)
    final = OrthogonalMatrix.validate(o)
    return RunReport(
        start_seed=start_seed,
        iterations=iterations,
        final_matrix=final,
        final_entropy=_entropy.entropy_value(o),
        final_grad_norm=g,
        converged=converged,
        stalled=stalled,
        objective_trace=tuple(trace),
        max_defect=max_defect,
    )


def maximize_entropy(start, config: OptimizerConfig) -> RunReport:
    """Gradient ascent with Armijo backtracking from ``start``.

    For ``alpha != 1`` the objective is ``(sum u**alpha - n)/(1 - alpha)``,
    which has the same critical points as the power sum.
    """
    start = as_orthogonal(start)
    if start.n != config.n:
        raise ValueError(f"start has n={start.n}, config has n={config.n}")
    return _ascend(np.array(start.entries), config)


def run_seed(master_seed: int, index: int) -> int:
    """Per-run 64-bit seed, a fixed function of (master_seed, run index)."""
    ss = np.random.SeedSequence([int(master_seed), int(index)])
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def single_run(config: OptimizerConfig, index: int) -> RunReport:
    seed = run_seed(config.master_seed, index)
    start = haar_orthogonal_array(config.n, np.random.default_rng(seed))
    return _ascend(start, config, start_seed=seed)


def _run_star(args):
    return single_run(*args)


@dataclass(frozen=True, eq=False)
class Catalog:
    config: OptimizerConfig
    runs: tuple[RunReport, ...]
    points: tuple  # CriticalPointRecord, sorted by entropy descending

    @property
    def best(self):
        return self.points[0] if self.points else None

    @property
    def n_converged(self) -> int:
        return sum(r.converged for r in self.runs)

    @property
    def n_stalled(self) -> int:
        return sum(r.stalled for r in self.runs)


def multistart_search(config: OptimizerConfig, workers: int = 1, classify: bool = True) -> Catalog:
    """Run ``config.restarts`` ascents from Haar-random starts and catalogue the endpoints.

    Converged endpoints are grouped by canonical fingerprint; each group is
    represented by its highest-entropy member (lowest run index on ties) and
    classified once. The result does not depend on ``workers``.
    """
    from .critical import catalogue_endpoints

    jobs = [(config, i) for i in range(config.restarts)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            runs = list(pool.map(_run_star, jobs, chunksize=max(1, len(jobs) // (4 * workers))))
    else:
        runs = [single_run(*job) for job in jobs]
    points = catalogue_endpoints(runs, config, classify=classify)
    return Catalog(config, tuple(runs), tuple(points))
