"""Classification of stationary points of the entropy on O(n).

The Hessian is taken by finite differences in tangent coordinates: the
strict upper triangle ``x`` of a skew matrix ``A(x)``, pulled back through
the retraction, ``f(x) = H(retract(O, A(x), 1))``. At a critical point this
pullback Hessian equals the Riemannian Hessian for any retraction.

The entropy integrand ``-x**2 ln x**2`` has unbounded second derivative at
``x = 0``, so at matrices with (near-)zero entries the finite-difference
curvature depends on the step. Such points are flagged ``nonsmooth`` and
their classification is checked against random perturbation probes.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from . import entropy as _entropy
from .manifold import _lagrangian_gain, _skew, retract_array
from .matrices import (
    CanonicalFingerprint,
    OrthogonalMatrix,
    as_orthogonal,
    canonical_fingerprint,
    family_matrix,
)

NONSMOOTH_ENTRY = 1e-3
PROBE_COUNT = 200
PROBE_RADIUS = 1e-3
PROBE_SEED = 0


class NotStationaryError(ValueError):
    def __init__(self, grad_norm: float, grad_tol: float):
        super().__init__(
            f"not stationary: Riemannian gradient norm {grad_norm:.17g} exceeds {grad_tol:g}"
        )
        self.grad_norm = grad_norm


@dataclass(frozen=True, eq=False)
class TangentHessian:
    dim: int
    H: np.ndarray
    step: float
    # max |H_raw - H_raw.T| before symmetrisation
    asymmetry: float = 0.0


@dataclass(frozen=True, eq=False)
class CriticalPointRecord:
    matrix: OrthogonalMatrix
    entropy: float
    grad_norm: float
    classification: str  # maximum | minimum | saddle | degenerate
    index: int
    fingerprint: CanonicalFingerprint
    dim: int
    eigenvalues: tuple[float, ...]
    step: float
    nonsmooth: bool = False
    probes_up: int = 0
    probes_down: int = 0
    probes_flat: int = 0
    notes: tuple[str, ...] = ()
    # filled in by the multistart catalogue
    hits: int = 0
    runs: tuple[int, ...] = field(default=())

    @property
    def label(self) -> str:
        if self.classification == "saddle":
            return f"saddle(index {self.index})"
        return self.classification

    def to_dict(self) -> dict:
        d = {
            "entropy": self.entropy,
            "grad_norm": self.grad_norm,
            "classification": self.classification,
            "index": self.index,
            "dim": self.dim,
            "eigenvalues": list(self.eigenvalues),
            "step": self.step,
            "nonsmooth": self.nonsmooth,
            "probes": {
                "count": self.probes_up + self.probes_down + self.probes_flat,
                "up": self.probes_up,
                "down": self.probes_down,
                "flat": self.probes_flat,
            },
            "fingerprint": str(self.fingerprint),
            "notes": list(self.notes),
            "matrix": [[float(x) for x in row] for row in self.matrix.entries],
        }
        if self.hits:
            d["hits"] = self.hits
            d["runs"] = list(self.runs)
        return d


def _riemannian_parts(o: np.ndarray, alpha: float):
    m = o.T @ _entropy.objective_gradient(o, alpha)
    a = _skew(m)
    return a, m - a


def riemannian_grad_norm(O, alpha: float = 1.0) -> float:
    a, _ = _riemannian_parts(as_orthogonal(O).entries, alpha)
    return float(np.linalg.norm(a))


def riemannian_hessian(O, step: float = 1e-4, alpha: float = 1.0) -> TangentHessian:
    if not step > 0:
        raise ValueError("step must be positive")
    o = as_orthogonal(O).entries
    n = o.shape[0]
    dim = n * (n - 1) // 2
    iu = np.triu_indices(n, 1)
    _, sym = _riemannian_parts(o, alpha)
    cache: dict = {}

    def f(*moves):
        # f(x) - f(0) at x = sum of (coordinate, sign) * step
        key = frozenset(moves)
        if key not in cache:
            x = np.zeros(dim)
            for k, s in moves:
                x[k] += s * step
            a = np.zeros((n, n))
            a[iu] = x
            a -= a.T
            cache[key] = _lagrangian_gain(o, retract_array(o, a, 1.0), sym, alpha)
        return cache[key]

    raw = np.zeros((dim, dim))
    h2 = step * step
    for p in range(dim):
        # f(0) - f(0) == 0 drops out of the central second difference
        raw[p, p] = (f((p, 1)) + f((p, -1))) / h2
        for q in range(dim):
            if q == p:
                continue
            raw[p, q] = (
                f((p, 1), (q, 1)) - f((p, 1), (q, -1)) - f((p, -1), (q, 1)) + f((p, -1), (q, -1))
            ) / (4.0 * h2)
    asym = float(np.max(np.abs(raw - raw.T))) if dim else 0.0
    return TangentHessian(dim, 0.5 * (raw + raw.T), float(step), asym)


def perturbation_probes(
    O, count: int = PROBE_COUNT, radius: float = PROBE_RADIUS, seed: int = PROBE_SEED, alpha: float = 1.0
) -> tuple[int, int, int]:
    """Signs of the objective change along ``count`` random tangent steps of norm ``radius``.

    Returns ``(up, down, flat)``.
    """
    o = as_orthogonal(O).entries
    n = o.shape[0]
    rng = np.random.default_rng(seed)
    iu = np.triu_indices(n, 1)
    _, sym = _riemannian_parts(o, alpha)
    up = down = flat = 0
    for _ in range(count):
        a = np.zeros((n, n))
        a[iu] = rng.standard_normal(len(iu[0]))
        a -= a.T
        norm = np.linalg.norm(a)
        if norm == 0:
            flat += 1
            continue
        d = _lagrangian_gain(o, retract_array(o, a * (radius / norm), 1.0), sym, alpha)
        if d > 0:
            up += 1
        elif d < 0:
            down += 1
        else:
            flat += 1
    return up, down, flat


def _notes(o: np.ndarray, fp: CanonicalFingerprint, h: float, nonsmooth: bool) -> list[str]:
    n = o.shape[0]
    notes = []
    if nonsmooth:
        notes.append(
            "non-smooth point: entries below 1e-3 make the finite-difference "
            "curvature step-dependent; classification checked by perturbation probes"
        )
    if abs(h - n * math.log(n)) <= 1e-9 * max(1.0, n * math.log(n)):
        notes.append("saturates the bound n ln n (rescaled Hadamard matrix)")
    if n >= 2 and fp == canonical_fingerprint(family_matrix(n), fp.quantum):
        notes.append("family member: one entry (n-2)/n and n-1 entries 2/n per row")
        if n == 4:
            notes.append(
                "at n=4 the family witness (2/n)J - I has all magnitudes 1/2, i.e. it "
                "is a rescaled Hadamard matrix and the maximum, so it cannot be the "
                "non-maximal family extremum reported for n=4"
            )
    return notes


def classify_critical_point(
    O,
    grad_tol: float = 1e-6,
    zero_frac: float = 1e-4,
    step: float = 1e-4,
    alpha: float = 1.0,
    probes: int = PROBE_COUNT,
    probe_seed: int = PROBE_SEED,
) -> CriticalPointRecord:
    O = as_orthogonal(O)
    o = O.entries
    g = riemannian_grad_norm(O, alpha)
    if not g <= grad_tol:
        raise NotStationaryError(g, grad_tol)
    hess = riemannian_hessian(O, step, alpha)
    eig = np.linalg.eigvalsh(hess.H) if hess.dim else np.zeros(0)
    thr = zero_frac * float(np.max(np.abs(eig))) if eig.size else 0.0
    index = int(np.sum(eig > thr))
    if eig.size and np.any(np.abs(eig) <= thr):
        cls = "degenerate"
    elif index == 0:
        cls = "maximum"
    elif index == hess.dim:
        cls = "minimum"
    else:
        cls = "saddle"

    nonsmooth = bool(np.min(np.abs(o)) < NONSMOOTH_ENTRY)
    up, down, flat = perturbation_probes(O, probes, PROBE_RADIUS, probe_seed, alpha) if probes else (0, 0, 0)
    h = _entropy.entropy_value(o)
    fp = canonical_fingerprint(o)
    notes = _notes(o, fp, h, nonsmooth)
    if nonsmooth and probes:
        probe_cls = "maximum" if up == 0 and flat == 0 else "minimum" if down == 0 and flat == 0 else "saddle"
        if probe_cls != cls and up + down > 0:
            notes.append(f"finite-difference Hessian suggested {cls}; probes decide {probe_cls}")
            cls = probe_cls
    return CriticalPointRecord(
        matrix=O,
        entropy=h,
        grad_norm=g,
        classification=cls,
        index=index,
        fingerprint=fp,
        dim=hess.dim,
        eigenvalues=tuple(float(x) for x in eig),
        step=hess.step,
        nonsmooth=nonsmooth,
        probes_up=up,
        probes_down=down,
        probes_flat=flat,
        notes=tuple(notes),
    )


def catalogue_endpoints(runs, config, classify: bool = True) -> list[CriticalPointRecord]:
    """Deduplicate converged endpoints by fingerprint and classify one representative each."""
    groups: dict[CanonicalFingerprint, list[int]] = {}
    for i, run in enumerate(runs):
        if run.converged:
            groups.setdefault(canonical_fingerprint(run.final_matrix), []).append(i)
    records = []
    for fp, members in groups.items():
        rep = min(members, key=lambda i: (-runs[i].final_entropy, i))
        run = runs[rep]
        if classify:
            rec = classify_critical_point(
                run.final_matrix, grad_tol=max(1e-6, run.final_grad_norm), alpha=config.alpha
            )
        else:
            rec = CriticalPointRecord(
                matrix=run.final_matrix,
                entropy=run.final_entropy,
                grad_norm=run.final_grad_norm,
                classification="unclassified",
                index=-1,
                fingerprint=fp,
                dim=config.n * (config.n - 1) // 2,
                eigenvalues=(),
                step=0.0,
            )
        records.append(replace(rec, hits=len(members), runs=tuple(members)))
    records.sort(key=lambda r: (-r.entropy, r.fingerprint.rows))
    return records

