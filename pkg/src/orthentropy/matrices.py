"""Square and orthogonal matrices: validation, text I/O, sampling, constructors.

Matrix text format: one row per line, entries separated by commas, e.g.::

    0.5,0.70710678118654757,0.5
    0.70710678118654757,0,-0.70710678118654757
    0.5,-0.70710678118654757,0.5
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

VALIDATION_TOL = 1e-10
DET_TOL = 1e-8
FINGERPRINT_QUANTUM = 1e-6
MAX_DIM = 4096


class MatrixFormatError(ValueError):
    """Malformed matrix text. ``kind`` is one of
    'empty', 'ragged', 'non-square', 'unparseable', 'non-finite'."""

    def __init__(self, kind: str, message: str):
        super().__init__(message)
        self.kind = kind


class NotOrthogonalError(ValueError):
    def __init__(self, defect: float, tol: float, det: float | None = None):
        if det is None:
            msg = f"matrix is not orthogonal: defect {defect:.17g} exceeds tolerance {tol:g}"
        else:
            msg = f"matrix is not orthogonal: |det| = {abs(det):.17g} (defect {defect:.17g})"
        super().__init__(msg)
        self.defect = defect
        self.tol = tol


@dataclass(frozen=True, eq=False)
class SquareMatrix:
    """An n x n grid of finite reals. The stored array is a read-only copy."""

    entries: np.ndarray

    def __post_init__(self):
        a = np.array(self.entries, dtype=float, copy=True, order="C")
        if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] == 0:
            raise ValueError(f"expected a non-empty square matrix, got shape {a.shape}")
        if not np.all(np.isfinite(a)):
            raise ValueError("matrix has non-finite entries")
        a.setflags(write=False)
        object.__setattr__(self, "entries", a)

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    def __array__(self, dtype=None, copy=None):
        return self.entries if dtype is None else self.entries.astype(dtype)

    def __eq__(self, other):
        if not isinstance(other, SquareMatrix):
            return NotImplemented
        return np.array_equal(self.entries, other.entries)

    def __hash__(self):
        return hash(self.entries.tobytes())


@dataclass(frozen=True, eq=False)
class OrthogonalMatrix:
    """A point of O(n): a SquareMatrix that passed :meth:`validate`."""

    base: SquareMatrix
    defect: float

    @classmethod
    def validate(cls, m, tol: float = VALIDATION_TOL) -> OrthogonalMatrix:
        if isinstance(m, OrthogonalMatrix):
            m = m.base
        base = m if isinstance(m, SquareMatrix) else SquareMatrix(m)
        defect = orthogonality_defect(base)
        if not defect <= tol:
            raise NotOrthogonalError(defect, tol)
        _, logabsdet = np.linalg.slogdet(base.entries)
        det = math.exp(logabsdet)
        if abs(det - 1.0) > DET_TOL:
            raise NotOrthogonalError(defect, tol, det)
        return cls(base, defect)

    @property
    def entries(self) -> np.ndarray:
        return self.base.entries

    @property
    def n(self) -> int:
        return self.base.n

    def __array__(self, dtype=None, copy=None):
        return self.base.__array__(dtype)

    def __eq__(self, other):
        if not isinstance(other, OrthogonalMatrix):
            return NotImplemented
        return self.base == other.base

    def __hash__(self):
        return hash(self.base)


def as_array(m) -> np.ndarray:
    """Entries of ``m`` as a C-contiguous float64 array (no copy when possible)."""
    if isinstance(m, (SquareMatrix, OrthogonalMatrix)):
        return m.entries
    return np.ascontiguousarray(m, dtype=float)


def as_orthogonal(m, tol: float = VALIDATION_TOL) -> OrthogonalMatrix:
    if isinstance(m, OrthogonalMatrix):
        return m
    return OrthogonalMatrix.validate(m, tol)


# ---------------------------------------------------------------- text I/O

def load_matrix(text: str) -> SquareMatrix:
    lines = [ln.strip() for ln in text.strip().splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines:
        raise MatrixFormatError("empty", "no matrix rows found")
    rows = [ln.split(",") for ln in lines]
    widths = {len(r) for r in rows}
    if len(widths) > 1:
        raise MatrixFormatError(
            "ragged", f"ragged rows: row lengths {[len(r) for r in rows]}"
        )
    width = widths.pop()
    if width != len(rows):
        raise MatrixFormatError(
            "non-square", f"grid is {len(rows)} x {width}, expected a square matrix"
        )
    values = []
    for i, r in enumerate(rows, 1):
        row = []
        for j, tok in enumerate(r, 1):
            try:
                x = float(tok)
            except ValueError:
                raise MatrixFormatError(
                    "unparseable", f"unparseable value at row {i}, column {j}: {tok.strip()!r}"
                ) from None
            if not math.isfinite(x):
                raise MatrixFormatError(
                    "non-finite", f"non-finite value at row {i}, column {j}: {tok.strip()!r}"
                )
            row.append(x)
        values.append(row)
    return SquareMatrix(np.array(values))


def render_matrix(m) -> str:
    """Matrix text at 17 significant digits, so ``load_matrix`` round-trips exactly."""
    a = as_array(m)
    return "\n".join(",".join(format(float(x), ".17g") for x in row) for row in a) + "\n"


def read_matrix(path) -> SquareMatrix:
    with open(path, encoding="utf-8") as fh:
        return load_matrix(fh.read())


# ---------------------------------------------------------------- measures

def orthogonality_defect(m) -> float:
    """max |(M^T M - I)_jk|."""
    a = as_array(m)
    gram = a.T @ a
    gram[np.diag_indices_from(gram)] -= 1.0
    return float(np.max(np.abs(gram)))


# ---------------------------------------------------------------- constructors

def _check_dim(n: int, lo: int = 1) -> int:
    n = int(n)
    if n < lo:
        raise ValueError(f"dimension must be >= {lo}, got {n}")
    if n > MAX_DIM:
        raise ValueError(f"dimension {n} exceeds the cap {MAX_DIM}")
    return n


def haar_orthogonal_array(n: int, rng: np.random.Generator) -> np.ndarray:
    z = rng.standard_normal((n, n))
    q, r = np.linalg.qr(z)
    # sign fix makes the distribution exactly Haar
    d = np.sign(np.diag(r))
    d[d == 0] = 1.0
    return np.ascontiguousarray(q * d)


def haar_random_orthogonal(n: int, seed: int) -> OrthogonalMatrix:
    """Haar-distributed sample of O(n); deterministic for fixed ``(n, seed)``."""
    n = _check_dim(n)
    rng = np.random.default_rng(seed)
    return OrthogonalMatrix.validate(haar_orthogonal_array(n, rng))


def sylvester_hadamard(k: int) -> SquareMatrix:
    """The +-1 Sylvester-Hadamard matrix of order 2**k."""
    k = int(k)
    if k < 0:
        raise ValueError(f"k must be >= 0, got {k}")
    if 2**k > MAX_DIM:
        raise ValueError(f"order 2**{k} exceeds the cap {MAX_DIM}")
    h = np.ones((1, 1))
    for _ in range(k):
        h = np.block([[h, h], [h, -h]])
    return SquareMatrix(h)


def rescaled_hadamard(k: int) -> OrthogonalMatrix:
    h = sylvester_hadamard(k)
    return OrthogonalMatrix.validate(h.entries / math.sqrt(h.n))


def family_matrix(n: int) -> OrthogonalMatrix:
    """(2/n) J - I: each row has one entry of magnitude (n-2)/n and n-1 of 2/n.

    Symmetric and involutory. At n = 3 it is the matrix with -1/3 on the
    diagonal and 2/3 elsewhere; at n = 4 every entry has magnitude 1/2.
    """
    n = _check_dim(n, lo=2)
    m = np.full((n, n), 2.0 / n)
    m[np.diag_indices(n)] -= 1.0
    return OrthogonalMatrix.validate(m)


# ---------------------------------------------------------------- fingerprints

@dataclass(frozen=True)
class CanonicalFingerprint:
    """Sorted per-row sorted magnitudes, as integer multiples of ``quantum``.

    Invariant under row/column permutations and sign flips.
    """

    n: int
    rows: tuple[tuple[int, ...], ...]
    quantum: float = FINGERPRINT_QUANTUM

    def magnitudes(self) -> np.ndarray:
        return np.array(self.rows, dtype=float) * self.quantum

    def __str__(self) -> str:
        decimals = max(0, -math.floor(math.log10(self.quantum)))
        rows = ";".join(
            ",".join(f"{k * self.quantum:.{decimals}f}" for k in row) for row in self.rows
        )
        return f"n={self.n};rows={rows}"


def canonical_fingerprint(m, quantum: float = FINGERPRINT_QUANTUM) -> CanonicalFingerprint:
    if not quantum > 0:
        raise ValueError("quantum must be positive")
    a = as_array(m)
    k = np.rint(np.abs(a) / quantum).astype(np.int64)
    k.sort(axis=1)
    rows = sorted(tuple(int(x) for x in row) for row in k)
    return CanonicalFingerprint(a.shape[0], tuple(rows), quantum)
