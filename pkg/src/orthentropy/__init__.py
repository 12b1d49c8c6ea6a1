"""Entropy of orthogonal matrices.

Rows of an orthogonal matrix are unit vectors, so their squared entries are
probability distributions; the matrix entropy is the sum of the row
entropies. Rescaled Hadamard matrices attain the bound ``n ln n``. The
package evaluates the entropy and its Renyi-type relatives, searches O(n)
for maxima by Riemannian gradient ascent, and classifies the critical
points it finds.
"""
__version__ = "0.1.0"

from .critical import (
    CriticalPointRecord,
    NotStationaryError,
    TangentHessian,
    classify_critical_point,
    perturbation_probes,
    riemannian_grad_norm,
    riemannian_hessian,
)
from .entropy import (
    EntropyReport,
    RowProbabilities,
    StationarityResidual,
    entropy_bound,
    entropy_value,
    euclidean_gradient,
    renyi_power_sum,
    row_probabilities,
    shannon_entropy,
    stationarity_residual,
)
from .manifold import (
    Catalog,
    NumericalError,
    OptimizerConfig,
    RunReport,
    TangentDirection,
    maximize_entropy,
    multistart_search,
    retract,
    run_seed,
    tangent_project,
)
from .matrices import (
    CanonicalFingerprint,
    MatrixFormatError,
    NotOrthogonalError,
    OrthogonalMatrix,
    SquareMatrix,
    canonical_fingerprint,
    family_matrix,
    haar_random_orthogonal,
    load_matrix,
    orthogonality_defect,
    render_matrix,
    rescaled_hadamard,
    sylvester_hadamard,
)
