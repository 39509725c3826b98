"""Transfer-probability distances on uniform spin rings and their embeddings.

The pipeline: build ring Hamiltonians restricted to the single-excitation
subspace, decompose them spectrally (closed form or Jacobi solver), turn
eigenprojector overlaps into the distance d(i,j) = -log p_max, verify the
metric axioms with the antipodal quotient for even rings, and decide or
realize isometric embeddings into spheres, Euclidean space, and hyperbolic
space of constant curvature.
"""

from .errors import (
    DimensionTooLarge,
    FactorizationFailure,
    IndexOutOfRange,
    InvalidArgs,
    InvalidSpec,
    NoConvergence,
    NotEmbeddable,
    QuotientOnOddRing,
    RestrictionMismatch,
    SpinRingError,
)
from .hamiltonian import (
    FULL_SPACE_CAP,
    Coupling,
    DenseSymmetricMatrix,
    RestrictionCheck,
    RingSpec,
    build_full_hamiltonian,
    build_single_excitation_hamiltonian,
    single_excitation_index,
    verify_subspace_restriction,
)
from .spectral import (
    SpectralDecomposition,
    SpectralSource,
    circulant_spectrum,
    jacobi_eigh,
    numerical_spectrum,
    projector_overlaps,
)
from .metric import (
    DistanceMatrix,
    MetricClassification,
    MetricReport,
    RingClassification,
    RingKind,
    Violation,
    asymptotic_distance,
    check_metric_axioms,
    classify_ring,
    distance_matrix,
    distance_profile,
    distance_variance_sweep,
    merge_distinct_values,
    p_max,
    p_max_closed_form,
    sqrt_p_max_closed_form,
    transfer_probability_time_series,
)
from .embedding import (
    CayleyMengerMatrix,
    EmbeddingResult,
    EmbeddingSpace,
    FeasibilityThreshold,
    GramMatrix,
    GramRegime,
    KappaMaxQuery,
    MinorSignVerdict,
    RingEmbeddingReport,
    SphericalVerdict,
    cayley_menger_matrix,
    cayley_menger_minors,
    embeddable_euclidean,
    embeddable_hyperbolic,
    embeddable_spherical,
    hyperbolic_gram,
    kappa_max,
    realize,
    ring_embedding_report,
    spherical_feasibility_threshold,
    spherical_gram,
    toeplitz_eigenvalues,
    toeplitz_minor_closed_form,
    toeplitz_minor_recursion,
)

__version__ = "0.1.0"

__all__ = [
    "SpinRingError",
    "InvalidSpec",
    "DimensionTooLarge",
    "RestrictionMismatch",
    "NoConvergence",
    "IndexOutOfRange",
    "QuotientOnOddRing",
    "InvalidArgs",
    "NotEmbeddable",
    "FactorizationFailure",
    "FULL_SPACE_CAP",
    "Coupling",
    "RingSpec",
    "DenseSymmetricMatrix",
    "RestrictionCheck",
    "build_full_hamiltonian",
    "build_single_excitation_hamiltonian",
    "single_excitation_index",
    "verify_subspace_restriction",
    "SpectralSource",
    "SpectralDecomposition",
    "jacobi_eigh",
    "numerical_spectrum",
    "circulant_spectrum",
    "projector_overlaps",
    "DistanceMatrix",
    "MetricClassification",
    "MetricReport",
    "RingClassification",
    "RingKind",
    "Violation",
    "sqrt_p_max_closed_form",
    "p_max_closed_form",
    "p_max",
    "distance_profile",
    "distance_matrix",
    "check_metric_axioms",
    "merge_distinct_values",
    "classify_ring",
    "asymptotic_distance",
    "distance_variance_sweep",
    "transfer_probability_time_series",
    "CayleyMengerMatrix",
    "EmbeddingResult",
    "EmbeddingSpace",
    "FeasibilityThreshold",
    "GramMatrix",
    "GramRegime",
    "KappaMaxQuery",
    "MinorSignVerdict",
    "RingEmbeddingReport",
    "SphericalVerdict",
    "cayley_menger_matrix",
    "cayley_menger_minors",
    "embeddable_euclidean",
    "embeddable_hyperbolic",
    "embeddable_spherical",
    "hyperbolic_gram",
    "kappa_max",
    "realize",
    "ring_embedding_report",
    "spherical_feasibility_threshold",
    "spherical_gram",
    "toeplitz_eigenvalues",
    "toeplitz_minor_closed_form",
    "toeplitz_minor_recursion",
]
