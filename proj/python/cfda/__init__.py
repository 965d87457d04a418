"""Compositional functional data analysis.

Thin python surface over the C++ core: functional-simplex geometry (clr,
perturbation, powering), compositional functional PCA and spectral clustering
of score vectors.
"""

from ._cfda import (  # noqa: F401
    ClrCurve,
    ClusterResult,
    ConfigError,
    CovKernelBlocks,
    DataError,
    EigenSystem,
    FunctionalComposition,
    MeanComposition,
    MissingMask,
    NumericError,
    ScoreMatrix,
    SelectionRow,
    SelectionTable,
    SilhouetteOptions,
    SimilarityGraph,
    SmoothingConfig,
    TimeGrid,
    center,
    closure,
    clr,
    clr_inner_product,
    clr_inv,
    component_envelope,
    covariance,
    distance,
    eigendecompose,
    geometric_mean_curve,
    impute_missing,
    inner_product,
    majority_vote,
    mean,
    norm,
    penalized_spline_fit,
    perturb,
    power,
    reconstruct,
    run_pipeline,
    scores,
    select_g,
    silhouette,
    similarity,
    smooth_composition,
    spectral_cluster,
    uniform_composition,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
