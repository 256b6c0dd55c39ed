"""topoforge: topology-perturbing segmentation corruptions from truncated
orthogonal-polynomial expansions, plus Betti-number/Dice evaluation.

The pipeline: sample Gaussian coefficients for a tensor-product polynomial
basis, evaluate the truncated expansion on a grid, min-max normalize it
into a perturbation mask, multiply the mask into a binary ground truth to
obtain a corrupted probability map, optionally add over-segmentation
noise, then quantify the damage with Betti numbers, Betti errors, and
Dice.
"""
from ._kernels import BACKEND as KERNEL_BACKEND
from .basis import (
    BasisSpec,
    CoefficientTensor,
    DomainMapping,
    eval_expansion_grid,
    eval_expansion_naive,
    grid_coordinates,
)
from .corruption import CorruptionSpec, apply_overseg_noise, binarize, corrupt
from .errors import (
    ConfigurationError,
    DegenerateGridError,
    DegenerateMaskWarning,
    FormatVersionError,
    GeometryError,
    InputError,
    InternalInconsistencyError,
    OrderOverflowError,
    PayloadLengthError,
    SidecarError,
    TopoforgeError,
    VolumeIOError,
)
from .io import read_manifest, read_volume, write_manifest, write_metrics_csv, write_volume
from .perturbation import (
    MaskSpec,
    MaskStatistics,
    Normalization,
    mask_statistics,
    sample_coefficients,
    synthesize_mask,
)
from .phantom import PhantomKind, PhantomSpec, generate, list_phantoms
from .pipeline import ablation_rows, generate_dataset, verify_manifest
from .polynomial import (
    Family,
    HermiteVariant,
    PolynomialFamily,
    QuadratureRule,
    analytic_norm_sq,
    chebyshev,
    eval_1d,
    eval_axis,
    gauss_chebyshev,
    gauss_hermite,
    gauss_legendre,
    hermite,
    inner_product,
    legendre,
    orthogonality_report,
    rule_for,
)
from .topology import (
    BettiNumbers,
    MetricsReport,
    betti,
    betti_error,
    cell_counts,
    connected_components,
    dice,
    euler_characteristic,
)

__version__ = "0.1.0"
