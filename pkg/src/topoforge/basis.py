"""Tensor-product bases and truncated-expansion evaluation on Cartesian grids.

A d-dimensional basis element is a product of 1D family members,
``e_ijk(x, y, z) = phi_i(x) phi_j(y) phi_k(z)``, and a field is a linear
combination ``sum_ijk a_ijk e_ijk`` with one coefficient per element,
orders 0..N inclusive on every axis.

Grids use the volume convention shared across the package: ``dims`` are
``(nx, ny[, nz])`` while arrays are indexed ``[z, y, x]`` (2D: ``[y, x]``),
x fastest in memory.

Under the symmetric mapping the bounded families are sampled on their
orthogonality interval [-1, 1].  The Hermite-Gaussian family is orthogonal
on the whole real line, so its grid spans [-S, S] with S = sqrt(2N + 1),
the classical turning point of the highest retained order: this way every
retained basis function exhibits its oscillatory region on the grid and
mask frequency content grows with the order, which a literal [-1, 1]
window would suppress.
"""
import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import DegenerateGridError, InputError
from .polynomial import Family, PolynomialFamily, eval_axis


class DomainMapping(str, Enum):
    # index m -> -1 + 2m/(D-1): endpoint-inclusive [-1, 1], the natural
    # orthogonality interval of the bounded families
    SYMMETRIC_UNIT = "symmetric"
    # index m -> m/D on [0, 1): kept for configurations that sample the
    # half-open unit cell
    UNIT_INTERVAL = "unit"


@dataclass(frozen=True)
class BasisSpec:
    family: PolynomialFamily
    max_order: int
    dimensionality: int = 3
    domain_mapping: DomainMapping = DomainMapping.SYMMETRIC_UNIT

    def __post_init__(self):
        # order 0 (constant-only basis) is allowed; mask synthesis flags the
        # resulting constant field as degenerate.
        if self.max_order < 0:
            raise InputError(f"max_order must be >= 0, got {self.max_order}")
        if self.dimensionality not in (2, 3):
            raise InputError(f"dimensionality must be 2 or 3, got {self.dimensionality}")

    @property
    def coeff_shape(self) -> tuple[int, ...]:
        return (self.max_order + 1,) * self.dimensionality

    @property
    def n_terms(self) -> int:
        return (self.max_order + 1) ** self.dimensionality

    def to_dict(self) -> dict:
        return {
            "family": self.family.kind.value,
            "hermite_variant": self.family.hermite_variant.value,
            "max_order": self.max_order,
            "dimensionality": self.dimensionality,
            "domain_mapping": self.domain_mapping.value,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "BasisSpec":
        from .polynomial import Family, HermiteVariant

        return cls(
            family=PolynomialFamily(
                Family(d["family"]),
                HermiteVariant(d.get("hermite_variant", "standard")),
            ),
            max_order=int(d["max_order"]),
            dimensionality=int(d["dimensionality"]),
            domain_mapping=DomainMapping(d["domain_mapping"]),
        )


@dataclass(eq=False)
class CoefficientTensor:
    """Sampled coefficients ``a_ijk`` with their provenance."""

    values: np.ndarray  # shape (N+1,)*d, axes in (i, j, k) order
    seed: int
    basis: BasisSpec

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.float64)
        if values.shape != self.basis.coeff_shape:
            raise InputError(
                f"coefficient shape {values.shape} does not match basis "
                f"{self.basis.coeff_shape}"
            )
        if not np.all(np.isfinite(values)):
            raise InputError("coefficients must be finite")
        self.values = values


def grid_coordinates(mapping: DomainMapping, dim_size: int) -> np.ndarray:
    """1D grid coordinates for one axis of ``dim_size`` voxels."""
    if dim_size <= 0:
        raise InputError(f"dim_size must be >= 1, got {dim_size}")
    if mapping is DomainMapping.SYMMETRIC_UNIT:
        if dim_size < 2:
            raise DegenerateGridError(
                "symmetric mapping needs at least 2 samples per axis"
            )
        return -1.0 + (2.0 * np.arange(dim_size, dtype=np.float64)) / (dim_size - 1)
    return np.arange(dim_size, dtype=np.float64) / dim_size


def _validate(spec: BasisSpec, coeffs: CoefficientTensor, dims) -> tuple[int, ...]:
    dims = tuple(int(d) for d in dims)
    if len(dims) != spec.dimensionality:
        raise InputError(f"dims {dims} do not match dimensionality {spec.dimensionality}")
    if any(d < 1 for d in dims):
        raise InputError(f"dims must be positive, got {dims}")
    if coeffs.basis != spec:
        raise InputError("coefficient tensor was sampled for a different basis spec")
    return dims


def axis_scale(spec: BasisSpec) -> float:
    """Half-width of the sampled domain along each axis.

    1.0 for the bounded families and for the literal unit-interval mapping;
    sqrt(2N + 1) for Hermite-Gaussian under the symmetric mapping (see the
    module docstring).
    """
    if (
        spec.family.kind is Family.HERMITE
        and spec.domain_mapping is DomainMapping.SYMMETRIC_UNIT
    ):
        return math.sqrt(2.0 * spec.max_order + 1.0)
    return 1.0


def _axis_tables(spec: BasisSpec, dims: tuple[int, ...]) -> list[np.ndarray]:
    # one (N+1, dims[a]) table per axis, in (x, y[, z]) order
    scale = axis_scale(spec)
    return [
        eval_axis(
            spec.family,
            spec.max_order,
            grid_coordinates(spec.domain_mapping, d) * scale,
        )
        for d in dims
    ]


def eval_expansion_grid(spec: BasisSpec, coeffs: CoefficientTensor, dims) -> np.ndarray:
    """Evaluate the truncated expansion on a grid by separable contraction.

    The coefficient tensor is contracted one mode at a time (x, then y,
    then z) against per-axis evaluation tables; the (N+1)^d * voxels
    product is never materialized.  ``np.einsum`` is used without
    ``optimize`` so the summation order is fixed and results are bitwise
    reproducible regardless of BLAS threading.
    """
    dims = _validate(spec, coeffs, dims)
    tables = _axis_tables(spec, dims)
    c = coeffs.values
    if spec.dimensionality == 3:
        ax, ay, az = tables
        t = np.einsum("ijk,ix->jkx", c, ax)
        t = np.einsum("jkx,jy->kxy", t, ay)
        return np.einsum("kxy,kz->zyx", t, az)
    ax, ay = tables
    t = np.einsum("ij,ix->jx", c, ax)
    return np.einsum("jx,jy->yx", t, ay)


def eval_expansion_naive(spec: BasisSpec, coeffs: CoefficientTensor, dims) -> np.ndarray:
    """Direct term-by-term summation over all basis elements.

    Test oracle for ``eval_expansion_grid``: every ``e_ijk`` is evaluated on
    the full grid and accumulated in lexicographic (i, j, k) order, with no
    contraction reordering.  Intended for small grids only.
    """
    dims = _validate(spec, coeffs, dims)
    tables = _axis_tables(spec, dims)
    c = coeffs.values
    out = np.zeros(dims[::-1], dtype=np.float64)
    if spec.dimensionality == 3:
        ax, ay, az = tables
        for i, j, k in np.ndindex(c.shape):
            out += c[i, j, k] * (
                az[k][:, None, None] * ay[j][None, :, None] * ax[i][None, None, :]
            )
    else:
        ax, ay = tables
        for i, j in np.ndindex(c.shape):
            out += c[i, j] * (ay[j][:, None] * ax[i][None, :])
    return out
