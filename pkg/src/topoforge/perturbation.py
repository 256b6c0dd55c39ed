"""Seed-deterministic synthesis of normalized topology-perturbation masks.

A mask is a truncated tensor-product expansion with Gaussian-sampled
coefficients, evaluated on a voxel grid and min-max normalized to [0, 1].
Coefficient streams come from numpy's Philox (a counter-based generator)
keyed by a SHA-256 digest of the full spec, so masks are bitwise
reproducible and independent of batch order; a golden-value test pins the
byte stream against generator drift.
"""
import hashlib
import warnings
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .basis import BasisSpec, CoefficientTensor, eval_expansion_grid
from .errors import DegenerateMaskWarning, InputError
from .topology import FG_CONNECTIVITY, connected_components

DEGENERATE_RANGE = 1e-12


class Normalization(str, Enum):
    MINMAX_UNIT = "minmax"
    NONE = "none"


@dataclass(frozen=True)
class MaskSpec:
    basis: BasisSpec
    dims: tuple[int, ...]
    seed: int
    coeff_mean: float = 0.0
    coeff_std: float = 1.0
    normalization: Normalization = Normalization.MINMAX_UNIT

    def __post_init__(self):
        object.__setattr__(self, "dims", tuple(int(d) for d in self.dims))
        if len(self.dims) != self.basis.dimensionality:
            raise InputError(
                f"dims {self.dims} do not match basis dimensionality "
                f"{self.basis.dimensionality}"
            )
        if any(d < 2 for d in self.dims):
            raise InputError(f"dims must each be >= 2, got {self.dims}")
        if not self.coeff_std > 0:
            raise InputError(f"coeff_std must be > 0, got {self.coeff_std}")
        if not -(2**63) <= self.seed < 2**64:
            raise InputError("seed must fit in 64 bits")

    def digest(self) -> str:
        """Canonical string identifying the full mask recipe, seed included."""
        b = self.basis
        return "|".join(
            [
                "mask",
                b.family.kind.value,
                b.family.hermite_variant.value,
                str(b.max_order),
                str(b.dimensionality),
                b.domain_mapping.value,
                ",".join(str(d) for d in self.dims),
                repr(float(self.coeff_mean)),
                repr(float(self.coeff_std)),
                self.normalization.value,
                str(self.seed),
            ]
        )

    def to_dict(self) -> dict:
        return {
            "basis": self.basis.to_dict(),
            "dims": list(self.dims),
            "seed": self.seed,
            "coeff_mean": self.coeff_mean,
            "coeff_std": self.coeff_std,
            "normalization": self.normalization.value,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "MaskSpec":
        return cls(
            basis=BasisSpec.from_dict(d["basis"]),
            dims=tuple(d["dims"]),
            seed=int(d["seed"]),
            coeff_mean=float(d.get("coeff_mean", 0.0)),
            coeff_std=float(d.get("coeff_std", 1.0)),
            normalization=Normalization(d.get("normalization", "minmax")),
        )


def philox_key(digest: str) -> int:
    """128-bit Philox key derived from a canonical digest string."""
    return int.from_bytes(hashlib.sha256(digest.encode()).digest()[:16], "little")


def sample_coefficients(spec: MaskSpec) -> CoefficientTensor:
    """Draw the coefficient tensor for a mask spec.

    Draws are i.i.d. Normal(coeff_mean, coeff_std^2) in lexicographic
    (i, j, k) order from a Philox stream private to this spec; repeated
    calls are bitwise identical.
    """
    rng = np.random.Generator(np.random.Philox(key=philox_key(spec.digest())))
    flat = rng.normal(spec.coeff_mean, spec.coeff_std, size=spec.basis.n_terms)
    return CoefficientTensor(
        values=flat.reshape(spec.basis.coeff_shape),
        seed=spec.seed,
        basis=spec.basis,
    )


def synthesize_mask(spec: MaskSpec) -> np.ndarray:
    """Synthesize the perturbation mask for a spec.

    With min-max normalization the output spans [0, 1] exactly.  A field
    whose range collapses below ``DEGENERATE_RANGE`` (e.g. an order-0
    basis) becomes the neutral constant 0.5 and a ``DegenerateMaskWarning``
    is emitted.
    """
    raw = eval_expansion_grid(spec.basis, sample_coefficients(spec), spec.dims)
    if spec.normalization is Normalization.NONE:
        return raw
    lo = float(raw.min())
    hi = float(raw.max())
    if hi - lo < DEGENERATE_RANGE:
        warnings.warn(
            f"mask field is constant ({lo!r}); emitting the neutral 0.5 mask",
            DegenerateMaskWarning,
            stacklevel=2,
        )
        return np.full(spec.dims[::-1], 0.5, dtype=np.float64)
    return (raw - lo) / (hi - lo)


@dataclass(frozen=True)
class MaskStatistics:
    component_count: int  # components of {mask >= threshold}, fg connectivity
    mean: float
    std: float
    saddle_proxy: int  # sign changes of the discrete gradient, all axes

    def to_dict(self) -> dict:
        return {
            "component_count": self.component_count,
            "mean": self.mean,
            "std": self.std,
            "saddle_proxy": self.saddle_proxy,
        }


def mask_statistics(mask: np.ndarray, threshold: float) -> MaskStatistics:
    """Frequency-content summary of a float mask.

    ``component_count`` is the number of connected components of the
    superlevel set {mask >= threshold} (26-connectivity; 8 in 2D) and grows
    with the oscillation of the field; ``saddle_proxy`` counts sign changes
    between consecutive finite differences along each axis.
    """
    mask = np.asarray(mask, dtype=np.float64)
    if mask.ndim not in (2, 3):
        raise InputError(f"expected a 2D or 3D mask, got ndim={mask.ndim}")
    if not 0.0 < threshold < 1.0:
        raise InputError(f"threshold must lie in (0, 1), got {threshold}")
    level_set = (mask >= threshold).astype(np.uint8)
    count, _ = connected_components(level_set, FG_CONNECTIVITY[mask.ndim])
    saddles = 0
    for axis in range(mask.ndim):
        d = np.diff(mask, axis=axis)
        s = np.sign(d)
        first = np.take(s, range(0, d.shape[axis] - 1), axis=axis)
        second = np.take(s, range(1, d.shape[axis]), axis=axis)
        saddles += int(np.count_nonzero(first * second < 0))
    return MaskStatistics(
        component_count=count,
        mean=float(mask.mean()),
        std=float(mask.std()),
        saddle_proxy=saddles,
    )
