"""Turn a binary ground truth plus a perturbation mask into a synthetic
probability map with plausible topological errors.

The core step is element-wise multiplication M' = H * GT, which carves
smooth valleys into the foreground (splitting or opening structures once
binarized) but can never create foreground where GT has none.  Superfluous
components are therefore modeled separately: a literal multiplicative
Gaussian noise stage, plus an explicitly flagged blob-injection stage
(default off) that drops smooth bumps into the background.
"""
import hashlib
import math
from dataclasses import dataclass

import numpy as np

from .errors import InputError
from .perturbation import MaskSpec
from .topology import as_binary


@dataclass(frozen=True)
class CorruptionSpec:
    mask_spec: MaskSpec | None = None
    overseg_noise_std: float = 0.05  # sigma of the multiplicative N(1, sigma^2)
    overseg_blob_rate: float = 0.0  # Poisson mean of injected background blobs
    blob_radius_range: tuple[float, float] = (2.0, 5.0)
    binarize_threshold: float = 0.5
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(
            self, "blob_radius_range", tuple(float(r) for r in self.blob_radius_range)
        )
        if not 0.0 < self.binarize_threshold < 1.0:
            raise InputError(
                f"binarize_threshold must lie in (0, 1), got {self.binarize_threshold}"
            )
        if self.overseg_noise_std < 0:
            raise InputError("overseg_noise_std must be >= 0")
        if self.overseg_blob_rate < 0:
            raise InputError("overseg_blob_rate must be >= 0")
        r_min, r_max = self.blob_radius_range
        if not 0 < r_min <= r_max:
            raise InputError(f"invalid blob radius range {self.blob_radius_range}")

    def digest(self) -> str:
        return "|".join(
            [
                "overseg",
                repr(float(self.overseg_noise_std)),
                repr(float(self.overseg_blob_rate)),
                repr(float(self.blob_radius_range[0])),
                repr(float(self.blob_radius_range[1])),
                repr(float(self.binarize_threshold)),
                str(self.seed),
                self.mask_spec.digest() if self.mask_spec is not None else "-",
            ]
        )

    def to_dict(self) -> dict:
        return {
            "mask_spec": self.mask_spec.to_dict() if self.mask_spec is not None else None,
            "overseg_noise_std": self.overseg_noise_std,
            "overseg_blob_rate": self.overseg_blob_rate,
            "blob_radius_range": list(self.blob_radius_range),
            "binarize_threshold": self.binarize_threshold,
            "seed": self.seed,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "CorruptionSpec":
        mask_spec = d.get("mask_spec")
        return cls(
            mask_spec=MaskSpec.from_dict(mask_spec) if mask_spec else None,
            overseg_noise_std=float(d["overseg_noise_std"]),
            overseg_blob_rate=float(d["overseg_blob_rate"]),
            blob_radius_range=tuple(d["blob_radius_range"]),
            binarize_threshold=float(d["binarize_threshold"]),
            seed=int(d["seed"]),
        )


def corrupt(gt: np.ndarray, mask: np.ndarray) -> np.ndarray:
    """Element-wise product M' = mask * gt.

    ``gt`` must be binary, ``mask`` must lie in [0, 1]; the result is a
    float map in [0, 1] that is 0 wherever gt is 0.
    """
    gt = as_binary(gt)
    mask = np.asarray(mask, dtype=np.float64)
    if mask.shape != gt.shape:
        raise InputError(f"shape mismatch: gt {gt.shape} vs mask {mask.shape}")
    if mask.size and (mask.min() < 0.0 or mask.max() > 1.0):
        raise InputError("mask values must lie in [0, 1]")
    return mask * gt


def binarize(m: np.ndarray, threshold: float) -> np.ndarray:
    """Threshold a float map; ties (value == threshold) count as foreground."""
    if not 0.0 < threshold < 1.0:
        raise InputError(f"threshold must lie in (0, 1), got {threshold}")
    return (np.asarray(m, dtype=np.float64) >= threshold).astype(np.uint8)


def _blob_profile(distance: np.ndarray, radius: float, peak: float) -> np.ndarray:
    # cosine falloff: peak at the center, smoothly 0 at the radius
    profile = 0.5 * peak * (1.0 + np.cos(np.pi * np.minimum(distance, radius) / radius))
    profile[distance > radius] = 0.0
    return profile


def apply_overseg_noise(
    m: np.ndarray, spec: CorruptionSpec, gt: np.ndarray | None = None
) -> np.ndarray:
    """Over-segmentation stages on a probability map M' in [0, 1].

    Stage 1 (literal): multiply by i.i.d. N(1, sigma^2) and clamp to [0, 1].
    Stage 2 (interpretive, off while blob rate is 0): inject K ~ Poisson(rate)
    spherical bumps at uniformly drawn background positions, radius ~
    U[r_min, r_max], peak ~ U[0.6, 1.0], cosine falloff, composited by
    voxelwise max.  "Background" means gt == 0 when ``gt`` is given, else
    m == 0.  Fully deterministic under ``spec.seed``; with sigma = 0 and
    rate = 0 the input is returned unchanged.
    """
    m = np.asarray(m, dtype=np.float64)
    if m.size and (m.min() < 0.0 or m.max() > 1.0):
        raise InputError("probability map values must lie in [0, 1]")
    rng = np.random.Generator(
        np.random.Philox(key=int.from_bytes(hashlib.sha256(spec.digest().encode()).digest()[:16], "little"))
    )
    out = m
    if spec.overseg_noise_std > 0:
        gain = rng.normal(1.0, spec.overseg_noise_std, size=m.shape)
        out = np.clip(m * gain, 0.0, 1.0)
    if spec.overseg_blob_rate > 0:
        if gt is not None:
            background = as_binary(gt) == 0
        else:
            background = out == 0
        bg_flat = np.flatnonzero(background)
        if bg_flat.size:
            out = out.copy() if out is m else out
            n_blobs = int(rng.poisson(spec.overseg_blob_rate))
            r_min, r_max = spec.blob_radius_range
            for _ in range(n_blobs):
                center_flat = int(bg_flat[int(rng.integers(bg_flat.size))])
                radius = float(rng.uniform(r_min, r_max))
                peak = float(rng.uniform(0.6, 1.0))
                _inject_blob(out, center_flat, radius, peak)
    return out


def _inject_blob(out: np.ndarray, center_flat: int, radius: float, peak: float) -> None:
    center = np.unravel_index(center_flat, out.shape)
    reach = int(math.ceil(radius))
    window = tuple(
        slice(max(c - reach, 0), min(c + reach + 1, n))
        for c, n in zip(center, out.shape)
    )
    local_axes = np.meshgrid(
        *[np.arange(w.start, w.stop, dtype=np.float64) - c for w, c in zip(window, center)],
        indexing="ij",
    )
    distance = np.sqrt(sum(a * a for a in local_axes))
    out[window] = np.maximum(out[window], _blob_profile(distance, radius, peak))
