"""Betti numbers, Betti errors, and Dice overlap for binary 2D/3D volumes.

Conventions are fixed package-wide: foreground uses 26-connectivity (8 in
2D), background the complementary 6-connectivity (4 in 2D), and the Euler
characteristic is that of the complex of closed unit cubes of foreground
voxels.  Under this pairing

    b0 = foreground components,
    b2 = bounded background components (cavities, 3D),
    b1 = b0 + b2 - chi,

so no homology solver is needed.  Every report carries the convention used.
"""
from dataclasses import asdict, dataclass

import numpy as np

from . import _kernels
from .errors import InputError, InternalInconsistencyError

FG_CONNECTIVITY = {3: 26, 2: 8}
BG_CONNECTIVITY = {3: 6, 2: 4}


@dataclass(frozen=True)
class BettiNumbers:
    b0: int
    b1: int
    b2: int
    fg_connectivity: str  # "C26" / "C8"
    bg_connectivity: str  # "C6" / "C4"

    def as_tuple(self) -> tuple[int, int, int]:
        return (self.b0, self.b1, self.b2)

    @property
    def euler(self) -> int:
        return self.b0 - self.b1 + self.b2

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class MetricsReport:
    dice: float
    e0: int
    e1: int
    e2: int
    e: int  # e0 + e1; e2 is reported separately, not folded in
    betti_pred: BettiNumbers
    betti_gt: BettiNumbers

    def to_dict(self) -> dict:
        return {
            "dice": self.dice,
            "e0": self.e0,
            "e1": self.e1,
            "e2": self.e2,
            "e": self.e,
            "betti_pred": self.betti_pred.to_dict(),
            "betti_gt": self.betti_gt.to_dict(),
        }


def as_binary(vol: np.ndarray) -> np.ndarray:
    """Validate a binary volume and return it as uint8 with values {0, 1}."""
    vol = np.asarray(vol)
    if vol.ndim not in (2, 3):
        raise InputError(f"expected a 2D or 3D volume, got ndim={vol.ndim}")
    if vol.dtype == np.bool_:
        return vol.astype(np.uint8)
    out = vol.astype(np.uint8, casting="unsafe")
    if not np.array_equal(out, vol):
        raise InputError("volume is not binary (values must be 0 or 1)")
    if np.any(out > 1):
        raise InputError("volume is not binary (values must be 0 or 1)")
    return out


def _lift(vol: np.ndarray) -> np.ndarray:
    """2D arrays become single-slab 3D so one kernel serves both ranks."""
    return vol[None, :, :] if vol.ndim == 2 else vol


def connected_components(vol: np.ndarray, connectivity: int | None = None):
    """Label connected components; returns (count, int32 label volume).

    Labels are 1..count in first-voxel scan order (x fastest), background 0.
    Valid connectivities: 26/6 for 3D volumes, 8/4 for 2D.  Defaults to the
    foreground convention (26 or 8).
    """
    vol = as_binary(vol)
    if connectivity is None:
        connectivity = FG_CONNECTIVITY[vol.ndim]
    if vol.ndim == 2:
        if connectivity not in (8, 4):
            raise InputError(f"2D connectivity must be 4 or 8, got {connectivity}")
        # a one-slab 3D volume under 26/6 reduces exactly to 8/4 in-plane
        count, labels = _kernels.label_components(
            np.ascontiguousarray(_lift(vol)), 26 if connectivity == 8 else 6
        )
        return count, labels[0]
    if connectivity not in (26, 6):
        raise InputError(f"3D connectivity must be 6 or 26, got {connectivity}")
    return _kernels.label_components(np.ascontiguousarray(vol), connectivity)


def cell_counts(vol: np.ndarray) -> tuple[int, int, int, int]:
    """(V, E, F, C): vertices, edges, faces, cubes of the closed-cube complex."""
    vol = as_binary(vol)
    if vol.ndim != 3:
        raise InputError("cell_counts expects a 3D volume")
    return _kernels.euler_cell_counts(np.ascontiguousarray(vol))


def euler_characteristic(vol: np.ndarray) -> int:
    """Euler characteristic chi = V - E + F - C of the closed-cube complex.

    For 2D input the volume is lifted to a one-voxel-thick slab; the slab
    deformation-retracts onto the planar square complex, so the value equals
    the 2D chi = V - E + F.
    """
    vol = as_binary(vol)
    v, e, f, c = _kernels.euler_cell_counts(np.ascontiguousarray(_lift(vol)))
    return v - e + f - c


def _bounded_background_components(vol: np.ndarray, pad_axes: tuple[int, ...]) -> int:
    """Background components (complementary connectivity) not touching the
    border, after padding the given axes by one background voxel."""
    pad = [(1, 1) if ax in pad_axes else (0, 0) for ax in range(vol.ndim)]
    padded = np.pad(vol, pad)
    complement = np.ascontiguousarray(1 - _lift(padded))
    count, _ = _kernels.label_components(complement, 6)
    # the padding shell is one connected background component: the outside
    return count - 1


def betti(vol: np.ndarray) -> BettiNumbers:
    """Betti numbers of a binary volume under the package conventions."""
    vol = as_binary(vol)
    ndim = vol.ndim
    chi = euler_characteristic(vol)
    count_fg, _ = connected_components(vol, FG_CONNECTIVITY[ndim])
    if ndim == 3:
        b0 = count_fg
        b2 = _bounded_background_components(vol, (0, 1, 2))
        b1 = b0 + b2 - chi
        if b1 < 0:
            raise InternalInconsistencyError(
                f"negative b1 = {b1} (b0={b0}, b2={b2}, chi={chi}); "
                "connectivity/Euler conventions disagree"
            )
        return BettiNumbers(b0, b1, b2, "C26", "C6")
    b0 = count_fg
    b1 = _bounded_background_components(vol, (0, 1))
    if b0 - b1 != chi:
        raise InternalInconsistencyError(
            f"2D Euler identity violated: b0={b0}, b1={b1}, chi={chi}"
        )
    return BettiNumbers(b0, b1, 0, "C8", "C4")


def dice(pred: np.ndarray, gt: np.ndarray) -> float:
    """Dice overlap 2|P∩G| / (|P|+|G|); 1.0 when both volumes are empty."""
    pred = as_binary(pred)
    gt = as_binary(gt)
    if pred.shape != gt.shape:
        raise InputError(f"shape mismatch: {pred.shape} vs {gt.shape}")
    p = int(np.count_nonzero(pred))
    g = int(np.count_nonzero(gt))
    if p + g == 0:
        return 1.0
    overlap = int(np.count_nonzero(pred & gt))
    return 2.0 * overlap / (p + g)


def betti_error(pred: np.ndarray, gt: np.ndarray) -> MetricsReport:
    """Full metrics report for a prediction/ground-truth pair.

    Betti errors are per-dimension absolute differences; the combined error
    ``e`` is ``e0 + e1`` with ``e2`` reported separately.
    """
    pred = as_binary(pred)
    gt = as_binary(gt)
    if pred.shape != gt.shape:
        raise InputError(f"shape mismatch: {pred.shape} vs {gt.shape}")
    bp = betti(pred)
    bg = betti(gt)
    e0 = abs(bp.b0 - bg.b0)
    e1 = abs(bp.b1 - bg.b1)
    e2 = abs(bp.b2 - bg.b2)
    return MetricsReport(
        dice=dice(pred, gt),
        e0=e0,
        e1=e1,
        e2=e2,
        e=e0 + e1,
        betti_pred=bp,
        betti_gt=bg,
    )
