"""Synthetic binary ground-truth volumes with analytically known topology.

All phantoms are voxelized by thresholding signed distances of analytic
primitives on the integer lattice.  Structure thickness is kept >= 2 voxels
so the complementary connectivity conventions cannot leak through holes,
and every generated volume carries its declared Betti numbers.  A seed
produces a mildly jittered variant (shifted center, scaled radius) whose
topology is unchanged.
"""
import hashlib
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import GeometryError, InputError
from .topology import BettiNumbers


# jitter offsets are drawn from [-2, 2]; jittered phantoms reserve this much
# extra frame so the offsets cannot push geometry out of bounds
_JITTER_SLACK = 2.0


class PhantomKind(str, Enum):
    BOX = "box"
    TUBE = "tube"
    RING = "ring"
    SHELL = "shell"
    Y_JUNCTION = "yjunction"
    LOOP_GRID = "loopgrid"


@dataclass(frozen=True)
class PhantomSpec:
    kind: PhantomKind
    dims: tuple[int, int, int] = (32, 32, 32)  # (nx, ny, nz)
    radius: float | None = None
    thickness: float | None = None
    loops: int = 4
    seed: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "dims", tuple(int(d) for d in self.dims))
        if len(self.dims) != 3 or any(d < 4 for d in self.dims):
            raise InputError(f"phantom dims must be 3 axes of >= 4 voxels, got {self.dims}")
        if self.loops < 1:
            raise InputError(f"loops must be >= 1, got {self.loops}")

    def to_dict(self) -> dict:
        return {
            "kind": self.kind.value,
            "dims": list(self.dims),
            "radius": self.radius,
            "thickness": self.thickness,
            "loops": self.loops,
            "seed": self.seed,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "PhantomSpec":
        return cls(
            kind=PhantomKind(d["kind"]),
            dims=tuple(d["dims"]),
            radius=d.get("radius"),
            thickness=d.get("thickness"),
            loops=int(d.get("loops", 4)),
            seed=d.get("seed"),
        )


def _grids(dims):
    nx, ny, nz = dims
    z = np.arange(nz, dtype=np.float64)[:, None, None]
    y = np.arange(ny, dtype=np.float64)[None, :, None]
    x = np.arange(nx, dtype=np.float64)[None, None, :]
    return x, y, z


def _segment_distance(x, y, z, p0, p1):
    """Distance from every voxel to the segment p0-p1 (points are (x, y, z))."""
    vx, vy, vz = (p1[i] - p0[i] for i in range(3))
    length_sq = vx * vx + vy * vy + vz * vz
    if length_sq == 0:
        dx, dy, dz = x - p0[0], y - p0[1], z - p0[2]
        return np.sqrt(dx * dx + dy * dy + dz * dz)
    t = ((x - p0[0]) * vx + (y - p0[1]) * vy + (z - p0[2]) * vz) / length_sq
    t = np.clip(t, 0.0, 1.0)
    dx = x - (p0[0] + t * vx)
    dy = y - (p0[1] + t * vy)
    dz = z - (p0[2] + t * vz)
    return np.sqrt(dx * dx + dy * dy + dz * dz)


def _tube_union(dims, segments, radius):
    x, y, z = _grids(dims)
    fg = np.zeros(dims[::-1], dtype=bool)
    for p0, p1 in segments:
        fg |= _segment_distance(x, y, z, p0, p1) <= radius
    return fg.astype(np.uint8)


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise GeometryError(message)


def _jitter(spec: PhantomSpec):
    """Deterministic (center offset, radius scale) for jittered variants."""
    if spec.seed is None:
        return (0.0, 0.0, 0.0), 1.0
    digest = f"phantom|{spec.kind.value}|{','.join(map(str, spec.dims))}|{spec.seed}"
    key = int.from_bytes(hashlib.sha256(digest.encode()).digest()[:16], "little")
    rng = np.random.Generator(np.random.Philox(key=key))
    offset = tuple(float(v) for v in rng.integers(-2, 3, size=3))
    scale = float(rng.uniform(0.9, 1.1))
    return offset, scale


def generate(spec: PhantomSpec) -> tuple[np.ndarray, BettiNumbers]:
    """Voxelize a phantom; returns (uint8 volume [z, y, x], declared Betti)."""
    nx, ny, nz = spec.dims
    (ox, oy, oz), scale = _jitter(spec)
    cx, cy, cz = (nx - 1) / 2 + ox, (ny - 1) / 2 + oy, (nz - 1) / 2 + oz
    declared = (1, 0, 0)

    if spec.kind is PhantomKind.BOX:
        margin = spec.thickness if spec.thickness is not None else max(2, min(spec.dims) // 5)
        _require(all(n - 1 - 2 * margin >= 1 for n in spec.dims), "box margin leaves no interior")
        x, y, z = _grids(spec.dims)
        vol = (
            (x >= margin) & (x <= nx - 1 - margin)
            & (y >= margin) & (y <= ny - 1 - margin)
            & (z >= margin) & (z <= nz - 1 - margin)
        ).astype(np.uint8)

    elif spec.kind is PhantomKind.TUBE:
        r = (spec.radius if spec.radius is not None else max(2.0, min(ny, nz) / 6)) * scale
        _require(r >= 1.0, "tube radius must be >= 1 voxel")
        margin = 2.0
        for c, n in ((cy, ny), (cz, nz)):
            _require(c - r >= 1 and c + r <= n - 2, "tube does not fit radially")
        x, y, z = _grids(spec.dims)
        vol = (
            (x >= margin) & (x <= nx - 1 - margin)
            & ((y - cy) ** 2 + (z - cz) ** 2 <= r * r)
        ).astype(np.uint8)

    elif spec.kind is PhantomKind.RING:
        major = (spec.radius if spec.radius is not None else min(nx, ny) / 4) * scale
        thickness = spec.thickness if spec.thickness is not None else 3.0
        _require(thickness >= 2.0, "ring thickness must be >= 2 voxels")
        minor = thickness / 2
        _require(major - minor >= 2.0, "ring hole would close")
        for c, n in ((cx, nx), (cy, ny)):
            _require(c - major - minor >= 1 and c + major + minor <= n - 2, "ring does not fit")
        _require(cz - minor >= 1 and cz + minor <= nz - 2, "ring does not fit in z")
        x, y, z = _grids(spec.dims)
        circle_distance = np.sqrt((x - cx) ** 2 + (y - cy) ** 2) - major
        vol = (circle_distance**2 + (z - cz) ** 2 <= minor * minor).astype(np.uint8)
        declared = (1, 1, 0)

    elif spec.kind is PhantomKind.SHELL:
        outer = (spec.radius if spec.radius is not None else min(spec.dims) / 3) * scale
        thickness = spec.thickness if spec.thickness is not None else 2.5
        _require(thickness >= 2.0, "shell thickness must be >= 2 voxels")
        _require(outer - thickness >= 2.0, "shell cavity would vanish")
        for c, n in ((cx, nx), (cy, ny), (cz, nz)):
            _require(c - outer >= 1 and c + outer <= n - 2, "shell does not fit")
        x, y, z = _grids(spec.dims)
        d = np.sqrt((x - cx) ** 2 + (y - cy) ** 2 + (z - cz) ** 2)
        vol = ((d >= outer - thickness) & (d <= outer)).astype(np.uint8)
        declared = (1, 0, 1)

    elif spec.kind is PhantomKind.Y_JUNCTION:
        r = (spec.radius if spec.radius is not None else max(1.5, min(ny, nz) / 12)) * scale
        _require(r >= 1.0, "junction radius must be >= 1 voxel")
        # the frame reserves 2 voxels of slack so jitter offsets stay in bounds
        margin = r + 1.5 + _JITTER_SLACK
        x_lo, x_hi = margin + ox, nx - 1 - margin + ox
        spread = (ny - 1) / 2 - margin
        _require(spread >= r + 2, "arms would overlap")
        _require(x_lo - r >= 1 and x_hi + r <= nx - 2, "junction does not fit in x")
        _require(cy - spread - r >= 1 and cy + spread + r <= ny - 2, "junction does not fit in y")
        _require(cz - r >= 1 and cz + r <= nz - 2, "junction does not fit in z")
        center = (cx, cy, cz)
        segments = [
            ((x_lo, cy, cz), center),
            (center, (x_hi, cy + spread, cz)),
            (center, (x_hi, cy - spread, cz)),
        ]
        vol = _tube_union(spec.dims, segments, r)

    elif spec.kind is PhantomKind.LOOP_GRID:
        r = (spec.radius if spec.radius is not None else 2.0) * scale
        _require(r >= 1.0, "loop grid radius must be >= 1 voxel")
        margin = r + 1.5 + _JITTER_SLACK
        y_low, y_high = margin + oy, ny - 1 - margin + oy
        xs = np.linspace(margin + ox, nx - 1 - margin + ox, spec.loops + 1)
        _require(xs[0] - r >= 1 and xs[-1] + r <= nx - 2, "loop grid does not fit in x")
        _require(y_low - r >= 1 and y_high + r <= ny - 2, "loop grid does not fit in y")
        _require(cz - r >= 1 and cz + r <= nz - 2, "loop grid does not fit in z")
        spacing = (xs[-1] - xs[0]) / spec.loops
        _require(spacing >= 2 * r + 3, "loops would close; enlarge dims or reduce loops")
        _require(y_high - y_low >= 2 * r + 3, "loops would close vertically")
        segments = [
            ((xs[0], y_low, cz), (xs[-1], y_low, cz)),
            ((xs[0], y_high, cz), (xs[-1], y_high, cz)),
        ]
        segments += [((xi, y_low, cz), (xi, y_high, cz)) for xi in xs]
        vol = _tube_union(spec.dims, segments, r)
        declared = (1, spec.loops, 0)

    else:  # pragma: no cover - enum is closed
        raise InputError(f"unknown phantom kind {spec.kind!r}")

    b0, b1, b2 = declared
    return vol, BettiNumbers(b0, b1, b2, "C26", "C6")


@dataclass(frozen=True)
class PhantomInfo:
    kind: PhantomKind
    betti: tuple[int, int, int] | str
    params: tuple[str, ...]
    defaults: dict

    def to_dict(self) -> dict:
        return {
            "kind": self.kind.value,
            "betti": self.betti,
            "params": list(self.params),
            "defaults": dict(self.defaults),
        }


def list_phantoms() -> list[PhantomInfo]:
    """Catalog of phantom kinds, their parameters, and working defaults."""
    return [
        PhantomInfo(PhantomKind.BOX, (1, 0, 0), ("dims", "thickness"), {"dims": (32, 32, 32)}),
        PhantomInfo(PhantomKind.TUBE, (1, 0, 0), ("dims", "radius"), {"dims": (32, 32, 32)}),
        PhantomInfo(
            PhantomKind.RING, (1, 1, 0), ("dims", "radius", "thickness"),
            {"dims": (32, 32, 32), "thickness": 3.0},
        ),
        PhantomInfo(
            PhantomKind.SHELL, (1, 0, 1), ("dims", "radius", "thickness"),
            {"dims": (32, 32, 32), "thickness": 2.5},
        ),
        PhantomInfo(PhantomKind.Y_JUNCTION, (1, 0, 0), ("dims", "radius"), {"dims": (32, 32, 32)}),
        PhantomInfo(
            PhantomKind.LOOP_GRID, "(1, loops, 0)", ("dims", "radius", "loops"),
            {"dims": (48, 48, 48), "loops": 4},
        ),
    ]
