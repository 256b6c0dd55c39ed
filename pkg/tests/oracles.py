"""Brute-force oracles, deliberately independent of the library kernels."""
from collections import deque

import numpy as np

_OFFSETS_26 = [
    (dz, dy, dx)
    for dz in (-1, 0, 1)
    for dy in (-1, 0, 1)
    for dx in (-1, 0, 1)
    if (dz, dy, dx) != (0, 0, 0)
]
_OFFSETS_6 = [(dz, dy, dx) for (dz, dy, dx) in _OFFSETS_26 if abs(dz) + abs(dy) + abs(dx) == 1]


def bfs_components(vol: np.ndarray, connectivity: int):
    """Flood-fill labeling with an explicit queue; labels in scan order."""
    vol = np.asarray(vol)
    if vol.ndim == 2:
        vol = vol[None]
        conn = {8: 26, 4: 6}[connectivity]
    else:
        conn = connectivity
    offsets = _OFFSETS_26 if conn == 26 else _OFFSETS_6
    nz, ny, nx = vol.shape
    labels = np.zeros(vol.shape, dtype=np.int32)
    count = 0
    for z in range(nz):
        for y in range(ny):
            for x in range(nx):
                if not vol[z, y, x] or labels[z, y, x]:
                    continue
                count += 1
                queue = deque([(z, y, x)])
                labels[z, y, x] = count
                while queue:
                    cz, cy, cx = queue.popleft()
                    for dz, dy, dx in offsets:
                        qz, qy, qx = cz + dz, cy + dy, cx + dx
                        if (
                            0 <= qz < nz
                            and 0 <= qy < ny
                            and 0 <= qx < nx
                            and vol[qz, qy, qx]
                            and not labels[qz, qy, qx]
                        ):
                            labels[qz, qy, qx] = count
                            queue.append((qz, qy, qx))
    return count, labels


def cell_sets(vol: np.ndarray):
    """(V, E, F, C) by explicit set enumeration of the closed-cube complex."""
    vol = np.asarray(vol)
    vertices, edges, faces = set(), set(), set()
    cubes = 0
    for z, y, x in zip(*np.nonzero(vol)):
        z, y, x = int(z), int(y), int(x)
        cubes += 1
        corners = [
            (z + dz, y + dy, x + dx)
            for dz in (0, 1)
            for dy in (0, 1)
            for dx in (0, 1)
        ]
        vertices.update(corners)
        for a in corners:
            for b in corners:
                if a < b:
                    diff = sum(abs(a[i] - b[i]) for i in range(3))
                    if diff == 1:
                        edges.add((a, b))
        for axis in range(3):
            for side in (0, 1):
                quad = tuple(sorted(c for c in corners if c[axis] == (z, y, x)[axis] + side))
                faces.add(quad)
    return len(vertices), len(edges), len(faces), cubes


def legendre_rodrigues(n: int, x):
    """P_n via n-fold differentiation of (x^2 - 1)^n in coefficient space."""
    import math

    poly = np.polynomial.Polynomial([-1.0, 0.0, 1.0]) ** n
    for _ in range(n):
        poly = poly.deriv()
    return poly(np.asarray(x, dtype=np.float64)) / (2.0**n * math.factorial(n))
