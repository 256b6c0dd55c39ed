"""Pure numpy kernels: run-based connected-component labeling and cubical
cell counts.

Drop-in fallback for the compiled ``_native`` module.  Labeling extracts
maximal foreground runs along x (vectorized), merges runs between adjacent
rows with a two-pointer interval sweep and union-find, and renumbers roots
in first-voxel scan order, so output labels are identical to the compiled
raster-scan kernel.
"""
import numpy as np

BACKEND_NAME = "pure"


class _UnionFind:
    __slots__ = ("parent",)

    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, a: int) -> int:
        parent = self.parent
        root = a
        while parent[root] != root:
            root = parent[root]
        while parent[a] != root:
            parent[a], a = root, parent[a]
        return root

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            # keep the smaller root so components inherit their earliest run
            if ra < rb:
                self.parent[rb] = ra
            else:
                self.parent[ra] = rb


def _extract_runs(rows: np.ndarray):
    """Maximal foreground runs per row: (row_index, x_start, x_end_exclusive)."""
    n_rows, nx = rows.shape
    padded = np.zeros((n_rows, nx + 2), dtype=np.int8)
    padded[:, 1:-1] = rows
    d = np.diff(padded, axis=1)
    r_start, x_start = np.nonzero(d == 1)
    r_end, x_end = np.nonzero(d == -1)
    # np.nonzero is row-major, so runs come out in scan order and the start
    # and end lists pair up one-to-one.
    assert np.array_equal(r_start, r_end)
    return r_start, x_start, x_end


def label_components(vol: np.ndarray, connectivity: int):
    """Label a 3D binary volume; returns (count, int32 labels).

    ``connectivity`` is 26 or 6.  Labels are 1..count in first-voxel scan
    order (z slowest, x fastest); background is 0.
    """
    if connectivity not in (26, 6):
        raise ValueError(f"connectivity must be 6 or 26, got {connectivity}")
    vol = np.ascontiguousarray(vol, dtype=np.uint8)
    nz, ny, nx = vol.shape
    rows = vol.reshape(nz * ny, nx)
    r_row, r_x0, r_x1 = _extract_runs(rows)
    n_runs = r_row.size
    labels = np.zeros((nz * ny, nx), dtype=np.int32)
    if n_runs == 0:
        return 0, labels.reshape(nz, ny, nx)

    row_begin = np.searchsorted(r_row, np.arange(nz * ny), side="left")
    row_end = np.searchsorted(r_row, np.arange(nz * ny), side="right")
    uf = _UnionFind(n_runs)
    # dilate=1 makes diagonally touching intervals overlap (26-connectivity)
    dilate = 1 if connectivity == 26 else 0
    x0 = r_x0.tolist()
    x1 = r_x1.tolist()

    rows_with_runs = np.unique(r_row)
    for row in rows_with_runs.tolist():
        z, y = divmod(row, ny)
        if connectivity == 26:
            neighbours = []
            if y > 0:
                neighbours.append(row - 1)
            if z > 0:
                base = row - ny
                if y > 0:
                    neighbours.append(base - 1)
                neighbours.append(base)
                if y < ny - 1:
                    neighbours.append(base + 1)
        else:
            neighbours = []
            if y > 0:
                neighbours.append(row - 1)
            if z > 0:
                neighbours.append(row - ny)
        a_begin, a_end = row_begin[row], row_end[row]
        for prior in neighbours:
            i = a_begin
            j = row_begin[prior]
            j_end = row_end[prior]
            while i < a_end and j < j_end:
                # overlap with dilation: [x0-d, x1+d) intervals intersect
                if x0[i] < x1[j] + dilate and x0[j] < x1[i] + dilate:
                    uf.union(i, j)
                # advance the interval that ends first
                if x1[i] < x1[j]:
                    i += 1
                else:
                    j += 1

    # renumber roots by first run occurrence == first-voxel scan order
    component_of = {}
    run_component = np.empty(n_runs, dtype=np.int32)
    count = 0
    for i in range(n_runs):
        root = uf.find(i)
        comp = component_of.get(root)
        if comp is None:
            count += 1
            comp = count
            component_of[root] = comp
        run_component[i] = comp

    rr = r_row.tolist()
    rc = run_component.tolist()
    for i in range(n_runs):
        labels[rr[i], x0[i]:x1[i]] = rc[i]
    return count, labels.reshape(nz, ny, nx)


def euler_cell_counts(vol: np.ndarray):
    """(V, E, F, C) of the closed-cube complex of a 3D binary volume.

    A lattice cell is present iff any of the foreground voxels whose closed
    unit cube contains it is set; each distinct cell is counted once.
    """
    p = np.ascontiguousarray(vol, dtype=np.uint8) != 0
    p = np.pad(p, 1)
    # vertices: OR over the 2x2x2 voxel block around each lattice corner
    vert = (
        p[1:, 1:, 1:] | p[1:, 1:, :-1] | p[1:, :-1, 1:] | p[1:, :-1, :-1]
        | p[:-1, 1:, 1:] | p[:-1, 1:, :-1] | p[:-1, :-1, 1:] | p[:-1, :-1, :-1]
    )
    v = int(np.count_nonzero(vert))
    # edges: OR over the 4 voxels sharing an edge of each orientation
    ex = p[1:, 1:, :] | p[1:, :-1, :] | p[:-1, 1:, :] | p[:-1, :-1, :]
    ey = p[1:, :, 1:] | p[1:, :, :-1] | p[:-1, :, 1:] | p[:-1, :, :-1]
    ez = p[:, 1:, 1:] | p[:, 1:, :-1] | p[:, :-1, 1:] | p[:, :-1, :-1]
    e = int(np.count_nonzero(ex)) + int(np.count_nonzero(ey)) + int(np.count_nonzero(ez))
    # faces: OR over the 2 voxels sharing a face of each orientation
    fx = p[:, :, 1:] | p[:, :, :-1]
    fy = p[:, 1:, :] | p[:, :-1, :]
    fz = p[1:, :, :] | p[:-1, :, :]
    f = int(np.count_nonzero(fx)) + int(np.count_nonzero(fy)) + int(np.count_nonzero(fz))
    c = int(np.count_nonzero(p))
    return v, e, f, c
