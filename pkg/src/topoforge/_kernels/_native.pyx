# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: raster-scan union-find labeling and cubical cell counts.

Same contracts as ``_pure``: labels are 1..count in first-voxel scan order,
background 0; cell counts treat a lattice cell as present iff any foreground
voxel's closed unit cube contains it.
"""
import numpy as np


cdef inline Py_ssize_t _find(Py_ssize_t* parent, Py_ssize_t a) nogil:
    cdef Py_ssize_t root = a
    cdef Py_ssize_t nxt
    while parent[root] != root:
        root = parent[root]
    while parent[a] != root:
        nxt = parent[a]
        parent[a] = root
        a = nxt
    return root


def label_components(const unsigned char[:, :, ::1] vol, int connectivity):
    """Label a 3D binary volume; returns (count, int32 labels)."""
    if connectivity != 26 and connectivity != 6:
        raise ValueError(f"connectivity must be 6 or 26, got {connectivity}")
    cdef Py_ssize_t nz = vol.shape[0], ny = vol.shape[1], nx = vol.shape[2]
    provisional_arr = np.zeros((nz, ny, nx), dtype=np.intp)
    cdef Py_ssize_t[:, :, ::1] prov = provisional_arr
    labels_arr = np.zeros((nz, ny, nx), dtype=np.int32)
    cdef int[:, :, ::1] labels = labels_arr

    # prior-half neighborhood offsets (already-scanned voxels only)
    cdef Py_ssize_t off_z[13]
    cdef Py_ssize_t off_y[13]
    cdef Py_ssize_t off_x[13]
    cdef int n_off = 0
    cdef Py_ssize_t dz, dy, dx
    if connectivity == 26:
        for dz in range(-1, 1):
            for dy in range(-1, 2):
                for dx in range(-1, 2):
                    if dz == 0 and (dy > 0 or (dy == 0 and dx >= 0)):
                        continue
                    off_z[n_off] = dz
                    off_y[n_off] = dy
                    off_x[n_off] = dx
                    n_off += 1
    else:
        off_z[0] = -1; off_y[0] = 0; off_x[0] = 0
        off_z[1] = 0;  off_y[1] = -1; off_x[1] = 0
        off_z[2] = 0;  off_y[2] = 0;  off_x[2] = -1
        n_off = 3

    cdef Py_ssize_t n_fg = np.count_nonzero(np.asarray(vol))
    if n_fg == 0:
        return 0, labels_arr
    parent_arr = np.zeros(n_fg + 1, dtype=np.intp)
    cdef Py_ssize_t[::1] parent_mv = parent_arr
    cdef Py_ssize_t* parent = &parent_mv[0]
    remap_arr = np.zeros(n_fg + 1, dtype=np.intp)
    cdef Py_ssize_t[::1] remap = remap_arr

    cdef Py_ssize_t z, y, x, zz, yy, xx, t
    cdef Py_ssize_t next_label = 0, best, r, count = 0
    with nogil:
        for z in range(nz):
            for y in range(ny):
                for x in range(nx):
                    if vol[z, y, x] == 0:
                        continue
                    best = 0
                    for t in range(n_off):
                        zz = z + off_z[t]
                        yy = y + off_y[t]
                        xx = x + off_x[t]
                        if zz < 0 or yy < 0 or xx < 0 or yy >= ny or xx >= nx:
                            continue
                        if prov[zz, yy, xx] == 0:
                            continue
                        r = _find(parent, prov[zz, yy, xx])
                        if best == 0:
                            best = r
                        elif r < best:
                            parent[best] = r
                            best = r
                        elif r > best:
                            parent[r] = best
                    if best == 0:
                        next_label += 1
                        parent[next_label] = next_label
                        best = next_label
                    prov[z, y, x] = best
        # renumber roots in first-voxel scan order
        for z in range(nz):
            for y in range(ny):
                for x in range(nx):
                    if prov[z, y, x] == 0:
                        continue
                    r = _find(parent, prov[z, y, x])
                    if remap[r] == 0:
                        count += 1
                        remap[r] = count
                    labels[z, y, x] = <int> remap[r]
    return int(count), labels_arr


def euler_cell_counts(const unsigned char[:, :, ::1] vol):
    """(V, E, F, C) of the closed-cube complex, by one sweep over the
    corner lattice.

    At corner (Z, Y, X) the surrounding 2x2x2 voxel block o[dz][dy][dx]
    (dz/dy/dx pick the voxel at Z-1+dz, ...) decides every cell incident
    to the corner on its positive side: the vertex itself, the three edges
    extending in +x/+y/+z, the three faces with minimal corner here, and
    the cube at (Z, Y, X).  Each cell is attributed to exactly one corner.
    """
    cdef Py_ssize_t nz = vol.shape[0], ny = vol.shape[1], nx = vol.shape[2]
    cdef Py_ssize_t v = 0, e = 0, f = 0, c = 0
    cdef Py_ssize_t zc, yc, xc
    cdef bint zlo, zhi, ylo, yhi, xlo, xhi
    cdef bint o000, o001, o010, o011, o100, o101, o110, o111
    with nogil:
        for zc in range(nz + 1):
            zlo = zc > 0
            zhi = zc < nz
            for yc in range(ny + 1):
                ylo = yc > 0
                yhi = yc < ny
                for xc in range(nx + 1):
                    xlo = xc > 0
                    xhi = xc < nx
                    o000 = zlo and ylo and xlo and vol[zc - 1, yc - 1, xc - 1] != 0
                    o001 = zlo and ylo and xhi and vol[zc - 1, yc - 1, xc] != 0
                    o010 = zlo and yhi and xlo and vol[zc - 1, yc, xc - 1] != 0
                    o011 = zlo and yhi and xhi and vol[zc - 1, yc, xc] != 0
                    o100 = zhi and ylo and xlo and vol[zc, yc - 1, xc - 1] != 0
                    o101 = zhi and ylo and xhi and vol[zc, yc - 1, xc] != 0
                    o110 = zhi and yhi and xlo and vol[zc, yc, xc - 1] != 0
                    o111 = zhi and yhi and xhi and vol[zc, yc, xc] != 0
                    if not (o000 or o001 or o010 or o011 or o100 or o101 or o110 or o111):
                        continue
                    v += 1
                    if o001 or o011 or o101 or o111:  # x-edge into column X
                        e += 1
                    if o010 or o011 or o110 or o111:  # y-edge into row Y
                        e += 1
                    if o100 or o101 or o110 or o111:  # z-edge into slab Z
                        e += 1
                    if o110 or o111:  # face with normal x
                        f += 1
                    if o101 or o111:  # face with normal y
                        f += 1
                    if o011 or o111:  # face with normal z
                        f += 1
                    if o111:
                        c += 1
    return int(v), int(e), int(f), int(c)
