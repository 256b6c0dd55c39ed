"""Bit-exact persistence: raw volumes with JSON sidecars, metrics CSV,
and dataset manifests.

Volume format ``topoforge-vol/1``: a raw little-endian payload at ``path``
plus a JSON sidecar at ``path + ".json"``.  The payload layout is
x-fastest: linear index ``(z * ny + y) * nx + x`` (2D: ``y * nx + x``),
which is C order for arrays indexed ``[z, y, x]``.  Element types are
float32 (IEEE-754 binary32) and uint8 only; payload length must equal
``prod(dims) * element_size`` exactly.
"""
import json
import os
import warnings

import numpy as np

from .errors import (
    FormatVersionError,
    InputError,
    PayloadLengthError,
    SidecarError,
)
from .topology import MetricsReport

VOLUME_FORMAT = "topoforge-vol/1"
MANIFEST_FORMAT = "topoforge-manifest/1"

_DTYPES = {"float32": np.dtype("<f4"), "uint8": np.dtype("u1")}


def _sidecar_path(path: str) -> str:
    return str(path) + ".json"


def _atomic_write_bytes(path: str, payload: bytes) -> None:
    tmp = f"{path}.tmp.{os.getpid()}"
    with open(tmp, "wb") as fh:
        fh.write(payload)
    os.replace(tmp, path)


def write_volume(vol: np.ndarray, path: str, provenance: dict | None = None) -> None:
    """Write a float32/uint8 volume and its sidecar; writes are atomic.

    NaNs are rejected: pipeline outputs are probabilities or labels and a
    NaN always indicates an upstream bug.
    """
    vol = np.asarray(vol)
    if vol.ndim not in (2, 3):
        raise InputError(f"expected a 2D or 3D volume, got ndim={vol.ndim}")
    if vol.dtype == np.float32:
        element_type = "float32"
        if not np.all(np.isfinite(vol)):
            raise InputError("volume contains NaN/Inf; refusing to write")
    elif vol.dtype == np.uint8:
        element_type = "uint8"
    else:
        raise InputError(
            f"volume dtype must be float32 or uint8, got {vol.dtype} "
            "(cast explicitly; the format is bit-exact)"
        )
    dims = list(vol.shape[::-1])  # stored as (nx, ny[, nz])
    meta = {
        "format": VOLUME_FORMAT,
        "dims": dims,
        "element_type": element_type,
        "layout": "x-fastest",
        "byte_order": "little",
    }
    if provenance is not None:
        meta["provenance"] = provenance
    payload = np.ascontiguousarray(vol.astype(_DTYPES[element_type], copy=False)).tobytes()
    _atomic_write_bytes(str(path), payload)
    _atomic_write_bytes(
        _sidecar_path(path),
        (json.dumps(meta, sort_keys=True, indent=2) + "\n").encode(),
    )


def volume_metadata(path: str) -> dict:
    try:
        with open(_sidecar_path(path), "r", encoding="utf-8") as fh:
            meta = json.load(fh)
    except FileNotFoundError as exc:
        raise SidecarError(f"missing sidecar for {path}") from exc
    except (OSError, json.JSONDecodeError) as exc:
        raise SidecarError(f"unreadable sidecar for {path}: {exc}") from exc
    if not isinstance(meta, dict) or meta.get("format") != VOLUME_FORMAT:
        raise FormatVersionError(
            f"unsupported volume format {meta.get('format')!r} (expected {VOLUME_FORMAT})"
        )
    dims = meta.get("dims")
    if (
        not isinstance(dims, list)
        or len(dims) not in (2, 3)
        or not all(isinstance(d, int) and d >= 1 for d in dims)
    ):
        raise SidecarError(f"invalid dims {dims!r} in sidecar for {path}")
    if meta.get("element_type") not in _DTYPES:
        raise SidecarError(f"invalid element_type {meta.get('element_type')!r} for {path}")
    return meta


def read_volume(path: str) -> np.ndarray:
    """Read a volume back, bit for bit.  NaN payloads load with a warning."""
    meta = volume_metadata(path)
    dims = meta["dims"]
    dtype = _DTYPES[meta["element_type"]]
    expected = int(np.prod(dims)) * dtype.itemsize
    with open(path, "rb") as fh:
        payload = fh.read()
    if len(payload) != expected:
        raise PayloadLengthError(
            f"{path}: payload is {len(payload)} bytes, expected {expected} "
            f"for dims {dims} ({meta['element_type']})"
        )
    vol = np.frombuffer(payload, dtype=dtype).reshape(tuple(dims[::-1]))
    if meta["element_type"] == "float32" and not np.all(np.isfinite(vol)):
        warnings.warn(f"{path}: payload contains non-finite values", stacklevel=2)
    return vol.copy()  # writable, decoupled from the buffer


CSV_HEADER = (
    "sample_id,dice,betti_err,betti0_err,betti1_err,betti2_err,"
    "b0_pred,b1_pred,b2_pred,b0_gt,b1_gt,b2_gt"
)


def _csv_row(sample_id, report: MetricsReport) -> str:
    bp, bg = report.betti_pred, report.betti_gt
    return ",".join(
        str(v)
        for v in (
            sample_id,
            format(report.dice, ".6f"),
            report.e,
            report.e0,
            report.e1,
            report.e2,
            bp.b0,
            bp.b1,
            bp.b2,
            bg.b0,
            bg.b1,
            bg.b2,
        )
    )


def metrics_csv_lines(reports: list[MetricsReport], sample_ids=None) -> list[str]:
    """CSV lines for a batch of reports plus a final mean±std summary row.

    Summary statistics use the population standard deviation across rows.
    """
    if not reports:
        raise InputError("no metrics reports to write")
    if sample_ids is None:
        sample_ids = list(range(len(reports)))
    if len(sample_ids) != len(reports):
        raise InputError("sample_ids and reports must have equal length")
    lines = [CSV_HEADER]
    for sid, report in zip(sample_ids, reports):
        lines.append(_csv_row(sid, report))
    columns = [
        [r.dice for r in reports],
        [r.e for r in reports],
        [r.e0 for r in reports],
        [r.e1 for r in reports],
        [r.e2 for r in reports],
        [r.betti_pred.b0 for r in reports],
        [r.betti_pred.b1 for r in reports],
        [r.betti_pred.b2 for r in reports],
        [r.betti_gt.b0 for r in reports],
        [r.betti_gt.b1 for r in reports],
        [r.betti_gt.b2 for r in reports],
    ]
    summary = ["summary"]
    for col in columns:
        arr = np.asarray(col, dtype=np.float64)
        summary.append(f"{arr.mean():.6g}±{arr.std():.6g}")
    lines.append(",".join(summary))
    return lines


def write_metrics_csv(reports: list[MetricsReport], path: str, sample_ids=None) -> None:
    lines = metrics_csv_lines(reports, sample_ids)
    _atomic_write_bytes(str(path), ("\n".join(lines) + "\n").encode())


def write_manifest(manifest: dict, path: str) -> None:
    if manifest.get("format") != MANIFEST_FORMAT:
        raise InputError(f"manifest must declare format {MANIFEST_FORMAT!r}")
    _atomic_write_bytes(
        str(path),
        (json.dumps(manifest, sort_keys=True, indent=2) + "\n").encode(),
    )


def read_manifest(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            manifest = json.load(fh)
    except FileNotFoundError as exc:
        raise SidecarError(f"missing manifest {path}") from exc
    except (OSError, json.JSONDecodeError) as exc:
        raise SidecarError(f"unreadable manifest {path}: {exc}") from exc
    if not isinstance(manifest, dict) or manifest.get("format") != MANIFEST_FORMAT:
        raise FormatVersionError(
            f"unsupported manifest format {manifest.get('format')!r}"
        )
    return manifest
