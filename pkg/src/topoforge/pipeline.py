"""Sample pipeline: ground truth -> mask -> corrupted probability map,
dataset emission with a reproducible manifest, and the ablation sweep.

Every sample is a pure function of (global seed, sample index, recipe), so
dataset generation is independent of worker count and scheduling, and a
manifest alone is enough to regenerate every payload bit for bit.
"""
import hashlib
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import io as tfio
from .basis import BasisSpec, DomainMapping
from .corruption import CorruptionSpec, apply_overseg_noise, binarize, corrupt
from .errors import InputError
from .perturbation import MaskSpec, Normalization, mask_statistics, synthesize_mask
from .phantom import PhantomSpec, generate
from .polynomial import PolynomialFamily
from .topology import MetricsReport, betti_error

TOOLKIT_VERSION = "0.1.0"


def derive_sample_seed(global_seed: int, index: int) -> int:
    """Per-sample seed; stable mix so worker scheduling cannot matter."""
    digest = hashlib.sha256(f"sample|{global_seed}|{index}".encode()).digest()
    return int.from_bytes(digest[:8], "little") >> 1  # non-negative 63-bit


@dataclass(frozen=True)
class SampleArrays:
    gt: np.ndarray  # uint8
    mask: np.ndarray  # float32
    corrupted: np.ndarray  # float32
    report: MetricsReport


def synthesize_sample(
    mask_spec: MaskSpec,
    corruption_spec: CorruptionSpec,
    phantom_spec: PhantomSpec | None = None,
    gt: np.ndarray | None = None,
) -> SampleArrays:
    """Build one sample's arrays; the single source of truth shared by
    dataset generation and manifest verification."""
    if (phantom_spec is None) == (gt is None):
        raise InputError("provide exactly one of phantom_spec or gt")
    if phantom_spec is not None:
        gt, _ = generate(phantom_spec)
    mask = synthesize_mask(mask_spec)
    corrupted = apply_overseg_noise(corrupt(gt, mask), corruption_spec, gt=gt)
    pred = binarize(corrupted, corruption_spec.binarize_threshold)
    report = betti_error(pred, gt)
    return SampleArrays(
        gt=gt,
        mask=mask.astype(np.float32),
        corrupted=corrupted.astype(np.float32),
        report=report,
    )


def make_sample_entry(
    index: int,
    global_seed: int,
    basis: BasisSpec,
    dims: tuple[int, ...],
    corruption_defaults: CorruptionSpec,
    phantom_spec: PhantomSpec | None,
    gt_source: str | None,
) -> dict:
    """Manifest entry skeleton for one sample (specs only, no payloads)."""
    seed = derive_sample_seed(global_seed, index)
    mask_spec = MaskSpec(basis=basis, dims=tuple(dims), seed=seed)
    corruption_spec = CorruptionSpec(
        mask_spec=mask_spec,
        overseg_noise_std=corruption_defaults.overseg_noise_std,
        overseg_blob_rate=corruption_defaults.overseg_blob_rate,
        blob_radius_range=corruption_defaults.blob_radius_range,
        binarize_threshold=corruption_defaults.binarize_threshold,
        seed=seed,
    )
    prefix = f"sample_{index:05d}"
    entry = {
        "index": index,
        "seed": seed,
        "gt": f"{prefix}_gt.vol",
        "mask": f"{prefix}_mask.vol",
        "corrupted": f"{prefix}_corrupted.vol",
        "mask_spec": mask_spec.to_dict(),
        "corruption_spec": corruption_spec.to_dict(),
    }
    if phantom_spec is not None:
        entry["phantom_spec"] = PhantomSpec(
            kind=phantom_spec.kind,
            dims=phantom_spec.dims,
            radius=phantom_spec.radius,
            thickness=phantom_spec.thickness,
            loops=phantom_spec.loops,
            seed=seed,
        ).to_dict()
    else:
        entry["gt_source"] = gt_source
    return entry


def _entry_arrays(entry: dict, base_dir: str) -> SampleArrays:
    mask_spec = MaskSpec.from_dict(entry["mask_spec"])
    corruption_spec = CorruptionSpec.from_dict(entry["corruption_spec"])
    if "phantom_spec" in entry:
        return synthesize_sample(
            mask_spec, corruption_spec, phantom_spec=PhantomSpec.from_dict(entry["phantom_spec"])
        )
    gt_path = entry["gt_source"]
    if not os.path.isabs(gt_path):
        gt_path = os.path.join(base_dir, gt_path)
    gt = tfio.read_volume(gt_path)
    if gt.dtype != np.uint8:
        raise InputError(f"ground truth {gt_path} must be a uint8 volume")
    return synthesize_sample(mask_spec, corruption_spec, gt=gt)


def _emit_sample(args) -> dict:
    out_dir, entry = args
    arrays = _entry_arrays(entry, out_dir)
    tfio.write_volume(arrays.gt, os.path.join(out_dir, entry["gt"]), provenance={"role": "gt"})
    tfio.write_volume(
        arrays.mask,
        os.path.join(out_dir, entry["mask"]),
        provenance={"role": "mask", "mask_spec": entry["mask_spec"]},
    )
    tfio.write_volume(
        arrays.corrupted,
        os.path.join(out_dir, entry["corrupted"]),
        provenance={"role": "corrupted", "corruption_spec": entry["corruption_spec"]},
    )
    entry = dict(entry)
    entry["metrics"] = arrays.report.to_dict()
    return entry


def generate_dataset(
    out_dir: str,
    count: int,
    basis: BasisSpec,
    dims: tuple[int, ...],
    corruption_defaults: CorruptionSpec,
    global_seed: int,
    phantom_spec: PhantomSpec | None = None,
    gt_sources: list[str] | None = None,
    threads: int = 1,
) -> str:
    """Emit ``count`` samples plus ``manifest.json``; returns the manifest path.

    With a phantom recipe each sample gets a jittered variant; with a list
    of ground-truth volume paths the sources are cycled.  Samples are
    distributed over a process pool when ``threads > 1``; outputs are
    byte-identical for any worker count.
    """
    if count < 1:
        raise InputError(f"count must be >= 1, got {count}")
    if (phantom_spec is None) == (gt_sources is None):
        raise InputError("provide exactly one of phantom_spec or gt_sources")
    if gt_sources is not None and not gt_sources:
        raise InputError("gt_sources is empty")
    os.makedirs(out_dir, exist_ok=True)
    entries = [
        make_sample_entry(
            index=i,
            global_seed=global_seed,
            basis=basis,
            dims=dims,
            corruption_defaults=corruption_defaults,
            phantom_spec=phantom_spec,
            gt_source=None if gt_sources is None else gt_sources[i % len(gt_sources)],
        )
        for i in range(count)
    ]
    jobs = [(out_dir, entry) for entry in entries]
    if threads > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            done = list(pool.map(_emit_sample, jobs, chunksize=8))
    else:
        done = [_emit_sample(job) for job in jobs]
    done.sort(key=lambda e: e["index"])
    manifest = {
        "format": tfio.MANIFEST_FORMAT,
        "toolkit_version": TOOLKIT_VERSION,
        "global_seed": global_seed,
        "count": count,
        "samples": done,
    }
    manifest_path = os.path.join(out_dir, "manifest.json")
    tfio.write_manifest(manifest, manifest_path)
    return manifest_path


def verify_manifest(manifest_path: str) -> list[str]:
    """Regenerate every sample from its manifest entry and compare payloads
    bit for bit.  Returns a list of mismatch descriptions (empty = clean)."""
    manifest = tfio.read_manifest(manifest_path)
    base_dir = os.path.dirname(os.path.abspath(manifest_path))
    problems = []
    for entry in manifest.get("samples", []):
        index = entry.get("index")
        try:
            arrays = _entry_arrays(entry, base_dir)
        except Exception as exc:  # noqa: BLE001 - report, keep verifying
            problems.append(f"sample {index}: regeneration failed: {exc}")
            continue
        for role, regenerated in (
            ("gt", arrays.gt),
            ("mask", arrays.mask),
            ("corrupted", arrays.corrupted),
        ):
            path = os.path.join(base_dir, entry[role])
            try:
                stored = tfio.read_volume(path)
            except Exception as exc:  # noqa: BLE001
                problems.append(f"sample {index}: {role}: unreadable: {exc}")
                continue
            if stored.shape != regenerated.shape or stored.dtype != regenerated.dtype:
                problems.append(f"sample {index}: {role}: shape/dtype mismatch")
            elif stored.tobytes() != regenerated.tobytes():
                problems.append(f"sample {index}: {role}: payload differs")
        if entry.get("metrics") != arrays.report.to_dict():
            problems.append(f"sample {index}: metrics snapshot differs")
    return problems


ABLATION_HEADER = (
    "family,order,seeds,mean_e,mean_e0,mean_e1,mean_dice,"
    "mean_mask_components,mean_mask_saddles,mean_mask_mean,mean_mask_std"
)


def ablation_rows(
    families: list[PolynomialFamily],
    orders: list[int],
    n_seeds: int,
    phantom_spec: PhantomSpec,
    dims: tuple[int, int, int],
    threshold: float = 0.5,
) -> list[dict]:
    """Per-(family, order) means of Betti errors and mask statistics.

    The ground truth is the unjittered phantom; masks use seeds
    0..n_seeds-1 in every cell so the comparison is paired across cells.
    No over-segmentation noise is applied: the sweep isolates what the
    masks themselves do to topology.
    """
    if n_seeds < 1:
        raise InputError("n_seeds must be >= 1")
    gt, _ = generate(phantom_spec)
    if gt.shape != dims[::-1]:
        raise InputError(
            f"phantom dims {phantom_spec.dims} do not match mask dims {tuple(dims)}"
        )
    rows = []
    for family in families:
        for order in orders:
            e_all, e0_all, e1_all, dice_all = [], [], [], []
            comp_all, saddle_all, mean_all, std_all = [], [], [], []
            for seed in range(n_seeds):
                mask_spec = MaskSpec(
                    basis=BasisSpec(family, order, 3, DomainMapping.SYMMETRIC_UNIT),
                    dims=tuple(dims),
                    seed=seed,
                    normalization=Normalization.MINMAX_UNIT,
                )
                mask = synthesize_mask(mask_spec)
                stats = mask_statistics(mask, threshold)
                pred = binarize(corrupt(gt, mask), threshold)
                report = betti_error(pred, gt)
                e_all.append(report.e)
                e0_all.append(report.e0)
                e1_all.append(report.e1)
                dice_all.append(report.dice)
                comp_all.append(stats.component_count)
                saddle_all.append(stats.saddle_proxy)
                mean_all.append(stats.mean)
                std_all.append(stats.std)
            rows.append(
                {
                    "family": family.label(),
                    "order": order,
                    "seeds": n_seeds,
                    "mean_e": float(np.mean(e_all)),
                    "mean_e0": float(np.mean(e0_all)),
                    "mean_e1": float(np.mean(e1_all)),
                    "mean_dice": float(np.mean(dice_all)),
                    "mean_mask_components": float(np.mean(comp_all)),
                    "mean_mask_saddles": float(np.mean(saddle_all)),
                    "mean_mask_mean": float(np.mean(mean_all)),
                    "mean_mask_std": float(np.mean(std_all)),
                }
            )
    return rows


def ablation_csv_lines(rows: list[dict]) -> list[str]:
    lines = [ABLATION_HEADER]
    for r in rows:
        lines.append(
            f"{r['family']},{r['order']},{r['seeds']},{r['mean_e']:.4f},"
            f"{r['mean_e0']:.4f},{r['mean_e1']:.4f},{r['mean_dice']:.6f},"
            f"{r['mean_mask_components']:.4f},{r['mean_mask_saddles']:.1f},"
            f"{r['mean_mask_mean']:.6f},{r['mean_mask_std']:.6f}"
        )
    return lines
