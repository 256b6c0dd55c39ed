"""Command-line surface.

Conventions: data and reports go to standard output, progress and the
effective configuration go to standard error.  Every subcommand is a pure
function of (flags, input files, seed): identical invocations produce
identical bytes.  Exit codes: 0 success, 1 validation failure, 2 I/O
failure, 3 internal inconsistency.
"""
import argparse
import json
import sys

import numpy as np

from . import io as tfio
from . import pipeline
from .basis import BasisSpec, DomainMapping
from .corruption import CorruptionSpec, apply_overseg_noise, binarize, corrupt
from .errors import InputError, TopoforgeError
from .perturbation import MaskSpec, Normalization, synthesize_mask
from .phantom import PhantomKind, PhantomSpec, generate, list_phantoms
from .polynomial import (
    Family,
    HermiteVariant,
    PolynomialFamily,
    orthogonality_report,
)
from .topology import betti, betti_error, euler_characteristic

_FAMILY_CHOICES = ("legendre", "chebyshev", "hermite")


def _parse_dims(text) -> tuple[int, ...]:
    try:
        if isinstance(text, (list, tuple)):
            dims = tuple(int(part) for part in text)
        else:
            dims = tuple(int(part) for part in str(text).split(","))
    except (TypeError, ValueError) as exc:
        raise InputError(f"bad dims {text!r}: expected comma-separated integers") from exc
    if len(dims) not in (2, 3):
        raise InputError(f"dims must have 2 or 3 axes, got {text!r}")
    return dims


def _parse_radius_range(text: str) -> tuple[float, float]:
    try:
        lo, hi = (float(part) for part in text.split(","))
    except ValueError as exc:
        raise InputError(f"bad radius range {text!r}: expected MIN,MAX") from exc
    return lo, hi


def _family(args) -> PolynomialFamily:
    return PolynomialFamily(Family(args.family), HermiteVariant(args.hermite_variant))


def _mask_spec(args, seed: int) -> MaskSpec:
    dims = _parse_dims(args.dims)
    return MaskSpec(
        basis=BasisSpec(
            family=_family(args),
            max_order=args.order,
            dimensionality=len(dims),
            domain_mapping=DomainMapping(args.mapping),
        ),
        dims=dims,
        seed=seed,
        normalization=Normalization(args.normalization),
    )


def _add_mask_flags(parser, with_normalization=True):
    parser.add_argument("--family", choices=_FAMILY_CHOICES, default="chebyshev",
                        help="1D polynomial family")
    parser.add_argument("--order", type=int, default=10, help="max polynomial order N")
    parser.add_argument("--dims", default="64,64,64", help="grid size nx,ny[,nz]")
    parser.add_argument(
        "--mapping", choices=[m.value for m in DomainMapping], default="symmetric",
        help="grid coordinate mapping",
    )
    parser.add_argument(
        "--hermite-variant", choices=[v.value for v in HermiteVariant], default="standard",
        help="Gaussian envelope variant for the Hermite family",
    )
    if with_normalization:
        parser.add_argument(
            "--normalization", choices=[n.value for n in Normalization], default="minmax",
            help="mask normalization mode",
        )


def _add_noise_flags(parser):
    parser.add_argument("--noise-std", type=float, default=0.05,
                        help="sigma of the multiplicative N(1, sigma^2) noise")
    parser.add_argument("--blob-rate", type=float, default=0.0,
                        help="Poisson mean of injected background blobs (0 = off)")
    parser.add_argument("--blob-radius", default="2,5", help="blob radius range MIN,MAX")
    parser.add_argument("--threshold", type=float, default=0.5, help="binarization threshold")


def _corruption_spec(args, seed: int, mask_spec=None) -> CorruptionSpec:
    return CorruptionSpec(
        mask_spec=mask_spec,
        overseg_noise_std=args.noise_std,
        overseg_blob_rate=args.blob_rate,
        blob_radius_range=_parse_radius_range(args.blob_radius),
        binarize_threshold=args.threshold,
        seed=seed,
    )


def _phantom_spec(args, dims, seed=None) -> PhantomSpec:
    return PhantomSpec(
        kind=PhantomKind(args.phantom),
        dims=dims,
        radius=args.phantom_radius,
        thickness=args.phantom_thickness,
        loops=args.loops,
        seed=seed,
    )


def _out_path(args, default_name: str) -> str:
    import os

    if getattr(args, "out", None):
        return args.out
    os.makedirs(args.out_dir, exist_ok=True)
    return os.path.join(args.out_dir, default_name)


def _load_binary_volume(path: str) -> np.ndarray:
    vol = tfio.read_volume(path)
    if vol.dtype != np.uint8:
        raise InputError(f"{path}: expected a uint8 (binary) volume, got {vol.dtype}")
    return vol


def _load_prediction(path: str, threshold: float) -> np.ndarray:
    vol = tfio.read_volume(path)
    if vol.dtype == np.uint8:
        return vol
    return binarize(vol.astype(np.float64), threshold)


# ---------------------------------------------------------------- commands


def cmd_phantom(args) -> int:
    dims = _parse_dims(args.dims)
    if len(dims) != 3:
        raise InputError("phantoms are 3D; pass --dims nx,ny,nz")
    if args.list:
        print(json.dumps([info.to_dict() for info in list_phantoms()], indent=2))
        return 0
    spec = _phantom_spec(args, dims, seed=args.jitter_seed)
    vol, declared = generate(spec)
    out = _out_path(args, f"{args.phantom}.vol")
    tfio.write_volume(
        vol, out, provenance={"phantom_spec": spec.to_dict(), "betti": declared.to_dict()}
    )
    print(json.dumps({"out": out, "betti": declared.to_dict()}))
    return 0


def cmd_mask(args) -> int:
    spec = _mask_spec(args, args.seed)
    mask = synthesize_mask(spec)
    out = _out_path(args, "mask.vol")
    tfio.write_volume(
        mask.astype(np.float32), out, provenance={"mask_spec": spec.to_dict()}
    )
    print(json.dumps({"out": out, "min": float(mask.min()), "max": float(mask.max())}))
    return 0


def cmd_corrupt(args) -> int:
    gt = _load_binary_volume(args.gt)
    if args.mask:
        mask = tfio.read_volume(args.mask).astype(np.float64)
        mask_spec = None
    else:
        dims_xyz = gt.shape[::-1]
        args.dims = ",".join(str(d) for d in dims_xyz)
        mask_spec = _mask_spec(args, args.seed)
        mask = synthesize_mask(mask_spec)
        if args.mask_out:
            tfio.write_volume(
                mask.astype(np.float32),
                args.mask_out,
                provenance={"mask_spec": mask_spec.to_dict()},
            )
    cspec = _corruption_spec(args, args.seed, mask_spec)
    corrupted = apply_overseg_noise(corrupt(gt, mask), cspec, gt=gt)
    out = _out_path(args, "corrupted.vol")
    tfio.write_volume(
        corrupted.astype(np.float32), out, provenance={"corruption_spec": cspec.to_dict()}
    )
    if args.binarized_out:
        tfio.write_volume(binarize(corrupted, args.threshold), args.binarized_out)
    print(json.dumps({"out": out}))
    return 0


def cmd_betti(args) -> int:
    vol = tfio.read_volume(args.volume)
    if vol.dtype != np.uint8:
        vol = binarize(vol.astype(np.float64), args.threshold)
    numbers = betti(vol)
    chi = euler_characteristic(vol)
    out = numbers.to_dict()
    out["chi"] = chi
    print(json.dumps(out))
    return 0


def cmd_metrics(args) -> int:
    gt = _load_binary_volume(args.gt)
    pred = _load_prediction(args.pred, args.threshold)
    report = betti_error(pred, gt)
    if args.csv_out:
        tfio.write_metrics_csv([report], args.csv_out, sample_ids=[args.pred])
    print(json.dumps(report.to_dict()))
    return 0


def cmd_orthocheck(args) -> int:
    families = (
        list(_FAMILY_CHOICES) if args.family == "all" else [args.family]
    )
    all_ok = True
    print(f"{'family':12s} {'m':>3s} {'n':>3s} {'value':>14s} {'expected':>14s} {'error':>10s}  status")
    for name in families:
        family = PolynomialFamily(Family(name), HermiteVariant(args.hermite_variant))
        rows = orthogonality_report(family, args.max_order, args.tolerance)
        worst = max(rows, key=lambda r: r["error"])
        for row in rows:
            if not row["ok"] or args.verbose:
                print(
                    f"{family.label():12s} {row['m']:3d} {row['n']:3d} "
                    f"{row['value']:14.6e} {row['expected']:14.6e} "
                    f"{row['error']:10.2e}  {'ok' if row['ok'] else 'FAIL'}"
                )
        ok = all(row["ok"] for row in rows)
        all_ok &= ok
        print(
            f"{family.label():12s} pairs 0..{args.max_order}: "
            f"{'PASS' if ok else 'FAIL'} (worst error {worst['error']:.2e} "
            f"at m={worst['m']}, n={worst['n']}, tolerance {args.tolerance:g})"
        )
    return 0 if all_ok else 1


def cmd_dataset(args) -> int:
    if args.verify:
        problems = pipeline.verify_manifest(args.verify)
        for problem in problems:
            print(problem)
        print(f"verify: {'PASS' if not problems else f'FAIL ({len(problems)} problems)'}")
        return 0 if not problems else 1
    if (args.phantom is None) == (args.gt_dir is None):
        raise InputError("provide exactly one of --phantom or --gt-dir")
    dims = _parse_dims(args.dims)
    gt_sources = None
    phantom_spec = None
    if args.gt_dir is not None:
        import glob
        import os

        # absolute source paths keep manifests verifiable from any cwd
        gt_sources = sorted(
            os.path.abspath(p) for p in glob.glob(os.path.join(args.gt_dir, "*.vol"))
        )
        if not gt_sources:
            raise InputError(f"no .vol files in {args.gt_dir}")
        first = tfio.volume_metadata(gt_sources[0])
        dims = tuple(first["dims"])
    else:
        if len(dims) != 3:
            raise InputError("phantom datasets are 3D; pass --dims nx,ny,nz")
        phantom_spec = _phantom_spec(args, dims)
    basis = BasisSpec(
        family=_family(args),
        max_order=args.order,
        dimensionality=len(dims),
        domain_mapping=DomainMapping(args.mapping),
    )
    manifest_path = pipeline.generate_dataset(
        out_dir=args.out_dir,
        count=args.count,
        basis=basis,
        dims=dims,
        corruption_defaults=_corruption_spec(args, seed=0),
        global_seed=args.seed,
        phantom_spec=phantom_spec,
        gt_sources=gt_sources,
        threads=args.threads,
    )
    print(json.dumps({"manifest": manifest_path, "count": args.count}))
    return 0


def cmd_ablate(args) -> int:
    families = []
    for name in args.families.split(","):
        name = name.strip()
        if name not in _FAMILY_CHOICES:
            raise InputError(f"unknown family {name!r}")
        families.append(PolynomialFamily(Family(name), HermiteVariant(args.hermite_variant)))
    orders = [int(o) for o in args.orders.split(",")]
    dims = _parse_dims(args.dims)
    if len(dims) != 3:
        raise InputError("ablation runs on 3D grids; pass --dims nx,ny,nz")
    rows = pipeline.ablation_rows(
        families=families,
        orders=orders,
        n_seeds=args.seeds,
        phantom_spec=_phantom_spec(args, dims),
        dims=dims,
        threshold=args.threshold,
    )
    lines = pipeline.ablation_csv_lines(rows)
    if args.out:
        tfio._atomic_write_bytes(args.out, ("\n".join(lines) + "\n").encode())
        print(json.dumps({"out": args.out, "rows": len(rows)}))
    else:
        for line in lines:
            print(line)
    return 0


# ---------------------------------------------------------------- wiring


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="topoforge",
        description="Synthesize topology-perturbing segmentation corruptions "
        "and evaluate topological correctness (Betti numbers, Dice).",
        formatter_class=argparse.ArgumentDefaultsHelpFormatter,
    )
    parser.add_argument("--seed", type=int, default=0, help="global seed")
    parser.add_argument("--threads", type=int, default=1, help="worker processes for dataset")
    parser.add_argument("--out-dir", default=".", help="directory for default outputs")
    parser.add_argument(
        "--format-version",
        default=tfio.VOLUME_FORMAT,
        help="volume format version to emit (only %(default)s is supported)",
    )
    parser.add_argument("--config", default=None, help="JSON config file; flags override it")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, **kw):
        return sub.add_parser(
            name, formatter_class=argparse.ArgumentDefaultsHelpFormatter, **kw
        )

    p = add("phantom", help="generate a synthetic ground-truth volume")
    p.add_argument("--kind", dest="phantom", choices=[k.value for k in PhantomKind],
                   default="ring", help="phantom geometry")
    p.add_argument("--dims", default="32,32,32", help="grid size nx,ny,nz")
    p.add_argument("--radius", dest="phantom_radius", type=float, default=None,
                   help="primary radius (kind-dependent default)")
    p.add_argument("--thickness", dest="phantom_thickness", type=float, default=None,
                   help="structure thickness (kind-dependent default)")
    p.add_argument("--loops", type=int, default=4, help="loop count (loopgrid only)")
    p.add_argument("--jitter-seed", type=int, default=None,
                   help="seed for a jittered variant; omit for the canonical shape")
    p.add_argument("--list", action="store_true", help="print the phantom catalog and exit")
    p.add_argument("--out", default=None, help="output path (default: out-dir/<kind>.vol)")
    p.set_defaults(func=cmd_phantom)

    p = add("mask", help="synthesize a perturbation mask")
    _add_mask_flags(p)
    p.add_argument("--out", default=None, help="output path (default: out-dir/mask.vol)")
    p.set_defaults(func=cmd_mask)

    p = add("corrupt", help="corrupt a ground truth with a mask")
    p.add_argument("--gt", required=True, help="binary ground-truth volume")
    p.add_argument("--mask", default=None, help="mask volume; omit to synthesize from flags")
    _add_mask_flags(p)
    _add_noise_flags(p)
    p.add_argument("--mask-out", default=None, help="also write the synthesized mask here")
    p.add_argument("--binarized-out", default=None, help="also write the thresholded result")
    p.add_argument("--out", default=None, help="output path (default: out-dir/corrupted.vol)")
    p.set_defaults(func=cmd_corrupt)

    p = add("betti", help="Betti numbers of a volume")
    p.add_argument("volume", help="volume file (uint8 used as-is; float binarized)")
    p.add_argument("--threshold", type=float, default=0.5,
                   help="binarization threshold for float volumes")
    p.set_defaults(func=cmd_betti)

    p = add("metrics", help="Dice and Betti errors for a prediction/GT pair")
    p.add_argument("--pred", required=True, help="prediction volume (float or uint8)")
    p.add_argument("--gt", required=True, help="binary ground-truth volume")
    p.add_argument("--threshold", type=float, default=0.5, help="binarization threshold")
    p.add_argument("--csv-out", default=None, help="also write a one-row metrics CSV here")
    p.set_defaults(func=cmd_metrics)

    p = add("orthocheck", help="numerical orthogonality check")
    p.add_argument("--family", choices=_FAMILY_CHOICES + ("all",), default="all",
                   help="family to check")
    p.add_argument("--max-order", type=int, default=10, help="highest order in the check")
    p.add_argument("--tolerance", type=float, default=1e-8, help="pass/fail tolerance")
    p.add_argument("--hermite-variant", choices=[v.value for v in HermiteVariant],
                   default="standard", help="Gaussian envelope variant")
    p.add_argument("--verbose", action="store_true", help="print every pair, not just failures")
    p.set_defaults(func=cmd_orthocheck)

    p = add("dataset", help="emit a corrupted-sample dataset with a manifest")
    p.add_argument("--phantom", choices=[k.value for k in PhantomKind], default=None,
                   help="phantom recipe for per-sample ground truths")
    p.add_argument("--gt-dir", default=None, help="directory of binary .vol ground truths")
    p.add_argument("--count", type=int, default=100, help="number of samples")
    p.add_argument("--phantom-radius", type=float, default=None, help="phantom radius override")
    p.add_argument("--phantom-thickness", type=float, default=None,
                   help="phantom thickness override")
    p.add_argument("--loops", type=int, default=4, help="loop count (loopgrid only)")
    _add_mask_flags(p)
    _add_noise_flags(p)
    p.add_argument("--verify", default=None,
                   help="verify an existing manifest instead of generating")
    p.set_defaults(func=cmd_dataset)

    p = add("ablate", help="per-(family, order) Betti-error and mask-statistics sweep")
    p.add_argument("--families", default="legendre,chebyshev,hermite",
                   help="comma-separated family list")
    p.add_argument("--orders", default="4,6,8,10", help="comma-separated order list")
    p.add_argument("--seeds", type=int, default=100, help="seeds per (family, order) cell")
    p.add_argument("--phantom", choices=[k.value for k in PhantomKind], default="ring",
                   help="ground-truth phantom")
    p.add_argument("--phantom-radius", type=float, default=None, help="phantom radius override")
    p.add_argument("--phantom-thickness", type=float, default=None,
                   help="phantom thickness override")
    p.add_argument("--loops", type=int, default=4, help="loop count (loopgrid only)")
    p.add_argument("--dims", default="64,64,64", help="grid size nx,ny,nz")
    p.add_argument("--threshold", type=float, default=0.5, help="binarization threshold")
    p.add_argument("--hermite-variant", choices=[v.value for v in HermiteVariant],
                   default="standard", help="Gaussian envelope variant")
    p.add_argument("--out", default=None, help="CSV path; prints to stdout when omitted")
    p.set_defaults(func=cmd_ablate)

    return parser


def _collect_dests(parser: argparse.ArgumentParser) -> set[str]:
    dests = {a.dest for a in parser._actions}
    for action in parser._actions:
        if isinstance(action, argparse._SubParsersAction):
            for sub in action.choices.values():
                dests |= _collect_dests(sub)
    return dests


def _apply_config_file(parser: argparse.ArgumentParser, argv: list[str]) -> None:
    if "--config" not in argv:
        return
    path = argv[argv.index("--config") + 1]
    try:
        with open(path, "r", encoding="utf-8") as fh:
            values = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"unreadable config file {path}: {exc}") from exc
    if not isinstance(values, dict):
        raise InputError(f"config file {path} must hold a JSON object")
    known = _collect_dests(parser)
    defaults = {}
    for key, value in values.items():
        dest = key.replace("-", "_")
        if dest not in known:
            raise InputError(f"config file {path}: unknown key {key!r}")
        defaults[dest] = value

    # each subparser parses into a fresh namespace, so defaults must be
    # planted on every parser that knows the key; flags still override
    def plant(p: argparse.ArgumentParser) -> None:
        local = {a.dest for a in p._actions}
        subset = {k: v for k, v in defaults.items() if k in local}
        if subset:
            p.set_defaults(**subset)
        for action in p._actions:
            if isinstance(action, argparse._SubParsersAction):
                for sub in action.choices.values():
                    plant(sub)

    plant(parser)


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        _apply_config_file(parser, argv)
        args = parser.parse_args(argv)
        if args.format_version != tfio.VOLUME_FORMAT:
            raise InputError(
                f"unsupported format version {args.format_version!r} "
                f"(this build writes {tfio.VOLUME_FORMAT!r})"
            )
        if args.threads < 1:
            raise InputError("--threads must be >= 1")
        effective = {k: v for k, v in vars(args).items() if k not in ("func", "config")}
        print("config: " + json.dumps(effective, sort_keys=True, default=str), file=sys.stderr)
        return args.func(args)
    except TopoforgeError as exc:
        print(
            f"error code={exc.exit_code} kind={type(exc).__name__} msg={str(exc)!r}",
            file=sys.stderr,
        )
        return exc.exit_code
    except OSError as exc:
        print(f"error code=2 kind={type(exc).__name__} msg={str(exc)!r}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001 - anything else is an internal bug
        import traceback

        traceback.print_exc()
        print(f"error code=3 kind={type(exc).__name__} msg={str(exc)!r}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
