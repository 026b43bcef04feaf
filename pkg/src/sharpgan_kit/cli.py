"""``sharpgan-kit`` command line front-end.

Commands::

    sharpgan-kit maskgen    --seed 7 --count 100 --out masks/
    sharpgan-kit maps       masks/ --out maps/
    sharpgan-kit score-iqa  real/ fake/ --metrics ssim,gmsd --out iqa.json
    sharpgan-kit score-seg  gt/ pred/ --out seg.csv --format csv
    sharpgan-kit sharpness  image.png --mask mask_000000.png --lambda 0.3 --grad grad.sgdm

Exit status is 0 when no error occurred; warnings (skipped pairs, empty
inputs) are reported but do not change it.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import __version__
from . import config as cfgmod
from . import io as sio
from .core import to_gray, validate_instance_map
from .errors import DimensionMismatch, NoPairs, SharpGanKitError
from .iqa import METRICS, fsim, gmsd, nrmse, ssim
from .maps import binary_mask, contour_map, distance_map
from .maskgen import synthesize_layout
from .report import TOOL, Report
from .segeval import score as seg_score
from .sharploss import sharpness, sharpness_grad

log = logging.getLogger("sharpgan_kit")

MASK_PATTERN = "mask_{:06d}.png"


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).parent.mkdir(parents=True, exist_ok=True)
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _format(args, cfg) -> str:
    return args.format or cfgmod.output_settings(cfg)["format"]


def _pngs(d: Path) -> dict[str, Path]:
    if not d.is_dir():
        raise SharpGanKitError(f"not a directory: {d}")
    return {p.stem: p for p in sorted(d.glob("*.png"))}


def _pairs(a_dir: Path, b_dir: Path, report: Report) -> list[tuple[str, Path, Path]]:
    a, b = _pngs(a_dir), _pngs(b_dir)
    for stem in sorted(set(a) ^ set(b)):
        side = a_dir if stem in a else b_dir
        report.skip(stem, f"no counterpart for {side / (stem + '.png')}")
    common = sorted(set(a) & set(b))
    if not common:
        raise NoPairs(f"no same-named PNG pairs between {a_dir} and {b_dir}")
    return [(s, a[s], b[s]) for s in common]


def _layout(job):
    mc, seed = job
    labels = synthesize_layout(mc, seed)
    rep = validate_instance_map(labels)
    if not rep.ok:
        raise SharpGanKitError(f"seed {seed}: invalid layout {rep.issues}")
    return labels


def cmd_maskgen(args) -> int:
    cfg = cfgmod.load(args.config)
    mc = cfgmod.maskgen_config(cfg)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    seeds = [args.seed + i for i in range(args.count)]
    files = [MASK_PATTERN.format(i) for i in range(args.count)]

    jobs = [(mc, s) for s in seeds]
    if args.workers > 1:
        with ThreadPoolExecutor(max_workers=args.workers) as pool:
            layouts = pool.map(_layout, jobs)
            for name, labels in zip(files, layouts):
                sio.write_labels(out / name, labels)
    else:
        for name, job in zip(files, jobs):
            sio.write_labels(out / name, _layout(job))

    effective = {"maskgen": mc}
    manifest = {
        "tool": TOOL,
        "version": __version__,
        "command": "maskgen",
        "config": cfgmod.as_plain(effective),
        "config_hash": cfgmod.config_hash(effective),
        "seed": args.seed,
        "count": args.count,
        "seeds": seeds,
        "files": files,
    }
    (out / "manifest.json").write_text(json.dumps(manifest, indent=2) + "\n", encoding="utf-8")
    log.info("wrote %d layouts to %s", args.count, out)
    return 0


def cmd_maps(args) -> int:
    cfg = cfgmod.load(args.config)
    st = cfgmod.maps_settings(cfg)
    if args.mode:
        st["mode"] = args.mode
    if args.normalize is not None:
        st["normalize"] = args.normalize
    if args.connectivity:
        st["connectivity"] = args.connectivity

    inputs = _pngs(Path(args.in_dir))
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    warnings = []
    if not inputs:
        warnings.append(f"no PNG instance maps found in {args.in_dir}")
    written = []
    for stem, path in inputs.items():
        labels = sio.read_labels(path)
        sio.write_sgdm(out / f"{stem}_distance.sgdm", distance_map(labels, st["mode"], st["normalize"]))
        sio.write_binary(out / f"{stem}_contour.png", contour_map(labels, st["connectivity"]))
        sio.write_binary(out / f"{stem}_mask.png", binary_mask(labels))
        written.append(stem)
    for w in warnings:
        log.warning(w)
    status = {
        "tool": TOOL,
        "version": __version__,
        "command": "maps",
        "config": st,
        "config_hash": cfgmod.config_hash({"maps": st}),
        "processed": written,
        "warnings": warnings,
        "status": "warning" if warnings else "ok",
    }
    _emit(json.dumps(status, indent=2) + "\n", None)
    return 0


def _parse_metrics(text: str | None) -> list[str]:
    if not text:
        return list(METRICS)
    chosen = [m.strip().lower() for m in text.split(",") if m.strip()]
    bad = [m for m in chosen if m not in METRICS]
    if bad:
        raise SharpGanKitError(f"unknown metrics {bad}; choose from {list(METRICS)}")
    return [m for m in METRICS if m in chosen]


def cmd_score_iqa(args) -> int:
    cfg = cfgmod.load(args.config)
    metrics = _parse_metrics(args.metrics)
    confs = {"ssim": cfgmod.ssim_config(cfg), "fsim": cfgmod.fsim_config(cfg), "gmsd": cfgmod.gmsd_config(cfg)}
    effective = {"metrics": metrics, **{k: v for k, v in confs.items() if k in metrics}}
    report = Report("score-iqa", metrics, cfgmod.config_hash(effective), cfgmod.as_plain(effective))
    fns = {
        "ssim": lambda a, b: ssim(a, b, confs["ssim"]),
        "fsim": lambda a, b: fsim(a, b, confs["fsim"]),
        "gmsd": lambda a, b: gmsd(a, b, confs["gmsd"]),
        "nrmse": nrmse,
    }
    for stem, ref_path, test_path in _pairs(Path(args.ref_dir), Path(args.test_dir), report):
        ref = to_gray(sio.read_image(ref_path))
        test = to_gray(sio.read_image(test_path))
        if ref.shape != test.shape:
            report.skip(stem, f"shape mismatch {ref.shape} vs {test.shape}")
            continue
        values = {}
        for m in metrics:
            try:
                values[m] = fns[m](ref, test)
            except SharpGanKitError as exc:
                values[m] = None
                report.warnings.append(f"{stem}: {m}: {exc}")
        report.add_row(stem, values)
    _emit(report.render(_format(args, cfg)), args.out)
    for w in report.warnings:
        log.warning(w)
    return 0


def cmd_score_seg(args) -> int:
    cfg = cfgmod.load(args.config)
    st = cfgmod.seg_settings(cfg)
    if args.iou_threshold is not None:
        st["iou_threshold"] = args.iou_threshold
    metrics = ["dq", "sq", "pq", "aji"]
    effective = {"seg": st}
    report = Report("score-seg", metrics, cfgmod.config_hash(effective), cfgmod.as_plain(effective))
    for stem, gt_path, pred_path in _pairs(Path(args.gt_dir), Path(args.pred_dir), report):
        gt = sio.read_labels(gt_path)
        pred = sio.read_labels(pred_path)
        if gt.shape != pred.shape:
            report.skip(stem, f"shape mismatch {gt.shape} vs {pred.shape}")
            continue
        report.add_row(stem, seg_score(gt, pred, st["iou_threshold"]).as_dict())
    _emit(report.render(_format(args, cfg)), args.out)
    for w in report.warnings:
        log.warning(w)
    return 0


def cmd_sharpness(args) -> int:
    cfg = cfgmod.load(args.config)
    sc = cfgmod.sharpness_config(cfg)
    if args.lam is not None:
        sc = type(sc)(args.lam)
    g = to_gray(sio.read_image(args.image))
    if args.mask:
        contour = contour_map(sio.read_labels(args.mask))
        source = {"mask": str(args.mask)}
    else:
        contour = sio.read_binary(args.contour)
        source = {"contour": str(args.contour)}
    if contour.shape != g.shape:
        raise DimensionMismatch(f"image {g.shape} and contour {contour.shape} differ in shape")

    res = sharpness(contour, g, sc)
    if args.s_map:
        sio.write_sgdm(args.s_map, res.per_pixel)
    if args.grad:
        sio.write_sgdm(args.grad, sharpness_grad(contour, g, sc))

    effective = {"sharpness": sc}
    result = {
        "tool": TOOL,
        "version": __version__,
        "command": "sharpness",
        "config_hash": cfgmod.config_hash(effective),
        "lambda": sc.lam,
        "image": str(args.image),
        **source,
        "contour_pixels": int(np.count_nonzero(contour)),
        "loss": res.loss,
    }
    if _format(args, cfg) == "csv":
        text = f"image,lambda,loss\n{args.image},{sc.lam!r},{res.loss!r}\n"
    else:
        text = json.dumps(result, indent=2) + "\n"
    _emit(text, args.out)
    return 0


def _bool(text: str) -> bool:
    low = text.lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise argparse.ArgumentTypeError(f"expected a boolean, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sharpgan-kit", description=__doc__.split("\n")[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, out_help):
        p.add_argument("--config", help="INI config file")
        p.add_argument("--out", help=out_help)
        p.add_argument("--format", choices=("csv", "json"), default=None)
        return p

    p = common(sub.add_parser("maskgen", help="generate random instance-map layouts"), "output directory")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--count", type=int, default=1)
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_maskgen)

    p = common(sub.add_parser("maps", help="distance, contour and binary maps for instance maps"), "output directory")
    p.add_argument("in_dir")
    p.add_argument("--mode", choices=("centroid", "centroid_inverted"))
    p.add_argument("--normalize", type=_bool, default=None)
    p.add_argument("--connectivity", type=int, choices=(4, 8))
    p.set_defaults(func=cmd_maps)

    p = common(sub.add_parser("score-iqa", help="SSIM / FSIM / GMSD / NRMSE over image pairs"), "report file")
    p.add_argument("ref_dir")
    p.add_argument("test_dir")
    p.add_argument("--metrics", help="comma-separated subset of " + ",".join(METRICS))
    p.set_defaults(func=cmd_score_iqa)

    p = common(sub.add_parser("score-seg", help="DQ / SQ / PQ / AJI over instance-map pairs"), "report file")
    p.add_argument("gt_dir")
    p.add_argument("pred_dir")
    p.add_argument("--iou-threshold", type=float, default=None)
    p.set_defaults(func=cmd_score_seg)

    p = common(sub.add_parser("sharpness", help="sharpness loss of one image"), "result file")
    p.add_argument("image")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--contour", help="8-bit PNG, nonzero = contour pixel")
    src.add_argument("--mask", help="16-bit instance map; contour derived with 8-connectivity")
    p.add_argument("--lambda", dest="lam", type=float, default=None)
    p.add_argument("--s-map", help="write the per-pixel sharpness map (SGDM)")
    p.add_argument("--grad", help="write the gradient w.r.t. the gray image (SGDM)")
    p.set_defaults(func=cmd_sharpness)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s: %(message)s")
    if args.command in ("maskgen", "maps") and not args.out:
        parser.error(f"{args.command} requires --out")
    if args.command == "maskgen" and args.count < 0:
        parser.error("--count must be >= 0")
    try:
        return args.func(args)
    except (SharpGanKitError, OSError, ValueError) as exc:
        log.error("%s", exc)
        return 1


if __name__ == "__main__":
    sys.exit(main())
