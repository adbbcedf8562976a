"""Command-line front end.

Subcommands:
    fuse     one source pair -> fused image (+ optional stage maps, metrics)
    batch    every <stem>-A/<stem>-B pair in a directory, with a manifest
    synth    complementary-blur fixture generation
    metrics  quality numbers for an existing fused image
    config   print the effective parameter set

Exit codes: 0 ok, 2 unreadable input, 3 dimension mismatch, 4 bad config
or mask, 5 no pairs found. Batch runs record per-pair failures in the
manifest and still exit 0 so one corrupt pair cannot kill a long run.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from .bench import disk_mask, half_plane_mask, make_pair, random_scene, write_fixture
from .config import FusionConfig, config_hash
from .fuse import run_pipeline
from .imgcore import (
    load_image,
    save_decision_map,
    save_image,
    save_score_map,
    to_gray,
)
from .metrics import psnr, q_mi
from .validation import DimensionMismatchError, FusionError, ParameterError, check_binary

EXIT_OK = 0
EXIT_UNREADABLE = 2
EXIT_DIM_MISMATCH = 3
EXIT_BAD_CONFIG = 4
EXIT_NO_PAIRS = 5

_CONFIG_FLAGS = {
    # flag name -> (config field, type)
    "scales": ("num_scales", int),
    "gauss_sigma": ("gauss_sigma", float),
    "log_energy_threshold": ("log_energy_threshold", float),
    "beta": ("balance_beta", float),
    "ssim_window": ("ssim_window", int),
    "rf_sigma_s": ("rf_sigma_s", float),
    "rf_sigma_r": ("rf_sigma_r", float),
    "rf_iterations": ("rf_iterations", int),
    "consistency_window": ("consistency_window", int),
    "consistency_passes": ("consistency_passes", int),
    "small_region_fraction": ("small_region_fraction", float),
}


class _CliError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _add_config_flags(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("pipeline parameters")
    group.add_argument("--config", metavar="FILE", help="JSON file with parameter overrides")
    for flag, (field, typ) in _CONFIG_FLAGS.items():
        group.add_argument(f"--{flag.replace('_', '-')}", dest=f"cfg_{flag}", type=typ,
                           default=None, metavar=field.upper())


def _build_config(args: argparse.Namespace) -> FusionConfig:
    """Defaults, overlaid by the config file, overlaid by explicit flags."""
    values = FusionConfig().to_dict()
    if getattr(args, "config", None):
        try:
            loaded = json.loads(Path(args.config).read_text())
        except OSError as exc:
            raise _CliError(EXIT_UNREADABLE, f"cannot read config file: {exc}")
        except json.JSONDecodeError as exc:
            raise _CliError(EXIT_BAD_CONFIG, f"config file is not valid JSON: {exc}")
        if not isinstance(loaded, dict):
            raise _CliError(EXIT_BAD_CONFIG, "config file must hold a JSON object")
        unknown = set(loaded) - set(values)
        if unknown:
            raise _CliError(EXIT_BAD_CONFIG, f"unknown config keys: {sorted(unknown)}")
        values.update(loaded)
    for flag, (field, _typ) in _CONFIG_FLAGS.items():
        override = getattr(args, f"cfg_{flag}", None)
        if override is not None:
            values[field] = override
    try:
        return FusionConfig.from_dict(values)
    except (ParameterError, TypeError) as exc:
        raise _CliError(EXIT_BAD_CONFIG, f"bad config: {exc}")


def _load(path) -> np.ndarray:
    try:
        return load_image(path)
    except (OSError, ValueError) as exc:
        raise _CliError(EXIT_UNREADABLE, f"cannot read image {path}: {exc}")


def _fuse_pair(img_a, img_b, cfg: FusionConfig, keep: bool = False):
    try:
        return run_pipeline(img_a, img_b, cfg, keep_intermediates=keep)
    except DimensionMismatchError as exc:
        raise _CliError(EXIT_DIM_MISMATCH, str(exc))
    except FusionError as exc:
        raise _CliError(EXIT_BAD_CONFIG, str(exc))


def _write_debug_maps(out_path: Path, result) -> None:
    """Stage planes next to the fused output as <out>.<stage>.png."""
    base = out_path.parent / out_path.stem
    it = result.intermediates
    for name in ("pf", "epf"):
        save_image(f"{base}.{name}.png", np.clip(it[name], 0.0, 1.0))
    for name in ("scm1", "scm2", "b1", "b2"):
        save_score_map(f"{base}.{name}.png", it[name])
    for name in ("dm", "dbm", "bdm"):
        save_image(f"{base}.{name}.png", np.clip(it[name], 0.0, 1.0))
    for name in ("tmp", "omp"):
        save_decision_map(f"{base}.{name}.png", it[name])
    save_decision_map(f"{base}.rmp.png", it["rmp"], rmp_levels=True)
    save_decision_map(f"{base}.fmp.png", result.fmp)


def _manifest_record(pair, out, result, elapsed_ms, cfg, with_metrics) -> dict:
    record = {
        "pair": [str(p) for p in pair],
        "out": str(out),
        "q_mi": None,
        "ms": round(elapsed_ms, 3),
        "config_hash": config_hash(cfg),
        "config": cfg.to_dict(),
    }
    if with_metrics:
        a, b = (load_image(p) for p in pair)
        record["q_mi"] = round(q_mi(to_gray(a), to_gray(b), to_gray(result.fused)), 6)
    return record


def cmd_fuse(args) -> int:
    cfg = _build_config(args)
    img_a, img_b = _load(args.source_a), _load(args.source_b)
    start = time.perf_counter()
    result = _fuse_pair(img_a, img_b, cfg, keep=args.debug_maps)
    elapsed_ms = (time.perf_counter() - start) * 1000.0
    out = Path(args.output)
    out.parent.mkdir(parents=True, exist_ok=True)
    save_image(out, result.fused)
    if args.debug_maps:
        _write_debug_maps(out, result)
    record = _manifest_record((args.source_a, args.source_b), out, result,
                              elapsed_ms, cfg, args.metrics)
    line = json.dumps(record, sort_keys=True)
    if args.manifest:
        with open(args.manifest, "a", encoding="utf-8") as fh:
            fh.write(line + "\n")
    else:
        print(line)
    return EXIT_OK


def _find_pairs(dir_in: Path) -> list[tuple[str, Path, Path]]:
    pairs = []
    for a_path in sorted(dir_in.iterdir()):
        if not a_path.is_file():
            continue
        stem, ext = a_path.stem, a_path.suffix
        if not stem.endswith("-A"):
            continue
        b_path = dir_in / f"{stem[:-2]}-B{ext}"
        if b_path.is_file():
            pairs.append((stem[:-2], a_path, b_path))
    return pairs


def _batch_one(stem: str, a_path: Path, b_path: Path, dir_out: Path,
               cfg: FusionConfig, with_metrics: bool) -> dict:
    try:
        img_a, img_b = _load(a_path), _load(b_path)
        start = time.perf_counter()
        result = _fuse_pair(img_a, img_b, cfg)
        elapsed_ms = (time.perf_counter() - start) * 1000.0
        out = dir_out / f"{stem}.png"
        save_image(out, result.fused)
        return _manifest_record((a_path, b_path), out, result, elapsed_ms, cfg, with_metrics)
    except _CliError as exc:
        return {"pair": [str(a_path), str(b_path)], "error": str(exc), "code": exc.code}


def _worker_count() -> int:
    limit = os.environ.get("SAMF_THREADS")
    if limit:
        try:
            return max(1, int(limit))
        except ValueError:
            raise _CliError(EXIT_BAD_CONFIG, f"SAMF_THREADS must be an integer, got {limit!r}")
    return os.cpu_count() or 1


def cmd_batch(args) -> int:
    cfg = _build_config(args)
    dir_in, dir_out = Path(args.dir_in), Path(args.dir_out)
    if not dir_in.is_dir():
        raise _CliError(EXIT_UNREADABLE, f"input directory not found: {dir_in}")
    dir_out.mkdir(parents=True, exist_ok=True)
    manifest_path = Path(args.manifest) if args.manifest else dir_out / "manifest.jsonl"
    pairs = _find_pairs(dir_in)
    if not pairs:
        manifest_path.write_text("")
        print(f"no <stem>-A/<stem>-B pairs found in {dir_in}", file=sys.stderr)
        return EXIT_NO_PAIRS
    workers = _worker_count()
    with ThreadPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(_batch_one, stem, a, b, dir_out, cfg, args.metrics)
                   for stem, a, b in pairs]
        records = [f.result() for f in futures]
    with open(manifest_path, "w", encoding="utf-8") as fh:
        for record in records:  # pairs are pre-sorted by stem
            fh.write(json.dumps(record, sort_keys=True) + "\n")
    failures = sum(1 for r in records if "error" in r)
    print(f"fused {len(records) - failures}/{len(records)} pairs -> {dir_out}"
          + (f" ({failures} failed, see manifest)" if failures else ""))
    return EXIT_OK


def _parse_mask(spec: str, height: int, width: int) -> np.ndarray:
    if spec == "half":
        return half_plane_mask(height, width)
    if spec.startswith("disk:"):
        try:
            radius = float(spec.split(":", 1)[1])
        except ValueError:
            raise _CliError(EXIT_BAD_CONFIG, f"bad disk radius in mask spec {spec!r}")
        if radius <= 0:
            raise _CliError(EXIT_BAD_CONFIG, "disk radius must be > 0")
        return disk_mask(height, width, radius)
    if spec.startswith("file:"):
        mask = _load(spec.split(":", 1)[1])
        if mask.ndim == 3:
            mask = mask[:, :, 0]
        mask = (mask > 0.5).astype(np.float64)
        if mask.shape != (height, width):
            raise _CliError(EXIT_DIM_MISMATCH,
                            f"mask shape {mask.shape} does not match image {(height, width)}")
        try:
            return check_binary(mask)
        except ParameterError as exc:
            raise _CliError(EXIT_BAD_CONFIG, f"bad mask: {exc}")
    raise _CliError(EXIT_BAD_CONFIG,
                    f"mask spec must be half, disk:R or file:PATH, got {spec!r}")


def cmd_synth(args) -> int:
    if args.sigma <= 0:
        raise _CliError(EXIT_BAD_CONFIG, f"blur sigma must be > 0, got {args.sigma}")
    if args.ground_truth:
        gt = _load(args.ground_truth)
        seed = 0
    else:
        gt = random_scene(args.size, args.size, seed=args.seed)
        seed = args.seed
    height, width = gt.shape[:2]
    mask = _parse_mask(args.mask, height, width)
    fixture = make_pair(gt, mask, args.sigma, seed=seed)
    outdir = write_fixture(fixture, args.output)
    print(f"fixture written to {outdir}")
    return EXIT_OK


def cmd_metrics(args) -> int:
    fused = to_gray(_load(args.fused))
    img_a, img_b = to_gray(_load(args.source_a)), to_gray(_load(args.source_b))
    if fused.shape != img_a.shape or fused.shape != img_b.shape:
        raise _CliError(EXIT_DIM_MISMATCH, "fused and source dimensions differ")
    report = {"q_mi": round(q_mi(img_a, img_b, fused), 6)}
    if args.ground_truth:
        gt = to_gray(_load(args.ground_truth))
        if gt.shape != fused.shape:
            raise _CliError(EXIT_DIM_MISMATCH, "ground truth dimensions differ")
        value = psnr(gt, fused)
        report["psnr"] = None if value == float("inf") else round(value, 3)
    print(json.dumps(report, sort_keys=True))
    return EXIT_OK


def cmd_config(args) -> int:
    cfg = _build_config(args)
    payload = {"config": cfg.to_dict(), "config_hash": config_hash(cfg)}
    print(json.dumps(payload, indent=2, sort_keys=True))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="samfuse",
        description="Small-area-aware multi-focus image fusion.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_fuse = sub.add_parser("fuse", help="fuse one source pair")
    p_fuse.add_argument("source_a")
    p_fuse.add_argument("source_b")
    p_fuse.add_argument("-o", "--output", required=True)
    p_fuse.add_argument("--debug-maps", action="store_true",
                        help="also write every stage map next to the output")
    p_fuse.add_argument("--metrics", action="store_true",
                        help="compute the mutual-information score of the result")
    p_fuse.add_argument("--manifest", metavar="FILE",
                        help="append the run record here instead of stdout")
    _add_config_flags(p_fuse)
    p_fuse.set_defaults(func=cmd_fuse)

    p_batch = sub.add_parser("batch", help="fuse every pair in a directory")
    p_batch.add_argument("dir_in")
    p_batch.add_argument("dir_out")
    p_batch.add_argument("--metrics", action="store_true")
    p_batch.add_argument("--manifest", metavar="FILE",
                         help="manifest path (default: <dir_out>/manifest.jsonl)")
    _add_config_flags(p_batch)
    p_batch.set_defaults(func=cmd_batch)

    p_synth = sub.add_parser("synth", help="generate a complementary-blur fixture")
    p_synth.add_argument("ground_truth", nargs="?",
                         help="all-in-focus image; omit to generate a textured scene")
    p_synth.add_argument("-o", "--output", required=True)
    p_synth.add_argument("--mask", default="half", help="half | disk:R | file:PATH")
    p_synth.add_argument("--sigma", type=float, default=3.0)
    p_synth.add_argument("--size", type=int, default=512,
                         help="side length of the generated scene")
    p_synth.add_argument("--seed", type=int, default=0)
    p_synth.set_defaults(func=cmd_synth)

    p_metrics = sub.add_parser("metrics", help="score an existing fused image")
    p_metrics.add_argument("fused")
    p_metrics.add_argument("source_a")
    p_metrics.add_argument("source_b")
    p_metrics.add_argument("--ground-truth")
    p_metrics.set_defaults(func=cmd_metrics)

    p_config = sub.add_parser("config", help="print the effective parameter set")
    p_config.add_argument("--dump", action="store_true",
                          help="print the effective config as JSON (default action)")
    _add_config_flags(p_config)
    p_config.set_defaults(func=cmd_config)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except _CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
