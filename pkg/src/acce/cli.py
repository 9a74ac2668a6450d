"""Command line interface: enhance, batch, metrics.

Exit codes: 0 on success, 1 when any file failed to process, 2 for
usage errors (bad flags, bad config values).
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .imagecore import load_image, save_image
from .metrics import MetricReport, mse, psnr, ssim
from .pipeline import PipelineConfig, config_from_options, enhance, run_batch

_INPUT_SUFFIXES = (".png", ".ppm")


def _add_config_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", metavar="FILE", help="key=value config file; flags override it")
    opt = parser.add_argument_group("enhancement options")
    opt.add_argument("--alpha", type=float, help="saturation contrast strength")
    opt.add_argument("--beta", type=float, help="intensity contrast strength")
    opt.add_argument("--sigma", type=float, help="value-domain bell width")
    opt.add_argument("--dt", type=float, help="descent step size in (0, 1]")
    opt.add_argument("--tau", type=float, help="relative-energy stopping tolerance")
    opt.add_argument("--lambda", dest="lam", type=float, help="guide stretch spread multiplier")
    opt.add_argument("--max-iters", type=int, help="iteration cap")
    opt.add_argument("--window-radius", type=int, help="pairwise-sum window radius")
    opt.add_argument("--kernel", choices=("inverse", "gaussian"), help="pair weight kind")
    opt.add_argument("--spatial-sigma", type=float, help="gaussian kernel scale")
    opt.add_argument("--exact", action="store_const", const=True,
                     help="exact global pairwise sums (slow; for verification)")
    opt.add_argument("--no-denoise", action="store_const", const=True,
                     help="skip high-frequency soft thresholding")
    opt.add_argument("--threshold", type=float, help="fixed shrink threshold (default: automatic)")
    opt.add_argument("--gain", type=float, help="high-frequency gain at recombination")
    opt.add_argument("--bilateral-spatial", type=float, help="bilateral spatial sigma")
    opt.add_argument("--bilateral-range", type=float, help="bilateral range sigma")
    opt.add_argument("--bilateral-radius", type=int, help="bilateral window radius")
    opt.add_argument("--dog-sigma1", type=float, help="band-pass inner sigma")
    opt.add_argument("--dog-sigma2", type=float, help="band-pass outer sigma")
    opt.add_argument("--init", choices=("guide", "lowfreq"), help="solver initialization")
    opt.add_argument("--spread", choices=("std", "var"), help="guide spread reading")
    opt.add_argument("--dump", metavar="DIR", help="write run intermediates and trace here")
    opt.add_argument("--trace", action="store_true", help="stream iter,energy,delta CSV to stdout")


def _parse_config_file(path: str) -> dict:
    options: dict[str, str] = {}
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        text = line.strip()
        if not text or text.startswith("#"):
            continue
        if "=" not in text:
            raise ValueError(f"{path}:{lineno}: expected key=value, got {line!r}")
        key, _, value = text.partition("=")
        options[key.strip()] = value.strip()
    return options


def _resolve_config(args: argparse.Namespace) -> PipelineConfig:
    options: dict[str, str] = {}
    if args.config:
        options.update(_parse_config_file(args.config))

    flag_map = {
        "alpha": args.alpha, "beta": args.beta, "sigma": args.sigma, "dt": args.dt,
        "tau": args.tau, "lambda": args.lam, "max_iters": args.max_iters,
        "window_radius": args.window_radius, "kernel": args.kernel,
        "spatial_sigma": args.spatial_sigma, "exact": args.exact,
        "threshold": args.threshold, "gain": args.gain,
        "bilateral_spatial": args.bilateral_spatial, "bilateral_range": args.bilateral_range,
        "bilateral_radius": args.bilateral_radius, "dog_sigma1": args.dog_sigma1,
        "dog_sigma2": args.dog_sigma2, "init": args.init, "spread": args.spread,
        "dump_dir": args.dump,
    }
    for key, value in flag_map.items():
        if value is not None:
            options[key] = str(value)
    if args.no_denoise:
        options["denoise"] = "false"
    return config_from_options(options)


def _trace_printer(enabled: bool):
    if not enabled:
        return None
    print("iter,energy,delta", flush=True)

    def emit(iteration: int, value: float, delta: "float | None") -> None:
        tail = "" if delta is None else repr(delta)
        print(f"{iteration},{value!r},{tail}", flush=True)

    return emit


def _cmd_enhance(args: argparse.Namespace) -> int:
    cfg = _resolve_config(args)
    try:
        img = load_image(args.input)
        out = enhance(img, cfg, on_iteration=_trace_printer(args.trace))
        save_image(out, args.output)
    except (OSError, ValueError) as exc:
        print(f"error: {args.input}: {exc}", file=sys.stderr)
        return 1
    print(f"wrote {args.output}", file=sys.stderr)
    return 0


def _cmd_batch(args: argparse.Namespace) -> int:
    cfg = _resolve_config(args)
    in_dir = Path(args.input_dir)
    if not in_dir.is_dir():
        print(f"error: {in_dir} is not a directory", file=sys.stderr)
        return 1
    paths = sorted(
        (p for p in in_dir.iterdir() if p.suffix.lower() in _INPUT_SUFFIXES),
        key=lambda p: p.name,
    )
    summary = run_batch(paths, cfg, args.output_dir, jobs=args.jobs)
    for r in summary.results:
        status = "ok" if r.ok else f"failed ({r.error})"
        print(f"{r.path.name}: {status} [{r.seconds:.2f}s]", file=sys.stderr)
    done = len(summary.results) - summary.failed
    print(f"{done}/{len(summary.results)} succeeded", file=sys.stderr)
    return 1 if summary.failed else 0


def _cmd_metrics(args: argparse.Namespace) -> int:
    try:
        a = load_image(args.image_a)
        b = load_image(args.image_b)
        report = MetricReport(mse=mse(a, b), psnr_db=psnr(a, b),
                              ssim=ssim(a, b, channels=args.ssim_channels))
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(report.to_json())
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="acce",
        description="Underwater image enhancement: adaptive color and contrast correction.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_enhance = sub.add_parser("enhance", help="enhance a single image")
    p_enhance.add_argument("input", help="input image (PNG or P6 PPM)")
    p_enhance.add_argument("-o", "--output", required=True, help="output image path")
    _add_config_flags(p_enhance)
    p_enhance.set_defaults(func=_cmd_enhance)

    p_batch = sub.add_parser("batch", help="enhance every image in a directory")
    p_batch.add_argument("input_dir", help="directory of PNG/PPM images")
    p_batch.add_argument("-o", "--output-dir", required=True, help="output directory")
    p_batch.add_argument("--jobs", type=int, default=1, help="parallel workers (default 1)")
    _add_config_flags(p_batch)
    p_batch.set_defaults(func=_cmd_batch)

    p_metrics = sub.add_parser("metrics", help="print mse/psnr/ssim of two images as JSON")
    p_metrics.add_argument("image_a")
    p_metrics.add_argument("image_b")
    p_metrics.add_argument("--ssim-channels", choices=("luma", "rgb"), default="luma",
                           help="ssim on channel-mean luma (default) or per-channel average")
    p_metrics.set_defaults(func=_cmd_metrics)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "command", None) in ("enhance", "batch"):
        try:
            return args.func(args)
        except ValueError as exc:
            # bad option values from flags or config file
            print(f"usage error: {exc}", file=sys.stderr)
            return 2
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
