"""End-to-end enhancement pipeline and the batch driver.

One image passes through: bilateral smooth (low frequency), band-pass
residual (high frequency), optional soft-threshold denoising of the
residual, guide construction by per-channel stretch, the contrast solve
in HSI space seeded from the guide, and recombination of the enhanced
low component with the residual.
"""

from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path

from . import report
from .decompose import FilterParams, bilateral_filter, dog_filter, recombine
from .denoise import ThresholdSpec, soft_threshold
from .guide import build_guide
from .imagecore import RgbImage, hsi_to_rgb, load_image, rgb_to_hsi, save_image
from .nonlocal_ops import KernelSpec
from .solver import SolverParams, TraceCallback, solve_state

__all__ = [
    "PipelineConfig",
    "FileResult",
    "BatchSummary",
    "enhance",
    "run_batch",
    "config_to_options",
    "config_from_options",
]


@dataclass(frozen=True)
class PipelineConfig:
    """Everything one enhancement run depends on."""

    solver: SolverParams = SolverParams()
    filters: FilterParams = FilterParams()
    threshold: ThresholdSpec = ThresholdSpec()
    lam: float = 2.3
    denoise_enabled: bool = True
    init_mode: str = "guide"
    spread_mode: str = "std"
    dump_dir: "str | Path | None" = None

    def __post_init__(self) -> None:
        if self.lam <= 0:
            raise ValueError("lam must be positive")
        if self.init_mode not in ("guide", "lowfreq"):
            raise ValueError(f"unknown init_mode {self.init_mode!r}")
        if self.spread_mode not in ("std", "var"):
            raise ValueError(f"unknown spread_mode {self.spread_mode!r}")


def enhance(img: RgbImage, cfg: PipelineConfig, on_iteration: TraceCallback | None = None) -> RgbImage:
    """Enhance one image; deterministic for a fixed image and config."""
    fp = cfg.filters
    low = RgbImage(*(bilateral_filter(p, fp) for p in img.planes()))
    high_raw = tuple(dog_filter(p, fp) for p in img.planes())
    if cfg.denoise_enabled:
        high = tuple(soft_threshold(d, cfg.threshold.resolve(d)) for d in high_raw)
    else:
        high = high_raw

    guide_img = build_guide(low, cfg.lam, cfg.spread_mode)
    init = guide_img if cfg.init_mode == "guide" else rgb_to_hsi(low)

    trace_rows: list[report.TraceRow] = []

    def record(iteration: int, value: float, delta: "float | None") -> None:
        trace_rows.append((iteration, value, delta))
        if on_iteration is not None:
            on_iteration(iteration, value, delta)

    state = solve_state(guide_img, init, cfg.solver, record)
    enhanced_low = hsi_to_rgb(state.current)
    out = recombine(enhanced_low, high, fp.gain)

    if cfg.dump_dir is not None:
        directory = Path(cfg.dump_dir)
        directory.mkdir(parents=True, exist_ok=True)
        report.dump_rgb(low, directory, "low_frequency")
        report.dump_residual(high_raw, directory, "high_frequency")
        report.dump_guide(guide_img, directory, "guide")
        report.write_energy_trace(trace_rows, directory / "energy_trace.csv")
        report.render_energy_figure(trace_rows, directory / "energy_trace.png")
        lines = [f"{key}={value}" for key, value in config_to_options(cfg).items()]
        (directory / "config.txt").write_text("\n".join(lines) + "\n", encoding="ascii")
    return out


@dataclass(frozen=True)
class FileResult:
    """Outcome of one batch item."""

    path: Path
    output: "Path | None"
    ok: bool
    seconds: float
    error: "str | None" = None


@dataclass(frozen=True)
class BatchSummary:
    """Per-file outcomes, in input order."""

    results: tuple[FileResult, ...] = field(default_factory=tuple)

    @property
    def failed(self) -> int:
        return sum(1 for r in self.results if not r.ok)


def _enhance_file(path: Path, cfg: PipelineConfig, out_dir: Path) -> FileResult:
    started = time.perf_counter()
    try:
        if cfg.dump_dir is not None:
            cfg = replace(cfg, dump_dir=Path(cfg.dump_dir) / path.stem)
        img = load_image(path)
        out = enhance(img, cfg)
        target = out_dir / path.name
        save_image(out, target)
    except Exception as exc:  # keep the batch alive, record the failure
        return FileResult(path=path, output=None, ok=False,
                          seconds=time.perf_counter() - started, error=str(exc))
    return FileResult(path=path, output=target, ok=True,
                      seconds=time.perf_counter() - started)


def run_batch(paths, cfg: PipelineConfig, out_dir, jobs: int = 1) -> BatchSummary:
    """Enhance every path into out_dir; failures are recorded, not raised.

    Inputs are processed in sorted-filename order and a summary.csv with
    per-file status and timing is written next to the outputs. Output
    files keep their input names.
    """
    if jobs < 1:
        raise ValueError("jobs must be >= 1")
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    ordered = sorted((Path(p) for p in paths), key=lambda p: p.name)

    if jobs == 1 or len(ordered) <= 1:
        results = [_enhance_file(p, cfg, out_dir) for p in ordered]
    else:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(lambda p: _enhance_file(p, cfg, out_dir), ordered))

    lines = ["file,status,seconds,error"]
    for r in results:
        message = (r.error or "").replace(",", ";").replace("\n", " ")
        lines.append(f"{r.path.name},{'ok' if r.ok else 'failed'},{r.seconds:.3f},{message}")
    (out_dir / "summary.csv").write_text("\n".join(lines) + "\n", encoding="utf-8")
    return BatchSummary(results=tuple(results))


def config_to_options(cfg: PipelineConfig) -> dict:
    """Flatten a config to the key=value options the CLI understands."""
    threshold = "auto" if cfg.threshold.mode == "auto" else repr(cfg.threshold.value)
    return {
        "alpha": repr(cfg.solver.alpha),
        "beta": repr(cfg.solver.beta),
        "sigma": repr(cfg.solver.sigma),
        "dt": repr(cfg.solver.dt),
        "tau": repr(cfg.solver.tau),
        "max_iters": str(cfg.solver.max_iters),
        "kernel": cfg.solver.kernel.kind,
        "spatial_sigma": repr(cfg.solver.kernel.spatial_sigma),
        "window_radius": str(cfg.solver.kernel.window_radius),
        "exact": "true" if cfg.solver.exact_mode else "false",
        "lambda": repr(cfg.lam),
        "denoise": "true" if cfg.denoise_enabled else "false",
        "threshold": threshold,
        "gain": repr(cfg.filters.gain),
        "bilateral_spatial": repr(cfg.filters.bilateral_spatial_sigma),
        "bilateral_range": repr(cfg.filters.bilateral_range_sigma),
        "bilateral_radius": str(cfg.filters.bilateral_radius),
        "dog_sigma1": repr(cfg.filters.dog_sigma1),
        "dog_sigma2": repr(cfg.filters.dog_sigma2),
        "init": cfg.init_mode,
        "spread": cfg.spread_mode,
    }


def _as_bool(raw: str, key: str) -> bool:
    lowered = raw.strip().lower()
    if lowered in ("true", "1", "yes", "on"):
        return True
    if lowered in ("false", "0", "no", "off"):
        return False
    raise ValueError(f"option {key} expects a boolean, got {raw!r}")


_KERNEL_NAMES = {"inverse": "inverse_distance", "inverse_distance": "inverse_distance",
                 "gaussian": "gaussian"}


def config_from_options(options: dict, base: "PipelineConfig | None" = None) -> PipelineConfig:
    """Apply flat key=value options on top of a base config.

    Unknown keys raise ValueError; values are validated by the parameter
    containers they land in.
    """
    cfg = base if base is not None else PipelineConfig()
    solver = dict(
        alpha=cfg.solver.alpha, beta=cfg.solver.beta, sigma=cfg.solver.sigma,
        dt=cfg.solver.dt, tau=cfg.solver.tau, max_iters=cfg.solver.max_iters,
        exact_mode=cfg.solver.exact_mode,
    )
    kernel = dict(
        kind=cfg.solver.kernel.kind,
        spatial_sigma=cfg.solver.kernel.spatial_sigma,
        window_radius=cfg.solver.kernel.window_radius,
    )
    filters = dict(
        bilateral_spatial_sigma=cfg.filters.bilateral_spatial_sigma,
        bilateral_range_sigma=cfg.filters.bilateral_range_sigma,
        bilateral_radius=cfg.filters.bilateral_radius,
        dog_sigma1=cfg.filters.dog_sigma1, dog_sigma2=cfg.filters.dog_sigma2,
        gain=cfg.filters.gain,
    )
    top = dict(lam=cfg.lam, denoise_enabled=cfg.denoise_enabled,
               init_mode=cfg.init_mode, spread_mode=cfg.spread_mode,
               dump_dir=cfg.dump_dir)
    threshold = cfg.threshold

    for key, raw in options.items():
        raw = str(raw).strip()
        name = key.strip().lower().replace("-", "_")
        if name == "alpha":
            solver["alpha"] = float(raw)
        elif name == "beta":
            solver["beta"] = float(raw)
        elif name == "sigma":
            solver["sigma"] = float(raw)
        elif name == "dt":
            solver["dt"] = float(raw)
        elif name == "tau":
            solver["tau"] = float(raw)
        elif name == "max_iters":
            solver["max_iters"] = int(raw)
        elif name == "exact":
            solver["exact_mode"] = _as_bool(raw, name)
        elif name == "kernel":
            if raw not in _KERNEL_NAMES:
                raise ValueError(f"unknown kernel {raw!r}; use inverse or gaussian")
            kernel["kind"] = _KERNEL_NAMES[raw]
        elif name == "spatial_sigma":
            kernel["spatial_sigma"] = float(raw)
        elif name == "window_radius":
            kernel["window_radius"] = int(raw)
        elif name == "lambda":
            top["lam"] = float(raw)
        elif name == "denoise":
            top["denoise_enabled"] = _as_bool(raw, name)
        elif name == "threshold":
            if raw.lower() == "auto":
                threshold = ThresholdSpec(mode="auto")
            else:
                threshold = ThresholdSpec(mode="fixed", value=float(raw))
        elif name == "gain":
            filters["gain"] = float(raw)
        elif name == "bilateral_spatial":
            filters["bilateral_spatial_sigma"] = float(raw)
        elif name == "bilateral_range":
            filters["bilateral_range_sigma"] = float(raw)
        elif name == "bilateral_radius":
            filters["bilateral_radius"] = int(raw)
        elif name == "dog_sigma1":
            filters["dog_sigma1"] = float(raw)
        elif name == "dog_sigma2":
            filters["dog_sigma2"] = float(raw)
        elif name == "init":
            top["init_mode"] = raw
        elif name == "spread":
            top["spread_mode"] = raw
        elif name == "dump_dir":
            top["dump_dir"] = raw or None
        else:
            raise ValueError(f"unknown option {key!r}")

    return PipelineConfig(
        solver=SolverParams(kernel=KernelSpec(**kernel), **solver),
        filters=FilterParams(**filters),
        threshold=threshold,
        **top,
    )
