"""Run artifacts: intermediate dumps, the energy trace, and its figure.

When a dump directory is requested the pipeline records everything
needed to replay the solve: the exact low- and high-frequency arrays,
the guide planes, the resolved configuration, and the per-iteration
energy trace as CSV. Quick-look PNG previews and a rendered convergence
figure sit alongside the raw data.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np
from matplotlib.backends.backend_agg import FigureCanvasAgg
from matplotlib.figure import Figure

from .imagecore import HsiImage, RgbImage, clamp_unit, hsi_to_rgb, save_image

__all__ = [
    "write_energy_trace",
    "read_energy_trace",
    "render_energy_figure",
    "dump_rgb",
    "dump_residual",
    "dump_guide",
]

TraceRow = tuple[int, float, "float | None"]


def write_energy_trace(rows: list[TraceRow], path) -> None:
    """Write trace rows as CSV lines "iter,energy,delta" (delta may be empty)."""
    lines = ["iter,energy,delta"]
    for iteration, value, delta in rows:
        tail = "" if delta is None else repr(delta)
        lines.append(f"{iteration},{value!r},{tail}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="ascii")


def read_energy_trace(path) -> list[TraceRow]:
    """Parse a trace CSV back into rows."""
    rows: list[TraceRow] = []
    lines = Path(path).read_text(encoding="ascii").strip().splitlines()
    for line in lines[1:]:
        it, value, delta = line.split(",")
        rows.append((int(it), float(value), None if delta == "" else float(delta)))
    return rows


def render_energy_figure(rows: list[TraceRow], path) -> None:
    """Render the energy history to a PNG next to the CSV."""
    iterations = [r[0] for r in rows]
    values = [r[1] for r in rows]
    fig = Figure(figsize=(6.0, 4.0), dpi=110)
    FigureCanvasAgg(fig)
    ax = fig.add_subplot(1, 1, 1)
    ax.plot(iterations, values, marker="o", markersize=3, linewidth=1.2, color="#1f6fb2")
    ax.set_xlabel("iteration")
    ax.set_ylabel("energy")
    ax.set_title("solver convergence")
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path)


def dump_rgb(img: RgbImage, directory: Path, name: str) -> None:
    """Store an RGB image losslessly (.npy) with a PNG preview."""
    np.save(directory / f"{name}.npy", img.to_stack())
    save_image(img, directory / f"{name}.png")


def dump_residual(high: tuple[np.ndarray, ...], directory: Path, name: str) -> None:
    """Store a signed residual losslessly with a mid-gray-offset preview."""
    stack = np.stack(high, axis=-1)
    np.save(directory / f"{name}.npy", stack)
    preview = RgbImage(*(clamp_unit(0.5 + p) for p in high))
    save_image(preview, directory / f"{name}.png")


def dump_guide(guide: HsiImage, directory: Path, name: str) -> None:
    """Store guide HSI planes losslessly with an RGB preview."""
    np.save(directory / f"{name}.npy", np.stack(guide.planes(), axis=-1))
    save_image(hsi_to_rgb(guide), directory / f"{name}.png")
