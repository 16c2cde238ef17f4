"""Render paper-style figures from harness result directories.

The renderer is read-only over result directories and performs no statistics:
density curves, gradient grids, and summary values all come from the harness's
own CSV/JSON tabulations. Each figure kind is deterministic for fixed inputs.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

SPARTA_STYLE = {"color": "tab:blue", "linestyle": "-", "label": "SPARTA"}
GCANS_STYLE = {"color": "tab:red", "linestyle": "--", "label": "gCANS"}

FIGURE_KINDS = ("fig1", "fig2", "fig3", "fig4", "fig5")


class SchemaError(ValueError):
    """An input file is missing or does not match the harness schema."""


@dataclass(frozen=True)
class FigureSpec:
    kind: str
    in_dir: Path
    out_path: Path

    def __post_init__(self):
        if self.kind not in FIGURE_KINDS:
            raise SchemaError(f"unknown figure kind {self.kind!r}")


def read_columns(path: Path, required: list[str]) -> dict[str, np.ndarray]:
    if not path.is_file():
        raise SchemaError(f"missing input file {path}")
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        fields = reader.fieldnames or []
        for column in required:
            if column not in fields:
                raise SchemaError(f"missing column {column!r} in {path}")
        rows = list(reader)
    if not rows:
        raise SchemaError(f"no data rows in {path}")
    return {c: np.array([float(r[c]) for r in rows]) for c in required}


def read_json(path: Path, required: list[str]) -> dict:
    if not path.is_file():
        raise SchemaError(f"missing input file {path}")
    payload = json.loads(path.read_text())
    for key in required:
        if key not in payload:
            raise SchemaError(f"missing key {key!r} in {path}")
    return payload


def trial_files(in_dir: Path, method: str) -> list[Path]:
    files = [
        p for p in sorted(in_dir.glob(f"{method}_seed*.csv"))
        if p.stem.removeprefix(f"{method}_seed").isdigit()
    ]
    return files


def _plot_trials(ax, in_dir: Path) -> None:
    for method, style in (("sparta", SPARTA_STYLE), ("gcans", GCANS_STYLE)):
        files = trial_files(in_dir, method)
        if not files:
            raise SchemaError(f"no {method} trial CSVs in {in_dir}")
        for i, path in enumerate(files):
            cols = read_columns(path, ["cumulative_shots", "exact_cost"])
            kwargs = dict(style)
            if i > 0:
                kwargs["label"] = None  # one legend entry per method
            ax.plot(cols["cumulative_shots"], cols["exact_cost"],
                    alpha=0.8, linewidth=1.2, **kwargs)
    ax.set_xlabel("cumulative shots")
    ax.set_ylabel("exact cost")
    ax.legend()


def render_fig1(in_dir: Path):
    """Whitened-statistic histograms with harness-tabulated density overlays."""
    densities = read_columns(
        in_dir / "densities.csv", ["x", "chi2_pdf", "noncentral_chi2_pdf"]
    )
    fig, axes = plt.subplots(1, 2, figsize=(9, 3.6))
    panels = (
        ("plateau_stats.csv", "chi2_pdf", "plateau"),
        ("informative_stats.csv", "noncentral_chi2_pdf", "informative"),
    )
    for ax, (name, density, title) in zip(axes, panels):
        stats = read_columns(in_dir / name, ["s"])["s"]
        ax.hist(stats, bins=40, density=True, color="lightgray",
                edgecolor="gray", label="samples")
        mask = (densities["x"] >= stats.min() * 0.5) & (densities["x"] <= stats.max() * 1.1)
        ax.plot(densities["x"][mask], densities[density][mask],
                color="tab:blue", label="model density")
        ax.set_title(title)
        ax.set_xlabel("whitened statistic s")
        ax.legend()
    axes[0].set_ylabel("density")
    fig.tight_layout()
    return fig


def render_fig2(in_dir: Path):
    """Cost-vs-shots overlays for every TFIM seed and both methods."""
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    _plot_trials(ax, in_dir)
    ax.set_title("TFIM comparison")
    fig.tight_layout()
    return fig


def render_fig3(in_dir: Path):
    """Synthetic-plateau convergence with the global minimum marked."""
    diagnostics = read_json(in_dir / "diagnostics.json", ["global_minimum"])
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    _plot_trials(ax, in_dir)
    ax.axhline(diagnostics["global_minimum"], color="tab:orange",
               linestyle="--", label="global minimum")
    ax.set_title("synthetic plateau escape")
    ax.legend()
    fig.tight_layout()
    return fig


def render_fig4(in_dir: Path):
    """Gradient-magnitude heatmap with optimizer trajectories overlaid."""
    grid = read_columns(in_dir / "gradient_grid.csv", ["x", "y", "log10_grad_norm"])
    xs = np.unique(grid["x"])
    ys = np.unique(grid["y"])
    if xs.size * ys.size != grid["x"].size:
        raise SchemaError("gradient_grid.csv is not a rectangular grid")
    z = grid["log10_grad_norm"].reshape(ys.size, xs.size)
    landscape = read_json(in_dir / "landscape.json", ["theta_star"])
    star = landscape["theta_star"]

    fig, ax = plt.subplots(figsize=(6.0, 5.2))
    mesh = ax.pcolormesh(xs, ys, z, shading="auto", cmap="viridis")
    fig.colorbar(mesh, ax=ax, label="log10 |grad f|")
    for method, style in (("sparta", SPARTA_STYLE), ("gcans", GCANS_STYLE)):
        paths = [
            p for p in sorted(in_dir.glob(f"{method}_seed*_path.csv"))
        ]
        if not paths:
            raise SchemaError(f"no {method} trajectory CSVs in {in_dir}")
        for i, path in enumerate(paths):
            cols = read_columns(path, ["x", "y"])
            ax.plot(cols["x"], cols["y"], color=style["color"],
                    linestyle=style["linestyle"], linewidth=1.4,
                    label=style["label"] if i == 0 else None)
    ax.plot([star[0]], [star[1]], marker="*", markersize=14,
            color="white", markeredgecolor="black", linestyle="none",
            label="global minimum")
    ax.set_xlabel("theta[0]")
    ax.set_ylabel("theta[1]")
    ax.set_title("gradient landscape (first two coordinates)")
    ax.legend(loc="upper right")
    fig.tight_layout()
    return fig


def render_fig5(in_dir: Path):
    """2x2 grid of per-size TFIM comparisons."""
    size_dirs = sorted(in_dir.glob("size_n*"),
                       key=lambda p: int(p.name.removeprefix("size_n")))
    if not size_dirs:
        raise SchemaError(f"no size_n* result directories in {in_dir}")
    fig, axes = plt.subplots(2, 2, figsize=(9.6, 7.2))
    flat = axes.ravel()
    for ax, sub in zip(flat, size_dirs):
        _plot_trials(ax, sub)
        n = sub.name.removeprefix("size_n")
        ax.set_title(f"n = {n} qubits")
        meta = read_json(sub / "meta.json", ["ground_energy"])
        ax.axhline(meta["ground_energy"], color="tab:orange", linestyle=":",
                   linewidth=1.0)
    for ax in flat[len(size_dirs):]:
        ax.set_axis_off()
    fig.tight_layout()
    return fig


_RENDERERS = {
    "fig1": render_fig1,
    "fig2": render_fig2,
    "fig3": render_fig3,
    "fig4": render_fig4,
    "fig5": render_fig5,
}

_RASTER = {".png"}
_VECTOR = {".pdf", ".svg"}


def sibling_output(out_path: Path) -> Path:
    """Companion file so every render produces raster and vector output."""
    if out_path.suffix in _VECTOR:
        return out_path.with_suffix(".png")
    return out_path.with_suffix(".pdf")


def render(spec: FigureSpec) -> list[Path]:
    """Render one figure kind; writes the requested file plus its raster or
    vector companion and returns the written paths."""
    fig = _RENDERERS[spec.kind](Path(spec.in_dir))
    outputs = [spec.out_path, sibling_output(spec.out_path)]
    spec.out_path.parent.mkdir(parents=True, exist_ok=True)
    for path in outputs:
        fig.savefig(path, dpi=150)
    plt.close(fig)
    return outputs
