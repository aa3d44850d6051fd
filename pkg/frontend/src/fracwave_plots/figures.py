"""Figure construction from solver output CSVs.

Six figure kinds over the fixed column contracts of the run artifacts:

    profile        snapshot_t<T>.csv     (x,u)
    waterfall      several snapshots stacked with time offsets
    linf-series    diag.csv              (t,...,linf,...)
    drift-series   diag.csv              drift_I2 on a log axis
    spectrum       spectrum_t<T>.csv     (k,modulus), log modulus axis
    phase-diagram  phase.csv             (alpha,delta,outcome,end_time)

Rendering never recomputes physics; it is a pure function of the input
files and options, and with pinned renderer versions the emitted image
bytes are reproducible (fixed hash salt, no date metadata).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
matplotlib.rcParams["svg.hashsalt"] = "fracwave-plots"

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

KINDS = ("profile", "waterfall", "linf-series", "spectrum",
         "drift-series", "phase-diagram")

_OUTCOME_COLORS = {
    "smooth": "#7fbf7f",
    "blow-up": "#e06060",
    "aborted": "#e0a860",
    "error": "#b0b0b0",
}


class SchemaError(ValueError):
    """An input file does not match its column contract."""


@dataclass(frozen=True)
class FigureSpec:
    kind: str
    output: Path
    inputs: dict
    axes: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown figure kind {self.kind!r}; "
                             f"choose from {KINDS}")


def load_figure_spec(path) -> FigureSpec:
    try:
        import tomllib
    except ModuleNotFoundError:
        import tomli as tomllib
    path = Path(path)
    with open(path, "rb") as fh:
        doc = tomllib.load(fh)
    if "kind" not in doc or "output" not in doc:
        raise ValueError(f"{path}: figure spec needs 'kind' and 'output'")
    base = path.parent
    inputs = {k: _resolve(base, v) for k, v in doc.get("inputs", {}).items()}
    return FigureSpec(kind=doc["kind"],
                      output=(base / doc["output"]).resolve(),
                      inputs=inputs,
                      axes=doc.get("axes", {}))


def _resolve(base: Path, value):
    if isinstance(value, list):
        return [_resolve(base, v) for v in value]
    if isinstance(value, str):
        return str((base / value).resolve())
    return value


def _read_columns(path, columns):
    """Read named columns from a headered CSV, validating the contract."""
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"{path}: no such input file")
    with open(path) as fh:
        header = fh.readline().strip()
        rows = [line.strip() for line in fh if line.strip()]
    names = header.split(",")
    for col in columns:
        if col not in names:
            raise SchemaError(f"{path}: missing column {col!r} "
                              f"(found {names})")
    if not rows:
        raise SchemaError(f"{path}: no data rows")
    try:
        table = np.array([[float(tok) for tok in row.split(",")[:len(names)]]
                          for row in rows if _numeric_row(row)])
    except ValueError as exc:
        raise SchemaError(f"{path}: unparsable numeric data ({exc})") from exc
    if table.size == 0 or table.shape[1] != len(names):
        raise SchemaError(f"{path}: ragged or empty numeric table")
    return tuple(table[:, names.index(col)] for col in columns)


def _numeric_row(row):
    head = row.split(",", 1)[0]
    try:
        float(head)
        return True
    except ValueError:
        return False


def _read_phase(path):
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"{path}: no such input file")
    lines = [l.strip() for l in path.read_text().splitlines() if l.strip()]
    if not lines:
        raise SchemaError(f"{path}: empty file")
    names = lines[0].split(",")
    for col in ("alpha", "delta", "outcome"):
        if col not in names:
            raise SchemaError(f"{path}: missing column {col!r} (found {names})")
    if len(lines) == 1:
        raise SchemaError(f"{path}: no data rows")
    ia, id_, io = names.index("alpha"), names.index("delta"), names.index("outcome")
    cells = []
    for line in lines[1:]:
        toks = line.split(",")
        cells.append((float(toks[ia]), float(toks[id_]), toks[io]))
    return cells


def _new_axes(axes_opts):
    figsize = axes_opts.get("figsize", (6.4, 4.8))
    fig, ax = plt.subplots(figsize=tuple(figsize),
                           dpi=axes_opts.get("dpi", 120))
    return fig, ax


def _apply_axes(ax, opts, default_xlabel, default_ylabel, default_title):
    ax.set_xlabel(opts.get("xlabel", default_xlabel))
    ax.set_ylabel(opts.get("ylabel", default_ylabel))
    ax.set_title(opts.get("title", default_title))
    if "xlim" in opts:
        ax.set_xlim(tuple(opts["xlim"]))
    if "ylim" in opts:
        ax.set_ylim(tuple(opts["ylim"]))
    ax.grid(True, alpha=0.3)


def build_figure(spec: FigureSpec):
    """Build the matplotlib Figure for a spec (render() saves it)."""
    builder = {
        "profile": _build_profile,
        "waterfall": _build_waterfall,
        "linf-series": _build_linf,
        "drift-series": _build_drift,
        "spectrum": _build_spectrum,
        "phase-diagram": _build_phase,
    }[spec.kind]
    return builder(spec)


def _require_input(spec, key):
    if key not in spec.inputs:
        raise ValueError(f"{spec.kind} figure needs inputs.{key}")
    return spec.inputs[key]


def _build_profile(spec):
    x, u = _read_columns(_require_input(spec, "snapshot"), ("x", "u"))
    fig, ax = _new_axes(spec.axes)
    ax.plot(x, u, lw=1.0, color="#1f4e8c")
    _apply_axes(ax, spec.axes, "x", "u", "wave profile")
    return fig


def _build_waterfall(spec):
    paths = _require_input(spec, "snapshots")
    times = spec.inputs.get("times", list(range(len(paths))))
    if len(times) != len(paths):
        raise ValueError("waterfall needs one time per snapshot")
    series = [_read_columns(p, ("x", "u")) for p in paths]
    span = max(float(np.max(np.abs(u))) for _, u in series)
    offset = spec.axes.get("offset", 1.1 * span)
    fig, ax = _new_axes(spec.axes)
    ordered = sorted(zip(times, series), key=lambda pair: pair[0])
    for level, (t, (x, u)) in enumerate(ordered):
        ax.plot(x, u + level * offset, lw=0.9, color="#1f4e8c")
        ax.annotate(f"t={t:g}", xy=(x[-1], level * offset),
                    xytext=(4, 0), textcoords="offset points",
                    fontsize=8, va="center")
    _apply_axes(ax, spec.axes, "x", "u (stacked by time)", "wave evolution")
    return fig


def _build_linf(spec):
    t, linf = _read_columns(_require_input(spec, "diagnostics"), ("t", "linf"))
    fig, ax = _new_axes(spec.axes)
    ax.plot(t, linf, lw=1.2, color="#8c2d1f")
    _apply_axes(ax, spec.axes, "t", "max |u|", "amplitude history")
    return fig


def _build_drift(spec):
    t, drift = _read_columns(_require_input(spec, "diagnostics"),
                             ("t", "drift_I2"))
    fig, ax = _new_axes(spec.axes)
    positive = drift > 0
    if spec.axes.get("log_y", True) and np.any(positive):
        ax.semilogy(t[positive], drift[positive], lw=1.2, color="#1f8c4e")
    else:
        ax.plot(t, drift, lw=1.2, color="#1f8c4e")
    _apply_axes(ax, spec.axes, "t", "relative I2 drift", "invariant drift")
    return fig


def _build_spectrum(spec):
    k, modulus = _read_columns(_require_input(spec, "spectrum"),
                               ("k", "modulus"))
    fig, ax = _new_axes(spec.axes)
    positive = modulus > 0
    ax.semilogy(k[positive], modulus[positive], lw=0.8, color="#4e1f8c")
    _apply_axes(ax, spec.axes, "k", "|uhat(k)|", "spectral modulus")
    return fig


def _build_phase(spec):
    cells = _read_phase(_require_input(spec, "phase"))
    alphas = sorted({c[0] for c in cells})
    deltas = sorted({c[1] for c in cells})
    lookup = {(a, d): o for a, d, o in cells}
    fig, ax = _new_axes(spec.axes)
    for i, a in enumerate(alphas):
        for j, d in enumerate(deltas):
            outcome = lookup.get((a, d), "error")
            color = _OUTCOME_COLORS.get(outcome, "#b0b0b0")
            ax.add_patch(plt.Rectangle((j, i), 1, 1, facecolor=color,
                                       edgecolor="white"))
            ax.text(j + 0.5, i + 0.5, outcome, ha="center", va="center",
                    fontsize=9)
    ax.set_xlim(0, len(deltas))
    ax.set_ylim(0, len(alphas))
    ax.set_xticks([j + 0.5 for j in range(len(deltas))],
                  [f"{d:g}" for d in deltas])
    ax.set_yticks([i + 0.5 for i in range(len(alphas))],
                  [f"{a:g}" for a in alphas])
    ax.set_xlabel(spec.axes.get("xlabel", "initial amplitude"))
    ax.set_ylabel(spec.axes.get("ylabel", "fractional order"))
    ax.set_title(spec.axes.get("title", "run outcomes"))
    return fig


def render(spec: FigureSpec) -> Path:
    """Render a figure spec to its output path (PNG or SVG)."""
    fig = build_figure(spec)
    out = Path(spec.output)
    out.parent.mkdir(parents=True, exist_ok=True)
    suffix = out.suffix.lower()
    if suffix not in (".png", ".svg"):
        plt.close(fig)
        raise ValueError(f"output must be .png or .svg, got {out.name!r}")
    metadata = {"Date": None} if suffix == ".svg" else None
    fig.savefig(out, metadata=metadata)
    plt.close(fig)
    return out
