"""Render sweep CSVs into static line plots.

Three figure kinds, keyed to the columns the sweep tool emits:

* ``fig1``  - one trapping-vs-detuning curve per temperature, with the
  equilibration-bound value at zero detuning marked on the vertical axis;
* ``fig2``  - trapping (solid) against its correlation upper bound (dashed);
* ``rates`` - the two time-local rates on a logarithmic time axis.

Nothing is recomputed here: the module only draws what the CSV contains,
under a pinned style, so identical input yields identical images.
"""

from __future__ import annotations

import argparse
import csv
import sys
from dataclasses import dataclass
from importlib import resources

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

KINDS = ("fig1", "fig2", "rates")

REQUIRED_COLUMNS = {
    "fig1": ("beta_omega", "delta_over_omega", "trap_measure", "eq_bound_rhs"),
    "fig2": ("delta_over_omega", "trap_measure", "bound_total"),
    "rates": ("gamma_t", "rate_decay", "rate_dephasing"),
}

DEFAULT_LABELS = {
    "fig1": ("detuning / mode frequency", "information trapping"),
    "fig2": ("detuning / mode frequency", "trapping and its upper bound"),
    "rates": ("gamma * t", "rate"),
}


class RenderError(RuntimeError):
    """Raised for unusable input (missing file, empty CSV, missing columns)."""


@dataclass(frozen=True)
class FigureSpec:
    kind: str
    csv_path: str
    out_path: str
    xlabel: str | None = None
    ylabel: str | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise RenderError(f"unknown figure kind {self.kind!r}")


def load_rows(csv_path: str, required) -> list[dict]:
    try:
        with open(csv_path, newline="", encoding="utf-8") as fh:
            reader = csv.DictReader(fh)
            if reader.fieldnames is None:
                raise RenderError(f"{csv_path}: empty file")
            missing = [c for c in required if c not in reader.fieldnames]
            if missing:
                raise RenderError(f"{csv_path}: missing columns {missing}")
            rows = list(reader)
    except OSError as exc:
        raise RenderError(f"cannot read {csv_path}: {exc}") from exc
    if not rows:
        raise RenderError(f"{csv_path}: no data rows")
    return rows


def _floats(rows, column):
    return [float(row[column]) for row in rows]


def _use_style():
    style = resources.files("eqtrap_figures").joinpath("styles/lines.mplstyle")
    plt.style.use(str(style))


def _draw_fig1(ax, rows):
    groups: dict[str, list[dict]] = {}
    for row in rows:
        groups.setdefault(row["beta_omega"], []).append(row)
    for key in sorted(groups, key=float):
        grp = sorted(groups[key], key=lambda r: float(r["delta_over_omega"]))
        x = _floats(grp, "delta_over_omega")
        y = _floats(grp, "trap_measure")
        line, = ax.plot(x, y, label=f"beta*omega = {key}")
        # bound mark on the vertical axis, taken at the smallest detuning
        nearest = min(grp, key=lambda r: abs(float(r["delta_over_omega"])))
        ax.plot([x[0]], [float(nearest["eq_bound_rhs"])], marker="_",
                markersize=14, markeredgewidth=2.0, linestyle="none",
                color=line.get_color())
    ax.legend()


def _draw_fig2(ax, rows):
    rows = sorted(rows, key=lambda r: float(r["delta_over_omega"]))
    x = _floats(rows, "delta_over_omega")
    ax.plot(x, _floats(rows, "trap_measure"), linestyle="-",
            label="trapping")
    ax.plot(x, _floats(rows, "bound_total"), linestyle="--",
            label="correlations + bath shift")
    ax.legend()


def _draw_rates(ax, rows):
    rows = sorted(rows, key=lambda r: float(r["gamma_t"]))
    x = _floats(rows, "gamma_t")
    ax.plot(x, _floats(rows, "rate_decay"), label="relaxation")
    ax.plot(x, _floats(rows, "rate_dephasing"), label="dephasing")
    ax.set_xscale("log")
    ax.legend()


DRAWERS = {"fig1": _draw_fig1, "fig2": _draw_fig2, "rates": _draw_rates}


def build_figure(spec: FigureSpec):
    """Build the matplotlib Figure for a spec (no file output)."""
    rows = load_rows(spec.csv_path, REQUIRED_COLUMNS[spec.kind])
    _use_style()
    fig, ax = plt.subplots()
    DRAWERS[spec.kind](ax, rows)
    xlabel, ylabel = DEFAULT_LABELS[spec.kind]
    ax.set_xlabel(spec.xlabel or xlabel)
    ax.set_ylabel(spec.ylabel or ylabel)
    fig.tight_layout()
    return fig


def render(spec: FigureSpec) -> None:
    fig = build_figure(spec)
    try:
        fig.savefig(spec.out_path)
    finally:
        plt.close(fig)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="render-figures",
        description="Render sweep CSV output into static images.")
    parser.add_argument("--kind", required=True, choices=KINDS)
    parser.add_argument("--in", dest="csv_path", required=True)
    parser.add_argument("--out", dest="out_path", required=True)
    parser.add_argument("--xlabel", default=None)
    parser.add_argument("--ylabel", default=None)
    args = parser.parse_args(argv)
    try:
        render(FigureSpec(args.kind, args.csv_path, args.out_path,
                          args.xlabel, args.ylabel))
    except RenderError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


def entry() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    entry()
