"""Render study figures from sevfdr CSV outputs.

Pure file-to-file transformation: parse, validate the schema, draw. No
statistics are recomputed here.
"""

from __future__ import annotations

import csv
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

STUDY1_COLUMNS = ["R", "beta_star_glfdr", "beta_star_lfdr"]
STUDY2_COLUMNS = ["pi11", "procedure", "c_l", "c_u", "mfdr_star", "mfnr", "mfnr_star"]

# color-coding of the three procedures (red = severity-weighted oracle,
# blue = constant-severity oracle, green = p-value rule)
PROCEDURE_COLORS = {
    "glfdr_oracle": "red",
    "suncai_oracle": "blue",
    "pvalue_oracle": "green",
}
PROCEDURE_LABELS = {
    "glfdr_oracle": "severity-weighted oracle",
    "suncai_oracle": "constant-severity oracle",
    "pvalue_oracle": "p-value oracle",
}


class SchemaError(Exception):
    """The CSV does not match the expected study schema."""


def read_table(path: str, required: list[str]) -> dict[str, list[str]]:
    """Parse a study CSV into columns, ignoring # comments; all required
    columns must be present."""
    with open(path, newline="") as fh:
        rows = [r for r in csv.reader(line for line in fh if not line.startswith("#"))
                if r]
    if not rows:
        raise SchemaError(f"{path}: empty file, expected columns {required}")
    header = [c.strip() for c in rows[0]]
    missing = [c for c in required if c not in header]
    if missing:
        raise SchemaError(f"{path}: missing columns {missing} (found {header})")
    table: dict[str, list[str]] = {c: [] for c in header}
    for lineno, row in enumerate(rows[1:], start=2):
        if len(row) != len(header):
            raise SchemaError(f"{path}:{lineno}: expected {len(header)} cells, "
                              f"got {len(row)}")
        for column, cell in zip(header, row):
            table[column].append(cell.strip())
    return table


def _floats(table, column, path):
    try:
        return [float(v) for v in table[column]]
    except ValueError as exc:
        raise SchemaError(f"{path}: column {column} is not numeric: {exc}")


def plot_study1(csv_path: str, out_path: str, fmt: str | None = None) -> Path:
    """Line chart of the two missed-severity curves beta*(R) against R."""
    table = read_table(csv_path, STUDY1_COLUMNS)
    r = _floats(table, "R", csv_path)
    glfdr = _floats(table, "beta_star_glfdr", csv_path)
    lfdr = _floats(table, "beta_star_lfdr", csv_path)

    fig, ax = plt.subplots(figsize=(6, 4.5))
    ax.plot(r, glfdr, color="red", label="severity-weighted ranking")
    ax.plot(r, lfdr, color="green", label="lfdr ranking")
    ax.set_xlabel("rejections R")
    ax.set_ylabel("expected missed severity")
    ax.set_title("Average weighted missed-signal mass by rejection count")
    ax.legend()
    out = _resolve_out(out_path, fmt)
    fig.savefig(out, format=out.suffix.lstrip("."))
    plt.close(fig)
    return out


def _resolve_out(out_path: str, fmt: str | None) -> Path:
    out = Path(out_path)
    if fmt:
        return out.with_suffix(f".{fmt}") if out.suffix.lstrip(".") != fmt else out
    if not out.suffix:
        return out.with_suffix(".svg")
    return out


def _study2_series(table, path):
    pi11 = _floats(table, "pi11", path)
    series: dict[str, dict[str, list[float]]] = {}
    for i, proc in enumerate(table["procedure"]):
        bucket = series.setdefault(proc, {c: [] for c in STUDY2_COLUMNS if c != "procedure"})
        bucket["pi11"].append(pi11[i])
        for column in ("c_l", "c_u", "mfdr_star", "mfnr", "mfnr_star"):
            bucket[column].append(float(table[column][i]))
    for bucket in series.values():
        order = sorted(range(len(bucket["pi11"])), key=bucket["pi11"].__getitem__)
        for column, values in bucket.items():
            bucket[column] = [values[i] for i in order]
    return series


def plot_study2(csv_path: str, out_prefix: str, fmt: str = "svg") -> list[Path]:
    """Three panels: acceptance-region bounds, unweighted and weighted miss
    rates, each against pi11 with one color-coded series per procedure."""
    table = read_table(csv_path, STUDY2_COLUMNS)
    series = _study2_series(table, csv_path)
    outputs = []

    fig, ax = plt.subplots(figsize=(6, 4.5))
    for proc, bucket in series.items():
        color = PROCEDURE_COLORS.get(proc, "black")
        label = PROCEDURE_LABELS.get(proc, proc)
        ax.plot(bucket["pi11"], bucket["c_l"], color=color, label=label)
        ax.plot(bucket["pi11"], bucket["c_u"], color=color)
    ax.set_xlabel("pi11")
    ax.set_ylabel("acceptance-region bounds")
    ax.set_title("Acceptance regions")
    ax.legend()
    outputs.append(_save_panel(fig, out_prefix, "acceptance", fmt))

    for column, title in (("mfnr", "Unweighted miss rate"),
                          ("mfnr_star", "Severity-weighted miss rate")):
        fig, ax = plt.subplots(figsize=(6, 4.5))
        for proc, bucket in series.items():
            ax.plot(bucket["pi11"], bucket[column],
                    color=PROCEDURE_COLORS.get(proc, "black"),
                    label=PROCEDURE_LABELS.get(proc, proc))
        ax.set_xlabel("pi11")
        ax.set_ylabel(column)
        ax.set_title(title)
        ax.legend()
        outputs.append(_save_panel(fig, out_prefix, column, fmt))
    return outputs


def _save_panel(fig, prefix: str, panel: str, fmt: str) -> Path:
    out = Path(f"{prefix}_{panel}.{fmt}")
    fig.savefig(out, format=fmt)
    plt.close(fig)
    return out
