"""Orbital-free ring-polymer SCFT for neutral atoms H through Ar.

The solver lives in the compiled ``_core`` module. The CSV readers below are
what downstream plotting code consumes.
"""

import csv
from pathlib import Path

from ._core import (
    DensityProfile,
    RunReport,
    ScfConfig,
    ScfError,
    StageReport,
    atomic_number,
    compare_table,
    default_modes,
    element_symbol,
    load_config,
    parse_density_csv,
    pauli_strength,
    pct_diff,
    reference_table_csv,
    run_element,
    shell_groups,
    shell_peak_count,
    summary_table,
)

DENSITY_COLUMNS = ("r", "n_total", "rad_density")
COMPARISON_COLUMNS = ("symbol", "Z", "binding_here", "paper_scft", "nist", "pct_diff_here", "pct_diff_paper")


def read_density_csv(path):
    """Columns of a ``<sym>_density.csv`` as a dict of float lists."""
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    header = rows[0]
    if tuple(header[:3]) != DENSITY_COLUMNS or not all(h.startswith("n_g") for h in header[3:]):
        raise ValueError(f"{path}: unexpected density header {header}")
    cols = {h: [] for h in header}
    for row in rows[1:]:
        if len(row) != len(header):
            raise ValueError(f"{path}: ragged row {row}")
        for h, v in zip(header, row):
            cols[h].append(float(v))
    return cols


def read_comparison_csv(path):
    """Rows of ``comparison.csv``; empty cells (failed runs) become None."""
    out = []
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if tuple(reader.fieldnames or ()) != COMPARISON_COLUMNS:
            raise ValueError(f"{path}: unexpected comparison header {reader.fieldnames}")
        for row in reader:
            rec = {"symbol": row["symbol"], "Z": int(row["Z"])}
            for key in COMPARISON_COLUMNS[2:]:
                rec[key] = float(row[key]) if row[key] else None
            out.append(rec)
    return out


def write_outputs(reports, profiles, out_dir):
    """Write the files the CLI writes: per-element JSON and density CSV plus comparison.csv."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    for rep, prof in zip(reports, profiles):
        (out / f"{rep.symbol}_report.json").write_text(rep.to_json() + "\n")
        if rep.converged:
            (out / f"{rep.symbol}_density.csv").write_text(prof.to_csv())
    (out / "comparison.csv").write_text(compare_table(list(reports)))
    return out


__all__ = [
    "DensityProfile",
    "RunReport",
    "ScfConfig",
    "ScfError",
    "StageReport",
    "atomic_number",
    "compare_table",
    "default_modes",
    "element_symbol",
    "load_config",
    "parse_density_csv",
    "pauli_strength",
    "pct_diff",
    "read_comparison_csv",
    "read_density_csv",
    "reference_table_csv",
    "run_element",
    "shell_groups",
    "shell_peak_count",
    "summary_table",
    "write_outputs",
]
