"""Write every plot-ready dataset to ./figure_data as CSV.

The same files come from ``qcool figure figN --out ...``.
"""
from __future__ import annotations

from pathlib import Path

from qcool.figures import FIGURES, run_figure

out = Path("figure_data")
out.mkdir(exist_ok=True)
for name in FIGURES:
    ds = run_figure(name, out / f"{name}.csv")
    print(f"{name}: {len(ds.rows)} rows, columns {', '.join(ds.columns)}")
