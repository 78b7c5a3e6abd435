"""Regenerate the synthetic fixture CSVs shipped in src/onebit_cdg/data/."""
from pathlib import Path

from onebit_cdg.datasets import FIXTURES, synthetic_trace, write_trace_csv

DATA = Path(__file__).resolve().parents[1] / "src" / "onebit_cdg" / "data"

if __name__ == "__main__":
    for kind in FIXTURES:
        out = DATA / f"{kind}_fixture.csv"
        write_trace_csv(out, synthetic_trace(kind))
        print(out)
