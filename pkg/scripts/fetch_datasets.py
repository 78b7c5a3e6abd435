"""Fetch the real temperature traces used for the sea/lab comparisons.

Intel Berkeley lab: downloads ``data.txt.gz`` and writes the temperature of
mote 1 on 2004-03-02 to ``intel_lab_mote1_20040302.csv``.

NOAA TAO CTD (7.0N, 180W, 2008-03-29): the delivery site is form driven, so
this script only prints where to get it.  Export the temperature column to
CSV and point ``onebit-cdg --input FILE --column NAME`` at it.
"""
import argparse
import gzip
import io
import urllib.request
from pathlib import Path

INTEL_URL = "http://db.csail.mit.edu/labdata/data.txt.gz"
NOAA_URL = "http://tao.noaa.gov/refreshed/ctd_delivery.php"


def fetch_intel(out_dir, mote="1", day="2004-03-02"):
    with urllib.request.urlopen(INTEL_URL, timeout=60) as resp:
        raw = gzip.decompress(resp.read())
    out = Path(out_dir) / f"intel_lab_mote{mote}_{day.replace('-', '')}.csv"
    kept = 0
    with out.open("w") as fh:
        fh.write("time,temperature_c\n")
        # columns: date time epoch moteid temperature humidity light voltage
        for line in io.TextIOWrapper(io.BytesIO(raw), encoding="ascii", errors="replace"):
            parts = line.split()
            if len(parts) >= 5 and parts[0] == day and parts[3] == mote:
                fh.write(f"{parts[1]},{parts[4]}\n")
                kept += 1
    print(f"wrote {kept} readings to {out}")


def main():
    parser = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--out-dir", default=".")
    args = parser.parse_args()
    fetch_intel(args.out_dir)
    print(f"NOAA CTD data: request station 7.0N 180W, 2008-03-29 from {NOAA_URL}")


if __name__ == "__main__":
    main()
