"""
Capacity curves against range
=============================

Every curve family of the capacity study is regenerated through the
command-line entry point and written as CSV.
"""

import sys
import tempfile
from pathlib import Path

from airsea_owc.cli import main

outdir = Path(sys.argv[1]) if len(sys.argv) > 1 else Path(tempfile.mkdtemp(prefix="airsea_owc_"))
code = main(["reproduce-figures", "--outdir", str(outdir), "--out", str(outdir / "index.csv")])
print(f"exit status {code}; files in {outdir}:")
for path in sorted(outdir.glob("*.csv")):
    print("  ", path.name)

###############################################################################
# Each file carries its provenance header followed by one row per range.

print((outdir / "capacity_radiance.csv").read_text(encoding="utf-8")[:800])
