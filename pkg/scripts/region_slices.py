"""Vertex lists of two-rate slices for plotting.

For one channel spec, fixes every rate except R1 and R2 at the given value
and writes the achievable and outer slice polygons (counterclockwise) as
CSV. No plotting is done here.
"""

import argparse
import csv
import sys
from fractions import Fraction
from pathlib import Path

from cyclic_ic.achievable import achievable_region
from cyclic_ic.io import load_spec
from cyclic_ic.outer import outer_region
from cyclic_ic.polytope import enumerate_vertices, remove_redundant


def slice_vertices(cs, fixed):
    sys_ = remove_redundant(cs.to_system())
    if fixed:
        sys_ = sys_.fix(fixed)
    return enumerate_vertices(sys_)


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("spec")
    ap.add_argument("--db", action="store_true")
    ap.add_argument("--fixed-rate", type=Fraction, default=Fraction(0),
                    help="value (bits) for every rate beyond R2")
    ap.add_argument("--out", default="results/slices")
    args = ap.parse_args()

    r = load_spec(args.spec, args.db)
    fixed = {f"R{i + 1}": str(args.fixed_rate) for i in range(2, r.K)}
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for name, cs in (("achievable", achievable_region(r)), ("outer", outer_region(r))):
        verts = slice_vertices(cs, fixed)
        with open(out / f"{name}_slice.csv", "w", newline="") as f:
            w = csv.writer(f)
            w.writerow(["R1", "R2"])
            w.writerows([float(x) for x in v] for v in verts)
        print(f"{name}: {len(verts)} vertices -> {out / f'{name}_slice.csv'}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
