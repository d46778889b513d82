#!/usr/bin/env python3
"""Print the five-formula table for all partitions up to the given bounds.

Usage: python scripts/gt_formula_table.py [--max-parts 3] [--max-part 3]

Columns: the two volume product/sum forms and the Kostant-weighted volume,
then the three lattice-point counts.  All values are exact; the run aborts
if any row disagrees.
"""

import argparse

from gtflow.flow import kostant
from gtflow.gt import (
    build_G_lambda,
    enumerate_gt_points,
    gt_points_lidskii,
    gt_volume_lidskii,
    gt_volume_product,
    gt_volume_shsyt,
    weyl_dimension,
)
from gtflow.verify import partitions


def main() -> None:
    ap = argparse.ArgumentParser()
    ap.add_argument("--max-parts", type=int, default=3)
    ap.add_argument("--max-part", type=int, default=3)
    args = ap.parse_args()

    header = f"{'lambda':<16}{'vol':>8}{'vol(N)':>8}{'vol(K)':>8}{'pts':>7}{'pts(K)':>7}{'pts(#)':>7}"
    print(header)
    print("-" * len(header))
    for lam in partitions(args.max_parts, args.max_part):
        v1 = gt_volume_product(lam)
        v2 = gt_volume_shsyt(lam)
        v3 = gt_volume_lidskii(lam)
        p1 = weyl_dimension(lam)
        p2 = gt_points_lidskii(lam)
        p3 = len(enumerate_gt_points(lam))
        assert v1 == v2 == v3 and p1 == p2 == p3, lam
        if len(lam) >= 2:
            assert kostant(build_G_lambda(lam).network) == p1, lam
        print(f"{str(lam):<16}{str(v1):>8}{str(v2):>8}{str(v3):>8}{p1:>7}{p2:>7}{p3:>7}")
    print("all rows agree")


if __name__ == "__main__":
    main()
