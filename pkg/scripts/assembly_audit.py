#!/usr/bin/env python3
"""Audit the assembled star product for one algebra: every generator type,
its coefficient under both weight sources, and the verified-zero loop types.

Usage: python3 scripts/assembly_audit.py [algebra] [order]
"""

import sys

from dqw.kontsevich import assemble_linear_star
from dqw.liealg import builtin_algebra


def main() -> int:
    name = sys.argv[1] if len(sys.argv) > 1 else "heisenberg"
    order = int(sys.argv[2]) if len(sys.argv) > 2 else 4
    c = builtin_algebra(name)
    asm = assemble_linear_star(c, order, weight_source="integral")
    print(f"algebra={name} dim={c.dim} order={order}")
    print(f"{'n':>2}  {'omega':>10}  {'source':<10}  {'sym':>5}  graph / words")
    for row in asm.rows:
        words = ",".join(row.words)
        print(f"{row.n:>2}  {str(row.omega):>10}  {row.source:<10}  {row.symmetry:>5}  {row.graph}  [{words}]")
    if asm.uncovered:
        print("\nintegral engine does not normalise:")
        for text in asm.uncovered:
            print(f"  {text}")
    print(f"\nloop types verified zero (n <= {min(order, 3)}): {len(asm.loop_rows)}")
    hausdorff = assemble_linear_star(c, order, weight_source="hausdorff")
    same = asm.star.operator == hausdorff.star.operator
    print(f"integral-source operator == hausdorff-source operator: {same}")
    return 0 if same else 1


if __name__ == "__main__":
    sys.exit(main())
