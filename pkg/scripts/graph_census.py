#!/usr/bin/env python3
"""Census of admissible graphs: totals, classification bins, and the
orbit-stabilizer cross-check that symmetry counts over canonical types sum
back to the full enumeration.

Usage: python3 scripts/graph_census.py [max_n]
"""

import sys

from dqw.graphs import canonical_form, classify, enumerate_graphs, symmetry_count


def main() -> int:
    max_n = int(sys.argv[1]) if len(sys.argv) > 1 else 3
    ok = True
    for n in range(max_n + 1):
        total = 0
        bins = {"loop": 0, "sym": 0, "lie": 0, "w": 0}
        types = set()
        for g in enumerate_graphs(n):
            total += 1
            cls = classify(g)
            bins["loop"] += cls.loop
            bins["sym"] += cls.sym_admissible
            bins["lie"] += cls.lie_admissible
            bins["w"] += cls.w_computable
            types.add(canonical_form(g)[0])
        orbit_sum = sum(symmetry_count(t) for t in types)
        match = orbit_sum == total == (n * (n + 1)) ** n
        ok = ok and match
        print(
            f"n={n}: total={total} types={len(types)} orbit_sum={orbit_sum} "
            f"loop={bins['loop']} sym={bins['sym']} lie={bins['lie']} "
            f"w={bins['w']}  {'ok' if match else 'MISMATCH'}"
        )
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
