"""The degrees-of-freedom region, stream plans, and the n -> infinity limit.

All region arithmetic is exact rational: membership tests, the
symmetric corner point, integer stream plans realizing fractional
points, and the total-DoF formula whose value climbs toward NK/2 as
the direction level n grows.
"""

from fractions import Fraction

import realign as ra

K, M, N = 3, 2, 3

print(f"{K} users, {M} tx / {N} rx antennas")
print(f"constraint per user k: {M}*d_k + {N}*max(other d) <= {M * N}")

for point in [(1, 1, 1), (Fraction(6, 5), Fraction(6, 5), Fraction(6, 5)),
              (2, 1, 1), (Fraction(3, 2), 0, 0)]:
    rep = ra.region_report(point, M, N)
    verdict = "inside" if rep["member"] else "OUTSIDE"
    binding = sum(row["binding"] for row in rep["constraints"])
    print(f"  d = {tuple(str(d) for d in point)}: {verdict}"
          + (f" ({binding} constraints tight)" if rep["member"] else ""))

point, total = ra.symmetric_point(K, M, N)
print(f"\nsymmetric corner: d_k = {point[0]} per user, sum {total} "
      f"(every constraint tight)")

plan = ra.stream_plan(point, M)
print(f"stream plan: {plan.rho} channel uses, {plan.dbar} streams per "
      f"antenna -> realizes {tuple(str(d) for d in plan.dof_point(M))}")

n = 3
D, Dp = ra.direction_counts(K, M, N, n)
budget = ra.direction_budget(plan, D, Dp, M, N)
loads = ", ".join(f"{float(row['G']):.3e}" for row in budget["per_user"])
print(f"direction budget at n={n}: per-user loads [{loads}], "
      f"all within budget {float(budget['budget']):.3e}: {budget['all_within']}")

print(f"\ntotal DoF vs direction level (limit NK/2 = {Fraction(N * K, 2)}):")
for level in (1, 2, 4, 8, 16, 64, 256):
    value = ra.total_dof(K, N, level, M)
    print(f"  n={level:4d}: {float(value):8.5f}   (gap {float(ra.dof_gap(K, N, level, M)):.2e})")

print(f"\ntwo-user region polygons (vertices as exact fractions):")
for m, nn in [(1, 1), (2, 3)]:
    vertices = ra.region_vertices_2d(m, nn)
    pretty = ", ".join(f"({x}, {y})" for x, y in vertices)
    print(f"  M={m}, N={nn}: {pretty}")
