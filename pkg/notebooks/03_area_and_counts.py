"""
Area of the fundamental region and lattice counts
=================================================

The number of (a, b) with H(a, b) <= X grows like Area(R) X^(2/d). Compute
the area two ways, then enumerate and compare.
"""

# %%
import numpy as np

from entangle_census import builtin
from entangle_census.area import area_grid, area_polar, region_extent
from entangle_census.lattice import count_summary, enumerate_F

F1 = builtin("F1")

polar = area_polar(F1)
grid = area_grid(F1, 1024)
print("polar:", polar.value, "+/-", polar.err)
print("grid :", grid.value, "+/-", grid.err)
print("extent (max|u|, max v):", region_extent(F1))

# %%
# Counts along a height ladder. ``count_C`` keeps the coprime, nonsingular,
# globally minimal members.
for e in range(30, 46, 5):
    X = 10 ** e
    recs = list(enumerate_F(F1, X))
    cs = count_summary(F1, X, recs)
    scaled = cs.count_F / (polar.value * 10 ** (2 * e / F1.d))
    print(f"X=1e{e}: F={cs.count_F:6d} D={cs.count_D:6d} C={cs.count_C:6d}  F/(Area X^(1/9)) = {scaled:.4f}")

# %%
# A few of the smallest-height members.
recs = sorted(enumerate_F(F1, 10 ** 30), key=lambda r: r.H)[:5]
print(np.array([[r.a, r.b, r.md] for r in recs]))
