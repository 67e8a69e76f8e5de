"""
Local densities and the Euler product
=====================================

The proportion of residue pairs mod l^6 that survive the coprime-and-minimal
conditions, computed by brute force, by a lifting count, and by the closed
form, followed by an exact bracket for the infinite product.
"""

# %%
from sympy import primerange

from entangle_census import builtin
from entangle_census.localdensity import (
    density_closed,
    density_def,
    density_via_C,
    euler_product,
    exclusion_table,
)

F1 = builtin("F1")
F2 = builtin("F2")

# %%
# The mod 2^6 and mod 3^6 tables for F1, split by which of a, b are units.
for ell in (2, 3):
    for case, (excluded, kept) in exclusion_table(F1, ell).items():
        print(f"l={ell} {case:10s} excluded {excluded:7d} kept {kept:7d}")

# %%
# Away from the exceptional primes the three routes agree exactly.
for spec in (F1, F2):
    for ell in primerange(7, 14):
        vals = {density_def(spec, ell, "structured").value, density_closed(spec, ell).value}
        if ell <= 11:
            vals.add(density_via_C(spec, ell).value)
        print(spec.name, ell, vals)

# %%
# Exceptional primes of F2 (the l = 5 scan covers 5^12 pairs and takes a few
# seconds with the structured count).
for ell in (2, 3, 5):
    print("F2", ell, density_def(F2, ell, "structured").value)

# %%
# The product over all primes lies between ``lower`` and ``upper``.
for z in (100, 1000):
    eb = euler_product(F1, z)
    print(f"z={z}: {float(eb.lower):.8f} <= prod d_l <= {float(eb.upper):.8f}")
