"""
The two entangled families
==========================

Build the (2,3)- and (2,5)-entangled families, look at their gcd form and
exceptional primes, and check that the j-map matches the Weierstrass model.
"""

# %%
from entangle_census import builtin, j_invariant, jmap_value
from entangle_census.family import sigma_invariants

F1 = builtin("F1")
F2 = builtin("F2")

for spec in (F1, F2):
    print(spec.name, spec.entanglement)
    print("  A  =", spec.A)
    print("  B  =", spec.B)
    print("  C  =", spec.C, " d =", spec.d, " r =", spec.r)
    print("  exceptional primes:", sorted(spec.sigma))

# %%
# The four invariants whose prime divisors make up the exceptional set.
# Discriminants are taken in the ``lc * Disc`` convention.
for label, value in zip(["Res_v", "Res_u", "Disc_v", "Disc_u"], sigma_invariants(F1.A0, F1.B0, F1.C)):
    print(f"{label:7s} {value}")

# %%
# A member of the family and its j-invariant, computed two ways.
a, b = 3, 2
A, B = F1.model(a, b)
print(f"y^2 = x^3 + ({A}) x + ({B})")
print(j_invariant(A, B), jmap_value(F1, a, b))
