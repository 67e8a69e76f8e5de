"""
Predicted versus actual counts
==============================

Combine the Euler product and the area into the leading constant, compare
with the census, and fit the growth exponent.
"""

# %%
from entangle_census import builtin
from entangle_census.predict import ratio_table, verify_paper

for name, ladder in (("F1", [10 ** e for e in range(27, 46, 3)]), ("F2", [10 ** e for e in range(36, 61, 4)])):
    spec = builtin(name)
    rep = ratio_table(spec, ladder, z=100)
    print(f"{name}: constant in [{rep.constant[0]:.6f}, {rep.constant[1]:.6f}]")
    for row in rep.rows:
        j = row.to_json()
        print(f"  X=1e{len(j['X']) - 1:2d}  #C={j['count_C']:6d}  predicted {j['pred_lo']:.1f}..{j['pred_hi']:.1f}  ratio {j['ratio']:.4f}")
    fit = rep.exponent_fit
    print(f"  slope {fit.slope:.4f} (expected {2 / spec.d:.4f})")

# %%
# Re-derive every published exact value and report each check.
for c in verify_paper(builtin("F1"), jmap_samples=200).checks:
    print("PASS" if c.passed else "FAIL", c.name, c.detail)
