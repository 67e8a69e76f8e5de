import json
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from entangle_census.family import builtin
from entangle_census.localdensity import (
    F1_C,
    GOLDEN_DENSITIES,
    c_squared_divides_B,
    count_roots_modp,
    density_closed,
    density_def,
    density_via_C,
    euler_product,
    exclusion_table,
    hensel_lift_count,
    legendre,
    projective_root_count,
    r_formula_F1,
    roots_modp,
    sqrt_mod,
    tail_bound,
)
from entangle_census.poly import HomogeneousPoly, UniPoly

small_odd_primes = st.sampled_from(list(sympy.primerange(3, 400)))


@given(st.integers(-10 ** 6, 10 ** 6), small_odd_primes)
def test_legendre_matches_sympy(a, p):
    expected = 0 if a % p == 0 else sympy.legendre_symbol(a % p, p)
    assert legendre(a, p) == expected


@given(st.integers(0, 10 ** 6), small_odd_primes)
def test_sqrt_mod(a, p):
    r = sqrt_mod(a, p)
    if legendre(a, p) == -1:
        assert r is None
    else:
        assert r * r % p == a % p and 0 <= r <= p // 2


@settings(max_examples=40)
@given(st.lists(st.integers(-20, 20), min_size=2, max_size=4).filter(lambda c: c[-1] % 5 != 0), st.integers(1, 4))
def test_hensel_matches_brute_force(coeffs, k):
    p = UniPoly(coeffs)
    ell = 5
    dp = p.derivative()
    if p.degree < 1 or any(dp(t) % ell == 0 for t in roots_modp(p, ell)):
        return
    brute = sum(1 for t in range(ell ** k) if p(t) % ell ** k == 0)
    assert hensel_lift_count(p, ell, k) == brute


def test_hensel_rejects_multiple_root():
    with pytest.raises(ValueError):
        hensel_lift_count(UniPoly.from_roots([1, 1]), 5, 2)


def test_r_formula_small_primes():
    for ell in sympy.primerange(5, 200):
        assert r_formula_F1(ell) == count_roots_modp(F1_C, ell)
    with pytest.raises(ValueError):
        r_formula_F1(3)


def test_F1_tables():
    t2 = exclusion_table(builtin("F1"), 2)
    assert t2["total"] == (2048, 2048)
    t3 = exclusion_table(builtin("F1"), 3)
    assert t3["total"] == (177147, 531441 - 177147)
    # the l | a, l | b block is always excluded
    for t, ell in ((t2, 2), (t3, 3)):
        assert t["both"][1] == 0 and t["both"][0] == ell ** 10


@pytest.mark.parametrize("name", ["F1", "F2"])
@pytest.mark.parametrize("ell", [2, 3])
def test_scan_matches_structured(name, ell):
    spec = builtin(name)
    assert density_def(spec, ell, "scan").value == density_def(spec, ell, "structured").value


def test_structured_matches_scan_on_synthetic(synthetic, synthetic_c2):
    for spec in synthetic + [synthetic_c2]:
        for ell in (2, 3):
            assert density_def(spec, ell, "scan").value == density_def(spec, ell, "structured").value


def test_known_F1_values():
    F1 = builtin("F1")
    assert density_def(F1, 5).value == Fraction(24, 25)
    assert density_closed(F1, 7).value == Fraction(16452, 16807)


def test_F2_goldens_match_structured_count():
    F2 = builtin("F2")
    for (name, ell), val in GOLDEN_DENSITIES.items():
        assert name == "F2"
        assert density_def(F2, ell, "structured").value == val
        assert 0 < val < 1


@pytest.mark.parametrize("name", ["F1", "F2"])
def test_closed_matches_definition_off_sigma(name):
    spec = builtin(name)
    for ell in sympy.primerange(7, 200):
        assert density_closed(spec, ell).value == density_def(spec, ell, "structured").value


def test_closed_form_requires_C_dividing_B0(synthetic, synthetic_c2):
    assert c_squared_divides_B(synthetic_c2)
    for spec in synthetic:
        assert not c_squared_divides_B(spec)
        with pytest.raises(ValueError):
            density_via_C(spec, 5)
        # the fallback still returns the true density
        for ell in sympy.primerange(5, 40):
            assert density_closed(spec, ell).value == density_def(spec, ell, "structured").value
    for ell in (5, 7):
        assert density_via_C(synthetic_c2, ell).value == density_closed(synthetic_c2, ell).value


def test_via_C_refuses_exceptional_prime():
    with pytest.raises(ValueError):
        density_via_C(builtin("F1"), 3)


def test_projective_root_count_includes_point_at_infinity():
    C = HomogeneousPoly(2, [0, 1, 5])  # 5 u^2 + u v: roots (0:1) and (1:0) mod 5
    assert projective_root_count(C, 5) == 2
    assert projective_root_count(builtin("F1").C, 7) == count_roots_modp(F1_C, 7)


def test_non_prime_rejected():
    with pytest.raises(ValueError):
        density_def(builtin("F1"), 9)


def test_euler_bracket(F1, F2):
    for spec in (F1, F2):
        lo = euler_product(spec, 100)
        hi = euler_product(spec, 1000)
        assert lo.lower <= hi.lower <= hi.upper <= lo.upper
        assert hi.upper - hi.lower <= Fraction(1, 500)
    with pytest.raises(ValueError):
        euler_product(F2, 3)


def test_euler_def_and_closed_agree(F1):
    assert euler_product(F1, 30, "def").partial == euler_product(F1, 30, "closed").partial


@given(st.integers(2, 10 ** 6), st.integers(1, 4))
def test_tail_bound_dominates_prime_sum(z, r):
    # checked on a finite window beyond z; the bound covers the infinite tail
    if z > 2000:
        z = 2000
    s = sum(Fraction(1, p ** 2) + Fraction(r, p ** 4) for p in sympy.primerange(z + 1, z + 3000))
    assert s < tail_bound(z, r)


def test_density_cache_round_trip(tmp_path, monkeypatch, synthetic):
    monkeypatch.setenv("ENTANGLE_CACHE_DIR", str(tmp_path))
    spec = synthetic[1]  # exceptional prime 83 is not stored anywhere
    first = density_closed(spec, 83)
    data = json.loads((tmp_path / "densities.json").read_text())
    assert data["S2:83"] == {"num": str(first.value.numerator), "den": str(first.value.denominator)}
    assert density_closed(spec, 83).value == first.value
