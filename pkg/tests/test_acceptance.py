"""Acceptance criteria 1-10. Each test prints one ``CRITERION n: PASS|FAIL`` line.

The lines are also collected and repeated in the pytest terminal summary.
Criterion 10 needs the live LMFDB API and only runs with ENTANGLE_NETWORK=1.
"""
import math
import os
import random
import time
from fractions import Fraction
from math import gcd, isqrt

import pytest
import sympy

from entangle_census.area import area_grid, area_polar, half_disk
from entangle_census.family import builtin, j_invariant, jmap_value, sigma_invariants
from entangle_census.lattice import count_summary, enumerate_F, height_H
from entangle_census.lmfdb import LmfdbClient
from entangle_census.localdensity import (
    F1_C,
    GOLDEN_DENSITIES,
    count_roots_modp,
    density_closed,
    density_def,
    density_via_C,
    exclusion_table,
    r_formula_F1,
)
from entangle_census.predict import fit_exponent

RESULTS: list[str] = []


def report(n: int, ok: bool, detail: str, seconds: float, limit: float) -> None:
    ok = ok and seconds < limit
    line = f"CRITERION {n}: {'PASS' if ok else 'FAIL'}  {detail}  [{seconds:.2f}s, limit {limit:g}s]"
    RESULTS.append(line)
    print(line)
    assert ok, line


def test_criterion_01_sigma_and_invariants():
    t0 = time.perf_counter()
    F1, F2 = builtin("F1"), builtin("F2")
    inv = sigma_invariants(F1.A0, F1.B0, F1.C)
    want = (-(2 ** 12) * 3 ** 10, 2 ** 10 * 3 ** 8, 2 ** 16 * 3 ** 9, 2 ** 20 * 3 ** 12)
    ok = inv == want and F1.sigma == {2, 3} and F2.sigma == {2, 3, 5}
    report(1, ok, f"F1 invariants {inv}, sigma F1 {sorted(F1.sigma)}, F2 {sorted(F2.sigma)}",
           time.perf_counter() - t0, 1)


def test_criterion_02_table_reproduction():
    t0 = time.perf_counter()
    F1 = builtin("F1")
    t2 = exclusion_table(F1, 2)["total"]
    t3 = exclusion_table(F1, 3)["total"]
    d2 = density_def(F1, 2, "scan").value
    d3 = density_def(F1, 3, "scan").value
    ok = t2 == (2048, 2048) and t3 == (177147, 354294) and d2 == Fraction(1, 2) and d3 == Fraction(2, 3)
    report(2, ok, f"excluded {t2[0]}/4096 (d_2={d2}), {t3[0]}/531441 (d_3={d3})", time.perf_counter() - t0, 10)


def test_criterion_03_triple_density_agreement():
    t0 = time.perf_counter()
    parts, ok = [], True
    for name in ("F1", "F2"):
        spec = builtin(name)
        for ell in (7, 11):
            vals = (
                density_def(spec, ell, "structured").value,
                density_via_C(spec, ell).value,
                density_closed(spec, ell).value,
            )
            ok &= len(set(vals)) == 1
            parts.append(f"{name}/{ell}={vals[0]}")
    report(3, ok, "; ".join(parts), time.perf_counter() - t0, 120)


def test_criterion_04_legendre_formula():
    t0 = time.perf_counter()
    primes = list(sympy.primerange(5, 1000))
    mism = [p for p in primes if r_formula_F1(p) != count_roots_modp(F1_C, p)]
    rmax = max(count_roots_modp(F1_C, p) for p in primes)
    report(4, not mism and rmax <= 4, f"{len(primes)} primes, mismatches {mism}, max r = {rmax}",
           time.perf_counter() - t0, 5)


def test_criterion_05_F2_exceptional_densities():
    F2 = builtin("F2")
    t0 = time.perf_counter()
    vals, ok = {}, True
    for ell in (2, 3, 5):
        scan = density_def(F2, ell, "scan").value
        fast = density_def(F2, ell, "structured").value
        vals[ell] = scan
        ok &= scan == fast == GOLDEN_DENSITIES[("F2", ell)] and 0 < scan < 1
    first = time.perf_counter() - t0
    t1 = time.perf_counter()
    cached = {ell: density_closed(F2, ell).value for ell in (2, 3, 5)}
    warm = time.perf_counter() - t1
    ok &= cached == vals and warm < 1
    detail = ", ".join(f"d_{k}={v}" for k, v in vals.items()) + f"; cached lookup {warm:.3f}s"
    report(5, ok, detail, first, 600)


def test_criterion_06_area_oracles(synthetic):
    t0 = time.perf_counter()
    parts, ok = [], True
    for spec in [builtin("F1"), builtin("F2")] + synthetic:
        p, g = area_polar(spec), area_grid(spec, 4096)
        diff = abs(p.value - g.value)
        good = diff <= p.err + g.err and diff <= 0.005 * p.value
        ok &= good
        parts.append(f"{spec.name} {p.value:.8f}/{g.value:.8f}")
    hd = area_polar(half_disk())
    ok &= abs(hd.value - math.pi / 2) <= max(hd.err, 1e-12)
    parts.append(f"half-disk {hd.value:.12f}")
    report(6, ok, "; ".join(parts), time.perf_counter() - t0, 60)


def test_criterion_07_davenport():
    t0 = time.perf_counter()
    parts, ok = [], True
    for name, lo, hi in (("F1", 36, 45), ("F2", 48, 60)):
        spec = builtin(name)
        ar = area_polar(spec).value
        dev = []
        for e in (lo, hi):
            X = 10 ** e
            nF = sum(1 for _ in enumerate_F(spec, X))
            dev.append(abs(nF / (ar * 10 ** (2 * e / spec.d)) - 1))
        ok &= dev[1] <= 0.05 and dev[1] < dev[0]
        parts.append(f"{name} dev {dev[0]:.4f}@1e{lo} -> {dev[1]:.4f}@1e{hi}")
    report(7, ok, "; ".join(parts), time.perf_counter() - t0, 120)


def test_criterion_08_exponent_fit():
    t0 = time.perf_counter()
    parts, ok = [], True
    for name, exps in (("F1", range(27, 46, 3)), ("F2", range(36, 61, 4))):
        spec = builtin(name)
        pts = [(10.0 ** e, sum(1 for _ in enumerate_F(spec, 10 ** e))) for e in exps]
        fit = fit_exponent(pts)
        target = 2 / spec.d
        ok &= abs(fit.slope - target) <= 0.1 * target
        parts.append(f"{name} slope {fit.slope:.4f} vs {target:.4f}")
    synth = fit_exponent([(10.0 ** k, 3.0 * (10.0 ** k) ** 0.125) for k in range(1, 40, 3)])
    ok &= abs(synth.slope - 0.125) <= 1e-12
    parts.append(f"synthetic slope error {abs(synth.slope - 0.125):.1e}")
    report(8, ok, "; ".join(parts), time.perf_counter() - t0, 120)


def _md_by_scan(A: int, B: int) -> int:
    g = gcd(A, B)
    return max(m for m in range(1, isqrt(isqrt(g)) + 1) if A % m ** 4 == 0 and B % m ** 6 == 0)


def _naive_box(spec, X: int) -> set:
    s = 2 * math.ceil(X ** (1.0 / spec.d)) + 2
    return {(a, b) for b in range(1, s + 1) for a in range(-s, s + 1) if height_H(spec, a, b) <= X}


def test_criterion_09_per_curve_invariants(synthetic, records_F1, records_F2):
    t0 = time.perf_counter()
    rng = random.Random(2024)
    parts, ok = [], True
    for name, X, recs in (("F1", 10 ** 45, records_F1), ("F2", 10 ** 60, records_F2)):
        spec = builtin(name)
        members = [r for r in recs if r.in_C]
        sample = rng.sample(members, 200)
        for r in sample:
            A, B = spec.model(r.a, r.b)
            ok &= gcd(r.a, r.b) == 1
            ok &= _md_by_scan(A, B) == 1
            ok &= 4 * A ** 3 + 27 * B ** 2 != 0
            ok &= j_invariant(A, B) == jmap_value(spec, r.a, r.b)
        parts.append(f"{name}: 200 of {len(members)} members verified")
    boxes = 0
    for spec in [builtin("F1"), builtin("F2")] + synthetic:
        X = 10 ** 6
        got = {(r.a, r.b) for r in enumerate_F(spec, X)}
        ok &= got == _naive_box(spec, X)
        boxes += len(got)
    parts.append(f"naive box oracle at X=1e6 agrees ({boxes} pairs over 5 families)")
    report(9, ok, "; ".join(parts), time.perf_counter() - t0, 60)


@pytest.mark.network
def test_criterion_10_lmfdb_spot_check(tmp_path):
    if os.environ.get("ENTANGLE_NETWORK") != "1":
        line = "CRITERION 10: SKIP  network-gated; set ENTANGLE_NETWORK=1 to query the LMFDB API"
        RESULTS.append(line)
        print(line)
        pytest.skip("set ENTANGLE_NETWORK=1 to query the LMFDB API")
    t0 = time.perf_counter()
    ainvs = [0, -1, 0, -1033, -12438]
    live = LmfdbClient(cache_dir=tmp_path).lookup_by_ainvs(ainvs)
    replay = LmfdbClient(cache_dir=tmp_path, offline=True).lookup_by_ainvs(ainvs)
    ok = live is not None and live.label == "100a3" and replay == live
    report(10, ok, f"label {live.label if live else None}, offline replay {'ok' if replay == live else 'failed'}",
           time.perf_counter() - t0, 120)
