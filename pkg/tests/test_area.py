import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from entangle_census.area import (
    SyntheticRegion,
    area_grid,
    area_polar,
    h_form,
    half_disk,
    height_comparison_constants,
    height_values,
    polar_radius,
    region_extent,
)
from entangle_census.lattice import height_H


@pytest.mark.parametrize("d", [2, 6, 12, 18])
def test_half_disk_is_pi_over_two(d):
    est = area_polar(half_disk(d))
    assert abs(est.value - math.pi / 2) <= max(est.err, 1e-12)
    assert isinstance(est.value, float)


def test_half_disk_grid():
    est = area_grid(half_disk(), 512)
    assert abs(est.value - math.pi / 2) <= est.err


def test_ellipse_area():
    # H = (u^2/4 + v^2)^(d/2): half ellipse with semi-axes 2 and 1
    reg = SyntheticRegion("ellipse", 4, lambda u, v: (u * u / 4 + v * v) ** 2)
    assert abs(area_polar(reg).value - math.pi) < 1e-9


@settings(max_examples=30, deadline=None)
@given(st.integers(-50, 50), st.integers(1, 50))
def test_float_height_matches_exact(a, b):
    from entangle_census.family import builtin

    for name in ("F1", "F2"):
        spec = builtin(name)
        h, err = height_values(spec, float(a), float(b), with_error=True)
        exact = height_H(spec, a, b)
        assert abs(float(h) - exact) <= float(err) + 1e-300


def test_F1_F2_areas(F1, F2):
    assert abs(area_polar(F1).value - 0.22606105419) < 1e-9
    assert abs(area_polar(F2).value - 0.43099384732) < 1e-9


def test_extent_bounds_region(F1):
    ru, rv = region_extent(F1)
    th = np.linspace(0, math.pi, 5001)
    r = polar_radius(F1, th)
    assert np.all(np.abs(r * np.cos(th)) <= ru * (1 + 1e-12))
    assert np.all(r * np.sin(th) <= rv * (1 + 1e-12))


def test_h_form_positive(F1):
    assert np.all(h_form(F1, np.linspace(0, math.pi, 100)) > 0)


def test_degenerate_region_rejected():
    reg = SyntheticRegion("bad", 2, lambda u, v: v * v)  # vanishes at theta = 0
    with pytest.raises(ValueError):
        h_form(reg, np.array([0.0, 1.0]))


def test_comparison_constants_half_disk():
    c1, c2 = height_comparison_constants(half_disk(4))
    assert c1 <= 1 <= c2 and c2 - c1 < 1e-6


def test_comparison_constants_bracket_samples(F1):
    c1, c2 = height_comparison_constants(F1)
    assert 0 < c1 < c2
    for a, b in [(1, 1), (-7, 3), (100, 1), (1, 100)]:
        ratio = height_H(F1, a, b) / float(F1.C(a, b)) ** (F1.d / F1.r)
        assert c1 <= ratio <= c2


def test_tolerance_validation(F1):
    with pytest.raises(ValueError):
        area_polar(F1, tol=0)
    with pytest.raises(ValueError):
        area_grid(F1, 8)
