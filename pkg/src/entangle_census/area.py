"""Area of the fundamental region ``{v > 0, H(u, v) <= 1}`` and related constants.

The height form ``H(u, v) = max(4|A(u,v)|^3, 27|B(u,v)|^2)`` is homogeneous of
degree ``d``, so the region is star-shaped about the origin with polar radius
``r(theta) = H(cos theta, sin theta) ** (-1/d)``. The polar area integral is
``int_0^pi r(theta)^2 / 2 dtheta``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Optional

import numpy as np
from scipy.optimize import minimize_scalar

from .family import FamilySpec

EPS = np.finfo(float).eps


@dataclass(frozen=True)
class SyntheticRegion:
    """A degree-``d`` height form given directly as a vectorized callable.

    Used for closed-form test regions (e.g. the half disk) that do not come
    from an integral Weierstrass family. ``gcd_form`` plays the role of
    ``C`` for :func:`height_comparison_constants`.
    """

    name: str
    d: int
    height: Callable
    gcd_form: Optional[Callable] = None
    r: int = 1


@dataclass(frozen=True)
class AreaEstimate:
    value: float
    err: float
    method: str
    evaluations: int

    def to_json(self, family: str) -> dict:
        return {
            "family": family,
            "method": self.method,
            "value": self.value,
            "err": self.err,
            "evaluations": self.evaluations,
        }


def _form_eval(coeffs: tuple, u, v):
    """Float Horner for a binary form plus a running rounding-error bound."""
    cs = [float(c) for c in coeffs]
    n = len(cs) - 1
    acc = np.full(np.shape(u), cs[-1]) if np.ndim(u) else cs[-1]
    mag = np.abs(acc)
    vp = 1.0
    au, av = np.abs(u), np.abs(v)
    avp = 1.0
    for c in reversed(cs[:-1]):
        vp = vp * v
        avp = avp * av
        acc = acc * u + c * vp
        mag = mag * au + abs(c) * avp
    # |fl(P) - P| <= gamma_{2n+2} * sum |c_i| |u|^i |v|^(n-i)
    err = (2 * n + 2) * EPS * mag / (1 - (2 * n + 2) * EPS)
    return acc, err


def height_values(spec, u, v, with_error: bool = False):
    """``H(u, v)`` in floating point, vectorized over ``u, v``."""
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    if isinstance(spec, SyntheticRegion):
        h = np.asarray(spec.height(u, v), dtype=float)
        return (h, np.abs(h) * 4 * EPS) if with_error else h
    A, eA = _form_eval(spec.A.coeffs, u, v)
    B, eB = _form_eval(spec.B.coeffs, u, v)
    h = np.maximum(4.0 * np.abs(A) ** 3, 27.0 * B * B)
    if not with_error:
        return h
    hi = np.maximum(4.0 * (np.abs(A) + eA) ** 3, 27.0 * (np.abs(B) + eB) ** 2)
    return h, (hi - h) + 8 * EPS * h


def h_form(spec, theta):
    """Height form on the unit circle; strictly positive for a valid family."""
    theta = np.asarray(theta, dtype=float)
    h = height_values(spec, np.cos(theta), np.sin(theta))
    if np.any(h <= 0) or not np.all(np.isfinite(h)):
        raise ValueError("height form is not positive on the unit circle; A and B share a real root")
    return h if h.ndim else float(h)


def polar_radius(spec, theta):
    return h_form(spec, theta) ** (-1.0 / spec.d)


def _integrand(spec, theta):
    return 0.5 * polar_radius(spec, theta) ** 2


def _integrand_err(spec, theta):
    theta = np.asarray(theta, dtype=float)
    h, eh = height_values(spec, np.cos(theta), np.sin(theta), with_error=True)
    f = 0.5 * h ** (-2.0 / spec.d)
    # d f / f = -(2/d) d h / h, plus the rounding of pow and the trig calls
    return f, f * ((2.0 / spec.d) * eh / h + 8 * EPS)


def area_polar(spec, tol: float = 1e-9, max_evals: int = 2_000_000, panels: int = 64) -> AreaEstimate:
    """Adaptive Simpson quadrature of the polar area integral over ``(0, pi)``.

    The interval is first cut into ``panels`` equal pieces, each refined
    until its Richardson error estimate is below its share of ``tol``.
    Rounding error in the integrand is added to the reported error.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    a, b = 0.0, math.pi
    edges = np.linspace(a, b, panels + 1)
    evals = 0

    def f(x):
        return float(_integrand(spec, x))

    total = 0.0
    err = 0.0
    for lo, hi in zip(edges[:-1], edges[1:]):
        flo, fmid, fhi = f(lo), f(0.5 * (lo + hi)), f(hi)
        evals += 3
        whole = (hi - lo) / 6 * (flo + 4 * fmid + fhi)
        stack = [(lo, hi, flo, fmid, fhi, whole, tol * (hi - lo) / (b - a), 0)]
        while stack:
            x0, x1, f0, fm, f1, s, eps, depth = stack.pop()
            m = 0.5 * (x0 + x1)
            lm, rm = 0.5 * (x0 + m), 0.5 * (m + x1)
            flm, frm = f(lm), f(rm)
            evals += 2
            if evals > max_evals:
                raise RuntimeError(f"area_polar: tolerance {tol} not reached in {max_evals} evaluations")
            left = (m - x0) / 6 * (f0 + 4 * flm + fm)
            right = (x1 - m) / 6 * (fm + 4 * frm + f1)
            delta = left + right - s
            if abs(delta) <= 15 * eps or depth > 50:
                total += left + right + delta / 15
                err += abs(delta) / 15
            else:
                stack.append((m, x1, fm, frm, f1, right, eps / 2, depth + 1))
                stack.append((x0, m, f0, flm, fm, left, eps / 2, depth + 1))
    # integrand rounding, bounded on a fixed sample and integrated crudely
    xs = np.linspace(a, b, 4097)
    _, fe = _integrand_err(spec, xs)
    err += float(fe.max()) * (b - a)
    return AreaEstimate(float(total), float(err), "polar-adaptive", evals)


@lru_cache(maxsize=64)
def region_extent(spec, samples: int = 20001) -> tuple[float, float]:
    """``(max |u|, max v)`` over the region, from the polar radius.

    Dense sampling followed by bounded local maximization around every
    sampled local maximum.
    """
    th = np.linspace(0.0, math.pi, samples)
    r = polar_radius(spec, th)
    out = []
    for proj in (lambda t: np.abs(np.cos(t)), np.sin):
        g = r * proj(th)
        best = float(g.max())
        idx = np.flatnonzero((g[1:-1] >= g[:-2]) & (g[1:-1] >= g[2:])) + 1
        idx = np.union1d(idx, [int(np.argmax(g))])
        step = th[1] - th[0]
        for i in idx:
            lo, hi = max(th[i] - step, 0.0), min(th[i] + step, math.pi)
            res = minimize_scalar(
                lambda t: -float(polar_radius(spec, t) * proj(t)),
                bounds=(lo, hi),
                method="bounded",
                options={"xatol": 1e-13},
            )
            best = max(best, -float(res.fun))
        out.append(best)
    return out[0], out[1]


def area_grid(spec, n: int = 4096, margin: float = 0.02, strip: int = 256) -> AreaEstimate:
    """Cell-center count on an ``n x n`` grid over the bounding box of the region.

    ``err`` is the total area of cells whose corners and center do not all
    agree on membership, which bounds the error for a region whose boundary
    crosses cells without enclosing small islands.
    """
    if n < 16:
        raise ValueError("grid resolution must be at least 16")
    ru, rv = region_extent(spec)
    U = ru * (1 + margin)
    V = rv * (1 + margin)
    du, dv = 2 * U / n, V / n
    us = np.linspace(-U, U, n + 1)
    inside = 0
    boundary = 0
    for j0 in range(0, n, strip):
        j1 = min(j0 + strip, n)
        vs = np.linspace(j0 * dv, j1 * dv, j1 - j0 + 1)
        cu, cv = np.meshgrid(us, vs)
        corner = height_values(spec, cu, cv) <= 1.0
        cc_u, cc_v = np.meshgrid(0.5 * (us[:-1] + us[1:]), 0.5 * (vs[:-1] + vs[1:]))
        center = (height_values(spec, cc_u, cc_v) <= 1.0) & (cc_v > 0)
        inside += int(center.sum())
        allin = corner[:-1, :-1] & corner[1:, :-1] & corner[:-1, 1:] & corner[1:, 1:] & center
        anyin = corner[:-1, :-1] | corner[1:, :-1] | corner[:-1, 1:] | corner[1:, 1:] | center
        boundary += int((anyin & ~allin).sum())
    cell = du * dv
    return AreaEstimate(float(inside * cell), float(boundary * cell), "grid", (n + 1) ** 2 + n * n)


def _ratio_on_circle(spec, theta):
    theta = np.asarray(theta, dtype=float)
    u, v = np.cos(theta), np.sin(theta)
    h = height_values(spec, u, v)
    if isinstance(spec, SyntheticRegion):
        c = np.asarray(spec.gcd_form(u, v), dtype=float)
        r = spec.r
    else:
        c, _ = _form_eval(spec.C.coeffs, u, v)
        r = spec.r
    if np.any(c <= 0):
        raise ValueError("C vanishes or changes sign on the unit circle")
    return h / c ** (spec.d / r)


def height_comparison_constants(spec, samples: int = 200001, slack: float = 1e-9) -> tuple[float, float]:
    """Bracket ``H / C^(d/r)`` over the plane by its extremes on the half circle.

    The ratio is homogeneous of degree 0 and even under ``(u,v) -> (-u,-v)``,
    so ``[0, pi]`` suffices. Sampled extremes are polished with a bounded
    scalar optimizer and then widened by ``slack`` (relative).
    """
    th = np.linspace(0.0, math.pi, samples)
    g = _ratio_on_circle(spec, th)
    step = th[1] - th[0]
    lo_val, hi_val = float(g.min()), float(g.max())
    for sign, i in ((1.0, int(np.argmin(g))), (-1.0, int(np.argmax(g)))):
        res = minimize_scalar(
            lambda t: sign * float(_ratio_on_circle(spec, t)),
            bounds=(max(th[i] - step, 0.0), min(th[i] + step, math.pi)),
            method="bounded",
            options={"xatol": 1e-14},
        )
        val = sign * float(res.fun)
        lo_val, hi_val = min(lo_val, val), max(hi_val, val)
    return lo_val * (1 - slack), hi_val * (1 + slack)


def half_disk(d: int = 2) -> SyntheticRegion:
    """``H = (u^2 + v^2)^(d/2)``: the region is the upper unit half disk."""
    return SyntheticRegion(
        "half-disk",
        d,
        lambda u, v: (u * u + v * v) ** (d / 2),
        gcd_form=lambda u, v: u * u + v * v,
        r=2,
    )
