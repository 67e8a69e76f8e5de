"""Heights, minimality defects and exact enumeration of family members.

For a family ``(A, B)`` the pairs ``(a, b)`` with ``b > 0`` and
``H(a, b) = max(|4A(a,b)^3|, |27B(a,b)^2|) <= X`` lie in the dilate
``X^(1/d) * R`` of the fundamental region, so a box of side ``~X^(1/d)``
contains all of them. Each row ``b`` of the box is screened in floating
point with a rigorous error bound and the survivors are checked exactly.
"""
from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import IO, Iterable, Iterator, Optional

import numpy as np
from sympy import factorint, primerange

from .area import _form_eval, height_values, region_extent
from .family import FamilySpec

_SMALL_PRIMES = list(primerange(2, 10_000))


@dataclass(frozen=True)
class CurveRecord:
    a: int
    b: int
    Aval: int
    Bval: int
    H: int
    md: int
    coprime: bool
    nonsingular: bool

    @property
    def in_C(self) -> bool:
        return self.coprime and self.nonsingular and self.md == 1

    @property
    def in_D(self) -> bool:
        return self.coprime and self.md == 1

    def to_row(self) -> dict:
        return {
            "a": self.a,
            "b": self.b,
            "A": str(self.Aval),
            "B": str(self.Bval),
            "H": str(self.H),
            "md": self.md,
            "in_C": self.in_C,
        }

    @classmethod
    def from_row(cls, row: dict) -> "CurveRecord":
        a, b = int(row["a"]), int(row["b"])
        A, B = int(row["A"]), int(row["B"])
        return cls(
            a=a,
            b=b,
            Aval=A,
            Bval=B,
            H=int(row["H"]),
            md=int(row["md"]),
            coprime=gcd(a, b) == 1,
            nonsingular=4 * A ** 3 + 27 * B ** 2 != 0,
        )


@dataclass(frozen=True)
class CountSummary:
    X: int
    count_F: int
    count_D: int
    count_C: int
    distinct_models: int

    def __post_init__(self):
        assert self.count_C <= self.count_D <= self.count_F
        assert self.distinct_models <= self.count_C


def model_height(Aval: int, Bval: int) -> int:
    return max(abs(4 * Aval ** 3), 27 * Bval ** 2)


def height_H(spec: FamilySpec, a: int, b: int) -> int:
    """Exact ``H(a, b)`` for the family."""
    return model_height(spec.A(a, b), spec.B(a, b))


def _prime_exponent(n: int, p: int) -> int:
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return k


def _fourth_power_primes(g: int, e: int) -> list[int]:
    """Primes ``p`` with ``p**e | g`` (``g > 0``)."""
    out = []
    rem = g
    for p in _SMALL_PRIMES:
        if p ** e > rem:
            return out
        if rem % p == 0:
            k = _prime_exponent(rem, p)
            rem //= p ** k
            if k >= e:
                out.append(p)
    # cofactor has no prime below 10^4; only large prime powers can remain
    if rem > 1:
        out.extend(p for p, k in factorint(rem).items() if k >= e)
    return out


def minimality_defect(Aval: int, Bval: int) -> int:
    """Largest ``m`` with ``m^4 | A`` and ``m^6 | B``.

    A zero coefficient imposes no condition. Only primes whose fourth power
    divides ``gcd(A, B)`` (sixth power of ``B`` when ``A = 0``) can contribute.
    """
    if Aval == 0 and Bval == 0:
        raise ValueError("minimality defect undefined for A = B = 0")
    if Aval == 0:
        g, e = abs(Bval), 6
    elif Bval == 0:
        g, e = abs(Aval), 4
    else:
        g, e = gcd(Aval, Bval), 4
    m = 1
    for p in _fourth_power_primes(g, e):
        ka = _prime_exponent(Aval, p) // 4 if Aval else None
        kb = _prime_exponent(Bval, p) // 6 if Bval else None
        k = min(x for x in (ka, kb) if x is not None)
        m *= p ** k
    return m


def curve_height(Aval: int, Bval: int) -> int:
    """Height of the minimal model, ``H(A, B) / md(A, B)^12``."""
    m = minimality_defect(Aval, Bval)
    q, r = divmod(model_height(Aval, Bval), m ** 12)
    assert r == 0
    return q


def _root_d(X: int, d: int) -> float:
    return math.exp(math.log(X) / d)


def bounding_box(spec, X: int, margin: float = 0.01) -> tuple[int, int]:
    """``(a_max, b_max)`` with every ``(a, b)``, ``H(a,b) <= X``, in ``|a| <= a_max, 1 <= b <= b_max``.

    Raises if the height form fails to exceed ``X`` on a sampled box boundary.
    """
    if X < 1:
        raise ValueError("X must be at least 1")
    ru, rv = region_extent(spec)
    s = _root_d(X, spec.d)
    a_max = math.ceil((1 + margin) * s * ru)
    b_max = math.ceil((1 + margin) * s * rv)
    # boundary audit in normalized coordinates: H(u/s, v/s) > 1 off the box
    t = np.linspace(0.0, 1.0, 2001)
    ua, vb = (a_max + 0.5) / s, (b_max + 0.5) / s
    pts_u = np.concatenate([-ua + 2 * ua * t, np.full_like(t, ua), np.full_like(t, -ua)])
    pts_v = np.concatenate([np.full_like(t, vb), vb * t, vb * t])
    keep = pts_v > 0
    h = height_values(spec, pts_u[keep], pts_v[keep])
    if not np.all(h > 1.0):
        raise ValueError("bounding box audit failed: height form not positive definite on the circle")
    return a_max, b_max


def _row_candidates(spec: FamilySpec, b: int, a_max: int, X: int) -> np.ndarray:
    """``a`` values in row ``b`` whose height is not provably above ``X``."""
    a = np.arange(-a_max, a_max + 1, dtype=float)
    bb = np.full_like(a, float(b))
    A, eA = _form_eval(spec.A.coeffs, a, bb)
    B, eB = _form_eval(spec.B.coeffs, a, bb)
    lo_A = np.maximum(np.abs(A) - eA, 0.0)
    lo_B = np.maximum(np.abs(B) - eB, 0.0)
    with np.errstate(over="ignore"):
        h_lo = np.maximum(4.0 * lo_A ** 3, 27.0 * lo_B ** 2) * (1 - 1e-12)
    return np.flatnonzero(h_lo <= float(X)) - a_max


def make_record(spec: FamilySpec, a: int, b: int) -> CurveRecord:
    A, B = spec.A(a, b), spec.B(a, b)
    return CurveRecord(
        a=a,
        b=b,
        Aval=A,
        Bval=B,
        H=model_height(A, B),
        md=minimality_defect(A, B) if (A or B) else 0,
        coprime=gcd(a, b) == 1,
        nonsingular=4 * A ** 3 + 27 * B ** 2 != 0,
    )


def _scan_rows(spec: FamilySpec, X: int, a_max: int, b_lo: int, b_hi: int) -> list[CurveRecord]:
    out = []
    for b in range(b_lo, b_hi + 1):
        for a in _row_candidates(spec, b, a_max, X):
            a = int(a)
            A, B = spec.A(a, b), spec.B(a, b)
            if model_height(A, B) <= X:
                out.append(make_record(spec, a, b))
    return out


def enumerate_F(spec: FamilySpec, X: int, workers: int = 1, chunk: Optional[int] = None) -> Iterator[CurveRecord]:
    """All ``(a, b)``, ``b >= 1``, with ``H(a, b) <= X``, sorted by ``(b, a)``.

    ``workers > 1`` scans disjoint ``b``-ranges in a process pool; chunks are
    concatenated in ``b`` order, so output does not depend on ``workers``.
    """
    X = int(X)
    a_max, b_max = bounding_box(spec, X)
    if workers <= 1 or b_max < 2:
        for b in range(1, b_max + 1):
            yield from _scan_rows(spec, X, a_max, b, b)
        return
    chunk = chunk or max(1, b_max // (4 * workers))
    ranges = [(lo, min(lo + chunk - 1, b_max)) for lo in range(1, b_max + 1, chunk)]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        futs = [pool.submit(_scan_rows, spec, X, a_max, lo, hi) for lo, hi in ranges]
        for f in futs:
            yield from f.result()


def enumerate_C(spec: FamilySpec, X: int, workers: int = 1) -> Iterator[CurveRecord]:
    """Members of ``F(X)`` that are coprime, nonsingular and minimal."""
    return (rec for rec in enumerate_F(spec, X, workers) if rec.in_C)


def in_Dz(rec: CurveRecord, primes: Iterable[int]) -> bool:
    for p in primes:
        if rec.a % p == 0 and rec.b % p == 0:
            return False
        if rec.Aval % p ** 4 == 0 and rec.Bval % p ** 6 == 0:
            return False
    return True


def count_Dz(spec: FamilySpec, X: int, z: int, records: Optional[list[CurveRecord]] = None) -> int:
    """Pairs in ``F(X)`` passing the local coprimality and minimality tests at every prime ``<= z``."""
    primes = list(primerange(2, int(z) + 1))
    recs = records if records is not None else enumerate_F(spec, X)
    return sum(1 for rec in recs if rec.H <= X and in_Dz(rec, primes))


def count_summary(spec: FamilySpec, X: int, records: Optional[list[CurveRecord]] = None) -> CountSummary:
    recs = records if records is not None else list(enumerate_F(spec, X))
    recs = [r for r in recs if r.H <= X]
    C = [r for r in recs if r.in_C]
    return CountSummary(
        X=int(X),
        count_F=len(recs),
        count_D=sum(1 for r in recs if r.in_D),
        count_C=len(C),
        distinct_models=len({(r.Aval, r.Bval) for r in C}),
    )


FIELDS = ["a", "b", "A", "B", "H", "md", "in_C"]


def write_records(stream: Iterable[CurveRecord], sink: IO[str], format: str = "jsonl") -> int:
    """Write records sorted by ``(b, a)``; big integers as decimal strings."""
    recs = sorted(stream, key=lambda r: (r.b, r.a))
    if format == "jsonl":
        for r in recs:
            sink.write(json.dumps(r.to_row()) + "\n")
    elif format == "csv":
        w = csv.DictWriter(sink, fieldnames=FIELDS, lineterminator="\r\n")
        w.writeheader()
        for r in recs:
            row = r.to_row()
            row["in_C"] = "true" if row["in_C"] else "false"
            w.writerow(row)
    else:
        raise ValueError(f"unknown format {format!r}")
    return len(recs)


def read_records(source: IO[str], format: str = "jsonl") -> list[CurveRecord]:
    if format == "jsonl":
        return [CurveRecord.from_row(json.loads(line)) for line in source if line.strip()]
    if format == "csv":
        return [CurveRecord.from_row(row) for row in csv.DictReader(source)]
    raise ValueError(f"unknown format {format!r}")
