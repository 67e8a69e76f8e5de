"""Exact integer polynomials in one variable and binary forms.

Everything here works over Python's arbitrary-precision ``int`` and
``fractions.Fraction``; there is no floating point anywhere in this module.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from math import gcd
from typing import Iterable, Sequence


def _strip(coeffs: Iterable) -> tuple:
    c = list(coeffs)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


@dataclass(frozen=True)
class UniPoly:
    """Univariate polynomial, ``coeffs[i]`` is the coefficient of ``t**i``.

    Coefficients are ints (or Fractions for intermediate results). The zero
    polynomial has an empty coefficient tuple.
    """

    coeffs: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _strip(self.coeffs))

    @classmethod
    def from_roots(cls, roots: Sequence[int]) -> "UniPoly":
        p = cls((1,))
        for r in roots:
            p = p * cls((-r, 1))
        return p

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def lc(self):
        return self.coeffs[-1] if self.coeffs else 0

    def is_zero(self) -> bool:
        return not self.coeffs

    def __call__(self, t):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * t + c
        return acc

    def __add__(self, other: "UniPoly") -> "UniPoly":
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (0,) * (n - len(self.coeffs))
        b = other.coeffs + (0,) * (n - len(other.coeffs))
        return UniPoly(x + y for x, y in zip(a, b))

    def __neg__(self) -> "UniPoly":
        return UniPoly(-c for c in self.coeffs)

    def __sub__(self, other: "UniPoly") -> "UniPoly":
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, UniPoly):
            return UniPoly(c * other for c in self.coeffs)
        if self.is_zero() or other.is_zero():
            return UniPoly()
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, x in enumerate(self.coeffs):
            if x:
                for j, y in enumerate(other.coeffs):
                    out[i + j] += x * y
        return UniPoly(out)

    __rmul__ = __mul__

    def derivative(self) -> "UniPoly":
        return UniPoly(i * c for i, c in enumerate(self.coeffs) if i)

    def divmod(self, other: "UniPoly") -> tuple["UniPoly", "UniPoly"]:
        """Division with remainder over the rationals."""
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = [Fraction(c) for c in self.coeffs]
        dq = other.degree
        lc = Fraction(other.lc)
        quot = [Fraction(0)] * max(len(rem) - dq, 0)
        for k in range(len(rem) - 1, dq - 1, -1):
            q = rem[k] / lc
            if q:
                quot[k - dq] = q
                for j, c in enumerate(other.coeffs):
                    rem[k - dq + j] -= q * c
        return UniPoly(_normalize(quot)), UniPoly(_normalize(rem[:dq]))

    def mod(self, ell: int) -> "UniPoly":
        return UniPoly(c % ell for c in self.coeffs)

    def content(self) -> int:
        return reduce(gcd, (int(c) for c in self.coeffs), 0)

    def primitive(self) -> "UniPoly":
        """Integer primitive part with positive leading coefficient."""
        if self.is_zero():
            return self
        den = reduce(_lcm, (Fraction(c).denominator for c in self.coeffs), 1)
        ints = [int(Fraction(c) * den) for c in self.coeffs]
        g = reduce(gcd, ints, 0)
        if ints[-1] < 0:
            g = -g
        return UniPoly(c // g for c in ints)

    def __repr__(self) -> str:
        return f"UniPoly({list(self.coeffs)})"


def _lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


def _normalize(cs):
    # collapse integral Fractions back to int so equality with int polys holds
    return [int(c) if isinstance(c, Fraction) and c.denominator == 1 else c for c in cs]


@dataclass(frozen=True)
class HomogeneousPoly:
    """Binary form of a fixed degree; ``coeffs[i]`` multiplies ``u**i * v**(degree-i)``."""

    degree: int
    coeffs: tuple

    def __post_init__(self):
        cs = tuple(int(c) for c in self.coeffs)
        if len(cs) != self.degree + 1:
            raise ValueError(
                f"degree {self.degree} form needs {self.degree + 1} coefficients, got {len(cs)}"
            )
        if self.degree > 0 and not any(cs):
            raise ValueError("the zero form must be given with degree 0")
        object.__setattr__(self, "coeffs", cs)

    @classmethod
    def from_uni(cls, p: UniPoly, degree: int) -> "HomogeneousPoly":
        """Homogenize ``p(t)`` to ``v**degree * p(u/v)``."""
        if p.is_zero():
            return ZERO
        if p.degree > degree:
            raise ValueError("degree too small to homogenize")
        cs = [int(c) for c in p.coeffs]
        return cls(degree, cs + [0] * (degree - p.degree))

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __call__(self, a, b):
        return eval_homo(self, a, b)

    def __mul__(self, other):
        if not isinstance(other, HomogeneousPoly):
            if other == 0:
                return ZERO
            return HomogeneousPoly(self.degree, [c * other for c in self.coeffs])
        if self.is_zero() or other.is_zero():
            return ZERO
        out = [0] * (self.degree + other.degree + 1)
        for i, x in enumerate(self.coeffs):
            if x:
                for j, y in enumerate(other.coeffs):
                    out[i + j] += x * y
        return HomogeneousPoly(self.degree + other.degree, out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "HomogeneousPoly":
        out = HomogeneousPoly(0, (1,))
        for _ in range(k):
            out = out * self
        return out

    def __add__(self, other: "HomogeneousPoly") -> "HomogeneousPoly":
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        if self.degree != other.degree:
            raise ValueError("cannot add forms of different degree")
        cs = [x + y for x, y in zip(self.coeffs, other.coeffs)]
        return HomogeneousPoly(self.degree, cs) if any(cs) else ZERO

    def __neg__(self) -> "HomogeneousPoly":
        return self * -1

    def u_power(self) -> int:
        """Exponent of the largest power of ``u`` dividing the form."""
        if self.is_zero():
            return 0
        return next(i for i, c in enumerate(self.coeffs) if c)

    def v_power(self) -> int:
        if self.is_zero():
            return 0
        return self.degree - max(i for i, c in enumerate(self.coeffs) if c)

    def to_json(self) -> dict:
        return {"degree": self.degree, "coeffs": [str(c) for c in self.coeffs]}

    @classmethod
    def from_json(cls, obj: dict) -> "HomogeneousPoly":
        return cls(int(obj["degree"]), [int(c) for c in obj["coeffs"]])

    def __str__(self) -> str:
        terms = []
        for i in range(self.degree, -1, -1):
            c = self.coeffs[i]
            if not c:
                continue
            mono = "*".join(
                s for s in (_pw("u", i), _pw("v", self.degree - i)) if s
            )
            body = mono if abs(c) == 1 and mono else (f"{abs(c)}*{mono}" if mono else str(abs(c)))
            terms.append(("-" if c < 0 else "+", body))
        if not terms:
            return "0"
        head = ("-" if terms[0][0] == "-" else "") + terms[0][1]
        return head + "".join(f" {sign} {body}" for sign, body in terms[1:])


def _pw(x: str, k: int) -> str:
    return "" if k == 0 else (x if k == 1 else f"{x}^{k}")


ZERO = HomogeneousPoly(0, (0,))


def eval_homo(P: HomogeneousPoly, a, b):
    """Exact value of ``P(a, b)`` by homogeneous Horner evaluation."""
    cs = P.coeffs
    acc = cs[-1]
    bp = 1
    for c in reversed(cs[:-1]):
        bp *= b
        acc = acc * a + c * bp
    return acc


def dehomogenize(P: HomogeneousPoly, side: str = "v") -> UniPoly:
    """``P(t, 1)`` for ``side="v"`` or ``P(1, t)`` for ``side="u"``."""
    if side == "v":
        return UniPoly(P.coeffs)
    if side == "u":
        return UniPoly(reversed(P.coeffs))
    raise ValueError(f"side must be 'u' or 'v', got {side!r}")


def poly_gcd(p: UniPoly, q: UniPoly) -> UniPoly:
    """Monic-free gcd over Q, returned as a primitive integer polynomial."""
    a, b = p, q
    while not b.is_zero():
        a, b = b, a.divmod(b)[1]
        if not b.is_zero():
            b = b.primitive()  # keeps coefficient growth in check
    return a.primitive()


def gcd_homo(P: HomogeneousPoly, Q: HomogeneousPoly) -> HomogeneousPoly:
    """Primitive gcd of two binary forms.

    The common factor is found with Euclid on ``P(t,1)`` and ``Q(t,1)``;
    powers of ``v`` are invisible there and are reattached from the
    trailing structure of the coefficient lists. Normalized so the value at
    ``(0,1)`` is positive, or failing that the ``u``-leading coefficient is.
    """
    if P.is_zero() and Q.is_zero():
        raise ValueError("gcd of two zero forms is undefined")
    if P.is_zero():
        return _normalize_sign(Q)
    if Q.is_zero():
        return _normalize_sign(P)
    g = poly_gcd(dehomogenize(P), dehomogenize(Q))
    kv = min(P.v_power(), Q.v_power())
    G = HomogeneousPoly.from_uni(g, g.degree + kv)
    cont = reduce(gcd, G.coeffs, 0)
    G = HomogeneousPoly(G.degree, [c // cont for c in G.coeffs])
    return _normalize_sign(G)


def _normalize_sign(G: HomogeneousPoly) -> HomogeneousPoly:
    cont = reduce(gcd, G.coeffs, 0)
    if cont > 1:
        G = HomogeneousPoly(G.degree, [c // cont for c in G.coeffs])
    lead = G.coeffs[0] if G.coeffs[0] else next(c for c in reversed(G.coeffs) if c)
    return -G if lead < 0 else G


def divexact_homo(P: HomogeneousPoly, D: HomogeneousPoly) -> HomogeneousPoly:
    """Exact quotient ``P / D`` with integer coefficients, else ValueError."""
    if D.is_zero():
        raise ZeroDivisionError("division by the zero form")
    if P.is_zero():
        return ZERO
    if D.v_power() > P.v_power() or D.degree > P.degree:
        raise ValueError("form does not divide")
    q, r = dehomogenize(P).divmod(dehomogenize(D))
    if not r.is_zero() or any(isinstance(c, Fraction) for c in q.coeffs):
        raise ValueError("form does not divide")
    return HomogeneousPoly.from_uni(q, P.degree - D.degree)


def _bareiss_det(M: list[list[int]]) -> int:
    """Determinant of an integer matrix by fraction-free elimination."""
    n = len(M)
    if n == 0:
        return 1
    M = [row[:] for row in M]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if M[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if M[i][k] != 0), None)
            if swap is None:
                return 0
            M[k], M[swap] = M[swap], M[k]
            sign = -sign
        pivot = M[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * pivot - M[i][k] * M[k][j]) // prev
            M[i][k] = 0
        prev = pivot
    return sign * M[n - 1][n - 1]


def sylvester_matrix(p: UniPoly, q: UniPoly) -> list[list[int]]:
    m, n = p.degree, q.degree
    size = m + n
    rows = []
    pc = list(reversed(p.coeffs))
    qc = list(reversed(q.coeffs))
    for i in range(n):
        rows.append([0] * i + pc + [0] * (size - m - 1 - i))
    for i in range(m):
        rows.append([0] * i + qc + [0] * (size - n - 1 - i))
    return rows


def resultant(p: UniPoly, q: UniPoly) -> int:
    """Sylvester resultant ``Res(p, q)``, exact."""
    if p.is_zero() or q.is_zero():
        raise ValueError("resultant of a zero polynomial")
    if p.degree == 0 and q.degree == 0:
        return 1
    return _bareiss_det(sylvester_matrix(p, q))


def discriminant(p: UniPoly) -> int:
    """Standard discriminant ``(-1)^(n(n-1)/2) Res(p, p') / lc(p)``."""
    if p.degree < 1:
        raise ValueError("discriminant needs a nonconstant polynomial")
    n = p.degree
    if n == 1:
        return 1
    num = (-1) ** (n * (n - 1) // 2) * resultant(p, p.derivative())
    q, r = divmod(num, p.lc)
    assert r == 0
    return q


def unnormalized_discriminant(p: UniPoly) -> int:
    """``(-1)^(n(n-1)/2) Res(p, p')``, i.e. ``lc(p) * discriminant(p)``.

    This is the convention under which the exceptional-prime integers of the
    built-in families are usually tabulated; it also picks up the primes
    dividing the leading coefficient.
    """
    if p.degree < 1:
        raise ValueError("discriminant needs a nonconstant polynomial")
    n = p.degree
    if n == 1:
        return p.lc
    return (-1) ** (n * (n - 1) // 2) * resultant(p, p.derivative())


def is_squarefree(p: UniPoly) -> bool:
    if p.is_zero():
        raise ValueError("zero polynomial")
    if p.degree < 1:
        return True
    return poly_gcd(p, p.derivative()).degree == 0


def sturm_sequence(p: UniPoly) -> list[UniPoly]:
    seq = [p, p.derivative()]
    while seq[-1].degree > 0:
        r = seq[-2].divmod(seq[-1])[1]
        if r.is_zero():
            break
        seq.append(-r)
    return seq


def _sign_changes(signs: list[int]) -> int:
    s = [x for x in signs if x]
    return sum(1 for x, y in zip(s, s[1:]) if x != y)


def _sgn(x) -> int:
    return (x > 0) - (x < 0)


def count_real_roots(p: UniPoly, lo=None, hi=None) -> int:
    """Number of distinct real roots of a squarefree ``p`` in ``(lo, hi]``.

    ``None`` bounds mean the corresponding infinity. Exact (rational)
    Sturm sequences throughout.
    """
    if p.is_zero():
        raise ValueError("zero polynomial")
    if p.degree == 0:
        return 0
    if not is_squarefree(p):
        raise ValueError("count_real_roots requires a squarefree polynomial")
    seq = sturm_sequence(p)

    def var_at(x):
        if x is None:
            return None
        return _sign_changes([_sgn(s(Fraction(x))) for s in seq])

    at_minf = _sign_changes([_sgn(s.lc) * (-1) ** s.degree for s in seq])
    at_pinf = _sign_changes([_sgn(s.lc) for s in seq])
    v_lo = at_minf if lo is None else var_at(lo)
    v_hi = at_pinf if hi is None else var_at(hi)
    return v_lo - v_hi
