"""One-parameter families ``y^2 = x^3 + A(a,b) x + B(a,b)`` and their validation."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from os import PathLike
from typing import Optional

from sympy import factorint

from .poly import (
    HomogeneousPoly,
    UniPoly,
    count_real_roots,
    dehomogenize,
    divexact_homo,
    gcd_homo,
    is_squarefree,
    poly_gcd,
    resultant,
    unnormalized_discriminant,
)

__all__ = [
    "AssumptionError",
    "Entanglement",
    "FamilySpec",
    "builtin",
    "from_config",
    "load_family",
    "compute_sigma",
    "sigma_invariants",
    "jmap_value",
    "j_invariant",
]


class AssumptionError(ValueError):
    """A family fails one or more of the admissibility conditions.

    ``conditions`` holds the failing labels: ``"i"`` degree relation,
    ``"ii"`` common real root, ``"iii"`` identically singular,
    ``"iv"`` bad common factor.
    """

    def __init__(self, problems: dict[str, list[str]]):
        self.problems = problems
        self.conditions = frozenset(problems)
        msg = "; ".join(f"({k}) {', '.join(v)}" for k, v in sorted(problems.items()))
        super().__init__(msg)


@dataclass(frozen=True)
class Entanglement:
    pair: tuple[int, int]
    type_label: str

    def __str__(self) -> str:
        return f"({self.pair[0]},{self.pair[1]}) {self.type_label}"


@dataclass(frozen=True)
class FamilySpec:
    name: str
    A: HomogeneousPoly
    B: HomogeneousPoly
    C: HomogeneousPoly
    A0: HomogeneousPoly
    B0: HomogeneousPoly
    d: int
    r: int
    sigma: frozenset
    j_num: Optional[HomogeneousPoly] = None
    j_den: Optional[HomogeneousPoly] = None
    entanglement: Optional[Entanglement] = field(default=None, compare=False)

    def model(self, a: int, b: int) -> tuple[int, int]:
        """The Weierstrass coefficients ``(A(a,b), B(a,b))``."""
        return self.A(a, b), self.B(a, b)


def _uhom(degree: int, coeffs) -> HomogeneousPoly:
    return HomogeneousPoly(degree, coeffs)


def _squarefree_part(p: UniPoly) -> UniPoly:
    if p.degree < 1:
        return p
    g = poly_gcd(p, p.derivative())
    return p.divmod(g)[0].primitive()


def _has_real_projective_root(C: HomogeneousPoly) -> bool:
    if C.v_power() > 0:
        return True
    p = dehomogenize(C)
    if p.degree < 1:
        return False
    return count_real_roots(_squarefree_part(p)) > 0


def sigma_invariants(A0: HomogeneousPoly, B0: HomogeneousPoly, C: HomogeneousPoly) -> tuple[int, int, int, int]:
    """The four integers whose prime divisors form the exceptional set.

    ``Res(A0(t,1), B0(t,1))``, ``Res(A0(1,t), B0(1,t))``, and the
    discriminants of ``C(t,1)``, ``C(1,t)``. Discriminants use the
    ``lc * Disc`` convention, which also catches primes where ``C`` drops
    degree.
    """
    res_v = resultant(dehomogenize(A0, "v"), dehomogenize(B0, "v"))
    res_u = resultant(dehomogenize(A0, "u"), dehomogenize(B0, "u"))
    disc_v = unnormalized_discriminant(dehomogenize(C, "v"))
    disc_u = unnormalized_discriminant(dehomogenize(C, "u"))
    return res_v, res_u, disc_v, disc_u


def _prime_divisors(n: int) -> set[int]:
    if n == 0:
        raise ValueError("exceptional-set invariant vanished; family is degenerate")
    return {p for p in factorint(abs(n)) if p > 1}


def compute_sigma(spec: FamilySpec) -> frozenset:
    """Primes dividing any of :func:`sigma_invariants`."""
    out: set[int] = set()
    for n in sigma_invariants(spec.A0, spec.B0, spec.C):
        out |= _prime_divisors(n)
    return frozenset(out)


def from_config(
    A: HomogeneousPoly,
    B: HomogeneousPoly,
    j_num: Optional[HomogeneousPoly] = None,
    j_den: Optional[HomogeneousPoly] = None,
    *,
    name: str = "custom",
    entanglement: Optional[Entanglement] = None,
) -> FamilySpec:
    """Validate ``(A, B)`` and derive ``C, A0, B0, d, r`` and the exceptional set.

    Every failing condition is collected and raised together as an
    :class:`AssumptionError`.
    """
    if A.is_zero() or B.is_zero() or A.degree == 0 or B.degree == 0:
        raise AssumptionError({"i": ["A and B must be nonconstant forms"]})
    problems: dict[str, list[str]] = {}

    if 3 * A.degree != 2 * B.degree:
        problems.setdefault("i", []).append(
            f"3*deg A = {3 * A.degree} but 2*deg B = {2 * B.degree}"
        )

    C = gcd_homo(A, B)
    if C.degree > 0 and _has_real_projective_root(C):
        problems.setdefault("ii", []).append("A and B share a real projective root")

    disc_form = 4 * A ** 3 + 27 * B ** 2 if 3 * A.degree == 2 * B.degree else None
    if disc_form is not None and disc_form.is_zero():
        problems.setdefault("iii", []).append("4A^3 + 27B^2 vanishes identically")

    iv = problems.setdefault("iv", [])
    if C.degree == 0:
        iv.append("gcd(A, B) is constant")
    else:
        if not is_squarefree(dehomogenize(C)) or C.v_power() > 1:
            iv.append("gcd(A, B) is not squarefree")
        if C.u_power() > 0:
            iv.append("gcd(A, B) divisible by u")
        if C.v_power() > 0:
            iv.append("gcd(A, B) divisible by v")
        if C.degree > 4:
            iv.append(f"deg gcd(A, B) = {C.degree} > 4")
    if not iv:
        del problems["iv"]

    if (j_num is None) != (j_den is None):
        problems.setdefault("j", []).append("j_num and j_den must be given together")
    elif j_num is not None and j_num.degree != j_den.degree:
        problems.setdefault("j", []).append("j-map is not of degree 0")

    if problems:
        raise AssumptionError(problems)

    A0 = divexact_homo(A, C)
    B0 = divexact_homo(B, C)
    spec = FamilySpec(
        name=name,
        A=A,
        B=B,
        C=C,
        A0=A0,
        B0=B0,
        d=3 * A.degree,
        r=C.degree,
        sigma=frozenset(),
        j_num=j_num,
        j_den=j_den,
        entanglement=entanglement,
    )
    return FamilySpec(**{**spec.__dict__, "sigma": compute_sigma(spec)})


def _f1() -> FamilySpec:
    C = _uhom(4, [432, 0, 36, 0, 1])
    A0 = _uhom(2, [-36, 0, -3])
    u = _uhom(1, [0, 1])
    j_num = _uhom(2, [12, 0, 1]) ** 3
    j_den = _uhom(6, [1, 0, 0, 0, 0, 0, 0])
    return from_config(
        A0 * C,
        2 * u * C * C,
        j_num,
        j_den,
        name="F1",
        entanglement=Entanglement((2, 3), "Z/2Z"),
    )


def _f2() -> FamilySpec:
    C = _uhom(4, [125, 0, 22, 0, 1])
    A0 = _uhom(4, [-15, 0, -30, 0, -3])
    B0 = 2 * _uhom(4, [-1, 0, 4, 0, 1]) * C
    j_num = _uhom(4, [5, 0, 10, 0, 1]) ** 3
    j_den = _uhom(12, [0, 0, 1] + [0] * 10)  # u^2 v^10
    return from_config(
        A0 * C,
        B0 * C,
        j_num,
        j_den,
        name="F2",
        entanglement=Entanglement((2, 5), "Z/2Z"),
    )


_BUILTINS = {"F1": _f1, "F2": _f2}
_cache: dict[str, FamilySpec] = {}


def builtin(name: str) -> FamilySpec:
    """The (2,3)- and (2,5)-entangled families ``F1`` and ``F2``."""
    key = name.upper()
    if key not in _BUILTINS:
        raise KeyError(f"unknown family {name!r}; expected one of {sorted(_BUILTINS)}")
    if key not in _cache:
        _cache[key] = _BUILTINS[key]()
    return _cache[key]


def family_from_json(obj: dict) -> FamilySpec:
    A = HomogeneousPoly.from_json(obj["A"])
    B = HomogeneousPoly.from_json(obj["B"])
    j_num = HomogeneousPoly.from_json(obj["j_num"]) if "j_num" in obj else None
    j_den = HomogeneousPoly.from_json(obj["j_den"]) if "j_den" in obj else None
    return from_config(A, B, j_num, j_den, name=obj.get("name", "custom"))


def family_to_json(spec: FamilySpec) -> dict:
    out = {"name": spec.name, "A": spec.A.to_json(), "B": spec.B.to_json()}
    if spec.j_num is not None:
        out["j_num"] = spec.j_num.to_json()
        out["j_den"] = spec.j_den.to_json()
    return out


def load_family(path: str | PathLike) -> FamilySpec:
    with open(path) as fh:
        return family_from_json(json.load(fh))


def jmap_value(spec: FamilySpec, a: int, b: int) -> Fraction:
    if spec.j_num is None:
        raise ValueError(f"family {spec.name} carries no j-map")
    den = spec.j_den(a, b)
    if den == 0:
        raise ZeroDivisionError(f"j-map denominator vanishes at ({a}, {b})")
    return Fraction(spec.j_num(a, b), den)


def j_invariant(Aval: int, Bval: int) -> Fraction:
    """j-invariant of ``y^2 = x^3 + Aval x + Bval``."""
    a3 = 4 * Aval ** 3
    disc = a3 + 27 * Bval ** 2
    if disc == 0:
        raise ZeroDivisionError("singular curve: 4A^3 + 27B^2 = 0")
    return Fraction(1728 * a3, disc)
