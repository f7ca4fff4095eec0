"""Elliptic fibrations and rational self-maps of P^1.

Both front ends build a representation and an orbit datum, run the general
engine, and compare with the closed forms known for these two families.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass
from fractions import Fraction
from math import prod

from .algebra import Polynomial, specialize_equal
from .errors import (
    InternalCheckError,
    OrderBudgetExceeded,
    ProfileError,
    CommonFactorError,
    SchemaError,
)
from .orbit import (
    VARS,
    EquivariantClass,
    OrbitDatum,
    OrbitPoint,
    Representation,
    orbit_class,
    projective_degree,
)

# -- elliptic fibrations y^2 = x^3 + A x + B ---------------------------------

# (c, minimal (ord A, ord B)) per Kodaira type
KODAIRA = {
    "I_N": (Fraction(0), (0, 0)),
    "I_N^*": (Fraction(1), (2, 3)),
    "II": (Fraction(1, 3), (1, 1)),
    "III": (Fraction(1, 2), (1, 2)),
    "IV": (Fraction(2, 3), (2, 2)),
    "IV^*": (Fraction(4, 3), (3, 4)),
    "III^*": (Fraction(3, 2), (3, 5)),
    "II^*": (Fraction(5, 3), (4, 5)),
}
_TYPE_BY_C = {c: name for name, (c, _) in KODAIRA.items()}
_ALIASES = {name.replace("^", "").replace("_", "").upper(): name for name in KODAIRA}


def kodaira_name(label: str) -> str:
    key = label.replace("^", "").replace("_", "").upper()
    if key not in _ALIASES:
        raise SchemaError(f"unknown Kodaira type {label!r}; expected one of {sorted(KODAIRA)}")
    return _ALIASES[key]


@dataclass(frozen=True)
class FiberDatum:
    label: str
    ord_A: int
    ord_B: int

    @property
    def c(self) -> Fraction:
        return min(Fraction(self.ord_A, 2), Fraction(self.ord_B, 3))

    @property
    def kodaira_type(self) -> str | None:
        """Kodaira type when the fibre is minimal (c < 2), else ``None``."""
        return _TYPE_BY_C.get(self.c) if self.c < 2 else None


def contribution(n: int, c: Fraction) -> Fraction:
    return c * c * (3 * n - c)


def kodaira_contribution(n: int, kind: str) -> tuple[Fraction, Fraction]:
    c, _ = KODAIRA[kodaira_name(kind)]
    return c, contribution(n, c)


def fiber_for_type(kind: str, label: str | None = None) -> FiberDatum:
    name = kodaira_name(kind)
    a, b = KODAIRA[name][1]
    return FiberDatum(label or name, a, b)


def elliptic_closed_form(n: int, cs: Sequence[Fraction]) -> Fraction:
    return Fraction(2 ** (4 * n + 3) * 3 ** (6 * n + 1) * n) * (4 * n ** 3 - sum(contribution(n, c) for c in cs))


def elliptic_setup(n: int, fibers: Sequence[FiberDatum]) -> tuple[Representation, OrbitDatum]:
    if n < 1:
        raise SchemaError("n must be a positive integer")
    if sum(f.ord_A for f in fibers) > 4 * n or sum(f.ord_B for f in fibers) > 6 * n:
        raise OrderBudgetExceeded(f"orders exceed deg A = {4 * n} or deg B = {6 * n}")
    rep = Representation([(4 * n, 0), (6 * n, 0)])
    pts = [OrbitPoint(f.label, (f.ord_A, f.ord_B)) for f in fibers]
    return rep, OrbitDatum((True, True), pts)


@dataclass(frozen=True)
class EllipticResult:
    n: int
    fibers: tuple[FiberDatum, ...]
    orbit: EquivariantClass
    degree: Fraction


def elliptic_degree(n: int, fibers: Sequence[FiberDatum]) -> EllipticResult:
    """Stabiliser-weighted degree of the orbit closure in P(4n-forms (+) 6n-forms), weights (2, 3)."""
    rep, datum = elliptic_setup(n, fibers)
    cls = orbit_class(rep, datum)
    engine = projective_degree(cls, rep, (2, 3))
    closed = elliptic_closed_form(n, [f.c for f in fibers])
    if engine != closed:
        raise InternalCheckError(f"engine degree {engine} differs from closed form {closed}")
    return EllipticResult(n, tuple(fibers), cls, engine)


# -- rational self-maps ------------------------------------------------------

def ratmap_representation(n: int) -> Representation:
    """``Hom(V, Sym^n V) = Sym^{n-1} V (+) Sym^{n+1} V (x) det^{-1}``."""
    return Representation([(n - 1, 0), (n, -1)])


def ratmap_closed_product(n: int) -> Polynomial:
    p = Polynomial.constant(VARS, n * (n + 1) * (n - 1) ** 2)
    for j in range(1, n - 1):
        p = p * Polynomial.linear(VARS, (j, n - 1 - j))
    for j in range(1, n + 1):
        p = p * Polynomial.linear(VARS, (j - 1, n - j))
    return p


def ratmap_datum(n: int, profile: Sequence[int], simple_contraction_orders: Sequence[int] | None = None) -> OrbitDatum:
    profile = [int(j) for j in profile]
    if n < 2:
        raise ProfileError("rational maps need n >= 2")
    if any(j < 1 for j in profile):
        raise ProfileError("fixed point multiplicities must be positive")
    if sum(profile) != n + 1:
        raise ProfileError(f"fixed point multiplicities must sum to n+1 = {n + 1}, got {sum(profile)}")
    r1 = list(simple_contraction_orders or [0] * len(profile))
    for j, r in zip(profile, r1):
        if j >= 2 and r:
            raise CommonFactorError("the contraction cannot vanish at a multiple fixed point")
    pts = [OrbitPoint(f"p{k}", (r, j)) for k, (j, r) in enumerate(zip(profile, r1))]
    return OrbitDatum((True, True), pts)


@dataclass(frozen=True)
class RatmapResult:
    n: int
    profile: tuple[int, ...]
    orbit: EquivariantClass
    degree: Fraction


def ratmap_class(n: int, profile: Sequence[int]) -> RatmapResult:
    rep = ratmap_representation(n)
    datum = ratmap_datum(n, profile)
    cls = orbit_class(rep, datum)
    if cls.poly != ratmap_closed_product(n):
        raise InternalCheckError("engine class differs from the closed product")
    # weight-one scaling is v = h/(n-1); the central mu_{n-1} divides out
    degree = projective_degree(cls, rep, (1, 1)) / (n - 1)
    if degree != n * (n + 1) * (n - 1):
        raise InternalCheckError(f"degree {degree} differs from n(n+1)(n-1)")
    return RatmapResult(n, tuple(profile), cls, degree)


# -- binary forms for (F, G) -------------------------------------------------

XY = ("x", "y")


def binary_form(coeffs: Sequence) -> Polynomial:
    """``coeffs[k]`` is the coefficient of ``x^(deg-k) y^k``."""
    deg = len(coeffs) - 1
    return Polynomial(XY, {(deg - k, k): Fraction(c) for k, c in enumerate(coeffs)})


def form_coefficients(p: Polynomial, deg: int) -> list[Fraction]:
    return [p.coefficient((deg - k, k)) for k in range(deg + 1)]


def split_hom(F: Polynomial, G: Polynomial) -> tuple[Polynomial, Polynomial]:
    """Contraction ``I`` and fixed-point form ``J`` of ``x* (x) F + y* (x) G``."""
    x, y = Polynomial.var(XY, 0), Polynomial.var(XY, 1)
    I = F.diff(0) + G.diff(1)
    J = y * F - x * G
    n = max(F.degree(), G.degree())
    if n < 0:
        raise SchemaError("F and G are both zero")
    # Euler's formula: (n+1) F = dJ/dy + x I and (n+1) G = y I - dJ/dx
    if J.diff(1) + x * I != F.scale(n + 1) or y * I - J.diff(0) != G.scale(n + 1):
        raise InternalCheckError("inverse relations for (I, J) failed")
    return I, J


def vanishing_order(p: Polynomial, root: Sequence) -> int:
    """Order of vanishing of a binary form at the point ``[root[0] : root[1]]``."""
    a, b = Fraction(root[0]), Fraction(root[1])
    if not a and not b:
        raise SchemaError("[0:0] is not a point of P^1")
    if p.is_zero():
        raise SchemaError("the zero form vanishes everywhere")
    factor = Polynomial.linear(XY, (b, -a))
    k = 0
    while True:
        quot, rem = p.divmod(factor)
        if not rem.is_zero():
            return k
        p, k = quot, k + 1


def profile_from_J(J: Polynomial, roots: Sequence[tuple[Sequence, int]], I: Polynomial | None = None) -> tuple[int, ...]:
    """Fixed-point profile from a caller-supplied factorisation of ``J``.

    Roots are rational projective points ``([p, q], multiplicity)``; each
    multiplicity is checked against the actual order of vanishing.
    """
    n1 = J.degree()
    mults = [int(m) for _, m in roots]
    if sum(mults) != n1:
        raise ProfileError(f"multiplicities sum to {sum(mults)}, but J has degree {n1}")
    for pt, m in roots:
        got = vanishing_order(J, pt)
        if got != m:
            raise ProfileError(f"J vanishes to order {got} at [{pt[0]}:{pt[1]}], not {m}")
        if I is not None and m >= 2 and vanishing_order(I, pt) > 0:
            raise CommonFactorError(
                f"J has a multiple root at [{pt[0]}:{pt[1]}] where I also vanishes: F and G share a factor"
            )
    return tuple(mults)


def degree_weight_one(c: EquivariantClass, n: int) -> Fraction:
    coef, _ = specialize_equal(c.poly, Fraction(1, n - 1))
    return coef


def closed_form_check(n: int) -> bool:
    p = ratmap_closed_product(n)
    coef, _ = specialize_equal(p, Fraction(1, n - 1))
    return coef / (n - 1) == n * (n + 1) * (n - 1) == prod((n, n + 1, n - 1))
