"""GL(2)-equivariant classes of orbit closures.

The representation is ``W = sum_i Sym^{a_i-b_i} V (x) det^{b_i}`` and the
vector ``w`` is described only through the data the class depends on: which
components are nonzero and, for finitely many points of P^1, the vanishing
order of each nonzero component there.  The result is ``|Gamma| * [Orb(w)]``
as a symmetric polynomial in ``v1, v2``.
"""

from __future__ import annotations

from collections.abc import Callable, Sequence
from dataclasses import dataclass, field, replace
from fractions import Fraction
import math

from .algebra import (
    GL2_VARS,
    LinearForm,
    Polynomial,
    RationalTerm,
    RationalTermSum,
    exact_divide,
    specialize_equal,
    substitute,
    sum_terms,
    symmetrize,
)
from .errors import (
    AIncomplete,
    MixedOrZeroWeights,
    NonProportionalWeights,
    OracleMismatch,
    OrderBudgetExceeded,
    SchemaError,
    ZeroVector,
)
from .newton import (
    NewtonPolygon,
    VertexNormals,
    WeightedPoint,
    build_polygon,
    polygon_scalars,
    vertex_normals,
)

VARS = GL2_VARS
DIFF = LinearForm((1, -1))  # v1 - v2

STANDING_NOTES = (
    "class is |Gamma|*[Orb(w)]; the stabiliser Gamma is assumed finite and is not computed",
    "F and G use ((1-b)v1 + b v2)^-2 in their squared-denominator summands",
)


@dataclass(frozen=True)
class Representation:
    summands: tuple[tuple[int, int], ...]

    def __init__(self, summands: Sequence[Sequence[int]]):
        object.__setattr__(self, "summands", tuple((int(a), int(b)) for a, b in summands))

    @property
    def weights(self) -> tuple[int, ...]:
        return tuple(a + b for a, b in self.summands)

    @property
    def dims(self) -> tuple[int, ...]:
        return tuple(a - b + 1 for a, b in self.summands)

    @property
    def dim(self) -> int:
        return sum(self.dims)

    def slope(self, i: int) -> Fraction:
        a, b = self.summands[i]
        return Fraction(b, a + b)


@dataclass(frozen=True)
class OrbitPoint:
    label: str
    orders: tuple[int, ...]

    def __init__(self, label: str, orders: Sequence[int]):
        object.__setattr__(self, "label", str(label))
        object.__setattr__(self, "orders", tuple(int(r) for r in orders))


@dataclass(frozen=True)
class OrbitDatum:
    """Orders are listed per point, one entry per *nonzero* summand, in summand order."""

    nonzero: tuple[bool, ...]
    points: tuple[OrbitPoint, ...] = ()
    a_complete: bool = True

    def __init__(self, nonzero: Sequence[bool], points: Sequence[OrbitPoint] = (), a_complete: bool = True):
        object.__setattr__(self, "nonzero", tuple(bool(x) for x in nonzero))
        object.__setattr__(self, "points", tuple(points))
        object.__setattr__(self, "a_complete", bool(a_complete))

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(i for i, nz in enumerate(self.nonzero) if nz)

    def with_points(self, points: Sequence[OrbitPoint]) -> OrbitDatum:
        return OrbitDatum(self.nonzero, points, self.a_complete)


@dataclass(frozen=True)
class EquivariantClass:
    poly: Polynomial
    codim: int
    notes: tuple[str, ...] = field(default=(), compare=False)


@dataclass(frozen=True)
class ScalarData:
    b: Fraction
    r: Fraction
    r_gen: Fraction
    s: Fraction
    polygon: NewtonPolygon


def validate(rep: Representation, datum: OrbitDatum) -> tuple[Representation, OrbitDatum]:
    if not rep.summands:
        raise SchemaError("representation has no summands")
    for i, (a, b) in enumerate(rep.summands):
        if a < b:
            raise SchemaError(f"summand {i}: a={a} < b={b}, Sym^(a-b) undefined")
    d = rep.weights
    if any(x <= 0 for x in d):
        if all(x < 0 for x in d):
            hint = "all weights are negative: dualise, or twist by a large negative n"
        else:
            hint = "weights are zero or of mixed sign: a generic orbit closure then has class 0"
        raise MixedOrZeroWeights(f"summand weights d_i = a_i + b_i must all be positive (got {list(d)}); {hint}")
    if len(datum.nonzero) != len(rep.summands):
        raise SchemaError(f"nonzero flags: expected {len(rep.summands)}, got {len(datum.nonzero)}")
    if not any(datum.nonzero):
        raise ZeroVector("at least one summand of w must be nonzero")
    if not datum.a_complete:
        raise AIncomplete(
            "the point set must contain every common zero of the components f_i with minimal b_i/d_i; "
            "set a_complete once that holds"
        )
    support = datum.support
    totals = [0] * len(support)
    for pt in datum.points:
        if len(pt.orders) != len(support):
            raise SchemaError(f"point {pt.label!r}: expected {len(support)} orders, got {len(pt.orders)}")
        for k, r in enumerate(pt.orders):
            if r < 0:
                raise SchemaError(f"point {pt.label!r}: negative order")
            totals[k] += r
    for k, i in enumerate(support):
        deg = rep.summands[i][0] - rep.summands[i][1]
        if totals[k] > deg:
            raise OrderBudgetExceeded(
                f"summand {i} has degree {deg} but its vanishing orders sum to {totals[k]}"
            )
    return rep, datum


def top_chern(rep: Representation) -> Polynomial:
    out = Polynomial.one(VARS)
    for a, b in rep.summands:
        for j in range(a - b + 1):
            out = out * Polynomial.linear(VARS, (b + j, a - j))
    return out


def global_b(rep: Representation, datum: OrbitDatum) -> Fraction:
    return min(rep.slope(i) for i in datum.support)


def point_polygon(rep: Representation, datum: OrbitDatum, pt: OrbitPoint) -> NewtonPolygon:
    pts = []
    for i, r in zip(datum.support, pt.orders):
        a, b = rep.summands[i]
        d = a + b
        pts.append(WeightedPoint(Fraction(r + b, d), Fraction(b, d), d))
    return build_polygon(pts)


def scalar_data(rep: Representation, datum: OrbitDatum, pt: OrbitPoint) -> ScalarData:
    poly = point_polygon(rep, datum, pt)
    sc = polygon_scalars(poly)
    b = global_b(rep, datum)
    return ScalarData(b=b, r=sc.r, r_gen=sc.lambda0_x - b, s=sc.s, polygon=poly)


def _form(c1: Fraction, c2: Fraction) -> LinearForm:
    return LinearForm((c1, c2))


def _term(scalar: Fraction, form: LinearForm, form_mult: int, diff_mult: int) -> RationalTerm:
    return RationalTerm(scalar, Polynomial.one(VARS), [(form, form_mult), (DIFF, diff_mult)])


def term_F(b: Fraction) -> RationalTermSum:
    b = Fraction(b)
    base = _form(1 - b, b)
    return RationalTermSum((_term(Fraction(2), base, 1, 3), _term(-(2 * b - 1), base, 2, 2)))


def term_G(sd: ScalarData) -> RationalTermSum:
    base = _form(1 - sd.b, sd.b)
    return RationalTermSum((
        _term(Fraction(1), _form(1 - sd.r, sd.r), 1, 3),
        _term(-sd.s, base, 1, 3),
        _term(-sd.r_gen, base, 2, 2),
    ))


def term_H(lambda2: Fraction, vn: VertexNormals) -> RationalTermSum:
    if vn.eta[0] <= 0 or vn.zeta[0] <= 0:
        raise AssertionError(f"vertex normals {vn.eta}, {vn.zeta} need positive first coordinates")
    lambda2 = Fraction(lambda2)
    coef = Fraction(abs(vn.det), vn.eta[0] * vn.zeta[0])
    return RationalTermSum((_term(coef, _form(1 - lambda2, lambda2), 1, 3),))


def _symmetrized(s: RationalTermSum) -> list[RationalTerm]:
    out = []
    for t in s.terms:
        out.extend(symmetrize(t).terms)
    return out


def _zero_part_chern(rep: Representation, datum: OrbitDatum) -> Polynomial:
    zero = [rep.summands[i] for i, nz in enumerate(datum.nonzero) if not nz]
    return top_chern(Representation(zero)) if zero else Polynomial.one(VARS)


def _assemble(rep: Representation, datum: OrbitDatum, bracket: list[RationalTerm], notes: list[str]) -> EquivariantClass:
    sub = Representation([rep.summands[i] for i in datum.support])
    combined = sum_terms(bracket)
    numer = combined.numerator.scale(combined.scalar) * top_chern(sub)
    poly = exact_divide(numer, combined.denominator_polynomial()) * _zero_part_chern(rep, datum)
    codim = rep.dim - 4
    if not poly.is_symmetric():
        raise AssertionError("assembled class is not symmetric in v1, v2")
    if not poly.is_zero() and (not poly.is_homogeneous() or poly.degree() != codim):
        raise AssertionError(f"assembled class is not homogeneous of degree {codim}")
    if codim < 0:
        notes.append("dim W < 4: the orbit has positive-dimensional stabiliser; value carries no geometric claim")
    return EquivariantClass(poly, codim, tuple(notes))


def orbit_class(rep: Representation, datum: OrbitDatum, *,
                f_term: Callable[[Fraction], RationalTermSum] = term_F) -> EquivariantClass:
    """Class of the orbit closure, summed over the terms F, G^u and H^u(j)."""
    validate(rep, datum)
    b = global_b(rep, datum)
    bracket = _symmetrized(f_term(b))
    for pt in datum.points:
        sd = scalar_data(rep, datum, pt)
        bracket += _symmetrized(term_G(sd))
        for j in range(1, sd.polygon.k + 1):
            bracket += _symmetrized(term_H(sd.polygon.vertices[j][1], vertex_normals(sd.polygon, j)))
    return _assemble(rep, datum, bracket, list(STANDING_NOTES))


# -- twisting ---------------------------------------------------------------

def twist_rep(rep: Representation, n: int) -> Representation:
    return Representation([(a + n * (a + b), b + n * (a + b)) for a, b in rep.summands])


def twist_factor(n: int) -> int:
    """Order of the kernel of ``M -> M * det(M)^n``, i.e. ``|Gamma(n)| / |Gamma|``."""
    return 2 * n + 1


def twist_pullback(p: Polynomial, n: int) -> Polynomial:
    """Pull back along ``v_i -> v_i + n(v1 + v2)``."""
    return substitute(p, [LinearForm((1 + n, n)), LinearForm((n, 1 + n))])


def twist_class(c: EquivariantClass, n: int) -> EquivariantClass:
    """Class of the same vector in the twisted representation ``W(n)``."""
    return EquivariantClass(twist_pullback(c.poly, n).scale(twist_factor(n)), c.codim, c.notes)


# -- degrees ------------------------------------------------------------------

def central_scale(rep: Representation, weights: Sequence[int]) -> Fraction:
    """The ``m`` with ``d_i = m * weights_i`` for every summand."""
    if len(weights) != len(rep.summands):
        raise NonProportionalWeights("one projective weight per summand expected")
    if any(w <= 0 for w in weights):
        raise NonProportionalWeights("projective weights must be positive")
    ratios = {Fraction(d, w) for d, w in zip(rep.weights, weights)}
    if len(ratios) != 1:
        raise NonProportionalWeights(
            f"summand weights {list(rep.weights)} are not proportional to {list(weights)}"
        )
    return ratios.pop()


def projective_degree(c: EquivariantClass, rep: Representation, weights: Sequence[int]) -> Fraction:
    """Coefficient of ``h^codim`` after ``v1 = v2 = h/m``."""
    m = central_scale(rep, weights)
    if c.poly.is_zero():
        return Fraction(0)
    coef, _ = specialize_equal(c.poly, 1 / m)
    return coef


# -- localisation oracle ------------------------------------------------------
#
# Recomputes the class from the torus-fixed loci of the parametrising stack:
# the fixed line contributes through a power series in h, each isolated fixed
# point through the Euler class of its normal weights.  The Newton polygon is
# rebuilt by an unrelated brute-force routine.

def _dominated_by_pair(p, q1, q2) -> bool:
    """Is there t in [0,1] with t*q1 + (1-t)*q2 <= p coordinatewise?"""
    lo, hi = Fraction(0), Fraction(1)
    for k in range(2):
        # t*(q1-q2) <= p - q2
        c, rhs = q1[k] - q2[k], p[k] - q2[k]
        if c > 0:
            hi = min(hi, rhs / c)
        elif c < 0:
            lo = max(lo, rhs / c)
        elif rhs < 0:
            return False
    return lo <= hi


def brute_force_vertices(points: Sequence[tuple[Fraction, Fraction]]) -> list[tuple[Fraction, Fraction]]:
    """Vertices of the hull of shifted quadrants, ordered by increasing y."""
    pts = sorted(set(points))
    verts = []
    for p in pts:
        others = [q for q in pts if q != p]
        if any(_dominated_by_pair(p, q1, q2) for q1 in others for q2 in others):
            continue
        verts.append(p)
    return sorted(verts, key=lambda v: v[1])


def _prim_int(x: Fraction, y: Fraction) -> tuple[int, int]:
    scale = x.denominator * y.denominator
    X, Y = int(x * scale), int(y * scale)
    g = math.gcd(X, Y)
    return X // g, Y // g


def _euler(weights: Sequence[tuple[Fraction, Fraction]], stabiliser: int = 1) -> RationalTerm:
    """``1 / (stabiliser * prod(weights))`` where weight ``(p, q)`` means ``p*v1 + q*v2``."""
    return RationalTerm(Fraction(1, stabiliser), Polynomial.one(VARS), [(LinearForm(w), 1) for w in weights])


def _inverse_series(const: LinearForm, h_coef: Fraction, order: int) -> list[RationalTerm]:
    """Coefficients of ``1/(const + h_coef*h)`` up to ``h^order``."""
    return [RationalTerm((-h_coef) ** k, Polynomial.one(VARS), [(const, k + 1)]) for k in range(order + 1)]


def _series_product(a: list[list[RationalTerm]], b: list[list[RationalTerm]]) -> list[list[RationalTerm]]:
    n = min(len(a), len(b))
    out: list[list[RationalTerm]] = [[] for _ in range(n)]
    for i in range(n):
        for j in range(n - i):
            out[i + j].extend(x * y for x in a[i] for y in b[j])
    return out


def fixed_line_series(b: Fraction, r_gen_total: Fraction, s_total: Fraction) -> list[RationalTerm]:
    """Coefficient of ``h`` in ``1 / (c1(O(-1)) * c2(N))`` on the fixed line through ``L1``.

    ``O(-1) = chi(1-b, b) (x) O(-1 + 2b + r_gen)`` and
    ``N = chi(-1, 1) (x) (O + O(2 - s))`` on a line with ``h`` the point class.
    """
    line = _inverse_series(LinearForm((1 - b, b)), 2 * b + r_gen_total - 1, 1)
    normal_flat = [[t] for t in _inverse_series(LinearForm((-1, 1)), Fraction(0), 1)]
    normal_twisted = [[t] for t in _inverse_series(LinearForm((-1, 1)), 2 - s_total, 1)]
    prod = _series_product(_series_product([[t] for t in line], normal_flat), normal_twisted)
    return prod[1]


def fixed_line_closed_form(b: Fraction, r_gen_total: Fraction, s_total: Fraction) -> list[RationalTerm]:
    base = LinearForm((1 - b, b))
    return [
        RationalTerm(2 - s_total, Polynomial.one(VARS), [(base, 1), (DIFF, 3)]),
        RationalTerm(-(2 * b + r_gen_total - 1), Polynomial.one(VARS), [(base, 2), (DIFF, 2)]),
    ]


def localization_oracle(rep: Representation, datum: OrbitDatum) -> EquivariantClass:
    validate(rep, datum)
    support = datum.support
    b = min(Fraction(rep.summands[i][1], sum(rep.summands[i])) for i in support)

    deg_o = 2 * b - 1          # degree of O(-1) on the fixed line
    deg_n = Fraction(2)        # degree of its normal bundle
    isolated: list[RationalTerm] = []
    for pt in datum.points:
        lattice = []
        for i, r in zip(support, pt.orders):
            a, bi = rep.summands[i]
            d = a + bi
            lattice.append(((Fraction(r + bi, d), Fraction(bi, d)), r, d))
        verts = brute_force_vertices([p for p, _, _ in lattice])
        # O(-1) on the line picks up r_i/d_i along E_u, for a summand realising the corner
        corner = verts[0]
        deg_o += min(Fraction(r, d) for p, r, d in lattice if p == corner)
        deg_n -= 1
        if len(verts) > 1:
            zeta = _prim_int(verts[1][1] - verts[0][1], verts[0][0] - verts[1][0])
            deg_n -= Fraction(zeta[1], zeta[0])

        # the point over u away from the strict transform of L1
        r_u = min(p[0] for p, _, _ in lattice)
        isolated.append(_euler([(1 - r_u, r_u), (1, -1), (-1, 1), (-1, 1)]))

        # one point per vertex except the corner on the fixed line
        normals = [(0, 1)]
        for v0, v1 in zip(verts, verts[1:]):
            normals.append(_prim_int(v1[1] - v0[1], v0[0] - v1[0]))
        normals.append((1, 0))
        for j in range(1, len(verts)):
            eta, zeta = normals[j], normals[j + 1]
            det = eta[0] * zeta[1] - eta[1] * zeta[0]
            lam2 = verts[j][1]
            isolated.append(_euler(
                [(1 - lam2, lam2),
                 (Fraction(zeta[0], det), Fraction(-zeta[0], det)),
                 (Fraction(-eta[0], det), Fraction(eta[0], det)),
                 (-1, 1)],
                stabiliser=abs(det),
            ))

    r_gen_total = deg_o - (2 * b - 1)
    s_total = 2 - deg_n
    series = fixed_line_series(b, r_gen_total, s_total)
    closed = fixed_line_closed_form(b, r_gen_total, s_total)
    diff = sum_terms(series + [-t for t in closed])
    if not diff.numerator.is_zero():
        raise OracleMismatch("series and closed-form fixed-line contributions disagree")

    bracket = []
    for t in closed + isolated:
        bracket.extend((t, t.swap()))
    return _assemble(rep, datum, bracket, list(STANDING_NOTES))


def with_extra_point(datum: OrbitDatum, label: str = "extra") -> OrbitDatum:
    """Append a point where every nonzero component is nonvanishing."""
    return replace(datum, points=datum.points + (OrbitPoint(label, [0] * len(datum.support)),))
