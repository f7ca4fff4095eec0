"""Rational Newton polygons of shifted quadrants in the plane.

A polygon is the convex hull of ``p + R^2_{>=0}`` over a finite set of
weighted points ``p``.  Its boundary is a staircase: a horizontal ray at the
bottom right, finitely many edges, and a vertical ray at the top left.
Vertices are listed from the bottom right to the top left.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Sequence

IntVec = tuple[int, int]
Point = tuple[Fraction, Fraction]


@dataclass(frozen=True)
class WeightedPoint:
    x: Fraction
    y: Fraction
    weight: int = 1

    def __post_init__(self):
        object.__setattr__(self, "x", Fraction(self.x))
        object.__setattr__(self, "y", Fraction(self.y))
        if int(self.weight) != self.weight or self.weight <= 0:
            raise ValueError("weight must be a positive integer")
        object.__setattr__(self, "weight", int(self.weight))

    @property
    def xy(self) -> Point:
        return (self.x, self.y)

    def lattice_point(self) -> tuple[Fraction, Fraction]:
        """``weight * (x, y)``; integral for data coming from weighted monomials."""
        return (self.x * self.weight, self.y * self.weight)


@dataclass(frozen=True)
class Face:
    """A maximal face: the horizontal ray, an edge, or the vertical ray."""

    kind: str  # "horizontal" | "edge" | "vertical"
    normal: IntVec
    vertices: tuple[Point, ...]

    def value(self) -> Fraction:
        v = self.vertices[0]
        return self.normal[0] * v[0] + self.normal[1] * v[1]


@dataclass(frozen=True)
class NewtonPolygon:
    vertices: tuple[Point, ...]
    faces: tuple[Face, ...]
    defining_points: tuple[WeightedPoint, ...] = field(compare=False)

    @property
    def k(self) -> int:
        return len(self.vertices) - 1

    def contains(self, p: Point) -> bool:
        return all(f.normal[0] * p[0] + f.normal[1] * p[1] >= f.value() for f in self.faces)


@dataclass(frozen=True)
class VertexNormals:
    eta: IntVec
    zeta: IntVec
    det: int


@dataclass(frozen=True)
class PolygonScalars:
    b_local: Fraction
    r: Fraction
    lambda0_x: Fraction
    s: Fraction
    k: int


@dataclass(frozen=True)
class BetaRay:
    kind: str
    can: IntVec
    res: IntVec
    face_value: Fraction

    @property
    def multiple(self) -> int:
        return (self.res[0] or self.res[1]) // (self.can[0] or self.can[1])


@dataclass(frozen=True)
class BetaData:
    rays: tuple[BetaRay, ...]
    notes: tuple[str, ...] = ()


@dataclass
class DivisibilityReport:
    passed: bool
    witnesses: list[dict]
    notes: list[str]


def primitive(x: Fraction, y: Fraction) -> IntVec:
    """Smallest integer vector on the ray through ``(x, y)``."""
    x, y = Fraction(x), Fraction(y)
    if not x and not y:
        raise ValueError("zero vector has no primitive direction")
    den = x.denominator * y.denominator // gcd(x.denominator, y.denominator)
    X, Y = int(x * den), int(y * den)
    g = gcd(X, Y)
    return X // g, Y // g


def _cross(o: Point, a: Point, b: Point) -> Fraction:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def build_polygon(points: Sequence[WeightedPoint]) -> NewtonPolygon:
    if not points:
        raise ValueError("a Newton polygon needs at least one point")
    pts = sorted({p.xy for p in points}, key=lambda p: (p[1], p[0]))
    # non-dominated staircase: y increasing, x strictly decreasing
    stair: list[Point] = []
    for p in pts:
        if not stair or p[0] < stair[-1][0]:
            stair.append(p)
    hull: list[Point] = []
    for p in stair:
        while len(hull) >= 2 and _cross(hull[-2], hull[-1], p) >= 0:
            hull.pop()
        hull.append(p)

    faces = [Face("horizontal", (0, 1), (hull[0],))]
    for prev, cur in zip(hull, hull[1:]):
        faces.append(Face("edge", primitive(cur[1] - prev[1], prev[0] - cur[0]), (prev, cur)))
    faces.append(Face("vertical", (1, 0), (hull[-1],)))
    return NewtonPolygon(tuple(hull), tuple(faces), tuple(points))


def vertex_normals(p: NewtonPolygon, j: int) -> VertexNormals:
    """Normals of the two faces at vertex ``j``: ``eta`` on the previous side, ``zeta`` on the next."""
    if not 0 <= j <= p.k:
        raise IndexError(f"vertex index {j} out of range 0..{p.k}")
    eta = p.faces[j].normal
    zeta = p.faces[j + 1].normal
    return VertexNormals(eta, zeta, eta[0] * zeta[1] - eta[1] * zeta[0])


def polygon_scalars(p: NewtonPolygon) -> PolygonScalars:
    v = p.vertices
    if p.k >= 1:
        s = 1 - (v[0][0] - v[1][0]) / (v[0][1] - v[1][1])
    else:
        s = Fraction(1)
    r = min(q.x for q in p.defining_points)
    return PolygonScalars(b_local=v[0][1], r=r, lambda0_x=v[0][0], s=s, k=p.k)


def _realizing_weight(p: NewtonPolygon, v: Point) -> int:
    return min(q.weight for q in p.defining_points if q.xy == v)


def beta_vectors(p: NewtonPolygon) -> BetaData:
    """Canonical and resolving functionals for every face.

    ``res`` is the smallest multiple of ``can`` taking an integer value on its
    own face.
    """
    rays = []
    notes = []
    for f in p.faces:
        val = f.value()
        m = val.denominator
        rays.append(BetaRay(f.kind, f.normal, (m * f.normal[0], m * f.normal[1]), val))
        if f.kind == "horizontal":
            w = _realizing_weight(p, f.vertices[0])
            if w != m:
                notes.append(
                    f"horizontal ray: integral face value {val} gives beta_res = {rays[-1].res}; "
                    f"scaling by the defining weight {w} instead would give (0, {w}). "
                    "The integral-face-value rule is used."
                )
    return BetaData(tuple(rays), tuple(notes))


def shear(p: NewtonPolygon, n: int) -> NewtonPolygon:
    """Polygon of the same datum in the twisted representation ``W(n)``.

    Each summand ``(a, b)`` becomes ``(a + n*d, b + n*d)`` with weight
    ``(2n+1)*d``, so points move by ``(x, y) -> ((x + n)/(2n+1), (y + n)/(2n+1))``.
    """
    k = 2 * n + 1
    if k <= 0:
        raise ValueError("twist parameter must satisfy 2n+1 > 0")
    pts = [WeightedPoint((q.x + n) / k, (q.y + n) / k, q.weight * k) for q in p.defining_points]
    return build_polygon(pts)


def _incident(p: NewtonPolygon, j: int) -> tuple[Face, Face]:
    return p.faces[j], p.faces[j + 1]


def divisibility_check(p: NewtonPolygon) -> DivisibilityReport:
    """Integrality checks behind the resolving weighted blow-up.

    For each vertex ``v`` and each resolving functional ``beta`` of a face
    through ``v``, ``<beta, v>`` must be an integer (and non-negative when the
    defining points are non-negative).  For each defining point with lattice
    point ``q`` and weight ``e``, writing ``q/e - v = a1*r1 + a2*r2`` along the
    rays at ``v`` (scaled dual to the two functionals), each ``e*a_i`` must be a
    non-negative integer.
    """
    beta = {f: ray for f, ray in zip(p.faces, beta_vectors(p).rays)}
    witnesses: list[dict] = []
    notes: list[str] = []
    ok = True
    nonneg = all(q.x >= 0 and q.y >= 0 for q in p.defining_points)
    if not nonneg:
        notes.append("defining points have negative coordinates; sign of <beta_res, v> not checked")
    integral = all(c.denominator == 1 for q in p.defining_points for c in q.lattice_point())
    if not integral:
        notes.append("weight * point is not integral for some defining point; e*a_i integrality not checked")

    for j, v in enumerate(p.vertices):
        f1, f2 = _incident(p, j)
        b1, b2 = beta[f1].res, beta[f2].res
        for b in (b1, b2):
            val = b[0] * v[0] + b[1] * v[1]
            good = val.denominator == 1 and (val >= 0 or not nonneg)
            ok &= good
            witnesses.append({"check": "vertex_value", "vertex": j, "beta": b, "value": val, "pass": good})
        # r1 runs along f2 (so beta2 vanishes on it) and is scaled so <b1, r1> = 1
        r1 = _ray_dual(b2, b1)
        r2 = _ray_dual(b1, b2)
        det = r1[0] * r2[1] - r1[1] * r2[0]
        for qi, q in enumerate(p.defining_points):
            dx, dy = q.x - v[0], q.y - v[1]
            a1 = (dx * r2[1] - dy * r2[0]) / det
            a2 = (r1[0] * dy - r1[1] * dx) / det
            for name, a in (("a1", a1), ("a2", a2)):
                ea = q.weight * a
                good = ea >= 0 and (ea.denominator == 1 or not integral)
                ok &= good
                if not good:
                    witnesses.append({"check": "point_coordinate", "vertex": j, "point": qi,
                                      "coordinate": name, "value": ea, "pass": False})
    return DivisibilityReport(ok, witnesses, notes)


def _ray_dual(vanish: IntVec, unit: IntVec) -> tuple[Fraction, Fraction]:
    """Direction killed by ``vanish`` on which ``unit`` takes the value 1."""
    d = (Fraction(-vanish[1]), Fraction(vanish[0]))
    val = unit[0] * d[0] + unit[1] * d[1]
    return (d[0] / val, d[1] / val)
