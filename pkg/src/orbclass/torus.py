"""Equivariant classes of orbit closures for a torus acting diagonally.

For ``W = (+) W_i`` with ``T`` acting on ``W_i`` by the character ``chi_i``,
the orbit closure of ``w`` has class ``e_sigma * c_n(W)``.  Here ``sigma`` is
the cone spanned by the characters with ``w_i != 0``, ``e_sigma`` its
equivariant multiplicity, and the class vanishes when ``sigma`` contains a line.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import gcd

from .algebra import LinearForm, Polynomial, RationalTerm, RationalTermSum, exact_divide, sum_terms
from .errors import SchemaError, ValidationError

IntVec = tuple[int, ...]


def torus_variables(d: int) -> tuple[str, ...]:
    return ("x", "y", "z")[:d] if d <= 3 else tuple(f"x{i}" for i in range(1, d + 1))


@dataclass(frozen=True)
class CharacterList:
    d: int
    chars: tuple[IntVec, ...]
    support: tuple[bool, ...]

    def __init__(self, d: int, chars: Sequence[Sequence[int]], support: Sequence[bool] | None = None):
        if int(d) != d or d < 1:
            raise SchemaError("d must be a positive integer")
        chars = tuple(tuple(int(c) for c in ch) for ch in chars)
        if any(len(ch) != d for ch in chars):
            raise SchemaError(f"every character needs {d} coordinates")
        support = tuple(bool(s) for s in support) if support is not None else (True,) * len(chars)
        if len(support) != len(chars):
            raise SchemaError("support must have one flag per character")
        if not any(support):
            raise ValidationError("at least one character must be supported (w != 0)")
        object.__setattr__(self, "d", int(d))
        object.__setattr__(self, "chars", chars)
        object.__setattr__(self, "support", support)

    @property
    def variables(self) -> tuple[str, ...]:
        return torus_variables(self.d)

    def cone(self) -> Cone:
        return Cone(self.d, [ch for ch, s in zip(self.chars, self.support) if s])


def _primitive(v: Sequence[int]) -> IntVec:
    g = 0
    for c in v:
        g = gcd(g, c)
    return tuple(c // g for c in v) if g else tuple(v)


@dataclass(frozen=True)
class Cone:
    """Cone spanned by integer generators; zero vectors and repeated rays are dropped."""

    d: int
    generators: tuple[IntVec, ...]

    def __init__(self, d: int, generators: Sequence[Sequence[int]]):
        seen: list[IntVec] = []
        for g in generators:
            p = _primitive([int(c) for c in g])
            if len(p) != d:
                raise SchemaError(f"generator {tuple(g)} does not have {d} coordinates")
            if any(p) and p not in seen:
                seen.append(p)
        object.__setattr__(self, "d", d)
        object.__setattr__(self, "generators", tuple(seen))

    @property
    def dim(self) -> int:
        return rank(self.generators)

    @property
    def full_dimensional(self) -> bool:
        return self.dim == self.d


@dataclass(frozen=True)
class SimplicialPiece:
    generators: tuple[IntVec, ...]
    det_abs: int


@dataclass(frozen=True)
class TorusResult:
    pointed: bool
    e_sigma: RationalTermSum | None
    poly: Polynomial
    witness: tuple[Fraction, ...] | None = None
    notes: tuple[str, ...] = field(default=())


# -- exact linear algebra ----------------------------------------------------

def _rref(rows: Sequence[Sequence]) -> tuple[list[list[Fraction]], list[int]]:
    m = [[Fraction(c) for c in r] for r in rows]
    pivots: list[int] = []
    ncols = len(m[0]) if m else 0
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    return m[:r], pivots


def rank(rows: Sequence[Sequence]) -> int:
    return len(_rref(rows)[1]) if rows else 0


def det(rows: Sequence[Sequence]) -> Fraction:
    m = [[Fraction(c) for c in r] for r in rows]
    n = len(m)
    out = Fraction(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if m[i][c]), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            out = -out
        out *= m[c][c]
        for i in range(c + 1, n):
            f = m[i][c] / m[c][c]
            if f:
                m[i] = [a - f * b for a, b in zip(m[i], m[c])]
    return out


def lattice_index(vectors: Sequence[IntVec]) -> int:
    """Index of the lattice spanned by ``vectors`` in its saturation: gcd of maximal minors."""
    k = len(vectors)
    if k == 0:
        return 1
    g = 0
    for cols in combinations(range(len(vectors[0])), k):
        g = gcd(g, int(det([[v[c] for c in cols] for v in vectors])))
    return g


def _span_coordinates(gens: Sequence[IntVec]) -> list[int]:
    """Coordinates on which projection is injective on the span of ``gens``."""
    return _rref(gens)[1] if gens else []


def _facet_normal(facet: Sequence[Sequence[Fraction]]) -> list[Fraction]:
    """``n`` with ``n . x = det(facet rows, x)`` in dimension ``len(facet) + 1``."""
    k = len(facet) + 1
    out = []
    for j in range(k):
        minor = [[row[c] for c in range(k) if c != j] for row in facet]
        out.append((-1) ** (k - 1 + j) * det(minor))
    return out


def _dot(a: Sequence, b: Sequence) -> Fraction:
    return sum((Fraction(x) * y for x, y in zip(a, b)), Fraction(0))


# -- pointedness -------------------------------------------------------------

def _fourier_motzkin(rows: list[tuple[list[Fraction], Fraction]], d: int) -> list[Fraction] | None:
    """Solve ``a . lam >= c`` for all rows, returning a solution or ``None``."""
    if d == 0:
        return [] if all(c <= 0 for _, c in rows) else None
    last = d - 1
    pos, neg, rest = [], [], []
    for a, c in rows:
        (pos if a[last] > 0 else neg if a[last] < 0 else rest).append((a, c))
    reduced = [(a[:last], c) for a, c in rest]
    for ap, cp in pos:
        for an, cn in neg:
            fp, fn = -an[last], ap[last]
            reduced.append(([fp * x + fn * y for x, y in zip(ap[:last], an[:last])], fp * cp + fn * cn))
    # drop duplicates to keep the elimination small
    uniq = {(tuple(a), c): (a, c) for a, c in reduced}
    sol = _fourier_motzkin(list(uniq.values()), last)
    if sol is None:
        return None
    lo = max(((c - _dot(a[:last], sol)) / a[last] for a, c in pos), default=None)
    hi = min(((c - _dot(a[:last], sol)) / a[last] for a, c in neg), default=None)
    if lo is None and hi is None:
        val = Fraction(0)
    elif lo is None:
        val = hi
    elif hi is None:
        val = lo
    else:
        if lo > hi:
            return None
        val = lo
    return sol + [val]


def pointedness_witness(cone: Cone) -> tuple[Fraction, ...] | None:
    """A ``lam`` with ``<g, lam> >= 1`` on every generator, or ``None`` if the cone contains a line."""
    rows = [([Fraction(c) for c in g], Fraction(1)) for g in cone.generators]
    sol = _fourier_motzkin(rows, cone.d)
    if sol is None:
        return None
    if any(_dot(g, sol) <= 0 for g in cone.generators):
        raise ArithmeticError("Fourier-Motzkin back substitution produced an invalid witness")
    return tuple(sol)


def is_pointed(c: CharacterList | Cone) -> bool:
    cone = c.cone() if isinstance(c, CharacterList) else c
    return pointedness_witness(cone) is not None


# -- triangulation and e_sigma ------------------------------------------------

def triangulate(cone: Cone) -> list[SimplicialPiece]:
    """Placing triangulation in generator order.

    Lower-dimensional cones are triangulated inside their span; ``det_abs`` is
    then the index of the piece's lattice in the saturated span lattice.
    """
    if not is_pointed(cone):
        raise ValidationError("cannot triangulate a cone that contains a line")
    gens = cone.generators
    k = cone.dim
    if k == 0:
        return [SimplicialPiece((), 1)]
    coords = _span_coordinates(gens)
    proj = {g: [Fraction(g[c]) for c in coords] for g in gens}

    first: list[IntVec] = []
    for g in gens:
        if rank(first + [g]) > len(first):
            first.append(g)
        if len(first) == k:
            break
    simplices: list[tuple[IntVec, ...]] = [tuple(first)]
    for g in gens:
        if g in first:
            continue
        # boundary facets: those lying in exactly one simplex
        count: dict[frozenset, list[tuple[IntVec, ...]]] = {}
        for s in simplices:
            for i in range(k):
                count.setdefault(frozenset(s[:i] + s[i + 1:]), []).append(s)
        new = []
        for facet, owners in count.items():
            if len(owners) != 1:
                continue
            fl = sorted(facet)
            opposite = next(v for v in owners[0] if v not in facet)
            normal = _facet_normal([proj[v] for v in fl])
            side = _dot(normal, proj[opposite])
            if side * _dot(normal, proj[g]) < 0:
                new.append(tuple(fl) + (g,))
        simplices.extend(new)
    return [SimplicialPiece(s, lattice_index(s)) for s in simplices]


def equivariant_multiplicity(cone: Cone, variables: Sequence[str] | None = None) -> RationalTermSum:
    variables = tuple(variables or torus_variables(cone.d))
    terms = []
    for piece in triangulate(cone):
        den = [(LinearForm(g), 1) for g in piece.generators]
        terms.append(RationalTerm(piece.det_abs, Polynomial.one(variables), den))
    return RationalTermSum(terms)


def torus_orbit_class(c: CharacterList) -> TorusResult:
    variables = c.variables
    cone = c.cone()
    witness = pointedness_witness(cone)
    if witness is None:
        return TorusResult(False, None, Polynomial.zero(variables))
    notes = []
    if not cone.full_dimensional:
        notes.append(
            f"cone has dimension {cone.dim} < {c.d}: e_sigma is the multiplicity in the saturated "
            "span lattice and c_n(W) is the full product of characters"
        )
    if any(not any(ch) for ch in c.chars):
        notes.append("a zero character makes c_n(W), hence the class, vanish")
    e = equivariant_multiplicity(cone, variables)
    combined = sum_terms(e)
    top = Polynomial.one(variables)
    for ch in c.chars:
        top = top * Polynomial.linear(variables, ch)
    poly = exact_divide((combined.numerator * top).scale(combined.scalar), combined.denominator_polynomial())
    return TorusResult(True, e, poly, witness, tuple(notes))


# -- independent volume oracle ----------------------------------------------

def _facets_brute_force(gens: Sequence[IntVec]) -> list[tuple[IntVec, ...]]:
    """Facets of a pointed cone, by testing every hyperplane through ``dim - 1`` generators."""
    k = rank(gens)
    coords = _span_coordinates(gens)
    proj = {g: [Fraction(g[c]) for c in coords] for g in gens}
    found: dict[frozenset, tuple[IntVec, ...]] = {}
    for sub in combinations(gens, k - 1):
        if rank(sub) != k - 1:
            continue
        normal = _facet_normal([proj[g] for g in sub])
        vals = [_dot(normal, proj[g]) for g in gens]
        if all(v >= 0 for v in vals) or all(v <= 0 for v in vals):
            on = tuple(g for g, v in zip(gens, vals) if v == 0)
            found[frozenset(on)] = on
    return list(found.values())


def _pulling(gens: Sequence[IntVec]) -> list[tuple[IntVec, ...]]:
    """Pulling triangulation: cone from the first generator over the facets avoiding it."""
    k = rank(gens)
    if k == 1:
        return [(gens[0],)]
    apex = gens[0]
    out = []
    for facet in _facets_brute_force(gens):
        if apex in facet:
            continue
        out.extend(s + (apex,) for s in _pulling(facet))
    return out


def volume_oracle(cone: Cone, lam: Sequence, *, shuffle: int = 1) -> Fraction:
    """``d! * Vol{x in cone : <x, lam> <= 1}`` for a full-dimensional cone.

    Generators are reversed and rotated by ``shuffle`` before
    a pulling triangulation, independent of :func:`triangulate`.
    """
    lam = [Fraction(x) for x in lam]
    if len(lam) != cone.d:
        raise SchemaError("lambda has the wrong dimension")
    gens = list(cone.generators)
    if any(_dot(g, lam) <= 0 for g in gens):
        raise ValidationError("lambda must be strictly positive on every generator")
    if not cone.full_dimensional:
        raise ValidationError("volume oracle needs a full-dimensional cone")
    order = gens[::-1]
    cut = shuffle % len(order)
    order = order[cut:] + order[:cut]
    total = Fraction(0)
    for simplex in _pulling(order):
        total += abs(det([[Fraction(c) / _dot(g, lam) for c in g] for g in simplex]))
    return total
