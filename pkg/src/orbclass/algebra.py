"""Exact sparse polynomials over Q and rational terms with linear-form denominators.

Every denominator that shows up in the orbit-class formulas is a product of
linear forms, so a rational function is stored as

    scalar * numerator / prod(form_k ** mult_k)

with each form normalised (first nonzero coefficient equal to 1).  Combining
terms only needs the least common multiple of two such multisets, and the
final polynomial is recovered by exact division.
"""

from __future__ import annotations

from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass
from fractions import Fraction
from types import MappingProxyType
from typing import Union

from .errors import NonzeroRemainder

Exponent = tuple[int, ...]
Scalar = Union[int, Fraction]

GL2_VARS = ("v1", "v2")


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        raise TypeError("floating point coefficients are not accepted")
    return Fraction(x)


def format_fraction(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


class Polynomial:
    """Sparse polynomial with rational coefficients in a fixed variable list.

    Instances are immutable.  Arithmetic between polynomials over different
    variable lists raises ``ValueError``; plain ints and Fractions are
    promoted to constants.
    """

    __slots__ = ("_vars", "_terms", "_hash")

    def __init__(self, variables: Sequence[str], terms: Mapping[Sequence[int], Scalar] | None = None):
        self._vars = tuple(variables)
        nv = len(self._vars)
        clean: dict[Exponent, Fraction] = {}
        for exp, coef in (terms or {}).items():
            exp = tuple(int(e) for e in exp)
            if len(exp) != nv:
                raise ValueError(f"exponent {exp} does not match {nv} variables")
            if any(e < 0 for e in exp):
                raise ValueError(f"negative exponent {exp}")
            c = _frac(coef)
            if c:
                clean[exp] = clean.get(exp, 0) + c
        self._terms = {e: c for e, c in clean.items() if c}
        self._hash = None

    @classmethod
    def _raw(cls, variables: tuple[str, ...], terms: dict[Exponent, Fraction]) -> Polynomial:
        # trusted constructor: terms already canonical and zero-free
        p = object.__new__(cls)
        p._vars = variables
        p._terms = terms
        p._hash = None
        return p

    # -- constructors ---------------------------------------------------
    @classmethod
    def zero(cls, variables: Sequence[str]) -> Polynomial:
        return cls._raw(tuple(variables), {})

    @classmethod
    def constant(cls, variables: Sequence[str], c: Scalar) -> Polynomial:
        variables = tuple(variables)
        c = _frac(c)
        return cls._raw(variables, {(0,) * len(variables): c} if c else {})

    @classmethod
    def one(cls, variables: Sequence[str]) -> Polynomial:
        return cls.constant(variables, 1)

    @classmethod
    def var(cls, variables: Sequence[str], i: int) -> Polynomial:
        variables = tuple(variables)
        exp = tuple(1 if k == i else 0 for k in range(len(variables)))
        return cls._raw(variables, {exp: Fraction(1)})

    @classmethod
    def linear(cls, variables: Sequence[str], coeffs: Sequence[Scalar]) -> Polynomial:
        variables = tuple(variables)
        if len(coeffs) != len(variables):
            raise ValueError("one coefficient per variable expected")
        n = len(variables)
        return cls(variables, {tuple(1 if k == i else 0 for k in range(n)): c for i, c in enumerate(coeffs)})

    # -- basic accessors ------------------------------------------------
    @property
    def variables(self) -> tuple[str, ...]:
        return self._vars

    @property
    def terms(self) -> Mapping[Exponent, Fraction]:
        return MappingProxyType(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(e) for e in self._terms), default=-1)

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self._terms}) <= 1

    def coefficient(self, exp: Sequence[int]) -> Fraction:
        return self._terms.get(tuple(exp), Fraction(0))

    def leading(self) -> tuple[Exponent, Fraction]:
        """Leading term in lex order (first variable most significant)."""
        e = max(self._terms)
        return e, self._terms[e]

    # -- arithmetic -----------------------------------------------------
    def _coerce(self, other) -> Polynomial:
        if isinstance(other, Polynomial):
            if other._vars != self._vars:
                raise ValueError(f"variable mismatch: {self._vars} vs {other._vars}")
            return other
        if isinstance(other, (int, Fraction)):
            return Polynomial.constant(self._vars, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self._terms)
        for e, c in other._terms.items():
            s = out.get(e, 0) + c
            if s:
                out[e] = s
            else:
                out.pop(e, None)
        return Polynomial._raw(self._vars, out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._raw(self._vars, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def scale(self, c: Scalar) -> Polynomial:
        c = _frac(c)
        if not c:
            return Polynomial.zero(self._vars)
        return Polynomial._raw(self._vars, {e: c * v for e, v in self._terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out: dict[Exponent, Fraction] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return Polynomial._raw(self._vars, {e: c for e, c in out.items() if c})

    __rmul__ = __mul__

    def __pow__(self, k: int) -> Polynomial:
        if k < 0:
            raise ValueError("negative power")
        result = Polynomial.one(self._vars)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Polynomial.constant(self._vars, other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self._vars == other._vars and self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self._vars, frozenset(self._terms.items())))
        return self._hash

    def divmod(self, q: Polynomial) -> tuple[Polynomial, Polynomial]:
        """Multivariate division by a single divisor in lex order.

        The remainder has no term divisible by the leading term of ``q``;
        it is zero exactly when ``q`` divides ``self``.
        """
        q = self._coerce(q)
        if q.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        lt_e, lt_c = q.leading()
        work = dict(self._terms)
        quot: dict[Exponent, Fraction] = {}
        rem: dict[Exponent, Fraction] = {}
        while work:
            e = max(work)
            c = work[e]
            if all(a >= b for a, b in zip(e, lt_e)):
                shift = tuple(a - b for a, b in zip(e, lt_e))
                f = c / lt_c
                quot[shift] = quot.get(shift, 0) + f
                for qe, qc in q._terms.items():
                    key = tuple(a + b for a, b in zip(qe, shift))
                    v = work.get(key, 0) - f * qc
                    if v:
                        work[key] = v
                    else:
                        work.pop(key, None)
            else:
                rem[e] = c
                del work[e]
        return (Polynomial._raw(self._vars, {e: c for e, c in quot.items() if c}),
                Polynomial._raw(self._vars, rem))

    # -- calculus and evaluation ----------------------------------------
    def diff(self, i: int) -> Polynomial:
        out = {}
        for e, c in self._terms.items():
            if e[i]:
                ne = e[:i] + (e[i] - 1,) + e[i + 1:]
                out[ne] = c * e[i]
        return Polynomial._raw(self._vars, out)

    def evaluate(self, point: Sequence[Scalar]) -> Fraction:
        if len(point) != len(self._vars):
            raise ValueError("point has wrong arity")
        pt = [_frac(x) for x in point]
        total = Fraction(0)
        for e, c in self._terms.items():
            t = c
            for x, k in zip(pt, e):
                if k:
                    t *= x ** k
            total += t
        return total

    def permute(self, perm: Sequence[int]) -> Polynomial:
        """Rename variable i to variable perm[i]."""
        out = {}
        for e, c in self._terms.items():
            ne = [0] * len(e)
            for i, k in enumerate(e):
                ne[perm[i]] = k
            out[tuple(ne)] = c
        return Polynomial._raw(self._vars, out)

    def swap(self) -> Polynomial:
        if len(self._vars) != 2:
            raise ValueError("swap needs exactly two variables")
        return self.permute((1, 0))

    def is_symmetric(self) -> bool:
        return self == self.swap()

    # -- rendering ------------------------------------------------------
    def sorted_terms(self) -> list[tuple[Exponent, Fraction]]:
        """Graded lex, highest first; the first variable dominates ties."""
        return sorted(self._terms.items(), key=lambda t: (sum(t[0]), t[0]), reverse=True)

    def to_text(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for i, (e, c) in enumerate(self.sorted_terms()):
            mono = "*".join(
                v if k == 1 else f"{v}^{k}" for v, k in zip(self._vars, e) if k
            )
            mag = abs(c)
            if not mono:
                body = format_fraction(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{format_fraction(mag)}*{mono}"
            if c < 0:
                parts.append("-" + body)
            else:
                parts.append(("+" if i else "") + body)
        return "".join(parts)

    def to_json(self) -> dict:
        return {
            "variables": list(self._vars),
            "terms": [{"exp": list(e), "coef": format_fraction(c)} for e, c in self.sorted_terms()],
        }

    @classmethod
    def from_json(cls, obj: Mapping, variables: Sequence[str] | None = None) -> Polynomial:
        variables = tuple(obj.get("variables") or variables or ())
        return cls(variables, {tuple(t["exp"]): Fraction(t["coef"]) for t in obj["terms"]})

    def __str__(self) -> str:
        return self.to_text()

    def __repr__(self) -> str:
        return f"Polynomial({self._vars}, {self.to_text()!r})"


def poly_arith(op: str, p: Polynomial, q: Polynomial | Scalar) -> Polynomial:
    if op == "add":
        return p + q
    if op == "sub":
        return p - q
    if op == "mul":
        return p * q
    if op == "scale":
        if isinstance(q, Polynomial):
            raise TypeError("scale takes a rational, not a polynomial")
        return p.scale(q)
    raise ValueError(f"unknown operation {op!r}")


def exact_divide(p: Polynomial, q: Polynomial) -> Polynomial:
    quot, rem = p.divmod(q)
    if not rem.is_zero():
        raise NonzeroRemainder(f"remainder {rem.to_text()} when dividing by {q.to_text()}")
    return quot


@dataclass(frozen=True, order=True)
class LinearForm:
    coeffs: tuple[Fraction, ...]

    def __init__(self, coeffs: Iterable[Scalar]):
        object.__setattr__(self, "coeffs", tuple(_frac(c) for c in coeffs))

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def normalized(self) -> tuple[Fraction, LinearForm]:
        """Return ``(lead, form)`` with ``self == lead * form`` and form's leading coefficient 1."""
        for c in self.coeffs:
            if c:
                return c, LinearForm(x / c for x in self.coeffs)
        raise ValueError("the zero linear form cannot be normalised")

    def evaluate(self, point: Sequence[Scalar]) -> Fraction:
        return sum((c * _frac(x) for c, x in zip(self.coeffs, point)), Fraction(0))

    def as_polynomial(self, variables: Sequence[str]) -> Polynomial:
        return Polynomial.linear(variables, self.coeffs)

    def swapped(self) -> LinearForm:
        return LinearForm(reversed(self.coeffs))

    def to_text(self, variables: Sequence[str]) -> str:
        return self.as_polynomial(variables).to_text()


def _merge(factors: Iterable[tuple[LinearForm, int]]) -> tuple[Fraction, tuple[tuple[LinearForm, int], ...]]:
    scale = Fraction(1)
    acc: dict[LinearForm, int] = {}
    for form, mult in factors:
        if mult < 0:
            raise ValueError("denominator multiplicities must be positive")
        if mult == 0:
            continue
        lead, norm = form.normalized()
        scale /= lead ** mult
        acc[norm] = acc.get(norm, 0) + mult
    return scale, tuple(sorted(acc.items(), key=lambda fm: fm[0].coeffs, reverse=True))


class RationalTerm:
    """``scalar * numerator / prod(form ** mult)`` with normalised, merged forms."""

    __slots__ = ("scalar", "numerator", "denominator")

    def __init__(self, scalar: Scalar, numerator: Polynomial, denominator: Iterable[tuple[LinearForm, int]] = ()):
        lead, den = _merge(denominator)
        for form, _ in den:
            if len(form.coeffs) != len(numerator.variables):
                raise ValueError("denominator form arity differs from numerator variables")
        self.scalar = _frac(scalar) * lead
        self.numerator = numerator
        self.denominator = den

    @property
    def variables(self) -> tuple[str, ...]:
        return self.numerator.variables

    @classmethod
    def monomial(cls, variables: Sequence[str], scalar: Scalar, denominator: Iterable[tuple[Sequence[Scalar], int]]) -> RationalTerm:
        """Convenience: constant numerator, denominator given as raw coefficient lists."""
        return cls(scalar, Polynomial.one(variables), [(LinearForm(c), m) for c, m in denominator])

    def is_zero(self) -> bool:
        return not self.scalar or self.numerator.is_zero()

    def evaluate(self, point: Sequence[Scalar]) -> Fraction:
        den = Fraction(1)
        for form, mult in self.denominator:
            val = form.evaluate(point)
            if not val:
                raise ZeroDivisionError("point lies on a denominator factor")
            den *= val ** mult
        return self.scalar * self.numerator.evaluate(point) / den

    def __mul__(self, other) -> RationalTerm:
        if isinstance(other, RationalTerm):
            return RationalTerm(self.scalar * other.scalar, self.numerator * other.numerator,
                                self.denominator + other.denominator)
        if isinstance(other, Polynomial):
            return RationalTerm(self.scalar, self.numerator * other, self.denominator)
        if isinstance(other, (int, Fraction)):
            return RationalTerm(self.scalar * other, self.numerator, self.denominator)
        return NotImplemented

    __rmul__ = __mul__

    def __neg__(self) -> RationalTerm:
        return RationalTerm(-self.scalar, self.numerator, self.denominator)

    def swap(self) -> RationalTerm:
        if len(self.variables) != 2:
            raise ValueError("swap needs exactly two variables")
        return RationalTerm(self.scalar, self.numerator.swap(),
                            [(f.swapped(), m) for f, m in self.denominator])

    def denominator_polynomial(self) -> Polynomial:
        out = Polynomial.one(self.variables)
        for form, mult in self.denominator:
            out = out * form.as_polynomial(self.variables) ** mult
        return out

    def cancel(self) -> RationalTerm:
        """Strip linear factors of the denominator that divide the numerator."""
        num = self.numerator
        den = []
        for form, mult in self.denominator:
            fp = form.as_polynomial(self.variables)
            while mult and not num.is_zero():
                quot, rem = num.divmod(fp)
                if not rem.is_zero():
                    break
                num, mult = quot, mult - 1
            if num.is_zero():
                return RationalTerm(0, Polynomial.zero(self.variables))
            if mult:
                den.append((form, mult))
        return RationalTerm(self.scalar, num, den)

    def to_polynomial(self) -> Polynomial:
        """Exact quotient; raises ``NonzeroRemainder`` if this is not a polynomial."""
        return exact_divide(self.numerator.scale(self.scalar), self.denominator_polynomial())

    def to_text(self) -> str:
        num = self.numerator.scale(self.scalar)
        if not self.denominator:
            return num.to_text()
        factors = []
        for form, mult in self.denominator:
            ft = form.to_text(self.variables)
            if len(form.as_polynomial(self.variables).terms) > 1:
                ft = f"({ft})"
            factors.append(ft if mult == 1 else f"{ft}^{mult}")
        nt = num.to_text()
        if len(num.terms) > 1:
            nt = f"({nt})"
        return f"{nt}/({'*'.join(factors)})"

    def to_json(self) -> dict:
        return {
            "scalar": format_fraction(self.scalar),
            "numerator": self.numerator.to_json(),
            "denominator": [
                {"form": [format_fraction(c) for c in f.coeffs], "mult": m} for f, m in self.denominator
            ],
        }

    def __repr__(self) -> str:
        return f"RationalTerm({self.to_text()!r})"


@dataclass(frozen=True)
class RationalTermSum:
    terms: tuple[RationalTerm, ...]

    def __init__(self, terms: Iterable[RationalTerm]):
        object.__setattr__(self, "terms", tuple(terms))

    def __add__(self, other: RationalTermSum) -> RationalTermSum:
        return RationalTermSum(self.terms + other.terms)

    def evaluate(self, point: Sequence[Scalar]) -> Fraction:
        return sum((t.evaluate(point) for t in self.terms), Fraction(0))

    def to_json(self) -> list:
        return [t.to_json() for t in self.terms]


def sum_terms(s: RationalTermSum | Iterable[RationalTerm]) -> RationalTerm:
    """Combine a sum of terms over the lcm of their denominators (no cancellation)."""
    terms = s.terms if isinstance(s, RationalTermSum) else tuple(s)
    if not terms:
        raise ValueError("cannot infer variables of an empty sum")
    variables = terms[0].variables
    lcm: dict[LinearForm, int] = {}
    for t in terms:
        if t.variables != variables:
            raise ValueError("terms over different variable lists")
        for form, mult in t.denominator:
            lcm[form] = max(lcm.get(form, 0), mult)
    form_polys = {f: f.as_polynomial(variables) for f in lcm}
    numerator = Polynomial.zero(variables)
    for t in terms:
        if t.is_zero():
            continue
        own = dict(t.denominator)
        part = t.numerator.scale(t.scalar)
        for form, mult in lcm.items():
            extra = mult - own.get(form, 0)
            if extra:
                part = part * form_polys[form] ** extra
        numerator = numerator + part
    return RationalTerm(1, numerator, lcm.items())


def symmetrize(t: RationalTerm) -> RationalTermSum:
    if len(t.variables) != 2:
        raise ValueError("symmetrisation is defined for two variables")
    return RationalTermSum((t, t.swap()))


def substitute(p: Polynomial, images: Sequence[LinearForm | Polynomial]) -> Polynomial:
    """Compose ``p`` with ``x_i -> images[i]``."""
    if len(images) != len(p.variables):
        raise ValueError("one image per variable expected")
    polys = [im if isinstance(im, Polynomial) else im.as_polynomial(p.variables) for im in images]
    out_vars = polys[0].variables if polys else p.variables
    powers: list[dict[int, Polynomial]] = [{0: Polynomial.one(out_vars)} for _ in polys]

    def power(i: int, k: int) -> Polynomial:
        cache = powers[i]
        if k not in cache:
            cache[k] = power(i, k - 1) * polys[i]
        return cache[k]

    result = Polynomial.zero(out_vars)
    for e, c in p.terms.items():
        mono = Polynomial.constant(out_vars, c)
        for i, k in enumerate(e):
            if k:
                mono = mono * power(i, k)
        result = result + mono
    return result


def specialize_equal(p: Polynomial, scale: Scalar) -> tuple[Fraction, int]:
    """Write ``p(t*scale, ..., t*scale) = coefficient * t**power`` for homogeneous ``p``."""
    if not p.is_homogeneous():
        raise ValueError("specialize_equal needs a homogeneous polynomial")
    if p.is_zero():
        return Fraction(0), 0
    deg = p.degree()
    return sum(p.terms.values(), Fraction(0)) * _frac(scale) ** deg, deg
