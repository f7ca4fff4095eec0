"""Command-line front end.

    orbclass <command> [--input FILE|-] [--json|--text] [command flags]

Commands: class, elliptic, ratmap, torus, polygon, verify, plus ``job`` which
reads a ``{"command": ..., "payload": ...}`` wrapper.  Exit status is 0 on
success, 1 on invalid input and 2 when an internal check fails.
"""

from __future__ import annotations

import argparse
import json
import sys
from collections.abc import Callable, Mapping, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

from . import applications as app
from .algebra import Polynomial, format_fraction
from .errors import SchemaError, ValidationError
from .newton import (
    NewtonPolygon,
    WeightedPoint,
    beta_vectors,
    build_polygon,
    divisibility_check,
    polygon_scalars,
    vertex_normals,
)
from .orbit import (
    EquivariantClass,
    OrbitDatum,
    OrbitPoint,
    Representation,
    localization_oracle,
    orbit_class,
    point_polygon,
    projective_degree,
    term_F,
    twist_class,
    twist_rep,
    validate,
    with_extra_point,
)
from .torus import CharacterList, torus_orbit_class, triangulate

COMMANDS = ("class", "elliptic", "ratmap", "torus", "polygon", "verify")


@dataclass
class JobSpec:
    command: str
    payload: dict
    output: str = "json"


@dataclass
class Report:
    result: dict
    notes: list[str] = field(default_factory=list)
    checks: list[dict] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c["pass"] for c in self.checks)

    def to_json(self) -> str:
        obj = {"result": self.result, "notes": self.notes, "checks": self.checks}
        return json.dumps(obj, sort_keys=True, indent=2)

    def to_text(self) -> str:
        lines = []
        for key in sorted(self.result):
            val = self.result[key]
            if isinstance(val, (str, int, bool)) or val is None:
                lines.append(f"{key}: {val}")
            else:
                lines.append(f"{key}: {json.dumps(val, sort_keys=True)}")
        lines += [f"note: {n}" for n in self.notes]
        lines += [f"check {c['name']}: {'pass' if c['pass'] else 'FAIL'}" for c in self.checks]
        return "\n".join(lines)


# -- schema helpers -----------------------------------------------------------

def _require(obj: Mapping, key: str, path: str):
    if not isinstance(obj, Mapping):
        raise SchemaError(f"{path}: expected an object")
    if key not in obj:
        raise SchemaError(f"{path}.{key}: missing")
    return obj[key]


def _obj(x, path: str) -> Mapping:
    if not isinstance(x, Mapping):
        raise SchemaError(f"{path}: expected an object")
    return x


def _int(x, path: str) -> int:
    if isinstance(x, bool) or not isinstance(x, int):
        raise SchemaError(f"{path}: expected an integer, got {x!r}")
    return x


def _bool(x, path: str) -> bool:
    if not isinstance(x, bool):
        raise SchemaError(f"{path}: expected true or false, got {x!r}")
    return x


def _list(x, path: str) -> list:
    if not isinstance(x, list):
        raise SchemaError(f"{path}: expected a list")
    return x


def _rational(x, path: str) -> Fraction:
    if isinstance(x, bool) or isinstance(x, float):
        raise SchemaError(f"{path}: use an integer or a \"p/q\" string, not {x!r}")
    try:
        return Fraction(x)
    except (TypeError, ValueError, ZeroDivisionError):
        raise SchemaError(f"{path}: not a rational number: {x!r}") from None


def _ff(x: Fraction | int) -> str:
    return format_fraction(Fraction(x))


def parse_class_payload(p: Mapping, path: str = "payload") -> tuple[Representation, OrbitDatum]:
    summands = []
    for i, s in enumerate(_list(_require(p, "summands", path), f"{path}.summands")):
        sp = f"{path}.summands[{i}]"
        summands.append((_int(_require(s, "a", sp), sp + ".a"), _int(_require(s, "b", sp), sp + ".b")))
    rep = Representation(summands)
    nonzero = p.get("nonzero", [True] * len(summands))
    nonzero = [_bool(x, f"{path}.nonzero[{i}]") for i, x in enumerate(_list(nonzero, f"{path}.nonzero"))]
    points = []
    for j, q in enumerate(_list(p.get("points", []), f"{path}.points")):
        qp = f"{path}.points[{j}]"
        q = _obj(q, qp)
        orders = [_int(r, f"{qp}.orders[{k}]") for k, r in enumerate(_list(_require(q, "orders", qp), qp + ".orders"))]
        points.append(OrbitPoint(str(q.get("label", f"u{j}")), orders))
    a_complete = _bool(p.get("a_complete", True), f"{path}.a_complete")
    datum = OrbitDatum(nonzero, points, a_complete)
    validate(rep, datum)
    return rep, datum


def _class_fields(c: EquivariantClass) -> dict:
    return {"class": c.poly.to_text(), "class_terms": c.poly.to_json(), "codim": c.codim}


def _default_weights(rep: Representation) -> list[int]:
    g = 0
    for d in rep.weights:
        g = gcd(g, d)
    return [d // g for d in rep.weights]


def _degree_fields(c: EquivariantClass, rep: Representation, weights: Sequence[int],
                   stabilizer_order: int | None) -> dict:
    deg = projective_degree(c, rep, weights)
    out = {"projective_weights": list(weights)}
    if stabilizer_order is None:
        out.update(degree=_ff(deg), stabilizer_weighted=True)
    else:
        out.update(degree=_ff(deg / stabilizer_order), stabilizer_weighted=False)
    return out


# -- commands -------------------------------------------------------------------

def cmd_class(p: Mapping) -> Report:
    rep, datum = parse_class_payload(p)
    c = orbit_class(rep, datum)
    notes = list(c.notes)
    stab = p.get("stabilizer_order")
    if stab is not None:
        stab = _int(stab, "payload.stabilizer_order")
        if stab <= 0:
            raise SchemaError("payload.stabilizer_order: must be positive")
    weights = p.get("projective_weights")
    if weights is None:
        weights = _default_weights(rep)
        notes.append(f"projective weights default to d_i/gcd(d_i) = {weights}")
    else:
        weights = [_int(w, f"payload.projective_weights[{i}]") for i, w in enumerate(_list(weights, "payload.projective_weights"))]
    result = _class_fields(c)
    if stab is not None:
        result["class"] = c.poly.scale(Fraction(1, stab)).to_text()
        result["class_terms"] = c.poly.scale(Fraction(1, stab)).to_json()
        notes.append(f"class and degree divided by the supplied stabilizer order {stab}")
    result.update(_degree_fields(c, rep, weights, stab))
    return Report(result, notes)


def _fiber_json(n: int, f: app.FiberDatum) -> dict:
    kind = f.kodaira_type
    return {
        "label": f.label, "ord_A": f.ord_A, "ord_B": f.ord_B, "c": _ff(f.c),
        "kodaira_type": kind if kind is not None else "non-minimal",
        "contribution": _ff(app.contribution(n, f.c)),
    }


def cmd_elliptic(p: Mapping) -> Report:
    n = _int(_require(p, "n", "payload"), "payload.n")
    fibers = []
    for i, f in enumerate(_list(p.get("fibers", []), "payload.fibers")):
        fp = f"payload.fibers[{i}]"
        f = _obj(f, fp)
        fibers.append(app.FiberDatum(str(f.get("label", f"u{i}")), _int(_require(f, "ord_A", fp), fp + ".ord_A"),
                                     _int(_require(f, "ord_B", fp), fp + ".ord_B")))
    for i, t in enumerate(_list(p.get("types", []), "payload.types")):
        fibers.append(app.fiber_for_type(str(t), f"t{i}"))
    if any(f.ord_A < 0 or f.ord_B < 0 for f in fibers):
        raise SchemaError("payload.fibers: orders must be non-negative")
    res = app.elliptic_degree(n, fibers)
    notes = list(res.orbit.notes)
    if any(f.c >= 2 for f in fibers):
        notes.append("some fibre has c >= 2: the Weierstrass data is non-minimal, no Kodaira type reported")
    result = _class_fields(res.orbit)
    result.update(
        n=n, degree=_ff(res.degree), closed_form=_ff(app.elliptic_closed_form(n, [f.c for f in fibers])),
        projective_weights=[2, 3], stabilizer_weighted=True, fibers=[_fiber_json(n, f) for f in fibers],
    )
    return Report(result, notes, [{"name": "engine_equals_closed_form", "pass": True}])


def _parse_roots(raw, path: str) -> list[tuple[tuple[Fraction, Fraction], int]]:
    roots = []
    for i, r in enumerate(_list(raw, path)):
        rp = f"{path}[{i}]"
        pt = _list(_require(r, "point", rp), rp + ".point")
        if len(pt) != 2:
            raise SchemaError(f"{rp}.point: expected [p, q]")
        roots.append(((_rational(pt[0], rp + ".point[0]"), _rational(pt[1], rp + ".point[1]")),
                      _int(_require(r, "mult", rp), rp + ".mult")))
    return roots


def cmd_ratmap(p: Mapping) -> Report:
    if "profile" in p:
        n = _int(_require(p, "n", "payload"), "payload.n")
        profile = [_int(j, f"payload.profile[{i}]") for i, j in enumerate(_list(p["profile"], "payload.profile"))]
        res = app.ratmap_class(n, profile)
        result = _class_fields(res.orbit)
        result.update(n=n, profile=list(res.profile), degree=_ff(res.degree), projective_weights=[1, 1],
                      stabilizer_weighted=True, expected_degree=n * (n + 1) * (n - 1))
        checks = [{"name": "class_equals_closed_product", "pass": True},
                  {"name": "degree_equals_n(n+1)(n-1)", "pass": True}]
        return Report(result, list(res.orbit.notes), checks)
    return _ratmap_from_forms(p)


def _ratmap_from_forms(p: Mapping) -> Report:
    F_c = [_rational(c, f"payload.F[{i}]") for i, c in enumerate(_list(_require(p, "F", "payload"), "payload.F"))]
    G_c = [_rational(c, f"payload.G[{i}]") for i, c in enumerate(_list(_require(p, "G", "payload"), "payload.G"))]
    if len(F_c) != len(G_c) or len(F_c) < 3:
        raise SchemaError("payload.F/G: equal-length coefficient lists of degree n >= 2 expected")
    n = len(F_c) - 1
    F, G = app.binary_form(F_c), app.binary_form(G_c)
    if F.is_zero() and G.is_zero():
        raise SchemaError("payload.F/G: both forms are zero")
    I, J = app.split_hom(F, G)
    if J.is_zero():
        raise ValidationError("J vanishes identically: f is a multiple of the identity, which has no fixed-point profile")
    roots = _parse_roots(_require(p, "roots", "payload"), "payload.roots")
    profile = app.profile_from_J(J, roots, I if not I.is_zero() else None)
    notes = []
    base_points = [pt for pt, _ in roots if F.evaluate(pt) == 0 and G.evaluate(pt) == 0]
    if base_points:
        notes.append("F and G share a root: f has base points, so the closed-form hypothesis fails; engine value only")
    nonzero = (not I.is_zero(), True)
    pts = []
    for k, (pt, m) in enumerate(roots):
        orders = [m] if I.is_zero() else [app.vanishing_order(I, pt), m]
        pts.append(OrbitPoint(f"[{_ff(pt[0])}:{_ff(pt[1])}]", orders))
    rep = app.ratmap_representation(n)
    c = orbit_class(rep, OrbitDatum(nonzero, pts))
    degree = projective_degree(c, rep, (1, 1)) / (n - 1)
    checks = []
    if not base_points:
        checks = [{"name": "class_equals_closed_product", "pass": c.poly == app.ratmap_closed_product(n)},
                  {"name": "degree_equals_n(n+1)(n-1)", "pass": degree == n * (n + 1) * (n - 1)}]
    result = _class_fields(c)
    result.update(n=n, I=I.to_text(), J=J.to_text(), profile=list(profile), degree=_ff(degree),
                  projective_weights=[1, 1], stabilizer_weighted=True)
    return Report(result, list(c.notes) + notes, checks)


def parse_torus_payload(p: Mapping) -> CharacterList:
    d = _int(_require(p, "d", "payload"), "payload.d")
    chars = []
    for i, ch in enumerate(_list(_require(p, "characters", "payload"), "payload.characters")):
        chars.append([_int(x, f"payload.characters[{i}][{k}]") for k, x in enumerate(_list(ch, f"payload.characters[{i}]"))])
    support = p.get("support")
    if support is not None:
        support = [_bool(s, f"payload.support[{i}]") for i, s in enumerate(_list(support, "payload.support"))]
    return CharacterList(d, chars, support)


def cmd_torus(p: Mapping) -> Report:
    cl = parse_torus_payload(p)
    res = torus_orbit_class(cl)
    result = {"pointed": res.pointed, "class": res.poly.to_text(), "class_terms": res.poly.to_json(),
              "variables": list(cl.variables)}
    if res.pointed:
        result["e_sigma"] = res.e_sigma.to_json()
        result["e_sigma_text"] = " + ".join(t.to_text() for t in res.e_sigma.terms)
        result["witness"] = [_ff(x) for x in res.witness]
        result["pieces"] = [{"generators": [list(g) for g in pc.generators], "det_abs": pc.det_abs}
                            for pc in triangulate(cl.cone())]
    else:
        result["e_sigma"] = None
    notes = list(res.notes)
    if not res.pointed:
        notes.append("the cone of supported characters contains a line, so the class is 0")
    return Report(result, notes)


def polygon_json(poly: NewtonPolygon) -> dict:
    def pt(v):
        return [_ff(v[0]), _ff(v[1])]

    sc = polygon_scalars(poly)
    beta = beta_vectors(poly)
    div = divisibility_check(poly)
    return {
        "points": [{"x": _ff(q.x), "y": _ff(q.y), "weight": q.weight} for q in poly.defining_points],
        "vertices": [pt(v) for v in poly.vertices],
        "faces": [{"kind": f.kind, "normal": list(f.normal), "vertices": [pt(v) for v in f.vertices]}
                  for f in poly.faces],
        "vertex_normals": [
            {"eta": list(vn.eta), "zeta": list(vn.zeta), "det": vn.det}
            for vn in (vertex_normals(poly, j) for j in range(poly.k + 1))
        ],
        "scalars": {"b_local": _ff(sc.b_local), "r": _ff(sc.r), "lambda0_x": _ff(sc.lambda0_x),
                    "s": _ff(sc.s), "k": sc.k},
        "beta": [{"kind": r.kind, "can": list(r.can), "res": list(r.res), "face_value": _ff(r.face_value)}
                 for r in beta.rays],
        "beta_notes": list(beta.notes),
        "divisibility": {
            "passed": div.passed, "notes": div.notes,
            "witnesses": [{k: (_ff(v) if isinstance(v, Fraction) else list(v) if isinstance(v, tuple) else v)
                           for k, v in w.items()} for w in div.witnesses],
        },
    }


def cmd_polygon(p: Mapping) -> Report:
    if "summands" in p:
        rep, datum = parse_class_payload(p)
        polys = [{"label": pt.label, **polygon_json(point_polygon(rep, datum, pt))} for pt in datum.points]
        return Report({"polygons": polys})
    pts = []
    for i, q in enumerate(_list(_require(p, "points", "payload"), "payload.points")):
        qp = f"payload.points[{i}]"
        q = _obj(q, qp)
        w = _int(q.get("weight", 1), qp + ".weight")
        if w <= 0:
            raise SchemaError(f"{qp}.weight: must be positive")
        pts.append(WeightedPoint(_rational(_require(q, "x", qp), qp + ".x"), _rational(_require(q, "y", qp), qp + ".y"), w))
    if not pts:
        raise SchemaError("payload.points: at least one point is needed")
    out = polygon_json(build_polygon(pts))
    return Report(out, list(out["beta_notes"]))


def _check(name: str, fn: Callable[[], bool]) -> dict:
    try:
        ok = bool(fn())
        return {"name": name, "pass": ok}
    except (ArithmeticError, AssertionError, ValidationError) as exc:
        return {"name": name, "pass": False, "error": f"{type(exc).__name__}: {exc}"}


def verify(p: Mapping, *, f_term=term_F) -> Report:
    """Run the consistency checks on one class input; failures become report entries."""
    rep, datum = parse_class_payload(p)
    twists = [_int(t, "payload.twists") for t in p.get("twists", [1, 2])]
    state: dict = {}

    def base():
        if "c" not in state:
            state["c"] = orbit_class(rep, datum, f_term=f_term)
        return state["c"]

    checks = [
        _check("polynomiality", lambda: base() is not None),
        _check("symmetry", lambda: base().poly.is_symmetric()),
        _check("homogeneity", lambda: base().poly.is_zero()
               or (base().poly.is_homogeneous() and base().poly.degree() == rep.dim - 4)),
        _check("a_enlargement", lambda: orbit_class(rep, with_extra_point(datum), f_term=f_term) == base()),
    ]
    for n in twists:
        checks.append(_check(f"twist_n={n}", lambda n=n: orbit_class(twist_rep(rep, n), datum, f_term=f_term)
                             == twist_class(base(), n)))
    checks.append(_check("localization_oracle", lambda: localization_oracle(rep, datum) == base()))
    checks.append(_check("divisibility", lambda: all(
        divisibility_check(point_polygon(rep, datum, pt)).passed for pt in datum.points)))
    result = {}
    try:
        result = _class_fields(base())
    except (ArithmeticError, AssertionError) as exc:
        result = {"class": None, "error": f"{type(exc).__name__}: {exc}"}
    return Report(result, [], checks)


HANDLERS: dict[str, Callable[[Mapping], Report]] = {
    "class": cmd_class, "elliptic": cmd_elliptic, "ratmap": cmd_ratmap,
    "torus": cmd_torus, "polygon": cmd_polygon, "verify": verify,
}


def run(job: JobSpec | Mapping) -> Report:
    if isinstance(job, Mapping):
        job = JobSpec(str(_require(job, "command", "job")), _require(job, "payload", "job"),
                      str(job.get("output", "json")))
    if job.command not in HANDLERS:
        raise SchemaError(f"job.command: unknown command {job.command!r}; expected one of {list(COMMANDS)}")
    if not isinstance(job.payload, Mapping):
        raise SchemaError("job.payload: expected an object")
    return HANDLERS[job.command](job.payload)


# -- argument parsing -----------------------------------------------------------

def _csv_ints(s: str) -> list[int]:
    try:
        return [int(x) for x in s.split(",") if x.strip()]
    except ValueError:
        raise SchemaError(f"expected comma separated integers, got {s!r}") from None


def _flag_roots(s: str) -> list[dict]:
    """``p:q`` or ``p:q@m`` items separated by commas."""
    out = []
    for item in s.split(","):
        pt, _, m = item.strip().partition("@")
        a, sep, b = pt.partition(":")
        if not sep:
            raise SchemaError(f"--roots: expected p:q[@m], got {item!r}")
        out.append({"point": [a.strip(), b.strip()], "mult": int(m) if m else 1})
    return out


def _payload_from_flags(args) -> dict | None:
    if args.command == "elliptic" and (args.n is not None or args.fiber or args.type):
        payload: dict = {"n": args.n}
        fibers = []
        for f in args.fiber or []:
            a, b = _csv_ints(f)
            fibers.append({"ord_A": a, "ord_B": b, "label": f"f{len(fibers)}"})
        payload["fibers"] = fibers
        payload["types"] = [t for group in args.type or [] for t in group.split(",") if t]
        return payload
    if args.command == "ratmap" and (args.n is not None or args.profile or args.F or args.G):
        if args.profile:
            return {"n": args.n, "profile": _csv_ints(args.profile)}
        if args.F is None or args.G is None or args.roots is None:
            raise SchemaError("ratmap: give --profile, or all of --F, --G and --roots")
        return {"F": args.F.split(","), "G": args.G.split(","), "roots": _flag_roots(args.roots)}
    return None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="orbclass", description="Equivariant classes of orbit closures.")
    parser.add_argument("command", choices=COMMANDS + ("job",))
    parser.add_argument("--input", "-i", help="JSON payload file, or - for stdin")
    fmt = parser.add_mutually_exclusive_group()
    fmt.add_argument("--json", dest="output", action="store_const", const="json")
    fmt.add_argument("--text", dest="output", action="store_const", const="text")
    parser.add_argument("--n", type=int)
    parser.add_argument("--fiber", action="append", help="ordA,ordB (repeatable)")
    parser.add_argument("--type", action="append", help="Kodaira type(s), e.g. II,III (repeatable)")
    parser.add_argument("--profile", help="fixed-point multiplicities j1,j2,...")
    parser.add_argument("--F", help="coefficients of F, x^n first")
    parser.add_argument("--G", help="coefficients of G, x^n first")
    parser.add_argument("--roots", help="rational roots of J as p:q[@mult],...")
    return parser


def _read_input(path: str | None):
    if path is None:
        raise SchemaError("no payload: pass --input FILE or - (or command flags)")
    try:
        text = sys.stdin.read() if path == "-" else open(path, encoding="utf-8").read()
    except OSError as exc:
        raise SchemaError(f"cannot read input: {exc}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"input is not valid JSON: {exc}") from None


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    output = args.output or "json"
    try:
        if args.command == "job":
            job = _read_input(args.input)
            if not args.output and isinstance(job, Mapping):
                output = str(job.get("output", "json"))
        else:
            payload = _payload_from_flags(args)
            if payload is None:
                payload = _read_input(args.input)
            job = JobSpec(args.command, payload, output)
        report = run(job)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (ArithmeticError, AssertionError) as exc:
        print(f"internal check failed: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    print(report.to_json() if output == "json" else report.to_text())
    return 0 if report.ok else 2


if __name__ == "__main__":
    sys.exit(main())
