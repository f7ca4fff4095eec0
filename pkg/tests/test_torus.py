import random
from fractions import Fraction as Fr

import pytest

from orbclass.algebra import LinearForm, Polynomial, RationalTerm
from orbclass.errors import ValidationError
from orbclass.torus import (
    CharacterList,
    Cone,
    equivariant_multiplicity,
    is_pointed,
    lattice_index,
    pointedness_witness,
    torus_orbit_class,
    triangulate,
    volume_oracle,
)

APP = [(0, 0, 1), (0, 1, 1), (1, 0, 1), (1, 1, 1)]
XYZ = ("x", "y", "z")


def random_cone_input(rng, d, k, lo=-2, hi=3):
    return CharacterList(d, [tuple(rng.randint(lo, hi) for _ in range(d)) for _ in range(k)])


def interior_lambdas(rng, cone, witness, count):
    out = []
    while len(out) < count:
        lam = [3 * w + Fr(rng.randint(0, 5), rng.randint(1, 4)) for w in witness]
        if all(sum(a * b for a, b in zip(g, lam)) > 0 for g in cone.generators):
            out.append(lam)
    return out


def test_pointedness_examples():
    assert is_pointed(CharacterList(3, APP))
    assert not is_pointed(CharacterList(1, [(1,), (-1,)]))
    assert is_pointed(CharacterList(2, [(3, -7)]))
    assert not is_pointed(CharacterList(2, [(1, 0), (-1, 1), (0, -1)]))
    assert is_pointed(CharacterList(2, [(1, 0), (-1, 1), (0, 1)]))


def test_witness_is_strictly_positive():
    rng = random.Random(1)
    for _ in range(100):
        c = random_cone_input(rng, rng.randint(1, 4), rng.randint(1, 6)).cone()
        w = pointedness_witness(c)
        if w is not None:
            assert all(sum(a * b for a, b in zip(g, w)) >= 1 for g in c.generators)


def test_no_supported_character_rejected():
    with pytest.raises(ValidationError):
        CharacterList(2, [(1, 0)], [False])


def test_app_example_triangulation_and_e_sigma():
    cone = CharacterList(3, APP).cone()
    pieces = triangulate(cone)
    assert len(pieces) == 2 and all(p.det_abs == 1 for p in pieces)
    e = equivariant_multiplicity(cone)
    one = Polynomial.one(XYZ)
    z, yz, xz, xyz = (LinearForm(v) for v in APP)
    listed = [RationalTerm(1, one, [(z, 1), (yz, 1), (xyz, 1)]), RationalTerm(1, one, [(z, 1), (xz, 1), (xyz, 1)])]
    rng = random.Random(0)
    for _ in range(10):
        pt = [Fr(rng.randint(1, 9), rng.randint(1, 4)) for _ in range(3)]
        assert e.evaluate(pt) == sum(t.evaluate(pt) for t in listed)
    assert e.evaluate((1, 1, 1)) == Fr(1, 3)


def test_app_example_class():
    assert torus_orbit_class(CharacterList(3, APP)).poly.to_text() == "x+y+2*z"


def test_simple_examples():
    assert [p.generators for p in triangulate(Cone(2, [(1, 0), (0, 1)]))] == [((1, 0), (0, 1))]
    e = equivariant_multiplicity(Cone(1, [(1,)]))
    assert e.evaluate((Fr(1, 3),)) == 3
    ident = equivariant_multiplicity(Cone(3, [(1, 0, 0), (0, 1, 0), (0, 0, 1)]))
    assert ident.evaluate((2, 3, 5)) == Fr(1, 30)
    assert torus_orbit_class(CharacterList(2, [(2, 3)])).poly == Polynomial.one(("x", "y"))
    assert torus_orbit_class(CharacterList(1, [(1,), (-1,)])).poly.is_zero()


def test_square_cone_pieces_are_unimodular():
    pieces = triangulate(Cone(2, [(1, 0), (0, 1), (1, 1)]))
    assert all(p.det_abs == 1 for p in pieces)
    # pulling from (1, 1) gives the other triangulation with two pieces
    assert volume_oracle(Cone(2, [(1, 0), (0, 1), (1, 1)]), (1, 1), shuffle=0) == 1


def test_volume_oracle_examples():
    assert volume_oracle(CharacterList(3, APP).cone(), (1, 1, 1)) == Fr(1, 3)
    assert volume_oracle(Cone(2, [(1, 0), (0, 1)]), (1, 1)) == 1
    with pytest.raises(ValidationError):
        volume_oracle(Cone(2, [(1, 0), (0, 1)]), (1, -1))


def test_non_primitive_generators():
    a = equivariant_multiplicity(Cone(2, [(2, 0), (0, 3), (4, 4)]))
    b = equivariant_multiplicity(Cone(2, [(1, 0), (0, 1)]))
    assert a.evaluate((2, 7)) == b.evaluate((2, 7))


def test_lattice_index():
    assert lattice_index([(1, 0, 0), (0, 2, 0)]) == 2
    assert lattice_index([(1, 1, 0), (1, -1, 0)]) == 2
    assert lattice_index([(2, 1)]) == 1


def test_lower_dimensional_cone_convention():
    # sigma in the plane z = 0; the unsupported z-character contributes a factor z
    c = CharacterList(3, [(1, 0, 0), (0, 1, 0), (1, 1, 0), (0, 0, 1)], [True, True, False, False])
    res = torus_orbit_class(c)
    x, y, z = (Polynomial.var(XYZ, i) for i in range(3))
    assert res.poly == (x + y) * z
    assert any("dimension" in n for n in res.notes)
    planar = torus_orbit_class(CharacterList(2, [(1, 0), (0, 1), (1, 1)], [True, True, False]))
    assert planar.poly.to_text() == "x+y"


def test_zero_character_kills_class():
    res = torus_orbit_class(CharacterList(2, [(1, 0), (0, 0)]))
    assert res.pointed and res.poly.is_zero()


def test_fuzzed_cones():
    rng = random.Random(42)
    done = 0
    while done < 50:
        d = rng.randint(1, 4)
        cl = random_cone_input(rng, d, rng.randint(1, 6))
        cone = cl.cone()
        res = torus_orbit_class(cl)
        if not res.pointed:
            assert res.poly.is_zero()
            continue
        if not cone.full_dimensional:
            continue
        done += 1
        alt = Cone(d, cone.generators[::-1])
        e_alt = equivariant_multiplicity(alt)
        for lam in interior_lambdas(rng, cone, res.witness, 5):
            val = res.e_sigma.evaluate(lam)
            assert val == e_alt.evaluate(lam) == volume_oracle(cone, lam, shuffle=rng.randint(0, 5))
            assert res.e_sigma.evaluate([2 * c for c in lam]) * 2 ** d == val
        assert res.poly.is_zero() or (res.poly.is_homogeneous() and res.poly.degree() == len(cl.chars) - d)


def test_unimodular_simplicial_class_is_product_of_other_characters():
    rng = random.Random(9)
    for _ in range(20):
        d = rng.randint(1, 4)
        gens = [tuple(int(i == j) for j in range(d)) for i in range(d)]
        rng.shuffle(gens)
        # extra characters inside the orthant keep the cone simplicial
        others = [tuple(rng.randint(0, 3) for _ in range(d)) for _ in range(rng.randint(0, 3))]
        chars = gens + others
        res = torus_orbit_class(CharacterList(d, chars))
        expected = Polynomial.one(CharacterList(d, chars).variables)
        for ch in others:
            expected = expected * Polynomial.linear(expected.variables, ch)
        assert res.poly == expected
