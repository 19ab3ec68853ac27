import itertools
from math import comb

import pytest
from hypothesis import given, strategies as st

from pointfree.boolean_core import (
    LAWS,
    BoolHom,
    BoolIdeal,
    FiniteBoolAlgebra,
    all_homs,
    big_join,
    big_meet,
    check_laws,
    coproduct,
    identity,
    quotient_by_ideal,
)
from pointfree.errors import AlgebraMismatch, NotAHomomorphism, NotAnIdeal, SizeOverflow


@pytest.mark.parametrize("atoms", range(0, 5))
def test_laws_exhaustive_small_algebras(atoms):
    fails = check_laws(FiniteBoolAlgebra(atoms))
    assert fails == {name: 0 for name in LAWS}


def test_free_algebra_generators_are_independent():
    alg = FiniteBoolAlgebra.free(["p", "q"])
    p, q = alg.gen("p"), alg.gen("q")
    # all four minterms are nonzero atoms
    minterms = [p & q, p & ~q, ~p & q, ~p & ~q]
    assert all(len(m.atom_set) == 1 for m in minterms)
    assert big_join(alg, minterms) == alg.one
    assert big_meet(alg, []) == alg.one


def test_mixing_algebras_is_rejected():
    a, b = FiniteBoolAlgebra(2), FiniteBoolAlgebra(2)
    with pytest.raises(AlgebraMismatch):
        a.one & b.one


def test_hom_validation_and_composition():
    src = FiniteBoolAlgebra.free(["x"])
    tgt = FiniteBoolAlgebra(3)
    h = BoolHom.from_generator_images(src, tgt, {"x": tgt.elem([0, 2])})
    assert h.verify()
    assert h(src.gen("x")) == tgt.elem([0, 2])
    assert h.compose(identity(src)).equals(h)
    with pytest.raises(NotAHomomorphism):
        BoolHom(src, tgt, (0b001, 0b001))
    with pytest.raises(NotAHomomorphism):
        BoolHom(src, tgt, (0b001, 0b010))


@pytest.mark.parametrize("m,n", [(1, 1), (2, 2), (2, 3), (3, 2), (0, 2), (2, 0)])
def test_hom_count_matches_surjection_formula(m, n):
    # homs 2^m -> 2^n correspond to maps from n target atoms to m source atoms
    src, tgt = FiniteBoolAlgebra(m), FiniteBoolAlgebra(n)
    expected = m**n if m > 0 else (1 if n == 0 else 0)
    homs = list(all_homs(src, tgt))
    assert len(homs) == expected
    assert all(h.verify() for h in homs)


def test_ideal_and_quotient():
    alg = FiniteBoolAlgebra(3)
    ideal = BoolIdeal.principal(alg.elem([0]))
    assert alg.elem([0]) in ideal and alg.zero in ideal
    assert alg.elem([1]) not in ideal
    q, proj = quotient_by_ideal(alg, ideal)
    assert q.atom_count == 2
    assert proj.verify()
    assert proj.kernel().members == ideal.members
    assert ideal.equivalent(alg.elem([0, 1]), alg.elem([1]))
    with pytest.raises(NotAnIdeal):
        BoolIdeal.from_elements(alg, [alg.zero, alg.elem([0, 1])])


def test_coproduct_universal_property():
    a = FiniteBoolAlgebra.free(["x"])
    b = FiniteBoolAlgebra.free(["y"])
    cp = coproduct(a, b)
    assert cp.algebra.atom_count == 4
    t = FiniteBoolAlgebra(2)
    f = BoolHom.from_generator_images(a, t, {"x": t.elem([0])})
    g = BoolHom.from_generator_images(b, t, {"y": t.elem([0, 1])})
    h = cp.copair(f, g)
    assert h.compose(cp.inl).equals(f)
    assert h.compose(cp.inr).equals(g)
    assert cp.tensor(a.gen("x"), b.one) == cp.inl(a.gen("x"))
    with pytest.raises(SizeOverflow):
        coproduct(FiniteBoolAlgebra(8), FiniteBoolAlgebra(8), max_atoms=32)


@given(st.integers(0, 15), st.integers(0, 15), st.integers(0, 15))
def test_ring_characterization_random_elements(x, y, z):
    alg = FiniteBoolAlgebra(4)
    a, b, c = (alg.elem([i for i in range(4) if v >> i & 1]) for v in (x, y, z))
    assert a * (b + c) == a * b + a * c
    assert (a | b) == a + b + a * b
    assert a * a == a and (a + a).is_zero()
