import random
from fractions import Fraction

import pytest

from qmcoh import words
from qmcoh.chains import (
    Chain,
    HomogeneousChain,
    MSeriesTail,
    boundary,
    chain_to_json,
    contracting_homotopy,
    homogeneous_boundary,
    m2_chain,
    m_chain,
    pushforward,
)
from qmcoh.errors import ResourceCapExceeded
from qmcoh.groups import FiniteGroup, FreeGroup, FreeAutomorphism
from qmcoh.words import Pow, parse

F2 = FreeGroup(2)
p = parse


def test_degenerate_tuples_vanish():
    z = Chain(F2, 2, [((p("a"), ()), 1), (((), p("b")), 2)])
    assert z.support == {}
    assert z == Chain.zero(F2, 2)


def test_chain_add_cancels():
    a = Chain.basis(F2, p("a"), p("b"))
    b = a.scale(-1)
    assert (a + b).support == {}
    assert (a + a).support == {(p("a"), p("b")): Fraction(2)}


def test_boundary_degree2():
    z = Chain.basis(F2, p("a"), p("b"))
    expect = Chain(F2, 1, [
        ((p("b"),), 1), ((p("ab"),), -1), ((p("a"),), 1),
    ])
    assert boundary(z) == expect


def test_boundary_degree1_vanishes():
    z = Chain.basis(F2, p("ab'"))
    out = boundary(z)
    assert out.degree == 0 and out.support == {}


def test_boundary_squared_zero_random():
    rng = random.Random(2)
    for _ in range(15):
        items = [
            (
                tuple(F2.random_element(rng, rng.randint(1, 4))
                      for _ in range(3)),
                Fraction(rng.randint(-3, 3), rng.randint(1, 4)),
            )
            for _ in range(4)
        ]
        z = Chain(F2, 3, items)
        assert boundary(boundary(z)).support == {}


def test_boundary_squared_zero_on_merge_collision():
    # x equals y*z, so one association path of the double boundary
    # merges two equal entries while the other multiplies distinct
    # ones; both must land on the same canonical key.
    y, z = p("ab"), p("a")
    x = words.mul(y, z)
    c = Chain(F2, 3, [((x, y, z), Fraction(1))])
    assert boundary(boundary(c)).support == {}


def test_boundary_norm_inequality():
    rng = random.Random(9)
    for _ in range(15):
        items = [
            (
                tuple(F2.random_element(rng, 3) for _ in range(2)),
                Fraction(rng.randint(-5, 5), rng.randint(1, 3)),
            )
            for _ in range(5)
        ]
        z = Chain(F2, 2, items)
        assert boundary(z).norm1() <= 3 * z.norm1()


def test_m_chain_structure():
    g = p("ab")
    m = m_chain(F2, g, 3)
    assert m.support == {
        (g, g): Fraction(1, 2),
        (Pow(g, 2), Pow(g, 2)): Fraction(1, 4),
        (Pow(g, 4), Pow(g, 4)): Fraction(1, 8),
    }
    assert m.tail_bound == Fraction(1, 8)
    assert m.tails == (MSeriesTail(g, 3, Fraction(1)),)
    assert m.norm1_total() == 1


def test_m_chain_identity_is_zero():
    m = m_chain(F2, (), 5)
    assert m.support == {} and m.tail_bound == 0


def test_m_chain_cutoff_cap():
    with pytest.raises(ResourceCapExceeded):
        m_chain(F2, p("a"), 17)


def test_m_chain_finite_group():
    z4 = FiniteGroup.cyclic(4)
    m = m_chain(z4, 2, 3)
    # powers of the generator: 2^1=cls1, 2^2=cls2, 2^4=cls0 -> degenerate
    assert m.support == {
        (2, 2): Fraction(1, 2),
        (3, 3): Fraction(1, 4),
    }


def test_boundary_of_m_chain_telescopes():
    g = p("ab'a")
    for N in (1, 3, 4):
        out = boundary(m_chain(F2, g, N))
        expect = Chain(F2, 1, [
            ((g,), 1),
            ((words.pow_entry(g, 2**N),), Fraction(-1, 2**N)),
        ])
        assert out == expect
        assert out.tail_bound == 3 * Fraction(1, 2**N)


def test_m2_chain_norm_and_boundary():
    g, h = p("ab"), p("ba")
    z = m2_chain(F2, g, h, 4)
    assert z.norm1_total() <= 4
    assert z.tail_bound == Fraction(3, 16)
    out = boundary(z)
    gh = F2.mul(g, h)
    expect = Chain(F2, 1, [
        ((words.pow_entry(g, 16),), Fraction(1, 16)),
        ((words.pow_entry(gh, 16),), Fraction(-1, 16)),
        ((words.pow_entry(h, 16),), Fraction(1, 16)),
    ])
    assert out == expect


def test_m2_chain_with_inverse_pair():
    g = p("ab")
    z = m2_chain(F2, g, words.inv(g), 3)
    # gh is the identity: its m chain is zero and [g|g^-1] survives
    assert z.support[(g, words.inv(g))] == 1


def test_pushforward_commutes_with_m2():
    swap = FreeAutomorphism(F2, [p("b"), p("a")], [p("b"), p("a")])
    g, h = p("ab"), p("a'b")
    z = pushforward(swap, m2_chain(F2, g, h, 4))
    w = m2_chain(F2, swap(g), swap(h), 4)
    assert z == w
    assert z.tails == w.tails


def test_homogeneous_boundary_and_homotopy_low_degree():
    e = ()
    g = p("ab")
    z = HomogeneousChain(F2, 1, [((e, g), 1)])
    dz = homogeneous_boundary(z)
    assert dz.support == {(g,): Fraction(1), (e,): Fraction(-1)}
    s = contracting_homotopy(HomogeneousChain(F2, 0, [((g,), 1)]))
    assert s.support == {(e, g): Fraction(1)}


def test_homogeneous_complex_keeps_degenerates():
    z = HomogeneousChain(F2, 1, [(((), ()), 1)])
    assert z.support != {}


def test_homotopy_identity_random():
    rng = random.Random(4)
    for degree in (1, 2, 3):
        for _ in range(10):
            items = [
                (
                    tuple(F2.random_element(rng, 2)
                          for _ in range(degree + 1)),
                    Fraction(rng.randint(-4, 4), rng.randint(1, 3)),
                )
                for _ in range(3)
            ]
            z = HomogeneousChain(F2, degree, items)
            lhs = contracting_homotopy(homogeneous_boundary(z)) \
                + homogeneous_boundary(contracting_homotopy(z))
            assert lhs == z


def test_homogeneous_boundary_squared_zero():
    rng = random.Random(6)
    for _ in range(10):
        items = [
            (tuple(F2.random_element(rng, 2) for _ in range(4)), 1)
            for _ in range(3)
        ]
        z = HomogeneousChain(F2, 3, items)
        assert homogeneous_boundary(homogeneous_boundary(z)).support == {}


def test_chain_to_json_shape():
    z = m_chain(F2, p("ab"), 2)
    out = chain_to_json(z)
    assert out["tail_kind"] == "m_series"
    assert out["tail_bound"] == "1/4"
    assert {e["coeff"] for e in out["entries"]} == {"1/2", "1/4"}
    assert out["tails"][0]["base"] == "ab"
    tuples = [e["tuple"] for e in out["entries"]]
    assert ["(ab)^2", "(ab)^2"] in tuples and ["ab", "ab"] in tuples


def test_chain_to_json_finite_and_twisted():
    z4 = FiniteGroup.cyclic(4)
    out = chain_to_json(Chain.basis(z4, 2, 3))
    assert out["entries"][0]["tuple"] == [2, 3]
