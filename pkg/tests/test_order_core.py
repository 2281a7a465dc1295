import random
from itertools import permutations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conleyforms.errors import (
    CycleDetected,
    DuplicateLabel,
    NotAHomomorphism,
    NotDistributive,
    SizeLimitExceeded,
    ValidationError,
)
from conleyforms.order_core import (
    BooleanAlgebraOnAtoms,
    ConvexPiece,
    FinitePoset,
    LatticeHom,
    birkhoff_embed,
    booleanize,
    booleanize_hom,
    convex_semilattice,
    downset_lattice,
    dual_lattice,
    irredundant_join_rep,
    ji_poset_of,
    join_irreducibles,
    lattice_from_family,
    lattice_from_order,
    poset_from_cover_pairs,
)

from oracles import brute_downsets, brute_join_irreducibles


@st.composite
def posets(draw, max_n=6):
    n = draw(st.integers(0, max_n))
    up = [1 << i for i in range(n)]
    for i in reversed(range(n)):
        for j in range(i + 1, n):
            if draw(st.booleans()):
                up[i] |= up[j]
    down = tuple(sum(1 << i for i in range(n) if (up[i] >> j) & 1) for j in range(n))
    return FinitePoset(tuple(f"p{i}" for i in range(n)), down)


def as_sets(P, masks):
    return {frozenset(P.elements[i] for i in range(len(P)) if (m >> i) & 1) for m in masks}


class TestPoset:
    def test_singleton(self):
        P = poset_from_cover_pairs(["p"], [])
        assert P.leq(0, 0) and len(P) == 1

    def test_antichain(self):
        P = poset_from_cover_pairs(["x", "y"], [])
        assert not P.leq(0, 1) and not P.leq(1, 0)

    def test_transitivity_inferred(self):
        P = poset_from_cover_pairs(["a", "b", "c"], [("a", "b"), ("b", "c")])
        assert P.leq(P.index("a"), P.index("c"))

    def test_duplicate_label(self):
        with pytest.raises(DuplicateLabel):
            poset_from_cover_pairs(["a", "a"], [])

    @pytest.mark.parametrize("covers", [[("a", "b"), ("b", "a")], [("a", "a")]])
    def test_cycle(self, covers):
        with pytest.raises(CycleDetected):
            poset_from_cover_pairs(["a", "b"], covers)

    def test_unknown_label(self):
        with pytest.raises(ValidationError):
            poset_from_cover_pairs(["a"], [("a", "z")])

    @given(posets())
    def test_linear_extension_respects_order(self, P):
        pos = {x: k for k, x in enumerate(P.linear_extension())}
        assert all(pos[i] <= pos[j] for i in range(len(P)) for j in range(len(P)) if P.leq(i, j))

    @given(posets())
    def test_isomorphic_to_shuffled_copy(self, P):
        perm = list(range(len(P)))
        random.Random(len(P)).shuffle(perm)
        assert P.reindex(perm).isomorphic(P)


class TestDownsetLattice:
    def test_antichain_gives_diamond(self, diamond):
        assert as_sets(diamond.ji_poset, diamond.elements) == {
            frozenset(), frozenset("x"), frozenset("y"), frozenset("xy")}

    def test_chain(self, chain3):
        assert chain3.elements == (0, 0b01, 0b11)

    def test_v_poset_has_five_elements(self):
        P = poset_from_cover_pairs(["{1}", "{2}", "{3}"], [("{2}", "{1}"), ("{2}", "{3}")])
        assert len(downset_lattice(P)) == 5

    @given(posets())
    def test_matches_brute_force(self, P):
        L = downset_lattice(P)
        expected = brute_downsets(P.elements, lambda x, y: P.leq(P.index(x), P.index(y)))
        assert as_sets(P, L.elements) == set(expected)
        assert len(L) == len(expected)

    def test_size_limit_counts_downsets(self):
        chain = FinitePoset(tuple(range(40)), tuple((1 << (i + 1)) - 1 for i in range(40)))
        assert len(downset_lattice(chain, cap=64)) == 41
        antichain = FinitePoset(tuple(range(7)), tuple(1 << i for i in range(7)))
        with pytest.raises(SizeLimitExceeded):
            downset_lattice(antichain, cap=100)

    @given(posets())
    def test_join_meet_are_set_operations(self, P):
        L = downset_lattice(P)
        for a in L.elements:
            for b in L.elements:
                assert L.join(a, b) in L and L.meet(a, b) in L
                assert L.leq(a, b) == (L.join(a, b) == b)


class TestJoinIrreducibles:
    def test_chain(self, chain3):
        a, one = chain3.elements[1], chain3.elements[2]
        assert join_irreducibles(chain3) == [(a, 0), (one, a)]

    def test_diamond(self, diamond):
        assert join_irreducibles(diamond) == [(0b01, 0), (0b10, 0)]

    @given(posets())
    def test_matches_brute_force(self, P):
        L = downset_lattice(P)
        fam = [frozenset(i for i in range(len(P)) if (a >> i) & 1) for a in L.elements]
        brute = brute_join_irreducibles(fam)
        got = [frozenset(i for i in range(len(P)) if (a >> i) & 1) for a, _ in join_irreducibles(L)]
        assert sorted(map(sorted, got)) == sorted(map(sorted, brute))

    @given(posets())
    def test_birkhoff_round_trip(self, P):
        assert ji_poset_of(downset_lattice(P)).isomorphic(P)

    @given(posets(5), st.randoms(use_true_random=False))
    def test_lattice_from_bare_order(self, P, rnd):
        L = downset_lattice(P)
        order = L.order_poset()
        names = [f"e{i}" for i in range(len(order))]
        rnd.shuffle(names)
        idx = {x: i for i, x in enumerate(names)}
        L2 = lattice_from_order(names, lambda x, y: order.leq(idx[x], idx[y]))
        assert L2.order_poset().isomorphic(order)
        assert ji_poset_of(L2).isomorphic(P)

    def test_birkhoff_embed_and_irredundant_rep(self, chain3, diamond):
        assert birkhoff_embed(diamond, 0b11) == 0b11
        assert irredundant_join_rep(diamond, 0b11) == [0b01, 0b10]
        assert irredundant_join_rep(diamond, 0) == []

    @pytest.mark.parametrize("name,covers", [
        ("N5", [("0", "a"), ("a", "b"), ("b", "1"), ("0", "c"), ("c", "1")]),
        ("M3", [("0", "a"), ("0", "b"), ("0", "c"), ("a", "1"), ("b", "1"), ("c", "1")]),
    ])
    def test_non_distributive_rejected(self, name, covers):
        P = poset_from_cover_pairs(sorted({x for c in covers for x in c}), covers)
        with pytest.raises(NotDistributive):
            lattice_from_order(P.elements, lambda x, y: P.leq(P.index(x), P.index(y)))

    def test_lattice_from_family(self):
        L = lattice_from_family([frozenset(), frozenset({2}), frozenset({1, 2}),
                                 frozenset({2, 3}), frozenset({1, 2, 3})])
        assert len(L) == 5 and len(L.ji_poset) == 3


class TestBooleanization:
    def test_degenerate(self):
        L = downset_lattice(FinitePoset((), ()))
        B = booleanize(L)
        assert B.algebra.size == 1 and B.image() == [0]

    def test_chain_embeds_in_four_element_algebra(self, chain3):
        B = booleanize(chain3)
        assert B.algebra.size == 4 and B.algebra.atoms == ("a", "1")

    def test_diamond_is_fixed(self, diamond):
        assert sorted(booleanize(diamond).image()) == [0, 1, 2, 3]

    @pytest.mark.parametrize("n", range(5))
    def test_algebra_axioms(self, n):
        assert BooleanAlgebraOnAtoms(tuple(range(n))).check_axioms()

    @given(posets(5))
    def test_j_is_a_lattice_monomorphism(self, P):
        L = downset_lattice(P)
        j = booleanize(L).j
        assert len({j(a) for a in L.elements}) == len(L)
        for a in L.elements:
            for b in L.elements:
                assert j(a | b) == j(a) | j(b) and j(a & b) == j(a) & j(b)

    def test_identity_hom(self, diamond):
        bh = booleanize_hom(LatticeHom.identity(diamond))
        assert all(bh(s) == s for s in range(4))

    def test_chain_collapse(self, chain3):
        two = downset_lattice(FinitePoset(("t",), (1,)))
        a, one = chain3.elements[1], chain3.elements[2]
        h = LatticeHom(chain3, two, {0: 0, a: 1, one: 1})
        bh = booleanize_hom(h)
        # the commuting square B(h)∘j = j∘h pins the atom map down
        assert bh(0b01) == 1  # atom a
        assert bh(0b10) == 0  # atom 1
        for k in chain3.elements:
            assert bh(birkhoff_embed(chain3, k)) == birkhoff_embed(two, h(k))

    def test_non_homomorphism_rejected(self, chain3):
        two = downset_lattice(FinitePoset(("t",), (1,)))
        with pytest.raises(NotAHomomorphism):
            LatticeHom(chain3, two, {0: 0, 0b01: 0, 0b11: 0})

    @given(posets(4))
    def test_booleanized_sublattice_inclusions(self, P):
        L = downset_lattice(P)
        h = LatticeHom.identity(L)
        assert booleanize_hom(h).atom_source == tuple(range(len(P)))


class TestConvexPieces:
    def test_chain(self, chain3):
        assert [p.mask for p in convex_semilattice(chain3)] == [0, 0b01, 0b10, 0b11]

    def test_diamond(self, diamond):
        assert len(convex_semilattice(diamond)) == 4

    def test_trivial(self):
        L = downset_lattice(FinitePoset((), ()))
        assert [p.mask for p in convex_semilattice(L)] == [0]

    def test_non_convex_rejected(self):
        L = downset_lattice(poset_from_cover_pairs("abc", [("a", "b"), ("b", "c")]))
        with pytest.raises(ValidationError):
            ConvexPiece(0b101, L)

    @given(posets(5))
    def test_closed_under_intersection(self, P):
        L = downset_lattice(P)
        masks = {p.mask for p in convex_semilattice(L)}
        assert all(x & y in masks for x in masks for y in masks)


def test_dual_lattice_reverses_order(diamond):
    op, flip = dual_lattice(diamond)
    for a in diamond.elements:
        for b in diamond.elements:
            assert diamond.leq(a, b) == op.leq(flip[b], flip[a])


def test_permutation_invariance_of_isomorphism():
    P = poset_from_cover_pairs("abcd", [("a", "b"), ("a", "c"), ("c", "d")])
    for perm in permutations(range(4)):
        assert P.reindex(perm).isomorphic(P)
