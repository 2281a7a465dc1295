import random
from itertools import product

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conleyforms.dynamics import (
    attractor_lattice,
    conley_form_att,
    dual_repeller,
    forward_invariant_lattice,
    repeller_lattice,
)
from conleyforms.errors import AdditivityNotApplicable, AxiomsViolated, NotInjective, ValidationError
from conleyforms.forms import (
    LatticeForm,
    MeetSemilattice,
    canonical_conley_form,
    check_additivity,
    check_extra_properties,
    check_form_axioms,
    constant_form,
    decompose_join,
    dualize,
    gamma_from_form,
    induced_theta,
    pullback_form,
    set_difference_form,
    spectral_representation,
    transition_iso,
)
from conleyforms.order_core import FinitePoset, LatticeHom, downset_lattice

from test_order_core import posets


def naive_axioms(f):
    """Direct quantification over L² and L⁴, used as a reference."""
    L, m = f.source, f.target.meet
    E = L.elements
    t = f.table
    absorption = all(t[(a, b)] == t[(a | b, b)] == t[(a, a & b)] for a, b in product(E, repeat=2))
    distributivity = all(
        m(t[(a, b)], t[(c, d)]) == t[(a & c, b | d)] for a, b, c, d in product(E, repeat=4))
    monotone = all((t[(a, b)] == f.zero) == L.leq(a, b) for a, b in product(E, repeat=2))
    return absorption, distributivity, monotone


class TestCanonicalForm:
    def test_chain_value(self, chain3):
        f = canonical_conley_form(chain3)
        a, one = chain3.elements[1:]
        assert f.table[(one, a)] == 0b10  # the atom "1"

    def test_diamond_value(self, diamond):
        assert canonical_conley_form(diamond).table[(0b01, 0b10)] == 0b01

    @given(posets(4))
    def test_axioms_match_naive_check(self, P):
        L = downset_lattice(P)
        f = canonical_conley_form(L)
        ax = check_form_axioms(f)
        assert ax.exhaustive and ax.conley
        assert naive_axioms(f) == (True, True, True)

    @given(posets(4))
    def test_extra_properties(self, P):
        assert check_extra_properties(canonical_conley_form(downset_lattice(P))).all()

    @given(posets(4))
    def test_gamma_is_identity(self, P):
        L = downset_lattice(P)
        g = gamma_from_form(canonical_conley_form(L))
        assert all(k == v for k, v in g.table.items())


class TestAxiomHierarchy:
    def test_constant_form(self, chain3):
        ax = check_form_axioms(constant_form(chain3))
        assert ax.absorption and not ax.monotonicity

    def test_set_difference_on_boolean_is_additive(self, diamond):
        f = set_difference_form(diamond, lambda a: a, 2)
        ax = check_form_axioms(f)
        assert ax.conley and ax.additivity

    def test_additivity_needs_an_embedding(self, chain3):
        f = canonical_conley_form(chain3)
        ax = check_form_axioms(f)
        assert ax.additivity is None or isinstance(ax.additivity, bool)
        with pytest.raises(AdditivityNotApplicable):
            check_additivity(LatticeForm.from_function(
                chain3, MeetSemilattice.from_table(["z"], {("z", "z"): "z"}), lambda a, b: "z"))

    def test_missing_entries_rejected(self, chain3):
        with pytest.raises(ValidationError):
            LatticeForm(chain3, MeetSemilattice.powerset(2), {(0, 0): 0})

    def test_absorption_enforced(self, chain3):
        with pytest.raises(AxiomsViolated):
            LatticeForm.from_function(chain3, MeetSemilattice.powerset(2), lambda a, b: a)

    def test_randomised_beyond_limit(self):
        chain = FinitePoset(tuple(range(70)), tuple((1 << (i + 1)) - 1 for i in range(70)))
        L = downset_lattice(chain)
        ax = check_form_axioms(canonical_conley_form(L), samples=2000, seed=1)
        assert not ax.exhaustive and ax.conley

    def test_exchange_follows_distributivity(self):
        rng = random.Random(3)
        for _ in range(30):
            n = rng.randint(1, 4)
            L = downset_lattice(FinitePoset(tuple(range(n)), tuple(1 << i for i in range(n))))
            ax = check_form_axioms(set_difference_form(L, lambda a: a, n))
            assert not ax.distributivity or ax.exchange

    def test_non_conley_gamma(self, chain3):
        with pytest.raises(NotInjective):
            gamma_from_form(LatticeForm.from_function(
                chain3, MeetSemilattice.powerset(1), lambda a, b: 0))


class TestAttractorForm:
    def test_gamma_at_join_irreducible(self, f3):
        A = attractor_lattice(f3)
        g = gamma_from_form(conley_form_att(f3, A))
        # piece {{1,2}} is the join-irreducible {1,2} minus its predecessor {2}
        a12 = A.element(f3.subset(["1", "2"]))
        a2 = A.element(f3.subset(["2"]))
        assert g(a12 & ~a2) == f3.subset(["1"])

    def test_transition_from_canonical(self, f3):
        A = attractor_lattice(f3)
        f, f2 = canonical_conley_form(A), conley_form_att(f3, A)
        g = transition_iso(f, f2)
        el = lambda *xs: A.element(f3.subset(xs))  # noqa: E731
        assert g(f.table[(el("1", "2"), el("2"))]) == f3.subset(["1"])
        assert g(f.table[(el("2"), 0)]) == f3.subset(["2"])
        assert g(f.table[(el("2", "3"), el("2"))]) == f3.subset(["3"])
        for a, b in product(A.elements, repeat=2):
            assert g(f.table[(a, b)]) == f2.table[(a, b)]

    def test_transition_identity(self, chain3):
        f = canonical_conley_form(chain3)
        assert all(k == v for k, v in transition_iso(f, f).table.items())

    def test_dual(self, f3):
        A = attractor_lattice(f3)
        d = dualize(conley_form_att(f3, A))
        assert d.star[A.element(f3.subset(["2"]))] == f3.subset(["1", "3"])
        assert d.star[A.bottom] == f3.full and d.star[A.top] == 0
        # ^* is order reversing and lands on the repellers
        R = repeller_lattice(f3)
        assert sorted(d.star.values()) == sorted(R.label(r) for r in R.elements)
        for a, b in product(A.elements, repeat=2):
            if A.leq(a, b):
                assert not d.star[b] & ~d.star[a]

    def test_spectral(self, f3):
        A = attractor_lattice(f3)
        s = spectral_representation(A, conley_form_att(f3, A))
        vals = {f3.labels(v) for v in s.values()}
        assert vals == {("1",), ("2",), ("3",)}
        i2, i1, i3 = (s.order.index(f3.subset([x])) for x in "213")
        assert s.order.leq(i2, i1) and s.order.leq(i2, i3) and not s.order.leq(i1, i3)

    def test_pullback_of_repeller_form_is_attractor_form(self, f3):
        A, R = attractor_lattice(f3), repeller_lattice(f3)
        star = {a: R.element(dual_repeller(f3, A.label(a))) for a in A.elements}
        h = LatticeHom(A, R, star, anti=True)
        # C_Rep(R, R') = R ∩ R'^*, with R^* = ω(R^c)
        from conleyforms.dynamics import omega
        f_rep = LatticeForm.from_function(
            R, conley_form_att(f3, A).target,
            lambda r, r2: R.label(r) & omega(f3, f3.full & ~R.label(r2)))
        pb = pullback_form(h, f_rep)
        f_att = conley_form_att(f3, A)
        assert all(pb.table[k] == f_att.table[k] for k in f_att.table)


class TestMaps:
    def test_theta_identity(self, chain3):
        f = canonical_conley_form(chain3)
        theta = induced_theta(LatticeHom.identity(chain3), f, f)
        assert all(k == v for k, v in theta.items())

    def test_theta_chain_collapse(self, chain3):
        two = downset_lattice(FinitePoset(("t",), (1,)))
        a, one = chain3.elements[1:]
        h = LatticeHom(chain3, two, {0: 0, a: 1, one: 1})
        theta = induced_theta(h, canonical_conley_form(chain3), canonical_conley_form(two))
        assert theta[0b01] == theta[0b11] == 1
        assert theta[0b10] == 0

    def test_theta_needs_conley_source(self, chain3):
        with pytest.raises(AxiomsViolated):
            f = canonical_conley_form(chain3)
            induced_theta(LatticeHom.identity(chain3), constant_form(chain3), f)

    def test_pullback_identity(self, diamond):
        f = canonical_conley_form(diamond)
        pb = pullback_form(LatticeHom.identity(diamond), f)
        assert pb.table == f.table

    def test_pullback_by_complement(self, diamond):
        h = LatticeHom(diamond, diamond, {a: 0b11 & ~a for a in diamond.elements}, anti=True)
        f = set_difference_form(diamond, lambda a: a, 2)
        pb = pullback_form(h, f)
        assert all(pb.table[(a, b)] == a & ~b for a, b in product(diamond.elements, repeat=2))

    def test_decompose_join(self, diamond, f3):
        f = set_difference_form(diamond, lambda a: a, 2)
        assert decompose_join(diamond, f, 0b11) == [0b01, 0b10]
        assert decompose_join(diamond, f, 0) == []
        N = forward_invariant_lattice(f3)
        fN = set_difference_form(N, N.label, f3.n)
        parts = decompose_join(N, fN, N.top)
        assert all(p for p in parts)
        assert sum(parts) == f3.full  # pairwise disjoint tiles covering X


@given(st.integers(0, 2**16))
def test_random_blowups_agree_with_canonical(seed):
    from conleyforms.acceptance import blowup_form, random_poset

    rng = random.Random(seed)
    L = downset_lattice(random_poset(rng, rng.randint(0, 4)))
    f = canonical_conley_form(L)
    f2 = blowup_form(L, rng)
    g = transition_iso(f, f2)
    assert all(g(f.table[k]) == f2.table[k] for k in f.table)
