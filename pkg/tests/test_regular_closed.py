import random
from fractions import Fraction as Q

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conleyforms.errors import GridMismatch, ValidationError
from conleyforms.regular_closed import (
    GridAlgebra1D,
    IntervalUnion,
    RegularClosedCellSet,
    as_fraction,
    check_difference_lemma,
    check_evaluation,
    check_regclhom,
    evaluation_sweep,
    rc_complement,
    rc_complement_points,
    rc_diff,
    rc_join,
    rc_meet,
    rc_meet_points,
)

from oracles import SampledSet, interval_member

SPACE = (Q(0), Q(1))


def iu(*items):
    return IntervalUnion.from_intervals(SPACE, items)


@st.composite
def raw_intervals(draw, max_items=4):
    items = []
    for _ in range(draw(st.integers(0, max_items))):
        d = draw(st.integers(1, 16))
        a, b = sorted((Q(draw(st.integers(0, d)), d), Q(draw(st.integers(0, d)), d)))
        items.append((a, b, draw(st.booleans()), draw(st.booleans())))
    return items


def agrees(S: IntervalUnion, ref: SampledSet) -> bool:
    return all(S.contains_point(x) == ref.member(x) for x in ref.probes())


def sampled(items):
    cuts = [x for l, r, _, _ in items for x in (l, r)]
    return SampledSet(Q(0), Q(1), cuts, interval_member(items))


class TestIntervalUnion:
    def test_rejects_floats(self):
        with pytest.raises(ValidationError):
            as_fraction(0.1)

    def test_point_is_not_regular(self):
        assert iu((Q(1, 10), Q(1, 10))).regularize().is_empty()

    def test_touching_merge(self):
        S = iu((0, Q(1, 4)), (Q(1, 4), Q(1, 2)))
        assert S.regularize() == iu((0, Q(1, 2)))

    def test_regular_fixed(self):
        S = iu((0, Q(1, 4)), (Q(1, 2), 1))
        assert S.is_regular_closed() and S.regularize() == S

    def test_interior_is_relative(self):
        assert iu((0, Q(1, 2))).interior().contains_point(0)
        assert not iu((0, Q(1, 2))).interior().contains_point(Q(1, 2))

    def test_union_meet_examples(self):
        U, V = iu((0, Q(3, 10))), iu((Q(3, 10), Q(6, 10)))
        assert (U | V).regularize() == U | V == iu((0, Q(3, 5)))
        V = iu((Q(1, 5), Q(3, 5)))
        assert (U & V).regularize() == rc_meet_points(U, V) == iu((Q(1, 5), Q(3, 10)))

    def test_difference_examples(self):
        U, V = iu((0, Q(1, 2))), iu((Q(1, 4), Q(3, 4)))
        assert rc_meet_points(U, rc_complement_points(V)) == (U - V).closure() == iu((0, Q(1, 4)))
        assert rc_meet_points(U, rc_complement_points(U)).is_empty()
        empty = IntervalUnion.empty(SPACE)
        assert rc_meet_points(U, rc_complement_points(empty)) == U

    @given(raw_intervals(), raw_intervals())
    def test_boolean_operations(self, a, b):
        A, B = IntervalUnion.from_intervals(SPACE, a), IntervalUnion.from_intervals(SPACE, b)
        ra, rb = sampled(a), sampled(b)
        for x in ra.probes() + rb.probes():
            assert (A | B).contains_point(x) == (ra.member(x) or rb.member(x))
            assert (A & B).contains_point(x) == (ra.member(x) and rb.member(x))
            assert (A - B).contains_point(x) == (ra.member(x) and not rb.member(x))
            assert A.complement().contains_point(x) != ra.member(x)

    @given(raw_intervals())
    def test_topology_matches_oracle(self, items):
        S, ref = IntervalUnion.from_intervals(SPACE, items), sampled(items)
        assert agrees(S, ref)
        assert agrees(S.closure(), ref.closure())
        assert agrees(S.interior(), ref.interior())
        assert agrees(S.regularize(), ref.interior().closure())

    @given(raw_intervals())
    def test_regularize_idempotent(self, items):
        R = IntervalUnion.from_intervals(SPACE, items).regularize()
        assert R.regularize() == R and R.is_regular_closed()

    @given(raw_intervals(), raw_intervals())
    def test_hash_respects_equality(self, a, b):
        A, B = IntervalUnion.from_intervals(SPACE, a), IntervalUnion.from_intervals(SPACE, b)
        if A == B:
            assert hash(A) == hash(B)

    @given(raw_intervals(), raw_intervals())
    def test_regclhom_and_difference(self, a, b):
        A = IntervalUnion.from_intervals(SPACE, a).closure()
        B = IntervalUnion.from_intervals(SPACE, b).closure()
        assert check_regclhom([(A, B)])
        assert check_difference_lemma([(A.regularize(), B.regularize())])


class TestGrid:
    def test_cell_algebra(self):
        g = GridAlgebra1D.uniform(0, 1, 4)
        U, V = RegularClosedCellSet(g, 0b0011), RegularClosedCellSet(g, 0b0110)
        assert rc_meet(U, V).mask == 0b0010
        assert rc_diff(U, V).mask == 0b0001
        assert rc_join(U, V).mask == 0b0111
        assert rc_complement(U).mask == 0b1100

    def test_touching_cells_meet_empty(self):
        g = GridAlgebra1D.uniform(0, 1, 4)
        U, V = g.evaluate(0b01), g.evaluate(0b10)
        assert (U & V) == iu((Q(1, 4), Q(1, 4)))
        assert rc_meet_points(U, V).is_empty()
        assert g.evaluate(0b01 & 0b10).is_empty()

    def test_grid_mismatch(self):
        a, b = GridAlgebra1D.uniform(0, 1, 2), GridAlgebra1D.uniform(0, 1, 4)
        with pytest.raises(GridMismatch):
            rc_join(RegularClosedCellSet(a, 1), RegularClosedCellSet(b, 1))

    def test_bad_breakpoints(self):
        with pytest.raises(ValidationError):
            GridAlgebra1D((Q(0), Q(1, 2), Q(1, 2), Q(1)))

    @pytest.mark.parametrize("n", range(1, 7))
    def test_sweep(self, n):
        rng = random.Random(n)
        cuts = sorted(rng.sample(range(1, 32), n - 1))
        g = GridAlgebra1D(tuple(Q(x, 32) for x in [0, *cuts, 32]))
        assert evaluation_sweep(g) == {"join": 0, "meet": 0, "complement": 0, "difference": 0}

    def test_check_evaluation(self):
        g = GridAlgebra1D.uniform(0, 1, 3)
        assert all(check_evaluation(g, 0b011, 0b110).values())

    def test_refinement_preserves_evaluation(self):
        g = GridAlgebra1D.uniform(0, 1, 3)
        fine = g.refine()
        for m in range(8):
            S = g.evaluate(m)
            assert fine.evaluate(fine.cells_meeting(S.interior())) == S
