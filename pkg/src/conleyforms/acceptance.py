"""Acceptance criteria as plain functions over seeded corpora.

Each ``criterion_N`` returns a :class:`CriterionResult` whose ``detail`` holds
only counts and flags, so results are reproducible byte for byte.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, permutations, product

from .dynamics import (
    MorseRepresentation,
    Relation,
    alpha,
    attractor_lattice,
    conley_form_att,
    dual_repeller,
    generate_attractor_sublattice,
    inv_intersection_check,
    is_backward_invariant,
    is_forward_invariant,
    morse_representation,
    morse_tiles,
    omega,
    reconstruct_attractors,
    repeller_lattice,
    verify_morse_representation,
)
from .forms import (
    canonical_conley_form,
    check_extra_properties,
    check_form_axioms,
    set_difference_form,
    transition_iso,
)
from .order_core import (
    FiniteDistributiveLattice,
    FinitePoset,
    downset_lattice,
    iter_bits,
    ji_poset_of,
    lattice_from_order,
    popcount,
)
from .pipeline import (
    PASS,
    PASS_BY_MTCHAR1,
    FixedPointOracle,
    PiecewiseMonotoneMap1D,
    block_family,
    build_outer_approximation,
    check_L,
    check_W,
    preorder_tessellation,
    tessellated_morse_decomposition,
    verify_commutative_model,
)
from .regular_closed import (
    GridAlgebra1D,
    IntervalUnion,
    check_difference_lemma,
    check_regclhom,
    evaluation_sweep,
)

F3_EDGES = [("1", "1"), ("1", "2"), ("2", "2"), ("3", "2"), ("3", "3")]
HALF_ROWS_4 = [("1",), ("1", "2"), ("1", "2"), ("2", "3")]


@dataclass(frozen=True)
class CriterionResult:
    number: int
    name: str
    passed: bool
    detail: dict = field(default_factory=dict)

    def line(self) -> str:
        summary = ", ".join(f"{k}={v}" for k, v in sorted(self.detail.items()))
        return f"[{'PASS' if self.passed else 'FAIL'}] {self.number:>2} {self.name}: {summary}"

    def as_dict(self) -> dict:
        return {"number": self.number, "name": self.name, "passed": self.passed,
                "detail": dict(self.detail)}


# fixtures -------------------------------------------------------------------

def fix_f3() -> Relation:
    return Relation.from_edges(("1", "2", "3"), F3_EDGES)


def half_map() -> PiecewiseMonotoneMap1D:
    return PiecewiseMonotoneMap1D.affine(0, 1, Fraction(1, 2), 0)


def half_oracle() -> FixedPointOracle:
    return FixedPointOracle(Fraction(0), (Fraction(0), Fraction(1)))


# corpora --------------------------------------------------------------------

def naturally_labelled_posets(n: int):
    """Every order on ``range(n)`` contained in the usual order."""
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    for bits in range(1 << len(pairs)):
        rel = {pairs[k] for k in range(len(pairs)) if (bits >> k) & 1}
        if all((i, k) in rel for (i, j) in rel for (j2, k) in rel if j == j2):
            down = [(1 << j) | sum(1 << i for i in range(n) if (i, j) in rel) for j in range(n)]
            yield FinitePoset(tuple(f"p{i}" for i in range(n)), tuple(down))


def _poset_key(P: FinitePoset):
    n = len(P)
    best = None
    for perm in permutations(range(n)):
        key = tuple(sorted((perm[i], perm[j]) for j in range(n) for i in iter_bits(P.down[j])))
        if best is None or key < best:
            best = key
    return best


def poset_classes(max_n: int = 5) -> list:
    """One representative per isomorphism class, sizes ``0..max_n``."""
    out = []
    for n in range(max_n + 1):
        seen = set()
        for P in naturally_labelled_posets(n):
            k = _poset_key(P)
            if k not in seen:
                seen.add(k)
                out.append(P)
    return out


def random_poset(rng: random.Random, n: int, p: float = 0.35) -> FinitePoset:
    perm = list(range(n))
    rng.shuffle(perm)
    up = [0] * n
    for i in range(n):
        up[i] = 1 << i
    for i in reversed(range(n)):
        for j in range(i + 1, n):
            if rng.random() < p:
                up[i] |= up[j]
    down = [sum(1 << i for i in range(n) if (up[i] >> j) & 1) for j in range(n)]
    P = FinitePoset(tuple(f"q{perm[i]}" for i in range(n)), tuple(down))
    return P


def random_relation(rng: random.Random, n: int, p: float | None = None) -> Relation:
    p = rng.choice([0.15, 0.25, 0.35, 0.5]) if p is None else p
    rows = tuple(sum(1 << j for j in range(n) if rng.random() < p) for _ in range(n))
    return Relation(tuple(str(i + 1) for i in range(n)), rows)


def all_relations(n: int):
    atoms = tuple(str(i + 1) for i in range(n))
    for bits in range(1 << (n * n)):
        yield Relation(atoms, tuple((bits >> (n * i)) & ((1 << n) - 1) for i in range(n)))


def relation_corpus(seed: int) -> dict:
    rng = random.Random(seed)
    return {
        3: list(all_relations(3)),
        4: [random_relation(rng, 4) for _ in range(200)],
        5: [random_relation(rng, 5) for _ in range(1000)],
    }


def small_lattices(seed: int, random_count: int = 60) -> list:
    """Chains, Boolean algebras and random down-set lattices with at most 32 elements."""
    rng = random.Random(seed)
    out = []
    for k in range(32):
        chain = FinitePoset(tuple(f"c{i}" for i in range(k)),
                            tuple((1 << (i + 1)) - 1 for i in range(k)))
        out.append(downset_lattice(chain))
    for k in range(6):
        out.append(downset_lattice(FinitePoset(tuple(f"b{i}" for i in range(k)),
                                               tuple(1 << i for i in range(k)))))
    while random_count:
        L = downset_lattice(random_poset(rng, rng.randint(2, 7)))
        if len(L) <= 32:
            out.append(L)
            random_count -= 1
    return out


def brute_attractors(F: Relation) -> set:
    return {A for A in range(F.full + 1) if F.image(A) == A}


def brute_repellers(F: Relation) -> set:
    return {R for R in range(F.full + 1) if F.preimage(R) == R}


def blowup_form(L: FiniteDistributiveLattice, rng: random.Random):
    """Set-difference form on ``L`` realised by disjoint random blocks of atoms."""
    sizes = [rng.randint(1, 3) for _ in range(len(L.ji_poset))]
    slots = list(range(sum(sizes)))
    rng.shuffle(slots)
    blocks, k = [], 0
    for s in sizes:
        blocks.append(sum(1 << x for x in slots[k:k + s]))
        k += s
    sets = {}
    for a in L.elements:
        m = 0
        for p in range(len(L.ji_poset)):
            if L.leq(L.principal(p), a):
                m |= blocks[p]
        sets[a] = m
    return set_difference_form(L, sets.__getitem__, len(slots))


# criteria -------------------------------------------------------------------

def criterion_1(seed: int) -> CriterionResult:
    rng = random.Random(seed)
    posets = poset_classes(5) + [random_poset(rng, rng.randint(1, 8)) for _ in range(500)]
    fail_p = fail_l = 0
    for P in posets:
        L = downset_lattice(P)
        if not ji_poset_of(L).isomorphic(P):
            fail_p += 1
        # rebuild L from its bare order under scrambled labels
        order = L.order_poset()
        names = [f"e{i}" for i in range(len(order))]
        rng.shuffle(names)
        idx = {x: i for i, x in enumerate(names)}
        L2 = lattice_from_order(names, lambda x, y: order.leq(idx[x], idx[y]))
        if not downset_lattice(ji_poset_of(L2)).order_poset().isomorphic(L2.order_poset()):
            fail_l += 1
    return CriterionResult(1, "Birkhoff round-trip", fail_p == 0 and fail_l == 0,
                           {"posets": len(posets), "poset_failures": fail_p,
                            "lattice_failures": fail_l})


def criterion_2(seed: int) -> CriterionResult:
    lattices = small_lattices(seed)
    fails = 0
    for L in lattices:
        ax = check_form_axioms(canonical_conley_form(L))
        if not (ax.exhaustive and ax.absorption and ax.distributivity
                and ax.monotonicity and ax.exchange):
            fails += 1
    return CriterionResult(2, "canonical Conley form axioms", fails == 0,
                           {"lattices": len(lattices), "max_size": max(map(len, lattices)),
                            "failures": fails})


def _conley_corpus(seed: int) -> list:
    rng = random.Random(seed + 1)
    forms = []
    for L in small_lattices(seed, 30):
        forms.append(canonical_conley_form(L))
        forms.append(blowup_form(L, rng))
    corpus = relation_corpus(seed)
    for F in corpus[3][::4] + corpus[4][:50] + corpus[5][:100]:
        forms.append(conley_form_att(F))
    return forms


def criterion_3(seed: int) -> CriterionResult:
    forms = _conley_corpus(seed)
    checked = fails = 0
    for f in forms:
        if not check_form_axioms(f).conley:
            continue
        checked += 1
        if not check_extra_properties(f).all():
            fails += 1
    return CriterionResult(3, "derived form properties (i)-(iv)",
                           fails == 0 and checked == len(forms),
                           {"forms": len(forms), "axiom_satisfying": checked, "failures": fails})


def criterion_4(seed: int) -> CriterionResult:
    rng = random.Random(seed + 2)
    pairs = []
    for L in small_lattices(seed, 60):
        pairs.append((canonical_conley_form(L), blowup_form(L, rng)))
    corpus = relation_corpus(seed)
    for F in corpus[4][:60] + corpus[5][:60]:
        att = attractor_lattice(F)
        pairs.append((canonical_conley_form(att), conley_form_att(F, att)))
    fails = 0
    for f, f2 in pairs:
        try:
            g = transition_iso(f, f2)
        except Exception:
            fails += 1
            continue
        image1, image2 = set(f.image()), set(f2.image())
        bijective = set(g.table) == image1 and set(g.table.values()) == image2 \
            and len(image1) == len(image2)
        pointwise = all(g(f.table[k]) == f2.table[k] for k in f.table)
        if not (bijective and pointwise):
            fails += 1
    return CriterionResult(4, "uniqueness of the Conley form", fails == 0 and len(pairs) >= 100,
                           {"lattices": len(pairs), "failures": fails})


def criterion_5(seed: int) -> CriterionResult:
    corpus = relation_corpus(seed)
    rels = corpus[3] + corpus[5]
    fa = fr = 0
    for F in rels:
        A = attractor_lattice(F)
        if {A.label(a) for a in A.elements} != brute_attractors(F) or len(A) != len(brute_attractors(F)):
            fa += 1
        R = repeller_lattice(F)
        if {R.label(r) for r in R.elements} != brute_repellers(F) or len(R) != len(brute_repellers(F)):
            fr += 1
    return CriterionResult(5, "attractor lattice oracle equivalence", fa == 0 and fr == 0,
                           {"relations": len(rels), "attractor_failures": fa,
                            "repeller_failures": fr})


def criterion_6(seed: int) -> CriterionResult:
    corpus = relation_corpus(seed)
    rels = corpus[3] + corpus[4] + corpus[5]
    fa = fi = ft = 0
    n_pairs = n_tiles = 0
    for F in rels:
        if not check_form_axioms(conley_form_att(F)).conley:
            fa += 1
        fwd = [U for U in range(F.full + 1) if is_forward_invariant(F, U)]
        bwd = [V for V in range(F.full + 1) if is_backward_invariant(F, V)]
        if F.n <= 4:
            for U, V in product(fwd, bwd):
                n_pairs += 1
                if not inv_intersection_check(F, U, V):
                    fi += 1
        for U, U2 in product(fwd, repeat=2):
            n_tiles += 1
            if not morse_tiles(F, U, U2).consistent:
                ft += 1
    return CriterionResult(6, "C_Att axioms, Inv of intersections, Morse tiles",
                           fa == fi == ft == 0,
                           {"relations": len(rels), "axiom_failures": fa,
                            "inv_pairs": n_pairs, "inv_failures": fi,
                            "tile_pairs": n_tiles, "tile_failures": ft})


def criterion_7(seed: int) -> CriterionResult:
    corpus = relation_corpus(seed)
    sq_checked = sq_fail = inv_fail = 0
    for F in corpus[3] + corpus[4] + corpus[5]:
        if F.n <= 4:
            for U in range(F.full + 1):
                if is_forward_invariant(F, U):
                    sq_checked += 1
                    if dual_repeller(F, omega(F, U)) != alpha(F, F.full & ~U):
                        sq_fail += 1
        att = attractor_lattice(F)
        reps = {R for R in range(F.full + 1) if F.preimage(R) == R}
        As = [att.label(a) for a in att.elements]
        star = {A: dual_repeller(F, A) for A in As}
        ok = set(star.values()) == reps and len(set(star.values())) == len(As)
        ok &= all(omega(F, F.full & ~star[A]) == A for A in As)
        ok &= all((not A & ~B) == (not star[B] & ~star[A]) for A in As for B in As)
        if not ok:
            inv_fail += 1
    return CriterionResult(7, "duality square and involution", sq_fail == 0 and inv_fail == 0,
                           {"forward_invariant_sets": sq_checked, "square_failures": sq_fail,
                            "involution_failures": inv_fail})


def swap_mutation(F: Relation, M: MorseRepresentation):
    """Exchange two Morse sets joined by a path, or ``None`` if there is none."""
    for i, j in combinations(range(len(M.sets)), 2):
        for lo, hi in ((i, j), (j, i)):
            if M.order.leq(lo, hi) and F.forward_closure(F.image(M.sets[hi])) & M.sets[lo]:
                sets = list(M.sets)
                sets[lo], sets[hi] = sets[hi], sets[lo]
                return MorseRepresentation(F, tuple(sets), M.order.relabel(sets))
    return None


def drop_mutation(F: Relation, M: MorseRepresentation):
    """Remove one recurrent atom from its Morse set, or ``None``."""
    for k, s in enumerate(M.sets):
        for C in F.recurrent_components:
            if not C & ~s:
                atom = C & -C
                sets = list(M.sets)
                sets[k] = s & ~atom
                if sets[k] in M.sets[:k] + M.sets[k + 1:]:
                    continue
                return MorseRepresentation(F, tuple(sets), M.order.relabel(sets))
    return None


def criterion_8(seed: int) -> CriterionResult:
    rng = random.Random(seed + 3)
    corpus = relation_corpus(seed)
    rels = corpus[3] + corpus[4] + corpus[5]
    rt_fail = swap_n = swap_fail = drop_n = drop_fail = 0
    for F in rels:
        att = attractor_lattice(F)
        As = [att.label(a) for a in att.elements]
        gens = rng.sample(As, min(len(As), rng.randint(0, 3)))
        fam = generate_attractor_sublattice(F, gens)
        M = morse_representation(F, fam)
        ok, _ = verify_morse_representation(F, M)
        R = reconstruct_attractors(F, M)
        back = {R.label(a) for a in R.elements}
        if not ok or back != set(fam) or not morse_representation(F, R).same_as(M):
            rt_fail += 1
        bad = swap_mutation(F, M)
        if bad is not None:
            swap_n += 1
            ok, diag = verify_morse_representation(F, bad)
            if ok or not any(d.startswith("(d)") for d in diag):
                swap_fail += 1
        bad = drop_mutation(F, M)
        if bad is not None:
            drop_n += 1
            ok, diag = verify_morse_representation(F, bad)
            if ok or not any(d.startswith("(a)") for d in diag):
                drop_fail += 1
    return CriterionResult(8, "Morse round-trip and mutations",
                           rt_fail == swap_fail == drop_fail == 0 and swap_n > 0 and drop_n > 0,
                           {"relations": len(rels), "roundtrip_failures": rt_fail,
                            "swap_mutations": swap_n, "swap_failures": swap_fail,
                            "drop_mutations": drop_n, "drop_failures": drop_fail})


def random_closed_union(rng: random.Random, space=(0, 1)) -> IntervalUnion:
    items = []
    for _ in range(rng.randint(0, 4)):
        d = rng.randint(1, 64)
        a, b = sorted(Fraction(rng.randint(0, d), d) for _ in range(2))
        if rng.random() < 0.2:
            b = a
        items.append((a, b))
    return IntervalUnion.from_intervals(space, items)


def criterion_9(seed: int, max_cells: int = 10) -> CriterionResult:
    rng = random.Random(seed + 4)
    hom_fail = diff_fail = 0
    for _ in range(1000):
        U, V = random_closed_union(rng), random_closed_union(rng)
        hom_fail += not check_regclhom([(U, V)])
        diff_fail += not check_difference_lemma([(U.regularize(), V.regularize())])
    sweep_fail = 0
    for n in range(1, max_cells + 1):
        cuts = sorted(rng.sample(range(1, 64), n - 1))
        grid = GridAlgebra1D(tuple(Fraction(x, 64) for x in [0, *cuts, 64]))
        sweep_fail += sum(evaluation_sweep(grid).values())
    return CriterionResult(9, "regular closed oracle", hom_fail == diff_fail == sweep_fail == 0,
                           {"samples": 1000, "regclhom_failures": hom_fail,
                            "difference_failures": diff_fail, "max_cells": max_cells,
                            "evaluation_failures": sweep_fail})


def criterion_10(seed: int) -> CriterionResult:
    f, oracle = half_map(), half_oracle()
    detail = {}
    ok = True
    for n in (4, 8, 16, 64):
        t0 = time.perf_counter()
        grid = GridAlgebra1D.uniform(0, 1, n)
        oa = build_outer_approximation(f, grid)
        F = oa.relation
        if n == 4:
            exact = [F.labels(r) for r in F.forward] == HALF_ROWS_4
            detail["rows_4_exact"] = exact
            ok &= exact
        w = check_W(oa).status == PASS
        att = attractor_lattice(F)
        P = att.order_poset()
        chain = all(P.leq(i, j) or P.leq(j, i) for i in range(len(P)) for j in range(len(P)))
        nonzero = [att.label(a) for a in att.elements if a]
        least = min(nonzero, key=popcount) if nonzero else 0
        contains0 = grid.evaluate(least).contains_point(0)
        tmd = tessellated_morse_decomposition(F, block_family(F), grid)
        inv_pi = all(m == _inv(F, t) for m, t in tmd.pi.items())
        l_ok = check_L(oa, oracle).status == PASS
        model = verify_commutative_model(oa, oracle).passed
        elapsed = time.perf_counter() - t0
        good = w and chain and contains0 and inv_pi and l_ok and model
        if n == 64:
            detail["run_64_under_5s"] = elapsed < 5
            good &= elapsed < 5
        detail[f"cells_{n}"] = good
        ok &= good
    return CriterionResult(10, "x/2 pipeline", ok, detail)


def _inv(F, U):
    from .dynamics import inv

    return inv(F, U)


def criterion_11(seed: int) -> CriterionResult:
    detail = {}
    ok = True
    for n in (4, 8, 16):
        grid = GridAlgebra1D.uniform(0, 1, n)
        oa = build_outer_approximation(half_map(), grid)
        G = oa.relation.reachability_closure()
        oaG = oa.with_relation(G)
        status = check_L(oaG).status
        T = preorder_tessellation(G, grid)
        downs_ok = True
        for beta in T.order.iter_downsets():
            U = 0
            for i in iter_bits(beta):
                U |= T.tiles[i]
            downs_ok &= is_forward_invariant(G, U) and is_forward_invariant(oa.relation, U)
        good = status == PASS_BY_MTCHAR1 and downs_ok
        detail[f"cells_{n}"] = good
        ok &= good
    return CriterionResult(11, "preorder models", ok, detail)


CRITERIA = {
    1: criterion_1, 2: criterion_2, 3: criterion_3, 4: criterion_4, 5: criterion_5,
    6: criterion_6, 7: criterion_7, 8: criterion_8, 9: criterion_9, 10: criterion_10,
    11: criterion_11,
}


def run_all(seed: int, only=None) -> list:
    return [CRITERIA[k](seed) for k in sorted(CRITERIA) if only is None or k in only]
