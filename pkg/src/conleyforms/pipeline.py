"""Outer approximations of piecewise-affine interval maps and their models.

The map is known exactly, so images of grid cells are exact rational
intervals.  Everything about the continuous ω-limit sets enters through an
explicit oracle object; nothing here estimates limit sets numerically.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Protocol, Sequence

from .dynamics import (
    MorseRepresentation,
    Relation,
    attractor_lattice,
    forward_invariant_lattice,
    inv,
    is_forward_invariant,
    morse_representation,
    omega,
)
from .errors import (
    EmbeddingFailure,
    NotASublattice,
    NotEnclosable,
    NotForwardInvariant,
    OutOfDomain,
    ValidationError,
)
from .order_core import (
    FiniteDistributiveLattice,
    FinitePoset,
    iter_bits,
    join_irreducibles,
    lattice_from_family,
    popcount,
)
from .regular_closed import GridAlgebra1D, IntervalUnion, RegularClosedCellSet, as_fraction

PASS = "PASS"
FAIL = "FAIL"
UNVERIFIED = "UNVERIFIED"
PASS_BY_MTCHAR1 = "PASS-BY-MTCHAR1"


@dataclass(frozen=True)
class AffinePiece:
    slope: Fraction
    intercept: Fraction

    def __call__(self, x: Fraction) -> Fraction:
        return self.slope * x + self.intercept


@dataclass(frozen=True)
class PiecewiseMonotoneMap1D:
    """Continuous piecewise-affine self-map of ``[breakpoints[0], breakpoints[-1]]``."""

    breakpoints: tuple
    pieces: tuple

    def __post_init__(self):
        bp = tuple(as_fraction(x) for x in self.breakpoints)
        pcs = tuple(p if isinstance(p, AffinePiece)
                    else AffinePiece(as_fraction(p[0]), as_fraction(p[1])) for p in self.pieces)
        object.__setattr__(self, "breakpoints", bp)
        object.__setattr__(self, "pieces", pcs)
        if len(bp) < 2 or any(a >= b for a, b in zip(bp, bp[1:])):
            raise ValidationError("map breakpoints must be strictly increasing")
        if len(pcs) != len(bp) - 1:
            raise ValidationError("one affine piece per map interval is required")
        for k in range(1, len(bp) - 1):
            if pcs[k - 1](bp[k]) != pcs[k](bp[k]):
                raise ValidationError(f"map is discontinuous at {bp[k]}")
        lo, hi = self.domain
        for k, p in enumerate(pcs):
            for x in (bp[k], bp[k + 1]):
                if not lo <= p(x) <= hi:
                    raise ValidationError(f"map sends {x} to {p(x)}, outside the domain")

    @classmethod
    def affine(cls, lo, hi, slope, intercept) -> "PiecewiseMonotoneMap1D":
        return cls((lo, hi), ((slope, intercept),))

    @property
    def domain(self) -> tuple:
        return (self.breakpoints[0], self.breakpoints[-1])

    def __call__(self, x) -> Fraction:
        x = as_fraction(x)
        lo, hi = self.domain
        if not lo <= x <= hi:
            raise OutOfDomain(f"{x} is outside the domain")
        for k in range(len(self.pieces)):
            if x <= self.breakpoints[k + 1]:
                return self.pieces[k](x)
        raise AssertionError("unreachable")


def exact_image(f: PiecewiseMonotoneMap1D, interval) -> IntervalUnion:
    """Image of a closed interval, from endpoint values on each affine piece."""
    a, b = as_fraction(interval[0]), as_fraction(interval[1])
    lo, hi = f.domain
    if a > b or a < lo or b > hi:
        raise OutOfDomain(f"[{a}, {b}] is not inside the domain [{lo}, {hi}]")
    bp = f.breakpoints
    parts = []
    for k, p in enumerate(f.pieces):
        l, r = max(a, bp[k]), min(b, bp[k + 1])
        if l > r:
            continue
        y0, y1 = p(l), p(r)
        parts.append((min(y0, y1), max(y0, y1)))
    return IntervalUnion.from_intervals(f.domain, parts)


def minimal_enclosure(grid: GridAlgebra1D, image: IntervalUnion) -> int:
    """Smallest cell set whose evaluation has ``image`` in its relative interior.

    Cells whose open interior meets the image are forced; an interior
    breakpoint in the image forces both adjacent cells; an end of the space
    forces its single adjacent cell.
    """
    if image.space != grid.space:
        raise NotEnclosable("image lives in a different space")
    mask = grid.cells_meeting(image)
    bp = grid.breakpoints
    for k, x in enumerate(bp):
        if image.contains_point(x):
            if k > 0:
                mask |= 1 << (k - 1)
            if k < grid.n:
                mask |= 1 << k
    return mask


@dataclass(frozen=True, eq=False)
class OuterApproximation:
    map: PiecewiseMonotoneMap1D
    grid: GridAlgebra1D
    relation: Relation
    images: tuple  # exact image of each cell
    certified: bool = False

    def with_relation(self, relation: Relation) -> "OuterApproximation":
        return OuterApproximation(self.map, self.grid, relation, self.images, False)


def cell_labels(n: int) -> tuple:
    return tuple(str(i + 1) for i in range(n))


def build_outer_approximation(f: PiecewiseMonotoneMap1D, grid: GridAlgebra1D) -> OuterApproximation:
    """Minimal weak outer approximation: ``Γ⁺(ξ)`` per :func:`minimal_enclosure`."""
    if f.domain != grid.space:
        raise ValidationError("map domain and grid space differ")
    images, rows = [], []
    for i in range(grid.n):
        img = exact_image(f, grid.cell(i))
        images.append(img)
        rows.append(minimal_enclosure(grid, img))
    rel = Relation(cell_labels(grid.n), tuple(rows))
    return OuterApproximation(f, grid, rel, tuple(images), certified=True)


@dataclass(frozen=True)
class Certificate:
    condition: str
    status: str
    entries: tuple = ()
    note: str = ""

    @property
    def passed(self) -> bool:
        return self.status in (PASS, PASS_BY_MTCHAR1)

    def as_dict(self) -> dict:
        return {"condition": self.condition, "status": self.status,
                "note": self.note, "entries": [dict(e) for e in self.entries]}


def intervals_json(S: IntervalUnion) -> list:
    return [[_q(a), _q(b), lc, rc] for a, b, lc, rc in S.intervals()]


def _q(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def check_W(oa: OuterApproximation) -> Certificate:
    """Recompute every cell image and test ``image ⊂ int |Γ⁺(ξ)|`` exactly."""
    F, grid = oa.relation, oa.grid
    entries, ok = [], True
    for i in range(grid.n):
        img = exact_image(oa.map, grid.cell(i))
        enclosure = grid.evaluate(F.forward[i])
        good = img.issubset(enclosure.interior())
        ok &= good
        entries.append({
            "atom": F.atoms[i],
            "image": intervals_json(img),
            "enclosure": [F.atoms[k] for k in iter_bits(F.forward[i])],
            "pass": good,
        })
    return Certificate("W", PASS if ok else FAIL, tuple(entries))


class OmegaOracle(Protocol):
    def omega(self, S: IntervalUnion) -> IntervalUnion: ...


@dataclass(frozen=True)
class FixedPointOracle:
    """Every nonempty set has the single ω-limit point ``point``."""

    point: Fraction
    space: tuple

    def omega(self, S: IntervalUnion) -> IntervalUnion:
        if S.is_empty():
            return IntervalUnion.empty(self.space)
        return IntervalUnion.from_intervals(self.space, [(self.point, self.point)])


def check_L(oa: OuterApproximation, omega_oracle: OmegaOracle | None = None) -> Certificate:
    """Condition (L): ``ω(|ξ|) ⊂ |bω(ξ)|`` for every cell."""
    F, grid = oa.relation, oa.grid
    if F.is_reflexive() and F.is_transitive() and check_W(oa).passed:
        return Certificate("L", PASS_BY_MTCHAR1, (), "reflexive, transitive and (W) holds")
    if omega_oracle is None:
        return Certificate("L", UNVERIFIED, (), "no ω-oracle supplied")
    entries, ok = [], True
    for i in range(grid.n):
        w = omega(F, 1 << i)
        target = omega_oracle.omega(grid.evaluate(1 << i))
        good = target.issubset(grid.evaluate(w))
        ok &= good
        entries.append({
            "atom": F.atoms[i],
            "omega_oracle": intervals_json(target),
            "b_omega": [F.atoms[k] for k in iter_bits(w)],
            "pass": good,
        })
    return Certificate("L", PASS if ok else FAIL, tuple(entries))


@dataclass(frozen=True, eq=False)
class MorseTessellation:
    relation: Relation
    lattice: FiniteDistributiveLattice  # labels are cell masks
    tiles: tuple
    order: FinitePoset  # labelled by tile masks
    grid: GridAlgebra1D | None = None

    def cell_sets(self) -> list:
        if self.grid is None:
            raise ValidationError("tessellation has no grid attached")
        return [RegularClosedCellSet(self.grid, t) for t in self.tiles]

    def covers(self) -> list:
        return [(self.tiles[i], self.tiles[j]) for i, j in self.order.covers()]


def _check_block_family(F: Relation, family: Sequence[int]) -> list:
    fam = list(dict.fromkeys(int(x) for x in family))
    members = set(fam)
    for U in fam:
        if not is_forward_invariant(F, U):
            raise NotForwardInvariant(f"{set(F.labels(U))} is not forward invariant")
    if 0 not in members or F.full not in members:
        raise NotASublattice("family must contain ∅ and X")
    for U, V in combinations(fam, 2):
        if U | V not in members or U & V not in members:
            raise NotASublattice("family is not closed under union and intersection")
    return fam


def morse_tessellation(F: Relation, N, grid: GridAlgebra1D | None = None) -> MorseTessellation:
    """Tiles ``N − pred N`` over join-irreducibles of a forward-invariant sublattice."""
    masks = [N.label(a) for a in N.elements] if isinstance(N, FiniteDistributiveLattice) else N
    fam = _check_block_family(F, masks)
    L = lattice_from_family(fam)
    ji = join_irreducibles(L)
    tiles = tuple(L.label(a) & ~L.label(p) for a, p in ji)
    where = {t: L.label(a) for t, (a, _) in zip(tiles, ji)}
    order = FinitePoset.from_leq(tiles, lambda s, t: not where[s] & ~where[t])
    union = 0
    for t in tiles:
        if union & t:
            raise ValidationError("tiles overlap")
        union |= t
    if union != F.full:
        raise ValidationError("tiles do not cover the space")
    return MorseTessellation(F, L, tiles, order, grid)


def block_family(F: Relation) -> list:
    """Sublattice of forward-invariant sets generated by the attractors and X."""
    att = attractor_lattice(F)
    fam = {att.label(a) for a in att.elements} | {0, F.full}
    while True:
        new = {U | V for U in fam for V in fam} | {U & V for U in fam for V in fam}
        if new <= fam:
            return sorted(fam, key=lambda m: (popcount(m), m))
        fam |= new


@dataclass(frozen=True, eq=False)
class TessellatedMorseDecomposition:
    tessellation: MorseTessellation
    morse: MorseRepresentation
    pi: dict  # Morse set -> tile
    empty_tiles: tuple  # tiles whose maximal invariant set is empty


def tessellated_morse_decomposition(F: Relation, N, grid=None) -> TessellatedMorseDecomposition:
    """Order embedding ``π`` of ``M(ω(N))`` into the tiles of ``N``, with ``Inv ∘ π = id``."""
    T = morse_tessellation(F, N, grid)
    A = sorted({omega(F, T.lattice.label(a)) for a in T.lattice.elements})
    M = morse_representation(F, A)
    pi = {}
    for m in M.sets:
        hits = [t for t in T.tiles if not m & ~t]
        if len(hits) != 1:
            raise EmbeddingFailure(f"Morse set {set(F.labels(m))} lies in {len(hits)} tiles")
        pi[m] = hits[0]
        if inv(F, hits[0]) != m:
            raise EmbeddingFailure(f"Inv of the tile around {set(F.labels(m))} differs")
    tpos = {t: i for i, t in enumerate(T.tiles)}
    for i, m in enumerate(M.sets):
        for j, m2 in enumerate(M.sets):
            if M.order.leq(i, j) != T.order.leq(tpos[pi[m]], tpos[pi[m2]]):
                raise EmbeddingFailure("π is not an order embedding")
    empty = tuple(t for t in T.tiles if inv(F, t) == 0)
    return TessellatedMorseDecomposition(T, M, pi, empty)


def preorder_tessellation(F: Relation, grid=None) -> MorseTessellation:
    """Tessellation of a reflexive-transitive relation by its equivalence classes."""
    if not (F.is_reflexive() and F.is_transitive()):
        raise ValidationError("relation is not a preorder")
    return morse_tessellation(F, forward_invariant_lattice(F), grid)


@dataclass(frozen=True)
class ModelReport:
    w: Certificate
    l: Certificate
    squares: tuple = field(default_factory=tuple)

    @property
    def commutes(self) -> bool:
        return all(s["commutes"] for s in self.squares)

    @property
    def passed(self) -> bool:
        return self.w.passed and self.l.passed and self.commutes

    def as_dict(self) -> dict:
        return {"W": self.w.as_dict(), "L": self.l.as_dict(),
                "squares": [dict(s) for s in self.squares],
                "commutes": self.commutes, "passed": self.passed}


def default_test_sets(F: Relation) -> list:
    att = attractor_lattice(F)
    sets = {0, F.full} | {att.label(a) for a in att.elements}
    sets |= {F.forward_closure(1 << i) for i in range(F.n)}
    return sorted(sets, key=lambda m: (popcount(m), m))


def verify_commutative_model(oa: OuterApproximation, omega_oracle: OmegaOracle,
                             attractor_oracle: OmegaOracle | None = None,
                             test_sets: Iterable[int] | None = None) -> ModelReport:
    """(W), (L) and the square ``ω(|U|) = ω(|bω(U)|)`` on forward-invariant test sets."""
    F, grid = oa.relation, oa.grid
    w = check_W(oa)
    l = check_L(oa, omega_oracle)
    oracle = attractor_oracle or omega_oracle
    squares = []
    if w.passed:
        for U in (default_test_sets(F) if test_sets is None else test_sets):
            if not is_forward_invariant(F, U):
                continue
            lhs = oracle.omega(grid.evaluate(U))
            rhs = oracle.omega(grid.evaluate(omega(F, U)))
            squares.append({
                "set": list(F.labels(U)),
                "omega_of_set": intervals_json(lhs),
                "omega_of_attractor": intervals_json(rhs),
                "commutes": lhs == rhs,
            })
    return ModelReport(w, l, tuple(squares))


@dataclass(frozen=True, eq=False)
class PipelineResult:
    approximation: OuterApproximation
    relation: Relation
    decomposition: TessellatedMorseDecomposition
    report: ModelReport


def run_pipeline(f: PiecewiseMonotoneMap1D, grid: GridAlgebra1D, *, closure: bool = False,
                 omega_oracle: OmegaOracle | None = None) -> PipelineResult:
    oa = build_outer_approximation(f, grid)
    # blocks forward invariant for F stay forward invariant for its closure
    blocks = block_family(oa.relation)
    if closure:
        oa = oa.with_relation(oa.relation.reachability_closure())
    F = oa.relation
    if omega_oracle is None:
        w, l = check_W(oa), check_L(oa, None)
        report = ModelReport(w, l, ())
    else:
        report = verify_commutative_model(oa, omega_oracle)
    tmd = tessellated_morse_decomposition(F, blocks, grid)
    return PipelineResult(oa, F, tmd, report)


def pipeline_status(result: PipelineResult, oracle_given: bool) -> str:
    r = result.report
    if not r.w.passed or r.l.status == FAIL or (oracle_given and not r.commutes):
        return FAIL
    if r.l.status in (UNVERIFIED, PASS_BY_MTCHAR1):
        return r.l.status
    return PASS
