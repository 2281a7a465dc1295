"""Dynamics of a finite relation: limit sets, attractors, Morse sets.

Atom subsets are plain ``int`` bitmasks over ``Relation.atoms``.  Lattices of
attractors, repellers or forward-invariant sets are returned as
:class:`FiniteDistributiveLattice` objects whose element labels are those
bitmasks, so ``L.label(a)`` is the subset realising element ``a``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import combinations, product
from typing import Iterable, Sequence

import networkx as nx

from .errors import (
    DuplicateLabel,
    InvalidMorseRepresentation,
    NotAnAttractor,
    NotASublattice,
    NotBackwardInvariant,
    NotForwardInvariant,
    SizeLimitExceeded,
    ValidationError,
)
from .forms import LatticeForm, MeetSemilattice
from .order_core import (
    FiniteDistributiveLattice,
    FinitePoset,
    downset_lattice,
    iter_bits,
    join_irreducibles,
    lattice_from_family,
    popcount,
)

MAX_ATOMS = 2**16

AtomSubset = int


@dataclass(frozen=True)
class Relation:
    """A relation ``F ⊂ X × X``; ``forward[i]`` is the mask of ``F(x_i)``."""

    atoms: tuple
    forward: tuple

    def __post_init__(self):
        object.__setattr__(self, "atoms", tuple(self.atoms))
        object.__setattr__(self, "forward", tuple(int(m) for m in self.forward))
        n = len(self.atoms)
        if n > MAX_ATOMS:
            raise SizeLimitExceeded(f"{n} atoms exceed the limit {MAX_ATOMS}")
        if len(set(self.atoms)) != n:
            raise DuplicateLabel("atom labels must be unique")
        if len(self.forward) != n:
            raise ValidationError("one image row per atom is required")
        full = (1 << n) - 1
        if any(m & ~full for m in self.forward):
            raise ValidationError("image rows reference unknown atoms")

    @classmethod
    def from_edges(cls, atoms: Sequence, edges: Iterable) -> "Relation":
        atoms = tuple(atoms)
        idx = {a: i for i, a in enumerate(atoms)}
        rows = [0] * len(atoms)
        for s, t in edges:
            if s not in idx or t not in idx:
                raise ValidationError(f"edge ({s!r}, {t!r}) references an unknown atom")
            rows[idx[s]] |= 1 << idx[t]
        return cls(atoms, tuple(rows))

    @property
    def n(self) -> int:
        return len(self.atoms)

    @property
    def full(self) -> int:
        return (1 << len(self.atoms)) - 1

    @cached_property
    def backward(self) -> tuple:
        rows = [0] * len(self.atoms)
        for i, m in enumerate(self.forward):
            for j in iter_bits(m):
                rows[j] |= 1 << i
        return tuple(rows)

    @cached_property
    def _index(self) -> dict:
        return {a: i for i, a in enumerate(self.atoms)}

    def subset(self, labels: Iterable) -> int:
        try:
            return sum(1 << self._index[x] for x in set(labels))
        except KeyError as e:
            raise ValidationError(f"unknown atom {e.args[0]!r}") from None

    def labels(self, mask: int) -> tuple:
        return tuple(self.atoms[i] for i in iter_bits(mask))

    def edges(self) -> list:
        return [(self.atoms[i], self.atoms[j])
                for i, m in enumerate(self.forward) for j in iter_bits(m)]

    def transpose(self) -> "Relation":
        return Relation(self.atoms, self.backward)

    def image(self, mask: int) -> int:
        out = 0
        for i in iter_bits(mask):
            out |= self.forward[i]
        return out

    def preimage(self, mask: int) -> int:
        out = 0
        for i in iter_bits(mask):
            out |= self.backward[i]
        return out

    def is_reflexive(self) -> bool:
        return all((m >> i) & 1 for i, m in enumerate(self.forward))

    def is_transitive(self) -> bool:
        return all(not self.image(m) & ~m for m in self.forward)

    def forward_closure(self, mask: int) -> int:
        """Everything reachable from ``mask`` in zero or more steps."""
        seen, frontier = mask, mask
        while frontier:
            frontier = self.image(frontier) & ~seen
            seen |= frontier
        return seen

    def backward_closure(self, mask: int) -> int:
        seen, frontier = mask, mask
        while frontier:
            frontier = self.preimage(frontier) & ~seen
            seen |= frontier
        return seen

    def reachability_closure(self) -> "Relation":
        """Reflexive-transitive closure of ``F``."""
        return Relation(self.atoms, tuple(self.forward_closure(1 << i) for i in range(self.n)))

    def digraph(self) -> nx.DiGraph:
        g = nx.DiGraph()
        g.add_nodes_from(range(self.n))
        g.add_edges_from((i, j) for i, m in enumerate(self.forward) for j in iter_bits(m))
        return g

    @cached_property
    def components(self) -> tuple:
        """All strongly connected components as masks, by least atom index."""
        comps = [sum(1 << i for i in c) for c in nx.strongly_connected_components(self.digraph())]
        return tuple(sorted(comps, key=lambda m: (m & -m)))

    @cached_property
    def recurrent_components(self) -> tuple:
        """Components carrying at least one edge (cycles, including self-loops)."""
        return tuple(c for c in self.components if self.image(c) & c)


def image(F: Relation, U: int) -> int:
    return F.image(U)


def preimage(F: Relation, U: int) -> int:
    return F.preimage(U)


def omega(F: Relation, U: int) -> int:
    """Union of the eventual cycle of ``U, F(U), F²(U), ...``."""
    seen: dict = {}
    seq = []
    S = U
    while S not in seen:
        seen[S] = len(seq)
        seq.append(S)
        S = F.image(S)
    out = 0
    for T in seq[seen[S]:]:
        out |= T
    return out


def alpha(F: Relation, U: int) -> int:
    return omega(F.transpose(), U)


def inv(F: Relation, U: int) -> int:
    """Maximal ``S ⊂ U`` with ``S ⊂ F(S)`` and ``S ⊂ F⁻¹(S)``."""
    S = U
    while True:
        T = S & F.image(S) & F.preimage(S)
        if T == S:
            return S
        S = T


def is_forward_invariant(F: Relation, U: int) -> bool:
    return not F.image(U) & ~U


def is_backward_invariant(F: Relation, U: int) -> bool:
    return not F.preimage(U) & ~U


def is_attractor(F: Relation, A: int) -> bool:
    return F.image(A) == A


def is_repeller(F: Relation, R: int) -> bool:
    return F.preimage(R) == R


def is_invariant(F: Relation, S: int) -> bool:
    return not S & ~F.image(S) and not S & ~F.preimage(S)


def _component_poset(F: Relation, comps: Sequence[int]) -> FinitePoset:
    """Components ordered by ``D <= C`` when ``D`` is reachable from ``C``."""
    reach = {c: F.forward_closure(c) for c in comps}
    return FinitePoset.from_leq(comps, lambda d, c: not d & ~reach[c]).canonical()


def attractor_lattice(F: Relation) -> FiniteDistributiveLattice:
    """Att(F) via the condensation of ``F``.

    Join-irreducibles are the recurrent components; each down-set ``β`` is
    realised by ``ω`` of the forward closure of its union.
    """
    P = _component_poset(F, F.recurrent_components)
    L = downset_lattice(P)
    labels = []
    for beta in L.elements:
        U = 0
        for i in iter_bits(beta):
            U |= P.elements[i]
        A = omega(F, F.forward_closure(U))
        if not is_attractor(F, A):
            raise ValidationError("realised set is not an attractor")
        labels.append(A)
    return L.with_labels(labels)


def repeller_lattice(F: Relation) -> FiniteDistributiveLattice:
    return attractor_lattice(F.transpose())


def forward_invariant_lattice(F: Relation) -> FiniteDistributiveLattice:
    """Invset⁺(F): unions of components closed under ``F``."""
    P = _component_poset(F, F.components)
    L = downset_lattice(P)
    labels = []
    for beta in L.elements:
        U = 0
        for i in iter_bits(beta):
            U |= P.elements[i]
        labels.append(U)
    return L.with_labels(labels)


def sets_of(L: FiniteDistributiveLattice) -> dict:
    """Element mask -> realising atom subset."""
    return {a: L.label(a) for a in L.elements}


def dual_repeller(F: Relation, A: int) -> int:
    """``A* = α(X \\ A)``."""
    if not is_attractor(F, A):
        raise NotAnAttractor(f"{set(F.labels(A))} is not an attractor")
    return alpha(F, F.full & ~A)


def invset_semilattice(F: Relation) -> MeetSemilattice:
    """Invariant sets under ``S ∧ S' = Inv(S ∩ S')`` (carrier not enumerated)."""
    def meet(x, y):
        return inv(F, x & y)
    return MeetSemilattice(meet, None, 0, inv(F, F.full), None, "invset")


def conley_form_att(F: Relation, att: FiniteDistributiveLattice | None = None) -> LatticeForm:
    """``C_Att(A, A') = A ∩ A'*`` on the attractor lattice."""
    L = att if att is not None else attractor_lattice(F)
    sets = sets_of(L)
    star = {a: dual_repeller(F, sets[a]) for a in L.elements}
    return LatticeForm.from_function(L, invset_semilattice(F), lambda a, b: sets[a] & star[b])


def inv_intersection_check(F: Relation, U: int, V: int) -> bool:
    """Whether ``Inv(U ∩ V) = ω(U) ∩ α(V)`` for forward-invariant ``U``, backward-invariant ``V``."""
    if not is_forward_invariant(F, U):
        raise NotForwardInvariant(f"{set(F.labels(U))} is not forward invariant")
    if not is_backward_invariant(F, V):
        raise NotBackwardInvariant(f"{set(F.labels(V))} is not backward invariant")
    return inv(F, U & V) == omega(F, U) & alpha(F, V)


@dataclass(frozen=True)
class MorseTile:
    tile: int
    invariant: int  # Inv(tile)
    conley: int  # C_Att(ω(U), ω(U'))

    @property
    def consistent(self) -> bool:
        return self.invariant == self.conley


def morse_tiles(F: Relation, U: int, U2: int) -> MorseTile:
    """The tile ``U \\ U'`` with its maximal invariant set."""
    for W in (U, U2):
        if not is_forward_invariant(F, W):
            raise NotForwardInvariant(f"{set(F.labels(W))} is not forward invariant")
    tile = U & ~U2
    return MorseTile(tile, inv(F, tile), omega(F, U) & dual_repeller(F, omega(F, U2)))


@dataclass(frozen=True, eq=False)
class MorseRepresentation:
    """Morse sets with their partial order (labels of ``order`` are the sets).

    Construction only checks the shape; :func:`verify_morse_representation`
    decides validity, so deliberately broken candidates can be represented.
    """

    relation: Relation
    sets: tuple
    order: FinitePoset

    def __post_init__(self):
        object.__setattr__(self, "sets", tuple(self.sets))
        if tuple(self.order.elements) != self.sets:
            raise ValidationError("order must be labelled by the Morse sets, in order")
        if any(s & ~self.relation.full for s in self.sets):
            raise ValidationError("Morse set references unknown atoms")

    @classmethod
    def from_sets(cls, F: Relation, sets: Sequence[int], leq) -> "MorseRepresentation":
        sets = tuple(sets)
        return cls(F, sets, FinitePoset.from_leq(sets, leq))

    def covers(self) -> list:
        """Hasse diagram as ``(lower set, upper set)`` pairs."""
        return [(self.sets[i], self.sets[j]) for i, j in self.order.covers()]

    def same_as(self, other: "MorseRepresentation") -> bool:
        if set(self.sets) != set(other.sets):
            return False
        pos = {s: i for i, s in enumerate(other.sets)}
        return all(
            self.order.leq(i, j) == other.order.leq(pos[s], pos[t])
            for i, s in enumerate(self.sets) for j, t in enumerate(self.sets))


def _family_masks(A) -> list:
    if isinstance(A, FiniteDistributiveLattice):
        return [A.label(a) for a in A.elements]
    return list(dict.fromkeys(int(x) for x in A))


def check_attractor_sublattice(F: Relation, family: Iterable[int]) -> list:
    fam = list(dict.fromkeys(family))
    members = set(fam)
    for A in fam:
        if not is_attractor(F, A):
            raise NotASublattice(f"{set(F.labels(A))} is not an attractor")
    if 0 not in members or omega(F, F.full) not in members:
        raise NotASublattice("family must contain the empty set and ω(X)")
    for A, B in combinations(fam, 2):
        if A | B not in members or omega(F, A & B) not in members:
            raise NotASublattice("family is not closed under union and ω of intersection")
    return fam


def generate_attractor_sublattice(F: Relation, generators: Iterable[int]) -> list:
    """Smallest family of attractors containing ``generators``, ∅ and ω(X)."""
    fam = {0, omega(F, F.full)} | set(generators)
    while True:
        new = {A | B for A in fam for B in fam} | {omega(F, A & B) for A in fam for B in fam}
        if new <= fam:
            return sorted(fam, key=lambda m: (popcount(m), m))
        fam |= new


def morse_representation(F: Relation, A) -> MorseRepresentation:
    """Morse sets ``A ∩ (pred A)*`` over join-irreducibles of a sublattice."""
    fam = check_attractor_sublattice(F, _family_masks(A))
    L = lattice_from_family(fam)
    ji = join_irreducibles(L)
    sets = []
    for a, p in ji:
        sets.append(L.label(a) & dual_repeller(F, L.label(p)))
    pos = {s: L.label(a) for s, (a, _) in zip(sets, ji)}
    rep = MorseRepresentation.from_sets(F, sets, lambda s, t: not pos[s] & ~pos[t])
    ok, diag = verify_morse_representation(F, rep)
    if not ok:
        raise InvalidMorseRepresentation("; ".join(diag))
    return rep


def verify_morse_representation(F: Relation, cand: MorseRepresentation) -> tuple:
    """Check a candidate against the dynamics; returns ``(ok, diagnostics)``.

    Diagnostics are tagged ``(a)``..``(f)``:
    (a) every recurrent component lies in exactly one set;
    (b) every set is invariant;
    (c) sets are pairwise disjoint;
    (d) reachability from ``M'`` to ``M`` forces ``M < M'``;
    (e) sets are convex: a path leaving and re-entering a set stays in it;
    (f) sets are nonempty.
    """
    diag = []
    sets = cand.sets
    for C in F.recurrent_components:
        holders = [s for s in sets if not C & ~s]
        if len(holders) != 1:
            diag.append(f"(a) recurrent component {_fmt(F, C)} lies in {len(holders)} sets")
    for s in sets:
        if not is_invariant(F, s):
            diag.append(f"(b) {_fmt(F, s)} is not invariant")
        if s == 0:
            diag.append("(f) empty Morse set")
    for s, t in combinations(sets, 2):
        if s & t:
            diag.append(f"(c) {_fmt(F, s)} and {_fmt(F, t)} overlap")
    reach = [F.forward_closure(F.image(s)) for s in sets]
    for i, j in product(range(len(sets)), repeat=2):
        if i != j and reach[j] & sets[i] and not cand.order.leq(i, j):
            diag.append(f"(d) {_fmt(F, sets[j])} reaches {_fmt(F, sets[i])}"
                        " but is not above it")
    for i, s in enumerate(sets):
        back = F.backward_closure(F.preimage(s))
        hull = reach[i] & back
        if hull & ~s:
            diag.append(f"(e) {_fmt(F, s)} is not convex")
    return (not diag, diag)


def _fmt(F: Relation, mask: int) -> str:
    return "{" + ",".join(str(x) for x in F.labels(mask)) + "}"


def reconstruct_attractors(F: Relation, M: MorseRepresentation) -> FiniteDistributiveLattice:
    """Attractors ``ω(reach(∪β))`` over the down-sets ``β`` of the Morse order."""
    ok, diag = verify_morse_representation(F, M)
    if not ok:
        raise InvalidMorseRepresentation("; ".join(diag))
    masks = []
    for beta in M.order.iter_downsets():
        U = 0
        for i in iter_bits(beta):
            U |= M.sets[i]
        masks.append(omega(F, F.forward_closure(U)))
    return lattice_from_family(masks)
