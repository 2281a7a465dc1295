"""Finite posets, down-set lattices and their Boolean envelopes.

Every element of a :class:`FiniteDistributiveLattice` is stored as the bitmask
of the join-irreducibles below it, i.e. as a down-set of ``ji_poset``.  With
that encoding join and meet are ``|`` and ``&`` and the Birkhoff map is the
identity on masks, so most of the order theory reduces to integer arithmetic.

Lattices built from an arbitrary order (:func:`lattice_from_order`) are
normalised into this encoding by counting predecessors, which is the path the
round-trip checks exercise independently of :func:`downset_lattice`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import product
from typing import Callable, Iterable, Iterator, Sequence

from .errors import (
    ComputeError,
    CycleDetected,
    DuplicateLabel,
    NotAHomomorphism,
    NotAPartialOrder,
    NotDistributive,
    SizeLimitExceeded,
    ValidationError,
)

DEFAULT_ELEMENT_CAP = 2**20


def iter_bits(mask: int) -> Iterator[int]:
    """Yield the indices of the set bits of ``mask`` in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def popcount(mask: int) -> int:
    return bin(mask).count("1")


def label_key(label) -> str:
    """Sort key used for every deterministic ordering of labels."""
    if isinstance(label, (frozenset, set, tuple, list)):
        return "{" + ",".join(sorted(label_key(x) for x in label)) + "}"
    return str(label)


def set_notation(labels: Iterable) -> str:
    return "{" + ",".join(sorted(label_key(x) for x in labels)) + "}"


@dataclass(frozen=True)
class FinitePoset:
    """A finite partial order.

    ``down[i]`` is the bitmask of element indices ``j`` with ``j <= i``.
    Reflexivity, antisymmetry and transitivity are verified on construction.
    """

    elements: tuple
    down: tuple

    def __post_init__(self):
        object.__setattr__(self, "elements", tuple(self.elements))
        object.__setattr__(self, "down", tuple(int(d) for d in self.down))
        n = len(self.elements)
        if len(set(self.elements)) != n:
            seen = set()
            dup = next(x for x in self.elements if x in seen or seen.add(x))
            raise DuplicateLabel(f"duplicate element label {dup!r}")
        if len(self.down) != n:
            raise NotAPartialOrder("order rows do not match the element count")
        full = (1 << n) - 1
        for i, d in enumerate(self.down):
            if d & ~full:
                raise NotAPartialOrder(f"row {i} references unknown elements")
            if not (d >> i) & 1:
                raise NotAPartialOrder(f"order is not reflexive at {self.elements[i]!r}")
        for i, d in enumerate(self.down):
            for j in iter_bits(d & ~(1 << i)):
                if (self.down[j] >> i) & 1:
                    raise NotAPartialOrder(
                        f"order is not antisymmetric: {self.elements[i]!r}, {self.elements[j]!r}"
                    )
                if self.down[j] & ~d:
                    raise NotAPartialOrder(
                        f"order is not transitive below {self.elements[i]!r}"
                    )

    @classmethod
    def from_leq(cls, elements: Sequence, leq) -> "FinitePoset":
        """Build from a predicate ``leq(x, y)`` or a square boolean matrix."""
        elements = tuple(elements)
        n = len(elements)
        if callable(leq):
            rows = [
                sum(1 << i for i in range(n) if leq(elements[i], elements[j]))
                for j in range(n)
            ]
        else:
            rows = [sum(1 << i for i in range(n) if leq[i][j]) for j in range(n)]
        return cls(elements, tuple(rows))

    def __len__(self) -> int:
        return len(self.elements)

    @property
    def size(self) -> int:
        return len(self.elements)

    @property
    def full(self) -> int:
        return (1 << len(self.elements)) - 1

    @cached_property
    def _index(self) -> dict:
        return {x: i for i, x in enumerate(self.elements)}

    def index(self, label) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise ValidationError(f"unknown poset element {label!r}") from None

    def leq(self, i: int, j: int) -> bool:
        """Whether element index ``i`` is below element index ``j``."""
        return bool((self.down[j] >> i) & 1)

    @cached_property
    def up(self) -> tuple:
        n = len(self.elements)
        return tuple(sum(1 << j for j in range(n) if (self.down[j] >> i) & 1) for i in range(n))

    def strict_down(self, i: int) -> int:
        return self.down[i] & ~(1 << i)

    def lower_covers(self, j: int) -> list:
        below = self.strict_down(j)
        return [i for i in iter_bits(below) if not self.up[i] & below & ~(1 << i)]

    def covers(self) -> list:
        """All cover pairs ``(i, j)`` with ``i`` covered by ``j``, as indices."""
        return [(i, j) for j in range(len(self.elements)) for i in self.lower_covers(j)]

    def is_downset(self, mask: int) -> bool:
        return all(not (self.down[i] & ~mask) for i in iter_bits(mask))

    def is_upset(self, mask: int) -> bool:
        return all(not (self.up[i] & ~mask) for i in iter_bits(mask))

    def downset_of(self, mask: int) -> int:
        out = 0
        for i in iter_bits(mask):
            out |= self.down[i]
        return out

    def maximal(self, mask: int) -> int:
        return sum(1 << i for i in iter_bits(mask)
                   if not (self.up[i] & mask & ~(1 << i)))

    def minimal(self, mask: int) -> int:
        return sum(1 << i for i in iter_bits(mask)
                   if not (self.down[i] & mask & ~(1 << i)))

    def linear_extension(self) -> list:
        """Indices in a linear extension, ties broken by label order."""
        n = len(self.elements)
        placed = 0
        out = []
        while len(out) < n:
            ready = [i for i in range(n)
                     if not (placed >> i) & 1 and not (self.strict_down(i) & ~placed)]
            i = min(ready, key=lambda k: (label_key(self.elements[k]), k))
            out.append(i)
            placed |= 1 << i
        return out

    def reindex(self, order: Sequence[int]) -> "FinitePoset":
        pos = {old: new for new, old in enumerate(order)}
        rows = []
        for old in order:
            rows.append(sum(1 << pos[k] for k in iter_bits(self.down[old])))
        return FinitePoset(tuple(self.elements[k] for k in order), tuple(rows))

    def canonical(self) -> "FinitePoset":
        return self.reindex(self.linear_extension())

    def dual(self) -> "FinitePoset":
        return FinitePoset(self.elements, self.up)

    def relabel(self, labels: Sequence) -> "FinitePoset":
        return FinitePoset(tuple(labels), self.down)

    def iter_downsets(self, cap: int | None = None) -> Iterator[int]:
        """Enumerate every down-set mask (unordered).

        Elements are decided along a linear extension; an element may join the
        set only when everything strictly below it is already present, so every
        branch ends in a valid down-set.
        """
        order = self.linear_extension()
        n = len(order)
        count = 0
        stack = [(0, 0)]
        while stack:
            k, mask = stack.pop()
            if k == n:
                count += 1
                if cap is not None and count > cap:
                    raise SizeLimitExceeded(f"more than {cap} down-sets")
                yield mask
                continue
            i = order[k]
            stack.append((k + 1, mask))
            if not (self.strict_down(i) & ~mask):
                stack.append((k + 1, mask | (1 << i)))

    def downsets(self, cap: int | None = DEFAULT_ELEMENT_CAP) -> list:
        return sorted(self.iter_downsets(cap), key=_mask_key)

    def isomorphic(self, other: "FinitePoset") -> bool:
        from networkx.algorithms.isomorphism import DiGraphMatcher, categorical_node_match

        if len(self) != len(other):
            return False
        g1, g2 = self.hasse_graph(), other.hasse_graph()
        matcher = DiGraphMatcher(g1, g2, node_match=categorical_node_match("height", -1))
        return matcher.is_isomorphic()

    def hasse_graph(self):
        import networkx as nx

        g = nx.DiGraph()
        heights = self.heights()
        for i in range(len(self.elements)):
            g.add_node(i, height=heights[i])
        g.add_edges_from(self.covers())
        return g

    def heights(self) -> list:
        h = [0] * len(self.elements)
        for j in self.linear_extension():
            below = [h[i] + 1 for i in self.lower_covers(j)]
            h[j] = max(below, default=0)
        return h


def _mask_key(mask: int):
    return (popcount(mask), tuple(iter_bits(mask)))


def poset_from_cover_pairs(labels: Sequence, covers: Iterable) -> FinitePoset:
    """Reflexive-transitive closure of a cover relation.

    Raises :class:`CycleDetected` when the covers contain a directed cycle
    (including a pair ``(x, x)``), since the closure would not be antisymmetric.
    """
    labels = tuple(labels)
    if len(set(labels)) != len(labels):
        seen = set()
        dup = next(x for x in labels if x in seen or seen.add(x))
        raise DuplicateLabel(f"duplicate element label {dup!r}")
    idx = {x: i for i, x in enumerate(labels)}
    n = len(labels)
    succ = [0] * n
    for lo, hi in covers:
        if lo not in idx or hi not in idx:
            raise ValidationError(f"cover ({lo!r}, {hi!r}) references an unknown label")
        if lo == hi:
            raise CycleDetected(f"cover ({lo!r}, {hi!r}) is a loop")
        succ[idx[lo]] |= 1 << idx[hi]
    # up[i]: everything reachable from i including i
    up = [0] * n
    for i in range(n):
        seen, frontier = 1 << i, succ[i]
        while frontier:
            if (frontier >> i) & 1:
                raise CycleDetected(f"covers contain a cycle through {labels[i]!r}")
            new = frontier & ~seen
            seen |= new
            nxt = 0
            for k in iter_bits(new):
                nxt |= succ[k]
            frontier = nxt
        up[i] = seen
    down = [sum(1 << i for i in range(n) if (up[i] >> j) & 1) for j in range(n)]
    return FinitePoset(labels, tuple(down)).canonical()


@dataclass(frozen=True, eq=False)
class FiniteDistributiveLattice:
    """A finite distributive lattice in Birkhoff normal form.

    ``elements`` are exactly the down-sets of ``ji_poset`` as bitmasks, sorted
    by size and then by member indices. ``labels`` optionally carries a user
    name per element (same order as ``elements``).
    """

    ji_poset: FinitePoset
    elements: tuple
    labels: tuple | None = None

    def __post_init__(self):
        object.__setattr__(self, "elements", tuple(self.elements))
        P = self.ji_poset
        if len(set(self.elements)) != len(self.elements):
            raise ValidationError("duplicate lattice elements")
        for m in self.elements:
            if not P.is_downset(m):
                raise ValidationError(f"element mask {m:#b} is not a down-set of J(L)")
        expected = sum(1 for _ in P.iter_downsets(cap=len(self.elements) + 1))
        if expected != len(self.elements):
            raise ValidationError("elements are not all the down-sets of J(L)")
        if self.labels is not None:
            labels = tuple(self.labels)
            object.__setattr__(self, "labels", labels)
            if len(labels) != len(self.elements):
                raise ValidationError("one label per element is required")
            if len(set(labels)) != len(labels):
                raise DuplicateLabel("lattice labels must be unique")

    def __len__(self) -> int:
        return len(self.elements)

    @property
    def size(self) -> int:
        return len(self.elements)

    @property
    def bottom(self) -> int:
        return 0

    @property
    def top(self) -> int:
        return self.ji_poset.full

    @staticmethod
    def join(a: int, b: int) -> int:
        return a | b

    @staticmethod
    def meet(a: int, b: int) -> int:
        return a & b

    @staticmethod
    def leq(a: int, b: int) -> bool:
        return not (a & ~b)

    @cached_property
    def _index(self) -> dict:
        return {m: i for i, m in enumerate(self.elements)}

    @cached_property
    def _by_label(self) -> dict:
        return {lab: m for lab, m in zip(self.labels or (), self.elements)}

    def index(self, a: int) -> int:
        try:
            return self._index[a]
        except KeyError:
            raise ValidationError(f"{a:#b} is not an element of the lattice") from None

    def __contains__(self, a) -> bool:
        return a in self._index

    def label(self, a: int):
        if self.labels is None:
            return set_notation(self.ji_poset.elements[i] for i in iter_bits(a))
        return self.labels[self.index(a)]

    def element(self, label) -> int:
        """Element mask carrying ``label`` (or given in set notation)."""
        if label in self._by_label:
            return self._by_label[label]
        for m in self.elements:
            if self.label(m) == label:
                return m
        raise ValidationError(f"no lattice element labelled {label!r}")

    def principal(self, p: int) -> int:
        """Join-irreducible element corresponding to ji_poset index ``p``."""
        return self.ji_poset.down[p]

    def pred(self, a: int) -> int:
        """Unique predecessor of a join-irreducible element."""
        tops = self.ji_poset.maximal(a)
        if popcount(tops) != 1:
            raise ValidationError("pred is only defined for join-irreducible elements")
        return a & ~tops

    def is_join_irreducible(self, a: int) -> bool:
        return a != 0 and popcount(self.ji_poset.maximal(a)) == 1

    def covers(self) -> list:
        """Hasse diagram of the lattice as pairs of element masks."""
        out = []
        for a in self.elements:
            for p in iter_bits(self.ji_poset.minimal(self.top & ~a)):
                b = a | (1 << p)
                if self.ji_poset.is_downset(b):
                    out.append((a, b))
        return out

    def with_labels(self, labels: Sequence) -> "FiniteDistributiveLattice":
        return FiniteDistributiveLattice(self.ji_poset, self.elements, tuple(labels))

    def order_poset(self) -> FinitePoset:
        """The lattice itself as a poset, labelled by element labels."""
        labs = [self.label(a) for a in self.elements]
        return FinitePoset.from_leq(
            range(len(self.elements)),
            lambda i, j: self.leq(self.elements[i], self.elements[j]),
        ).relabel(labs)


def lattice_from_masks(P: FinitePoset, masks: Iterable[int], labels=None) -> FiniteDistributiveLattice:
    """Lattice on the given down-set masks of ``P``, put into canonical order."""
    masks = list(masks)
    if labels is None:
        return FiniteDistributiveLattice(P, tuple(sorted(masks, key=_mask_key)))
    pairs = sorted(zip(masks, labels), key=lambda t: _mask_key(t[0]))
    return FiniteDistributiveLattice(P, tuple(m for m, _ in pairs), tuple(l for _, l in pairs))


def downset_lattice(P: FinitePoset, cap: int = DEFAULT_ELEMENT_CAP) -> FiniteDistributiveLattice:
    """The lattice O(P) of down-sets of ``P`` under union and intersection."""
    return lattice_from_masks(P, P.iter_downsets(cap))


def lattice_from_order(labels: Sequence, leq: Callable, cap: int = DEFAULT_ELEMENT_CAP
                       ) -> FiniteDistributiveLattice:
    """Normalise a finite distributive lattice given only by its order.

    Join-irreducibles are found by counting lower covers; each element is then
    replaced by the set of join-irreducibles below it.  Raises
    :class:`NotDistributive` if that map is not an order isomorphism onto the
    down-sets of J(L) (which also rejects orders that are not lattices).
    """
    labels = tuple(labels)
    n = len(labels)
    if n > cap:
        raise SizeLimitExceeded(f"{n} elements exceed the cap {cap}")
    order = FinitePoset.from_leq(labels, leq)
    ji = [j for j in range(n) if len(order.lower_covers(j)) == 1]
    jpos = {j: k for k, j in enumerate(ji)}
    J = FinitePoset(
        tuple(labels[j] for j in ji),
        tuple(sum(1 << jpos[i] for i in iter_bits(order.down[j]) if i in jpos) for j in ji),
    )
    masks = [sum(1 << jpos[i] for i in iter_bits(order.down[a]) if i in jpos) for a in range(n)]
    if len(set(masks)) != n:
        raise NotDistributive("distinct elements share their join-irreducibles")
    for a in range(n):
        for b in range(n):
            if order.leq(a, b) != (not masks[a] & ~masks[b]):
                raise NotDistributive("order is not determined by join-irreducibles")
    try:
        n_down = sum(1 for _ in J.iter_downsets(cap=n))
    except SizeLimitExceeded:
        n_down = n + 1
    if n_down != n or not all(J.is_downset(m) for m in masks):
        raise NotDistributive("elements do not exhaust the down-sets of J(L)")
    canon = J.linear_extension()
    pos = {old: new for new, old in enumerate(canon)}
    J = J.reindex(canon)
    masks = [sum(1 << pos[i] for i in iter_bits(m)) for m in masks]
    return lattice_from_masks(J, masks, labels)


def lattice_from_family(family: Iterable) -> FiniteDistributiveLattice:
    """Lattice of a family of sets ordered by inclusion.

    Members may be ``frozenset`` objects or integer bitmasks; they become the
    element labels.
    """
    family = list(dict.fromkeys(family))
    if family and isinstance(family[0], int):
        def sub(x, y):
            return not x & ~y
    else:
        def sub(x, y):
            return x <= y
    return lattice_from_order(family, sub)


def join_irreducibles(L: FiniteDistributiveLattice) -> list:
    """Every nonzero element with a unique immediate predecessor.

    Found by counting lower covers over the element list, without using the
    down-set encoding, and returned as ``(element, pred)`` in element order.
    """
    elems = L.elements
    n = len(elems)
    # below[i]: indices strictly below element i; above likewise
    below = [0] * n
    above = [0] * n
    for i, a in enumerate(elems):
        for k, b in enumerate(elems):
            if k != i and L.leq(b, a):
                below[i] |= 1 << k
                above[k] |= 1 << i
    out = []
    for i, a in enumerate(elems):
        if a == 0:
            continue
        preds = [k for k in iter_bits(below[i]) if not above[k] & below[i]]
        if len(preds) == 1:
            out.append((a, elems[preds[0]]))
    return out


def ji_poset_of(L: FiniteDistributiveLattice) -> FinitePoset:
    """Poset of join-irreducibles of ``L`` recovered from :func:`join_irreducibles`."""
    ji = [a for a, _ in join_irreducibles(L)]
    return FinitePoset.from_leq(ji, L.leq).relabel([L.label(a) for a in ji])


def birkhoff_embed(L: FiniteDistributiveLattice, a: int) -> int:
    """Bitmask over ``L.ji_poset`` of the join-irreducibles below ``a``."""
    L.index(a)
    return sum(1 << p for p in range(len(L.ji_poset)) if L.leq(L.principal(p), a))


def irredundant_join_rep(L: FiniteDistributiveLattice, a: int) -> list:
    """Maximal join-irreducibles below ``a``; their join is ``a``."""
    below = birkhoff_embed(L, a)
    return [L.principal(p) for p in iter_bits(L.ji_poset.maximal(below))]


@dataclass(frozen=True)
class BooleanAlgebraOnAtoms:
    """The powerset of ``atoms``; elements are bitmasks."""

    atoms: tuple

    def __post_init__(self):
        object.__setattr__(self, "atoms", tuple(self.atoms))

    @property
    def full(self) -> int:
        return (1 << len(self.atoms)) - 1

    @property
    def size(self) -> int:
        return 1 << len(self.atoms)

    def elements(self) -> range:
        return range(self.size)

    @staticmethod
    def union(a: int, b: int) -> int:
        return a | b

    @staticmethod
    def intersection(a: int, b: int) -> int:
        return a & b

    def complement(self, a: int) -> int:
        return self.full & ~a

    @staticmethod
    def difference(a: int, b: int) -> int:
        return a & ~b

    def check_axioms(self) -> bool:
        """Exhaustive Boolean-algebra identities over all element triples."""
        els = self.elements()
        c = self.complement
        for a in els:
            if a | c(a) != self.full or a & c(a) != 0 or c(c(a)) != a:
                return False
            for b in els:
                if c(a | b) != c(a) & c(b) or c(a & b) != c(a) | c(b):
                    return False
                for d in els:
                    if a & (b | d) != (a & b) | (a & d) or a | (b & d) != (a | b) & (a | d):
                        return False
        return True


@dataclass(frozen=True)
class Booleanization:
    algebra: BooleanAlgebraOnAtoms
    lattice: FiniteDistributiveLattice

    def j(self, a: int) -> int:
        return birkhoff_embed(self.lattice, a)

    def image(self) -> list:
        return [self.j(a) for a in self.lattice.elements]


def booleanize(L: FiniteDistributiveLattice) -> Booleanization:
    """B(L) = Set(J(L)) together with the embedding ``j``."""
    return Booleanization(BooleanAlgebraOnAtoms(L.ji_poset.elements), L)


@dataclass(frozen=True)
class ConvexPiece:
    """An order-convex subset ``j(a) \\ j(b)`` of J(L)."""

    mask: int
    lattice: FiniteDistributiveLattice = field(compare=False, repr=False)

    def __post_init__(self):
        P = self.lattice.ji_poset
        for x in iter_bits(self.mask):
            for z in iter_bits(self.mask):
                if P.leq(x, z) and (P.up[x] & P.down[z] & ~self.mask):
                    raise ValidationError("piece is not order-convex")

    def meet(self, other: "ConvexPiece") -> "ConvexPiece":
        return ConvexPiece(self.mask & other.mask, self.lattice)

    def labels(self) -> tuple:
        return tuple(self.lattice.ji_poset.elements[i] for i in iter_bits(self.mask))


def convex_semilattice(L: FiniteDistributiveLattice) -> list:
    """All pieces ``j(a) \\ j(b)``, sorted by size then members."""
    masks = {a & ~b for a in L.elements for b in L.elements}
    return [ConvexPiece(m, L) for m in sorted(masks, key=_mask_key)]


@dataclass(frozen=True, eq=False)
class LatticeHom:
    """A bounded lattice homomorphism (or anti-homomorphism when ``anti``).

    ``table`` maps source element masks to target element masks.  All
    preservation laws are checked exhaustively on construction.
    """

    source: FiniteDistributiveLattice
    target: FiniteDistributiveLattice
    table: dict
    anti: bool = False

    def __post_init__(self):
        S, T, h = self.source, self.target, self.table
        for a in S.elements:
            if a not in h:
                raise NotAHomomorphism(f"no image for element {S.label(a)!r}")
            if h[a] not in T:
                raise NotAHomomorphism(f"image of {S.label(a)!r} is not in the target")
        lo, hi = (T.top, T.bottom) if self.anti else (T.bottom, T.top)
        if h[S.bottom] != lo or h[S.top] != hi:
            raise NotAHomomorphism("bounds are not preserved")
        for a, b in product(S.elements, repeat=2):
            j, m = h[a | b], h[a & b]
            if self.anti:
                ok = j == h[a] & h[b] and m == h[a] | h[b]
            else:
                ok = j == h[a] | h[b] and m == h[a] & h[b]
            if not ok:
                raise NotAHomomorphism(
                    f"operations not preserved at ({S.label(a)!r}, {S.label(b)!r})")

    def __call__(self, a: int) -> int:
        return self.table[a]

    @classmethod
    def from_function(cls, source, target, fn, anti: bool = False) -> "LatticeHom":
        return cls(source, target, {a: fn(a) for a in source.elements}, anti)

    @classmethod
    def identity(cls, L: FiniteDistributiveLattice) -> "LatticeHom":
        return cls(L, L, {a: a for a in L.elements})

    @property
    def is_injective(self) -> bool:
        return len(set(self.table.values())) == len(self.table)

    @property
    def is_surjective(self) -> bool:
        return set(self.table.values()) == set(self.target.elements)

    @property
    def is_isomorphism(self) -> bool:
        return self.is_injective and self.is_surjective


@dataclass(frozen=True)
class BooleanHom:
    """Boolean map Set(A) -> Set(B) given by ``atom_source[b]`` in A for each b."""

    source: BooleanAlgebraOnAtoms
    target: BooleanAlgebraOnAtoms
    atom_source: tuple

    def __call__(self, s: int) -> int:
        return sum(1 << b for b, a in enumerate(self.atom_source) if (s >> a) & 1)


def booleanize_hom(h: LatticeHom) -> BooleanHom:
    """The unique Boolean map ``B(h)`` with ``B(h)(j(a)) = j(h(a))``.

    For each join-irreducible ``q`` of the target, ``{k : q <= h(k)}`` is a
    prime filter of the source whose least element is join-irreducible; that
    element is the atom that ``B(h)`` sends onto ``q``.
    """
    if h.anti:
        raise ValidationError("Booleanization is defined for homomorphisms only")
    K, L = h.source, h.target
    atom_source = []
    for q in range(len(L.ji_poset)):
        pq = L.principal(q)
        filt = [k for k in K.elements if L.leq(pq, h(k))]
        least = K.top
        for k in filt:
            least &= k
        tops = K.ji_poset.maximal(least)
        if least not in filt or popcount(tops) != 1 or K.principal(tops.bit_length() - 1) != least:
            raise ComputeError("preimage filter is not principal at a join-irreducible")
        atom_source.append(tops.bit_length() - 1)
    bh = BooleanHom(booleanize(K).algebra, booleanize(L).algebra, tuple(atom_source))
    for k in K.elements:
        if bh(birkhoff_embed(K, k)) != birkhoff_embed(L, h(k)):
            raise ComputeError("B(h) does not commute with j")
    return bh


def dual_lattice(L: FiniteDistributiveLattice, labels: Sequence | None = None):
    """The order dual of ``L`` as a down-set lattice of J(L)^op.

    Returns ``(L_op, flip)`` where ``flip`` maps an element of ``L`` to the
    element of ``L_op`` it becomes (complement of its mask).
    """
    P = L.ji_poset
    P_op = P.dual()
    flip = {a: P.full & ~a for a in L.elements}
    masks = [flip[a] for a in L.elements]
    labs = None if labels is None else list(labels)
    return lattice_from_masks(P_op, masks, labs), flip
