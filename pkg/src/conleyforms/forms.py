"""Lattice forms, the canonical Conley form and the maps they induce.

A form is stored as a full table over ``L x L`` keyed by element masks.  Values
live in a :class:`MeetSemilattice`, which is described by a meet callable so
that targets such as the invariant sets of a relation (meet = ``Inv`` of the
intersection) need not be enumerated.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Callable, Hashable, Sequence

import numpy as np

from .errors import (
    AdditivityNotApplicable,
    AxiomsViolated,
    NotInjective,
    NotWellDefined,
    ThetaIllDefined,
    ValidationError,
)
from .order_core import (
    FiniteDistributiveLattice,
    FinitePoset,
    LatticeHom,
    birkhoff_embed,
    dual_lattice,
    join_irreducibles,
)

EXHAUSTIVE_LIMIT = 64
RANDOM_SAMPLES = 200_000
TABLE_CHECK_LIMIT = 256


@dataclass(frozen=True, eq=False)
class MeetSemilattice:
    """A meet semilattice given by its meet operation.

    ``elements`` may be ``None`` when the carrier is implicit (for example all
    subsets of a large atom set); membership is then not enumerated.
    """

    meet: Callable
    elements: tuple | None = None
    bottom: Hashable = None
    top: Hashable = None
    join: Callable | None = None
    name: str = ""

    def __post_init__(self):
        if self.elements is not None:
            object.__setattr__(self, "elements", tuple(self.elements))
            if len(self.elements) <= TABLE_CHECK_LIMIT:
                self.validate()

    def validate(self) -> None:
        """Exhaustive associativity, commutativity and idempotence check."""
        els = self.elements
        m = self.meet
        members = set(els)
        for x in els:
            if m(x, x) != x:
                raise ValidationError(f"meet is not idempotent at {x!r}")
            for y in els:
                xy = m(x, y)
                if xy not in members:
                    raise ValidationError("meet leaves the carrier")
                if xy != m(y, x):
                    raise ValidationError(f"meet is not commutative at {x!r}, {y!r}")
        for x, y, z in product(els, repeat=3):
            if m(m(x, y), z) != m(x, m(y, z)):
                raise ValidationError("meet is not associative")

    def leq(self, x, y) -> bool:
        return self.meet(x, y) == x

    @classmethod
    def from_table(cls, elements: Sequence, table: dict, bottom=None, top=None,
                   name: str = "table") -> "MeetSemilattice":
        """Semilattice from an explicit ``{(x, y): x ∧ y}`` table."""
        elements = tuple(elements)
        full = dict(table)
        for (x, y), v in table.items():
            full.setdefault((y, x), v)
        for x in elements:
            full.setdefault((x, x), x)
        missing = [(x, y) for x in elements for y in elements if (x, y) not in full]
        if missing:
            raise ValidationError(f"meet table has no entry for {missing[0]!r}")

        def meet(x, y):
            return full[(x, y)]

        return cls(meet, elements, bottom, top, None, name)

    @classmethod
    def powerset(cls, n_atoms: int, name: str = "sets") -> "MeetSemilattice":
        full = (1 << n_atoms) - 1
        return cls(_and, None, 0, full, _or, name)


def _and(x: int, y: int) -> int:
    return x & y


def _or(x: int, y: int) -> int:
    return x | y


def convexity_semilattice(L: FiniteDistributiveLattice) -> MeetSemilattice:
    """The convex pieces of J(L) under intersection."""
    pieces = sorted({a & ~b for a in L.elements for b in L.elements})
    return MeetSemilattice(_and, tuple(pieces), 0, L.top, None, "convex")


@dataclass(frozen=True, eq=False)
class LatticeForm:
    """A map ``L x L -> I`` satisfying absorption.

    ``table`` is keyed by pairs of element masks of ``source``.  ``embed``
    optionally places the source lattice inside the target (needed for the
    additivity law).  Pass ``enforce_absorption=False`` to build forms that
    are only used to exercise the failure paths.
    """

    source: FiniteDistributiveLattice
    target: MeetSemilattice
    table: dict
    embed: Callable | None = None
    enforce_absorption: bool = field(default=True, repr=False)

    def __post_init__(self):
        L = self.source
        for a, b in product(L.elements, repeat=2):
            if (a, b) not in self.table:
                raise ValidationError(f"form has no value at ({L.label(a)!r}, {L.label(b)!r})")
        if self.enforce_absorption:
            bad = _absorption_witness(self)
            if bad is not None:
                raise AxiomsViolated(
                    f"absorption fails at ({L.label(bad[0])!r}, {L.label(bad[1])!r})")

    def __call__(self, a: int, b: int):
        return self.table[(a, b)]

    @classmethod
    def from_function(cls, L, target, fn, embed=None, enforce_absorption=True) -> "LatticeForm":
        table = {(a, b): fn(a, b) for a in L.elements for b in L.elements}
        return cls(L, target, table, embed, enforce_absorption)

    @property
    def zero(self):
        """Neutral bottom of the image, ``f(0, 1)``."""
        return self.table[(self.source.bottom, self.source.top)]

    @property
    def one(self):
        """Neutral top of the image, ``f(1, 0)``."""
        return self.table[(self.source.top, self.source.bottom)]

    def image(self) -> list:
        seen = {}
        for a, b in product(self.source.elements, repeat=2):
            seen.setdefault(self.table[(a, b)], None)
        return list(seen)


def _absorption_witness(f: LatticeForm):
    t = f.table
    for a, b in product(f.source.elements, repeat=2):
        if t[(a | b, a)] != t[(b, a)] or t[(a, a & b)] != t[(a, b)]:
            return (a, b)
    return None


def canonical_conley_form(L: FiniteDistributiveLattice) -> LatticeForm:
    """``C(a, b) = j(a) \\ j(b)`` with values in the convex pieces of J(L)."""
    j = {a: birkhoff_embed(L, a) for a in L.elements}
    return LatticeForm.from_function(L, convexity_semilattice(L), lambda a, b: j[a] & ~j[b])


def set_difference_form(L: FiniteDistributiveLattice, sets: Callable, n_atoms: int) -> LatticeForm:
    """Set difference on a lattice realised by subsets of ``n_atoms`` atoms.

    ``sets(a)`` returns the atom mask realising element ``a``; it must be a
    lattice embedding for the result to be a Conley form.
    """
    return LatticeForm.from_function(
        L, MeetSemilattice.powerset(n_atoms), lambda a, b: sets(a) & ~sets(b), embed=sets)


def constant_form(L: FiniteDistributiveLattice, value=0) -> LatticeForm:
    target = MeetSemilattice(lambda x, y: x, (value,), value, value, None, "point")
    return LatticeForm.from_function(L, target, lambda a, b: value)


@dataclass(frozen=True)
class FormAxioms:
    absorption: bool
    distributivity: bool
    monotonicity: bool
    exchange: bool
    additivity: bool | None
    exhaustive: bool = True
    witnesses: dict = field(default_factory=dict, compare=False)

    @property
    def conley(self) -> bool:
        return self.absorption and self.distributivity and self.monotonicity

    def as_dict(self) -> dict:
        return {
            "absorption": self.absorption,
            "distributivity": self.distributivity,
            "monotonicity": self.monotonicity,
            "exchange": self.exchange,
            "additivity": self.additivity,
            "exhaustive": self.exhaustive,
        }


class _Tables:
    """Index tables for vectorised quantifier checks over a form."""

    def __init__(self, f: LatticeForm):
        L = f.source
        self.form = f
        self.els = L.elements
        n = self.n = len(self.els)
        idx = {m: i for i, m in enumerate(self.els)}
        self.J = np.array([[idx[a | b] for b in self.els] for a in self.els], dtype=np.int64)
        self.M = np.array([[idx[a & b] for b in self.els] for a in self.els], dtype=np.int64)
        self.LEQ = np.array([[not a & ~b for b in self.els] for a in self.els], dtype=bool)
        self.values: list = []
        self.vid: dict = {}
        V = np.empty((n, n), dtype=np.int64)
        for i, a in enumerate(self.els):
            for k, b in enumerate(self.els):
                V[i, k] = self._id(f.table[(a, b)])
        self.V = V
        self.k = len(self.values)
        self._meet_cache: dict = {}
        self._mv = None

    def _id(self, v) -> int:
        i = self.vid.get(v)
        if i is None:
            i = self.vid[v] = len(self.values)
            self.values.append(v)
        return i

    def meet_id(self, x: int, y: int) -> int:
        key = (x, y) if x <= y else (y, x)
        r = self._meet_cache.get(key)
        if r is None:
            r = self._meet_cache[key] = self._id(
                self.form.target.meet(self.values[x], self.values[y]))
        return r

    @property
    def MV(self) -> np.ndarray:
        """Meet table over the image values (ids may point past the image)."""
        if self._mv is None:
            k = self.k
            mv = np.empty((k, k), dtype=np.int64)
            for x in range(k):
                for y in range(x, k):
                    mv[x, y] = mv[y, x] = self.meet_id(x, y)
            self._mv = mv
        return self._mv

    @property
    def VLEQ(self) -> np.ndarray:
        return self.MV == np.arange(self.k)[:, None]


def _first(mask: np.ndarray):
    hit = np.argwhere(mask)
    return tuple(int(x) for x in hit[0]) if len(hit) else None


def check_form_axioms(f: LatticeForm, *, exhaustive_limit: int = EXHAUSTIVE_LIMIT,
                      samples: int = RANDOM_SAMPLES, seed: int = 0) -> FormAxioms:
    """Evaluate every form axiom independently.

    Two-variable laws are always exhaustive.  The four-variable laws are
    exhaustive up to ``exhaustive_limit`` elements and sampled beyond that.
    """
    T = _Tables(f)
    n, V, J, M, LEQ = T.n, T.V, T.J, T.M, T.LEQ
    wit: dict = {}
    ar = np.arange(n)

    bad = (V[J, ar[:, None]] != V.T) | (V[ar[:, None], M] != V)
    absorption = not bad.any()
    if not absorption:
        wit["absorption"] = _first(bad)

    zero = V[0, n - 1]
    bad = (V == zero) & ~LEQ
    monotonicity = not bad.any()
    if not monotonicity:
        wit["monotonicity"] = _first(bad)

    exhaustive = n <= exhaustive_limit
    distributivity = exchange = True
    if exhaustive:
        MV = T.MV
        for a in range(n):
            # axes: (b, c, d)
            lhs = V[M[a][None, :, None], J[:, None, :]]
            rhs = MV[V[a][:, None, None], V[None, :, :]]
            swapped = MV[V[a][None, None, :], V.T[:, :, None]]
            if distributivity:
                bad = lhs != rhs
                if bad.any():
                    distributivity = False
                    b, c, d = _first(bad)
                    wit["distributivity"] = (a, b, c, d)
            if exchange:
                bad = rhs != swapped
                if bad.any():
                    exchange = False
                    b, c, d = _first(bad)
                    wit["exchange"] = (a, b, c, d)
            if not distributivity and not exchange:
                break
    else:
        rng = np.random.default_rng(seed)
        quads = rng.integers(0, n, size=(samples, 4))
        for a, b, c, d in quads.tolist():
            ab, cd = int(V[a, b]), int(V[c, d])
            m = T.meet_id(ab, cd)
            if distributivity and int(V[M[a, c], J[b, d]]) != m:
                distributivity = False
                wit["distributivity"] = (a, b, c, d)
            if exchange and T.meet_id(int(V[a, d]), int(V[c, b])) != m:
                exchange = False
                wit["exchange"] = (a, b, c, d)
            if not distributivity and not exchange:
                break

    additivity = None
    if f.embed is not None and f.target.join is not None:
        additivity = _additivity_witness(f) is None
        if not additivity:
            wit["additivity"] = _additivity_witness(f)
    return FormAxioms(absorption, distributivity, monotonicity, exchange, additivity,
                      exhaustive, wit)


def _additivity_witness(f: LatticeForm):
    join, emb = f.target.join, f.embed
    for a, b in product(f.source.elements, repeat=2):
        if not b & ~a and join(f.table[(a, b)], emb(b)) != emb(a):
            return (a, b)
    return None


def check_additivity(f: LatticeForm) -> bool:
    """``f(a, b) ∨ b = a`` for all ``b <= a``; needs a join and an embedding."""
    if f.target.join is None or f.embed is None:
        raise AdditivityNotApplicable("target has no join containing the source lattice")
    return _additivity_witness(f) is None


@dataclass(frozen=True)
class ExtraProperties:
    slot_monotone: bool
    bounded: bool
    diagonal: bool
    zero_iff_below: bool

    def all(self) -> bool:
        return self.slot_monotone and self.bounded and self.diagonal and self.zero_iff_below


def check_extra_properties(f: LatticeForm) -> ExtraProperties:
    """Consequences of the axioms, each quantified over all pairs.

    * increasing in the first slot and decreasing in the second;
    * ``f(0,1) <= f(a,b) <= f(1,0)``;
    * ``f(0,a) = f(a,1) = f(0,1)``;
    * ``f(a,b) = f(0,1)`` exactly when ``a <= b``.
    """
    T = _Tables(f)
    n, V, LEQ = T.n, T.V, T.LEQ
    VLEQ = T.VLEQ
    slot = True
    for a in range(n):
        up = LEQ[a]  # a <= a'
        # f(a,b) <= f(a',b) for all b, all a' >= a
        first = VLEQ[V[a][None, :], V[up]]
        # f(b', a') ... second slot: b <= b' implies f(x, b') <= f(x, b)
        second = VLEQ[V[:, up].T, V[:, a][None, :]]
        if not (first.all() and second.all()):
            slot = False
            break
    zero, one = V[0, n - 1], V[n - 1, 0]
    bounded = bool(VLEQ[zero, V].all() and VLEQ[V, one].all())
    diagonal = bool((V[0, :] == zero).all() and (V[:, n - 1] == zero).all())
    zero_iff = bool(((V == zero) == LEQ).all())
    return ExtraProperties(slot, bounded, diagonal, zero_iff)


def _require_conley(f: LatticeForm, what: str) -> FormAxioms:
    ax = check_form_axioms(f)
    if not ax.conley:
        raise AxiomsViolated(f"{what} needs an absorptive, distributive, monotone form")
    return ax


@dataclass(frozen=True, eq=False)
class SemilatticeInjection:
    """The map ``A \\ B -> f(a, b)`` on convex pieces of J(L)."""

    lattice: FiniteDistributiveLattice
    target: MeetSemilattice
    table: dict
    representatives: dict
    verified: bool

    def __call__(self, piece: int):
        return self.table[piece]

    def inverse(self) -> dict:
        return {v: p for p, v in self.table.items()}


def gamma_from_form(f: LatticeForm) -> SemilatticeInjection:
    """Tabulate ``γ(j(a) \\ j(b)) = f(a, b)``.

    The lexicographically least ``(a, b)`` (by element order) represents each
    piece; every other representative must agree.  For distributive forms the
    result is additionally checked to be injective and meet-preserving.
    """
    L = f.source
    j = {a: birkhoff_embed(L, a) for a in L.elements}
    table: dict = {}
    reps: dict = {}
    for a, b in product(L.elements, repeat=2):
        piece = j[a] & ~j[b]
        v = f.table[(a, b)]
        if piece not in table:
            table[piece] = v
            reps[piece] = (a, b)
        elif table[piece] != v:
            ra, rb = reps[piece]
            raise NotWellDefined(
                f"pairs ({L.label(ra)!r}, {L.label(rb)!r}) and ({L.label(a)!r}, {L.label(b)!r})"
                " share a piece but not a value")
    ax = check_form_axioms(f)
    verified = False
    if ax.distributivity:
        if len(set(table.values())) != len(table):
            raise NotInjective("distinct convex pieces share a form value")
        meet = f.target.meet
        for p, q in product(table, repeat=2):
            if table[p & q] != meet(table[p], table[q]):
                raise NotInjective("γ does not preserve meets")
        verified = True
    return SemilatticeInjection(L, f.target, table, reps, verified)


@dataclass(frozen=True, eq=False)
class TransitionMap:
    """Meet isomorphism ``g`` between the images of two Conley forms."""

    table: dict

    def __call__(self, v):
        return self.table[v]


def transition_iso(f: LatticeForm, f2: LatticeForm) -> TransitionMap:
    """``g = γ' ∘ γ⁻¹`` with ``f2 = g ∘ f`` verified on every pair."""
    if f.source is not f2.source and (
            f.source.elements != f2.source.elements
            or f.source.ji_poset.down != f2.source.ji_poset.down):
        raise ValidationError("forms live on different lattices")
    _require_conley(f, "transition_iso")
    _require_conley(f2, "transition_iso")
    g1, g2 = gamma_from_form(f), gamma_from_form(f2)
    g = {g1.table[p]: g2.table[p] for p in g1.table}
    if len(set(g.values())) != len(g):
        raise AxiomsViolated("transition map is not injective")
    for a, b in product(f.source.elements, repeat=2):
        if g[f.table[(a, b)]] != f2.table[(a, b)]:
            raise AxiomsViolated("f' differs from g∘f")
    m1, m2 = f.target.meet, f2.target.meet
    for x, y in product(g, repeat=2):
        if g[m1(x, y)] != m2(g[x], g[y]):
            raise AxiomsViolated("transition map does not preserve meets")
    return TransitionMap(g)


def induced_theta(h: LatticeHom, fK: LatticeForm, fL: LatticeForm) -> dict:
    """``θ(fK(a, b)) = fL(h a, h b)`` as a value table.

    ``fK`` must be a Conley form on the source of ``h``.  When ``fL`` is
    distributive, θ is also checked to preserve meets and both neutral
    elements.
    """
    if h.anti:
        raise ValidationError("θ is induced by homomorphisms, not anti-homomorphisms")
    _require_conley(fK, "induced_theta")
    K = h.source
    theta: dict = {}
    for a, b in product(K.elements, repeat=2):
        v, w = fK.table[(a, b)], fL.table[(h(a), h(b))]
        if theta.setdefault(v, w) != w:
            raise ThetaIllDefined(f"θ takes two values on {v!r}")
    if check_form_axioms(fL).distributivity:
        mK, mL = fK.target.meet, fL.target.meet
        for x, y in product(theta, repeat=2):
            if theta[mK(x, y)] != mL(theta[x], theta[y]):
                raise ThetaIllDefined("θ does not preserve meets")
        if theta[fK.zero] != fL.zero or theta[fK.one] != fL.one:
            raise ThetaIllDefined("θ does not preserve the neutral elements")
    return theta


def pullback_form(h: LatticeHom, f: LatticeForm) -> LatticeForm:
    """``(h•f)(a, b) = f(h a, h b)``, or ``f(h b, h a)`` for anti-homomorphisms.

    Any (anti-)homomorphism preserves absorption, so the result is always a
    form; the remaining axioms are left to :func:`check_form_axioms`.
    """
    if h.target.elements != f.source.elements:
        raise ValidationError("form does not live on the target of h")
    if h.anti:
        def fn(a, b):
            return f.table[(h(b), h(a))]
    else:
        def fn(a, b):
            return f.table[(h(a), h(b))]
    return LatticeForm.from_function(h.source, f.target, fn)


@dataclass(frozen=True, eq=False)
class Dualization:
    embedding: dict  # a -> f(a, 0)
    star: dict  # a -> f(1, a)
    dual: FiniteDistributiveLattice  # order-reversed copy labelled by a*
    flip: dict  # a -> element of ``dual``


def dualize(f: LatticeForm) -> Dualization:
    """Split ``f(a, b) = f(a, 0) ∧ a*`` with ``a* = f(1, b)``."""
    _require_conley(f, "dualize")
    L = f.source
    zero, top = L.bottom, L.top
    emb = {a: f.table[(a, zero)] for a in L.elements}
    star = {a: f.table[(top, a)] for a in L.elements}
    meet = f.target.meet
    for a, b in product(L.elements, repeat=2):
        if f.table[(a, b)] != meet(emb[a], star[b]):
            raise AxiomsViolated("f(a, b) differs from f(a, 0) ∧ f(1, b)")
    if len(set(star.values())) != len(star):
        raise AxiomsViolated("a ↦ a* is not injective")
    dual, flip = dual_lattice(L, [star[a] for a in L.elements])
    return Dualization(emb, star, dual, flip)


@dataclass(frozen=True, eq=False)
class SpectralRepresentation:
    lattice: FiniteDistributiveLattice
    points: tuple  # (join-irreducible, value)
    order: FinitePoset  # on the values, copied from J(L)

    def values(self) -> list:
        return [v for _, v in self.points]


def spectral_representation(L: FiniteDistributiveLattice, f: LatticeForm) -> SpectralRepresentation:
    """Values ``f(a, pred a)`` over join-irreducibles, ordered as J(L)."""
    if f.source is not L and f.source.elements != L.elements:
        raise ValidationError("form does not live on this lattice")
    _require_conley(f, "spectral_representation")
    pts = tuple((a, f.table[(a, p)]) for a, p in join_irreducibles(L))
    zero, meet = f.zero, f.target.meet
    for i, (_, v) in enumerate(pts):
        if v == zero:
            raise AxiomsViolated("a spectral point is zero")
        for _, w in pts[i + 1:]:
            if meet(v, w) != zero:
                raise AxiomsViolated("spectral points are not pairwise disjoint")
    where = {v: a for a, v in pts}
    order = FinitePoset.from_leq(list(where), lambda x, y: L.leq(where[x], where[y]))
    return SpectralRepresentation(L, pts, order)


def decompose_join(L: FiniteDistributiveLattice, f: LatticeForm, a: int) -> list:
    """``f(a', pred a')`` over join-irreducibles ``a' <= a``; they join to ``a``."""
    if not check_additivity(f):
        raise AxiomsViolated("form is not additive")
    L.index(a)
    parts = [f.table[(x, p)] for x, p in join_irreducibles(L) if L.leq(x, a)]
    total = f.embed(L.bottom)
    for v in parts:
        total = f.target.join(total, v)
    if total != f.embed(a):
        raise AxiomsViolated("pieces do not join back to the element")
    return parts
