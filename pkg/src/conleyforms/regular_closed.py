"""Regular closed cell sets on a 1D grid and an exact interval oracle.

:class:`IntervalUnion` describes any finite union of points and intervals in
a closed ambient interval ``[lo, hi]``.  It keeps a sorted tuple of critical
points plus two bitmasks: bit ``i`` of ``at`` says whether point ``i`` is a
member, bit ``i`` of ``gaps`` whether the open gap to its right is.  Closure and
interior are then local bit rules, and all comparisons are exact rationals.
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

from .errors import GridMismatch, ValidationError

Interval = tuple  # (left, right, left_closed, right_closed)


def as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        raise ValidationError("floats are not accepted; use exact rationals")
    return Fraction(x)


@dataclass(frozen=True, eq=False)
class IntervalUnion:
    space: tuple
    points: tuple
    at: int
    gaps: int

    def __post_init__(self):
        lo, hi = self.space
        if not lo < hi:
            raise ValidationError("ambient interval must have positive length")
        p = self.points
        if p[0] != lo or p[-1] != hi or any(a >= b for a, b in zip(p, p[1:])):
            raise ValidationError("critical points must increase from lo to hi")

    @classmethod
    def _raw(cls, space, points, at, gaps) -> "IntervalUnion":
        # derived values reuse already-validated points
        obj = object.__new__(cls)
        setattr_ = object.__setattr__
        setattr_(obj, "space", space)
        setattr_(obj, "points", points)
        setattr_(obj, "at", at)
        setattr_(obj, "gaps", gaps)
        return obj

    # construction ---------------------------------------------------------

    @classmethod
    def empty(cls, space) -> "IntervalUnion":
        lo, hi = map(as_fraction, space)
        return cls((lo, hi), (lo, hi), 0, 0)

    @classmethod
    def full(cls, space) -> "IntervalUnion":
        lo, hi = map(as_fraction, space)
        return cls((lo, hi), (lo, hi), 0b11, 0b1)

    @classmethod
    def from_intervals(cls, space, intervals: Iterable) -> "IntervalUnion":
        """Union of intervals given as ``(a, b)`` (closed) or ``(a, b, lc, rc)``."""
        lo, hi = map(as_fraction, space)
        items = []
        for iv in intervals:
            a, b = as_fraction(iv[0]), as_fraction(iv[1])
            lc, rc = (True, True) if len(iv) == 2 else (bool(iv[2]), bool(iv[3]))
            if a > b or a < lo or b > hi:
                raise ValidationError(f"interval [{a}, {b}] is not inside [{lo}, {hi}]")
            if a == b and not (lc and rc):
                continue
            items.append((a, b, lc, rc))
        pts = sorted({lo, hi} | {x for a, b, _, _ in items for x in (a, b)})
        index = {x: i for i, x in enumerate(pts)}
        at = gaps = 0
        for a, b, lc, rc in items:
            i, k = index[a], index[b]
            for g in range(i, k):
                gaps |= 1 << g
            for q in range(i + 1, k):
                at |= 1 << q
            if lc:
                at |= 1 << i
            if rc:
                at |= 1 << k
        return cls((lo, hi), tuple(pts), at, gaps)

    # structure ------------------------------------------------------------

    @property
    def _amask(self) -> int:
        return (1 << len(self.points)) - 1

    @property
    def _gmask(self) -> int:
        return (1 << (len(self.points) - 1)) - 1

    def refine(self, points: Sequence) -> "IntervalUnion":
        """Same set over a finer tuple of critical points."""
        if tuple(points) == self.points:
            return self
        old = self.points
        at = gaps = 0
        for i, q in enumerate(points):
            k = bisect_right(old, q) - 1
            if old[k] == q:
                bit = (self.at >> k) & 1
            else:
                bit = (self.gaps >> k) & 1
            at |= bit << i
        for i in range(len(points) - 1):
            k = bisect_right(old, points[i]) - 1
            gaps |= ((self.gaps >> k) & 1) << i
        return IntervalUnion._raw(self.space, tuple(points), at, gaps)

    def _aligned(self, other: "IntervalUnion"):
        if self.space != other.space:
            raise ValidationError("interval unions live in different spaces")
        if self.points == other.points:
            return self, other
        pts = tuple(sorted(set(self.points) | set(other.points)))
        return self.refine(pts), other.refine(pts)

    def normalized(self) -> "IntervalUnion":
        """Drop interior critical points that separate nothing."""
        keep = [0]
        for i in range(1, len(self.points) - 1):
            a = (self.at >> i) & 1
            if not (a == (self.gaps >> (i - 1)) & 1 == (self.gaps >> i) & 1):
                keep.append(i)
        keep.append(len(self.points) - 1)
        if len(keep) == len(self.points):
            return self
        at = sum(((self.at >> k) & 1) << j for j, k in enumerate(keep))
        gaps = sum(((self.gaps >> k) & 1) << j for j, k in enumerate(keep[:-1]))
        return IntervalUnion._raw(self.space, tuple(self.points[k] for k in keep), at, gaps)

    @cached_property
    def _key(self):
        n = self.normalized()
        return (n.space, n.points, n.at, n.gaps)

    def __eq__(self, other) -> bool:
        if not isinstance(other, IntervalUnion):
            return NotImplemented
        a, b = self._aligned(other)
        return a.at == b.at and a.gaps == b.gaps

    def __hash__(self) -> int:
        return hash(self._key)

    def is_empty(self) -> bool:
        return not self.at and not self.gaps

    def contains_point(self, x) -> bool:
        x = as_fraction(x)
        lo, hi = self.space
        if not lo <= x <= hi:
            return False
        k = bisect_right(self.points, x) - 1
        if self.points[k] == x:
            return bool((self.at >> k) & 1)
        return bool((self.gaps >> k) & 1)

    def issubset(self, other: "IntervalUnion") -> bool:
        a, b = self._aligned(other)
        return not (a.at & ~b.at) and not (a.gaps & ~b.gaps)

    # set algebra ----------------------------------------------------------

    def union(self, other: "IntervalUnion") -> "IntervalUnion":
        a, b = self._aligned(other)
        return IntervalUnion._raw(self.space, a.points, a.at | b.at, a.gaps | b.gaps)

    def intersection(self, other: "IntervalUnion") -> "IntervalUnion":
        a, b = self._aligned(other)
        return IntervalUnion._raw(self.space, a.points, a.at & b.at, a.gaps & b.gaps)

    def complement(self) -> "IntervalUnion":
        return IntervalUnion._raw(self.space, self.points, ~self.at & self._amask,
                             ~self.gaps & self._gmask)

    def difference(self, other: "IntervalUnion") -> "IntervalUnion":
        return self.intersection(other.complement())

    __or__ = union
    __and__ = intersection
    __sub__ = difference

    # topology -------------------------------------------------------------

    def closure(self) -> "IntervalUnion":
        g = self.gaps
        return IntervalUnion._raw(self.space, self.points, (self.at | g | (g << 1)) & self._amask, g)

    def interior(self) -> "IntervalUnion":
        """Interior relative to the ambient interval.

        An end of the space has a neighbourhood on one side only, so it is
        interior as soon as the adjacent gap is.
        """
        g = self.gaps
        left = (g << 1) | 1
        right = g | (1 << (len(self.points) - 1))
        return IntervalUnion._raw(self.space, self.points, self.at & left & right, g)

    def regularize(self) -> "IntervalUnion":
        return self.interior().closure()

    def is_closed(self) -> bool:
        return self.closure() == self

    def is_regular_closed(self) -> bool:
        return self.regularize() == self

    # output ---------------------------------------------------------------

    def intervals(self) -> list:
        """Maximal connected pieces as ``(left, right, left_closed, right_closed)``."""
        n = self.normalized()
        pts = n.points
        out = []
        cur = None
        for i, p in enumerate(pts):
            here = (n.at >> i) & 1
            gap = (n.gaps >> i) & 1 if i < len(pts) - 1 else 0
            if cur is None:
                if here:
                    cur = [p, True]
                elif gap:
                    cur = [p, False]
                else:
                    continue
            if not gap:
                out.append((cur[0], p, cur[1], bool(here)))
                cur = None
            elif not here and cur[0] != p:
                out.append((cur[0], p, cur[1], False))
                cur = [p, False]
        return out

    def __repr__(self) -> str:
        parts = []
        for a, b, lc, rc in self.intervals():
            parts.append(f"{'[' if lc else '('}{a},{b}{']' if rc else ')'}")
        return "IntervalUnion(" + " ∪ ".join(parts or ["∅"]) + ")"


def oracle_closure(S: IntervalUnion) -> IntervalUnion:
    return S.closure()


def oracle_interior(S: IntervalUnion) -> IntervalUnion:
    return S.interior()


def oracle_regularize(S: IntervalUnion) -> IntervalUnion:
    """``cl int S``."""
    return S.regularize()


def rc_meet_points(U: IntervalUnion, V: IntervalUnion) -> IntervalUnion:
    return (U & V).regularize()


def rc_complement_points(U: IntervalUnion) -> IntervalUnion:
    """``U^# = cl(space \\ U)``."""
    return U.complement().closure()


@dataclass(frozen=True)
class GridAlgebra1D:
    """Cells ``[x_i, x_{i+1}]`` of a partition of ``[x_0, x_n]``."""

    breakpoints: tuple

    def __post_init__(self):
        bp = tuple(as_fraction(x) for x in self.breakpoints)
        object.__setattr__(self, "breakpoints", bp)
        if len(bp) < 2:
            raise ValidationError("a grid needs at least one cell")
        if any(a >= b for a, b in zip(bp, bp[1:])):
            raise ValidationError("breakpoints must be strictly increasing")

    @classmethod
    def uniform(cls, lo, hi, cells: int) -> "GridAlgebra1D":
        lo, hi = as_fraction(lo), as_fraction(hi)
        return cls(tuple(lo + (hi - lo) * Fraction(i, cells) for i in range(cells + 1)))

    @property
    def n(self) -> int:
        return len(self.breakpoints) - 1

    @property
    def space(self) -> tuple:
        return (self.breakpoints[0], self.breakpoints[-1])

    @property
    def full(self) -> int:
        return (1 << self.n) - 1

    def cell(self, i: int) -> tuple:
        return (self.breakpoints[i], self.breakpoints[i + 1])

    def evaluate(self, mask: int) -> IntervalUnion:
        """``|U|``: the union of the closed cells in ``mask``."""
        g = mask & self.full
        at = g | (g << 1)
        return IntervalUnion._raw(self.space, self.breakpoints, at, g)

    def refine(self) -> "GridAlgebra1D":
        """Split every cell at its midpoint."""
        bp = self.breakpoints
        out = [bp[0]]
        for a, b in zip(bp, bp[1:]):
            out += [(a + b) / 2, b]
        return GridAlgebra1D(tuple(out))

    def cells_meeting(self, S: IntervalUnion) -> int:
        """Cells whose open interior meets ``S``."""
        out = 0
        for i in range(self.n):
            a, b = self.cell(i)
            piece = IntervalUnion.from_intervals(self.space, [(a, b, False, False)])
            if not (piece & S).is_empty():
                out |= 1 << i
        return out


@dataclass(frozen=True)
class RegularClosedCellSet:
    grid: GridAlgebra1D
    mask: int

    def __post_init__(self):
        if self.mask < 0 or self.mask & ~self.grid.full:
            raise ValidationError("cell mask references unknown cells")

    def evaluate(self) -> IntervalUnion:
        return self.grid.evaluate(self.mask)

    def cells(self) -> list:
        return [i for i in range(self.grid.n) if (self.mask >> i) & 1]


def _same_grid(U: RegularClosedCellSet, V: RegularClosedCellSet) -> None:
    if U.grid != V.grid:
        raise GridMismatch("cell sets live on different grids")


def rc_join(U: RegularClosedCellSet, V: RegularClosedCellSet) -> RegularClosedCellSet:
    _same_grid(U, V)
    return RegularClosedCellSet(U.grid, U.mask | V.mask)


def rc_meet(U: RegularClosedCellSet, V: RegularClosedCellSet) -> RegularClosedCellSet:
    _same_grid(U, V)
    return RegularClosedCellSet(U.grid, U.mask & V.mask)


def rc_complement(U: RegularClosedCellSet) -> RegularClosedCellSet:
    return RegularClosedCellSet(U.grid, U.grid.full & ~U.mask)


def rc_diff(U: RegularClosedCellSet, V: RegularClosedCellSet) -> RegularClosedCellSet:
    """``U − V = U ∧ V^#``."""
    _same_grid(U, V)
    return rc_meet(U, rc_complement(V))


def check_regclhom(samples: Iterable) -> bool:
    """``U ↦ cl int U`` preserves union and intersection of closed sets."""
    for U, V in samples:
        rU, rV = U.regularize(), V.regularize()
        if (U | V).regularize() != rU | rV:
            return False
        if (U & V).regularize() != rc_meet_points(rU, rV):
            return False
    return True


def check_difference_lemma(samples: Iterable) -> bool:
    """``U ∧ V^# = cl(U \\ V)`` for regular closed ``U``, ``V``."""
    for U, V in samples:
        if rc_meet_points(U, rc_complement_points(V)) != (U - V).closure():
            return False
    return True


def check_evaluation(grid: GridAlgebra1D, U: int, V: int) -> dict:
    """Cell-level operations against the point-set oracle for one pair."""
    eU, eV = grid.evaluate(U), grid.evaluate(V)
    return {
        "join": grid.evaluate(U | V) == (eU | eV).regularize(),
        "meet": grid.evaluate(U & V) == rc_meet_points(eU, eV),
        "complement": grid.evaluate(grid.full & ~U) == rc_complement_points(eU),
        "difference": grid.evaluate(U & ~V) == (eU - eV).closure(),
    }


def evaluation_sweep(grid: GridAlgebra1D) -> dict:
    """:func:`check_evaluation` over every pair of cell sets; returns failure counts."""
    full = grid.full
    ev = [grid.evaluate(m) for m in range(full + 1)]
    fails = {"join": 0, "meet": 0, "complement": 0, "difference": 0}
    for U in range(full + 1):
        eU = ev[U]
        if ev[full & ~U] != rc_complement_points(eU):
            fails["complement"] += 1
        for V in range(full + 1):
            eV = ev[V]
            if ev[U | V] != (eU | eV).regularize():
                fails["join"] += 1
            if ev[U & V] != (eU & eV).regularize():
                fails["meet"] += 1
            if ev[U & ~V] != (eU - eV).closure():
                fails["difference"] += 1
    return fails
