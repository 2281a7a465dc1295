"""Deliberately naive reference implementations used only by the tests."""

from itertools import combinations, product


def powerset(items):
    items = list(items)
    for r in range(len(items) + 1):
        yield from (frozenset(c) for c in combinations(items, r))


def brute_downsets(elements, leq):
    """Down-sets as frozensets, by checking every subset."""
    return [S for S in powerset(elements)
            if all(x in S for y in S for x in elements if leq(x, y))]


def brute_join_irreducibles(family):
    """Nonempty members of a union-closed family with exactly one lower cover."""
    out = []
    for a in family:
        below = [b for b in family if b < a]
        maximal = [b for b in below if not any(b < c for c in below)]
        if a and len(maximal) == 1:
            out.append(a)
    return out


def image(edges, S):
    return frozenset(y for (x, y) in edges if x in S)


def preimage(edges, S):
    return frozenset(x for (x, y) in edges if y in S)


def brute_attractors(atoms, edges):
    return {S for S in powerset(atoms) if image(edges, S) == S}


def brute_repellers(atoms, edges):
    return {S for S in powerset(atoms) if preimage(edges, S) == S}


def brute_omega(edges, U):
    """Union of the images F^k(U) that occur infinitely often."""
    seen, cur = [], frozenset(U)
    while cur not in seen:
        seen.append(cur)
        cur = image(edges, cur)
    start = seen.index(cur)
    return frozenset().union(*seen[start:]) if seen[start:] else frozenset()


def brute_inv(edges, S):
    """Union of all invariant subsets of S (T ⊂ F(T)∩F⁻¹(T))."""
    best = frozenset()
    for T in powerset(S):
        if T <= image(edges, T) and T <= preimage(edges, T):
            best |= T
    return best


def is_lattice_hom(pairs, h, join, meet):
    return all(h[join(a, b)] == join(h[a], h[b]) and h[meet(a, b)] == meet(h[a], h[b])
               for a, b in product(pairs, repeat=2))


class SampledSet:
    """A subset of ``[lo, hi]`` known only through a membership predicate.

    Correct for unions of intervals whose endpoints all lie in ``cuts``: such
    a set is constant on each open gap between consecutive cuts, so probing
    the cuts and one midpoint per gap determines it.
    """

    def __init__(self, lo, hi, cuts, member):
        self.pts = sorted({lo, hi, *(c for c in cuts if lo <= c <= hi)})
        self.member = member
        self.lo, self.hi = lo, hi

    def probes(self):
        out = []
        for a, b in zip(self.pts, self.pts[1:]):
            out += [a, (a + b) / 2]
        return out + [self.pts[-1]]

    def closure(self):
        def member(x):
            if self.member(x):
                return True
            k = self._gap_neighbours(x)
            return any(self.member(m) for m in k)
        return SampledSet(self.lo, self.hi, self.pts, member)

    def interior(self):
        def member(x):
            return self.member(x) and all(self.member(m) for m in self._gap_neighbours(x))
        return SampledSet(self.lo, self.hi, self.pts, member)

    def _gap_neighbours(self, x):
        """Midpoints of the gaps adjacent to ``x`` (inside the space)."""
        left = [p for p in self.pts if p < x]
        right = [p for p in self.pts if p > x]
        out = []
        if left:
            out.append((left[-1] + x) / 2)
        if right:
            out.append((x + right[0]) / 2)
        return out


def interval_member(items):
    """Membership for a list of ``(l, r, lc, rc)`` intervals."""
    def member(x):
        return any((l == r == x and lc and rc)
                   or (l < r and ((l < x < r) or (x == l and lc) or (x == r and rc)))
                   for l, r, lc, rc in items)
    return member
