"""Crossing partitions drawn with explicit heights.

Three families of partition diagrams supply the combinatorics behind the
closed-form operator formulas in this package. All of them live on a row of
vertices drawn right-to-left (vertex v sits at x = max_vertex - v) and are
made of pair blocks and singleton blocks:

* Family B on vertices {0, ..., n}: vertex 0 is paired with some
  k in {1..n} at height 1, every l in {1..k-1} is paired with an element of
  {k+1..n} at height l+1, and everything else is a singleton drawn straight
  up to the top.
* Family C on vertices {0, ..., n}: as B, except each l in {1..k-1} may
  instead stay a singleton. Singletons split into a left group (above k)
  and a right group (below k).
* Family D on vertices {1, ..., n}: any partition into singletons and
  pairs; a pair (a, b) with a < b is drawn at height a.

A pair (a, b) is drawn as two vertical legs joined by a horizontal bar at
the block's height; a singleton is a vertical line to one unit above the
highest bar. Distinct blocks get distinct heights, so polylines of distinct
blocks can only meet transversally. The crossing number of a diagram is the
count of those intersection points, computed with exact rational
coordinates; nested arcs crossing a spanning pair genuinely meet it twice
and are counted twice.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import permutations

__all__ = [
    "DrawnPartition",
    "DegenerateLayoutError",
    "enumerate_family",
    "inversions",
    "induced_permutation",
]

FAMILIES = ("B", "C", "D")


class DegenerateLayoutError(RuntimeError):
    """Raised when block polylines touch non-transversally.

    The drawing rules make this impossible; seeing it means a layout bug.
    """


def inversions(seq):
    """Number of inversions of a sequence of comparable items."""
    count = 0
    for a in range(len(seq)):
        for b in range(a + 1, len(seq)):
            if seq[a] > seq[b]:
                count += 1
    return count


class DrawnPartition:
    """One diagram: pair and singleton blocks plus their geometric layout.

    Blocks are identified by their sorted vertex tuple: ``(a, b)`` for a
    pair, ``(s,)`` for a singleton.
    """

    __slots__ = ("family", "n_vertices", "pairs", "singletons", "_cross")

    def __init__(self, family, n_vertices, pairs, singletons):
        if family not in FAMILIES:
            raise ValueError(f"unknown family {family!r}")
        pairs = tuple(sorted(tuple(sorted(p)) for p in pairs))
        singletons = tuple(sorted(singletons))
        seen = [v for p in pairs for v in p] + list(singletons)
        lo = 0 if family in ("B", "C") else 1
        if sorted(seen) != list(range(lo, lo + n_vertices)):
            raise ValueError("blocks do not partition the vertex set")
        object.__setattr__(self, "family", family)
        object.__setattr__(self, "n_vertices", n_vertices)
        object.__setattr__(self, "pairs", pairs)
        object.__setattr__(self, "singletons", singletons)
        object.__setattr__(self, "_cross", None)

    def __setattr__(self, name, value):
        raise AttributeError("DrawnPartition is immutable")

    # -- block structure ---------------------------------------------------

    @property
    def max_vertex(self):
        return self.n_vertices - 1 if self.family in ("B", "C") else self.n_vertices

    @property
    def partner0(self):
        """The vertex paired with 0 (families B and C)."""
        if self.family not in ("B", "C"):
            raise ValueError("family D has no 0 vertex")
        for a, b in self.pairs:
            if a == 0:
                return b
        raise ValueError("vertex 0 is not paired")

    @property
    def s_left(self):
        """Singletons above the partner of 0 (family C's left area)."""
        k = self.partner0
        return tuple(s for s in self.singletons if s > k)

    @property
    def s_right(self):
        """Singletons below the partner of 0 (family C's right area)."""
        k = self.partner0
        return tuple(s for s in self.singletons if s < k)

    @property
    def num_pairs(self):
        return len(self.pairs)

    def blocks(self):
        return [tuple(p) for p in self.pairs] + [(s,) for s in self.singletons]

    def zero_block(self):
        for a, b in self.pairs:
            if a == 0:
                return (a, b)
        return None

    # -- geometry ----------------------------------------------------------

    def _height(self, pair):
        a, _ = pair
        if self.family in ("B", "C"):
            return 1 if a == 0 else a + 1
        return a

    def layout(self):
        """Map block id -> polyline (list of exact rational points)."""
        n = self.max_vertex

        def x(v):
            return Fraction(n - v)

        heights = {p: self._height(p) for p in self.pairs}
        if len(set(heights.values())) != len(heights):
            raise DegenerateLayoutError("pair heights collide")
        top = Fraction(max(heights.values(), default=0) + 1)
        lines = {}
        for p in self.pairs:
            a, b = p
            h = Fraction(heights[p])
            lines[p] = [(x(a), Fraction(0)), (x(a), h), (x(b), h), (x(b), Fraction(0))]
        for s in self.singletons:
            lines[(s,)] = [(x(s), Fraction(0)), (x(s), top)]
        return lines

    def crossing_pairs(self):
        """Map frozenset{block_a, block_b} -> geometric intersection count."""
        if self._cross is None:
            lines = self.layout()
            ids = list(lines)
            counts = {}
            for ia in range(len(ids)):
                for ib in range(ia + 1, len(ids)):
                    c = _polyline_crossings(lines[ids[ia]], lines[ids[ib]])
                    if c:
                        counts[frozenset((ids[ia], ids[ib]))] = c
            object.__setattr__(self, "_cross", counts)
        return self._cross

    def crossings(self):
        """Total number of interior intersection points between blocks."""
        return sum(self.crossing_pairs().values())

    def __repr__(self):
        return (
            f"DrawnPartition({self.family}, n={self.n_vertices}, "
            f"pairs={self.pairs}, singletons={self.singletons})"
        )


# ---------------------------------------------------------------------------
# exact segment intersection
# ---------------------------------------------------------------------------


def _orient(p, q, r):
    return (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0])


def _on_segment(p, q, r):
    # r assumed collinear with pq
    return (
        min(p[0], q[0]) <= r[0] <= max(p[0], q[0])
        and min(p[1], q[1]) <= r[1] <= max(p[1], q[1])
    )


def _segment_crossing(p1, p2, p3, p4):
    """1 if the open interiors cross transversally, 0 if disjoint.

    Any touching configuration (shared endpoint, endpoint on interior,
    collinear overlap) raises; the drawing rules exclude them.
    """
    d1 = _orient(p3, p4, p1)
    d2 = _orient(p3, p4, p2)
    d3 = _orient(p1, p2, p3)
    d4 = _orient(p1, p2, p4)
    if ((d1 > 0 and d2 < 0) or (d1 < 0 and d2 > 0)) and (
        (d3 > 0 and d4 < 0) or (d3 < 0 and d4 > 0)
    ):
        return 1
    for d, seg, pt in ((d1, (p3, p4), p1), (d2, (p3, p4), p2), (d3, (p1, p2), p3), (d4, (p1, p2), p4)):
        if d == 0 and _on_segment(seg[0], seg[1], pt):
            raise DegenerateLayoutError(f"blocks touch at {pt}")
    return 0


def _polyline_crossings(line_a, line_b):
    total = 0
    for sa in range(len(line_a) - 1):
        for sb in range(len(line_b) - 1):
            total += _segment_crossing(
                line_a[sa], line_a[sa + 1], line_b[sb], line_b[sb + 1]
            )
    return total


# ---------------------------------------------------------------------------
# enumeration
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def enumerate_family(family, n_vertices):
    """All diagrams of the family on n_vertices vertices, deterministically.

    Families B and C use vertices {0..n_vertices-1}; family D uses
    {1..n_vertices} and accepts n_vertices = 0 (the empty diagram). Output
    order is lexicographic in (partner of 0, pairing assignment).
    """
    if family == "B":
        return tuple(_enum_b(n_vertices))
    if family == "C":
        return tuple(_enum_c(n_vertices))
    if family == "D":
        return tuple(_enum_d(n_vertices))
    raise ValueError(f"unknown family {family!r}")


def _enum_b(n_vertices):
    if n_vertices < 1:
        raise ValueError("family B needs at least one vertex")
    n = n_vertices - 1
    out = []
    for k in range(1, n + 1):
        left = list(range(1, k))
        right = [v for v in range(k + 1, n + 1)]
        if len(left) > len(right):
            continue
        for targets in permutations(right, len(left)):
            pairs = [(0, k)] + [(l, t) for l, t in zip(left, targets)]
            used = {v for p in pairs for v in p}
            singles = [v for v in range(n + 1) if v not in used]
            out.append(DrawnPartition("B", n_vertices, pairs, singles))
    return out


def _enum_c(n_vertices):
    if n_vertices < 1:
        raise ValueError("family C needs at least one vertex")
    n = n_vertices - 1
    out = []
    for k in range(1, n + 1):
        left = list(range(1, k))
        right = list(range(k + 1, n + 1))

        def assign(idx, taken, acc):
            if idx == len(left):
                yield list(acc)
                return
            l = left[idx]
            acc.append((l, None))  # singleton
            yield from assign(idx + 1, taken, acc)
            acc.pop()
            for t in right:
                if t not in taken:
                    taken.add(t)
                    acc.append((l, t))
                    yield from assign(idx + 1, taken, acc)
                    acc.pop()
                    taken.remove(t)

        for choice in assign(0, set(), []):
            pairs = [(0, k)] + [(l, t) for l, t in choice if t is not None]
            used = {v for p in pairs for v in p}
            singles = [v for v in range(n + 1) if v not in used]
            out.append(DrawnPartition("C", n_vertices, pairs, singles))
    return out


def _enum_d(n_vertices):
    if n_vertices < 0:
        raise ValueError("family D needs a nonnegative vertex count")

    out = []

    def build(remaining, pairs, singles):
        if not remaining:
            out.append(DrawnPartition("D", n_vertices, pairs, singles))
            return
        v = remaining[0]
        rest = remaining[1:]
        build(rest, pairs, singles + [v])
        for idx, u in enumerate(rest):
            build(rest[:idx] + rest[idx + 1 :], pairs + [(v, u)], singles)

    build(list(range(1, n_vertices + 1)), [], [])
    return out


# ---------------------------------------------------------------------------
# induced permutation of a full pairing
# ---------------------------------------------------------------------------


def induced_permutation(part: DrawnPartition):
    """Permutation of {1..m-1} induced by a full pairing in B(2m).

    Requires partner0 == m and no singletons. The pair through l < m lands
    at partner - m; the diagram's crossing number then splits as
    m(m-1)/2 plus the inversion count of the returned permutation.
    """
    if part.family != "B":
        raise ValueError("induced permutation is defined for family B")
    if part.singletons:
        raise ValueError("partition has singletons")
    if part.n_vertices % 2 != 0:
        raise ValueError("full pairings need an even vertex count")
    m = part.n_vertices // 2
    if part.partner0 != m:
        raise ValueError("vertex 0 must be paired with the middle vertex")
    partner = {}
    for a, b in part.pairs:
        partner[a] = b
        partner[b] = a
    return tuple(partner[l] - m for l in range(1, m))
