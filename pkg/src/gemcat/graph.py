"""Edge-coloured multigraph representation of gems and crystallizations.

A graph of order 2p with n+1 colours is stored as one fixed-point-free
involution per colour: ``matchings[c][v]`` is the colour-c partner of
vertex ``v``.  Vertices are 1-based (index 0 of every matching is unused),
so vertex numbers line up with the v_1..v_2p numbering used by the
classification moves.  Graphs are immutable values; every operation that
changes a graph returns a new one.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .errors import (
    Disconnected,
    EmptyColourSet,
    FixedPoint,
    FormatError,
    InvalidColour,
    InvalidVertex,
    NotInvolution,
    OddOrder,
)


def _components(matchings, order, colours):
    """Connected components of the subgraph using only `colours`.

    Returns a list of components, each a sorted list of vertices; the list
    is ordered by smallest vertex.
    """
    seen = bytearray(order + 1)
    comps = []
    for start in range(1, order + 1):
        if seen[start]:
            continue
        stack = [start]
        seen[start] = 1
        comp = [start]
        while stack:
            v = stack.pop()
            for c in colours:
                w = matchings[c][v]
                if not seen[w]:
                    seen[w] = 1
                    comp.append(w)
                    stack.append(w)
        comp.sort()
        comps.append(comp)
    return comps


def _component_count(matchings, order, colours):
    seen = bytearray(order + 1)
    count = 0
    for start in range(1, order + 1):
        if seen[start]:
            continue
        count += 1
        stack = [start]
        seen[start] = 1
        while stack:
            v = stack.pop()
            for c in colours:
                w = matchings[c][v]
                if not seen[w]:
                    seen[w] = 1
                    stack.append(w)
    return count


@dataclass(frozen=True)
class ResidueCensus:
    """Residue counts g_B for every colour subset B with 2 <= #B <= n+1.

    `counts` maps the sorted colour tuple B to g_B; `membership` maps B to a
    tuple where entry v-1 is the component index (0-based, ordered by
    smallest vertex) of vertex v in the B-subgraph.
    """

    n_plus_one: int
    order: int
    counts: dict
    membership: dict

    def g(self, *colours):
        return self.counts[tuple(sorted(colours))]

    def g_hat(self, c):
        """g_{\\hat c}: residues missing the single colour c."""
        rest = tuple(i for i in range(self.n_plus_one) if i != c)
        return self.counts[rest]

    def pair_total(self):
        return sum(v for b, v in self.counts.items() if len(b) == 2)

    def triple_total(self):
        return sum(v for b, v in self.counts.items() if len(b) == 3)


class ColouredGraph:
    """Immutable (n+1)-coloured regular multigraph (a gem candidate)."""

    __slots__ = ("n_plus_one", "order", "matchings", "_hash")

    def __init__(self, n_plus_one, order, matchings, _validated=False):
        object.__setattr__(self, "n_plus_one", n_plus_one)
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "matchings", matchings)
        object.__setattr__(self, "_hash", None)
        if not _validated:
            self._validate()

    def _validate(self):
        if self.order % 2 != 0 or self.order < 2:
            raise OddOrder(f"order must be even and positive, got {self.order}")
        if len(self.matchings) != self.n_plus_one:
            raise InvalidColour(
                f"expected {self.n_plus_one} matchings, got {len(self.matchings)}"
            )
        for c, m in enumerate(self.matchings):
            if len(m) != self.order + 1:
                raise InvalidVertex(f"matching {c} has wrong length")
            for v in range(1, self.order + 1):
                w = m[v]
                if not 1 <= w <= self.order:
                    raise InvalidVertex(f"colour {c}: partner of {v} out of range")
                if w == v:
                    raise FixedPoint(f"colour {c} fixes vertex {v}")
                if m[w] != v:
                    raise NotInvolution(f"colour {c} is not an involution at {v}")

    # -- basic queries -------------------------------------------------

    def partner(self, c, v):
        return self.matchings[c][v]

    @property
    def p(self):
        return self.order // 2

    def colours(self):
        return range(self.n_plus_one)

    def is_connected(self):
        return _component_count(self.matchings, self.order, range(self.n_plus_one)) == 1

    def residues(self, colours):
        """Components of the subgraph restricted to `colours` (the B-residues)."""
        cols = tuple(sorted(set(colours)))
        if not cols:
            raise EmptyColourSet("residues need at least one colour")
        for c in cols:
            if not 0 <= c < self.n_plus_one:
                raise InvalidColour(f"colour {c} out of range")
        return _components(self.matchings, self.order, cols)

    def census(self):
        """All residue counts for 2 <= #B <= n+1."""
        counts = {}
        membership = {}
        for h in range(2, self.n_plus_one + 1):
            for cols in combinations(range(self.n_plus_one), h):
                comps = _components(self.matchings, self.order, cols)
                counts[cols] = len(comps)
                member = [0] * self.order
                for idx, comp in enumerate(comps):
                    for v in comp:
                        member[v - 1] = idx
                membership[cols] = tuple(member)
        return ResidueCensus(self.n_plus_one, self.order, counts, membership)

    def bipartition(self):
        """Two-colouring classes as a tuple indexed by vertex (entries 0/1),
        or None when the graph is not bipartite."""
        cls = [-1] * (self.order + 1)
        for start in range(1, self.order + 1):
            if cls[start] != -1:
                continue
            cls[start] = 0
            stack = [start]
            while stack:
                v = stack.pop()
                for c in range(self.n_plus_one):
                    w = self.matchings[c][v]
                    if cls[w] == -1:
                        cls[w] = 1 - cls[v]
                        stack.append(w)
                    elif cls[w] == cls[v]:
                        return None
        return tuple(cls)

    def is_bipartite(self):
        return self.bipartition() is not None

    def is_contracted(self):
        """True iff the graph misses exactly one residue per colour (g_hat c = 1)."""
        for c in range(self.n_plus_one):
            rest = tuple(i for i in range(self.n_plus_one) if i != c)
            if _component_count(self.matchings, self.order, rest) != 1:
                return False
        return True

    # -- value semantics ----------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, ColouredGraph):
            return NotImplemented
        return (
            self.n_plus_one == other.n_plus_one
            and self.order == other.order
            and self.matchings == other.matchings
        )

    def __hash__(self):
        h = self._hash
        if h is None:
            h = hash((self.n_plus_one, self.order, self.matchings))
            object.__setattr__(self, "_hash", h)
        return h

    def __repr__(self):
        return f"ColouredGraph(n_plus_one={self.n_plus_one}, order={self.order})"


def build(order, matchings, n_plus_one=None, require_connected=True):
    """Validate and build a ColouredGraph.

    `matchings` is a sequence (one entry per colour) of either
    partner-tuples of length order+1 (slot 0 ignored) or mappings
    vertex -> partner covering 1..order.
    """
    if n_plus_one is None:
        n_plus_one = len(matchings)
    norm = []
    for m in matchings:
        if isinstance(m, dict):
            row = [0] * (order + 1)
            for v, w in m.items():
                row[v] = w
            norm.append(tuple(row))
        else:
            row = list(m)
            if len(row) == order:
                row = [0] + row
            norm.append(tuple(row))
    g = ColouredGraph(n_plus_one, order, tuple(norm))
    if require_connected and not g.is_connected():
        raise Disconnected("graph is not connected")
    return g


def standard_sphere(n_plus_one):
    """The order-2 crystallization of the n-sphere: two vertices joined by
    every colour."""
    row = (0, 2, 1)
    return ColouredGraph(n_plus_one, 2, tuple(row for _ in range(n_plus_one)), _validated=True)


def relabel(g, perm):
    """Apply a vertex permutation: `perm[v]` is the new name of vertex v.

    `perm` has length order+1 with slot 0 ignored.
    """
    order = g.order
    new = []
    for m in g.matchings:
        row = [0] * (order + 1)
        for v in range(1, order + 1):
            row[perm[v]] = perm[m[v]]
        new.append(tuple(row))
    return ColouredGraph(g.n_plus_one, order, tuple(new), _validated=True)


def permute_colours(g, pi):
    """Apply a colour permutation: colour c of the result is old colour pi[c]."""
    new = tuple(g.matchings[pi[c]] for c in range(g.n_plus_one))
    return ColouredGraph(g.n_plus_one, g.order, new, _validated=True)


def connected_sum(g1, v1, g2, v2):
    """Graph connected sum: delete v1 from g1 and v2 from g2 and join their
    partners colourwise.  The order of the result is 2(p1 + p2 - 1).

    When both graphs are bipartite the orientation of the gluing is
    controlled by the bipartition class of v2 relative to v1; both choices
    are reachable by picking v2 (or its neighbour) accordingly.
    """
    if g1.n_plus_one != g2.n_plus_one:
        raise InvalidColour("colour counts differ")
    if not 1 <= v1 <= g1.order:
        raise InvalidVertex(f"vertex {v1} not in first graph")
    if not 1 <= v2 <= g2.order:
        raise InvalidVertex(f"vertex {v2} not in second graph")
    ncol = g1.n_plus_one
    # survivors of g1 keep their relative order, then survivors of g2
    map1 = [0] * (g1.order + 1)
    nxt = 1
    for v in range(1, g1.order + 1):
        if v != v1:
            map1[v] = nxt
            nxt += 1
    map2 = [0] * (g2.order + 1)
    for v in range(1, g2.order + 1):
        if v != v2:
            map2[v] = nxt
            nxt += 1
    order = nxt - 1
    rows = []
    for c in range(ncol):
        row = [0] * (order + 1)
        for v in range(1, g1.order + 1):
            if v == v1:
                continue
            w = g1.matchings[c][v]
            if w == v1:
                # joined to the colour-c partner of v2 in g2
                u = g2.matchings[c][v2]
                row[map1[v]] = map2[u]
                row[map2[u]] = map1[v]
            else:
                row[map1[v]] = map1[w]
        for v in range(1, g2.order + 1):
            if v == v2:
                continue
            w = g2.matchings[c][v]
            if w != v2:
                row[map2[v]] = map2[w]
        rows.append(tuple(row))
    return ColouredGraph(ncol, order, tuple(rows), _validated=True)


# -- gem text format ---------------------------------------------------
#
# line 1: "<n_plus_one> <order>"
# next n+1 lines: `order` integers, the j-th being the colour-c partner of
# vertex j (1-based).  Round-trips bit-exactly.


def format_gem(g):
    lines = [f"{g.n_plus_one} {g.order}"]
    for c in range(g.n_plus_one):
        lines.append(" ".join(str(g.matchings[c][v]) for v in range(1, g.order + 1)))
    return "\n".join(lines) + "\n"


def parse_gem(text):
    lines = [ln for ln in text.splitlines()]
    if not lines:
        raise FormatError("empty gem file", line=1)
    head = lines[0].split()
    if len(head) != 2:
        raise FormatError("expected '<n_plus_one> <order>'", line=1)
    try:
        ncol, order = int(head[0]), int(head[1])
    except ValueError:
        raise FormatError("non-integer header", line=1) from None
    if len(lines) < 1 + ncol:
        raise FormatError(f"expected {ncol} matching lines", line=len(lines))
    rows = []
    for c in range(ncol):
        parts = lines[1 + c].split()
        if len(parts) != order:
            raise FormatError(f"expected {order} integers", line=2 + c)
        try:
            rows.append(tuple([0] + [int(x) for x in parts]))
        except ValueError:
            raise FormatError("non-integer partner", line=2 + c) from None
    return build(order, rows, n_plus_one=ncol)
