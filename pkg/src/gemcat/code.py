"""Canonical codes and colour-isomorphism testing.

The code of a connected (n+1)-coloured graph is the lexicographic minimum,
over all 2p root vertices and all (n+1)! colour permutations, of the
partner sequences written under a rooted canonical numbering.  Equal codes
characterise colour-isomorphic graphs.

Numbering rule, for a root r and a colour order pi: vertex r gets number 1;
repeatedly take the lowest-numbered vertex that still has an unnumbered
partner and, scanning colours in pi order, give the next free number to its
first unnumbered partner.  The emitted sequence lists, for each colour in
pi order, the renumbered partners of vertices 1..2p.
"""

from __future__ import annotations

from itertools import permutations

from .errors import Disconnected
from .graph import ColouredGraph

try:  # hot path; the pure-Python scan below is the reference implementation
    from ._fastcode import min_code_seq as _fast_min_code_seq
except Exception:  # pragma: no cover - numba missing or broken
    _fast_min_code_seq = None

_PERM_CACHE = {}


def _perms(ncol):
    try:
        return _PERM_CACHE[ncol]
    except KeyError:
        ps = tuple(permutations(range(ncol)))
        _PERM_CACHE[ncol] = ps
        return ps


def _numbering(matchings, order, root, pi):
    """old->new numbering and new->old inverse for one (root, pi) choice."""
    num = [0] * (order + 1)
    old = [0] * (order + 1)
    num[root] = 1
    old[1] = root
    nxt = 2
    cur = 1
    while nxt <= order:
        v = old[cur]
        advanced = False
        for c in pi:
            w = matchings[c][v]
            if num[w] == 0:
                num[w] = nxt
                old[nxt] = w
                nxt += 1
                advanced = True
                break
        if not advanced:
            cur += 1
            if cur >= nxt:  # ran out of numbered vertices: disconnected
                raise Disconnected("rooted numbering did not cover the graph")
    return num, old


def _emit(matchings, order, pi, num, old):
    seq = []
    for c in pi:
        m = matchings[c]
        for nv in range(1, order + 1):
            seq.append(num[m[old[nv]]])
    return seq


def _min_code_py(g):
    matchings = g.matchings
    order = g.order
    best = None
    best_rp = None
    for root in range(1, order + 1):
        for pi in _perms(g.n_plus_one):
            num, old = _numbering(matchings, order, root, pi)
            seq = _emit(matchings, order, pi, num, old)
            if best is None or seq < best:
                best = seq
                best_rp = (root, pi)
    return best, best_rp


def min_code_seq(g):
    """Minimal emitted sequence plus the (root, colour order) achieving it."""
    if not g.is_connected():
        raise Disconnected("codes are defined for connected graphs only")
    if _fast_min_code_seq is not None:
        seq, root, pi = _fast_min_code_seq(g.matchings, g.order, g.n_plus_one)
        return seq, (root, pi)
    return _min_code_py(g)


def code(g):
    """Canonical code string: ``c<n+1>:<order>:`` then the n+1 renumbered
    partner sequences joined by ``|``, integers comma-separated."""
    seq, _ = min_code_seq(g)
    order = g.order
    chunks = []
    for c in range(g.n_plus_one):
        part = seq[c * order : (c + 1) * order]
        chunks.append(",".join(str(x) for x in part))
    return f"c{g.n_plus_one}:{order}:" + "|".join(chunks)


def parse_code(text):
    """Rebuild the canonical-form graph from a code string."""
    head, _, body = text.partition(":")
    order_s, _, rest = body.partition(":")
    ncol = int(head[1:])
    order = int(order_s)
    rows = []
    for chunk in rest.split("|"):
        rows.append(tuple([0] + [int(x) for x in chunk.split(",")]))
    if len(rows) != ncol:
        raise ValueError("colour count mismatch in code string")
    g = ColouredGraph(ncol, order, tuple(rows))
    return g


def canonical_form(g):
    """The canonical representative: vertices renumbered and colours
    permuted so that the stored matchings spell the code itself."""
    seq, (root, pi) = min_code_seq(g)
    order = g.order
    rows = []
    for c in range(g.n_plus_one):
        rows.append(tuple([0] + list(seq[c * order : (c + 1) * order])))
    return ColouredGraph(g.n_plus_one, order, tuple(rows), _validated=True)


def canonical_numbering(g):
    """The old->new vertex renumbering used by the canonical form (defines
    the v_i of the classification moves)."""
    seq, (root, pi) = min_code_seq(g)
    num, _old = _numbering(g.matchings, g.order, root, pi)
    return num


def fixed_colour_key(g):
    """Canonical key under vertex relabelling only (colours fixed): minimum
    emitted sequence over the roots with the identity colour order.  Two
    graphs get the same key iff they differ by a vertex renaming."""
    pi = tuple(range(g.n_plus_one))
    best = None
    for root in range(1, g.order + 1):
        num, old = _numbering(g.matchings, g.order, root, pi)
        seq = _emit(g.matchings, g.order, pi, num, old)
        if best is None or seq < best:
            best = seq
    return tuple(best)


def colour_isomorphic(g1, g2):
    if g1.n_plus_one != g2.n_plus_one or g1.order != g2.order:
        return False
    return code(g1) == code(g2)


def brute_force_isomorphic(g1, g2):
    """Exhaustive vertex-bijection x colour-permutation search; oracle used
    by the tests, independent of the code machinery."""
    if g1.n_plus_one != g2.n_plus_one or g1.order != g2.order:
        return False
    order = g1.order
    ncol = g1.n_plus_one
    m1, m2 = g1.matchings, g2.matchings
    for pi in _perms(ncol):
        # map vertex 1 of g1 to every vertex of g2 and propagate
        for start in range(1, order + 1):
            phi = [0] * (order + 1)
            phi[1] = start
            stack = [1]
            ok = True
            seen = 1
            while stack and ok:
                v = stack.pop()
                for c in range(ncol):
                    w = m1[c][v]
                    img = m2[pi[c]][phi[v]]
                    if phi[w] == 0:
                        if img in phi:
                            ok = False
                            break
                        phi[w] = img
                        seen += 1
                        stack.append(w)
                    elif phi[w] != img:
                        ok = False
                        break
            if ok and seen == order:
                return True
    return False
