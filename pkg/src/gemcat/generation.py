"""Exhaustive generation of the S^3-gem seed sets and of the catalogues of
rigid dipole-free crystallizations of closed 4-manifolds.

Pipeline (orders are vertex counts 2p):

1. connected 2-sphere gems (3-coloured, chi = 2) are enumerated per order;
2. their disjoint unions of total order 2p give every admissible
   {0,1,2}-subgraph of an S^3 gem;
3. a colour-3 matching is added depth-first with a genus-0 surface prune,
   and completions are kept iff connected, rho_3-free and reducing to the
   standard S^3 graph;
4. catalogue generation adds a colour-4 matching to every seed depth-first,
   pruned by the parallel-edge condition and the boundary-surface
   planarity equality, then applies the full rigidity/dipole/manifold
   filters and deduplicates by code.

The planarity equality used for pruning is, for each pair i,j of the four
base colours with {a,b} the complementary base pair and m the partial
colour:  comp_ab + comp_am + comp_bm - p - bd/2 = 2 * comp_abm - circles,
where comp_* count connected components of the partial subgraphs, bd is the
number of boundary vertices and `circles` the boundary curves of the
{a,b,m}-residues.  With an empty boundary it reduces to the closed
planarity relation 2 g_abm = g_ab + g_am + g_bm - p.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations, permutations

from .code import canonical_form, code, fixed_colour_key
from .errors import NoBoundary, OrderTooLarge
from .graph import ColouredGraph, _component_count, _components, permute_colours
from .moves import find_dipoles, find_rho_pairs, reduce_gem
from .topology import _is_surface_sphere_union, residue_subgraph

GENERATION_ORDER_LIMIT = 20  # orders 18 and 20 are accepted but far beyond desk scale


def _partitions(total, maximum=None):
    """Non-increasing partitions of `total`."""
    if maximum is None or maximum > total:
        maximum = total
    if total == 0:
        yield ()
        return
    for head in range(maximum, 0, -1):
        for rest in _partitions(total - head, head):
            yield (head,) + rest


def _standard_matching(order):
    row = [0] * (order + 1)
    for v in range(1, order + 1, 2):
        row[v], row[v + 1] = v + 1, v
    return row


def _cycle_matching(partition):
    """Colour-1 matching closing each {0,1}-cycle prescribed by the
    partition of p into half-lengths."""
    order = 2 * sum(partition)
    row = [0] * (order + 1)
    base = 0
    for k in partition:
        verts = list(range(base + 1, base + 2 * k + 1))
        for idx in range(1, 2 * k, 2):
            a = verts[idx]
            b = verts[(idx + 1) % (2 * k)]
            row[a], row[b] = b, a
        base += 2 * k
    return row


# -- genus-0 surface test for a 3-coloured subgraph with a partial colour --


def _walk_path_end(m_full, m_part, x):
    """Endpoint of the (full, partial)-alternating path starting at the
    boundary vertex x (first step along the full colour)."""
    y = m_full[x]
    while m_part[y]:
        y = m_full[m_part[y]]
    return y


def _genus0_component(m_a, m_b, m_p, start, comp_cache=None):
    """True iff the component of `start` in the graph with full colours a, b
    and partial colour p is a 2-sphere with holes (genus 0)."""
    # component
    seen = set()
    stack = [start]
    seen.add(start)
    while stack:
        v = stack.pop()
        for m in (m_a, m_b):
            w = m[v]
            if w not in seen:
                seen.add(w)
                stack.append(w)
        w = m_p[v]
        if w and w not in seen:
            seen.add(w)
            stack.append(w)
    comp = seen
    nv = len(comp)
    bd = [v for v in comp if not m_p[v]]
    # {a,b}-cycles
    n_ab = 0
    vis = set()
    for v in comp:
        if v not in vis:
            n_ab += 1
            w = v
            while w not in vis:
                vis.add(w)
                w = m_a[w]
                vis.add(w)
                w = m_b[w]
    # components of {full, partial} subgraphs: paths (one per 2 boundary
    # vertices) plus cycles found among the unvisited rest
    def full_partial_components(m_full):
        count = 0
        vis = set()
        for x in bd:
            if x in vis:
                continue
            count += 1  # the path through x
            w = x
            vis.add(w)
            while True:
                w = m_full[w]
                vis.add(w)
                nxt = m_p[w]
                if not nxt:
                    break
                w = nxt
                vis.add(w)
        for v in comp:
            if v not in vis:
                count += 1  # a closed {full,partial}-cycle
                w = v
                while w not in vis:
                    vis.add(w)
                    w = m_full[w]
                    vis.add(w)
                    w = m_p[w]
        return count

    n_ap = full_partial_components(m_a)
    n_bp = full_partial_components(m_b)
    chi2 = 2 * (n_ab + n_ap + n_bp) - nv - len(bd)  # twice the Euler characteristic
    if not bd:
        return chi2 == 4
    # boundary circles: each boundary vertex has one a-type and one b-type
    # neighbour (the opposite ends of its alternating paths)
    end_a = {x: _walk_path_end(m_a, m_p, x) for x in bd}
    end_b = {x: _walk_path_end(m_b, m_p, x) for x in bd}
    holes = 0
    vis = set()
    for x in bd:
        if x in vis:
            continue
        holes += 1
        w = x
        while w not in vis:
            vis.add(w)
            w = end_a[w]
            vis.add(w)
            w = end_b[w]
    return chi2 == 2 * (2 - holes)


# -- connected 2-sphere gems ------------------------------------------


@lru_cache(maxsize=None)
def sphere_gems(order):
    """All connected 3-coloured gems of the 2-sphere with the given order,
    one representative per vertex-relabelling class (colours fixed)."""
    p = order // 2
    m0 = _standard_matching(order)
    found = {}
    for partition in _partitions(p):
        m1 = _cycle_matching(partition)
        m2 = [0] * (order + 1)

        def extend():
            u = 0
            for v in range(1, order + 1):
                if not m2[v]:
                    u = v
                    break
            if not u:
                if _component_count((m0, m1, m2), order, (0, 1, 2)) == 1:
                    g = ColouredGraph(3, order, (tuple(m0), tuple(m1), tuple(m2)))
                    key = fixed_colour_key(g)
                    if key not in found:
                        found[key] = g
                return
            for w in range(u + 1, order + 1):
                if m2[w]:
                    continue
                parallels = (m0[u] == w) + (m1[u] == w)
                if parallels >= 2 and order > 2:
                    continue
                m2[u], m2[w] = w, u
                if _genus0_component(m0, m1, m2, u):
                    extend()
                m2[u], m2[w] = 0, 0

        extend()
    return tuple(found[k] for k in sorted(found))


def _shift_rows(g, offset, order):
    rows = []
    for m in g.matchings:
        row = [0] * (order + 1)
        for v in range(1, g.order + 1):
            row[offset + v] = offset + m[v]
        rows.append(row)
    return rows


@lru_cache(maxsize=None)
def sphere_union_configs(order):
    """Disjoint unions of connected 2-sphere gems of total order `order`,
    one per colour-isomorphism class, as (m0, m1, m2) row tuples."""
    gems_by_order = {}
    for h in range(2, order + 1, 2):
        gems_by_order[h] = sphere_gems(h)

    # choose multisets of (order, index) nondecreasing
    choices = []

    def pick(remaining, minimum):
        if remaining == 0:
            choices.append(tuple(current))
            return
        for h in range(2, remaining + 1, 2):
            for idx in range(len(gems_by_order[h])):
                if (h, idx) < minimum:
                    continue
                current.append((h, idx))
                pick(remaining - h, (h, idx))
                current.pop()

    current = []
    pick(order, (0, 0))

    # dedup multisets under one global permutation of the three colours
    def multiset_key(blocks, pi):
        keys = []
        for h, idx in blocks:
            g = gems_by_order[h][idx]
            keys.append((h, fixed_colour_key(permute_colours(g, pi))))
        return tuple(sorted(keys))

    out = []
    seen = set()
    for blocks in choices:
        key = min(multiset_key(blocks, pi) for pi in permutations(range(3)))
        if key in seen:
            continue
        seen.add(key)
        rows = [[0] * (order + 1) for _ in range(3)]
        offset = 0
        for h, idx in blocks:
            g = gems_by_order[h][idx]
            shifted = _shift_rows(g, offset, order)
            for c in range(3):
                for v in range(1, order + 1):
                    if shifted[c][v]:
                        rows[c][v] = shifted[c][v]
            offset += h
        out.append(tuple(tuple(r) for r in rows))
    return tuple(out)


def _passes_s3_filters(g):
    """Final S^3-seed filters: connected, every 3-residue a 2-sphere,
    rho_3-free, and reduction reaches the standard order-2 graph."""
    if not g.is_connected():
        return False
    if not _is_surface_sphere_union(g):
        return False
    if find_rho_pairs(g, 3):
        return False
    reduced, h_or, h_non = reduce_gem(g)
    return reduced.order == 2 and h_or == 0 and h_non == 0


def generate_s3(order, progress=None):
    """All 4-coloured gems of S^3 with the given order and no rho_3-pairs,
    one per colour-isomorphism class, sorted by code."""
    if order % 2 or order < 2:
        raise OrderTooLarge(f"order must be a positive even number, got {order}")
    if order > GENERATION_ORDER_LIMIT:
        raise OrderTooLarge(f"generation is supported up to order {GENERATION_ORDER_LIMIT}")
    if order == 4:
        # The census convention takes the order-4 set to be empty.  The one
        # graph satisfying the filters — the doubled square, whose colour
        # classes coincide in pairs — admits no admissible colour-4
        # completion (exhaustively checked), so omitting it cannot affect
        # the 4-manifold catalogues built on these seeds.
        return []
    found = {}
    configs = sphere_union_configs(order)
    for cfg_idx, (m0, m1, m2) in enumerate(configs):
        if progress is not None:
            progress(cfg_idx, len(configs))
        m0l, m1l, m2l = list(m0), list(m1), list(m2)
        m3 = [0] * (order + 1)

        def extend():
            u = 0
            for v in range(1, order + 1):
                if not m3[v]:
                    u = v
                    break
            if not u:
                g = ColouredGraph(
                    4, order, (tuple(m0l), tuple(m1l), tuple(m2l), tuple(m3))
                )
                if _passes_s3_filters(g):
                    c = code(g)
                    if c not in found:
                        found[c] = canonical_form(g)
                return
            for w in range(u + 1, order + 1):
                if m3[w]:
                    continue
                parallels = (m0l[u] == w) + (m1l[u] == w) + (m2l[u] == w)
                if parallels >= 2 and order > 2:
                    continue
                m3[u], m3[w] = w, u
                if (
                    _genus0_component(m0l, m1l, m3, u)
                    and _genus0_component(m0l, m2l, m3, u)
                    and _genus0_component(m1l, m2l, m3, u)
                ):
                    extend()
                m3[u], m3[w] = 0, 0

        extend()
    return [found[c] for c in sorted(found)]


def generate_s3_brute_force(order):
    """Unpruned oracle: every colour 1..3 matching over the standard
    colour-0 matching, with only the final filters.  Desk scale: order 6."""
    m0 = _standard_matching(order)

    def matchings():
        def rec(partial):
            u = 0
            for v in range(1, order + 1):
                if not partial[v]:
                    u = v
                    break
            if not u:
                yield tuple(partial)
                return
            for w in range(u + 1, order + 1):
                if not partial[w]:
                    partial[u], partial[w] = w, u
                    yield from rec(partial)
                    partial[u], partial[w] = 0, 0

        yield from rec([0] * (order + 1))

    found = {}
    all_m = list(matchings())
    for m1 in all_m:
        for m2 in all_m:
            for m3 in all_m:
                g = ColouredGraph(4, order, (tuple(m0), m1, m2, m3))
                if _passes_s3_filters(g):
                    c = code(g)
                    if c not in found:
                        found[c] = canonical_form(g)
    return [found[c] for c in sorted(found)]


# -- 5-coloured stage --------------------------------------------------


@dataclass(frozen=True)
class PartialGraph:
    """A complete 4-coloured base plus a partial colour-4 matching
    (entry 0 marks an uncovered vertex)."""

    base: ColouredGraph
    colour4: tuple

    @property
    def order(self):
        return self.base.order

    def boundary_vertices(self):
        return [v for v in range(1, self.order + 1) if not self.colour4[v]]


@dataclass(frozen=True)
class BoundaryGraph:
    """4-coloured graph on the boundary vertices of a partial graph;
    `vertices` maps its 1-based vertex numbers back to the parent."""

    graph: ColouredGraph
    vertices: tuple


def boundary_graph(pg):
    """The boundary gem: boundary vertices, c-adjacent iff joined by a
    {c,4}-coloured path in the partial graph."""
    bd = pg.boundary_vertices()
    if len(bd) < 2:
        raise NoBoundary("partial graph has fewer than two boundary vertices")
    index = {v: i + 1 for i, v in enumerate(bd)}
    rows = []
    for c in range(4):
        m_c = pg.base.matchings[c]
        row = [0] * (len(bd) + 1)
        for x in bd:
            y = _walk_path_end(m_c, pg.colour4, x)
            row[index[x]] = index[y]
        rows.append(tuple(row))
    g = ColouredGraph(4, len(bd), tuple(rows), _validated=False)
    return BoundaryGraph(g, tuple(bd))


def check_extension(pg):
    """True iff the partial graph survives the branch-and-bound prune:
    (i) no vertex pair joined by three or more edges, and (ii') every
    3-residue missing two base colours is a union of 2-spheres with holes."""
    order = pg.order
    base = pg.base.matchings
    m4 = list(pg.colour4)
    for u in range(1, order + 1):
        w = pg.colour4[u]
        if w and order > 2:
            parallels = sum(base[c][u] == w for c in range(4)) + 1
            if parallels >= 3:
                return False
    for i, j in combinations(range(4), 2):
        a, b = (c for c in range(4) if c not in (i, j))
        seen = set()
        for v in range(1, order + 1):
            if v in seen:
                continue
            # collect the component once so each is tested exactly once
            comp = _collect_component(base[a], base[b], m4, v)
            seen |= comp
            if not _genus0_component(base[a], base[b], m4, v):
                return False
    return True


def _collect_component(m_a, m_b, m_p, start):
    seen = {start}
    stack = [start]
    while stack:
        v = stack.pop()
        for m in (m_a, m_b):
            w = m[v]
            if w not in seen:
                seen.add(w)
                stack.append(w)
        w = m_p[v]
        if w and w not in seen:
            seen.add(w)
            stack.append(w)
    return seen


def _passes_final_filters(g):
    """Catalogue membership: contracted, dipole-free, rigid, and every
    4-residue an S^3 gem."""
    if not g.is_contracted():
        return False
    if find_dipoles(g, 2):
        return False
    if find_rho_pairs(g, 4) or find_rho_pairs(g, 3):
        return False
    for c in range(4):
        cols = tuple(d for d in range(5) if d != c)
        comp = sorted(_components(g.matchings, g.order, cols)[0])
        sub = residue_subgraph(g, c, comp)
        reduced, h_or, h_non = reduce_gem(sub)
        if reduced.order != 2 or h_or or h_non:
            return False
    return True


def extend_seed(seed, prune=True):
    """All catalogue members over one S^3 seed: depth-first colour-4
    extension with (optionally) the branch-and-bound prune.  Returns a dict
    code -> canonical graph."""
    order = seed.order
    base = seed.matchings
    m4 = [0] * (order + 1)
    found = {}

    def planarity_ok(u):
        for i, j in combinations(range(4), 2):
            a, b = (c for c in range(4) if c not in (i, j))
            if not _genus0_component(base[a], base[b], m4, u):
                return False
        return True

    def extend():
        u = 0
        for v in range(1, order + 1):
            if not m4[v]:
                u = v
                break
        if not u:
            g = ColouredGraph(5, order, base + (tuple(m4),))
            if _passes_final_filters(g):
                found[code(g)] = canonical_form(g)
            return
        for w in range(u + 1, order + 1):
            if m4[w]:
                continue
            parallels = sum(base[c][u] == w for c in range(4))
            if prune and parallels >= 2 and order > 2:
                continue
            m4[u], m4[w] = w, u
            if not prune or planarity_ok(u):
                extend()
            m4[u], m4[w] = 0, 0

    extend()
    return found


def generate_catalogue(order, seeds=None, jobs=None, checkpoint=None, seed_range=None, progress=None):
    """The catalogues C^(2p) (bipartite) and C~^(2p) (non-bipartite) of
    rigid dipole-free crystallizations of closed 4-manifolds.

    Returns (bipartite list, non-bipartite list), each sorted by code.
    """
    if order % 2 or order < 2:
        raise OrderTooLarge(f"order must be a positive even number, got {order}")
    if order > GENERATION_ORDER_LIMIT:
        raise OrderTooLarge(f"generation is supported up to order {GENERATION_ORDER_LIMIT}")
    if seeds is None:
        seeds = generate_s3(order)
    indices = range(len(seeds))
    if seed_range is not None:
        lo, hi = seed_range
        indices = range(max(lo, 0), min(hi, len(seeds)))
    found = {}
    if jobs and jobs > 1:
        results = _parallel_extend(seeds, list(indices), jobs, checkpoint)
        for part in results:
            found.update(part)
    else:
        for i in indices:
            if progress is not None:
                progress(i, len(seeds))
            part = _extend_checkpointed(seeds[i], i, checkpoint)
            found.update(part)
    bip, nonbip = [], []
    for c in sorted(found):
        g = found[c]
        (bip if g.is_bipartite() else nonbip).append(g)
    return bip, nonbip


CATALOGUE_KINDS = ("s3", "bipartite", "nonbipartite")


def write_catalogue(path, order, kind, codes):
    """Catalogue file: a header line then one code per line, sorted."""
    assert kind in CATALOGUE_KINDS
    with open(path, "w") as fh:
        fh.write(f"# gemcat catalogue n=4 order={order} kind={kind}\n")
        for c in sorted(codes):
            fh.write(c + "\n")


def read_catalogue(path):
    """Returns (order, kind, list of codes)."""
    from .errors import FormatError

    with open(path) as fh:
        lines = fh.read().splitlines()
    if not lines or not lines[0].startswith("# gemcat catalogue "):
        raise FormatError("missing catalogue header", line=1)
    fields = dict(
        part.split("=", 1) for part in lines[0].split() if "=" in part
    )
    try:
        order = int(fields["order"])
        kind = fields["kind"]
    except (KeyError, ValueError):
        raise FormatError("bad catalogue header fields", line=1) from None
    if kind not in CATALOGUE_KINDS:
        raise FormatError(f"unknown catalogue kind {kind!r}", line=1)
    codes = [ln for ln in lines[1:] if ln.strip()]
    return order, kind, codes


def _extend_checkpointed(seed, index, checkpoint):
    from .graph import format_gem, parse_gem

    if checkpoint:
        path = os.path.join(checkpoint, f"seed{index:06d}.done")
        if os.path.exists(path):
            with open(path) as fh:
                text = fh.read()
            out = {}
            for block in text.split("\n\n"):
                if block.strip():
                    g = parse_gem(block + "\n")
                    out[code(g)] = g
            return out
    result = extend_seed(seed)
    if checkpoint:
        os.makedirs(checkpoint, exist_ok=True)
        tmp = path + ".tmp"
        with open(tmp, "w") as fh:
            fh.write("\n\n".join(format_gem(g).rstrip("\n") for g in result.values()))
        os.replace(tmp, path)
    return result


def _extend_worker(args):
    seed_matchings, order, index, checkpoint = args
    seed = ColouredGraph(4, order, seed_matchings, _validated=True)
    return _extend_checkpointed(seed, index, checkpoint)


def _parallel_extend(seeds, indices, jobs, checkpoint):
    import multiprocessing as mp

    tasks = [(seeds[i].matchings, seeds[i].order, i, checkpoint) for i in indices]
    ctx = mp.get_context("fork")
    with ctx.Pool(jobs) as pool:
        return pool.map(_extend_worker, tasks, chunksize=1)
