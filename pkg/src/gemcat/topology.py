"""Topological invariants and recognition predicates.

Everything here is a function of the residue counts: Euler characteristic,
rank bound for the fundamental group, second Betti number (under a
simple-connectivity certificate), regular genus per cyclic colour
permutation, 3-sphere recognition, and the manifold / simple-crystallization
predicates.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import combinations, permutations

from .errors import (
    NonBipartite,
    NotAManifoldGem,
    NotContracted,
    NotSimplyConnectedCertificate,
    OrderTooLarge,
)
from .graph import ColouredGraph, _components
from .moves import reduce_gem

S3_RECOGNITION_ORDER_LIMIT = 22  # only the order-2 rigid S^3 crystallization exists below this


def euler_characteristic(g, census=None):
    """Euler characteristic of the represented pseudo-complex, from the
    alternating residue-count formula (valid for any (n+1)-coloured graph)."""
    n = g.n_plus_one - 1
    if census is None:
        census = g.census()
    chi = (-1) ** (n - 1) * g.p * (n - 1)
    for h in range(2, n + 1):
        total = sum(v for b, v in census.counts.items() if len(b) == h)
        chi += (-1) ** (n - h) * total
    return chi


def euler_characteristic_contracted(g, census=None):
    """The crystallization form of the Euler characteristic for n = 4:
    chi = 5 - sum g_ijk + sum g_ij - 3p."""
    assert g.n_plus_one == 5
    if census is None:
        census = g.census()
    return 5 - census.triple_total() + census.pair_total() - 3 * g.p


def rank_bound(g, census=None):
    """Upper bound for the rank of the fundamental group:
    min { g_B - 1 : #B = n-1 }."""
    if not g.is_contracted():
        raise NotContracted("rank bound is defined for crystallizations")
    n = g.n_plus_one - 1
    if census is None:
        census = g.census()
    return min(v for b, v in census.counts.items() if len(b) == n - 1) - 1


def betti2(g, census=None):
    """Second Betti number chi - 2; valid only under the rank-0 certificate
    on a bipartite crystallization (simply-connected case)."""
    if census is None:
        census = g.census()
    if rank_bound(g, census) != 0 or not g.is_bipartite():
        raise NotSimplyConnectedCertificate(
            "beta_2 requires a bipartite crystallization with rank bound 0"
        )
    return euler_characteristic(g, census) - 2


def cyclic_permutations(n):
    """The cyclic permutations of the n+1 colours with last entry n,
    one representative per reversal class; 12 of them for n = 4."""
    out = []
    seen = set()
    for head in permutations(range(n)):
        rev = tuple(reversed(head))
        if rev in seen:
            continue
        seen.add(head)
        out.append(head + (n,))
    return out


def genus_for_permutation(g, eps, census=None):
    """rho_eps from the cycle-count formula
    sum_i g_{eps_i eps_{i+1}} + (1-n) p = 2 - 2 rho_eps."""
    n = g.n_plus_one - 1
    if census is None:
        census = g.census()
    total = 0
    for i in range(len(eps)):
        a, b = eps[i], eps[(i + 1) % len(eps)]
        total += census.g(a, b)
    val = 2 - total - (1 - n) * g.p
    assert val % 2 == 0
    return val // 2


def regular_genus(g, census=None):
    """Minimum of rho_eps over the cyclic colour permutations, plus the full
    permutation -> genus map.  Bipartite crystallizations only."""
    if not g.is_bipartite():
        raise NonBipartite("regular genus is computed for bipartite graphs only")
    if census is None:
        census = g.census()
    table = {}
    for eps in cyclic_permutations(g.n_plus_one - 1):
        table[eps] = genus_for_permutation(g, eps, census)
    return min(table.values()), table


def residue_genus(g, eps, i, census=None):
    """Regular genus of the residue missing colour eps_i, with respect to
    the cyclic permutation induced on the remaining colours.

    For a crystallization the residue is connected and spans all vertices,
    so its bicoloured-cycle counts coincide with the full graph's.
    """
    if not g.is_bipartite():
        raise NonBipartite("regular genus is computed for bipartite graphs only")
    if census is None:
        census = g.census()
    n = g.n_plus_one - 1
    sub = tuple(eps[j] for j in range(len(eps)) if j != i % len(eps))
    total = 0
    for j in range(len(sub)):
        a, b = sub[j], sub[(j + 1) % len(sub)]
        total += census.g(a, b)
    val = 2 - total - (1 - (n - 1)) * g.p
    assert val % 2 == 0
    return val // 2


def is_simple(g, census=None):
    """Simple crystallization: one residue per (n-1)-subset of colours."""
    if not g.is_contracted():
        raise NotContracted("simplicity is defined for crystallizations")
    n = g.n_plus_one - 1
    if census is None:
        census = g.census()
    return all(v == 1 for b, v in census.counts.items() if len(b) == n - 1)


def residue_subgraph(g, missing_colour, component):
    """Extract one component of the subgraph missing `missing_colour` as a
    standalone n-coloured graph (colours renumbered ascending)."""
    cols = tuple(c for c in range(g.n_plus_one) if c != missing_colour)
    vmap = {v: i + 1 for i, v in enumerate(component)}
    rows = []
    for c in cols:
        row = [0] * (len(component) + 1)
        for v in component:
            row[vmap[v]] = vmap[g.matchings[c][v]]
        rows.append(tuple(row))
    return ColouredGraph(len(cols), len(component), tuple(rows), _validated=True)


def _is_surface_sphere_union(g4):
    """Every 3-residue of the 4-coloured graph is a 2-sphere gem
    (component-wise Euler count 2)."""
    for cols in combinations(range(4), 3):
        for comp in _components(g4.matchings, g4.order, cols):
            cycles = 0
            for a, b in combinations(cols, 2):
                seen = set()
                for v in comp:
                    if v not in seen:
                        cycles += 1
                        w = v
                        while w not in seen:
                            seen.add(w)
                            w = g4.matchings[a][w]
                            seen.add(w)
                            w = g4.matchings[b][w]
            if cycles - len(comp) // 2 != 2:
                return False
    return True


def recognize_s3(g4):
    """Decide whether a 4-coloured closed-3-manifold gem represents the
    3-sphere, by reducing to rigid dipole-free form: below order 24 the
    standard order-2 graph is the only rigid crystallization of S^3."""
    if g4.n_plus_one != 4:
        raise NotAManifoldGem("3-sphere recognition expects a 4-coloured graph")
    if g4.order > S3_RECOGNITION_ORDER_LIMIT:
        raise OrderTooLarge(
            f"recognition is validated up to order {S3_RECOGNITION_ORDER_LIMIT}"
        )
    if not _is_surface_sphere_union(g4):
        raise NotAManifoldGem("some 3-residue is not a 2-sphere")
    reduced, h_or, h_non = reduce_gem(g4)
    return reduced.order == 2 and h_or == 0 and h_non == 0


def is_manifold_crystallization(g, census=None):
    """True iff every residue missing one colour represents S^3 (the gem
    criterion for |K| being a closed 4-manifold, stated for
    crystallizations)."""
    assert g.n_plus_one == 5
    for c in range(5):
        cols = tuple(d for d in range(5) if d != c)
        for comp in _components(g.matchings, g.order, cols):
            sub = residue_subgraph(g, c, comp)
            if not recognize_s3(sub):
                return False
    return True


@dataclass(frozen=True)
class InvariantRecord:
    order: int
    bipartite: bool
    chi: int
    rank_bound: int
    beta2: object  # int, or None without a simple-connectivity certificate
    regular_genus: object  # int, or None for the non-bipartite case
    genus_by_permutation: object
    simple: bool


def invariant_record(g):
    """All invariants of one crystallization in a single pass."""
    census = g.census()
    chi = euler_characteristic(g, census)
    rk = rank_bound(g, census)
    bip = g.is_bipartite()
    b2 = chi - 2 if (rk == 0 and bip) else None
    if bip:
        genus, table = regular_genus(g, census)
    else:
        genus, table = None, None
    return InvariantRecord(
        order=g.order,
        bipartite=bip,
        chi=chi,
        rank_bound=rk,
        beta2=b2,
        regular_genus=genus,
        genus_by_permutation=table,
        simple=is_simple(g, census),
    )


def record_line(code_str, rec):
    """One JSON record per line, keyed by canonical code; deterministic."""
    payload = {
        "code": code_str,
        "order": rec.order,
        "bipartite": rec.bipartite,
        "chi": rec.chi,
        "rank_bound": rec.rank_bound,
        "beta2": rec.beta2,
        "genus": rec.regular_genus,
        "simple": rec.simple,
    }
    return json.dumps(payload, sort_keys=True)


def parse_record_line(line):
    return json.loads(line)
