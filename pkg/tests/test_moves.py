import random

import pytest

from gemcat.code import code
from gemcat.errors import (
    NotADipole,
    NotAFlipConfiguration,
    NotRhoPair,
    SharedVertex,
)
from gemcat.graph import build, standard_sphere
from gemcat.moves import (
    Dipole,
    RhoPair,
    eliminate_dipole,
    find_dipoles,
    find_rho_pairs,
    first_dipole,
    insert_blob,
    reduce_gem,
    s_flip,
    switch_edges,
    switch_rho_pair,
    t_flip,
)
from gemcat.topology import euler_characteristic

from conftest import scramble


@pytest.fixture
def order4_gem():
    # order-4 gem of S^3: no dipoles, but rho_2- and rho_3-pairs
    return build(4, [[2, 1, 4, 3], [2, 1, 4, 3], [4, 3, 2, 1], [3, 4, 1, 2]])


@pytest.fixture
def doubled_gem():
    # order-4 gem of S^3 with two doubled colour classes: four 2-dipoles
    return build(4, [[2, 1, 4, 3], [2, 1, 4, 3], [3, 4, 1, 2], [3, 4, 1, 2]])


def test_standard_sphere_has_no_moves():
    g = standard_sphere(5)
    assert find_dipoles(g) == []
    assert first_dipole(g) is None
    for s in (1, 2, 3, 4):
        assert find_rho_pairs(g, s) == []


def test_find_dipoles_order4(order4_gem, doubled_gem):
    assert find_dipoles(order4_gem) == []
    dips = find_dipoles(doubled_gem)
    assert Dipole(1, 2, (0, 1)) in dips
    assert all(d.h == 2 for d in dips)
    assert find_dipoles(doubled_gem, h=3) == []


def test_eliminate_dipole_reduces_to_sphere(doubled_gem):
    d = Dipole(1, 2, (0, 1))
    g = eliminate_dipole(doubled_gem, d)
    assert g.order == 2
    assert g == standard_sphere(4)


def test_eliminate_rejects_non_dipole(doubled_gem):
    with pytest.raises(NotADipole):
        eliminate_dipole(doubled_gem, Dipole(1, 2, (0, 2)))
    with pytest.raises(NotADipole):
        eliminate_dipole(doubled_gem, Dipole(1, 3, (3,)))  # same residue


def test_blob_insert_then_first_dipole_roundtrip():
    g = standard_sphere(5)
    h = insert_blob(g, 1, 0)
    assert h.order == 4
    # both vertex pairs of the doubled square are 4-dipoles now
    d = first_dipole(h)
    assert d is not None and d.h == 4
    assert code(eliminate_dipole(h, d)) == code(g)
    # blob insertion leaves the graph non-contracted (its own hat-0 residue)
    assert not h.is_contracted()


def test_blob_roundtrip_code_identity(s3_order8, sample14, rng):
    """Blob insertion followed by elimination of the created n-dipole is a
    Code-identity; >=1000 round-trips across orders 8 and 14."""
    checks = 0
    for g in s3_order8 + sample14:
        base = code(g)
        n_trials = 18 if g.n_plus_one == 5 else 4
        for _ in range(n_trials):
            v = rng.randrange(1, g.order + 1)
            c = rng.randrange(g.n_plus_one)
            h = insert_blob(g, v, c)
            d = Dipole(
                g.order + 1,
                g.order + 2,
                tuple(x for x in range(g.n_plus_one) if x != c),
            )
            assert code(eliminate_dipole(h, d)) == base
            checks += 1
    assert checks >= 1000


def test_switch_edges_double_switch_roundtrip(order4_gem):
    g = order4_gem
    e, f = (1, 2), (3, 4)
    for pairing in (0, 1):
        h = switch_edges(g, 0, e, f, pairing)
        # switching the two new edges back with the same pairing restores g
        if pairing == 0:
            back = switch_edges(h, 0, (1, 3), (2, 4), 0)
        else:
            back = switch_edges(h, 0, (1, 4), (2, 3), 0)
        assert back == g


def test_double_switch_code_identity_sweep(sample14, rng):
    """Switching two disjoint c-edges and then switching the two new c-edges
    back (same pairing orientation) is a Code-identity; >=1000 round-trips."""
    checks = 0
    for g in sample14:
        base = code(g)
        for _ in range(17):
            c = rng.randrange(g.n_plus_one)
            m = g.matchings[c]
            edges = [(v, m[v]) for v in range(1, g.order + 1) if v < m[v]]
            e = rng.choice(edges)
            f = rng.choice([x for x in edges if not set(x) & set(e)])
            for pairing in (0, 1):
                h = switch_edges(g, c, e, f, pairing)
                if pairing == 0:
                    back = switch_edges(h, c, (e[0], f[0]), (e[1], f[1]), 0)
                else:
                    back = switch_edges(h, c, (e[0], f[1]), (e[1], f[0]), 0)
                assert back == g and code(back) == base
                checks += 1
    assert checks >= 1000


def test_switch_edges_shared_vertex_rejected(order4_gem):
    with pytest.raises(SharedVertex):
        switch_edges(order4_gem, 0, (1, 2), (2, 1), 0)


def test_rho_pairs_order4(order4_gem):
    rps = find_rho_pairs(order4_gem, 2)
    assert RhoPair(0, (1, 2), (3, 4), 2) in rps
    assert RhoPair(2, (1, 4), (2, 3), 3) in find_rho_pairs(order4_gem, 3)
    assert find_rho_pairs(order4_gem, 1) == []


def test_switch_rho_pair_validations(order4_gem):
    with pytest.raises(NotRhoPair):
        switch_rho_pair(order4_gem, RhoPair(0, (1, 2), (3, 4), 1))
    with pytest.raises(NotRhoPair):
        switch_rho_pair(order4_gem, RhoPair(0, (1, 2), (3, 4), 3))


def test_rho2_switch_preserves_sphere(doubled_gem):
    for rp in find_rho_pairs(doubled_gem, 2):
        h, pairing = switch_rho_pair(doubled_gem, rp)
        assert h.order == 4
        r, ho, hn = reduce_gem(h)
        assert (r.order, ho, hn) == (2, 0, 0)


def test_s_flip_requires_dipole(order4_gem):
    # the rigid order-4 gem has no dipoles at all, so no edge is flippable
    with pytest.raises(NotAFlipConfiguration):
        s_flip(order4_gem, 0, (1, 2), (3, 4))


def test_s_flip_then_t_flip_roundtrip():
    g = insert_blob(insert_blob(standard_sphere(5), 1, 0), 1, 1)
    # blob pair (5,6) over colour-1 edge at 1; flip its colour-0 edge with
    # the disjoint colour-0 edge at 3 if configuration admits it
    dips = find_dipoles(g)
    assert dips
    target = next(d for d in dips if d.h == 4)
    e = (target.u, target.w)
    c = target.colours[0]
    m = g.matchings[c]
    f_candidates = [
        (v, m[v])
        for v in range(1, g.order + 1)
        if v < m[v] and not {v, m[v]} & set(e)
    ]
    h = s_flip(g, c, e, f_candidates[0])
    # the dipole lost colour c
    joined = tuple(d for d in range(5) if h.matchings[d][e[0]] == e[1])
    assert c not in joined and len(joined) == 3
    r, ho, hn = reduce_gem(h)
    assert (r.order, ho, hn) == (2, 0, 0)


def test_t_flip_grows_dipole(doubled_gem):
    # (1,2) is a {0,1}-dipole; colour-2 edges (1,3) and (2,4) are incident
    h = t_flip(doubled_gem, 2, (1, 3), (2, 4))
    joined = tuple(d for d in range(4) if h.matchings[d][1] == 2)
    assert joined == (0, 1, 2)
    assert Dipole(1, 2, (0, 1, 2)) in find_dipoles(h)


def test_reduce_scrambled_spheres(rng):
    for nplus in (4, 5):
        g = standard_sphere(nplus)
        for _ in range(20):
            h = scramble(g, rng, steps=5)
            r, ho, hn = reduce_gem(h)
            assert (r.order, ho, hn) == (2, 0, 0)


def test_reduce_preserves_chi_and_bipartiteness_properties(s3_order8, rng):
    """chi- and bipartiteness-invariance of every move, >=1000 assertions."""
    checks = 0
    for g in s3_order8 + [standard_sphere(5)]:
        chi = euler_characteristic(g)
        bip = g.is_bipartite()
        for trial in range(18):
            h = g
            for _ in range(4):
                choice = rng.random()
                if choice < 0.45:
                    h = insert_blob(
                        h, rng.randrange(1, h.order + 1), rng.randrange(h.n_plus_one)
                    )
                elif choice < 0.8 and find_dipoles(h):
                    h = eliminate_dipole(h, rng.choice(find_dipoles(h)))
                else:
                    rps = find_rho_pairs(h, h.n_plus_one - 2)
                    if rps:
                        h, _ = switch_rho_pair(h, rng.choice(rps))
                assert euler_characteristic(h) == chi
                assert h.is_bipartite() == bip
                checks += 2
    assert checks >= 1000
