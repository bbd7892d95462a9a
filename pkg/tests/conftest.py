"""Shared fixtures: disk-cached catalogues (order-14 generation is a
multi-minute job; the cache under tests/_catalogue_cache makes repeat runs
cheap — delete the directory to force regeneration from scratch) and a
seeded random-gem scrambler for the property suites."""

import os
import random

import pytest

from gemcat.code import code, parse_code
from gemcat.generation import generate_catalogue, generate_s3
from gemcat.graph import standard_sphere
from gemcat.moves import find_dipoles, first_dipole, eliminate_dipole, insert_blob

CACHE_DIR = os.path.join(os.path.dirname(__file__), "_catalogue_cache")


def _cached_codes(name, builder):
    path = os.path.join(CACHE_DIR, name)
    if os.path.exists(path):
        with open(path) as fh:
            return [ln.strip() for ln in fh if ln.strip()]
    graphs = builder()
    os.makedirs(CACHE_DIR, exist_ok=True)
    codes = sorted(code(g) for g in graphs)
    tmp = path + ".tmp"
    with open(tmp, "w") as fh:
        fh.write("\n".join(codes) + "\n" if codes else "")
    os.replace(tmp, path)
    return codes


def s3_codes(order):
    return _cached_codes(f"s{order}.codes", lambda: generate_s3(order))


def catalogue_codes(order, jobs=None):
    bip_path = f"c{order}.bipartite.codes"
    non_path = f"c{order}.nonbipartite.codes"
    if not (
        os.path.exists(os.path.join(CACHE_DIR, bip_path))
        and os.path.exists(os.path.join(CACHE_DIR, non_path))
    ):
        seeds = [parse_code(c) for c in s3_codes(order)]
        bip, non = generate_catalogue(order, seeds=seeds, jobs=jobs or os.cpu_count())
        _cached_codes(bip_path, lambda: bip)
        _cached_codes(non_path, lambda: non)
    return (
        _cached_codes(bip_path, None),
        _cached_codes(non_path, None),
    )


@pytest.fixture(scope="session")
def s3_order8():
    return [parse_code(c) for c in s3_codes(8)]


@pytest.fixture(scope="session")
def s3_order10():
    return [parse_code(c) for c in s3_codes(10)]


@pytest.fixture(scope="session")
def cp2():
    bip, _ = catalogue_codes(8)
    assert len(bip) == 1
    return parse_code(bip[0])


@pytest.fixture(scope="session")
def catalogue14():
    bip, non = catalogue_codes(14)
    return [parse_code(c) for c in bip], [parse_code(c) for c in non]


@pytest.fixture(scope="session")
def sample14(catalogue14):
    """A deterministic 60-member sample of C^(14) for the heavier sweeps."""
    bip, _ = catalogue14
    rng = random.Random(2024)
    return rng.sample(bip, 60)


CLASSIFY_BUDGET = 2000
CLASSIFY_PASSES = 8


def classification_inputs():
    """The classification instance for the acceptance gate: the full
    order-14 catalogue, the order-8 member, the order-2 graph, and both
    connected-sum variants of the order-8 member with itself (gluing
    vertices in the same / opposite bipartition classes)."""
    from gemcat.graph import connected_sum

    bip, non = catalogue_codes(14)
    assert non == []
    c8, _ = catalogue_codes(8)
    cp2 = parse_code(c8[0])
    cls = cp2.bipartition()
    v_same = next(v for v in range(1, cp2.order + 1) if cls[v] == cls[1])
    v_opp = next(v for v in range(1, cp2.order + 1) if cls[v] != cls[1])
    graphs = [parse_code(c) for c in bip] + [
        cp2,
        standard_sphere(5),
        connected_sum(cp2, 1, cp2, v_same),
        connected_sum(cp2, 1, cp2, v_opp),
    ]
    return graphs


def classification_partition():
    """The cached partition of `classification_inputs` (a multi-hour job on
    one core; delete partition14.json to recompute).  Returns a dict with
    the canonical input codes, the union-find root of each input, and the
    number of passes the run needed."""
    import json

    from gemcat.classification import classify

    path = os.path.join(CACHE_DIR, "partition14.json")
    graphs = classification_inputs()
    inputs = [code(g) for g in graphs]
    if os.path.exists(path):
        with open(path) as fh:
            data = json.load(fh)
        if data["inputs"] == inputs and data["budget"] == CLASSIFY_BUDGET:
            return data
    part = classify(
        graphs, budget=CLASSIFY_BUDGET, passes=CLASSIFY_PASSES, jobs=os.cpu_count()
    )
    data = {
        "inputs": inputs,
        "budget": CLASSIFY_BUDGET,
        "passes_done": part.passes_done,
        "roots": [part.find(i) for i in range(len(inputs))],
    }
    tmp = path + ".tmp"
    with open(tmp, "w") as fh:
        json.dump(data, fh)
    os.replace(tmp, path)
    return data


def scramble(g, rng, steps=6):
    """A random blob/eliminate walk: returns a gem of the same manifold
    with a different combinatorial presentation."""
    for _ in range(steps):
        if rng.random() < 0.6 or not find_dipoles(g):
            v = rng.randrange(1, g.order + 1)
            c = rng.randrange(g.n_plus_one)
            g = insert_blob(g, v, c)
        else:
            dips = find_dipoles(g)
            g = eliminate_dipole(g, rng.choice(dips))
    return g


@pytest.fixture()
def rng():
    return random.Random(17)


@pytest.fixture(scope="session")
def spheres():
    return standard_sphere(4), standard_sphere(5)
