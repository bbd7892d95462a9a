from itertools import combinations

import pytest

from gemcat.code import code
from gemcat.errors import FormatError, NotClosed, NotPure
from gemcat.graph import standard_sphere
from gemcat.ingest import (
    FacetComplex,
    barycentric_gem,
    crystallize,
    parse_facet_complex,
)
from gemcat.moves import reduce_gem
from gemcat.topology import euler_characteristic


def simplex_boundary(n):
    """The boundary complex of the (n+1)-simplex: an n-sphere with n+2
    vertices and n+2 facets."""
    verts = range(n + 2)
    facets = tuple(tuple(f) for f in combinations(verts, n + 1))
    return FacetComplex(n, n + 2, facets)


def test_validate_rejects_bad_complexes():
    with pytest.raises(NotPure):
        FacetComplex(2, 3, ((0, 1, 1),)).validate()
    # a single triangle is not closed
    with pytest.raises(NotClosed):
        FacetComplex(2, 3, ((0, 1, 2),)).validate()


def test_parse_facet_complex_errors():
    with pytest.raises(FormatError):
        parse_facet_complex("")
    with pytest.raises(FormatError):
        parse_facet_complex("2 3\n0 1 2\n")
    with pytest.raises(FormatError):
        parse_facet_complex("2 4 2\n0 1 2\n")


def test_parse_facet_complex_roundtrip():
    text = "2 4 4\n0 1 2\n0 1 3\n0 2 3\n1 2 3\n"
    K = parse_facet_complex(text)
    assert K.n == 2 and K.vertex_count == 4 and len(K.facets) == 4
    K.validate()


def test_barycentric_gem_of_triangle_boundary():
    # boundary of the tetrahedron: 2-sphere, 24 flags
    K = simplex_boundary(2)
    g = barycentric_gem(K)
    assert g.order == 24
    assert g.n_plus_one == 3
    assert g.is_bipartite()
    assert euler_characteristic(g) == 2


def test_barycentric_gem_of_s3_reduces_to_standard():
    K = simplex_boundary(3)
    g = barycentric_gem(K)
    assert g.order == 120 and g.n_plus_one == 4
    r, ho, hn = reduce_gem(g)
    assert (r.order, ho, hn) == (2, 0, 0)
    assert code(r) == code(standard_sphere(4))


def test_barycentric_gem_of_s4_crystallizes_to_standard():
    K = simplex_boundary(4)
    g = barycentric_gem(K)
    assert g.order == 720 and g.n_plus_one == 5
    assert g.is_bipartite()
    r, ho, hn = crystallize(g)
    assert (r.order, ho, hn) == (2, 0, 0)
    assert code(r) == code(standard_sphere(5))
