"""Triangulation ingestion: facet lists -> barycentric gems -> crystallizations.

A flag of a pure simplicial complex is a chain sigma_0 < sigma_1 < ... <
sigma_n of faces, one per dimension; equivalently an ordering
(v_0, ..., v_n) of the vertices of one facet.  Flags are the vertices of
the barycentric gem; two flags are i-adjacent iff they differ exactly in
the dimension-i entry of the chain.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, permutations

from .errors import FormatError, NotClosed, NotPure
from .graph import ColouredGraph
from .moves import reduce_gem


@dataclass(frozen=True)
class FacetComplex:
    """A pure n-dimensional facet list: each facet an (n+1)-tuple of
    vertex identifiers, sorted."""

    n: int
    vertex_count: int
    facets: tuple

    def validate(self):
        for f in self.facets:
            if len(f) != self.n + 1 or len(set(f)) != self.n + 1:
                raise NotPure(f"facet {f} does not have {self.n + 1} distinct vertices")
        faces = {}
        for idx, f in enumerate(self.facets):
            for face in combinations(f, self.n):
                faces.setdefault(face, []).append(idx)
        for face, owners in faces.items():
            if len(owners) != 2:
                raise NotClosed(
                    f"face {face} lies in {len(owners)} facets (expected 2)"
                )


def parse_facet_complex(text):
    """Plain-text format: line 1 ``n vertex_count facet_count``, then one
    facet per line as n+1 vertex identifiers."""
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise FormatError("empty facet file", line=1)
    head = lines[0].split()
    if len(head) != 3:
        raise FormatError("expected 'n vertex_count facet_count'", line=1)
    try:
        n, nverts, nfacets = (int(x) for x in head)
    except ValueError:
        raise FormatError("non-integer header", line=1) from None
    if len(lines) != 1 + nfacets:
        raise FormatError(f"expected {nfacets} facet lines", line=len(lines))
    facets = []
    for k in range(nfacets):
        parts = lines[1 + k].split()
        try:
            facets.append(tuple(sorted(int(x) for x in parts)))
        except ValueError:
            raise FormatError("non-integer vertex identifier", line=2 + k) from None
    return FacetComplex(n=n, vertex_count=nverts, facets=tuple(facets))


def barycentric_gem(K):
    """The (n+1)-coloured gem of the barycentric subdivision of K: vertices
    are flags, colour-i edges swap the dimension-i chain entry.

    Flags are numbered in lexicographic order of (facet index, vertex
    ordering), so the output is deterministic.  Order = (n+1)! * #facets.
    """
    K.validate()
    n = K.n
    # neighbour across each (n-1)-face
    face_owner = {}
    neighbour = {}
    for idx, f in enumerate(K.facets):
        for face in combinations(f, n):
            if face in face_owner:
                other = face_owner[face]
                neighbour[(other, face)] = idx
                neighbour[(idx, face)] = other
            else:
                face_owner[face] = idx

    flag_index = {}
    flags = []
    for idx, f in enumerate(K.facets):
        for ordering in permutations(sorted(f)):
            flag_index[(idx, ordering)] = len(flags) + 1
            flags.append((idx, ordering))
    order = len(flags)
    rows = [[0] * (order + 1) for _ in range(n + 1)]
    for v, (idx, ordering) in enumerate(flags, start=1):
        for i in range(n):
            swapped = list(ordering)
            swapped[i], swapped[i + 1] = swapped[i + 1], swapped[i]
            rows[i][v] = flag_index[(idx, tuple(swapped))]
        face = tuple(sorted(ordering[:n]))
        other = neighbour[(idx, face)]
        w = next(x for x in K.facets[other] if x not in face)
        rows[n][v] = flag_index[(other, ordering[:n] + (w,))]
    return ColouredGraph(n + 1, order, tuple(tuple(r) for r in rows))


def crystallize(g):
    """Reduce a gem to rigid dipole-free contracted form; returns
    (crystallization, orientable handles, non-orientable handles)."""
    return reduce_gem(g)
