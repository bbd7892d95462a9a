"""gemcat: catalogues and PL classification of 4-manifold crystallizations
represented as edge-coloured graphs."""

from .graph import (
    ColouredGraph,
    ResidueCensus,
    build,
    connected_sum,
    format_gem,
    parse_gem,
    permute_colours,
    relabel,
    standard_sphere,
)
from .code import canonical_form, code, colour_isomorphic
from .moves import (
    Dipole,
    RhoPair,
    eliminate_dipole,
    find_dipoles,
    find_rho_pairs,
    insert_blob,
    reduce_gem,
    s_flip,
    switch_edges,
    switch_rho_pair,
    t_flip,
)
from .topology import (
    InvariantRecord,
    betti2,
    euler_characteristic,
    invariant_record,
    is_manifold_crystallization,
    is_simple,
    rank_bound,
    recognize_s3,
    regular_genus,
)

__version__ = "0.1.0"
