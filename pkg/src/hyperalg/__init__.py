"""Map algebra on hypergraphs and product-form random hypergraph models."""

from .algebra import eval_expr, parse_expr, pushforward_expr, render, sample_expr
from .core import (
    Hypergraph,
    HypergraphClass,
    VertexSet,
    assoc_complex,
    assoc_indep,
    box_product,
    classify,
    complement,
    format_hypergraph,
    join,
    lower_complex,
    lower_indep,
    parse_hypergraphs,
)
from .errors import HyperalgError
from .prob import Family, ModelDescriptor, combine_maps, complement_map, parse_prob_spec
from .sampler import SampleStream
from .tables import DistributionTable, enumerate_hypergraphs

__version__ = "0.1.0"
