"""Path spaces of directed graphs with singular vertices."""

from .cylinders import Cylinder, GeneralCylinder, cluster_point, intersect, member, refine_to_basic, separate
from .desing import check_collapsible, collapse, desingularise, iso_check
from .diagonal import DiagonalElement, character_eval, multiply, norm, projection, q_decompose, q_projection
from .graph import EntryEdge, Family, FamilyEdge, PresentedGraph, Tail, TailEdge, TailVertex, make_graph, validate
from .graphfile import format_graph, parse_graph, read_graph, to_dot
from .literals import format_path, parse_element, parse_path
from .pathmaps import CollapseMap
from .paths import Absorbed, Path, Periodic
from .scalars import Gaussian
from .sequences import EventuallyPeriodic, FiniteSupport

__all__ = [
    "Absorbed",
    "CollapseMap",
    "Cylinder",
    "DiagonalElement",
    "EntryEdge",
    "EventuallyPeriodic",
    "Family",
    "FamilyEdge",
    "FiniteSupport",
    "Gaussian",
    "GeneralCylinder",
    "Path",
    "Periodic",
    "PresentedGraph",
    "Tail",
    "TailEdge",
    "TailVertex",
    "character_eval",
    "check_collapsible",
    "cluster_point",
    "collapse",
    "desingularise",
    "format_graph",
    "format_path",
    "intersect",
    "iso_check",
    "make_graph",
    "member",
    "multiply",
    "norm",
    "parse_element",
    "parse_graph",
    "parse_path",
    "projection",
    "q_decompose",
    "q_projection",
    "read_graph",
    "refine_to_basic",
    "separate",
    "to_dot",
    "validate",
]
