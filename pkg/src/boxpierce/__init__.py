"""Piercing sets for families of axis-parallel boxes with the (p,q)-property."""

__version__ = "0.1.0"

from .errors import CapExceeded, InternalError, InvalidInput, OutOfRange, PropertyViolation
from .geometry import AxisBox, BoxFamily, boxes_intersect, clique_common_point, pierces, restrict_to_hyperplane
from .oracles import OracleConfig, PackingResult, PropertyVerdict, check_pq_property, max_depth, packing, piercing_number
from .intervals import pierce_intervals
from .p2 import eq1_closed_form, p2_bound, p2_bound_table, pierce_p2
from .thresholds import ThresholdFn, check_f_admissible, compute_Tc, compute_Tc_table
from .pipeline import (RunReport, dol_refine, pierce_cute, pierce_dol1, pierce_dol2_rect, pierce_generic_engine,
                       pierce_rect_main, pierce_weak, solve)
from .generators import (Certificate, GenSpec, PqInstance, gen_clique_union, gen_no_p2_family, gen_random_p2,
                         gen_remark_family, graph_to_boxes)

__all__ = [
    "AxisBox", "BoxFamily", "boxes_intersect", "clique_common_point", "pierces", "restrict_to_hyperplane",
    "OracleConfig", "PackingResult", "PropertyVerdict", "check_pq_property", "max_depth", "packing",
    "piercing_number", "pierce_intervals", "eq1_closed_form", "p2_bound", "p2_bound_table", "pierce_p2",
    "ThresholdFn", "check_f_admissible", "compute_Tc", "compute_Tc_table", "RunReport", "dol_refine",
    "pierce_cute", "pierce_dol1", "pierce_dol2_rect", "pierce_generic_engine", "pierce_rect_main", "pierce_weak",
    "solve", "Certificate", "GenSpec", "PqInstance", "gen_clique_union", "gen_no_p2_family", "gen_random_p2",
    "gen_remark_family", "graph_to_boxes", "CapExceeded", "InternalError", "InvalidInput", "OutOfRange",
    "PropertyViolation",
]
