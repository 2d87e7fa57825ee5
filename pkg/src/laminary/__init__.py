"""Finite models of universal circles for laminar leaf spaces."""
from .circle import Arc, CirclePoint, Linking, PointPair, cyclic_orient, linked, pt
from .errors import InvariantViolation, LaminaryError, ScenarioError
from .hyperbolic import DiskGeodesic, chord_to_geodesic, ideal_polygon, svg_fragment
from .invariant import (Alternative, classify_alternative, fixed_point_check, lambda_side,
                        side_core, trivial_map_violations, univ_laminations)
from .laminations import LaminarRelation, Lamination, make_lamination
from .leafspace import Branching, LeafSpace, Side
from .monotone import CoreSet, MonotoneFamily, MonotoneMap, make_monotone, pullback, pushforward
from .universal import (Scenario, UniversalCircleResult, build_universal_circle, minimal_reduce,
                        corpus_names, load_corpus, validate_scenario, verify_axioms)

__version__ = "0.1.0"
