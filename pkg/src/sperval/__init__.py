"""Exact valuations, approximate roots, standard forms and separating ideals
for points of real spectra given by curvettes."""

from .errors import SpervalError
from .exact_arith import ParamAssumption, RatFn, sign_under, sturm_root_count
from .poly_series import Poly, TruncSeries, series_order, series_substitute
from .valuation import (Curvette, MonomialValuation, Semigroup, initial_form, monomial_value, nu_value, sign_at,
                        semigroup_enumerate)
from .roots import RootSystem, prepare_coordinates, roots_2d, roots_up_to
from .standard_form import (StandardForm, is_standard, nu_ideal_generators, relations_kernel_check,
                            standard_form, value_via_standard_form)
from .separating import (CurvettePair, SepResult, common_roots, connected_set, membership, separating_generators,
                         separating_value, witness_sign_change)
from .blowup import (Chart, chart_data, is_locally_monomial, local_blowup, resolve_pair, strict_transform_curvette,
                     strict_transform_poly)
from .dual_graph import BlowupEvent, SignedDualGraph, apply_event, init_graph, is_bamboo
from .parse import parse_poly, parse_series
from .session import SessionConfig, parse_session
from .walkthrough import run_walkthrough

__all__ = [
    "SpervalError", "ParamAssumption", "RatFn", "sign_under", "sturm_root_count",
    "Poly", "TruncSeries", "series_order", "series_substitute",
    "Curvette", "MonomialValuation", "Semigroup", "initial_form", "monomial_value", "nu_value", "sign_at",
    "semigroup_enumerate",
    "RootSystem", "prepare_coordinates", "roots_2d", "roots_up_to",
    "StandardForm", "is_standard", "nu_ideal_generators", "relations_kernel_check", "standard_form",
    "value_via_standard_form",
    "CurvettePair", "SepResult", "common_roots", "connected_set", "membership", "separating_generators",
    "separating_value", "witness_sign_change",
    "Chart", "chart_data", "is_locally_monomial", "local_blowup", "resolve_pair", "strict_transform_curvette",
    "strict_transform_poly",
    "BlowupEvent", "SignedDualGraph", "apply_event", "init_graph", "is_bamboo",
    "parse_poly", "parse_series", "SessionConfig", "parse_session", "run_walkthrough",
]
