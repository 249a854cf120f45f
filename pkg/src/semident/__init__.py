"""Identifiability, parameter recovery, and covariance constraints for
linear Gaussian structural equation models given as mixed graphs."""

__version__ = "0.1.0"

from .algebra import (Indeterminate, Poly, RatFn, SingularMatrixError,
                      TermCapError, canonicalize_constraint, divexact,
                      gauss_solve_ratfn, lambda_var, sigma_poly, sigma_var)
from .constraints import (ConstraintSet, b_ij_ratfn, evaluate_constraints,
                          model_ideal_generators, qualifying_pairs)
from .graphs import (GraphParseError, MixedGraph, Trek, enumerate_treks,
                     parse_graph, serialize_graph)
from .identify import (Certificate, edge_count_bound, has_subset_cycles,
                       htc_admissible_set, htc_identify, linear_identify,
                       quasi_linear_vertices, verify_certificate)
from .recovery import (DegenerateSigmaError, a_entry, b_entry,
                       evaluate_lambda_symbolic, recover_lambda_numeric,
                       recover_lambda_symbolic, recover_omega)
from .simulate import (ParamPair, off_model_sigma, sample_model_instance,
                       simulate_sigma, trek_rule_sigma)

__all__ = [
    "Certificate",
    "ConstraintSet",
    "DegenerateSigmaError",
    "GraphParseError",
    "Indeterminate",
    "MixedGraph",
    "ParamPair",
    "Poly",
    "RatFn",
    "SingularMatrixError",
    "TermCapError",
    "Trek",
    "a_entry",
    "b_entry",
    "b_ij_ratfn",
    "canonicalize_constraint",
    "divexact",
    "edge_count_bound",
    "enumerate_treks",
    "evaluate_constraints",
    "evaluate_lambda_symbolic",
    "gauss_solve_ratfn",
    "has_subset_cycles",
    "htc_admissible_set",
    "htc_identify",
    "lambda_var",
    "linear_identify",
    "model_ideal_generators",
    "off_model_sigma",
    "parse_graph",
    "qualifying_pairs",
    "quasi_linear_vertices",
    "recover_lambda_numeric",
    "recover_lambda_symbolic",
    "recover_omega",
    "sample_model_instance",
    "serialize_graph",
    "sigma_poly",
    "sigma_var",
    "simulate_sigma",
    "trek_rule_sigma",
    "verify_certificate",
]
