"""Exact limiting densities of first-order sentences over finitely presented structures."""

from .counting import (CoprimeSweep, coprime_pair_count, pi1_difference_distribution,
                       total_presentations, x_residue_distribution, x_value_distribution)
from .density import (DensitySeries, coprime_density, constant_example_densities,
                      constants_like_density, density_series, even_odd_limits,
                      multi_unary_phi_density)
from .errors import (BudgetExceeded, HypothesisError, LimdensError, NotCertifiedError, ParseError,
                     RankZeroError, UnsupportedError)
from .fo import eval_fo_finite, eval_invariant, invariant, parse_invariant, parse_sentence, render
from .locality import (ball, canonical_ball_code, free_vs_quotient_ball_check, gaifman_distance,
                       local_sentence_eval)
from .structures import (Cycle, CyclicGroup, IntegersGroup, OmegaChain, RhoShape, ZChain,
                         build_abelian, build_bijective, build_constant_example, build_genbij,
                         build_two_identity_bijective, build_unary, coset_equal, materialize_finite)
from .terms import (Identity, Relator, Signature, Term, parse_identity, parse_relator, parse_term,
                    x_statistic)
from .variety import VarietySpec, e0_bound, gaifman_group, inverse_word, projection_pi1
from .walk import WalkSpec, decay_rate_estimate, k_step_distribution, tv_distance_to_uniform

__all__ = [
    "BudgetExceeded",
    "CoprimeSweep",
    "Cycle",
    "CyclicGroup",
    "DensitySeries",
    "HypothesisError",
    "Identity",
    "IntegersGroup",
    "LimdensError",
    "NotCertifiedError",
    "OmegaChain",
    "ParseError",
    "RankZeroError",
    "Relator",
    "RhoShape",
    "Signature",
    "Term",
    "UnsupportedError",
    "VarietySpec",
    "WalkSpec",
    "ZChain",
    "ball",
    "build_abelian",
    "build_bijective",
    "build_constant_example",
    "build_genbij",
    "build_two_identity_bijective",
    "build_unary",
    "canonical_ball_code",
    "constant_example_densities",
    "constants_like_density",
    "coprime_density",
    "coprime_pair_count",
    "coset_equal",
    "decay_rate_estimate",
    "density_series",
    "e0_bound",
    "eval_fo_finite",
    "eval_invariant",
    "even_odd_limits",
    "free_vs_quotient_ball_check",
    "gaifman_distance",
    "gaifman_group",
    "invariant",
    "inverse_word",
    "k_step_distribution",
    "local_sentence_eval",
    "materialize_finite",
    "multi_unary_phi_density",
    "parse_identity",
    "parse_invariant",
    "parse_relator",
    "parse_sentence",
    "parse_term",
    "pi1_difference_distribution",
    "projection_pi1",
    "render",
    "total_presentations",
    "tv_distance_to_uniform",
    "x_residue_distribution",
    "x_statistic",
    "x_value_distribution",
]

__version__ = "0.1.0"
