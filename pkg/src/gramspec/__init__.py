"""Sum-of-squares certificates for polynomials via Gram spectrahedra.

The package certifies nonnegativity by building the affine space of Gram
matrices over a Newton-polytope monomial basis, solving the associated
semidefinite problems, and extracting real, exact-rational, or Hermitian
certificates.  Binary forms get exact rank-2 enumeration; binary sextics get
the closed-form Kummer-surface optimization theory.
"""

from .config import Config, SolverOptions, Tolerances
from .errors import (GramspecError, Infeasible, NewtonPolytopeViolation, NotPSD,
                     NumericalFailure, RealRoot, RepeatedRoot, ScalarModeError)
from .poly import BinaryForm, Polynomial, RootList, complex_roots
from .polytope import (LatticePolytope, ToricProfile, cayley, half_polytope,
                       hermitian_pataki_interval, is_two_normal, newton_polytope,
                       normalized_volume, pataki_interval, segment, simplex,
                       toric_profile)
from .gram import (GramSpace, SosCertificate, extract_sos, gram_apply, gram_space,
                   hurwitz_sos, norm_product_form, rational_sos,
                   round_to_rational_gram)
from .sdp import (SdpProblem, SdpSolution, entry_functional, low_rank_fit,
                  minimize_rank, solve_affine, solve_feasibility, solve_linear)
from .binary import KummerNodes, RankTwoGram, RootPartition, enumerate_rank2, kummer_nodes
from .kummer import (ClosedFormResult, DualKummer, SexticCoeffs, chart_check,
                     determinant_polynomial, dual_kummer, gram_parametrization,
                     optimize_closed_form, sample_surface)
from .hermitian import (HermCertificate, HermGramSpace, HermRankOne, LowRankSum,
                        enumerate_herm_rank1, gcd_degree_over_flips, herm_gram_space,
                        herm_minimize_rank, herm_solve, hermitian_to_real,
                        low_rank_sum, real_to_hermitian)

__version__ = "0.1.0"

__all__ = [
    "BinaryForm", "ClosedFormResult", "Config", "DualKummer", "GramSpace",
    "GramspecError", "HermCertificate", "HermGramSpace", "HermRankOne",
    "Infeasible", "KummerNodes", "LatticePolytope", "LowRankSum",
    "NewtonPolytopeViolation", "NotPSD", "NumericalFailure", "Polynomial",
    "RankTwoGram", "RealRoot", "RepeatedRoot", "RootList", "RootPartition",
    "ScalarModeError", "SdpProblem", "SdpSolution", "SexticCoeffs",
    "SolverOptions", "SosCertificate", "Tolerances", "ToricProfile", "cayley",
    "chart_check", "complex_roots", "determinant_polynomial", "dual_kummer",
    "entry_functional", "enumerate_herm_rank1", "enumerate_rank2", "extract_sos",
    "gcd_degree_over_flips", "gram_apply", "gram_parametrization", "gram_space",
    "half_polytope", "herm_gram_space", "herm_minimize_rank", "herm_solve",
    "hermitian_pataki_interval", "hermitian_to_real", "hurwitz_sos",
    "is_two_normal", "kummer_nodes", "low_rank_fit", "low_rank_sum",
    "minimize_rank", "newton_polytope", "norm_product_form", "normalized_volume",
    "optimize_closed_form", "pataki_interval", "rational_sos", "real_to_hermitian",
    "round_to_rational_gram", "sample_surface", "segment", "simplex",
    "solve_affine", "solve_feasibility", "solve_linear", "toric_profile",
]
