"""Commutator estimates for normal matrices with finite spectrum."""
from .center import CenterCertificate, WeightedSpectrum, directional_median, find_center, verify_certificate
from .constants import (
    ExtremalWitness, Interval, constants_table, extremal_lambda_witness, extremal_tilde_witness,
    lambda_n, tilde_lambda,
)
from .derivation import (
    DerivationBracket, MedianResult, derivation_bracket, hungarian, max_orbit_distance_l2,
    orbit_diameter_l1, weighted_median_l1,
)
from .linalg import (
    conjugate_spectra_unitary, hermitian_eig, matrix_abs, normal_eig, polar_parts,
    realpart_domination_unitary, triangle_unitaries, verify_commutator_bound,
)
from .oracle import LambdaReport, lambda_exact, lambda_given_T, lambda_min_estimate
from .pairing import Pairing, build_pairing, cycle_type_report, lambda_ratio
from .plane import ConjugacyFrame, angle_at, are_conjugate, cosine_bound_holds, ellipse_contains

__version__ = "0.1.0"
