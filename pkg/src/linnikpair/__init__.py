"""Certified constants and witness search for pairs of even integers written
as p1 + p2^2 + p3^3 + p4^3 plus k powers of two."""
from __future__ import annotations

__version__ = "0.1.0"

from .interval import CInterval, Interval, get_precision, set_precision, working_precision
from .reports import ConstantReport, Import
from .singular_series import A_local, constant_C, local_factor_min, tail_product
from .powers_of_two import (
    lemma24_constant,
    measure_E_lambda_empirical,
    power_sum_count_dp,
    power_sum_count_expsum,
    two_adic_profile,
)
from .major_arc import FrakJParams, frakJ_continuous, frakJ_exact, lemma25_constant
from .sieve_constants import T_value, cubic_sums, sieve_chain
from .theorem_gate import full_report, minimal_k
from .search import brute_oracle, mitm_find, pair_find, verify_witness

__all__ = [
    "__version__",
    "Interval", "CInterval", "get_precision", "set_precision", "working_precision",
    "ConstantReport", "Import",
    "A_local", "constant_C", "local_factor_min", "tail_product",
    "lemma24_constant", "measure_E_lambda_empirical", "power_sum_count_dp",
    "power_sum_count_expsum", "two_adic_profile",
    "FrakJParams", "frakJ_continuous", "frakJ_exact", "lemma25_constant",
    "T_value", "cubic_sums", "sieve_chain",
    "full_report", "minimal_k",
    "brute_oracle", "mitm_find", "pair_find", "verify_witness",
]
