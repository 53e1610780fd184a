"""Random factored smooth integers via a pruned Buchstab enumeration."""

from .estimate import (EstimatorContext, PsiEstimate, cutoff_L, make_context, psi_auto,
                       psi_ht_estimate, psi_rho_estimate)
from .exact import SmoothCounter, enumerate_range, kth_smooth_exact, psi_exact
from .factorization import Factorization, check_smooth
from .primes import PrimeList, PrimePair, is_probable_prime, sieve_primes, surrounding_primes
from .rho import RhoTable, build_rho_table, rho_closed_form, rho_eval
from .sampler import SampleResult, branch, find_threshold_t, sample_smooth

__all__ = [
    "EstimatorContext", "PsiEstimate", "cutoff_L", "make_context", "psi_auto",
    "psi_ht_estimate", "psi_rho_estimate", "SmoothCounter", "enumerate_range",
    "kth_smooth_exact", "psi_exact", "Factorization", "check_smooth", "PrimeList",
    "PrimePair", "is_probable_prime", "sieve_primes", "surrounding_primes", "RhoTable",
    "build_rho_table", "rho_closed_form", "rho_eval", "SampleResult", "branch",
    "find_threshold_t", "sample_smooth",
]
