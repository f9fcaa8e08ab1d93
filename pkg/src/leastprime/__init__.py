"""Least primes in arithmetic progressions, Jacobsthal gaps and covering experiments."""

from .primes import PrimeTable, Factorization, factorize, euler_phi, omega, largest_prime_factor
from .scan import PkRecord, least_prime_in_ap, p_max, ratio, r_statistic, scan_range
from .jacobsthal import JacobsthalResult, jacobsthal_g, pomerance_bound, iwaniec_check
from .covering import CoverConfig, CoverResult, ResidueAssignment, build_cover, crt_combine, smooth_count

__version__ = "0.1.0"
