"""Provable solutions of the S-unit equation x + y = 1 over number fields."""

__version__ = "0.1.0"

from .apps import bound_report, cli_main, fermat_check, ramanujan_nagell
from .bounds import initial_bound
from .errors import InputError, SUnitError
from .generators import find_generators_bruteforce
from .nfield import FieldElement, NumberField, SUnitBasis, is_s_unit, nf_create, phi_rho
from .places import PlaceSet, maximal_order_field, primes_above
from .reduce import reduced_bound
from .sieve import SolutionPair, sieve_below_bound, solution_cycle, solve

__all__ = [
    "FieldElement",
    "InputError",
    "NumberField",
    "PlaceSet",
    "SUnitBasis",
    "SUnitError",
    "SolutionPair",
    "bound_report",
    "cli_main",
    "fermat_check",
    "find_generators_bruteforce",
    "initial_bound",
    "is_s_unit",
    "maximal_order_field",
    "nf_create",
    "phi_rho",
    "primes_above",
    "ramanujan_nagell",
    "reduced_bound",
    "sieve_below_bound",
    "solution_cycle",
    "solve",
]
