"""Branching data for finite group actions on compact Riemann surfaces."""

from .epimorph import (
    EpimorphismRecord,
    GeneratingVector,
    abelianized_surjection_exists,
    brute_force_epimorphisms,
    class_tuples,
    is_generating_vector,
    orbit_representatives,
    representatives_epimorphisms,
)
from .errors import BudgetExceeded, DomainError, FormatError, UnsupportedError
from .grouplib import GroupLabel, GroupSpec, build_group, fixture_group, resolve_group
from .permcore import ConjClass, Permutation, PermGroup, perm_from_image_row
from .signatures import Signature, admissible_signatures, mu_measure, parse_signature, rh_genus

__version__ = "0.1.0"
