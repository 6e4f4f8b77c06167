"""Complete permutation trinomials X^r c(X^((q-1)/3)) over finite fields:
exact arithmetic, fiber criteria, an exhaustive oracle, and sweeps."""

from .criteria import (
    agw_check,
    bbd3_hypothesis,
    bbd4_divisibility,
    constant_v_check,
    general_cpp_check,
    scalar_cpp_check,
    zieve_check,
)
from .ff_core import FieldElement, FieldSpec, Mu3Context, make_field, make_mu3, parse_field
from .oracle import check_permutation, check_pp_cpp
from .polyshape import CycloTrinomial, build_delta_family, build_gamma_family

__version__ = "0.1.0"

__all__ = [
    "CycloTrinomial",
    "FieldElement",
    "FieldSpec",
    "Mu3Context",
    "agw_check",
    "bbd3_hypothesis",
    "bbd4_divisibility",
    "build_delta_family",
    "build_gamma_family",
    "check_permutation",
    "check_pp_cpp",
    "constant_v_check",
    "general_cpp_check",
    "make_field",
    "make_mu3",
    "parse_field",
    "scalar_cpp_check",
    "zieve_check",
]
