"""Finite-field experiments on secants of isotropic Veronese varieties."""

from .appendix import AppendixResult, appendix_suite, cases, run_case
from .arithmetic import (
    HoraceParameters,
    ParameterError,
    admissible_r,
    expected_secant_dim,
    f,
    generic_irk,
    horace_parameters,
    k_delta,
    k_delta_closed_form,
    num2_report,
    num_lem_report,
)
from .quadric_fp import (
    PRIMES,
    PresentationError,
    QuadricFp,
    QuadricPointError,
    legendre,
    presentation,
    random_quadric_point,
    sample_point,
    sqrt_mod,
)
from .scheme import (
    CharacteristicError,
    DoublePoint,
    LinearSection,
    PartialDoublePoint,
    Postulation,
    SchemeError,
    SchemeSpec,
    SimplePoint,
    conditions_rank_ambient,
    postulation_check,
    scheme_from_json,
)
from .terracini import ExperimentConfig, GridRow, terracini_dimension, terracini_grid, terracini_profile

__all__ = [
    "AppendixResult",
    "appendix_suite",
    "cases",
    "run_case",
    "HoraceParameters",
    "ParameterError",
    "admissible_r",
    "expected_secant_dim",
    "f",
    "generic_irk",
    "horace_parameters",
    "k_delta",
    "k_delta_closed_form",
    "num2_report",
    "num_lem_report",
    "PRIMES",
    "PresentationError",
    "QuadricFp",
    "QuadricPointError",
    "legendre",
    "presentation",
    "random_quadric_point",
    "sample_point",
    "sqrt_mod",
    "CharacteristicError",
    "DoublePoint",
    "LinearSection",
    "PartialDoublePoint",
    "Postulation",
    "SchemeError",
    "SchemeSpec",
    "SimplePoint",
    "conditions_rank_ambient",
    "postulation_check",
    "scheme_from_json",
    "ExperimentConfig",
    "GridRow",
    "terracini_dimension",
    "terracini_grid",
    "terracini_profile",
]
