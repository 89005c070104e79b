"""Period polynomials of level-1 modular forms, their L-derivative analogues and their zeros."""
from __future__ import annotations

from .arith import GUARD_BITS, PrecisionContext, PrecisionInfeasible, Rat, bernoulli, binomial, zeta_neg_int, zeta_numeric
from .eichler import (
    IDENTITY,
    S,
    T,
    T_INV,
    CocycleAssignment,
    GroupElement,
    act_weight,
    c_gamma,
    cocycle_extend,
    eichler_F,
    log_eta,
    relation_defects,
    sigma2,
)
from .forms import FourierExpansion, delta_expansion, eisenstein_expansion, hecke_eigenforms, miller_basis
from .laurent import LaurentPoly
from .lfun import LDerivativeValue, completed_l_derivative, critical_derivatives, eisenstein_lambda_oracle, fe_defect
from .periodpoly import build_correction_P, build_eisenstein_family, build_q, build_r, parity_part, sigma_SS_formula
from .roots import ZeroReport, detect_real_quadruple, find_roots, self_inversive_epsilon, unimodularity_report
from .suites import SuiteConfig, SuiteReport, recognize_rational, run_suite

__version__ = "0.1.0"

__all__ = [
    "annotations",
    "GUARD_BITS",
    "PrecisionContext",
    "PrecisionInfeasible",
    "Rat",
    "bernoulli",
    "binomial",
    "zeta_neg_int",
    "zeta_numeric",
    "IDENTITY",
    "S",
    "T",
    "T_INV",
    "CocycleAssignment",
    "GroupElement",
    "act_weight",
    "c_gamma",
    "cocycle_extend",
    "eichler_F",
    "log_eta",
    "relation_defects",
    "sigma2",
    "FourierExpansion",
    "delta_expansion",
    "eisenstein_expansion",
    "hecke_eigenforms",
    "miller_basis",
    "LaurentPoly",
    "LDerivativeValue",
    "completed_l_derivative",
    "critical_derivatives",
    "eisenstein_lambda_oracle",
    "fe_defect",
    "build_correction_P",
    "build_eisenstein_family",
    "build_q",
    "build_r",
    "parity_part",
    "sigma_SS_formula",
    "ZeroReport",
    "detect_real_quadruple",
    "find_roots",
    "self_inversive_epsilon",
    "unimodularity_report",
    "SuiteConfig",
    "SuiteReport",
    "recognize_rational",
    "run_suite",
]
