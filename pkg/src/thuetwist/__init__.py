"""Thue binary forms twisted by powers of a unit: exact forms, certified invariants, bounds and solutions."""

from .bounds import (
    KappaConfig, bound_report, friedman_check, gs_separation, lemma_elementary,
    ratio_lower_bound, theorem1_bound, theorem2_bound, voutier_bound, xy_bound,
)
from .embeddings import (
    CertificationError, EmbeddingSet, check_two_conjugates_real, house, isolate_roots,
    log_height, mahler_measure, naive_height,
)
from .exact import Poly, cyclotomic
from .family import (
    BinaryForm, SolutionTriple, TwistFamily, chi, corollary_family, cyclotomic_demo,
    evaluate_form, form_at, hauteurunite_check, invariants_of, load_family, psi_values,
)
from .numfield import (
    FieldElement, NumberField, UnitSystem, check_siegel_properties, reduce_by_units,
    regulator_from_units,
)
from .solver import SearchBox, SolutionSet, empirical_kappa, enumerate_solutions, full_scan, verify_solution

__version__ = "0.1.0"

__all__ = [
    "BinaryForm", "CertificationError", "EmbeddingSet", "FieldElement", "KappaConfig",
    "NumberField", "Poly", "SearchBox", "SolutionSet", "SolutionTriple", "TwistFamily",
    "UnitSystem", "bound_report", "check_siegel_properties", "check_two_conjugates_real",
    "chi", "corollary_family", "cyclotomic", "cyclotomic_demo", "empirical_kappa",
    "enumerate_solutions", "evaluate_form", "form_at", "friedman_check", "full_scan",
    "gs_separation", "hauteurunite_check", "house", "invariants_of", "isolate_roots",
    "lemma_elementary", "load_family", "log_height", "mahler_measure", "naive_height",
    "psi_values", "ratio_lower_bound", "reduce_by_units", "regulator_from_units",
    "theorem1_bound", "theorem2_bound", "verify_solution", "voutier_bound", "xy_bound",
]
