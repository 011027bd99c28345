"""Approximation fixpoint theory for hybrid MKNF knowledge bases."""

from .aft import (
    Approximator,
    FunctionApproximator,
    TabulatedOperator,
    check_approximator,
    enumerate_stable_fixpoints,
    is_contracting,
    is_prudent,
    is_strong_for,
    kripke_kleene,
    stable_revision,
    stable_revision_consistent,
    well_founded_fixpoint,
)
from .approximators import MknfApproximator, Variant, phi, precision_compare, psi
from .kb import (
    Atom,
    KnowledgeBase,
    Rule,
    alternating_sequences,
    check_dl_safety,
    gamma,
    gamma_prime,
    ground,
    reduct_slash,
    reduct_slashslash,
    tk,
)
from .lattice import AtomUniverse, Pair, leq_p, lfp
from .ontology import Literal, ObjectiveKnowledge, OntologyTheory, compile_cnf, entails, satisfiable
from .semantics import Kind, ModelReport, Reason, extract_models, knowledge_leq, oracle_models, wfm
from .syntax import format_kb, load_kb, parse_kb

__all__ = [
    "Approximator", "FunctionApproximator", "TabulatedOperator", "check_approximator",
    "enumerate_stable_fixpoints", "is_contracting", "is_prudent", "is_strong_for",
    "kripke_kleene", "stable_revision", "stable_revision_consistent", "well_founded_fixpoint",
    "MknfApproximator", "Variant", "phi", "psi", "precision_compare",
    "Atom", "KnowledgeBase", "Rule", "alternating_sequences", "check_dl_safety", "gamma",
    "gamma_prime", "ground", "reduct_slash", "reduct_slashslash", "tk",
    "AtomUniverse", "Pair", "leq_p", "lfp",
    "Literal", "ObjectiveKnowledge", "OntologyTheory", "compile_cnf", "entails", "satisfiable",
    "Kind", "ModelReport", "Reason", "extract_models", "knowledge_leq", "oracle_models", "wfm",
    "format_kb", "load_kb", "parse_kb",
]
