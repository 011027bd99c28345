"""Three-valued MKNF models from stable fixpoints, and a brute-force oracle.

A stable fixpoint ``(T, P)`` of Φ_K or Ψ_K is a three-valued MKNF model
exactly when it is consistent and ``OB_{O,θ(T)}`` is satisfiable, where
``θ(T) = lfp(A(·, T)_1)``. :func:`extract_models` applies that test to every
stable fixpoint; :func:`oracle_models` instead checks the model definition
directly, with truth tables standing in for the ontology reasoner.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .aft import enumerate_stable_fixpoints, order_key, stable_revision, well_founded_fixpoint
from .approximators import MknfApproximator, Variant
from .kb import KnowledgeBase
from .lattice import EXHAUSTIVE_CAP, Pair, leq_p, lfp, members, subset
from .ontology import ObjectiveKnowledge, truth_table_columns, truth_table_models

ORACLE_CAP = 8


class Kind(str, enum.Enum):
    THREE_VALUED = "THREE_VALUED"
    TWO_VALUED = "TWO_VALUED"
    WELL_FOUNDED = "WELL_FOUNDED"
    REJECTED = "REJECTED"

    def __str__(self):
        return self.value


class Reason(str, enum.Enum):
    NOT_STABLE = "not-stable"
    INCONSISTENT = "inconsistent-partition"
    THETA_UNSAT = "theta-unsat"

    def __str__(self):
        return self.value


class CapExceededError(ValueError):
    pass


class ClosureError(ValueError):
    pass


@dataclass(frozen=True)
class ModelReport:
    partition: Pair
    kind: Kind
    reason: Reason | None
    theta: int
    variant: Variant

    @property
    def accepted(self) -> bool:
        return self.kind is not Kind.REJECTED

    @property
    def total(self) -> bool:
        return self.partition.exact

    def to_dict(self, kb: KnowledgeBase) -> dict:
        return {
            "t": kb.decode(self.partition.first),
            "p": kb.decode(self.partition.second),
            "kind": self.kind.value,
            "reason": None if self.reason is None else self.reason.value,
        }


@dataclass(frozen=True)
class InterpretationPairDescriptor:
    """The MKNF interpretation pair ``(M, N)`` induced by a partition,
    represented by the theories whose models are ``M`` and ``N``."""

    m_theory: ObjectiveKnowledge
    n_theory: ObjectiveKnowledge

    @classmethod
    def of(cls, kb: KnowledgeBase, part: Pair) -> "InterpretationPairDescriptor":
        return cls(
            ObjectiveKnowledge(kb.theory, kb.universe.decode(part.first)),
            ObjectiveKnowledge(kb.theory, kb.universe.decode(part.second)),
        )

    @property
    def valid(self) -> bool:
        """``∅ ⊂ N ⊆ M``: N is non-empty and its theory extends M's."""
        return self.m_theory.facts <= self.n_theory.facts and self.n_theory.satisfiable()


def theta(A: MknfApproximator, t: int) -> int:
    return lfp(lambda z: A.first(z, t))


def classify(A: MknfApproximator, part: Pair, *, stable: bool | None = None) -> ModelReport:
    """Apply the model test to ``part`` (kind is never WELL_FOUNDED here)."""
    part = Pair(*part)
    if stable is None:
        stable = stable_revision(A, part) == part
    th = theta(A, part.first)
    if not stable:
        kind, reason = Kind.REJECTED, Reason.NOT_STABLE
    elif not part.consistent:
        kind, reason = Kind.REJECTED, Reason.INCONSISTENT
    elif not A.kb.satisfiable(th):
        kind, reason = Kind.REJECTED, Reason.THETA_UNSAT
    elif part.exact:
        kind, reason = Kind.TWO_VALUED, None
    else:
        kind, reason = Kind.THREE_VALUED, None
    return ModelReport(part, kind, reason, th, A.variant)


def _mark_well_founded(reports: list[ModelReport]) -> list[ModelReport]:
    accepted = [r.partition for r in reports if r.accepted]
    out = []
    for r in reports:
        if r.accepted and all(leq_p(r.partition, q) for q in accepted):
            r = ModelReport(r.partition, Kind.WELL_FOUNDED, None, r.theta, r.variant)
        out.append(r)
    return out


def extract_models(
    kb: KnowledgeBase,
    variant: Variant | str = Variant.PSI,
    *,
    cap: int = EXHAUSTIVE_CAP,
    jobs: int = 1,
) -> list[ModelReport]:
    """Every stable fixpoint of the chosen approximator, classified.

    The accepted one that is ≤p-below all other accepted ones (if any) is
    marked WELL_FOUNDED.
    """
    A = MknfApproximator(kb, variant)
    if A.size > cap:
        raise CapExceededError(f"|KA(K)| = {A.size} exceeds the enumeration cap {cap}")
    fixpoints = enumerate_stable_fixpoints(A, "all", cap=cap, jobs=jobs)
    return _mark_well_founded([classify(A, f.pair, stable=True) for f in fixpoints])


def accepted_partitions(reports: list[ModelReport]) -> list[Pair]:
    return [r.partition for r in reports if r.accepted]


def wfm(kb: KnowledgeBase, variant: Variant | str = Variant.PSI) -> ModelReport:
    """The well-founded fixpoint, classified.

    When accepted it is the well-founded MKNF model. When rejected, the
    iterative method has failed; some other stable fixpoint may still be a
    well-founded model (see :func:`extract_models`).
    """
    A = MknfApproximator(kb, variant)
    report = classify(A, well_founded_fixpoint(A), stable=True)
    if report.accepted:
        report = ModelReport(report.partition, Kind.WELL_FOUNDED, None, report.theta, report.variant)
    return report


def knowledge_leq(a: Pair, b: Pair, kb: KnowledgeBase) -> bool:
    """Whether the model of ``a`` carries at most the knowledge of ``b``'s.

    On entailment-closed partitions this is ``a ≤p b``.
    """
    for part in (a, b):
        for s in part:
            if not subset(kb.consequences(s).entailed, s):
                raise ClosureError(f"{kb.decode(s)} is not closed under ontology entailment")
    return leq_p(Pair(*a), Pair(*b))


# -- brute-force model oracle -----------------------------------------------------

_F, _U, _T = 0, 1, 2


class _TruthTableKnowledge:
    """Entailment over KA(K) by truth tables, sharing nothing with DPLL."""

    def __init__(self, kb: KnowledgeBase):
        self.kb = kb
        order, self.rows_o = truth_table_models(kb.ontology, kb.universe.atoms)
        cols = truth_table_columns(order)
        self.cols = [cols[a] for a in kb.universe.atoms]
        self.full = (1 << (1 << len(order))) - 1

    def rows(self, s: int) -> int:
        out = self.rows_o
        for i, col in enumerate(self.cols):
            if s >> i & 1:
                out &= col
        return out

    def closure(self, s: int) -> int:
        rows = self.rows(s)
        return sum(1 << i for i, col in enumerate(self.cols) if rows & ~col & self.full == 0)


def _k_value(i: int, t: int, p: int) -> int:
    return _T if t >> i & 1 else (_U if p >> i & 1 else _F)


def _not_value(i: int, t: int, p: int) -> int:
    return _T if not p >> i & 1 else (_F if t >> i & 1 else _U)


def _rules_hold(kb: KnowledgeBase, k_part: tuple[int, int], not_part: tuple[int, int]) -> bool:
    """Every rule evaluates to t, reading K-atoms from ``k_part`` and
    not-atoms from ``not_part`` (both entailment-closed)."""
    kt, kp = k_part
    nt, np_ = not_part
    for r in kb.compiled:
        body = _T
        for i in members(r.pos):
            body = min(body, _k_value(i, kt, kp))
        for i in members(r.neg):
            body = min(body, _not_value(i, nt, np_))
        if _k_value(r.head, kt, kp) < body:
            return False
    return True


def oracle_models(kb: KnowledgeBase, *, cap: int = ORACLE_CAP) -> list[Pair]:
    """Three-valued MKNF models checked straight from the definition.

    Candidates are the entailment-closed consistent partitions with a
    satisfiable ``OB_{O,P}``. A candidate is a model if every rule is true
    under it and no weaker candidate ``(T′, P′)`` (same not-atoms, ``T′ = P′``
    when ``T = P``) also makes every rule true.
    """
    if kb.size > cap:
        raise CapExceededError(f"|KA(K)| = {kb.size} exceeds the oracle cap {cap}")
    tt = _TruthTableKnowledge(kb)
    closed = [s for s in range(1 << kb.size) if tt.closure(s) == s]
    sat = {s for s in closed if tt.rows(s)}
    models = []
    for p in sat:
        for t in closed:
            if not subset(t, p) or not _rules_hold(kb, (t, p), (t, p)):
                continue
            if not _has_weaker_model(kb, closed, sat, t, p):
                models.append(Pair(t, p))
    models.sort(key=order_key)
    return models


def _has_weaker_model(kb, closed, sat, t: int, p: int) -> bool:
    for p2 in sat:
        if not subset(p2, p):
            continue
        for t2 in closed:
            if not (subset(t2, t) and subset(t2, p2)):
                continue
            if (t2, p2) == (t, p) or (t == p and t2 != p2):
                continue
            if _rules_hold(kb, (t2, p2), (t, p)):
                return True
    return False
