"""The MKNF approximators Φ_K and Ψ_K on the bilattice over KA(K).

Both map a partition ``(T, P)`` to a new one. The first projection derives
true K-atoms from ``T`` (negation read against ``P``); the second derives
possibly-true K-atoms from ``P`` (negation read against ``T``) and refuses
heads that ``OB_{O,T}`` refutes. Ψ_K also refuses ``Ka`` when a positive
rule ``Kb <- ..., Ka, ...`` already has its head refuted and the rest of its
body true, in the manner of unit propagation.
"""

from __future__ import annotations

import enum
import random
import threading
from dataclasses import dataclass

from .aft import Approximator, precision_leq
from .kb import KnowledgeBase
from .lattice import DEFAULT_SEED, Pair, leq_p


class Variant(str, enum.Enum):
    PHI = "phi"
    PSI = "psi"

    def __str__(self):
        return self.value


PRECISION_EXHAUSTIVE_CAP = 10


class MknfApproximator(Approximator):
    def __init__(self, kb: KnowledgeBase, variant: Variant | str = Variant.PSI):
        self.kb = kb
        self.variant = Variant(variant)
        self.size = kb.size
        self.name = f"{self.variant.value}[{len(kb.rules)} rules]"
        self._rules = kb.compiled
        # positive rules as (head bit, body mask) for the blocking clause
        self._positive = [(1 << r.head, r.pos) for r in self._rules if r.neg == 0 and r.pos]
        self._blocked: dict[int, int] = {}
        self._lock = threading.Lock()

    def first(self, t: int, p: int) -> int:
        out = self.kb.consequences(t).entailed
        for r in self._rules:
            if r.pos & ~t == 0 and r.neg & p == 0:
                out |= 1 << r.head
        return out

    def second(self, t: int, p: int) -> int:
        out = self.kb.consequences(p).entailed
        refused = self.kb.consequences(t).refuted
        if self.variant is Variant.PSI:
            refused |= self.blocked(t)
        for r in self._rules:
            if r.pos & ~p == 0 and r.neg & t == 0 and not refused >> r.head & 1:
                out |= 1 << r.head
        return out

    def blocked(self, t: int) -> int:
        """K-atoms ``Ka`` that some positive rule forces false given ``T``."""
        with self._lock:
            cached = self._blocked.get(t)
        if cached is not None:
            return cached
        refuted = self.kb.consequences(t).refuted
        out = 0
        for head, body in self._positive:
            if not head & refuted:
                continue
            missing = body & ~t
            if missing == 0:
                out |= body  # every body atom is blocked: the rest is in T
            elif missing & (missing - 1) == 0:
                out |= missing  # exactly one body atom outside T
        with self._lock:
            self._blocked[t] = out
        return out


def phi(kb: KnowledgeBase, part: Pair) -> Pair:
    return MknfApproximator(kb, Variant.PHI)(Pair(*part))


def psi(kb: KnowledgeBase, part: Pair) -> Pair:
    return MknfApproximator(kb, Variant.PSI)(Pair(*part))


@dataclass
class PrecisionReport:
    """Outcome of comparing Φ_K with Ψ_K pair by pair."""

    checked: int
    exhaustive: bool
    counterexamples: list[Pair]
    differing: int

    @property
    def ok(self) -> bool:
        return not self.counterexamples


def precision_compare(
    kb: KnowledgeBase,
    n_samples: int | None = None,
    seed: int = DEFAULT_SEED,
) -> PrecisionReport:
    """Check ``Φ_K(x) ≤p Ψ_K(x)``, on every pair for small KA(K), else sampled.

    ``differing`` counts the checked pairs where Ψ_K is strictly more precise.
    """
    a_phi = MknfApproximator(kb, Variant.PHI)
    a_psi = MknfApproximator(kb, Variant.PSI)
    exhaustive = n_samples is None and kb.size <= PRECISION_EXHAUSTIVE_CAP
    if exhaustive:
        pairs = list(a_phi.pairs())
    else:
        rng = random.Random(seed)
        bits = kb.size
        pairs = [
            Pair(rng.getrandbits(bits) if bits else 0, rng.getrandbits(bits) if bits else 0)
            for _ in range(n_samples or 1000)
        ]
    bad = precision_leq(a_phi, a_psi, pairs)
    differing = sum(1 for x in pairs if a_phi(x) != a_psi(x) and leq_p(a_phi(x), a_psi(x)))
    return PrecisionReport(len(pairs), exhaustive, bad, differing)
