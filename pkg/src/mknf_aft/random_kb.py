"""Seeded random ground knowledge bases for equivalence and property runs."""

from __future__ import annotations

import random
from dataclasses import dataclass

from .kb import Atom, KnowledgeBase, Rule
from .lattice import DEFAULT_SEED
from .ontology import Formula, Not, Var, disj


@dataclass(frozen=True)
class RandomKBConfig:
    min_atoms: int = 2
    max_atoms: int = 6
    min_rules: int = 2
    max_rules: int = 7
    max_body: int = 2
    max_clauses: int = 2
    max_clause_len: int = 3
    ontology_only_atom: str = "h"
    ontology_only_prob: float = 0.3
    choice_prob: float = 0.3
    refute_positive_head_prob: float = 0.4


def random_kb(rng: random.Random, config: RandomKBConfig = RandomKBConfig()) -> KnowledgeBase:
    """A ground KB whose rules mention at most ``max_atoms`` atoms.

    Ontology clauses range over the rule atoms, plus (sometimes) one atom
    that occurs only in the ontology. Two shapes are mixed in on purpose: an
    even negative cycle ``a <- not b; b <- not a`` (several models), and a
    unit clause refuting the head of a positive rule (the case where Ψ_K
    prunes more than Φ_K).
    """
    n_atoms = rng.randint(config.min_atoms, config.max_atoms)
    names = [chr(ord("a") + i) for i in range(n_atoms)]
    rules = []
    for _ in range(rng.randint(config.min_rules, config.max_rules)):
        head = rng.choice(names)
        pos = rng.sample(names, rng.randint(0, min(config.max_body, n_atoms)))
        neg = rng.sample(names, rng.randint(0, min(config.max_body, n_atoms)))
        rules.append(Rule(Atom(head), tuple(map(Atom, pos)), tuple(map(Atom, neg))))
    if rng.random() < config.choice_prob:
        a, b = rng.sample(names, 2)
        rules += [Rule(Atom(a), (), (Atom(b),)), Rule(Atom(b), (), (Atom(a),))]
    used = sorted({a.name for r in rules for a in r.atoms()})
    pool = list(used)
    if rng.random() < config.ontology_only_prob:
        pool.append(config.ontology_only_atom)
    clauses: list[Formula] = []
    positive_heads = sorted({r.head.name for r in rules if r.is_positive and r.pos})
    if positive_heads and rng.random() < config.refute_positive_head_prob:
        clauses.append(Not(Var(rng.choice(positive_heads))))
    n_clauses = rng.randint(1, config.max_clauses)
    while len(clauses) < n_clauses:
        atoms = rng.sample(pool, rng.randint(1, min(config.max_clause_len, len(pool))))
        lits = [Var(a) if rng.random() < 0.5 else Not(Var(a)) for a in atoms]
        clauses.append(disj(*lits))
    return KnowledgeBase(tuple(clauses), tuple(dict.fromkeys(rules)))


def random_corpus(
    count: int = 200,
    seed: int = DEFAULT_SEED,
    config: RandomKBConfig = RandomKBConfig(),
) -> list[KnowledgeBase]:
    rng = random.Random(seed)
    return [random_kb(rng, config) for _ in range(count)]
