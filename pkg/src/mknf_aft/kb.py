"""Hybrid MKNF knowledge bases: rules, grounding, reducts and T_K.

A knowledge base pairs a propositional ontology with MKNF rules
``K h <- K b1, ..., not c1, ...``. Once ground, the K-atoms of the rules,
KA(K), index an :class:`~mknf_aft.lattice.AtomUniverse`; sets of K-atoms
are bitmasks over it, and a K-atom ``Ka`` is identified with its objective
atom ``a`` throughout.
"""

from __future__ import annotations

import itertools
import threading
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .lattice import AtomUniverse, lfp, members
from .ontology import Formula, Literal, OntologyTheory, atoms_of


class GroundingError(ValueError):
    pass


class StepLimitError(RuntimeError):
    pass


def is_variable(term: str) -> bool:
    return term[:1].isupper()


@dataclass(frozen=True, order=True)
class Atom:
    """A function-free atom ``pred(args)``; bare propositions have no args."""

    pred: str
    args: tuple[str, ...] = ()

    @property
    def name(self) -> str:
        return f"{self.pred}({','.join(self.args)})" if self.args else self.pred

    @property
    def is_ground(self) -> bool:
        return not any(is_variable(t) for t in self.args)

    def variables(self) -> set[str]:
        return {t for t in self.args if is_variable(t)}

    def substitute(self, binding: dict[str, str]) -> "Atom":
        return Atom(self.pred, tuple(binding.get(t, t) for t in self.args))

    def __str__(self):
        return self.name


def predicate_of(atom_name: str) -> str:
    return atom_name.split("(", 1)[0]


def constants_of(atom_name: str) -> list[str]:
    if "(" not in atom_name:
        return []
    return [t for t in atom_name[atom_name.index("(") + 1 : -1].split(",") if t]


def k_name(atom_name: str) -> str:
    return f"K{atom_name}"


@dataclass(frozen=True)
class Rule:
    """``K head <- K pos..., not neg...``; ``neg`` holds objective atoms."""

    head: Atom
    pos: tuple[Atom, ...] = ()
    neg: tuple[Atom, ...] = ()

    @property
    def body_pos(self) -> tuple[Atom, ...]:
        return self.pos

    @property
    def body_neg(self) -> tuple[Atom, ...]:
        return self.neg

    @property
    def is_positive(self) -> bool:
        return not self.neg

    @property
    def is_ground(self) -> bool:
        return all(a.is_ground for a in self.atoms())

    def atoms(self) -> Iterable[Atom]:
        yield self.head
        yield from self.pos
        yield from self.neg

    def variables(self) -> set[str]:
        out: set[str] = set()
        for a in self.atoms():
            out |= a.variables()
        return out

    def substitute(self, binding: dict[str, str]) -> "Rule":
        return Rule(
            self.head.substitute(binding),
            tuple(a.substitute(binding) for a in self.pos),
            tuple(a.substitute(binding) for a in self.neg),
        )

    def __str__(self):
        body = [f"K {a}" for a in self.pos] + [f"not {a}" for a in self.neg]
        return f"K {self.head} <- {', '.join(body)}." if body else f"K {self.head} <- ."


@dataclass(frozen=True)
class CompiledRule:
    """A ground rule as bitmasks over KA(K)."""

    head: int  # index of the head atom
    pos: int
    neg: int


@dataclass(frozen=True)
class Consequences:
    """What ``OB_{O,S}`` says about each atom of KA(K), as bitmasks."""

    entailed: int
    refuted: int
    satisfiable: bool


@dataclass(frozen=True, eq=False)
class KnowledgeBase:
    """``K = (O, P)`` with an immutable rule list.

    ``atoms`` overrides the K-atom universe; reducts use it so that their
    sets stay comparable with those of the original knowledge base.
    """

    ontology: tuple[Formula, ...] = ()
    rules: tuple[Rule, ...] = ()
    constants: tuple[str, ...] = ()
    atoms: tuple[str, ...] | None = None
    universe: AtomUniverse = field(init=False, repr=False)
    theory: OntologyTheory = field(init=False, repr=False)
    _lock: threading.Lock = field(init=False, repr=False)
    _cache: dict = field(init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "ontology", tuple(self.ontology))
        object.__setattr__(self, "rules", tuple(self.rules))
        object.__setattr__(self, "constants", tuple(self.constants))
        if self.atoms is None:
            names = sorted({a.name for r in self.rules for a in r.atoms() if a.is_ground})
        else:
            names = list(self.atoms)
        object.__setattr__(self, "universe", AtomUniverse(tuple(names)))
        object.__setattr__(self, "theory", OntologyTheory(self.ontology, extra_atoms=names))
        object.__setattr__(self, "_lock", threading.Lock())
        object.__setattr__(self, "_cache", {})

    def __eq__(self, other):
        if not isinstance(other, KnowledgeBase):
            return NotImplemented
        return (
            self.ontology == other.ontology
            and set(self.rules) == set(other.rules)
            and self.universe == other.universe
        )

    def __hash__(self):
        return hash((self.ontology, frozenset(self.rules), self.universe))

    # -- basic views --------------------------------------------------------

    @property
    def ka(self) -> frozenset[str]:
        """KA(K) as objective atom names."""
        return frozenset(self.universe.atoms)

    @property
    def size(self) -> int:
        return len(self.universe)

    @property
    def top(self) -> int:
        return self.universe.top

    @property
    def is_ground(self) -> bool:
        return all(r.is_ground for r in self.rules)

    @property
    def is_positive(self) -> bool:
        return all(r.is_positive for r in self.rules)

    def ontology_predicates(self) -> set[str]:
        out: set[str] = set()
        for f in self.ontology:
            out |= {predicate_of(a) for a in atoms_of(f)}
        return out

    def all_constants(self) -> list[str]:
        found = set(self.constants)
        for r in self.rules:
            for a in r.atoms():
                found |= {t for t in a.args if not is_variable(t)}
        for f in self.ontology:
            for name in atoms_of(f):
                found |= set(constants_of(name))
        return sorted(found)

    def encode(self, names: Iterable[str]) -> int:
        """Bitmask of K-atoms; names may carry the ``K`` prefix or not."""
        return self.universe.encode(_strip_k(n, self.universe) for n in names)

    def decode(self, bits: int) -> list[str]:
        """Sorted display names (``Ka``) of a K-atom set."""
        return sorted(k_name(a) for a in self.universe.decode(bits))

    @property
    def compiled(self) -> tuple[CompiledRule, ...]:
        cached = self._cache.get("compiled")
        if cached is None:
            self._require_ground()
            idx = self.universe.index
            cached = tuple(
                CompiledRule(
                    idx[r.head.name],
                    self.universe.encode(a.name for a in r.pos),
                    self.universe.encode(a.name for a in r.neg),
                )
                for r in self.rules
            )
            self._cache["compiled"] = cached
        return cached

    def _require_ground(self):
        if not self.is_ground:
            raise GroundingError("operation needs a ground knowledge base; call ground() first")

    # -- objective knowledge ----------------------------------------------

    def consequences(self, s: int) -> Consequences:
        """Entailed and refuted atoms of KA(K) under ``OB_{O,S}``.

        One model of ``OB_{O,S}`` is found first: atoms false in it cannot be
        entailed and atoms true in it cannot be refuted, so only the
        remaining ones need a refutation query.
        """
        key = ("ob", s)
        with self._lock:
            cached = self._cache.get(key)
        if cached is not None:
            return cached
        facts = self.universe.decode(s)
        model = self.theory.model(facts)
        if model is None:
            result = Consequences(self.top, self.top, False)
        else:
            entailed = refuted = 0
            for i, a in enumerate(self.universe.atoms):
                if a in model:
                    if self.theory.entails(facts, Literal(a)):
                        entailed |= 1 << i
                elif self.theory.entails(facts, Literal(a, False)):
                    refuted |= 1 << i
            result = Consequences(entailed, refuted, True)
        with self._lock:
            self._cache[key] = result
        return result

    def satisfiable(self, s: int) -> bool:
        return self.consequences(s).satisfiable


def _strip_k(name: str, universe: AtomUniverse) -> str:
    name = name.strip()
    if name not in universe and name.startswith("K") and name[1:] in universe:
        return name[1:]
    return name


# -- DL-safety and grounding ---------------------------------------------------


def check_dl_safety(kb: KnowledgeBase) -> list[tuple[Rule, str]]:
    """(rule, variable) pairs whose variable has no non-DL positive anchor."""
    dl_preds = kb.ontology_predicates()
    violations = []
    for r in kb.rules:
        anchored: set[str] = set()
        for a in r.pos:
            if a.pred not in dl_preds:
                anchored |= a.variables()
        for var in sorted(r.variables() - anchored):
            violations.append((r, var))
    return violations


def ground(kb: KnowledgeBase) -> KnowledgeBase:
    """Instantiate every rule with all combinations of known constants."""
    if kb.is_ground:
        return kb
    violations = check_dl_safety(kb)
    if violations:
        rule, var = violations[0]
        raise GroundingError(f"rule '{rule}' is not DL-safe: variable {var} has no non-DL anchor")
    constants = kb.all_constants()
    rules: list[Rule] = []
    for r in kb.rules:
        variables = sorted(r.variables())
        if not variables:
            rules.append(r)
            continue
        if not constants:
            raise GroundingError(f"rule '{r}' has variables but the knowledge base has no constants")
        for combo in itertools.product(constants, repeat=len(variables)):
            rules.append(r.substitute(dict(zip(variables, combo))))
    return KnowledgeBase(kb.ontology, tuple(dict.fromkeys(rules)), kb.constants)


# -- operators -------------------------------------------------------------------


def tk(kb: KnowledgeBase, i: int) -> int:
    """The immediate consequence operator T_K on a K-atom set."""
    out = kb.consequences(i).entailed
    for r in kb.compiled:
        if r.pos & ~i == 0 and r.neg & i == 0:
            out |= 1 << r.head
    return out


def _reduct(kb: KnowledgeBase, s: int, coherent: bool) -> KnowledgeBase:
    refuted = kb.consequences(s).refuted if coherent else 0
    kept = []
    for rule, c in zip(kb.rules, kb.compiled):
        if c.neg & s:
            continue
        if coherent and refuted >> c.head & 1:
            continue
        kept.append(Rule(rule.head, rule.pos, ()))
    return KnowledgeBase(kb.ontology, tuple(kept), kb.constants, atoms=kb.universe.atoms)


def reduct_slash(kb: KnowledgeBase, s: int) -> KnowledgeBase:
    """K/S: positive parts of the rules whose negative body avoids S."""
    return _reduct(kb, s, coherent=False)


def reduct_slashslash(kb: KnowledgeBase, s: int) -> KnowledgeBase:
    """K//S: as K/S, also dropping rules whose head OB_{O,S} refutes."""
    return _reduct(kb, s, coherent=True)


def gamma(kb: KnowledgeBase, s: int) -> int:
    reduct = reduct_slash(kb, s)
    return lfp(lambda i: tk(reduct, i))


def gamma_prime(kb: KnowledgeBase, s: int) -> int:
    reduct = reduct_slashslash(kb, s)
    return lfp(lambda i: tk(reduct, i))


def alternating_sequences(kb: KnowledgeBase, max_steps: int | None = None) -> tuple[list[int], list[int]]:
    """Traces of ``P_{n+1} = Γ(N_n)`` and ``N_{n+1} = Γ′(P_n)`` from ``(∅, KA)``.

    Iteration stops once both sequences repeat; the last entries are the
    limits.
    """
    if max_steps is None:
        max_steps = 2 * kb.size + 2
    ps, ns = [0], [kb.top]
    for _ in range(max_steps):
        p, n = gamma(kb, ns[-1]), gamma_prime(kb, ps[-1])
        if p == ps[-1] and n == ns[-1]:
            return ps, ns
        ps.append(p)
        ns.append(n)
    raise StepLimitError(f"alternating sequences did not stabilise within {max_steps} steps")


def rules_from(triples: Sequence[tuple[str, Sequence[str], Sequence[str]]]) -> tuple[Rule, ...]:
    """Build propositional rules from ``(head, pos, neg)`` name triples."""
    return tuple(
        Rule(Atom(h), tuple(Atom(a) for a in pos), tuple(Atom(a) for a in neg))
        for h, pos, neg in triples
    )
