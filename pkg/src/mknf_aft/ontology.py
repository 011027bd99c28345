"""Ground propositional ontologies and the entailment oracle behind OB queries.

Formulas are compiled once into CNF (definitional clauses for nested
subformulas, auxiliary variables named ``_aux<n>``). Satisfiability and
entailment are decided by a DPLL search with unit propagation. A separate
truth-table evaluator (:func:`truth_table_satisfiable`) shares no code with
that path and serves as its test oracle.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Union

AUX_PREFIX = "_aux"


class UnknownAtomError(KeyError):
    pass


# -- formula syntax ----------------------------------------------------------


@dataclass(frozen=True)
class Var:
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Const:
    value: bool

    def __str__(self):
        return "true" if self.value else "false"


@dataclass(frozen=True)
class Not:
    arg: "Formula"

    def __str__(self):
        return f"~{_wrap(self.arg, 4)}"


@dataclass(frozen=True)
class And:
    args: tuple["Formula", ...]

    def __str__(self):
        return " & ".join(_wrap(a, 3) for a in self.args)


@dataclass(frozen=True)
class Or:
    args: tuple["Formula", ...]

    def __str__(self):
        return " | ".join(_wrap(a, 2) for a in self.args)


@dataclass(frozen=True)
class Implies:
    left: "Formula"
    right: "Formula"

    def __str__(self):
        return f"{_wrap(self.left, 2)} -> {_wrap(self.right, 1)}"


Formula = Union[Var, Const, Not, And, Or, Implies]

_PRECEDENCE = {Implies: 1, Or: 2, And: 3, Not: 4, Var: 5, Const: 5}


def _wrap(f: Formula, level: int) -> str:
    text = str(f)
    return f"({text})" if _PRECEDENCE[type(f)] < level else text


def conj(*args: Formula) -> Formula:
    return args[0] if len(args) == 1 else And(tuple(args))


def disj(*args: Formula) -> Formula:
    return args[0] if len(args) == 1 else Or(tuple(args))


def atoms_of(f: Formula) -> set[str]:
    if isinstance(f, Var):
        return {f.name}
    if isinstance(f, Const):
        return set()
    if isinstance(f, Not):
        return atoms_of(f.arg)
    if isinstance(f, Implies):
        return atoms_of(f.left) | atoms_of(f.right)
    out: set[str] = set()
    for a in f.args:
        out |= atoms_of(a)
    return out


def evaluate(f: Formula, true_atoms: frozenset[str] | set[str]) -> bool:
    if isinstance(f, Var):
        return f.name in true_atoms
    if isinstance(f, Const):
        return f.value
    if isinstance(f, Not):
        return not evaluate(f.arg, true_atoms)
    if isinstance(f, And):
        return all(evaluate(a, true_atoms) for a in f.args)
    if isinstance(f, Or):
        return any(evaluate(a, true_atoms) for a in f.args)
    return (not evaluate(f.left, true_atoms)) or evaluate(f.right, true_atoms)


# -- CNF compilation ---------------------------------------------------------


def nnf(f: Formula, positive: bool = True) -> Formula:
    """Negation normal form with implications eliminated and constants folded."""
    if isinstance(f, Var):
        return f if positive else Not(f)
    if isinstance(f, Const):
        return Const(f.value == positive)
    if isinstance(f, Not):
        return nnf(f.arg, not positive)
    if isinstance(f, Implies):
        f = Or((Not(f.left), f.right))
    is_and = isinstance(f, And) == positive
    parts = [nnf(a, positive) for a in f.args]
    absorbing, neutral = (False, True) if is_and else (True, False)
    flat: list[Formula] = []
    for p in parts:
        if isinstance(p, Const):
            if p.value == absorbing:
                return Const(absorbing)
            continue
        if isinstance(p, And if is_and else Or):
            flat.extend(p.args)
        else:
            flat.append(p)
    if not flat:
        return Const(neutral)
    if len(flat) == 1:
        return flat[0]
    return And(tuple(flat)) if is_and else Or(tuple(flat))


Clause = tuple[int, ...]


class _ClauseBuilder:
    def __init__(self, var_index: dict[str, int]):
        self.var_index = var_index
        self.clauses: list[Clause] = []
        self.aux_names: list[str] = []

    def var(self, name: str) -> int:
        if name not in self.var_index:
            self.var_index[name] = len(self.var_index) + 1
        return self.var_index[name]

    def fresh(self) -> int:
        name = f"{AUX_PREFIX}{len(self.aux_names) + 1}"
        self.aux_names.append(name)
        return self.var(name)

    def literal(self, f: Formula) -> int:
        """A literal implying ``f`` (NNF input); nested connectives get an
        auxiliary variable with one-directional definition clauses."""
        if isinstance(f, Var):
            return self.var(f.name)
        if isinstance(f, Not):
            return -self.var(f.arg.name)
        x = self.fresh()
        if isinstance(f, And):
            for a in f.args:
                self.clauses.append((-x, self.literal(a)))
        else:
            self.clauses.append((-x, *(self.literal(a) for a in f.args)))
        return x

    def add(self, f: Formula) -> None:
        if isinstance(f, Const):
            if not f.value:
                self.clauses.append(())
            return
        if isinstance(f, And):
            for a in f.args:
                self.add(a)
            return
        if isinstance(f, Or):
            self.clauses.append(_normalize(self.literal(a) for a in f.args))
            return
        self.clauses.append((self.literal(f),))


def _normalize(lits: Iterable[int]) -> Clause:
    return tuple(dict.fromkeys(lits))


def compile_cnf(
    formulas: Iterable[Formula], var_index: dict[str, int] | None = None
) -> tuple[list[Clause], dict[str, int]]:
    """Clauses whose models, restricted to the original atoms, are exactly
    the models of the conjunction of ``formulas``.

    Literals are signed 1-based variable indices; returns the clause list and
    the name-to-index map (auxiliary variables included).
    """
    builder = _ClauseBuilder(dict(var_index or {}))
    for f in formulas:
        builder.add(nnf(f))
    clauses = [c for c in builder.clauses if not any(-l in c for l in c)]
    return clauses, builder.var_index


# -- DPLL --------------------------------------------------------------------


def dpll(clauses: list[Clause], assumptions: Iterable[int] = ()) -> dict[int, bool] | None:
    """A satisfying partial assignment, or ``None`` if unsatisfiable.

    Unit propagation to saturation at every node; branching on the first
    literal of the shortest open clause.
    """
    assignment: dict[int, bool] = {}
    for lit in assumptions:
        if assignment.get(abs(lit), lit > 0) != (lit > 0):
            return None
        assignment[abs(lit)] = lit > 0
    return _search(clauses, assignment)


def _search(clauses: list[Clause], assignment: dict[int, bool]) -> dict[int, bool] | None:
    clauses = _propagate(clauses, assignment)
    if clauses is None:
        return None
    if not clauses:
        return assignment
    branch = min(clauses, key=len)[0]
    for lit in (branch, -branch):
        trial = dict(assignment)
        trial[abs(lit)] = lit > 0
        result = _search(clauses, trial)
        if result is not None:
            return result
    return None


def _propagate(clauses: list[Clause], assignment: dict[int, bool]) -> list[Clause] | None:
    """Simplify under ``assignment`` (extended in place by unit clauses).

    Returns the remaining open clauses, or ``None`` on a conflict.
    """
    while True:
        remaining: list[Clause] = []
        units: list[int] = []
        for clause in clauses:
            open_lits = []
            satisfied = False
            for lit in clause:
                value = assignment.get(abs(lit))
                if value is None:
                    open_lits.append(lit)
                elif value == (lit > 0):
                    satisfied = True
                    break
            if satisfied:
                continue
            if not open_lits:
                return None
            if len(open_lits) == 1:
                units.append(open_lits[0])
            remaining.append(tuple(open_lits))
        if not units:
            return remaining
        for lit in units:
            if assignment.get(abs(lit), lit > 0) != (lit > 0):
                return None
            assignment[abs(lit)] = lit > 0
        clauses = remaining


# -- theories and objective knowledge ----------------------------------------


@dataclass(frozen=True)
class Literal:
    atom: str
    positive: bool = True

    def __neg__(self) -> "Literal":
        return Literal(self.atom, not self.positive)

    def __str__(self):
        return self.atom if self.positive else f"~{self.atom}"


class OntologyTheory:
    """A finite set of ground formulas with its compiled CNF.

    ``extra_atoms`` registers atoms that occur only outside the ontology (the
    objective atoms of K-atoms); only registered atoms may be queried.
    Entailment results are memoised per (fact set, literal) behind a lock, so
    one theory may be shared by concurrent workers.
    """

    def __init__(self, formulas: Iterable[Formula] = (), extra_atoms: Iterable[str] = ()):
        self.formulas: tuple[Formula, ...] = tuple(formulas)
        names: set[str] = set(extra_atoms)
        for f in self.formulas:
            names |= atoms_of(f)
        self.atoms: tuple[str, ...] = tuple(sorted(names))
        index = {a: i + 1 for i, a in enumerate(self.atoms)}
        self.cnf, self.var_index = compile_cnf(self.formulas, index)
        self._lock = threading.Lock()
        self._entails: dict[tuple[frozenset[str], Literal], bool] = {}
        self._sat: dict[frozenset[str], bool] = {}

    def __repr__(self):
        return f"OntologyTheory({[str(f) for f in self.formulas]})"

    def conjuncts(self) -> list[Formula]:
        out: list[Formula] = []
        for f in self.formulas:
            out.extend(f.args if isinstance(f, And) else (f,))
        return out

    def _var(self, atom: str) -> int:
        if atom not in self.atoms:
            raise UnknownAtomError(atom)
        return self.var_index[atom]

    def _assumptions(self, facts: Iterable[str]) -> list[int]:
        return [self._var(a) for a in facts]

    def model(self, facts: Iterable[str] = ()) -> frozenset[str] | None:
        """Some model of the theory plus ``facts`` (atoms set true), or None.

        Unassigned original atoms are reported false.
        """
        result = dpll(self.cnf, self._assumptions(facts))
        if result is None:
            return None
        return frozenset(a for a in self.atoms if result.get(self.var_index[a], False))

    def satisfiable(self, facts: Iterable[str] = ()) -> bool:
        key = frozenset(facts)
        with self._lock:
            cached = self._sat.get(key)
        if cached is None:
            cached = dpll(self.cnf, self._assumptions(key)) is not None
            with self._lock:
                self._sat[key] = cached
        return cached

    def entails(self, facts: Iterable[str], lit: Literal) -> bool:
        """Whether theory ∪ facts ⊨ lit, by refuting theory ∪ facts ∪ {¬lit}."""
        key = (frozenset(facts), lit)
        var = self._var(lit.atom)
        with self._lock:
            cached = self._entails.get(key)
        if cached is None:
            negated = -var if lit.positive else var
            cached = dpll(self.cnf, [*self._assumptions(key[0]), negated]) is None
            with self._lock:
                self._entails[key] = cached
        return cached


@dataclass(frozen=True)
class ObjectiveKnowledge:
    """The ontology together with the objective atoms of a set of K-atoms."""

    theory: OntologyTheory
    facts: frozenset[str] = field(default_factory=frozenset)

    def entails(self, lit: Literal | str) -> bool:
        if isinstance(lit, str):
            lit = Literal(lit)
        return self.theory.entails(self.facts, lit)

    def satisfiable(self) -> bool:
        return self.theory.satisfiable(self.facts)


def entails(ob: ObjectiveKnowledge, lit: Literal | str) -> bool:
    return ob.entails(lit)


def satisfiable(ob: ObjectiveKnowledge) -> bool:
    return ob.satisfiable()


# -- truth-table oracle --------------------------------------------------------


def truth_table_columns(atoms: list[str]) -> dict[str, int]:
    """Bit-parallel truth table columns: bit ``r`` of column ``i`` is the value
    of atom ``i`` in row ``r`` of the 2^n-row table."""
    n = len(atoms)
    rows = 1 << n
    cols = {}
    for i, a in enumerate(atoms):
        block = 1 << i
        pattern = ((1 << block) - 1) << block  # block zeros then block ones
        period = block << 1
        col = 0
        for start in range(0, rows, period):
            col |= pattern << start
        cols[a] = col
    return cols


def _table(f: Formula, cols: dict[str, int], full: int) -> int:
    if isinstance(f, Var):
        return cols[f.name]
    if isinstance(f, Const):
        return full if f.value else 0
    if isinstance(f, Not):
        return full & ~_table(f.arg, cols, full)
    if isinstance(f, And):
        out = full
        for a in f.args:
            out &= _table(a, cols, full)
        return out
    if isinstance(f, Or):
        out = 0
        for a in f.args:
            out |= _table(a, cols, full)
        return out
    return (full & ~_table(f.left, cols, full)) | _table(f.right, cols, full)


def truth_table_models(formulas: Iterable[Formula], atoms: Iterable[str] = ()) -> tuple[list[str], int]:
    """Every row of the truth table over ``atoms`` (plus those occurring in
    ``formulas``) as a bitmask of satisfied rows."""
    formulas = list(formulas)
    names: set[str] = set(atoms)
    for f in formulas:
        names |= atoms_of(f)
    order = sorted(names)
    cols = truth_table_columns(order)
    full = (1 << (1 << len(order))) - 1
    rows = full
    for f in formulas:
        rows &= _table(f, cols, full)
    return order, rows


def truth_table_satisfiable(formulas: Iterable[Formula]) -> bool:
    return truth_table_models(formulas)[1] != 0


def truth_table_entails(formulas: Iterable[Formula], lit: Literal) -> bool:
    goal: Formula = Var(lit.atom) if lit.positive else Not(Var(lit.atom))
    return not truth_table_satisfiable([*formulas, Not(goal)])


def clauses_to_formulas(clauses: Iterable[Clause], var_index: dict[str, int]) -> Iterator[Formula]:
    names = {i: a for a, i in var_index.items()}
    for clause in clauses:
        lits = [Var(names[abs(l)]) if l > 0 else Not(Var(names[abs(l)])) for l in clause]
        yield disj(*lits) if lits else Const(False)
