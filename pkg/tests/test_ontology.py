import itertools

import pytest
from hypothesis import given, strategies as st

from mknf_aft.ontology import (
    AUX_PREFIX,
    And,
    Const,
    Implies,
    Literal,
    Not,
    ObjectiveKnowledge,
    OntologyTheory,
    Or,
    UnknownAtomError,
    Var,
    atoms_of,
    compile_cnf,
    dpll,
    entails,
    evaluate,
    nnf,
    satisfiable,
    truth_table_entails,
    truth_table_models,
    truth_table_satisfiable,
)
from strategies import formulas

a, b, c, f, h = (Var(x) for x in "abcfh")
EX5_O = And((a, Implies(b, c), Not(f)))


def ob(formulas_, facts=()):
    return ObjectiveKnowledge(OntologyTheory(formulas_, extra_atoms="abcf"), frozenset(facts))


def test_entailment_examples():
    assert entails(ob([EX5_O], "ab"), Literal("c"))
    assert entails(ob([EX5_O]), Literal("f", False))
    assert not entails(ob([]), Literal("a"))


def test_satisfiability_examples():
    assert not satisfiable(ob([Not(a)], "ab"))
    six = OntologyTheory([And((Implies(a, h), Implies(b, Not(h))))])
    assert not six.satisfiable({"a", "b"})
    assert six.satisfiable({"a"})
    assert satisfiable(ob([]))


def test_unknown_atom_is_an_error():
    with pytest.raises(UnknownAtomError):
        ob([EX5_O]).entails(Literal("zz"))


def test_cnf_examples():
    clauses, index = compile_cnf([Implies(a, b)])
    assert clauses == [(-index["a"], index["b"])]
    clauses, index = compile_cnf([Not(And((a, b)))])
    assert clauses == [(-index["a"], -index["b"])]
    clauses, index = compile_cnf([And((Or((a, b)), Implies(a, Not(b))))])
    assert sorted(map(sorted, clauses)) == sorted(
        map(sorted, [(index["a"], index["b"]), (-index["a"], -index["b"])])
    )
    assert not any(name.startswith(AUX_PREFIX) for name in index)


def test_nested_formulas_use_reserved_auxiliaries():
    clauses, index = compile_cnf([Or((And((a, b)), And((c, Not(a)))))])
    aux = [n for n in index if n.startswith(AUX_PREFIX)]
    assert len(aux) == 2


def test_constants_fold():
    assert nnf(And((a, Const(False)))) == Const(False)
    assert nnf(Or((Not(a), Const(True)))) == Const(True)
    assert compile_cnf([Const(False)])[0] == [()]
    assert dpll([()]) is None


def _models_over(clauses, index, original):
    """Original-atom assignments extendable to a model of ``clauses``."""
    names = list(index)
    out = set()
    for values in itertools.product([False, True], repeat=len(names)):
        assign = dict(zip(names, values))
        if all(any(assign[_name(index, l)] == (l > 0) for l in cl) for cl in clauses):
            out.add(frozenset(x for x in original if assign[x]))
    return out


def _name(index, lit):
    return next(n for n, i in index.items() if i == abs(lit))


@given(st.lists(formulas("abcd", max_leaves=6), min_size=1, max_size=2))
def test_cnf_is_equivalent_over_original_atoms(fs):
    original = sorted(set().union(*map(atoms_of, fs)))
    clauses, index = compile_cnf(fs, {x: i + 1 for i, x in enumerate(original)})
    if len(index) > 14:
        return
    expected = {
        frozenset(x for x, v in zip(original, values) if v)
        for values in itertools.product([False, True], repeat=len(original))
        if all(evaluate(g, {x for x, v in zip(original, values) if v}) for g in fs)
    }
    assert _models_over(clauses, index, original) == expected


@given(st.lists(formulas("abcdef"), max_size=3), st.sets(st.sampled_from("abcdef")), st.sampled_from("abcdef"), st.booleans())
def test_dpll_agrees_with_truth_tables(fs, facts, atom, positive):
    theory = OntologyTheory(fs, extra_atoms="abcdef")
    with_facts = list(fs) + [Var(x) for x in sorted(facts)]
    assert theory.satisfiable(facts) == truth_table_satisfiable(with_facts)
    lit = Literal(atom, positive)
    assert theory.entails(facts, lit) == truth_table_entails(with_facts, lit)
    model = theory.model(facts)
    if model is not None:
        assert all(evaluate(g, model) for g in with_facts)


@given(st.lists(formulas("abcd"), max_size=2), st.sets(st.sampled_from("abcd")), st.sets(st.sampled_from("abcd")))
def test_entailment_is_monotone_and_explosive(fs, s1, extra):
    theory = OntologyTheory(fs, extra_atoms="abcd")
    s2 = s1 | extra
    for atom in "abcd":
        for lit in (Literal(atom), Literal(atom, False)):
            if theory.entails(s1, lit):
                assert theory.entails(s2, lit)
            if not theory.satisfiable(s2):
                assert theory.entails(s2, lit)


def test_truth_table_rows_count_models():
    order, rows = truth_table_models([Or((a, b))])
    assert order == ["a", "b"]
    assert bin(rows).count("1") == 3


def test_memoised_answers_are_stable_across_threads():
    from concurrent.futures import ThreadPoolExecutor

    theory = OntologyTheory([EX5_O])
    queries = [(frozenset(s), Literal(x, p)) for s in ("", "a", "ab") for x in "abcf" for p in (True, False)]
    with ThreadPoolExecutor(4) as pool:
        parallel = list(pool.map(lambda q: theory.entails(*q), queries * 4))
    assert parallel == [truth_table_entails([EX5_O, *map(Var, sorted(s))], l) for s, l in queries] * 4


def test_formula_printing_roundtrips_through_parser():
    from mknf_aft.syntax import parse_kb

    g = And((Implies(a, Or((b, Not(c)))), Not(And((a, b)))))
    kb = parse_kb(f"ontology:\n  {g}.\nrules:\n")
    assert kb.ontology == (g,)
