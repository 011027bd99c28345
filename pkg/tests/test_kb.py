import pytest
from hypothesis import given

from mknf_aft.approximators import MknfApproximator, Variant
from mknf_aft.aft import well_founded_fixpoint
from mknf_aft.kb import (
    Atom,
    GroundingError,
    KnowledgeBase,
    Rule,
    alternating_sequences,
    check_dl_safety,
    gamma,
    gamma_prime,
    ground,
    reduct_slash,
    reduct_slashslash,
    rules_from,
    tk,
)
from mknf_aft.lattice import Pair, check_monotone, lfp, subsets_of
from mknf_aft.ontology import Var
from mknf_aft.random_kb import RandomKBConfig
from mknf_aft.syntax import parse_kb
from strategies import kb_strategy


def names(kb, bits):
    return set(kb.decode(bits))


def test_ka_collects_rule_atoms(load):
    kb = load("ex5")
    assert kb.ka == frozenset("abcdef")
    assert names(kb, kb.top) == {"Ka", "Kb", "Kc", "Kd", "Ke", "Kf"}


def test_tk_values(load):
    kb = load("ex5")
    # K e <- not d and K f <- not b both fire on the empty set
    assert names(kb, tk(kb, 0)) == {"Ka", "Ke", "Kf"}
    assert names(kb, tk(kb, kb.encode(["Ka", "Kb"]))) == {"Ka", "Kb", "Kc", "Ke"}


def test_reducts(load):
    kb = load("ex5")
    slash = reduct_slash(kb, kb.encode(["Ke"]))
    assert [str(r) for r in slash.rules] == ["K b <- K a.", "K e <- .", "K f <- ."]
    # OB_{O,∅} refutes f, so K f is dropped by the coherent reduct only
    assert "K f <- ." in [str(r) for r in reduct_slash(kb, 0).rules]
    assert "K f <- ." not in [str(r) for r in reduct_slashslash(kb, 0).rules]
    assert reduct_slashslash(kb, 0).universe == kb.universe


def test_gamma_values(load):
    kb5, kb7 = load("ex5"), load("ex7")
    assert names(kb5, gamma(kb5, kb5.top)) == {"Ka", "Kb", "Kc"}
    assert names(kb7, gamma_prime(kb7, 0)) == {"Ka", "Kc", "Ke"}


@pytest.mark.parametrize(
    "name, limit",
    [
        ("ex5", ({"Ka", "Kb", "Kc"}, {"Ka", "Kb", "Kc", "Kd", "Ke"})),
        ("ex6", (set(), {"Ka", "Kb"})),
        ("ex7", ({"Ke"}, {"Ka", "Kc", "Ke"})),
        ("empty", (set(), set())),
    ],
)
def test_alternating_limits(load, name, limit):
    kb = load(name)
    ps, ns = alternating_sequences(kb)
    assert (names(kb, ps[-1]), names(kb, ns[-1])) == limit
    assert well_founded_fixpoint(MknfApproximator(kb, Variant.PHI)) == Pair(ps[-1], ns[-1])


def test_dl_safety():
    kb = parse_kb(
        """
        const alice.
        ontology:
          student(alice).
        rules:
          K enrolled(X) <- K student(X).
          K person(X) <- K enrolled(X), not student(X).
        """
    )
    # student/1 occurs in the ontology, so it cannot anchor X
    assert [(str(r.head), v) for r, v in check_dl_safety(kb)] == [("enrolled(X)", "X")]
    with pytest.raises(GroundingError, match="DL-safe"):
        ground(kb)


def test_grounding(load):
    kb = load("grounding")
    assert kb.is_ground
    assert len([r for r in kb.rules if r.head.pred == "student"]) == 2
    ps, _ = alternating_sequences(kb)
    assert "Kstudent(alice)" in names(kb, ps[-1])
    assert "Kstudent(bob)" not in names(kb, ps[-1])


def test_grounding_without_constants_fails():
    rule = Rule(Atom("p", ("X",)), (Atom("q", ("X",)),), ())
    with pytest.raises(GroundingError, match="no constants"):
        ground(KnowledgeBase((), (rule,)))


def test_rules_from_builds_propositional_rules():
    (r,) = rules_from([("a", ["b"], ["c"])])
    assert str(r) == "K a <- K b, not c."
    assert not r.is_positive


SMALL = RandomKBConfig(max_atoms=4, max_rules=5)


@given(kb_strategy(config=SMALL))
def test_gamma_matches_phi_projections(kb):
    A = MknfApproximator(kb, Variant.PHI)
    for s in subsets_of(kb.top):
        assert gamma(kb, s) == lfp(lambda t: A.first(t, s))
        assert gamma_prime(kb, s) == lfp(lambda p: A.second(s, p))


@given(kb_strategy(config=RandomKBConfig(max_atoms=4, max_rules=5, choice_prob=0.0)))
def test_tk_is_monotone_on_positive_kbs(kb):
    positive = KnowledgeBase(kb.ontology, tuple(Rule(r.head, r.pos, ()) for r in kb.rules))
    assert check_monotone(lambda i: tk(positive, i), positive.size).ok


def test_kb_equality_and_hash():
    a = KnowledgeBase((Var("x"),), rules_from([("x", [], [])]))
    b = KnowledgeBase((Var("x"),), rules_from([("x", [], [])]))
    assert a == b and hash(a) == hash(b)
