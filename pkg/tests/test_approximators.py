from hypothesis import given, strategies as st

from mknf_aft.aft import check_approximator, enumerate_stable_fixpoints, precision_leq
from mknf_aft.approximators import MknfApproximator, Variant, phi, precision_compare, psi
from mknf_aft.kb import tk
from mknf_aft.lattice import Pair, lfp, subset, subsets_of
from mknf_aft.random_kb import RandomKBConfig
from reference import RefKB
from strategies import kb_strategy

SMALL = RandomKBConfig(max_atoms=4, max_rules=5)


def K(kb, *atoms):
    return kb.encode("K" + a for a in atoms)


def names(kb, bits):
    return set(kb.decode(bits))


@given(kb_strategy(config=SMALL))
def test_bitmask_operators_match_the_set_reference(kb):
    ref = RefKB(kb)
    a_phi, a_psi = MknfApproximator(kb, Variant.PHI), MknfApproximator(kb, Variant.PSI)
    dec = lambda bits: frozenset(kb.universe.decode(bits))
    for t in subsets_of(kb.top):
        for p in subsets_of(kb.top):
            ts, ps = dec(t), dec(p)
            assert dec(a_phi.first(t, p)) == ref.phi1(ts, ps) == dec(a_psi.first(t, p))
            assert dec(a_phi.second(t, p)) == ref.phi2(ts, ps)
            assert dec(a_psi.second(t, p)) == ref.psi2(ts, ps)


def test_inconsistent_mapping_of_an_exact_pair(load):
    """Φ_K sends the exact pair ({Kc,Ki,Ke}, same) to an inconsistent pair.

    One application gives first component {Kc,Ki,Ke,Kr}; iterating the first
    projection with P fixed reaches all six K-atoms. The second component is
    {Kc,Ki,Ke} either way.
    """
    kb = load("phi_inconsistent")
    t = K(kb, "c", "i", "e")
    image = phi(kb, Pair(t, t))
    assert names(kb, image.first) == {"Kc", "Ki", "Ke", "Kr"}
    assert names(kb, image.second) == {"Kc", "Ki", "Ke"}
    assert not image.consistent
    A = MknfApproximator(kb, Variant.PHI)
    assert lfp(lambda z: A.first(z, t)) == kb.top
    (only,) = enumerate_stable_fixpoints(A, "all")
    assert only.pair == Pair(kb.top, K(kb, "c"))


def test_blocking_on_the_refuted_positive_rule(load):
    kb = load("ex7")
    A = MknfApproximator(kb, Variant.PSI)
    # K b <- K a, K e with ~b: once K e is true, K a is blocked, and vice versa
    assert A.blocked(0) == 0
    assert A.blocked(K(kb, "e")) == K(kb, "a")
    assert A.blocked(K(kb, "a")) == K(kb, "e")
    assert A.blocked(K(kb, "a", "e")) == K(kb, "a", "e")
    assert names(kb, phi(kb, Pair(K(kb, "e"), 0)).second) == {"Ka", "Kc", "Ke"}
    assert names(kb, psi(kb, Pair(K(kb, "e"), 0)).second) == {"Kc", "Ke"}


def test_psi_is_strictly_more_precise_on_blocking_example(load):
    report = precision_compare(load("ex7"))
    assert report.ok and report.exhaustive
    assert report.differing > 0


@given(kb_strategy(config=SMALL))
def test_phi_below_psi_everywhere(kb):
    a_phi, a_psi = MknfApproximator(kb, Variant.PHI), MknfApproximator(kb, Variant.PSI)
    assert precision_leq(a_phi, a_psi, a_phi.pairs()) == []


@given(kb_strategy(config=SMALL), st.sampled_from(list(Variant)))
def test_both_are_approximators(kb, variant):
    diag = check_approximator(MknfApproximator(kb, variant))
    assert diag.ok, diag


@given(kb_strategy(config=SMALL), st.sampled_from(list(Variant)))
def test_exact_consistent_pairs_follow_tk(kb, variant):
    A = MknfApproximator(kb, variant)
    for i in subsets_of(kb.top):
        image = A(Pair(i, i))
        if image.consistent:
            assert image == Pair(tk(kb, i), tk(kb, i))


@given(kb_strategy(config=SMALL), st.sampled_from(list(Variant)))
def test_first_projection_contains_its_entailments(kb, variant):
    A = MknfApproximator(kb, variant)
    for t in subsets_of(kb.top):
        out = A.first(t, kb.top)
        assert subset(kb.consequences(t).entailed, out)


def test_sampled_precision_on_larger_kbs():
    from mknf_aft.random_kb import random_corpus

    big = RandomKBConfig(min_atoms=11, max_atoms=12, max_rules=12)
    for kb in random_corpus(3, seed=7, config=big):
        report = precision_compare(kb, n_samples=300)
        assert report.ok and not report.exhaustive and report.checked == 300
