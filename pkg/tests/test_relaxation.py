"""Relaxation search, verification, and fixed-point checks."""

import pytest
from hypothesis import given, settings, strategies as st

from lclre import (RelaxationFunction, catalog, find_edge_based_relaxation,
                   find_port_local_relaxation, find_relaxation, is_fixed_point,
                   is_generalized_fixed_point, make_problem, q,
                   verify_relaxation)
from lclre.relaxation import port_local_to_occurrence

from oracles import (brute_relaxation_search, make_rng, random_problem,
                     relaxation_search_size)


def test_identity_is_a_relaxation():
    rng = make_rng(3)
    for _ in range(20):
        p = random_problem(rng)
        ident = RelaxationFunction("port-local",
                                   {l: l for l in p.labels})
        assert verify_relaxation(ident, p, p)


def test_found_witnesses_verify():
    rng = make_rng(17)
    for _ in range(60):
        p = random_problem(rng, max_labels=3)
        q_prob = random_problem(rng, max_labels=3)
        f = find_relaxation(p, q_prob)
        if f is not None:
            assert verify_relaxation(f, p, q_prob)


def test_search_matches_oracle():
    rng = make_rng(23)
    checked = 0
    while checked < 80:
        p = random_problem(rng, max_labels=3)
        q_prob = random_problem(rng, max_labels=3)
        expect = brute_relaxation_search(p, q_prob, budget=200000)
        if expect is None:
            continue
        assert (find_relaxation(p, q_prob) is not None) == expect
        checked += 1


@settings(max_examples=30)
@given(st.integers(0, 2 ** 30))
def test_search_matches_oracle_hypothesis(seed):
    rng = make_rng(seed)
    p = random_problem(rng, max_labels=3)
    q_prob = random_problem(rng, max_labels=3)
    expect = brute_relaxation_search(p, q_prob, budget=50000)
    if expect is not None:
        assert (find_relaxation(p, q_prob) is not None) == expect


def test_port_local_implies_occurrence():
    rng = make_rng(29)
    for _ in range(40):
        p = random_problem(rng, max_labels=3)
        q_prob = random_problem(rng, max_labels=3)
        g = find_port_local_relaxation(p, q_prob)
        if g is None:
            continue
        gw = RelaxationFunction("port-local", g)
        assert verify_relaxation(gw, p, q_prob)
        occ = port_local_to_occurrence(g, p)
        assert verify_relaxation(occ, p, q_prob)
        assert find_relaxation(p, q_prob) is not None


def test_port_local_composition_closes():
    # port-local maps compose into port-local relaxations
    rng = make_rng(37)
    hits = 0
    for _ in range(200):
        a = random_problem(rng, max_labels=3)
        b = random_problem(rng, max_labels=3)
        c = random_problem(rng, max_labels=3)
        f = find_port_local_relaxation(a, b)
        g = find_port_local_relaxation(b, c)
        if f is None or g is None:
            continue
        comp = RelaxationFunction(
            "port-local", {k: g[v] for k, v in f.items()})
        assert verify_relaxation(comp, a, c)
        hits += 1
    assert hits > 0


def test_pair_condition_includes_the_same_occurrence_twice():
    # the source edge a a forces every single occurrence image to be
    # self-compatible in the target
    p = make_problem(2, ["a"], [("a", "a")], [("a", "a")])
    target = make_problem(2, ["x", "y"],
                          [("x", "y")],
                          [("x", "y")])  # no self-loops allowed
    assert find_relaxation(p, target) is None


def test_edge_based_relaxation_dual():
    rng = make_rng(43)
    for _ in range(40):
        p = random_problem(rng, max_labels=3)
        q_prob = random_problem(rng, max_labels=3)
        f = find_edge_based_relaxation(p, q_prob)
        if f is not None:
            assert f.kind == "edge-occurrence"
            assert verify_relaxation(f, p, q_prob)


def test_verify_rejects_wrong_kind_mapping():
    p = catalog.sso()
    bad = RelaxationFunction("port-local", {"I": "I"})  # O missing
    assert not verify_relaxation(bad, p, p)


def test_sinkless_orientation_is_fixed_point():
    assert is_fixed_point(catalog.sinkless_orientation(3))


def test_sso_is_not_fixed_point():
    assert not is_fixed_point(catalog.sso())


def test_relaxations_frozen_orientation_facts():
    sso = catalog.sso()
    eased = q(sso)
    assert find_relaxation(sso, eased) is not None
    assert find_relaxation(eased, sso) is None


def test_generalized_fixed_point():
    so = catalog.sinkless_orientation(3)
    assert is_generalized_fixed_point(so, catalog.trivial(3))


def test_delta_mismatch_raises():
    p = catalog.sso()
    q_prob = make_problem(2, ["a"], [("a", "a")], [("a", "a")])
    with pytest.raises(ValueError):
        find_relaxation(p, q_prob)
