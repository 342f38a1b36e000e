"""Zero-round solvability, counterexample gadgets, tree replay, and the
fixed-point refuter."""

import pytest

from lclre import (CapExceeded, PremiseError, catalog, make_problem, q_power)
from lclre.zeroround import (counterexample_gadget, edge_coloring_input,
                             make_rng, orientation_input, random_internal_tree,
                             refute_sso_fixed_point, replay_rule,
                             solvable_zero_round)


def test_trivial_problem_is_solvable():
    rule = solvable_zero_round(catalog.trivial(3))
    assert rule is not None
    assert rule.outputs_for(None) == ("T", "T", "T")


def test_sso_not_solvable_without_input():
    assert solvable_zero_round(catalog.sso()) is None
    gadget = counterexample_gadget(catalog.sso())
    assert gadget is not None
    text = gadget.serialize()
    assert "outputs on edge" in text


def test_edge_coloring_solvable_given_itself():
    ec = catalog.edge_coloring(3)
    rule = solvable_zero_round(ec, ec)
    assert rule is not None
    # copying the input colors is the canonical rule
    assert rule.outputs_for(("1", "2", "3")) == ("1", "2", "3")


def test_orcx_not_solvable_given_edge_coloring():
    assert solvable_zero_round(catalog.orcx(3),
                               catalog.edge_coloring(3)) is None


def test_eased_orientation_not_solvable_given_orientation():
    so = catalog.sinkless_orientation(3)
    for power in range(3):
        eased = q_power(catalog.sso(), power)
        assert solvable_zero_round(eased, so) is None
        gadget = counterexample_gadget(eased, so)
        assert gadget is not None
        # the gadget's input pair must itself be legal input
        if gadget.input_pair is not None:
            assert tuple(sorted(gadget.input_pair)) in {
                tuple(sorted(so.config_names(c))) for c in so.edge}


def test_rule_outputs_respect_views():
    ec = catalog.edge_coloring(3)
    rule = solvable_zero_round(ec, ec)
    # permuted views get consistently permuted outputs
    assert rule.outputs_for(("2", "1", "3")) == ("2", "1", "3")


def test_random_tree_generator_shapes():
    rng = make_rng(5)
    for n in (4, 10, 300):
        adj = random_internal_tree(n, 3, rng)
        degrees = [len(nbrs) for nbrs in adj]
        # every node has degree 3 (internal) or 1 (leaf)
        assert set(degrees) <= {1, 3}
        assert 3 in degrees
        edges = sum(degrees) // 2
        assert edges == len(adj) - 1  # a tree


def test_orientation_input_is_legal():
    rng = make_rng(6)
    so = catalog.sinkless_orientation(3)
    adj = random_internal_tree(200, 3, rng)
    labels = orientation_input(adj, 3, rng)
    assert replay_rule_inputs_ok(labels, adj, so)


def test_edge_coloring_input_is_legal():
    rng = make_rng(7)
    ec = catalog.edge_coloring(3)
    adj = random_internal_tree(200, 3, rng)
    labels = edge_coloring_input(adj, 3, rng)
    assert replay_rule_inputs_ok(labels, adj, ec)


def replay_rule_inputs_ok(labels, adj, input_problem):
    edge_ok = {tuple(sorted(input_problem.config_names(c)))
               for c in input_problem.edge}
    for u, nbrs in enumerate(adj):
        for port, v in enumerate(nbrs):
            vport = adj[v].index(u)
            pair = tuple(sorted((labels[(u, port)], labels[(v, vport)])))
            if pair not in edge_ok:
                return False
    return True


def test_replay_detects_no_violations_for_valid_rule():
    ec = catalog.edge_coloring(3)
    rule = solvable_zero_round(ec, ec)
    rng = make_rng(11)
    for _ in range(10):
        adj = random_internal_tree(500, 3, rng)
        labels = edge_coloring_input(adj, 3, rng)
        assert replay_rule(rule, ec, ec, adj, labels) == []


def test_refuter_on_two_label_fixed_point():
    cand = make_problem(3, ["a", "d"], [("a", "d", "d")],
                        [("a", "d"), ("d", "d")])
    rule, trace = refute_sso_fixed_point(cand)
    assert trace["i"] < trace["j"]
    so = catalog.sinkless_orientation(3)
    rng = make_rng(13)
    for _ in range(20):
        adj = random_internal_tree(1000, 3, rng)
        labels = orientation_input(adj, 3, rng)
        assert replay_rule(rule, cand, so, adj, labels) == []


def test_refuter_premise_failures():
    # not a relaxation of the both-directions orientation problem
    bad = make_problem(3, ["a"], [], [("a", "a")])
    with pytest.raises(PremiseError):
        refute_sso_fixed_point(bad)
    # relaxes it but is not a fixed point
    with pytest.raises(PremiseError):
        refute_sso_fixed_point(catalog.sso())
    # wrong delta
    with pytest.raises(PremiseError):
        refute_sso_fixed_point(make_problem(2, ["a"], [("a", "a")],
                                            [("a", "a")]))
