"""The easing operators: maximization steps, fresh alphabets, caps."""

import pytest
from hypothesis import given, settings, strategies as st

from lclre import (CapExceeded, catalog, is_equivalent, make_problem, q,
                   q_power, r_star, re, rere)
from lclre.roundelim import maximize_constraint, r_star_view

from oracles import brute_maximize, make_rng, random_problem


def test_q_is_rere_of_re():
    for p in (catalog.sso(), catalog.sinkless_orientation(3),
              catalog.edge_coloring(3)):
        assert q(p) == rere(re(p))


def test_maximize_constraint_matches_oracle():
    rng = make_rng(21)
    for _ in range(60):
        p = random_problem(rng)
        for which in ("edge", "node"):
            assert maximize_constraint(p, which) == brute_maximize(p, which)


@settings(max_examples=40)
@given(st.integers(0, 2 ** 30))
def test_maximize_constraint_matches_oracle_hypothesis(seed):
    rng = make_rng(seed)
    p = random_problem(rng)
    assert maximize_constraint(p, "edge") == brute_maximize(p, "edge")


def test_sso_easing_closed_form():
    # frozen label counts: 2, 3, 5, 7, 9 for k = 0..4
    for k, expect in enumerate((2, 3, 5, 7, 9)):
        eased = q_power(catalog.sso(), k)
        assert len(eased.used_labels()) == expect
        assert is_equivalent(eased, catalog.sso_qk_closed_form(k))


def test_easing_keeps_delta_and_renames_sidecar():
    eased = q(catalog.sso())
    assert eased.delta == 3
    assert eased.renames is not None
    fresh = {name for name, _ in eased.renames}
    assert fresh == set(eased.labels)


def test_q_power_zero_is_identity():
    p = catalog.sso()
    assert q_power(p, 0) == p


def test_label_cap_raises_with_partial_index():
    with pytest.raises(CapExceeded) as err:
        q_power(catalog.sso(), 4, label_cap=4)
    assert err.value.partial_index == 1  # one full iteration fit the cap


def test_config_cap_raises():
    with pytest.raises(CapExceeded):
        q(catalog.orcx(4), config_cap=10)


def test_r_star_frozen_orientation_shape():
    so = catalog.sinkless_orientation(3)
    image = r_star(so)
    # labels are the nonempty subsets {I}, {O}, {I O}
    assert len(image.labels) == 3
    masks = set(image.label_masks)
    assert masks == {1, 2, 3}
    # every node configuration admits a choice with an outgoing port
    view = r_star_view(so)
    for cfg in image.node:
        choice = view.select_choice(tuple(image.label_masks[i] for i in cfg))
        assert choice is not None


def test_r_star_edges_are_full_cross_products():
    rng = make_rng(31)
    for _ in range(15):
        p = random_problem(rng, max_labels=3)
        image = r_star(p)
        for cfg in image.edge:
            m1, m2 = (image.label_masks[i] for i in cfg)
            for a in range(m1.bit_length()):
                if not m1 >> a & 1:
                    continue
                for b in range(m2.bit_length()):
                    if m2 >> b & 1:
                        assert tuple(sorted((a, b))) in p.edge


def test_easing_makes_problems_no_harder():
    # one easing round always admits a relaxation from the original
    from lclre import find_relaxation
    rng = make_rng(41)
    for _ in range(10):
        p = random_problem(rng, max_labels=3)
        if not p.node or not p.edge:
            continue
        eased = q(p)
        assert find_relaxation(p, eased) is not None


def test_orcx_is_q_fixed_point_both_deltas():
    from lclre import canonical_form
    for delta in (3, 4):
        p = catalog.orcx(delta)
        assert canonical_form(q(p)) == canonical_form(p)
