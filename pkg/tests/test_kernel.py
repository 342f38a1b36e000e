"""Compiled and pure kernels must be indistinguishable."""

import itertools

import pytest
from hypothesis import given, settings, strategies as st

from lclre import _kernel_py
from lclre.kernel import backend_name, dominated_by, dominated_or_equal, maximize

from oracles import make_rng

try:
    from lclre import _kernel_cy
except ImportError:
    _kernel_cy = None

needs_compiled = pytest.mark.skipif(_kernel_cy is None,
                                    reason="compiled kernel not built")


def _random_base(rng, nlab, arity, count):
    return sorted({tuple(sorted(rng.randrange(1, 1 << nlab)
                                for _ in range(arity)))
                   for _ in range(count)})


def test_backend_reports():
    assert backend_name() in ("compiled", "pure")


def test_domination_basics():
    assert dominated_by((1,), (3,))
    assert not dominated_by((3,), (1,))
    assert not dominated_by((3,), (3,))
    assert dominated_or_equal((3,), (3,))
    assert dominated_by((1, 2), (2, 3))  # via permutation
    with pytest.raises(ValueError):
        dominated_by((1,), (1, 2))


def test_domination_is_a_strict_partial_order():
    rng = make_rng(2)
    cfgs = _random_base(rng, 4, 3, 40)
    for c in cfgs:
        assert not dominated_by(c, c)
        for d in cfgs:
            if dominated_by(c, d):
                assert not dominated_by(d, c)
            for e in cfgs:
                if dominated_by(c, d) and dominated_by(d, e):
                    assert dominated_by(c, e)


def test_maximize_output_is_antichain_and_covers_base():
    rng = make_rng(9)
    for _ in range(40):
        nlab = rng.randint(2, 5)
        arity = rng.choice([2, 3])
        base = _random_base(rng, nlab, arity, rng.randint(1, 8))
        out = maximize(base, arity)
        for c in out:
            assert c == tuple(sorted(c))
            for d in out:
                if c != d:
                    assert not dominated_or_equal(c, d)
        for b in base:
            assert any(dominated_or_equal(b, c) for c in out)


def test_maximize_idempotent():
    rng = make_rng(13)
    for _ in range(25):
        base = _random_base(rng, 4, 3, rng.randint(1, 8))
        out = maximize(base, 3)
        assert maximize(sorted(out), 3) == out


@needs_compiled
@settings(max_examples=60)
@given(st.integers(0, 2 ** 30))
def test_compiled_matches_pure(seed):
    rng = make_rng(seed)
    nlab = rng.randint(2, 5)
    arity = rng.choice([2, 3, 4])
    base = _random_base(rng, nlab, arity, rng.randint(1, 7))
    assert _kernel_cy.maximize(base, arity) == _kernel_py.maximize(base, arity)
    for c, d in itertools.product(base, repeat=2):
        assert _kernel_cy.dominated_by(c, d) == _kernel_py.dominated_by(c, d)
        assert (_kernel_cy.dominated_or_equal(c, d)
                == _kernel_py.dominated_or_equal(c, d))


@needs_compiled
def test_compiled_respects_cancellation():
    from lclre.errors import OperationCancelled

    calls = []

    def poll():
        calls.append(1)
        if len(calls) > 3:
            raise OperationCancelled("stop")

    rng = make_rng(4)
    base = _random_base(rng, 6, 4, 30)
    with pytest.raises(OperationCancelled):
        _kernel_cy.maximize(base, 4, poll)
