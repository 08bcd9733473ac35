import itertools

import numpy as np
import pytest

from tradecontagion import (
    build_linear_system,
    builtin_network,
    longrun_payoff,
    realized_payoff,
    stationary_probability,
    toy_kernels,
    validate_network,
)
from tradecontagion.exceptions import IndexOutOfRangeError, StaleProbabilityError
from tradecontagion.payoffs import payoff_affine_terms

from conftest import random_network


@pytest.fixture
def seller_triangle():
    """Two producers, one distributor buying 0.5/0.5, one consumer buying 1.0."""
    return validate_network(
        ["env", "p1", "p2", "d", "c"],
        [("env", "p1", 0.1), ("env", "p2", 0.1), ("env", "d", 0.1), ("env", "c", 0.1),
         ("p1", "d", 0.5), ("p2", "d", 0.5), ("d", "c", 1.0)],
        env=["env"],
    )


def test_infected_isolated_player_gets_nothing():
    net = validate_network(["env", "a"], [("env", "a", 0.1)], env=["env"])
    for shape in ("benefit", "cost"):
        k = toy_kernels(intrinsic_shape=shape)
        assert realized_payoff(0, [0.4], [1.0], net, k) == 0.0


def test_consumer_pure_cost(seller_triangle):
    # all strategies zero and everyone healthy: the consumer pays full price
    k = toy_kernels()
    X = np.zeros(4)
    I = np.zeros(4)
    assert realized_payoff(3, X, I, seller_triangle, k) == pytest.approx(-1.0)


def test_distributor_payoff_both_shapes(seller_triangle):
    X = np.array([0.0, 0.0, 0.5, 0.0])
    I = np.zeros(4)
    # cost shape: 0.5(0.5-1) + (0-1)*0.5*2 + (1-0.5)*1 = -0.75
    cost = toy_kernels(intrinsic_shape="cost")
    assert realized_payoff(2, X, I, seller_triangle, cost) == pytest.approx(-0.75)
    # benefit shape flips only the intrinsic term: +0.25 - 1 + 0.5 = -0.25
    benefit = toy_kernels(intrinsic_shape="benefit")
    assert realized_payoff(2, X, I, seller_triangle, benefit) == pytest.approx(-0.25)


def test_index_out_of_range(seller_triangle):
    with pytest.raises(IndexOutOfRangeError):
        realized_payoff(4, np.zeros(4), np.zeros(4), seller_triangle, toy_kernels())


def test_longrun_isolated_zero_strategy():
    net = validate_network(["env", "a"], [("env", "a", 0.1)], env=["env"])
    k = toy_kernels()
    p = stationary_probability(build_linear_system(net, [0.0], k))
    assert longrun_payoff(0, [0.0], p, net, k) == 0.0


def test_longrun_collapses_when_no_infection(sym8):
    # all-ones profile drives p* to zero, so w equals the healthy payoff
    k = toy_kernels()
    X = np.ones(8)
    p = stationary_probability(build_linear_system(sym8, X, k))
    for i in range(8):
        w = longrun_payoff(i, X, p, sym8, k)
        pi0 = realized_payoff(i, X, np.zeros(8), sym8, k)
        assert w == pytest.approx(pi0, abs=1e-15)


def test_longrun_rejects_stale_vector(sym8):
    k = toy_kernels()
    with pytest.raises(StaleProbabilityError):
        longrun_payoff(0, np.full(8, 0.5), np.zeros(9), sym8, k)
    with pytest.raises(StaleProbabilityError):
        longrun_payoff(0, np.full(8, 0.5), np.zeros(5), sym8, k)


def test_longrun_equals_payoff_at_marginals():
    # the toy kernels are affine in each infection indicator, so the
    # expected payoff is the realized payoff evaluated at I = p*
    rng = np.random.default_rng(5)
    for shape in ("benefit", "cost"):
        k = toy_kernels(intrinsic_shape=shape)
        for _ in range(5):
            net = random_network(rng, max_players=10)
            X = rng.random(net.num_players)
            p = stationary_probability(build_linear_system(net, X, k))
            for i in range(net.num_players):
                w = longrun_payoff(i, X, p, net, k)
                pi = realized_payoff(i, X, p[net.num_env:], net, k)
                assert w == pytest.approx(pi, abs=1e-12)


def test_sandwich_property():
    # w lies between the extreme realized payoffs over all infection states
    rng = np.random.default_rng(9)
    k = toy_kernels()
    for _ in range(5):
        net = random_network(rng, max_players=6)
        n = net.num_players
        X = rng.random(n)
        p = stationary_probability(build_linear_system(net, X, k))
        for i in range(n):
            w = longrun_payoff(i, X, p, net, k)
            values = [realized_payoff(i, X, np.array(I, dtype=float), net, k)
                      for I in itertools.product((0, 1), repeat=n)]
            assert min(values) - 1e-12 <= w <= max(values) + 1e-12


def test_affine_decomposition_exact():
    rng = np.random.default_rng(21)
    k = toy_kernels(intrinsic_weights={1: 1.5})
    for _ in range(5):
        net = random_network(rng, max_players=8)
        n = net.num_players
        X = rng.random(n)
        base, coupling = payoff_affine_terms(net, X, k)
        for _ in range(10):
            I = (rng.random(n) < 0.5).astype(float)
            direct = np.array([realized_payoff(i, X, I, net, k) for i in range(n)])
            assert np.abs(base + coupling @ I - direct).max() < 1e-12


def test_longrun_is_continuous_in_strategies(sym8):
    k = toy_kernels()
    X = np.full(8, 0.5)
    p = stationary_probability(build_linear_system(sym8, X, k))
    w0 = longrun_payoff(3, X, p, sym8, k)
    h = 1e-6
    for j in range(8):
        bumped = X.copy()
        bumped[j] += h
        pb = stationary_probability(build_linear_system(sym8, bumped, k))
        wb = longrun_payoff(3, bumped, pb, sym8, k)
        assert abs(wb - w0) < 50.0 * h
