import numpy as np
import pytest

from tradecontagion import (
    LinearizedSystem,
    apply_T,
    build_linear_system,
    fixed_point_residual,
    initial_probability,
    iterate_to_fixed_point,
    stationary_probability,
    toy_kernels,
)
from tradecontagion.exceptions import (
    DegenerateNodeError,
    DegenerateNodeWarning,
    DimensionMismatchError,
)

from conftest import random_network


def test_full_investment_kills_transmission(sym8, toy):
    sys = build_linear_system(sym8, np.ones(8), toy)
    assert not sys.s_matrix[1:].any()
    assert np.all(sys.r_diag[1:] == 0.0)


def test_single_player_system(single_player, toy):
    sys = build_linear_system(single_player, [0.5], toy)
    assert sys.s_matrix[1, 0] == pytest.approx(0.05)
    assert sys.r_diag[1] == pytest.approx(0.5)


def test_sym8_nilpotency(sym8, toy):
    sys = build_linear_system(sym8, np.random.default_rng(0).random(8), toy)
    assert not np.linalg.matrix_power(sys.s_matrix, 9).any()


def test_sender_attribution_uses_seller_strategy(chain3):
    X = np.array([0.2, 0.6, 0.9])
    recv = build_linear_system(chain3, X, toy_kernels(attribution="receiver"))
    send = build_linear_system(chain3, X, toy_kernels(attribution="sender"))
    # edge A -> B: receiver uses x_B twice, sender x_A twice
    assert recv.s_matrix[2, 1] == pytest.approx((1 - 0.6) ** 2)
    assert send.s_matrix[2, 1] == pytest.approx((1 - 0.2) ** 2)
    # the environment column always uses the receiver's uptake
    assert recv.s_matrix[1, 0] == send.s_matrix[1, 0]


def test_apply_T_zero_inflow_fixed_point(toy):
    from tradecontagion import validate_network

    net = validate_network(["env", "a"], [], env=["env"])
    sys = build_linear_system(net, [0.5], toy)
    p = initial_probability(sys)
    assert np.array_equal(apply_T(sys, p), p)


def test_apply_T_full_investment_collapses(sym8, toy):
    sys = build_linear_system(sym8, np.ones(8), toy)
    p = np.ones(9) * 0.7
    p[0] = 1.0
    out = apply_T(sys, p)
    assert out[0] == 1.0
    assert np.all(out[1:] == 0.0)


def test_apply_T_single_step(single_player, toy):
    sys = build_linear_system(single_player, [0.5], toy)
    out = apply_T(sys, initial_probability(sys))
    assert out[1] == pytest.approx(0.05)


def test_apply_T_dimension_mismatch(single_player, toy):
    sys = build_linear_system(single_player, [0.5], toy)
    with pytest.raises(DimensionMismatchError):
        apply_T(sys, np.ones(3))


def test_stationary_full_investment(sym8, toy):
    sys = build_linear_system(sym8, np.ones(8), toy)
    p = stationary_probability(sys)
    assert np.all(p[1:] == 0.0)


def test_stationary_absorbing_infection(single_player, toy):
    sys = build_linear_system(single_player, [0.0], toy)
    assert stationary_probability(sys)[1] == 1.0


def test_stationary_single_player_closed_form(single_player, toy):
    sys = build_linear_system(single_player, [0.5], toy)
    p = stationary_probability(sys)
    assert p[1] == pytest.approx(1.0 / 11.0, abs=1e-15)
    # oracle: iterate the map a thousand steps from scratch
    q = initial_probability(sys)
    for _ in range(1000):
        q = apply_T(sys, q)
    assert q[1] == pytest.approx(p[1], abs=1e-12)
    assert fixed_point_residual(sys, p) <= 1e-15


def test_degenerate_node_convention():
    from tradecontagion import validate_network

    net = validate_network(["env", "a"], [], env=["env"])
    sys = build_linear_system(net, [0.0], toy_kernels(epsilon=0.0))
    with pytest.warns(DegenerateNodeWarning):
        p = stationary_probability(sys)
    assert p[1] == 0.0
    with pytest.raises(DegenerateNodeError):
        stationary_probability(sys, on_degenerate="error")


def test_iteration_from_fixed_point(single_player, toy):
    sys = build_linear_system(single_player, [0.5], toy)
    p = stationary_probability(sys)
    result = iterate_to_fixed_point(sys, p, tol=1e-12)
    assert result.converged and result.iterations == 1


def test_iteration_matches_forward_substitution(sym8, toy):
    rng = np.random.default_rng(3)
    sys = build_linear_system(sym8, rng.random(8), toy)
    p = stationary_probability(sys)
    for _ in range(5):
        p0 = initial_probability(sys, 0.0)
        p0[1:] = rng.random(8)
        result = iterate_to_fixed_point(sys, p0, tol=1e-13)
        assert result.converged
        assert np.abs(result.p - p).max() < 1e-10


def test_iteration_reports_cap():
    sys = LinearizedSystem(
        s_matrix=np.array([[0.0, 0.0], [0.3, 0.0]]),
        r_diag=np.array([1.0, 0.999]),
        num_env=1,
    )
    result = iterate_to_fixed_point(sys, tol=1e-15, max_iter=3)
    assert not result.converged and result.iterations == 3


def test_scalar_recurrence_embedding():
    # y' = a + b y with a = 0.3, b = 0.5 embeds as S = [0.3], R = [0.8];
    # the limit is a / (1 - b) = 0.6
    sys = LinearizedSystem(
        s_matrix=np.array([[0.0, 0.0], [0.3, 0.0]]),
        r_diag=np.array([1.0, 0.8]),
        num_env=1,
    )
    p = stationary_probability(sys)
    assert p[1] == pytest.approx(0.6, abs=1e-15)
    result = iterate_to_fixed_point(sys, tol=1e-14)
    assert result.p[1] == pytest.approx(0.6, abs=1e-10)


@pytest.mark.parametrize("b_limit", [0.55, 0.0, -0.6])
def test_elementary_recurrence_lemma(b_limit):
    # y_k = a(x_k) + b(x_k) y_{k-1} with x_k -> x converges to a(x)/(1-b(x));
    # the three parameter signs exercise the three proof cases.
    def a(x):
        return 0.4 + 0.1 * x

    def b(x):
        return b_limit + 0.2 * x

    x_limit = 0.0
    xs = [2.0 ** (1 - k) for k in range(1, 400)]  # x_k -> 0
    y = 0.9
    for xk in xs:
        y = a(xk) + b(xk) * y
    expected = a(x_limit) / (1.0 - b(x_limit))
    assert y == pytest.approx(expected, abs=1e-8)


def test_randomized_fixed_point_property():
    rng = np.random.default_rng(42)
    k = toy_kernels(epsilon=0.1)
    for _ in range(10):
        net = random_network(rng)
        X = rng.random(net.num_players)
        sys = build_linear_system(net, X, k)
        p = stationary_probability(sys)
        assert np.all(p >= 0.0) and np.all(p <= 1.0)
        assert np.all(p[: net.num_env] == 1.0)
        assert fixed_point_residual(sys, p) <= 1e-12
        for _ in range(3):
            p0 = initial_probability(sys)
            p0[net.num_env:] = rng.random(net.num_players)
            res = iterate_to_fixed_point(sys, p0, tol=1e-13)
            assert res.converged and np.abs(res.p - p).max() < 1e-10


def test_monotonicity_in_own_strategy():
    # receiver mode: investing more never raises your own stationary marginal
    rng = np.random.default_rng(11)
    k = toy_kernels(epsilon=0.1)
    for _ in range(10):
        net = random_network(rng, max_players=12)
        X = rng.random(net.num_players)
        i = int(rng.integers(net.num_players))
        bumped = X.copy()
        bumped[i] = min(1.0, X[i] + 0.1)
        p_lo = stationary_probability(build_linear_system(net, X, k))
        p_hi = stationary_probability(build_linear_system(net, bumped, k))
        assert p_hi[net.num_env + i] <= p_lo[net.num_env + i] + 1e-12
