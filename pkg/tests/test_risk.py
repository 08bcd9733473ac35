import numpy as np
import pytest

from tradecontagion import (
    LinearizedSystem,
    build_linear_system,
    builtin_network,
    naive_risk,
    r0_per_node,
    risk_report,
    stationary_probability,
    toy_kernels,
    validate_network,
    weighted_risk,
)
from tradecontagion.exceptions import DimensionMismatchError


def test_chain_r0_hand_powered(chain3):
    # per-edge factor (1-0.5)^2 = 0.25; A reaches B directly and C in two hops
    k = toy_kernels(attribution="receiver")
    sys = build_linear_system(chain3, np.full(3, 0.5), k)
    r0 = r0_per_node(sys)
    assert r0[0] == pytest.approx(0.25 + 0.0625)
    assert r0[1] == pytest.approx(0.25)
    assert r0[2] == 0.0


def test_full_investment_zero_scores(sym8):
    sys = build_linear_system(sym8, np.ones(8), toy_kernels())
    assert not r0_per_node(sys).any()


def test_terminal_consumers_score_zero(sym8):
    sys = build_linear_system(sym8, np.full(8, 0.3), toy_kernels())
    r0 = r0_per_node(sys)
    for u in ("u1", "u2", "u3", "u4"):
        assert r0[sym8.player_index(u)] == 0.0


def test_power_series_terminates_exactly():
    rng = np.random.default_rng(2)
    n = 12
    block = np.tril(rng.random((n, n)), k=-1) * 0.2
    s = np.zeros((n + 1, n + 1))
    s[1:, 1:] = block
    s[1:, 0] = 0.05
    sys = LinearizedSystem(s_matrix=s, r_diag=np.ones(n + 1) * 0.5, num_env=1)
    # closed form against the truncated Neumann series
    expected = np.zeros(n)
    power = block.copy()
    for _ in range(n + 5):
        expected += power.sum(axis=0)
        power = power @ block
    assert np.allclose(r0_per_node(sys), expected, atol=1e-15)


def test_r0_monotone_in_transmission():
    base = np.zeros((4, 4))
    base[2, 1] = 0.3
    base[3, 2] = 0.4
    sys_lo = LinearizedSystem(s_matrix=base, r_diag=np.array([1.0, 0.5, 0.5, 0.5]),
                              num_env=1)
    bumped = base.copy()
    bumped[3, 1] = 0.2
    sys_hi = LinearizedSystem(s_matrix=bumped, r_diag=np.array([1.0, 0.5, 0.5, 0.5]),
                              num_env=1)
    assert np.all(r0_per_node(sys_hi) >= r0_per_node(sys_lo))


def test_naive_risk_edges():
    assert naive_risk(np.array([1.0, 0.0, 0.0]), num_env=1) == 0.0
    assert naive_risk(np.array([1.0, 1.0, 0.2]), num_env=1) == 1.0
    assert naive_risk(np.array([1.0, 0.5, 0.5]), num_env=1) == pytest.approx(0.75)


def test_pinned_zero_strategy_forces_certain_infection(single_player):
    k = toy_kernels()
    p = stationary_probability(build_linear_system(single_player, [0.0], k))
    assert naive_risk(p, num_env=1) == 1.0


def test_weighted_risk_no_edges():
    net = validate_network(["env", "a", "b"],
                           [("env", "a", 0.1), ("env", "b", 0.1)], env=["env"])
    k = toy_kernels()
    X = np.array([0.4, 0.6])
    sys = build_linear_system(net, X, k)
    r0 = r0_per_node(sys)
    p = stationary_probability(sys)
    assert weighted_risk(r0, p, num_env=1) == 0.0


def test_weighted_risk_dimension_mismatch():
    with pytest.raises(DimensionMismatchError):
        weighted_risk(np.zeros(3), np.array([1.0, 0.1]), num_env=1)


def test_risk_invariant_to_relabeling():
    # same graph entered in two different input orders
    edges = [("env", "a", 0.1), ("env", "b", 0.1), ("env", "c", 0.1),
             ("a", "b", 0.7), ("b", "c", 0.6)]
    net1 = validate_network(["env", "a", "b", "c"], edges, env=["env"])
    net2 = validate_network(["c", "b", "a", "env"], edges, env=["env"])
    k = toy_kernels()
    X = {"a": 0.2, "b": 0.5, "c": 0.8}
    baseline = risk_report(net1, np.array([0.2, 0.5, 0.8]), k)
    assert baseline.naive_risk == pytest.approx(0.4220989366620436, abs=1e-12)
    for net in (net1, net2):
        x = np.array([X[net.player_label(i)] for i in range(3)])
        rep = risk_report(net, x, k)
        assert rep.naive_risk == pytest.approx(baseline.naive_risk, abs=1e-12)
        assert rep.weighted_risk == pytest.approx(baseline.weighted_risk, abs=1e-12)


def test_risk_report_attribution_override(sym8):
    k = toy_kernels(attribution="receiver")
    X = np.linspace(0.1, 0.8, 8)
    same = risk_report(sym8, X, k)
    other = risk_report(sym8, X, k, attribution="sender")
    assert same.attribution == "receiver"
    assert other.attribution == "sender"
    assert same.naive_risk == other.naive_risk  # marginals unchanged
    assert same.weighted_risk != other.weighted_risk
