import numpy as np
import pytest

from tradecontagion import BUILTIN_NAMES, NodeRole, builtin_network, validate_network
from tradecontagion.exceptions import (
    CycleDetectedError,
    NegativeWeightError,
    UnknownBuiltinError,
    WeightRowOverflowWarning,
)

from conftest import random_network


def test_chain_already_ordered():
    net = validate_network(["env", "A", "B"],
                           [("env", "A", 0.1), ("A", "B", 1.0)], env=["env"])
    assert net.labels == ("env", "A", "B")
    assert net.num_env == 1 and net.num_players == 2
    assert net.weights[1, 0] == 0.1
    assert net.weights[2, 1] == 1.0


def test_unordered_input_is_sorted_with_env_first():
    net = validate_network(["B", "A", "env"],
                           [("env", "A", 0.2), ("A", "B", 0.5)], env=["env"])
    assert net.labels == ("env", "A", "B")
    # permutation maps input positions to stored positions
    assert net.permutation == (2, 1, 0)


def test_two_cycle_detected():
    with pytest.raises(CycleDetectedError):
        validate_network(["A", "B"], [("A", "B", 0.5), ("B", "A", 0.5)])


def test_self_loop_detected():
    with pytest.raises(CycleDetectedError):
        validate_network(["A"], [("A", "A", 0.5)])


def test_negative_weight_rejected():
    with pytest.raises(NegativeWeightError):
        validate_network(["A", "B"], [("A", "B", -0.1)])


def test_weight_above_one_rejected():
    with pytest.raises(ValueError):
        validate_network(["A", "B"], [("A", "B", 1.2)])


def test_env_cannot_have_incoming_edges():
    with pytest.raises(ValueError):
        validate_network(["env", "A"], [("A", "env", 0.1)], env=["env"])


def test_duplicate_labels_rejected():
    with pytest.raises(ValueError):
        validate_network(["A", "A"], [])


def test_unknown_label_in_edge():
    with pytest.raises(ValueError):
        validate_network(["A"], [("A", "B", 0.1)])


def test_row_overflow_warns_but_validates():
    with pytest.warns(WeightRowOverflowWarning):
        net = validate_network(
            ["a", "b", "c"],
            [("a", "c", 0.9), ("b", "c", 0.6)],
        )
    assert net.num_players == 3


def test_builtin_rows_do_not_warn(recwarn):
    # a full trade row plus environment exposure is the normal regime
    for name in BUILTIN_NAMES:
        builtin_network(name, epsilon=0.3)
    assert not [w for w in recwarn if issubclass(w.category, WeightRowOverflowWarning)]


def test_unknown_builtin():
    with pytest.raises(UnknownBuiltinError):
        builtin_network("sym9")


def test_sym8_structure():
    net = builtin_network("sym8", epsilon=0.1)
    assert net.num_env == 1 and net.num_players == 8
    for lab in ("s1", "s2"):
        i = net.player_index(lab)
        sellers = net.sellers_of(i)
        assert {net.player_label(j) for j in sellers} == {"p1", "p2"}
        assert net.weights[net.num_env + i, net.num_env + sellers].sum() == 1.0
    # one consumer buys only from s1, one only from s2, two from both
    seller_sets = [frozenset(net.player_label(j) for j in net.sellers_of(net.player_index(u)))
                   for u in ("u1", "u2", "u3", "u4")]
    assert seller_sets.count(frozenset({"s1"})) == 1
    assert seller_sets.count(frozenset({"s2"})) == 1
    assert seller_sets.count(frozenset({"s1", "s2"})) == 2


def test_asym8_market_shares():
    net = builtin_network("asym8", epsilon=0.1)
    a1, a2 = net.player_index("a1"), net.player_index("a2")
    m = net.num_env
    sales_a1 = net.weights[m:, m + a1].sum()
    sales_a2 = net.weights[m:, m + a2].sum()
    assert sales_a1 == 3.5 and sales_a2 == 0.5


def test_mild_monopoly_market_shares():
    net = builtin_network("mild_monopoly15", epsilon=0.1)
    m = net.num_env
    shares = {lab: net.weights[m:, m + net.player_index(lab)].sum()
              for lab in ("mm1", "mm2", "mm3")}
    assert shares["mm1"] == pytest.approx(1.0)
    assert shares["mm2"] == pytest.approx(8.0)
    assert shares["mm3"] == pytest.approx(1.0)


def test_total_monopoly_structure():
    net = builtin_network("total_monopoly15", epsilon=0.1)
    for u in (f"u{k}" for k in range(1, 11)):
        sellers = net.sellers_of(net.player_index(u))
        assert [net.player_label(j) for j in sellers] == ["tm2"]
    for lab in ("tm1", "tm3"):
        assert net.buyers_of(net.player_index(lab)).size == 0


@pytest.mark.parametrize("name", BUILTIN_NAMES)
def test_builtin_purchase_rows_sum_to_one(name):
    net = builtin_network(name, epsilon=0.07)
    block = net.player_block()
    for i in range(net.num_players):
        row = block[i].sum()
        if net.sellers_of(i).size:
            assert row == pytest.approx(1.0, abs=1e-12)
        else:
            assert row == 0.0


@pytest.mark.parametrize("name", BUILTIN_NAMES)
def test_player_block_nilpotent(name):
    net = builtin_network(name)
    block = net.player_block()
    assert not np.linalg.matrix_power(block, net.num_players).any()


def test_random_networks_nilpotent():
    rng = np.random.default_rng(7)
    for _ in range(20):
        net = random_network(rng)
        power = np.linalg.matrix_power(net.player_block(), net.num_players)
        assert not power.any()


def test_revalidation_idempotent():
    net = builtin_network("asym8", epsilon=0.2)
    nodes, env, edges = net.to_node_edge_lists()
    again = validate_network(nodes, edges, env=env)
    assert again.labels == net.labels
    assert np.array_equal(again.weights, net.weights)


def test_roles():
    net = builtin_network("sym8")
    roles = net.roles()
    assert roles[0] is NodeRole.ENVIRONMENT
    by_label = dict(zip(net.labels, roles))
    assert by_label["p1"] is NodeRole.PRODUCER
    assert by_label["s1"] is NodeRole.DISTRIBUTOR
    assert by_label["u1"] is NodeRole.CONSUMER


def test_isolated_player_role_is_generic():
    net = validate_network(["env", "lone"], [], env=["env"])
    assert net.roles()[1] is NodeRole.GENERIC


def test_weights_are_immutable(sym8):
    with pytest.raises(ValueError):
        sym8.weights[0, 0] = 1.0
