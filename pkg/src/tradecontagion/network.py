"""Acyclic trade networks with environment sources.

A trade network is a weighted DAG. Edges point in the direction goods
travel (seller to buyer); the stored weight matrix is indexed the other
way round: ``weights[buyer, seller]`` is the base probability that the
buyer transacts with that upstream seller. Environment sources are
always-infected nodes with indegree zero that expose every connected
player to outside contagion.

Nodes are kept in a topological order with environment sources first,
so the player-to-player block of ``weights`` is strictly lower
triangular and therefore nilpotent.
"""
from __future__ import annotations

import enum
import heapq
import warnings
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from .exceptions import (
    CycleDetectedError,
    DimensionMismatchError,
    IndexOutOfRangeError,
    NegativeWeightError,
    UnknownBuiltinError,
    WeightRowOverflowWarning,
)

BUILTIN_NAMES = (
    "sym8",
    "asym8",
    "competitive15",
    "mild_monopoly15",
    "total_monopoly15",
)

_ROW_SUM_TOL = 1e-9


class NodeRole(enum.Enum):
    """Coarse classification of a node by its player-block degrees."""

    ENVIRONMENT = "environment"
    PRODUCER = "producer"
    DISTRIBUTOR = "distributor"
    CONSUMER = "consumer"
    GENERIC = "generic"


@dataclass(frozen=True)
class TradeNetwork:
    """Validated, topologically ordered trade network.

    Attributes:
        num_env: number of environment sources (indices ``0..m-1``).
        num_players: number of players (indices ``m..m+n-1``).
        weights: ``(m+n, m+n)`` matrix, ``weights[i, j]`` = probability
            that node ``i`` buys from upstream node ``j`` (``j < i``).
        labels: node labels in stored (topological) order.
        permutation: ``permutation[k]`` = position of input node ``k``
            in the stored order.
    """

    num_env: int
    num_players: int
    weights: np.ndarray
    labels: tuple[str, ...]
    permutation: tuple[int, ...] = field(default=())

    def __post_init__(self):
        w = np.asarray(self.weights, dtype=float)
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)
        if not self.permutation:
            object.__setattr__(self, "permutation", tuple(range(self.num_nodes)))

    @property
    def num_nodes(self) -> int:
        return self.num_env + self.num_players

    @property
    def player_indices(self) -> range:
        return range(self.num_env, self.num_nodes)

    def player_label(self, i: int) -> str:
        """Label of player ``i`` (player indices count from 0)."""
        return self.labels[self.num_env + i]

    def player_index(self, label: str) -> int:
        """Player index (0-based among players) of a label."""
        idx = self.labels.index(label)
        if idx < self.num_env:
            raise IndexOutOfRangeError(f"{label!r} is an environment node")
        return idx - self.num_env

    def sellers_of(self, i: int) -> np.ndarray:
        """Player indices of the player-sellers of player ``i``."""
        m = self.num_env
        row = self.weights[m + i, m:m + i]
        return np.nonzero(row)[0]

    def buyers_of(self, i: int) -> np.ndarray:
        """Player indices of the player-buyers of player ``i``."""
        m = self.num_env
        col = self.weights[m + i + 1:, m + i]
        return np.nonzero(col)[0] + i + 1

    def env_exposure(self, i: int) -> float:
        """Total environment edge weight into player ``i``."""
        return float(self.weights[self.num_env + i, : self.num_env].sum())

    def player_block(self) -> np.ndarray:
        """Strictly lower-triangular player-to-player weight block."""
        m = self.num_env
        return self.weights[m:, m:]

    def roles(self) -> list[NodeRole]:
        """Role of every node in stored order."""
        out = [NodeRole.ENVIRONMENT] * self.num_env
        for i in range(self.num_players):
            has_up = self.sellers_of(i).size > 0
            has_down = self.buyers_of(i).size > 0
            if has_up and has_down:
                out.append(NodeRole.DISTRIBUTOR)
            elif has_down:
                out.append(NodeRole.PRODUCER)
            elif has_up:
                out.append(NodeRole.CONSUMER)
            else:
                out.append(NodeRole.GENERIC)
        return out

    def to_node_edge_lists(self) -> tuple[list[str], list[str], list[tuple[str, str, float]]]:
        """Inverse of :func:`validate_network`: labels, env labels, edges.

        Edges are emitted seller -> buyer (goods direction).
        """
        nodes = list(self.labels)
        env = list(self.labels[: self.num_env])
        edges = []
        for i in range(self.num_nodes):
            for j in range(i):
                w = float(self.weights[i, j])
                if w > 0.0:
                    edges.append((self.labels[j], self.labels[i], w))
        return nodes, env, edges


def check_strategies(network: TradeNetwork, strategies) -> np.ndarray:
    """Validate a strategy profile against a network; returns a float array."""
    x = np.asarray(strategies, dtype=float)
    if x.shape != (network.num_players,):
        raise DimensionMismatchError(
            f"strategy profile has shape {x.shape}, expected ({network.num_players},)")
    if np.any(x < 0.0) or np.any(x > 1.0) or not np.all(np.isfinite(x)):
        raise ValueError("strategies must lie in [0, 1]")
    return x


def validate_network(
    raw_nodes: Sequence[str],
    raw_edges: Iterable[tuple[str, str, float]],
    env: Sequence[str] = (),
) -> TradeNetwork:
    """Validate and topologically order a trade network.

    Args:
        raw_nodes: node labels; input order is the tie-break for the
            topological sort, so validation is reproducible.
        raw_edges: ``(seller, buyer, weight)`` triples in the direction
            goods travel.
        env: labels of environment source nodes.

    Returns:
        A :class:`TradeNetwork` whose stored order puts environment
        nodes first and every edge from a lower to a higher index.

    Raises:
        CycleDetectedError: the graph has a directed cycle.
        NegativeWeightError: an edge weight is negative.
        ValueError: unknown labels, duplicate labels, weights above 1,
            or an environment node with incoming edges.
    """
    labels = list(raw_nodes)
    if len(set(labels)) != len(labels):
        raise ValueError("duplicate node labels")
    env_set = set(env)
    unknown_env = env_set - set(labels)
    if unknown_env:
        raise ValueError(f"environment labels not in node list: {sorted(unknown_env)}")
    pos = {lab: k for k, lab in enumerate(labels)}

    edges = []
    for seller, buyer, w in raw_edges:
        if seller not in pos or buyer not in pos:
            raise ValueError(f"edge ({seller!r}, {buyer!r}) references unknown node")
        w = float(w)
        if w < 0.0:
            raise NegativeWeightError(f"edge ({seller!r}, {buyer!r}) has weight {w}")
        if w > 1.0:
            raise ValueError(f"edge ({seller!r}, {buyer!r}) has weight {w} > 1")
        if buyer in env_set:
            raise ValueError(f"environment node {buyer!r} cannot have incoming edges")
        if seller == buyer:
            raise CycleDetectedError(f"self-loop at {seller!r}")
        edges.append((seller, buyer, w))

    # Kahn's algorithm; the frontier is a heap keyed on (not-env, input
    # position) so environment sources come first and ties follow input order.
    indeg = {lab: 0 for lab in labels}
    succ: dict[str, list[str]] = {lab: [] for lab in labels}
    for seller, buyer, _ in edges:
        indeg[buyer] += 1
        succ[seller].append(buyer)
    frontier = [(lab not in env_set, pos[lab], lab) for lab in labels if indeg[lab] == 0]
    heapq.heapify(frontier)
    order: list[str] = []
    while frontier:
        _, _, lab = heapq.heappop(frontier)
        order.append(lab)
        for nxt in succ[lab]:
            indeg[nxt] -= 1
            if indeg[nxt] == 0:
                heapq.heappush(frontier, (nxt not in env_set, pos[nxt], nxt))
    if len(order) < len(labels):
        stuck = sorted(lab for lab in labels if indeg[lab] > 0)
        raise CycleDetectedError(f"graph has a cycle through {stuck}")

    new_pos = {lab: k for k, lab in enumerate(order)}
    n_total = len(labels)
    m = len(env_set)
    weights = np.zeros((n_total, n_total))
    for seller, buyer, w in edges:
        weights[new_pos[buyer], new_pos[seller]] += w

    net = TradeNetwork(
        num_env=m,
        num_players=n_total - m,
        weights=weights,
        labels=tuple(order),
        permutation=tuple(new_pos[lab] for lab in labels),
    )
    _warn_on_row_overflow(net)
    return net


def _warn_on_row_overflow(net: TradeNetwork) -> None:
    # The fixed-point theory only needs positive denominators, which the
    # dynamics module enforces; overbought player rows are merely suspicious.
    block = net.player_block()
    sums = block.sum(axis=1)
    for i, s in enumerate(sums):
        if s > 1.0 + _ROW_SUM_TOL:
            warnings.warn(
                f"player {net.player_label(i)!r} buys total weight {s:.6g} > 1 "
                "from player-sellers",
                WeightRowOverflowWarning,
                stacklevel=3,
            )


def _layered(epsilon: float, layers: list[list[str]],
             purchases: Mapping[str, Sequence[str]]) -> TradeNetwork:
    nodes = ["env"] + [lab for layer in layers for lab in layer]
    edges: list[tuple[str, str, float]] = []
    for layer in layers:
        for lab in layer:
            edges.append(("env", lab, epsilon))
    for buyer, sellers in purchases.items():
        share = 1.0 / len(sellers)
        for seller in sellers:
            edges.append((seller, buyer, share))
    return validate_network(nodes, edges, env=["env"])


def builtin_network(name: str, epsilon: float = 0.1) -> TradeNetwork:
    """Return one of the five benchmark networks.

    Each has one environment source wired to every player with weight
    ``epsilon``, and buyers split purchases evenly among their sellers.
    """
    if epsilon < 0.0 or epsilon > 1.0:
        raise ValueError(f"epsilon must lie in [0, 1], got {epsilon}")
    if name == "sym8":
        return _layered(epsilon, [["p1", "p2"], ["s1", "s2"], ["u1", "u2", "u3", "u4"]], {
            "s1": ["p1", "p2"], "s2": ["p1", "p2"],
            "u1": ["s1"], "u2": ["s1", "s2"], "u3": ["s1", "s2"], "u4": ["s2"],
        })
    if name == "asym8":
        return _layered(epsilon, [["p1", "p2"], ["a1", "a2"], ["u1", "u2", "u3", "u4"]], {
            "a1": ["p1", "p2"], "a2": ["p1", "p2"],
            "u1": ["a1"], "u2": ["a1"], "u3": ["a1"], "u4": ["a1", "a2"],
        })
    consumers = [f"u{k}" for k in range(1, 11)]
    if name == "competitive15":
        purchases = {d: ["p1", "p2"] for d in ("c1", "c2", "c3")}
        purchases.update({u: ["c1", "c2", "c3"] for u in consumers})
        return _layered(epsilon, [["p1", "p2"], ["c1", "c2", "c3"], consumers], purchases)
    if name == "mild_monopoly15":
        purchases = {d: ["p1", "p2"] for d in ("mm1", "mm2", "mm3")}
        purchases.update({
            "u1": ["mm1", "mm2"], "u2": ["mm1", "mm2"],
            "u3": ["mm2"], "u4": ["mm2"], "u5": ["mm2"],
            "u6": ["mm2"], "u7": ["mm2"], "u8": ["mm2"],
            "u9": ["mm2", "mm3"], "u10": ["mm2", "mm3"],
        })
        return _layered(epsilon, [["p1", "p2"], ["mm1", "mm2", "mm3"], consumers], purchases)
    if name == "total_monopoly15":
        purchases = {d: ["p1", "p2"] for d in ("tm1", "tm2", "tm3")}
        purchases.update({u: ["tm2"] for u in consumers})
        return _layered(epsilon, [["p1", "p2"], ["tm1", "tm2", "tm3"], consumers], purchases)
    raise UnknownBuiltinError(f"unknown builtin {name!r}; choose from {BUILTIN_NAMES}")
