"""Best responses, myopic best-response sweeps, and Nash certification.

A best response maximizes a player's long-run payoff over its own
strategy with everyone else fixed, recomputing the stationary infection
marginals for every candidate. The search is a coarse grid scan
followed by golden-section refinement of the best bracket; ties break
to the smallest strategy. Myopic best response sweeps players in
ascending topological order (Gauss-Seidel style) until a full sweep
moves no strategy by more than the sweep tolerance; its fixed points
are long-time Nash equilibria. Pinned players model defectors: they
keep their pinned strategy and are skipped by the sweep.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable

import numpy as np

from .dynamics import build_linear_system, stationary_probability
from .exceptions import IndexOutOfRangeError
from .kernels import KernelSet
from .network import TradeNetwork, check_strategies
from .payoffs import longrun_payoff, longrun_payoff_vector
from .risk import RiskReport, risk_report

_INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class SolverConfig:
    """Knobs of the best-response search and the myopic sweep."""

    grid_points: int = 1001
    refine_tol: float = 1e-6
    sweep_tol: float = 1e-6
    max_sweeps: int = 10_000
    tie_break: str = "smallest"
    pinned: dict[int, float] = field(default_factory=dict)
    residual_grid: int = 1001
    residual_tol: float = 2e-4

    def __post_init__(self):
        if self.grid_points < 2:
            raise ValueError("grid_points must be at least 2")
        if min(self.refine_tol, self.sweep_tol) <= 0.0:
            raise ValueError("tolerances must be positive")
        if self.tie_break != "smallest":
            raise ValueError("only the 'smallest' tie-break ordering is implemented")
        for i, v in self.pinned.items():
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"pinned strategy for player {i} outside [0, 1]")


@dataclass(frozen=True)
class EquilibriumReport:
    """Everything known about one myopic best-response run."""

    strategies: np.ndarray
    p_star: np.ndarray
    payoffs: np.ndarray
    nash_residuals: np.ndarray
    sweeps: int
    converged: bool
    risk: RiskReport
    start: np.ndarray
    config: SolverConfig


def _toy_candidate_payoff(i: int, X: np.ndarray, network: TradeNetwork,
                          kernels: KernelSet) -> Callable:
    """Closed-form payoff of player ``i`` as a function of its own strategy.

    Valid for the toy family only: the stationary marginals of nodes
    upstream of ``i`` do not depend on ``x_i`` under either attribution
    mode, so they are computed once and the candidate enters through
    scalar coefficients.
    """
    params = kernels.toy_params
    m = network.num_env
    node = m + i
    W = network.weights

    # stationary marginals of everything before this node
    p = np.ones(node)
    for k in range(m, node):
        xk = X[k - m]
        env = (1.0 - xk) * W[k, :m].sum()
        if kernels.attribution == "receiver":
            inflow = (1.0 - xk) ** 2 * float(W[k, m:k] @ p[m:k])
        else:
            up = 1.0 - X[:k - m]
            inflow = float((up * up * W[k, m:k]) @ p[m:k])
        num = env + inflow
        den = xk + num
        p[k] = 0.0 if den <= 0.0 else num / den

    env_weight = float(W[node, :m].sum())
    sellers = network.sellers_of(i)
    w_up = W[node, m + sellers]
    p_up = p[m + sellers]
    x_up = X[sellers]
    if kernels.attribution == "receiver":
        seller_mass = float(w_up @ p_up)
        const_inflow = 0.0
    else:
        seller_mass = 0.0
        const_inflow = float(((1.0 - x_up) ** 2 * w_up) @ p_up)

    theta = params.weight(i) * params.sign()
    cost0 = float((x_up - 1.0) @ w_up)
    cost1 = float(((x_up - 1.0) * w_up) @ p_up)
    buyers = network.buyers_of(i)
    w_down = W[m + buyers, node]
    sales0 = float(w_down.sum())
    sales1 = float(w_down @ X[buyers])

    def payoff(c):
        one_m = 1.0 - c
        num = one_m * env_weight + one_m * one_m * seller_mass + const_inflow
        den = c + num
        pi_ = num / den if den > 0.0 else 0.0
        return (theta * c * one_m * (1.0 - pi_)
                + cost0 - c * cost1
                + one_m * (sales0 - sales1 * pi_))

    def payoff_grid(cs: np.ndarray) -> np.ndarray:
        one_m = 1.0 - cs
        num = one_m * env_weight + one_m * one_m * seller_mass + const_inflow
        den = cs + num
        with np.errstate(invalid="ignore", divide="ignore"):
            pi_ = np.where(den > 0.0, num / np.where(den > 0.0, den, 1.0), 0.0)
        return (theta * cs * one_m * (1.0 - pi_)
                + cost0 - cs * cost1
                + one_m * (sales0 - sales1 * pi_))

    payoff.grid = payoff_grid
    return payoff


def _generic_candidate_payoff(i: int, X: np.ndarray, network: TradeNetwork,
                              kernels: KernelSet) -> Callable:
    """Fallback payoff evaluator: rebuild the system for every candidate."""

    def payoff(c):
        trial = X.copy()
        trial[i] = c
        sys = build_linear_system(network, trial, kernels)
        p = stationary_probability(sys)
        return longrun_payoff(i, trial, p, network, kernels)

    payoff.grid = lambda cs: np.array([payoff(c) for c in cs])
    return payoff


def candidate_payoff(i: int, X: np.ndarray, network: TradeNetwork,
                     kernels: KernelSet) -> Callable:
    if kernels.toy_params is not None:
        return _toy_candidate_payoff(i, X, network, kernels)
    return _generic_candidate_payoff(i, X, network, kernels)


def best_response(i: int, strategies, network: TradeNetwork, kernels: KernelSet,
                  config: SolverConfig | None = None) -> float:
    """Payoff-maximizing strategy of player ``i`` with all others fixed.

    Coarse grid scan, golden-section refinement of the winning bracket,
    ties broken to the smallest strategy.
    """
    config = config or SolverConfig()
    X = check_strategies(network, strategies)
    if not 0 <= i < network.num_players:
        raise IndexOutOfRangeError(f"player {i} out of range")
    payoff = candidate_payoff(i, X, network, kernels)

    cs = np.linspace(0.0, 1.0, config.grid_points)
    vals = payoff.grid(cs)
    k = int(np.argmax(vals))
    lo = cs[max(k - 1, 0)]
    hi = cs[min(k + 1, config.grid_points - 1)]

    a, b = lo, hi
    c1 = b - _INV_PHI * (b - a)
    c2 = a + _INV_PHI * (b - a)
    f1, f2 = payoff(c1), payoff(c2)
    while b - a > config.refine_tol:
        if f1 >= f2:
            b, c2, f2 = c2, c1, f1
            c1 = b - _INV_PHI * (b - a)
            f1 = payoff(c1)
        else:
            a, c1, f1 = c1, c2, f2
            c2 = a + _INV_PHI * (b - a)
            f2 = payoff(c2)

    candidates = sorted({lo, hi, 0.5 * (a + b), float(cs[k])})
    best_x, best_v = None, -math.inf
    for x in candidates:
        v = payoff(x)
        if v > best_v:  # strict: first (smallest) candidate wins ties
            best_x, best_v = x, v
    return float(best_x)


def nash_residual(strategies, network: TradeNetwork, kernels: KernelSet,
                  config: SolverConfig | None = None) -> np.ndarray:
    """Best grid improvement available to each player; <= 0 certifies Nash."""
    config = config or SolverConfig()
    X = check_strategies(network, strategies)
    cs = np.linspace(0.0, 1.0, config.residual_grid)
    out = np.empty(network.num_players)
    for i in range(network.num_players):
        payoff = candidate_payoff(i, X, network, kernels)
        out[i] = float(payoff.grid(cs).max() - payoff(float(X[i])))
    return out


def myopic_best_response(start, network: TradeNetwork, kernels: KernelSet,
                         config: SolverConfig | None = None) -> EquilibriumReport:
    """Gauss-Seidel best-response sweeps in ascending topological order.

    Non-convergence within ``max_sweeps`` is reported, not raised.
    """
    config = config or SolverConfig()
    X0 = check_strategies(network, start).copy()
    for i, v in config.pinned.items():
        if not 0 <= i < network.num_players:
            raise IndexOutOfRangeError(f"pinned player {i} out of range")
        X0[i] = v
    X = X0.copy()
    converged = False
    sweeps = 0
    for sweeps in range(1, config.max_sweeps + 1):
        delta = 0.0
        for i in range(network.num_players):
            if i in config.pinned:
                continue
            new = best_response(i, X, network, kernels, config)
            delta = max(delta, abs(new - X[i]))
            X[i] = new
        if delta < config.sweep_tol:
            converged = True
            break

    sys = build_linear_system(network, X, kernels)
    p_star = stationary_probability(sys)
    payoffs = longrun_payoff_vector(X, p_star, network, kernels)
    residuals = nash_residual(X, network, kernels, config)
    risk = risk_report(network, X, kernels, p_star=p_star)
    return EquilibriumReport(
        strategies=X,
        p_star=p_star,
        payoffs=payoffs,
        nash_residuals=residuals,
        sweeps=sweeps,
        converged=converged,
        risk=risk,
        start=X0,
        config=config,
    )


@dataclass(frozen=True)
class MultistartResult:
    """All runs of a multistart search plus a cluster summary.

    ``clusters`` groups report indices whose final profiles agree within
    ``cluster_tol`` in sup norm; one cluster means numerically monostable.
    """

    reports: list[EquilibriumReport]
    clusters: list[list[int]]
    cluster_tol: float


def latin_hypercube_starts(num_starts: int, num_players: int,
                           seed: int | None) -> np.ndarray:
    """Stratified random start profiles: one sample per stratum per player."""
    rng = np.random.default_rng(seed)
    starts = np.empty((num_starts, num_players))
    for j in range(num_players):
        perm = rng.permutation(num_starts)
        starts[:, j] = (perm + rng.random(num_starts)) / num_starts
    return starts


def multistart_equilibrium(network: TradeNetwork, kernels: KernelSet,
                           config: SolverConfig | None = None,
                           num_starts: int = 10, seed: int | None = 0,
                           cluster_tol: float = 5e-4) -> MultistartResult:
    """Myopic best response from stratified random starts plus both corners."""
    if num_starts < 1:
        raise ValueError("num_starts must be at least 1")
    config = config or SolverConfig()
    n = network.num_players
    starts = [np.zeros(n), np.ones(n)]
    starts.extend(latin_hypercube_starts(num_starts, n, seed))
    reports = [myopic_best_response(x0, network, kernels, config) for x0 in starts]

    clusters: list[list[int]] = []
    for idx, rep in enumerate(reports):
        for cluster in clusters:
            anchor = reports[cluster[0]].strategies
            if float(np.abs(rep.strategies - anchor).max()) <= cluster_tol:
                cluster.append(idx)
                break
        else:
            clusters.append([idx])
    return MultistartResult(reports=reports, clusters=clusters,
                            cluster_tol=cluster_tol)


def pin_endpoints(network: TradeNetwork, player: int, value: float,
                  config: SolverConfig | None = None) -> SolverConfig:
    """Config with one additional defector pinned at ``value``."""
    config = config or SolverConfig()
    pinned = dict(config.pinned)
    pinned[player] = float(value)
    return replace(config, pinned=pinned)
