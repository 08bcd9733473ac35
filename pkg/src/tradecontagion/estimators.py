"""Estimator-style front doors for the solver and the simulator.

These wrap the functional core in the familiar ``__init__`` /
``fit`` / fitted-attribute pattern so the package composes with
parameter-sweep and cloning tooling from the wider ecosystem
(``get_params`` / ``set_params`` come from the shared base class).
``fit`` accepts either a built-in network name or a ``TradeNetwork``.
"""
from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.exceptions import NotFittedError

from .equilibrium import SolverConfig, multistart_equilibrium, myopic_best_response
from .kernels import toy_kernels
from .network import TradeNetwork, builtin_network
from .simulate import simulate_chain


def _as_network(network, epsilon: float) -> TradeNetwork:
    if isinstance(network, TradeNetwork):
        return network
    return builtin_network(str(network), epsilon=epsilon)


class EquilibriumSolver(BaseEstimator):
    """Find a long-time Nash equilibrium of the contagion game.

    Parameters mirror the scenario configuration: the toy kernel family
    (``epsilon``, ``attribution``, ``intrinsic_shape``,
    ``intrinsic_weights``), the best-response search, pinned defectors,
    and optionally a multistart search (``num_starts`` > 0).

    After ``fit``: ``strategies_``, ``p_star_``, ``payoffs_``,
    ``nash_residuals_``, ``converged_``, ``n_sweeps_``, ``risk_``,
    ``report_`` (and ``multistart_`` when multistarting).
    """

    def __init__(self, epsilon=0.1, attribution="receiver",
                 intrinsic_shape="benefit", intrinsic_weights=None,
                 grid_points=1001, refine_tol=1e-6, sweep_tol=1e-6,
                 max_sweeps=10_000, pinned=None, num_starts=0, seed=None):
        self.epsilon = epsilon
        self.attribution = attribution
        self.intrinsic_shape = intrinsic_shape
        self.intrinsic_weights = intrinsic_weights
        self.grid_points = grid_points
        self.refine_tol = refine_tol
        self.sweep_tol = sweep_tol
        self.max_sweeps = max_sweeps
        self.pinned = pinned
        self.num_starts = num_starts
        self.seed = seed

    def _config(self) -> SolverConfig:
        return SolverConfig(
            grid_points=self.grid_points,
            refine_tol=self.refine_tol,
            sweep_tol=self.sweep_tol,
            max_sweeps=self.max_sweeps,
            pinned=dict(self.pinned or {}),
        )

    def fit(self, network, start=None):
        net = _as_network(network, self.epsilon)
        kernels = toy_kernels(
            intrinsic_weights=self.intrinsic_weights,
            epsilon=self.epsilon,
            attribution=self.attribution,
            intrinsic_shape=self.intrinsic_shape,
        )
        config = self._config()
        if self.num_starts and self.num_starts > 0:
            result = multistart_equilibrium(
                net, kernels, config, num_starts=self.num_starts, seed=self.seed)
            best = max(
                (r for r in result.reports),
                key=lambda r: (r.converged, float(r.payoffs.sum())),
            )
            self.multistart_ = result
            report = best
        else:
            x0 = np.full(net.num_players, 0.5) if start is None else start
            report = myopic_best_response(x0, net, kernels, config)
        self.network_ = net
        self.kernels_ = kernels
        self.report_ = report
        self.strategies_ = report.strategies
        self.p_star_ = report.p_star
        self.payoffs_ = report.payoffs
        self.nash_residuals_ = report.nash_residuals
        self.converged_ = report.converged
        self.n_sweeps_ = report.sweeps
        self.risk_ = report.risk
        return self

    def _check_fitted(self):
        if not hasattr(self, "report_"):
            raise NotFittedError("call fit() first")


class ChainSimulator(BaseEstimator):
    """Run the stochastic infection chain for a fixed strategy profile.

    After ``fit(network, strategies)``: ``frequencies_``,
    ``std_errors_``, ``payoff_avgs_``, ``stats_``.
    """

    def __init__(self, steps=1_000_000, burn_in=None, seed=0, epsilon=0.1,
                 attribution="receiver", intrinsic_shape="benefit",
                 intrinsic_weights=None):
        self.steps = steps
        self.burn_in = burn_in
        self.seed = seed
        self.epsilon = epsilon
        self.attribution = attribution
        self.intrinsic_shape = intrinsic_shape
        self.intrinsic_weights = intrinsic_weights

    def fit(self, network, strategies):
        net = _as_network(network, self.epsilon)
        kernels = toy_kernels(
            intrinsic_weights=self.intrinsic_weights,
            epsilon=self.epsilon,
            attribution=self.attribution,
            intrinsic_shape=self.intrinsic_shape,
        )
        stats = simulate_chain(net, strategies, kernels,
                               steps=self.steps, burn_in=self.burn_in,
                               seed=self.seed)
        self.network_ = net
        self.kernels_ = kernels
        self.stats_ = stats
        self.frequencies_ = stats.frequency
        self.std_errors_ = stats.std_error
        self.payoff_avgs_ = stats.payoff_avg
        return self
