"""Linearized infection dynamics and the stationary fixed point.

The one-step map is ``T(p) = (S + R) p - (S p) * p`` with ``*`` the
component-wise product. ``S`` holds per-edge transmission factors (plus
environment uptake in the environment columns) and ``R`` is diagonal
with 1 on environment entries and one-minus-recovery on player entries.
Because the graph is acyclic, ``S``'s player block is strictly lower
triangular and the unique fixed point is computable by forward
substitution in topological order.

Matrix orientation: row = receiving node, column = source node.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .exceptions import (
    DegenerateNodeError,
    DegenerateNodeWarning,
    DimensionMismatchError,
)
from .kernels import KernelSet
from .network import TradeNetwork, check_strategies


@dataclass(frozen=True)
class LinearizedSystem:
    """Transmission matrix ``S`` and recovery diagonal ``R`` of one profile."""

    s_matrix: np.ndarray
    r_diag: np.ndarray
    num_env: int

    def __post_init__(self):
        s = np.asarray(self.s_matrix, dtype=float)
        r = np.asarray(self.r_diag, dtype=float)
        s.setflags(write=False)
        r.setflags(write=False)
        object.__setattr__(self, "s_matrix", s)
        object.__setattr__(self, "r_diag", r)

    @property
    def num_nodes(self) -> int:
        return self.s_matrix.shape[0]

    @property
    def num_players(self) -> int:
        return self.num_nodes - self.num_env

    def player_block(self) -> np.ndarray:
        m = self.num_env
        return self.s_matrix[m:, m:]

    def max_row_sum(self) -> float:
        return float(self.s_matrix.sum(axis=1).max(initial=0.0))


def edge_transmission_factor(network: TradeNetwork, X: np.ndarray,
                             kernels: KernelSet, i: int, j: int) -> float:
    """Per-edge transmission factor from player ``j`` into player ``i``.

    Under "receiver" attribution this is alpha_i(x_i) * a_{i,j}(X, 1);
    under "sender" the receiver's strategy slots are filled with the
    sender's instead (for the toy family: w * (1 - x_j)^2).
    """
    if kernels.attribution == "receiver":
        return float(kernels.transmission(X, i) * kernels.interaction(network, X, i, j, 1.0))
    X_sub = np.array(X, dtype=float)
    X_sub[i] = X[j]
    return float(kernels.transmission(X_sub, i)
                 * kernels.interaction(network, X_sub, i, j, 1.0))


def build_linear_system(network: TradeNetwork, strategies,
                        kernels: KernelSet) -> LinearizedSystem:
    """Assemble ``(S, R)`` for a strategy profile.

    Environment rows of ``S`` are zero; player rows carry
    ``beta * env_weight`` in environment columns and the per-edge
    transmission factors in player columns. ``R`` is 1 on environment
    entries and ``1 - f_i(x_i)`` on player entries.
    """
    X = check_strategies(network, strategies)
    m, n = network.num_env, network.num_players
    total = m + n
    S = np.zeros((total, total))
    r = np.ones(total)
    for i in range(n):
        node = m + i
        for e in range(m):
            w = network.weights[node, e]
            if w > 0.0:
                S[node, e] = kernels.uptake(X, i, e) * w
        for j in network.sellers_of(i):
            S[node, m + j] = edge_transmission_factor(network, X, kernels, i, j)
        r[node] = 1.0 - kernels.recovery(X, i)
    return LinearizedSystem(s_matrix=S, r_diag=r, num_env=m)


def initial_probability(sys: LinearizedSystem, player_value: float = 0.0) -> np.ndarray:
    """All-environment-infected start vector with uniform player entries."""
    p = np.full(sys.num_nodes, float(player_value))
    p[: sys.num_env] = 1.0
    return p


def _check_probability(sys: LinearizedSystem, p, slack_above_one: float) -> np.ndarray:
    p = np.asarray(p, dtype=float)
    if p.shape != (sys.num_nodes,):
        raise DimensionMismatchError(
            f"probability vector has shape {p.shape}, expected ({sys.num_nodes},)")
    if not np.allclose(p[: sys.num_env], 1.0, atol=1e-12):
        raise ValueError("environment entries must be exactly 1")
    hi = 1.0 + slack_above_one + 1e-12
    if np.any(p < -1e-12) or np.any(p > hi):
        raise ValueError(f"probability entries outside [0, {hi:.6g}]")
    return p


def apply_T(sys: LinearizedSystem, p) -> np.ndarray:
    """One step of the next-generation map.

    With row sums of ``S`` at most 1 the image stays in [0, 1]; row sums
    above 1 (possible once environment exposure is stacked on a full
    trade row) can push transient iterates above 1 by at most the
    overflow, which is tolerated and still contracts to the fixed point.
    """
    overflow = max(0.0, sys.max_row_sum() - 1.0)
    p = _check_probability(sys, p, slack_above_one=overflow)
    sp = sys.s_matrix @ p
    out = sp + sys.r_diag * p - sp * p
    out[: sys.num_env] = 1.0
    bound = max(1.0, sys.max_row_sum() * max(1.0, float(p.max())))
    assert np.all(out >= -1e-12) and np.all(out <= bound + 1e-9), \
        "T(p) left its invariant box; this is an internal error"
    return out


def stationary_probability(sys: LinearizedSystem,
                           on_degenerate: str = "zero") -> np.ndarray:
    """Exact fixed point of ``T`` by forward substitution.

    A node with zero inflow and zero recovery is fixed by T at any
    value; the start-susceptible convention assigns it 0 and warns.
    Pass ``on_degenerate="error"`` to raise instead.
    """
    if on_degenerate not in ("zero", "error"):
        raise ValueError("on_degenerate must be 'zero' or 'error'")
    m = sys.num_env
    p = np.ones(sys.num_nodes)
    for node in range(m, sys.num_nodes):
        inflow = float(sys.s_matrix[node, :node] @ p[:node])
        den = 1.0 - sys.r_diag[node] + inflow
        if den <= 0.0:
            if on_degenerate == "error":
                raise DegenerateNodeError(
                    f"node {node} has zero inflow and zero recovery")
            warnings.warn(
                f"node {node} has zero inflow and zero recovery; "
                "assigning p* = 0 (start-susceptible convention)",
                DegenerateNodeWarning,
                stacklevel=2,
            )
            p[node] = 0.0
        else:
            p[node] = inflow / den
    return p


@dataclass(frozen=True)
class FixedPointResult:
    """Outcome of fixed-point iteration; non-convergence is a state, not an error."""

    p: np.ndarray
    iterations: int
    converged: bool


def iterate_to_fixed_point(sys: LinearizedSystem, p0=None, tol: float = 1e-12,
                           max_iter: int = 100_000) -> FixedPointResult:
    """Apply ``T`` until the sup-norm step difference drops below ``tol``."""
    if tol <= 0.0:
        raise ValueError("tol must be positive")
    p = initial_probability(sys) if p0 is None else np.asarray(p0, dtype=float).copy()
    overflow = max(0.0, sys.max_row_sum() - 1.0)
    _check_probability(sys, p, slack_above_one=overflow)
    for k in range(1, max_iter + 1):
        nxt = apply_T(sys, p)
        if float(np.abs(nxt - p).max()) < tol:
            return FixedPointResult(p=nxt, iterations=k, converged=True)
        p = nxt
    return FixedPointResult(p=p, iterations=max_iter, converged=False)


def fixed_point_residual(sys: LinearizedSystem, p) -> float:
    """Sup-norm of ``T(p) - p``."""
    return float(np.abs(apply_T(sys, p) - np.asarray(p, dtype=float)).max())
