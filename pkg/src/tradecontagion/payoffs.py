"""Realized and long-run expected payoffs.

Realized payoff of player ``i`` for a concrete infection state::

    pi_i = d_i(x_i, I_i) + sum_{j<i} c_{i,j} a_{i,j}(X, I_j)
                         + sum_{j>i} b_{i,j} a_{j,i}(X, I_i)

Sums run over player neighbours only; environment nodes carry no payoff.
The long-run payoff replaces each infection indicator by its stationary
marginal through the convex combination of the two conditional
interaction probabilities, which for kernels affine in the indicator
equals the realized payoff evaluated at ``I = p*``.
"""
from __future__ import annotations

import numpy as np

from .exceptions import IndexOutOfRangeError, StaleProbabilityError
from .kernels import KernelSet
from .network import TradeNetwork, check_strategies


def realized_payoff(i: int, strategies, infection, network: TradeNetwork,
                    kernels: KernelSet) -> float:
    """Payoff of player ``i`` given concrete infection indicators.

    ``infection`` is over players only, entries in {0, 1} (fractional
    values are accepted and interpreted as marginals).
    """
    X = check_strategies(network, strategies)
    n = network.num_players
    if not 0 <= i < n:
        raise IndexOutOfRangeError(f"player {i} out of range for n={n}")
    I = np.asarray(infection, dtype=float)
    if I.shape != (n,):
        raise StaleProbabilityError(
            f"infection vector has shape {I.shape}, expected ({n},)")
    total = kernels.intrinsic_payoff(X, i, float(I[i]))
    for j in network.sellers_of(i):
        total += (kernels.upstream_payoff(X, i, j)
                  * kernels.interaction(network, X, i, j, float(I[j])))
    for j in network.buyers_of(i):
        total += (kernels.downstream_payoff(X, i, j)
                  * kernels.interaction(network, X, j, i, float(I[i])))
    return float(total)


def longrun_payoff(i: int, strategies, p_star, network: TradeNetwork,
                   kernels: KernelSet) -> float:
    """Expected per-step payoff under the stationary marginals ``p_star``.

    ``p_star`` is the full node vector (environment entries first) as
    returned by :func:`tradecontagion.dynamics.stationary_probability`
    for the same network and profile; passing a stale or misshaped
    vector is a caller error.
    """
    X = check_strategies(network, strategies)
    m, n = network.num_env, network.num_players
    if not 0 <= i < n:
        raise IndexOutOfRangeError(f"player {i} out of range for n={n}")
    p = np.asarray(p_star, dtype=float)
    if p.shape != (m + n,):
        raise StaleProbabilityError(
            f"p_star has shape {p.shape}, expected ({m + n},)")
    if not np.allclose(p[:m], 1.0, atol=1e-12):
        raise StaleProbabilityError("p_star environment entries must be 1")

    pi = p[m + i]
    total = (pi * kernels.intrinsic_payoff(X, i, 1.0)
             + (1.0 - pi) * kernels.intrinsic_payoff(X, i, 0.0))
    for j in network.sellers_of(i):
        pj = p[m + j]
        a_mix = (pj * kernels.interaction(network, X, i, j, 1.0)
                 + (1.0 - pj) * kernels.interaction(network, X, i, j, 0.0))
        total += kernels.upstream_payoff(X, i, j) * a_mix
    for j in network.buyers_of(i):
        a_mix = (pi * kernels.interaction(network, X, j, i, 1.0)
                 + (1.0 - pi) * kernels.interaction(network, X, j, i, 0.0))
        total += kernels.downstream_payoff(X, i, j) * a_mix
    return float(total)


def longrun_payoff_vector(strategies, p_star, network: TradeNetwork,
                          kernels: KernelSet) -> np.ndarray:
    """Long-run payoff for every player."""
    return np.array([
        longrun_payoff(i, strategies, p_star, network, kernels)
        for i in range(network.num_players)
    ])


def payoff_affine_terms(network: TradeNetwork, strategies,
                        kernels: KernelSet) -> tuple[np.ndarray, np.ndarray]:
    """Decompose the realized payoff as ``pi(I) = base + coupling @ I``.

    Exact for any kernel set: every term of the payoff depends on exactly
    one infection indicator, and any function of a binary variable is
    affine in it. Used to accumulate payoffs along simulated traces at
    matrix speed.
    """
    X = check_strategies(network, strategies)
    n = network.num_players
    base = np.zeros(n)
    coupling = np.zeros((n, n))
    for i in range(n):
        d0 = kernels.intrinsic_payoff(X, i, 0.0)
        base[i] += d0
        coupling[i, i] += kernels.intrinsic_payoff(X, i, 1.0) - d0
        for j in network.sellers_of(i):
            c = kernels.upstream_payoff(X, i, j)
            a0 = kernels.interaction(network, X, i, j, 0.0)
            a1 = kernels.interaction(network, X, i, j, 1.0)
            base[i] += c * a0
            coupling[i, j] += c * (a1 - a0)
        for j in network.buyers_of(i):
            b = kernels.downstream_payoff(X, i, j)
            a0 = kernels.interaction(network, X, j, i, 0.0)
            a1 = kernels.interaction(network, X, j, i, 1.0)
            base[i] += b * a0
            coupling[i, i] += b * (a1 - a0)
    return base, coupling
