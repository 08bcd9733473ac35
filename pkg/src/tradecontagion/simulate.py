"""Stochastic infection chain and an exact joint-chain oracle.

The simulator runs the discrete chain the mean-field dynamics
approximate: all players start susceptible, a susceptible player is
infected with probability ``min(1, environment inflow + sum of per-edge
factors over currently infected sellers)``, an infected player recovers
with its recovery probability, and the two transitions are mutually
exclusive within a step. Per-step infection probabilities above 1 are
clamped and counted so users can see when the small-time-step
assumption is violated.

For at most twelve players the exact joint process over all ``2^n``
states is enumerated and its stationary distribution computed by power
iteration, giving exact marginals to validate both the simulator and
the mean-field fixed point.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .dynamics import build_linear_system
from .exceptions import ProbabilityClampedWarning, TooLargeError
from .kernels import KernelSet
from .network import TradeNetwork, check_strategies
from .payoffs import payoff_affine_terms

try:
    from numba import njit
except ImportError:  # pragma: no cover - numba is a declared dependency
    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]
        return lambda f: f

_EXACT_PLAYER_CAP = 12
_CHUNK_STEPS = 100_000


@dataclass(frozen=True)
class SimStats:
    """Post-burn-in statistics of one simulated trajectory."""

    frequency: np.ndarray
    std_error: np.ndarray
    payoff_avg: np.ndarray
    payoff_se: np.ndarray
    steps: int
    burn_in: int
    seed: int
    clamp_events: int


def _chain_rates(network: TradeNetwork, strategies, kernels: KernelSet):
    """Environment inflow, player-to-player factors, recovery probabilities."""
    X = check_strategies(network, strategies)
    sys = build_linear_system(network, X, kernels)
    m = network.num_env
    env_inflow = sys.s_matrix[m:, :m].sum(axis=1)
    block = sys.player_block()
    recovery = 1.0 - sys.r_diag[m:]
    return env_inflow, block, recovery


@njit(cache=True)
def _step_chunk(state, env_inflow, block, recovery, draws, base, coupling,
                batch_freq, batch_pay, first_kept, batch_len, n_batches):
    """Advance the chain over one chunk of pregenerated uniforms.

    ``first_kept`` is the index (within this chunk) of the first step
    past burn-in, offset by the batch position already consumed;
    negative values mean burn-in extends beyond this chunk.
    """
    n = state.shape[0]
    steps = draws.shape[0]
    clamps = 0
    for t in range(steps):
        # transition probabilities from the current joint state
        kept = t - first_kept
        if kept >= 0:
            b = kept // batch_len
            if b >= n_batches:
                b = n_batches - 1
            for i in range(n):
                if state[i] == 1:
                    batch_freq[b, i] += 1.0
                pay = base[i]
                for j in range(n):
                    if state[j] == 1:
                        pay += coupling[i, j]
                batch_pay[b, i] += pay
        for i in range(n):
            if state[i] == 0:
                prob = env_inflow[i]
                for j in range(i):
                    if state[j] == 1:
                        prob += block[i, j]
                if prob > 1.0:
                    prob = 1.0
                    clamps += 1
                if draws[t, i] < prob:
                    state[i] = 2  # infected next step
            else:
                if draws[t, i] < recovery[i]:
                    state[i] = 3  # susceptible next step
        for i in range(n):
            if state[i] == 2:
                state[i] = 1
            elif state[i] == 3:
                state[i] = 0
    return clamps


def simulate_chain(network: TradeNetwork, strategies, kernels: KernelSet,
                   steps: int, burn_in: int | None = None,
                   seed: int = 0) -> SimStats:
    """Simulate the infection chain and return post-burn-in statistics.

    Standard errors come from batch means, which absorbs the serial
    correlation a naive binomial error bar would ignore. Fully
    reproducible from ``seed``.
    """
    if burn_in is None:
        burn_in = steps // 10
    if not steps > burn_in >= 0:
        raise ValueError("need steps > burn_in >= 0")
    X = check_strategies(network, strategies)
    env_inflow, block, recovery = _chain_rates(network, X, kernels)
    base, coupling = payoff_affine_terms(network, X, kernels)
    n = network.num_players

    kept = steps - burn_in
    n_batches = min(100, kept)
    batch_len = kept // n_batches
    batch_freq = np.zeros((n_batches, n))
    batch_pay = np.zeros((n_batches, n))
    # the last batch absorbs the division remainder
    batch_count = np.full(n_batches, float(batch_len))
    batch_count[-1] += kept - batch_len * n_batches

    rng = np.random.default_rng(seed)
    state = np.zeros(n, dtype=np.int8)
    clamps = 0
    processed = 0
    while processed < steps:
        chunk = min(_CHUNK_STEPS, steps - processed)
        draws = rng.random((chunk, n))
        clamps += _step_chunk(state, env_inflow, block, recovery, draws,
                              base, coupling, batch_freq, batch_pay,
                              burn_in - processed, batch_len, n_batches)
        processed += chunk
    if clamps:
        warnings.warn(
            f"{clamps} per-step infection probabilities exceeded 1 and were "
            "clamped; the small-time-step assumption is strained",
            ProbabilityClampedWarning,
            stacklevel=2,
        )

    freq_means = batch_freq / batch_count[:, None]
    pay_means = batch_pay / batch_count[:, None]
    frequency = batch_freq.sum(axis=0) / kept
    payoff_avg = batch_pay.sum(axis=0) / kept
    if n_batches > 1:
        std_error = freq_means.std(axis=0, ddof=1) / np.sqrt(n_batches)
        payoff_se = pay_means.std(axis=0, ddof=1) / np.sqrt(n_batches)
    else:
        std_error = np.full(n, np.nan)
        payoff_se = np.full(n, np.nan)
    return SimStats(
        frequency=frequency,
        std_error=std_error,
        payoff_avg=payoff_avg,
        payoff_se=payoff_se,
        steps=steps,
        burn_in=burn_in,
        seed=seed,
        clamp_events=int(clamps),
    )


def exact_chain_marginals(network: TradeNetwork, strategies, kernels: KernelSet,
                          tol: float = 1e-12, max_iter: int = 200_000) -> np.ndarray:
    """Exact stationary marginals of the joint player chain.

    Enumerates all ``2^n`` joint states, builds the one-step transition
    matrix (players transition independently given the current state),
    and power-iterates its lazy half-step mixture from the
    all-susceptible state to the stationary distribution.
    """
    n = network.num_players
    if n > _EXACT_PLAYER_CAP:
        raise TooLargeError(
            f"exact enumeration capped at {_EXACT_PLAYER_CAP} players, got {n}")
    env_inflow, block, recovery = _chain_rates(network, strategies, kernels)

    size = 1 << n
    bits = ((np.arange(size)[:, None] >> np.arange(n)[None, :]) & 1).astype(float)
    infect = np.minimum(1.0, env_inflow[None, :] + bits @ block.T)
    # probability each player is infected next step, given the joint state
    q = np.where(bits == 1.0, 1.0 - recovery[None, :], infect)

    transition = np.ones((size, 1))
    for i in range(n):
        qi = q[:, i:i + 1]
        transition = np.concatenate([transition * (1.0 - qi), transition * qi], axis=1)

    # lazy mixture keeps the iteration aperiodic without moving the fixed point
    transition *= 0.5
    diag = np.arange(size)
    transition[diag, diag] += 0.5
    dist = np.zeros(size)
    dist[0] = 1.0
    prev_step = np.inf
    for _ in range(max_iter):
        nxt = dist @ transition
        step = float(np.abs(nxt - dist).max())
        dist = nxt
        # geometric-tail bound: remaining error <= step * r / (1 - r)
        ratio = step / prev_step if prev_step > 0 else 0.0
        prev_step = step
        if step == 0.0:
            break
        if ratio < 1.0 and step * ratio / (1.0 - ratio) < tol and step < tol:
            break
    else:
        raise RuntimeError("power iteration did not reach the stationary "
                           f"distribution within {max_iter} iterations")
    return bits.T @ dist
