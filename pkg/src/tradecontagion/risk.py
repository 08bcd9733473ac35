"""Network risk metrics: per-node reproduction scores and global risk.

The per-node score is the expected number of downstream infections a
node would cause if infected, summed over all path lengths through the
nilpotent transmission matrix. The naive global risk is the probability
that at least one player is infected at stationarity; the weighted risk
reweights each player's reproduction score by its stationary marginal.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dynamics import LinearizedSystem, build_linear_system, stationary_probability
from .exceptions import DimensionMismatchError
from .kernels import KernelSet
from .network import TradeNetwork


def r0_per_node(sys: LinearizedSystem) -> np.ndarray:
    """Expected downstream infections per player via powers of ``S``.

    Sums column totals of ``S^k`` over player columns until the power
    vanishes, which happens after at most ``num_players`` steps because
    the player block is strictly lower triangular.
    """
    block = sys.player_block()
    n = block.shape[0]
    out = np.zeros(n)
    power = block.copy()
    for _ in range(n):
        if not power.any():
            break
        out += power.sum(axis=0)
        power = power @ block
    else:
        assert not power.any(), "transmission block is not nilpotent"
    return out


def naive_risk(p_star, num_env: int) -> float:
    """Probability that at least one player is infected at stationarity."""
    p = np.asarray(p_star, dtype=float)
    return float(1.0 - np.prod(1.0 - p[num_env:]))


def weighted_risk(r0, p_star, num_env: int = 0) -> float:
    """Reproduction-weighted global risk: sum of r0_i * p*_i over players."""
    r0 = np.asarray(r0, dtype=float)
    p = np.asarray(p_star, dtype=float)[num_env:]
    if r0.shape != p.shape:
        raise DimensionMismatchError(
            f"r0 has shape {r0.shape} but player marginals have shape {p.shape}")
    return float(r0 @ p)


@dataclass(frozen=True)
class RiskReport:
    """Per-player reproduction scores plus the two global risk measures."""

    r0: np.ndarray
    naive_risk: float
    weighted_risk: float
    attribution: str


def risk_report(network: TradeNetwork, strategies, kernels: KernelSet,
                p_star=None, attribution: str | None = None) -> RiskReport:
    """Convenience wrapper: build the system, score r0 and both risks.

    ``attribution`` overrides the transmission attribution used for the
    risk matrix only (the marginals keep the kernel set's own mode).
    """
    sys_dyn = build_linear_system(network, strategies, kernels)
    p = stationary_probability(sys_dyn) if p_star is None else np.asarray(p_star, float)
    mode = kernels.attribution if attribution is None else attribution
    sys_risk = (sys_dyn if mode == kernels.attribution
                else build_linear_system(network, strategies,
                                         kernels.with_attribution(mode)))
    r0 = r0_per_node(sys_risk)
    return RiskReport(
        r0=r0,
        naive_risk=naive_risk(p, network.num_env),
        weighted_risk=weighted_risk(r0, p, network.num_env),
        attribution=mode,
    )
