"""Functional forms of the game behind a single kernel interface.

A :class:`KernelSet` bundles, per player (and per pair where relevant):

* ``interaction`` a(buyer, seller): probability the buyer transacts with
  that upstream seller given the seller's infection state,
* ``downstream_payoff`` b and ``upstream_payoff`` c: per-transaction
  payoffs for the selling and the buying side,
* ``intrinsic_payoff`` d: payoff independent of trade partners,
* ``transmission`` alpha, ``uptake`` beta, ``recovery`` f: the
  epidemiological response functions,
* ``epsilon``: the environment exposure used when building networks,
* ``attribution``: whose strategy enters the per-edge transmission
  factor in the linearized dynamics ("receiver" or "sender").

The built-in family is the toy model: trade weights discounted by
buyer-side avoidance of infected sellers, unit-price payoffs, identity
recovery. Its intrinsic term has two shapes; the default "benefit" hump
``theta * x * (1 - x) * (1 - I)`` admits interior equilibria, while
"cost" is its negative.
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Callable, Mapping, Sequence

import numpy as np

from .exceptions import IndexOutOfRangeError, NegativeWeightError
from .network import TradeNetwork

ATTRIBUTION_MODES = ("receiver", "sender")
INTRINSIC_SHAPES = ("benefit", "cost")

KERNEL_KINDS = ("a", "b", "c", "d", "alpha", "beta", "f")


@dataclass(frozen=True)
class ToyParams:
    """Numeric parameters of the toy family; enables closed-form fast paths."""

    theta: dict[int, float]
    intrinsic_shape: str = "benefit"

    def weight(self, i: int) -> float:
        return self.theta.get(i, 1.0)

    def sign(self) -> float:
        return 1.0 if self.intrinsic_shape == "benefit" else -1.0


@dataclass(frozen=True)
class KernelSet:
    """All functional forms of one game.

    Player indices are 0-based player indices (environment excluded);
    ``X`` is the strategy profile over players. ``interaction`` receives
    the network because the toy form scales with the trade weight.
    """

    interaction: Callable[[TradeNetwork, np.ndarray, int, int, float], float]
    downstream_payoff: Callable[[np.ndarray, int, int], float]
    upstream_payoff: Callable[[np.ndarray, int, int], float]
    intrinsic_payoff: Callable[[np.ndarray, int, float], float]
    transmission: Callable[[np.ndarray, int], float]
    uptake: Callable[[np.ndarray, int, int], float]
    recovery: Callable[[np.ndarray, int], float]
    epsilon: float = 0.1
    attribution: str = "receiver"
    toy_params: ToyParams | None = None

    def __post_init__(self):
        if self.attribution not in ATTRIBUTION_MODES:
            raise ValueError(
                f"attribution must be one of {ATTRIBUTION_MODES}, got {self.attribution!r}")

    def with_attribution(self, attribution: str) -> "KernelSet":
        return replace(self, attribution=attribution)


def _resolve_theta(intrinsic_weights, n_hint: int | None = None) -> dict[int, float]:
    if intrinsic_weights is None:
        return {}
    if isinstance(intrinsic_weights, Mapping):
        theta = {int(k): float(v) for k, v in intrinsic_weights.items()}
    elif isinstance(intrinsic_weights, (int, float)):
        if n_hint is None:
            raise ValueError("scalar intrinsic weight needs a player count")
        theta = {i: float(intrinsic_weights) for i in range(n_hint)}
    else:
        theta = {i: float(v) for i, v in enumerate(intrinsic_weights)}
    for i, v in theta.items():
        if v < 0.0:
            raise NegativeWeightError(f"intrinsic weight for player {i} is {v} < 0")
    return theta


def toy_kernels(
    intrinsic_weights: Mapping[int, float] | Sequence[float] | None = None,
    epsilon: float = 0.1,
    attribution: str = "receiver",
    intrinsic_shape: str = "benefit",
) -> KernelSet:
    """The toy model.

    a_{i,j}(X, I_j) = w_{i,j} (1 - x_i I_j)        buyer-side avoidance
    b_{i,j}(x_i, x_j) = 1 - x_i                    seller's unit margin
    c_{i,j}(x_i, x_j) = x_j - 1                    buyer's unit cost
    d_i(x_i, I_i) = +/- theta_i x_i (1 - x_i)(1 - I_i)
    alpha_i = beta_i = 1 - x_i, f_i = x_i

    ``intrinsic_shape`` selects the sign of d: "benefit" (default) is the
    positive hump, "cost" the literal negative form.
    """
    if intrinsic_shape not in INTRINSIC_SHAPES:
        raise ValueError(
            f"intrinsic_shape must be one of {INTRINSIC_SHAPES}, got {intrinsic_shape!r}")
    theta = _resolve_theta(intrinsic_weights)
    params = ToyParams(theta=theta, intrinsic_shape=intrinsic_shape)
    sign = params.sign()

    def interaction(net, X, i, j, infected):
        w = net.weights[net.num_env + i, net.num_env + j]
        return w * (1.0 - X[i] * infected)

    def downstream_payoff(X, i, j):
        return 1.0 - X[i]

    def upstream_payoff(X, i, j):
        return X[j] - 1.0

    def intrinsic_payoff(X, i, infected):
        return sign * params.weight(i) * X[i] * (1.0 - X[i]) * (1.0 - infected)

    def transmission(X, i):
        return 1.0 - X[i]

    def uptake(X, i, source):
        return 1.0 - X[i]

    def recovery(X, i):
        return X[i]

    return KernelSet(
        interaction=interaction,
        downstream_payoff=downstream_payoff,
        upstream_payoff=upstream_payoff,
        intrinsic_payoff=intrinsic_payoff,
        transmission=transmission,
        uptake=uptake,
        recovery=recovery,
        epsilon=float(epsilon),
        attribution=attribution,
        toy_params=params,
    )


def evaluate_kernel(
    kernels: KernelSet,
    network: TradeNetwork,
    kind: str,
    i: int,
    j: int | None = None,
    X=None,
    I=None,
) -> float:
    """Uniform dispatch over the kernel families.

    ``i`` and ``j`` are 0-based player indices; for pair kernels ``i``
    is the focal player and ``j`` the partner. ``I`` is the infection
    value the kernel conditions on (a scalar in [0, 1]).
    """
    n = network.num_players
    if not 0 <= i < n or (j is not None and not 0 <= j < n):
        raise IndexOutOfRangeError(f"player index out of range for n={n}")
    X = np.asarray(X, dtype=float)
    inf = 0.0 if I is None else float(I)
    if kind == "a":
        return float(kernels.interaction(network, X, i, j, inf))
    if kind == "b":
        return float(kernels.downstream_payoff(X, i, j))
    if kind == "c":
        return float(kernels.upstream_payoff(X, i, j))
    if kind == "d":
        return float(kernels.intrinsic_payoff(X, i, inf))
    if kind == "alpha":
        return float(kernels.transmission(X, i))
    if kind == "beta":
        return float(kernels.uptake(X, i, 0 if j is None else j))
    if kind == "f":
        return float(kernels.recovery(X, i))
    raise ValueError(f"unknown kernel kind {kind!r}; choose from {KERNEL_KINDS}")
