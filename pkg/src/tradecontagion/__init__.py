"""Contagion games on acyclic trade networks.

Stationary infection probabilities by forward substitution, long-run
payoffs, best responses and myopic Nash search, network risk metrics,
and a seeded stochastic simulator with an exact small-network oracle.
"""
from .dynamics import (
    LinearizedSystem,
    apply_T,
    build_linear_system,
    fixed_point_residual,
    initial_probability,
    iterate_to_fixed_point,
    stationary_probability,
)
from .equilibrium import (
    EquilibriumReport,
    MultistartResult,
    SolverConfig,
    best_response,
    multistart_equilibrium,
    myopic_best_response,
    nash_residual,
)
from .estimators import ChainSimulator, EquilibriumSolver
from .kernels import KernelSet, evaluate_kernel, toy_kernels
from .network import (
    BUILTIN_NAMES,
    NodeRole,
    TradeNetwork,
    builtin_network,
    check_strategies,
    validate_network,
)
from .payoffs import longrun_payoff, longrun_payoff_vector, realized_payoff
from .risk import RiskReport, naive_risk, r0_per_node, risk_report, weighted_risk
from .scenarios import (
    ScenarioConfig,
    calibrate_epsilon,
    emit_builtin_config,
    load_scenario,
    reproduce_tables,
    run_scenario,
    sweep_parameter,
)
from .simulate import SimStats, exact_chain_marginals, simulate_chain

__version__ = "0.1.0"

__all__ = [
    "BUILTIN_NAMES",
    "ChainSimulator",
    "EquilibriumReport",
    "EquilibriumSolver",
    "KernelSet",
    "LinearizedSystem",
    "MultistartResult",
    "NodeRole",
    "RiskReport",
    "ScenarioConfig",
    "SimStats",
    "SolverConfig",
    "TradeNetwork",
    "apply_T",
    "best_response",
    "build_linear_system",
    "builtin_network",
    "calibrate_epsilon",
    "check_strategies",
    "emit_builtin_config",
    "evaluate_kernel",
    "exact_chain_marginals",
    "fixed_point_residual",
    "initial_probability",
    "iterate_to_fixed_point",
    "load_scenario",
    "longrun_payoff",
    "longrun_payoff_vector",
    "multistart_equilibrium",
    "myopic_best_response",
    "naive_risk",
    "nash_residual",
    "r0_per_node",
    "realized_payoff",
    "reproduce_tables",
    "risk_report",
    "run_scenario",
    "simulate_chain",
    "stationary_probability",
    "sweep_parameter",
    "toy_kernels",
    "validate_network",
    "weighted_risk",
]
