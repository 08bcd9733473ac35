import numpy as np
import pytest

from tradecontagion import builtin_network, toy_kernels, validate_network


@pytest.fixture
def sym8():
    return builtin_network("sym8", epsilon=0.1)


@pytest.fixture
def asym8():
    return builtin_network("asym8", epsilon=0.1)


@pytest.fixture
def toy():
    return toy_kernels(epsilon=0.1)


@pytest.fixture
def single_player():
    """One environment source feeding one player with weight 0.1."""
    return validate_network(["env", "a"], [("env", "a", 0.1)], env=["env"])


@pytest.fixture
def chain3():
    """env -> A -> B -> C with unit trade weights and env exposure 0.1."""
    return validate_network(
        ["env", "A", "B", "C"],
        [("env", "A", 0.1), ("env", "B", 0.1), ("env", "C", 0.1),
         ("A", "B", 1.0), ("B", "C", 1.0)],
        env=["env"],
    )


def random_network(rng, max_env=3, max_players=30, admissible=True):
    """Random acyclic network; admissible keeps every S row sum at most 1.

    Used as the generator for the fixed-point property tests: total
    inflow weight (environment plus player sellers) per player is drawn
    below 1 so the next-generation map stays inside the unit box.
    """
    m = int(rng.integers(1, max_env + 1))
    n = int(rng.integers(1, max_players + 1))
    labels = [f"e{k}" for k in range(m)] + [f"v{k}" for k in range(n)]
    edges = []
    for i in range(n):
        budget = rng.uniform(0.1, 1.0) if admissible else rng.uniform(0.5, 1.4)
        sources = [f"e{k}" for k in range(m) if rng.random() < 0.7]
        upstream = [f"v{j}" for j in range(i) if rng.random() < min(1.0, 4.0 / (i + 1))]
        chosen = sources + upstream
        if not chosen:
            chosen = [f"e{int(rng.integers(m))}"]
        shares = rng.dirichlet(np.ones(len(chosen))) * budget
        for lab, w in zip(chosen, shares):
            if w > 0:
                edges.append((lab, f"v{i}", min(float(w), 1.0)))
    return validate_network(labels, edges, env=[f"e{k}" for k in range(m)])
