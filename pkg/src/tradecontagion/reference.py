"""Published reference values for the five benchmark scenarios.

Used by the calibration and reproduction battery as comparison targets.
The source tables do not state the environment exposure they were run
at, so reproduction always goes through calibration. ``focus`` names
the players whose strategies and marginals the tables report; the
defector tables report role representatives instead (mean over unpinned
role members on our side).
"""
from __future__ import annotations

TABLE_NAMES = ("table1", "table2", "table3", "table4", "table5")

# Benchmark equilibria on the two 8-player networks.
TABLE1 = {
    "sym8": {
        "strategies": {"s1": 0.4377, "s2": 0.4377},
        "probabilities": {"s1": 0.1944, "s2": 0.1944},
        "naive_risk": 0.7276,
        "weighted_risk": 0.4614,
    },
    "asym8": {
        "strategies": {"a1": 0.3924, "a2": 0.5195},
        "probabilities": {"a1": 0.2314, "a2": 0.1391},
        "naive_risk": 0.7298,
        "weighted_risk": 0.5365,
    },
}

# Market-share comparison on the three 15-player networks.
TABLE2 = {
    "competitive15": {
        "strategies": {"c1": 0.3451, "c2": 0.3451, "c3": 0.3451},
        "probabilities": {"c1": 0.3734, "c2": 0.3734, "c3": 0.3734},
        "naive_risk": 0.9830,
        "weighted_risk": 3.2393,
    },
    "mild_monopoly15": {
        "strategies": {"mm1": 0.4334, "mm2": 0.3082, "mm3": 0.4334},
        "probabilities": {"mm1": 0.2628, "mm2": 0.4220, "mm3": 0.2628},
        "naive_risk": 0.9771,
        "weighted_risk": 3.2525,
    },
    "total_monopoly15": {
        "strategies": {"tm1": 0.5506, "tm2": 0.3027, "tm3": 0.5506},
        "probabilities": {"tm1": 0.1549, "tm2": 0.4031, "tm3": 0.1549},
        "naive_risk": 0.9691,
        "weighted_risk": 3.3292,
    },
}

# Defector batteries on sym8. Values are (consumer, distributor, producer)
# role representatives; the defector is excluded from its role.
_DEFECT_ROLES = ("consumer", "distributor", "producer")


def _variant(strats, probs, naive, weighted):
    return {
        "strategies": dict(zip(_DEFECT_ROLES, strats)),
        "probabilities": dict(zip(_DEFECT_ROLES, probs)),
        "naive_risk": naive,
        "weighted_risk": weighted,
    }


TABLE3 = {
    "defector": "u2",
    "rational": _variant((0.5666, 0.4374, 0.3505), (0.1236, 0.1947, 0.1564), 0.7277, 0.4618),
    "defect0": _variant((0.5668, 0.4227, 0.3556), (0.1261, 0.2052, 0.1540), 1.0, 0.4867),
    "defect1": _variant((0.5664, 0.4444, 0.3470), (0.1228, 0.1907, 0.1595), 0.6879, 0.4555),
}

TABLE4 = {
    "defector": "s1",
    "rational": _variant((0.5666, 0.4374, 0.3505), (0.1236, 0.1947, 0.1564), 0.7277, 0.4622),
    "defect0": _variant((0.5650, 0.4351, 0.3280), (0.2178, 0.2031, 0.1470), 1.0, 2.4849),
    "defect1": _variant((0.5695, 0.4244, 0.3865), (0.0970, 0.1958, 0.1371), 0.6018, 0.2671),
}

TABLE5 = {
    "defector": "p1",
    "rational": _variant((0.5666, 0.4374, 0.3505), (0.1236, 0.1947, 0.1564), 0.7277, 0.4622),
    "defect0": _variant((0.5666, 0.4400, 0.3521), (0.1619, 0.3503, 0.14559), 1.0, 2.1790),
    "defect1": _variant((0.5671, 0.4274, 0.3579), (0.1147, 0.1606, 0.1525), 0.6338, 0.314),
}

TABLES = {
    "table1": TABLE1,
    "table2": TABLE2,
    "table3": TABLE3,
    "table4": TABLE4,
    "table5": TABLE5,
}
