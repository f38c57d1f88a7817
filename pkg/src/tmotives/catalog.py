"""Built-in example motives used by the reproduction table, the tests and ``specs/``."""
from __future__ import annotations

from .specio import parse_spec
from .tmotive import TMotiveSpec

__all__ = ["EXAMPLES", "example"]

EXAMPLES: dict[str, dict] = {
    # q = 2: h^1 = 0 while its transpose has h^1 = 1
    "counterexample": {
        "family": "rank2", "q": 2, "n": 2, "epsilon": 0,
        "A": [[[[1, 1]], [[6, 1]]], [[[-2, 1]], []]],
    },
    "counterexample-transpose": {
        "family": "rank2", "q": 2, "n": 2, "epsilon": 0,
        "A": [[[[1, 1]], [[-2, 1]]], [[[6, 1]], []]],
    },
    # q = 3 with a nilpotent part: uniformizable for epsilon = 1, h^1 = 0 for epsilon = 0
    "nilpotent-q3": {
        "family": "rank2", "q": 3, "n": 2, "epsilon": 1,
        "A": [[[], [["-1/2", 1], ["-21/2", 1]]], [[["9/2", 1]], []]],
    },
    # rank 5, dimension 2, generic Laurent parameters over F_2
    "rank5": {
        "family": "standard1", "q": 2, "n": 2,
        "params": {
            "a11": [[1, 1], [-2, 1]], "a12": [[3, 1], [0, 1]], "a21": [[-1, 1]],
            "a22": [[2, 1]], "b1": [[1, 1]], "b2": [[-3, 1], [1, 1]],
        },
    },
}


def example(name: str, epsilon: int | None = None) -> TMotiveSpec:
    data = dict(EXAMPLES[name])
    if epsilon is not None:
        data["epsilon"] = epsilon
    return parse_spec(data)
