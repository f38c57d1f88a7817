"""Random instance generators shared by the test modules."""
from __future__ import annotations

import random

from tmotives.affine import AffineEq
from tmotives.ffield import get_field
from tmotives.pseries import PSeries, theta_pow


def random_head(rng: random.Random, q: int, r: int, span: int = 6) -> list[PSeries]:
    ctx = get_field(q, 1)
    return [theta_pow(ctx, rng.randint(-span, span)) if g in (0, r) or rng.random() < 0.5 else PSeries.zero(ctx)
            for g in range(r + 1)]


def random_equation(rng: random.Random, max_b: int = 2) -> AffineEq:
    """Monomial coefficients, ``q`` in {2, 3}, ``r <= 3``, one to three tail terms."""
    q = rng.choice([2, 3])
    r = rng.randint(1, 3 if q == 2 else 2)
    ctx = get_field(q, 1)
    tail = {(rng.randint(1, max_b), rng.randint(0, r)): theta_pow(ctx, rng.randint(-6, 6))
            for _ in range(rng.randint(1, 3))}
    return AffineEq(q, random_head(rng, q, r), tail)
