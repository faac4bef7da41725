"""Seeded random exact data for property checks.

Every trial gets its own ``random.Random`` derived from the root seed and the
trial index, so results do not depend on the order in which trials run.
"""

from __future__ import annotations

import random

from .jetcore import CurveJet, Jet1, PolynomialGerm, Reparam
from .scalars import QQi

BOUND = 5


def trial_rng(seed, index) -> random.Random:
    return random.Random(f"{seed}:{index}")


def gaussian_int(rng: random.Random, bound: int = BOUND, nonzero: bool = False, real: bool = False):
    while True:
        re = rng.randint(-bound, bound)
        im = 0 if real else rng.randint(-bound, bound)
        if not nonzero or re or im:
            return QQi(re, im) if im else re


def random_jet(rng, k: int, nonzero_value: bool = False, real: bool = False) -> Jet1:
    return Jet1(gaussian_int(rng, nonzero=(j == 0 and nonzero_value), real=real) for j in range(k + 1))


def random_curve(rng, n: int, k: int, nonzero_values=(), real: bool = False) -> CurveJet:
    """Random n-coordinate k-jet; coordinates listed in ``nonzero_values`` (1-based) avoid 0."""
    nz = set(nonzero_values)
    return CurveJet(random_jet(rng, k, nonzero_value=(i in nz), real=real) for i in range(1, n + 1))


def random_germ(rng, n: int, degree: int, nonzero_values=(), real: bool = False) -> PolynomialGerm:
    nz = set(nonzero_values)
    coeffs = []
    for i in range(1, n + 1):
        c = [gaussian_int(rng, real=real) for _ in range(degree + 1)]
        if i in nz and c[0] == 0:
            c[0] = gaussian_int(rng, nonzero=True, real=real)
        coeffs.append(c)
    return PolynomialGerm(coeffs)


def random_reparam(rng, k: int, unipotent: bool = False, real: bool = False) -> Reparam:
    first = 1 if unipotent else gaussian_int(rng, nonzero=True, real=real)
    return Reparam((0, first) + tuple(gaussian_int(rng, real=real) for _ in range(k - 1)))
