import random

import pytest

from mgsynth.approx import Su2SearchEngine
from mgsynth.somat import GateKind, GeneratorId, eval_product


@pytest.fixture(scope="session")
def engine():
    """One search engine for the whole run; tables build lazily."""
    return Su2SearchEngine()


def random_word(n, length, rng, t_budget=None):
    kinds = [GateKind.T, GateKind.TINV, GateKind.S, GateKind.SINV]
    if n > 1:
        kinds += [GateKind.R, GateKind.RINV]
    word = []
    t_used = 0
    while len(word) < length:
        kind = rng.choice(kinds)
        if kind in (GateKind.T, GateKind.TINV):
            if t_budget is not None and t_used >= t_budget:
                continue
            t_used += 1
        hi = n if kind in (GateKind.T, GateKind.TINV, GateKind.S, GateKind.SINV) else n - 1
        word.append(GeneratorId(kind, rng.randint(1, hi)))
    return word


@pytest.fixture(scope="session")
def corpus():
    """200 seeded in-ring targets, n in {2,3,4}, T budget <= 8."""
    from mgsynth.targets import random_ring_target

    targets = []
    for seed in range(200):
        n = 2 + seed % 3
        t_budget = seed % 9
        targets.append((n, t_budget, random_ring_target(n, t_budget, seed * 31 + 7)))
    return targets
