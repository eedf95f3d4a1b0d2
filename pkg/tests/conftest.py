"""Shared test helpers: independent oracles and random generators."""

import random

from coreseq import And, Atom, Imp, Neg, Or
from coreseq.engine import backward_instances


def iddfs_min_height(goal, mode="tennant", max_height=12):
    """Minimal derivation height by plain iterative deepening.

    Independent of the engine's fixpoint algorithm: a direct recursive
    check of "derivable within height h" with the budget strictly
    decreasing, so no cycle handling is needed.  Returns None when no
    derivation of height <= max_height exists.
    """
    memo = {}

    def can(g, h):
        key = (g, h)
        if key in memo:
            return memo[key]
        result = False
        for _rule, prems in backward_instances(g, mode):
            if not prems:
                result = True
                break
            if h >= 1 and all(can(p, h - 1) for p in prems):
                result = True
                break
        memo[key] = result
        return result

    for h in range(max_height + 1):
        if can(goal, h):
            return h
    return None


def random_formula(rng: random.Random, atoms, max_weight):
    """Uniform-ish random formula with weight <= max_weight."""
    if max_weight <= 1 or (max_weight == 2 and rng.random() < 0.5):
        return Atom(rng.choice(atoms))
    if max_weight == 2 or rng.random() < 0.2:
        if rng.random() < 0.5:
            return Neg(random_formula(rng, atoms, max_weight - 1))
        return Atom(rng.choice(atoms))
    if rng.random() < 0.25:
        return Neg(random_formula(rng, atoms, max_weight - 1))
    ctor = rng.choice((And, Or, Imp))
    left_budget = rng.randint(1, max_weight - 2)
    left = random_formula(rng, atoms, left_budget)
    right = random_formula(rng, atoms, max_weight - 1 - left_budget)
    return ctor(left, right)
