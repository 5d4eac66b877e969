import random
from fractions import Fraction

import pytest

from affsl2 import (
    ModuleKind,
    X,
    Y,
    add,
    make_context,
    monomial,
    project,
    zero,
)

COEFFS = [Fraction(1), Fraction(-1), Fraction(2), Fraction(-3), Fraction(1, 2),
          Fraction(3, 4), Fraction(-2, 5)]


def rand_element(rng: random.Random, x_lo=-6, x_hi=6, y_hi=6, max_terms=3,
                 max_deg=4, x_only=False):
    """Random polynomial with support in x[x_lo..x_hi], y[1..y_hi]."""
    out = zero()
    for _ in range(rng.randint(1, max_terms)):
        exps = {}
        for _ in range(rng.randint(0, max_deg)):
            if x_only or rng.random() < 0.6:
                v = X(rng.randint(x_lo, x_hi))
            else:
                v = Y(rng.randint(1, y_hi))
            exps[v] = exps.get(v, 0) + 1
        out = add(out, monomial(exps, rng.choice(COEFFS)))
    return out


def rand_member(ctx, rng: random.Random, max_terms=3):
    """Random nonzero member of a quotient context with small support."""
    out = zero()
    for _ in range(rng.randint(1, max_terms)):
        exps = {}
        if ctx.kind in (ModuleKind.QUOT_MIS, ModuleKind.QUOT_MI):
            exps[X(ctx.i)] = -rng.randint(1, 3)
        for t in ctx.s:
            exps[Y(t)] = -rng.randint(1, 3)
        for _ in range(rng.randint(0, 3)):
            if ctx.kind is ModuleKind.QUOT_MI or rng.random() < 0.6:
                n = rng.randint(-3, 3)
                if n == ctx.i:
                    continue
                v = X(n)
            else:
                m = rng.randint(1, 4)
                if m in ctx.s:
                    continue
                v = Y(m)
            exps[v] = exps.get(v, 0) + 1
        out = add(out, monomial(exps, rng.choice(COEFFS)))
    out = project(out, ctx)
    if not out:
        return rand_member(ctx, rng, max_terms)
    return out


def partition_count(k: int) -> int:
    """Number of partitions of k, by brute-force recursion."""

    def rec(n, largest):
        if n == 0:
            return 1
        if n < 0 or largest == 0:
            return 0
        return rec(n - largest, largest) + rec(n, largest - 1)

    return rec(k, k)


@pytest.fixture
def verma():
    return make_context(ModuleKind.VERMA, J=Fraction(1, 2), K=1)
