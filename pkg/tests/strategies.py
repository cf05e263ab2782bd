"""Hypothesis strategies that drive the library's own seeded generators."""

import random

from hypothesis import strategies as st

from gbx.fuzz import feasible_bidegrees, random_homogeneous
from gbx.graded import GradedContext

CONTEXTS = {
    "tangent2": GradedContext.tangent_of(["x1", "x2"]),
    "tangent3": GradedContext.tangent_of(["x1", "x2", "x3"]),
    "base1_fiber3": GradedContext.general(["x1"], ["a1", "a2", "a3"]),
    "base3_fiber2": GradedContext.general(["x1", "x2", "x3"], ["a1", "a2"]),
}

seeds = st.integers(min_value=0, max_value=2**32 - 1)


def homogeneous(ctx, rng: random.Random, max_weight: int = 4, max_terms: int = 3, max_degree: int = 2):
    bideg = rng.choice(feasible_bidegrees(ctx, max_weight))
    return random_homogeneous(rng, ctx, bideg, max_terms=max_terms, max_degree=max_degree)
