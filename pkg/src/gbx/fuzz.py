"""Seeded random elements for property tests and experiment scripts."""

from __future__ import annotations

import random
from itertools import combinations

from .graded import GradedContext, GradedElement, sort_word
from .scalar import ScalarExpr


def random_scalar(rng: random.Random, ctx: GradedContext, max_degree: int = 2, max_terms: int = 3, coeff_range: int = 3) -> ScalarExpr:
    """Polynomial in the base coordinates with small nonzero integer coefficients."""
    out = ScalarExpr.const(0)
    for _ in range(rng.randint(1, max_terms)):
        c = 0
        while c == 0:
            c = rng.randint(-coeff_range, coeff_range)
        powers: dict = {}
        for _ in range(rng.randint(0, max_degree)):
            v = rng.choice(ctx.base)
            powers[v] = powers.get(v, 0) + 1
        out = out + ScalarExpr.monomial(c, powers)
    return out


def _term_shapes(ctx: GradedContext, bidegree: tuple):
    """(momentum count, theta count, xi count) realising a shifted bidegree."""
    p, q = bidegree
    shapes = []
    for k in range(0, max(p, q) + 2):
        nt, nx = p + 1 - k, q + 1 - k
        if 0 <= nt <= ctx.r and 0 <= nx <= ctx.r:
            shapes.append((k, nt, nx))
    return shapes


def random_homogeneous(
    rng: random.Random,
    ctx: GradedContext,
    bidegree: tuple,
    max_terms: int = 3,
    max_degree: int = 2,
    momenta: bool = True,
) -> GradedElement:
    shapes = _term_shapes(ctx, bidegree)
    if not momenta:
        shapes = [s for s in shapes if s[0] == 0]
    if not shapes:
        raise ValueError(f"no terms of bidegree {bidegree} in this context")
    out = ctx.zero()
    for _ in range(rng.randint(1, max_terms)):
        k, nt, nx = rng.choice(shapes)
        pe = [0] * ctx.n
        for _ in range(k):
            pe[rng.randrange(ctx.n)] += 1
        thetas = rng.sample(range(ctx.r), nt)
        xis = [ctx.r + a for a in rng.sample(range(ctx.r), nx)]
        word = tuple(thetas + xis)
        out = out + ctx.monomial(random_scalar(rng, ctx, max_degree), word, pe)
    return out


def feasible_bidegrees(ctx: GradedContext, max_total: int = 4) -> list:
    out = []
    for p in range(-1, max_total):
        for q in range(-1, max_total):
            if p + q + 2 <= max_total and _term_shapes(ctx, (p, q)):
                out.append((p, q))
    return out


def random_bivector(rng, ctx, max_degree: int = 2, constant: bool = False) -> GradedElement:
    return _random_word_sum(rng, ctx, [tuple(w) for w in combinations(range(ctx.r), 2)], max_degree, constant)


def random_two_form(rng, ctx, max_degree: int = 2, constant: bool = False) -> GradedElement:
    words = [tuple(ctx.r + a for a in w) for w in combinations(range(ctx.r), 2)]
    return _random_word_sum(rng, ctx, words, max_degree, constant)


def random_three_form(rng, ctx, max_degree: int = 2, constant: bool = False) -> GradedElement:
    words = [tuple(ctx.r + a for a in w) for w in combinations(range(ctx.r), 3)]
    return _random_word_sum(rng, ctx, words, max_degree, constant)


def random_form(rng, ctx, k: int, max_degree: int = 2, constant: bool = False) -> GradedElement:
    words = [tuple(ctx.r + a for a in w) for w in combinations(range(ctx.r), k)]
    return _random_word_sum(rng, ctx, words, max_degree, constant)


def random_vector(rng, ctx, max_degree: int = 2, constant: bool = False) -> GradedElement:
    return _random_word_sum(rng, ctx, [(a,) for a in range(ctx.r)], max_degree, constant)


def random_endo(rng, ctx, max_degree: int = 2, constant: bool = False) -> GradedElement:
    """Random (1,1)-tensor N^a_b xi^b theta_a."""
    out = ctx.zero()
    for a in range(ctx.r):
        for b in range(ctx.r):
            if rng.random() < 0.6:
                c = _coeff(rng, ctx, max_degree, constant)
                out = out + ctx.xi(b) * ctx.theta(a) * c
    return out


def _coeff(rng, ctx, max_degree, constant) -> ScalarExpr:
    if constant:
        c = 0
        while c == 0:
            c = rng.randint(-3, 3)
        return ScalarExpr.const(c)
    return random_scalar(rng, ctx, max_degree)


def _random_word_sum(rng, ctx, words, max_degree, constant) -> GradedElement:
    out = ctx.zero()
    picked = [w for w in words if rng.random() < 0.7] or [rng.choice(words)]
    for w in picked:
        sign, sw = sort_word(w)
        out = out + ctx.monomial(_coeff(rng, ctx, max_degree, constant), sw)
    return out


def random_nondegenerate_two_form(rng, ctx, tries: int = 50) -> GradedElement:
    """Constant symplectic form (rank must be even)."""
    from .tensors import is_nondegenerate_form

    for _ in range(tries):
        w = random_two_form(rng, ctx, constant=True)
        if is_nondegenerate_form(w):
            return w
    raise RuntimeError("could not sample a nondegenerate form")


def random_nondegenerate_bivector(rng, ctx, tries: int = 50) -> GradedElement:
    from .tensors import invert_two_form

    return invert_two_form(random_nondegenerate_two_form(rng, ctx, tries))


def constant_instance(rng, ctx, kind: str) -> dict:
    """Constant-coefficient tensors for a PN, POmega or OmegaN structure over standard mu.

    PN and OmegaN instances are nondegenerate; N is built as {pi, omega} so the
    algebraic side condition holds by construction.
    """
    from .graded import big_bracket

    if kind == "POmega":
        return {"pi": random_bivector(rng, ctx, constant=True), "omega": random_two_form(rng, ctx, constant=True)}
    if kind == "PN":
        pi = random_nondegenerate_bivector(rng, ctx)
        return {"pi": pi, "N": big_bracket(pi, random_two_form(rng, ctx, constant=True))}
    if kind == "OmegaN":
        omega = random_nondegenerate_two_form(rng, ctx)
        return {"omega": omega, "N": big_bracket(random_bivector(rng, ctx, constant=True), omega)}
    raise ValueError(f"no constant instances of kind {kind!r}")
