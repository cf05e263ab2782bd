import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from gbx.algebroid import (
    anchor_apply,
    deform,
    deformed_bracket,
    differential,
    evaluate_on_frame,
    heisenberg_mu,
    nijenhuis_torsion,
    schouten_bracket,
    so3_mu,
    standard_mu,
    standard_structure,
    torsion_squares_identity,
    validate_structure,
)
from gbx.errors import NotAStructure, WrongBidegree
from gbx.fuzz import random_endo, random_form, random_vector
from gbx.graded import GradedContext, big_bracket
from gbx.scalar import ScalarExpr

from strategies import seeds

TANGENT3 = GradedContext.tangent_of(["x1", "x2", "x3"])
LIE3 = GradedContext.general(["x1"], ["a1", "a2", "a3"])

STRUCTURES = {
    "standard": (TANGENT3, standard_mu(TANGENT3)),
    "so3": (LIE3, so3_mu(LIE3)),
    "heisenberg": (LIE3, heisenberg_mu(LIE3)),
}
names = st.sampled_from(sorted(STRUCTURES))


def test_named_structures_square_to_zero():
    for ctx, mu in STRUCTURES.values():
        assert big_bracket(mu, mu).is_zero()
        assert validate_structure(mu).kind == "lie"


def test_invalid_structures_carry_residual():
    ctx = TANGENT3
    bad = standard_mu(ctx) + so3_mu(ctx)
    with pytest.raises(NotAStructure) as info:
        validate_structure(bad)
    assert info.value.residual == big_bracket(bad, bad)
    with pytest.raises(WrongBidegree):
        validate_structure(ctx.xi(0))


def test_schouten_bracket_of_vector_fields_is_the_lie_bracket():
    ctx = GradedContext.cotangent(2)
    a = standard_structure(ctx)
    q1 = ScalarExpr.var("q1")
    # [q1 d/dq2, d/dq1] = -d/dq2
    assert schouten_bracket(a, ctx.theta(1).scale(q1), ctx.theta(0)) == -ctx.theta(1)


def test_anchor_and_differential_of_standard_structure():
    ctx = TANGENT3
    a = standard_structure(ctx)
    x1, x2 = ScalarExpr.var("x1"), ScalarExpr.var("x2")
    f = x1**2 * x2
    assert anchor_apply(a, ctx.theta(0), f) == ctx.scalar(ScalarExpr.const(2) * x1 * x2)
    df = differential(a.mu, ctx.scalar(f))
    assert df == ctx.xi(0).scale(ScalarExpr.const(2) * x1 * x2) + ctx.xi(1).scale(x1**2)


@given(seeds)
def test_differential_squares_to_zero(seed):
    rng = random.Random(seed)
    ctx = TANGENT3
    mu = standard_mu(ctx)
    alpha = random_form(rng, ctx, rng.randint(0, 2), 2)
    assert differential(mu, differential(mu, alpha)).is_zero()


@given(names, seeds)
def test_torsion_bigbracket_matches_frame_computation(name, seed):
    ctx, mu = STRUCTURES[name]
    n_elem = random_endo(random.Random(seed), ctx, 2)
    table = evaluate_on_frame(nijenhuis_torsion(mu, n_elem))
    assert table == nijenhuis_torsion(mu, n_elem, method="direct")


@given(names, seeds)
def test_deformed_structure_squares_against_torsion(name, seed):
    ctx, mu = STRUCTURES[name]
    n_elem = random_endo(random.Random(seed), ctx, 2)
    assert torsion_squares_identity(mu, n_elem).is_zero()


@given(seeds)
def test_deformed_derived_bracket(seed):
    rng = random.Random(seed)
    ctx = TANGENT3
    a = standard_structure(ctx)
    n_elem = random_endo(rng, ctx, 1)
    x, y = random_vector(rng, ctx, 1), random_vector(rng, ctx, 1)
    mu_n = deform(a, n_elem)
    assert big_bracket(big_bracket(x, mu_n), y) == deformed_bracket(a, n_elem, x, y)


def test_identity_endomorphism_has_no_torsion():
    from gbx.graded import identity_endo

    for ctx, mu in STRUCTURES.values():
        assert nijenhuis_torsion(mu, identity_endo(ctx)).is_zero()


def test_unknown_torsion_method():
    ctx, mu = STRUCTURES["so3"]
    with pytest.raises(ValueError):
        nijenhuis_torsion(mu, random_endo(random.Random(0), ctx), method="guess")
