import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from gbx.algebroid import so3_mu, standard_mu, standard_structure
from gbx.compat import (
    bivector_from_omega_n,
    check_structure,
    compatibility_tensor,
    form_from_pn,
    modular_cocycle,
    recursion_operator,
    residual_compatibility_contracted,
    residual_contracted_three_form,
    residual_koszul_square_contracted,
    residual_poisson_square_contracted,
    residual_poisson_square_twice_contracted,
    residual_square_of_bracket_endo,
    tilde_structure,
    twist_form,
)
from gbx.errors import MissingTensor, SideConditionFails, SkewConditionFails, TorsionNonzero
from gbx.fuzz import (
    constant_instance,
    random_bivector,
    random_endo,
    random_nondegenerate_bivector,
    random_nondegenerate_two_form,
    random_three_form,
    random_two_form,
    random_vector,
)
from gbx.graded import GradedContext, big_bracket
from gbx.scalar import ScalarExpr
from gbx.tensors import invert_bivector

from strategies import seeds

TANGENT3 = GradedContext.tangent_of(["x1", "x2", "x3"])
LIE3 = GradedContext.general(["x1"], ["a1", "a2", "a3"])
SETTINGS = {"standard": (TANGENT3, standard_mu(TANGENT3)), "so3": (LIE3, so3_mu(LIE3))}
settings_names = st.sampled_from(sorted(SETTINGS))


def instance(name, seed):
    ctx, mu = SETTINGS[name]
    rng = random.Random(seed)
    return ctx, mu, rng, random_bivector(rng, ctx, 1), random_two_form(rng, ctx, 1)


@given(settings_names, seeds)
def test_koszul_square_with_contraction(name, seed):
    _, mu, _, pi, omega = instance(name, seed)
    assert residual_koszul_square_contracted(mu, pi, omega).is_zero()


@given(settings_names, seeds)
def test_poisson_square_contracted_once(name, seed):
    _, mu, _, pi, omega = instance(name, seed)
    assert residual_poisson_square_contracted(mu, pi, omega, sign=-1).is_zero()


@given(settings_names, seeds)
def test_poisson_square_contracted_twice(name, seed):
    _, mu, _, pi, omega = instance(name, seed)
    assert residual_poisson_square_twice_contracted(mu, pi, omega, sign=-1).is_zero()


@given(settings_names, seeds)
def test_contracted_compatibility_tensor(name, seed):
    _, mu, _, pi, omega = instance(name, seed)
    assert residual_compatibility_contracted(mu, pi, omega).is_zero()


@given(settings_names, seeds)
def test_square_of_bracket_endomorphism(name, seed):
    _, _, _, pi, omega = instance(name, seed)
    assert residual_square_of_bracket_endo(pi, omega).is_zero()


@given(settings_names, seeds)
def test_three_form_contracted_by_bivector(name, seed):
    ctx, _, rng, pi, _ = instance(name, seed)
    psi = random_three_form(rng, ctx, 1)
    x, y = random_vector(rng, ctx, 1), random_vector(rng, ctx, 1)
    assert residual_contracted_three_form(pi, psi, x, y).is_zero()


@given(settings_names, seeds)
def test_tilde_structure_bracket_tables(name, seed):
    ctx, mu, _, pi, omega = instance(name, seed)
    res = tilde_structure(mu, pi, omega)
    assert res.mu_tilde == res.mu1 + res.mu2
    assert res.tables_agree


@pytest.mark.parametrize("dim", [2, 4])
def test_implication_diagram_on_constant_instances(dim):
    ctx = GradedContext.tangent_of([f"x{i}" for i in range(1, dim + 1)])
    mu = standard_mu(ctx)
    rng = random.Random(dim)
    verdict = lambda kind, **t: check_structure(mu, kind, **t).verdict
    for _ in range(5):
        t = constant_instance(rng, ctx, "POmega")
        n_elem = big_bracket(t["pi"], t["omega"])
        assert verdict("POmega", **t)
        assert verdict("PN", pi=t["pi"], N=n_elem)
        assert verdict("OmegaN", omega=t["omega"], N=n_elem)

        t = constant_instance(rng, ctx, "PN")
        omega = form_from_pn(t["pi"], t["N"])
        assert big_bracket(t["pi"], omega) == t["N"]
        assert verdict("PN", **t) and verdict("POmega", pi=t["pi"], omega=omega) and verdict("OmegaN", omega=omega, N=t["N"])

        t = constant_instance(rng, ctx, "OmegaN")
        pi = bivector_from_omega_n(t["omega"], t["N"])
        assert big_bracket(pi, t["omega"]) == t["N"]
        assert verdict("OmegaN", **t) and verdict("PN", pi=pi, N=t["N"]) and verdict("POmega", pi=pi, omega=t["omega"])


def test_inverse_of_nondegenerate_poisson_is_complementary():
    # x1 d/dx1 ^ d/dx2 is Poisson on the plane and nondegenerate off x1 = 0
    ctx = GradedContext.tangent_of(["x1", "x2"], chart={"x1": 1})
    mu = standard_mu(ctx)
    pi = ctx.monomial(ScalarExpr.var("x1"), (0, 1))
    rep = check_structure(mu, "Complementary", pi=pi, omega=invert_bivector(pi))
    assert rep.verdict


def test_failed_check_reports_residual():
    ctx = TANGENT3
    mu = standard_mu(ctx)
    x1 = ScalarExpr.var("x1")
    pi = ctx.monomial(ScalarExpr.const(1), (0, 1)) + ctx.monomial(x1, (0, 2)) + ctx.monomial(x1, (1, 2))
    rep = check_structure(mu, "Poisson", pi=pi)
    assert not rep.verdict
    cond = rep.condition("[pi,pi]=0")
    assert str(cond.residual) == "2*@x1^@x2^@x3"
    assert rep.to_json()["conditions"][0]["residual"] == str(cond.residual)


def test_side_conditions_and_missing_tensors():
    ctx = TANGENT3
    mu = standard_mu(ctx)
    rng = random.Random(5)
    pi = random_bivector(rng, ctx, constant=True)
    with pytest.raises(MissingTensor):
        check_structure(mu, "PN", pi=pi)
    skewless = random_endo(rng, ctx, constant=True)
    with pytest.raises(SideConditionFails):
        check_structure(mu, "PN", pi=pi, N=skewless)
    with pytest.raises(SkewConditionFails):
        compatibility_tensor(mu, pi, skewless)
    with pytest.raises(ValueError):
        check_structure(mu, "Bogus", pi=pi)


def test_recursion_operator_of_compatible_pair():
    ctx = GradedContext.cotangent(1)
    a = standard_structure(ctx)
    rng = random.Random(1)
    pi = random_nondegenerate_bivector(rng, ctx)
    pi1 = random_bivector(rng, ctx, 2)
    rep = recursion_operator(a, pi, pi1)
    assert rep.torsion.is_zero() and rep.c_pi.is_zero() and rep.pi_n_matches


def test_twist_of_constant_hitchin_pair():
    ctx = GradedContext.tangent_of(["x1", "x2", "x3", "x4"])
    mu = standard_mu(ctx)
    rng = random.Random(2)
    omega = random_nondegenerate_two_form(rng, ctx)
    n_elem = big_bracket(random_bivector(rng, ctx, constant=True), omega)
    res = twist_form(mu, omega, n_elem)
    assert res.residual.is_zero()
    assert (res.classification.kind, res.classification.square) == ("complex", "-Id")


def test_modular_cocycle():
    ctx = TANGENT3
    mu = standard_mu(ctx)
    x1 = ScalarExpr.var("x1")
    n_elem = ctx.monomial(x1, (ctx.r + 0, 0))  # x1 dx1 (x) d/dx1
    assert modular_cocycle(mu, n_elem) == ctx.xi(0)
    bad = ctx.monomial(ScalarExpr.var("x2"), (ctx.r + 0, 1))
    with pytest.raises(TorsionNonzero):
        modular_cocycle(mu, bad + ctx.monomial(x1, (ctx.r + 1, 0)))
