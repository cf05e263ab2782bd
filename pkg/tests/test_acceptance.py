"""The twelve acceptance criteria, each checked exactly and literally.

Every criterion collects the claims that fail instead of stopping at the first
one, records PASS or FAIL in ``RESULTS`` (printed at the end of the run by
conftest), and then asserts that nothing failed.
"""

import json
import random
from fractions import Fraction
from pathlib import Path

import sympy

from gbx.algebroid import evaluate_on_frame, heisenberg_mu, nijenhuis_torsion, so3_mu, standard_mu, torsion_squares_identity_as_printed
from gbx.cli import main
from gbx.compat import (
    bivector_from_omega_n,
    check_structure,
    form_from_pn,
    modular_cocycle,
    residual_contracted_three_form,
    residual_koszul_square,
    residual_poisson_square_contracted,
    residual_poisson_square_twice_contracted,
    residual_square_of_bracket_endo,
)
from gbx.courant import DoubleEndo, classify_generalized
from gbx.dsl import parse_element, parse_file
from gbx.errors import GbxError
from gbx.fuzz import constant_instance, random_bivector, random_endo, random_scalar, random_three_form, random_two_form, random_vector
from gbx.graded import GradedContext, big_bracket, wedge
from gbx.monge_ampere import (
    analyze_2d,
    build_ma,
    endo_of_form,
    hess_form,
    hitchin_endo_matrix,
    laplace_form,
    ma_operator_scalar,
    modified_pfaffian,
    normalize_2d,
    pn_background_residuals,
    pssl_form,
    quadratic_form_matrix,
    random_effective_2d,
    sl_form,
    von_karman_form,
    wave_form,
)
from gbx.report import run_document, serialize
from gbx.scalar import ScalarExpr
from gbx.sl2 import Sl2Frame, is_primitive, lepage_decompose, lepage_recompose
from gbx.tensors import (
    endo_from_matrix,
    endo_matrix,
    identity,
    interior_bivector,
    invert_bivector,
    mat_eq,
    mat_mul,
    mat_scale,
    trace,
)

from oracle import same, symbols, to_sympy
from strategies import CONTEXTS, homogeneous

HERE = Path(__file__).parent
RESULTS = {}
ZERO = ScalarExpr.const(0)

# The bracket pairs momenta with coordinates as {p, x} = +1, the opposite of
# the pairing behind the reference von Karman values.  Quantities
# built from two brackets with mu are odd under the swap; the orientation
# factor below is applied to those and to nothing else.
ORIENTATION = -1


def record(number, failures):
    RESULTS[number] = ("PASS" if not failures else "FAIL", failures)
    assert not failures, "; ".join(failures[:5])


def sign_of(u, v):
    return ScalarExpr.const((-1) ** (u.total_degree() * v.total_degree()))


def tally(failures, label, bad, total):
    if bad:
        failures.append(f"{label}: {bad}/{total} instances fail")


# ------------------------------------------------------------------ 1
def test_criterion_01_big_bracket_axioms():
    failures = []
    for name, ctx in sorted(CONTEXTS.items()):
        rng = random.Random(name)
        bad = {"skew": 0, "leibniz": 0, "jacobi": 0}
        for _ in range(200):
            u, v, w = (homogeneous(ctx, rng) for _ in range(3))
            s = sign_of(u, v)
            bad["skew"] += not (big_bracket(u, v) + big_bracket(v, u).scale(s)).is_zero()
            bad["leibniz"] += big_bracket(u, v * w) != big_bracket(u, v) * w + (v * big_bracket(u, w)).scale(s)
            jac = big_bracket(big_bracket(u, v), w) + big_bracket(v, big_bracket(u, w)).scale(s)
            bad["jacobi"] += big_bracket(u, big_bracket(v, w)) != jac
        for law, n in bad.items():
            tally(failures, f"{law} on {name}", n, 200)
    record(1, failures)


# ------------------------------------------------------------------ 2
def test_criterion_02_dorfman_sign_anchors():
    ctx = GradedContext.tangent_of(["x1", "x2", "x3"])
    mu = standard_mu(ctx)
    names = list(ctx.base)
    rng = random.Random(2)
    failures = []
    bad_left = bad_right = 0
    for _ in range(50):
        xs = [random_scalar(rng, ctx, max_degree=2) for _ in names]
        al = [random_scalar(rng, ctx, max_degree=2) for _ in names]
        x = sum((ctx.theta(i).scale(xs[i]) for i in range(3)), ctx.zero())
        alpha = sum((ctx.xi(i).scale(al[i]) for i in range(3)), ctx.zero())
        idx = range(3)
        # [X, alpha] = X^i d_i alpha_k xi^k + d_j X^i alpha_i xi^j
        left = sum((ctx.xi(k).scale(sum((xs[i] * al[k].diff(names[i]) for i in idx), ZERO)) for k in idx), ctx.zero())
        left = left + sum((ctx.xi(j).scale(sum((xs[i].diff(names[j]) * al[i] for i in idx), ZERO)) for j in idx), ctx.zero())
        # [alpha, X] = -X^k d_k alpha_i xi^i + X^k d_j alpha_k xi^j
        right = sum((ctx.xi(i).scale(sum((-xs[k] * al[i].diff(names[k]) for k in idx), ZERO)) for i in idx), ctx.zero())
        right = right + sum((ctx.xi(j).scale(sum((xs[k] * al[k].diff(names[j]) for k in idx), ZERO)) for j in idx), ctx.zero())
        bad_left += big_bracket(big_bracket(x, mu), alpha) != left
        bad_right += big_bracket(big_bracket(alpha, mu), x) != right
    tally(failures, "[X,alpha]_D", bad_left, 50)
    tally(failures, "[alpha,X]_D", bad_right, 50)
    record(2, failures)


# ------------------------------------------------------------------ 3
def test_criterion_03_torsion_oracle():
    tangent = GradedContext.tangent_of(["x1", "x2", "x3"])
    lie = GradedContext.general(["x1"], ["a1", "a2", "a3"])
    cases = {"standard": (tangent, standard_mu(tangent)), "so3": (lie, so3_mu(lie)), "heisenberg": (lie, heisenberg_mu(lie))}
    failures = []
    for name, (ctx, mu) in cases.items():
        rng = random.Random(name)
        disagree = printed = 0
        for _ in range(100):
            n_elem = random_endo(rng, ctx, 2)
            table = nijenhuis_torsion(mu, n_elem, method="direct")
            disagree += evaluate_on_frame(nijenhuis_torsion(mu, n_elem)) != table
            printed += not torsion_squares_identity_as_printed(mu, n_elem).is_zero()
        tally(failures, f"torsion methods disagree over {name}", disagree, 100)
        tally(failures, f"1/2{{mu_N,mu_N}} = {{mu,T}} over {name}", printed, 100)
    record(3, failures)


# ------------------------------------------------------------------ 4
def test_criterion_04_sl2_and_lepage():
    failures = []
    two = ScalarExpr.const(2)
    for n in (2, 3):
        fr = Sl2Frame.canonical(n)
        rng = random.Random(n)
        bad = {"[h,e]=2e": 0, "[h,f]=-2f": 0, "[e,f]=h": 0, "round trip": 0, "primitive parts": 0}
        for _ in range(100):
            u = homogeneous(fr.ctx, rng, max_weight=3, max_terms=3)
            e, f, h = fr.raise_, fr.lower, fr.weight_op
            bad["[h,e]=2e"] += h(e(u)) - e(h(u)) != e(u).scale(two)
            bad["[h,f]=-2f"] += h(f(u)) - f(h(u)) != f(u).scale(-two)
            bad["[e,f]=h"] += e(f(u)) - f(e(u)) != h(u)
            parts = lepage_decompose(fr, u)
            bad["round trip"] += lepage_recompose(fr, parts) != u
            bad["primitive parts"] += not all(is_primitive(fr, p) for p in parts)
        for label, k in bad.items():
            tally(failures, f"{label} on T*R^{n}", k, 100)
    fr = Sl2Frame.canonical(2)
    mu = standard_mu(fr.ctx)
    gamma = big_bracket(fr.pi, mu)
    mu0 = lepage_decompose(fr, mu)[0]
    if mu != mu0 + big_bracket(fr.omega, gamma):
        failures.append(f"mu = mu_0 + ad_omega gamma_pi fails: mu_0 = {mu0}, mu - mu_0 - ad_omega gamma_pi = {mu - mu0 - big_bracket(fr.omega, gamma)}")
    record(4, failures)


# ------------------------------------------------------------------ 5
def test_criterion_05_identities():
    tangent = GradedContext.tangent_of(["x1", "x2", "x3"])
    lie = GradedContext.general(["x1"], ["a1", "a2", "a3"])
    settings = [(tangent, standard_mu(tangent)), (lie, so3_mu(lie))]
    bad = {"koszul square": 0, "poisson square contracted": 0, "poisson square twice contracted": 0, "square of bracket endo": 0, "contracted three-form": 0}
    total = 0
    for ctx, mu in settings:
        rng = random.Random(ctx.r + len(ctx.base))
        for _ in range(50):
            total += 1
            pi, omega = random_bivector(rng, ctx, 1), random_two_form(rng, ctx, 1)
            psi = random_three_form(rng, ctx, 1)
            x, y = random_vector(rng, ctx, 1), random_vector(rng, ctx, 1)
            bad["koszul square"] += not residual_koszul_square(mu, pi, omega).is_zero()
            bad["poisson square contracted"] += not residual_poisson_square_contracted(mu, pi, omega).is_zero()
            bad["poisson square twice contracted"] += not residual_poisson_square_twice_contracted(mu, pi, omega).is_zero()
            bad["square of bracket endo"] += not residual_square_of_bracket_endo(pi, omega).is_zero()
            bad["contracted three-form"] += not residual_contracted_three_form(pi, psi, x, y).is_zero()
    failures = []
    for label, k in bad.items():
        tally(failures, label, k, total)
    record(5, failures)


# ------------------------------------------------------------------ 6
def test_criterion_06_implication_diagram():
    failures = []
    for dim in (2, 4):
        ctx = GradedContext.tangent_of([f"x{i}" for i in range(1, dim + 1)])
        mu = standard_mu(ctx)
        rng = random.Random(60 + dim)
        ok = lambda kind, **t: check_structure(mu, kind, **t).verdict
        bad = 0
        for _ in range(20):
            t = constant_instance(rng, ctx, "POmega")
            n_elem = big_bracket(t["pi"], t["omega"])
            bad += not (ok("POmega", **t) and ok("PN", pi=t["pi"], N=n_elem) and ok("OmegaN", omega=t["omega"], N=n_elem))
            t = constant_instance(rng, ctx, "PN")
            omega = form_from_pn(t["pi"], t["N"])
            bad += not (ok("PN", **t) and ok("POmega", pi=t["pi"], omega=omega) and ok("OmegaN", omega=omega, N=t["N"]))
            t = constant_instance(rng, ctx, "OmegaN")
            pi = bivector_from_omega_n(t["omega"], t["N"])
            bad += not (ok("OmegaN", **t) and ok("PN", pi=pi, N=t["N"]) and ok("POmega", pi=pi, omega=t["omega"]))
            pi_sym = constant_instance(rng, ctx, "PN")["pi"]
            bad += not ok("Complementary", pi=pi_sym, omega=invert_bivector(pi_sym))
        tally(failures, f"implications in dimension {dim}", bad, 80)
    record(6, failures)


# ------------------------------------------------------------------ 7
def test_criterion_07_von_karman():
    ctx = GradedContext.cotangent(2, chart={"p1": 1})
    ma = build_ma(von_karman_form(ctx))
    rep = analyze_2d(ma)
    mu = ma.mu
    want = {
        "Pf": (rep.pfaffian, ScalarExpr.var("p1")),
        "d tilde_omega": (rep.d_normalized, parse_element("1/2*p1^(-3/2)*dp1^dp2^dq1", ctx)),
        "pi_omega": (rep.pi_omega, parse_element("p1^(-1)*@p1^@q2 - @p2^@q1", ctx)),
        "[pi_Omega, pi_omega]": (rep.schouten_pi_Omega_pi_omega, parse_element("-p1^(-2)*@q1^@q2^@p1", ctx).scale(ORIENTATION)),
    }
    failures = [f"{k}: got {got}, want {w}" for k, (got, w) in want.items() if got != w]
    if nijenhuis_torsion(mu, rep.J).is_zero():
        failures.append("torsion of J vanishes")
    for kind in ("OmegaN(normalized,J)", "PN(pi_Omega,J)"):
        if rep.checks[kind]["verdict"] != "fail":
            failures.append(f"{kind} passes")
    s_j = big_bracket(ma.pi_Omega + rep.J, mu)
    if big_bracket(s_j, s_j).is_zero():
        failures.append("{S_J, S_J} vanishes")
    record(7, failures)


# ------------------------------------------------------------------ 8
FORMS_3D = {"hess": hess_form, "SL": sl_form, "psSL": pssl_form}
FROZEN_LAMBDA = {"hess": 1, "SL": -4, "psSL": 4}
FROZEN_SIGNATURE = {"hess": (3, 3), "SL": (0, 6), "psSL": (3, 3)}
LAMBDA_SIGN = {"hess": -1, "SL": 1, "psSL": 1}


def sympy_signature(q):
    m = sympy.Matrix([[to_sympy(x) for x in row] for row in q])
    m = (m + m.T) / 2
    eig = m.eigenvals()
    return sum(k for v, k in eig.items() if v > 0), sum(k for v, k in eig.items() if v < 0)


def test_criterion_08_three_dimensional_classification():
    ctx = GradedContext.cotangent(3)
    failures = []
    signatures = {}
    for name, builder in FORMS_3D.items():
        ma = build_ma(builder(ctx))
        if not ma.effective:
            failures.append(f"{name} is not effective")
        h = hitchin_endo_matrix(ma)
        lam = trace(mat_mul(h, h)) / 6
        if not mat_eq(mat_mul(h, h), mat_scale(identity(6), lam)):
            failures.append(f"H^2 != lambda Id for {name}")
        if lam != ScalarExpr.const(FROZEN_LAMBDA[name]):
            failures.append(f"lambda({name}) = {lam}, frozen {FROZEN_LAMBDA[name]}")
        if (lam.constant_value() > 0) - (lam.constant_value() < 0) != LAMBDA_SIGN[name]:
            failures.append(f"lambda({name}) = {lam} has the wrong sign")
        q = quadratic_form_matrix(ma, h)
        signatures[name] = sympy_signature(q)
        if signatures[name] != FROZEN_SIGNATURE[name]:
            failures.append(f"signature({name}) = {signatures[name]}, frozen {FROZEN_SIGNATURE[name]}")
        rng = random.Random(name)
        vectors = [ctx.theta(a) for a in range(6)]
        for _ in range(20):
            vectors.append(sum((ctx.theta(a).scale(ScalarExpr.const(rng.randint(-4, 4))) for a in range(6)), ctx.zero()))
        bad_q = bad_contraction = 0
        for x in vectors:
            c = [x.coefficient([a]) for a in range(6)]
            tau = big_bracket(x, ma.omega)
            pf = modified_pfaffian(ma, tau)
            qxx = sum((q[a][b] * c[a] * c[b] for a in range(6) for b in range(6)), ZERO)
            bad_q += pf != qxx
            contraction = interior_bivector(ma.pi_Omega, interior_bivector(ma.pi_Omega, wedge(tau, tau)))
            bad_contraction += pf != contraction.as_scalar() * Fraction(-1, 4)
        tally(failures, f"Pf(i_X omega) = q(X,X) for {name}", bad_q, len(vectors))
        tally(failures, f"Pf(i_X omega) = -1/4 i_pi i_pi(i_X omega ^ i_X omega) for {name}", bad_contraction, len(vectors))
    if signatures["SL"] == signatures["psSL"]:
        failures.append("SL and psSL have the same signature")
    record(8, failures)


# ------------------------------------------------------------------ 9
def test_criterion_09_generalized_calabi_yau():
    ctx = GradedContext.cotangent(3)
    failures = []
    for name, builder in FORMS_3D.items():
        ma = build_ma(builder(ctx))
        s = ma.mu + ma.omega
        if not big_bracket(s, s).is_zero():
            failures.append(f"{{S,S}} != 0 for {name}")
        h = hitchin_endo_matrix(ma)
        lam = trace(mat_mul(h, h)) / 6
        scale = ScalarExpr.const(abs(lam.constant_value())) ** Fraction(-1, 2)
        h_elem = endo_from_matrix(ctx, mat_scale(h, scale))
        want = "complex" if lam.constant_value() < 0 else "product"
        try:
            kind = classify_generalized(s, DoubleEndo.from_element(ma.pi_Omega + h_elem)).kind
        except GbxError as exc:
            kind = f"{type(exc).__name__}"
        if kind != want:
            failures.append(f"J for {name} classifies as {kind}, want {want}")
        for label, res in pn_background_residuals(ma, h_elem).items():
            if not res.is_zero():
                failures.append(f"{label} != 0 for {name}")
    record(9, failures)


# ----------------------------------------------------------------- 10
def test_criterion_10_unimodularity():
    ctx = GradedContext.cotangent(2)
    failures = []
    bad = 0
    for seed in range(50):
        omega = random_effective_2d(random.Random(seed), ctx, 1)
        ma = build_ma(omega)
        bad += not (ma.effective and trace(endo_matrix(endo_of_form(ma))).is_zero())
    tally(failures, "Tr A = 0 on random effective forms", bad, 50)
    integrable = {"laplace": laplace_form(ctx), "wave": wave_form(ctx)}
    # Pf = a^2 - b*c, kept a nonzero square so the normalization stays rational
    for a, b, c in ((2, 1, 3), (1, 2, 1), (3, 2, 4), (1, 1, -3)):
        integrable[f"constant {a},{b},{c}"] = parse_element(f"{a}*dp1^dq2 - {a}*dp2^dq1 + {b}*dq1^dq2 + {c}*dp1^dp2", ctx)
    for name, omega in integrable.items():
        ma = build_ma(omega)
        try:
            tilde, _ = normalize_2d(ma)
        except (GbxError, ArithmeticError) as exc:
            failures.append(f"{name}: {exc}")
            continue
        j_elem = endo_of_form(ma, tilde)
        if not big_bracket(ma.mu, tilde).is_zero():
            failures.append(f"{name} is not integrable")
        elif not modular_cocycle(ma.mu, j_elem).is_zero():
            failures.append(f"modular cocycle of J for {name} is nonzero")
    record(10, failures)


# ----------------------------------------------------------------- 11
def test_criterion_11_ma_operators():
    ctx3 = GradedContext.cotangent(3)
    ctx2 = GradedContext.cotangent(2, chart={"p1": 1})
    sq = symbols("q1", "q2", "q3")
    failures = []
    rng = random.Random(11)
    bad = {"hess": 0, "SL": 0, "psSL": 0, "von Karman": 0}
    for _ in range(10):
        coeffs = {(i, j): ScalarExpr.const(Fraction(rng.randint(-5, 5), rng.randint(1, 3))) for i in range(3) for j in range(i, 3)}
        f = sum((c * ScalarExpr.var(f"q{i + 1}") * ScalarExpr.var(f"q{j + 1}") for (i, j), c in coeffs.items()), ZERO)
        f = f + ScalarExpr.const(rng.randint(-5, 5)) * ScalarExpr.var("q1")
        u = to_sympy(f)
        hess = sympy.hessian(u, sq)
        d = [sympy.diff(u, v, 2) for v in sq]
        targets = {"hess": hess.det() - 1, "SL": hess.det() - sum(d), "psSL": hess.det() - (d[0] + d[1] - d[2])}
        for name, target in targets.items():
            bad[name] += not same(ma_operator_scalar(build_ma(FORMS_3D[name](ctx3)), f), target)
        g = random_scalar(rng, GradedContext.tangent_of(["q1", "q2"]), max_degree=3, max_terms=6)
        v = to_sympy(g)
        q1, q2 = sq[:2]
        vk = sympy.diff(v, q1) * sympy.diff(v, q1, 2) - sympy.diff(v, q2, 2)
        bad["von Karman"] += not same(ma_operator_scalar(build_ma(von_karman_form(ctx2)), g), vk)
    for name, k in bad.items():
        tally(failures, f"{name} operator", k, 10)
    record(11, failures)


# ----------------------------------------------------------------- 12
def test_criterion_12_cli_golden_files(capsys):
    failures = []
    for name in ("von_karman", "sl"):
        doc = parse_file(HERE / "fixtures" / f"{name}.gbx")
        got = serialize(run_document(doc).document)
        if got != (HERE / "golden" / f"{name}.json").read_bytes():
            failures.append(f"{name}.json differs from the golden file")
        if serialize(run_document(doc, jobs=4).document) != got:
            failures.append(f"{name}: parallel run differs")
    fixture = HERE / "fixtures" / "von_karman.gbx"
    if main(["run", str(fixture), "--json"]) != 0:
        failures.append("von Karman run with an expected failure exits nonzero")
    report = json.loads(capsys.readouterr().out)
    omega_n = [r for r in report["reports"] if r.get("kind") == "OmegaN"]
    if not omega_n or omega_n[0]["verdict"] != "fail" or omega_n[0]["expect"] != "fail" or not omega_n[0]["ok"]:
        failures.append(f"OmegaN expect-fail report is wrong: {omega_n}")
    record(12, failures)
