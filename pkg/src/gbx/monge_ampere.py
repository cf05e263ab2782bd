"""Monge-Ampere structures on T*R^n for n = 2, 3, and Jacobi systems.

Coordinates are q1..qn, p1..pn; the algebroid is the tangent bundle of T*R^n,
so xi = dq, dp and theta = d/dq, d/dp.  Omega = sum dq_i ^ dp_i and pi_Omega is
its inverse bivector.  An effective n-form omega defines the operator
Delta_omega(f) = (df)* omega acting on functions f(q).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .algebroid import standard_mu
from .compat import check_structure
from .courant import DoubleEndo, classify_generalized
from .errors import (
    Degenerate,
    EffectivityRequired,
    GbxError,
    NotABaseFunction,
    NotClosed,
    NotRepresentable,
    PfaffianNotUnit,
    WrongDegree,
)
from .graded import GradedContext, GradedElement, big_bracket, wedge
from .scalar import ZERO, ScalarExpr, as_scalar
from .tensors import (
    endo_from_matrix,
    endo_matrix,
    eval_matrix,
    flat_matrix,
    identity,
    invert_two_form,
    is_form,
    mat_add,
    mat_eq,
    mat_mul,
    mat_scale,
    require_form,
    sharp_matrix,
    signature,
    trace,
)


def half_dim(ctx: GradedContext) -> int:
    n = ctx.n // 2
    expected = tuple(f"q{i + 1}" for i in range(n)) + tuple(f"p{i + 1}" for i in range(n))
    if not ctx.tangent or ctx.base != expected:
        raise ValueError("Monge-Ampere structures need the context of T*R^n (q1..qn, p1..pn)")
    return n


def canonical_symplectic(ctx: GradedContext) -> GradedElement:
    """Omega = sum dq_i ^ dp_i."""
    n = half_dim(ctx)
    out = ctx.zero()
    for i in range(n):
        out = out + ctx.xi(i) * ctx.xi(n + i)
    return out


def top_coefficient(u: GradedElement) -> ScalarExpr:
    """Coefficient of dq1^..^dqn^dp1^..^dpn."""
    r = u.ctx.r
    return u.coefficient(tuple(range(r, 2 * r)))


@dataclass
class MAStructure:
    ctx: GradedContext
    omega: GradedElement
    Omega: GradedElement
    pi_Omega: GradedElement
    n: int
    effectivity_residual: GradedElement

    @property
    def mu(self) -> GradedElement:
        return standard_mu(self.ctx)

    @property
    def effective(self) -> bool:
        return self.effectivity_residual.is_zero()


def build_ma(omega: GradedElement, require_effective: bool = False) -> MAStructure:
    """Non-effective forms are kept and flagged unless ``require_effective``."""
    ctx = omega.ctx
    n = half_dim(ctx)
    if not is_form(omega, n):
        raise WrongDegree(f"a Monge-Ampere form on T*R^{n} must be of degree {n}")
    big = canonical_symplectic(ctx)
    pi_big = invert_two_form(big)
    res = wedge(omega, big)
    if require_effective and not res.is_zero():
        raise EffectivityRequired("omega ^ Omega is not zero", res)
    return MAStructure(ctx, omega, big, pi_big, n, res)


def is_effective(ma_or_form) -> bool:
    omega = ma_or_form.omega if isinstance(ma_or_form, MAStructure) else ma_or_form
    big = canonical_symplectic(omega.ctx)
    return wedge(omega, big).is_zero()


def contraction_with_pi_omega(ma: MAStructure) -> GradedElement:
    """{omega, pi_Omega}; zero exactly for effective n-forms."""
    return big_bracket(ma.omega, ma.pi_Omega)


def ma_operator_apply(ma: MAStructure, f) -> GradedElement:
    """(df)* omega: substitute p_i = f_{q_i} and dp_i = sum_j f_{q_i q_j} dq_j."""
    ctx = ma.ctx
    n = ma.n
    f = as_scalar(f)
    qs = [f"q{i + 1}" for i in range(n)]
    for v in f.free_vars():
        if v not in qs:
            raise NotABaseFunction(f"{f} depends on {v}, not only on q")
    grads = [f.diff(q) for q in qs]
    subs = {f"p{i + 1}": grads[i] for i in range(n)}
    pulled = []
    for i in range(n):
        pulled.append(ctx.xi(i))
    for i in range(n):
        one_form = ctx.zero()
        for j in range(n):
            one_form = one_form + ctx.xi(j).scale(grads[i].diff(qs[j]))
        pulled.append(one_form)
    out = ctx.zero()
    for (pe, word), c in ma.omega.terms.items():
        term = ctx.scalar(c.substitute(subs))
        for g in word:
            term = wedge(term, pulled[g - ctx.r])
        out = out + term
    return out


def ma_operator_scalar(ma: MAStructure, f) -> ScalarExpr:
    """Coefficient of dq1^..^dqn in (df)* omega."""
    out = ma_operator_apply(ma, f)
    return out.coefficient(tuple(range(ma.ctx.r, ma.ctx.r + ma.n)))


def hessian_det(f: ScalarExpr, qs: list) -> ScalarExpr:
    from .tensors import determinant

    return determinant([[f.diff(a).diff(b) for b in qs] for a in qs])


# --------------------------------------------------------------------- 2-D
@dataclass
class MA2Report:
    form: str
    effective: bool
    A: GradedElement
    pfaffian: ScalarExpr
    sample_point: dict
    pfaffian_at_sample: Fraction
    type: str
    A_squared_plus_pf_zero: bool
    trace_A: ScalarExpr
    normalized: GradedElement | None = None
    J: GradedElement | None = None
    J_squared: str | None = None
    pi_normalized: GradedElement | None = None
    d_normalized: GradedElement | None = None
    schouten_pi_Omega_pi_normalized: GradedElement | None = None
    pi_omega: GradedElement | None = None
    schouten_pi_Omega_pi_omega: GradedElement | None = None
    checks: dict = field(default_factory=dict)
    generalized: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)

    @property
    def integrable(self) -> bool | None:
        return None if self.d_normalized is None else self.d_normalized.is_zero()

    @property
    def unimodular(self) -> bool:
        return self.trace_A.is_zero()

    def to_json(self) -> dict:
        s = lambda x: None if x is None else str(x)
        return {
            "command": "ma analyze",
            "dimension": 2,
            "form": self.form,
            "effective": self.effective,
            "A": str(self.A),
            "pfaffian": str(self.pfaffian),
            "sample_point": {k: str(v) for k, v in sorted(self.sample_point.items())},
            "pfaffian_at_sample": str(self.pfaffian_at_sample),
            "type": self.type,
            "A_squared_plus_pf_id_zero": self.A_squared_plus_pf_zero,
            "trace_A": str(self.trace_A),
            "unimodular": self.unimodular,
            "normalized_form": s(self.normalized),
            "J": s(self.J),
            "J_squared": self.J_squared,
            "pi_normalized": s(self.pi_normalized),
            "d_normalized": s(self.d_normalized),
            "integrable": self.integrable,
            "schouten_pi_Omega_pi_normalized": s(self.schouten_pi_Omega_pi_normalized),
            "pi_omega": s(self.pi_omega),
            "schouten_pi_Omega_pi_omega": s(self.schouten_pi_Omega_pi_omega),
            "checks": self.checks,
            "generalized": self.generalized,
            "notes": list(self.notes),
        }


def default_sample_point(ctx: GradedContext) -> dict:
    """Chart coordinates at their sign, every other coordinate at 0."""
    chart = ctx.chart_map
    return {b: Fraction(chart.get(b, 0)) for b in ctx.base}


def pfaffian_2d(ma: MAStructure) -> ScalarExpr:
    """Pf with omega ^ omega = Pf Omega ^ Omega."""
    return top_coefficient(wedge(ma.omega, ma.omega)) / top_coefficient(wedge(ma.Omega, ma.Omega))


def endo_of_form(ma: MAStructure, omega: GradedElement | None = None) -> GradedElement:
    """A_omega = pi_Omega# o omega_flat = {pi_Omega, omega}."""
    return big_bracket(ma.pi_Omega, ma.omega if omega is None else omega)


def normalize_2d(ma: MAStructure) -> tuple:
    """(omega / sqrt|Pf|, sqrt|Pf|) on the context's chart."""
    pf = pfaffian_2d(ma)
    root = pf.abs_on_chart(ma.ctx.chart_map) ** Fraction(1, 2)
    return ma.omega.scale(root.inverse()), root


def analyze_2d(ma: MAStructure, sample_point: dict | None = None) -> MA2Report:
    ctx = ma.ctx
    point = default_sample_point(ctx) if sample_point is None else {k: Fraction(v) for k, v in sample_point.items()}
    a_elem = endo_of_form(ma)
    a_mat = endo_matrix(a_elem)
    pf = pfaffian_2d(ma)
    pf_val = pf.eval(point)
    kind = "elliptic" if pf_val > 0 else "hyperbolic" if pf_val < 0 else "degenerate-locus"
    a2 = mat_mul(a_mat, a_mat)
    a2_ok = mat_eq(mat_add(a2, mat_scale(identity(ctx.r), pf)), [[ZERO] * ctx.r for _ in range(ctx.r)])
    rep = MA2Report(
        form=str(ma.omega),
        effective=ma.effective,
        A=a_elem,
        pfaffian=pf,
        sample_point=point,
        pfaffian_at_sample=pf_val,
        type=kind,
        A_squared_plus_pf_zero=a2_ok,
        trace_A=trace(a_mat),
    )
    mu = ma.mu
    try:
        rep.pi_omega = invert_two_form(ma.omega)
        rep.schouten_pi_Omega_pi_omega = big_bracket(big_bracket(ma.pi_Omega, mu), rep.pi_omega)
    except Degenerate:
        rep.notes.append("omega is degenerate; pi_omega is undefined")
    try:
        tilde, root = normalize_2d(ma)
    except (NotRepresentable, ArithmeticError, ValueError) as exc:
        rep.notes.append(f"normalization unavailable: {exc}")
        return rep
    if pf_val == 0:
        rep.notes.append("degenerate at the sample point")
        return rep
    j_elem = endo_of_form(ma, tilde)
    rep.normalized = tilde
    rep.J = j_elem
    jm = endo_matrix(j_elem)
    j2 = mat_mul(jm, jm)
    rep.J_squared = "-Id" if mat_eq(j2, mat_scale(identity(ctx.r), -1)) else "Id" if mat_eq(j2, identity(ctx.r)) else "other"
    rep.pi_normalized = invert_two_form(tilde)
    rep.d_normalized = big_bracket(mu, tilde)
    rep.schouten_pi_Omega_pi_normalized = big_bracket(big_bracket(ma.pi_Omega, mu), rep.pi_normalized)
    rep.checks = {
        "PN(pi_Omega,J)": _check_json(mu, "PN", pi=ma.pi_Omega, N=j_elem),
        "OmegaN(normalized,J)": _check_json(mu, "OmegaN", omega=tilde, N=j_elem),
    }
    gen = {}
    big_j = DoubleEndo.from_element(ma.pi_Omega + j_elem)
    s_j = big_bracket(big_j.element, mu)
    gen["pi_Omega+J"] = _classify_json(mu, big_j)
    gen["pi_Omega+J"]["deformed_self_bracket_zero"] = big_bracket(s_j, s_j).is_zero()
    gen["A-block"] = _classify_json(mu, generalized_a_block(ma))
    if rep.J_squared == "Id":
        gen["hyperbolic-block"] = _classify_json(mu, generalized_hyperbolic_block(ma, j_elem))
    rep.generalized = gen
    return rep


def _check_json(mu, kind: str, **tensors) -> dict:
    try:
        return check_structure(mu, kind, **tensors).to_json()
    except GbxError as exc:
        return {"kind": kind, "verdict": "fail", "error": f"{type(exc).__name__}: {exc}"}


def _classify_json(mu, endo) -> dict:
    try:
        return classify_generalized(mu, endo).to_json()
    except GbxError as exc:  # reported, never raised, so a report is always produced
        return {"kind": "unavailable", "error": f"{type(exc).__name__}: {exc}"}


def generalized_a_block(ma: MAStructure) -> DoubleEndo:
    """Blocks (A, pi_Omega#; -Omega_flat(Id + A^2), -A*)."""
    r = ma.ctx.r
    a = endo_matrix(endo_of_form(ma))
    big_flat = flat_matrix(ma.Omega)
    lam = mat_scale(mat_mul(big_flat, mat_add(identity(r), mat_mul(a, a))), -1)
    return DoubleEndo.from_blocks(ma.ctx, a, sharp_matrix(ma.pi_Omega), lam)


def generalized_hyperbolic_block(ma: MAStructure, j_elem: GradedElement) -> DoubleEndo:
    """Blocks (J, pi_Omega#; -2 Omega_flat, -J*) for a hyperbolic J."""
    return DoubleEndo.from_blocks(ma.ctx, endo_matrix(j_elem), sharp_matrix(ma.pi_Omega), mat_scale(flat_matrix(ma.Omega), -2))


# --------------------------------------------------------------------- 3-D
def volume_form(ma: MAStructure) -> GradedElement:
    """-(1/6) Omega^3."""
    big = ma.Omega
    return wedge(wedge(big, big), big).scale(ScalarExpr.const(Fraction(-1, 6)))


def hitchin_endo_matrix(ma: MAStructure) -> list:
    """H with i_{H X} vol = i_X omega ^ omega."""
    ctx = ma.ctx
    r = ctx.r
    vol = volume_form(ma)
    cols = []
    for c in range(r):
        five = wedge(big_bracket(ctx.theta(c), ma.omega), ma.omega)
        col = []
        for a in range(r):
            ref = big_bracket(ctx.theta(a), vol)
            ((key, rc),) = ref.terms.items()
            col.append(five.terms.get(key, ZERO) / rc)
        cols.append(col)
    return [list(row) for row in zip(*cols)]


def hitchin_endo(ma: MAStructure) -> GradedElement:
    return endo_from_matrix(ma.ctx, hitchin_endo_matrix(ma))


def modified_pfaffian(ma: MAStructure, tau: GradedElement) -> ScalarExpr:
    """Pf(tau) with tau ^ tau ^ Omega = -(1/3) Pf(tau) Omega^3 for a 2-form tau."""
    big = ma.Omega
    lhs = top_coefficient(wedge(wedge(tau, tau), big))
    cube = top_coefficient(wedge(wedge(big, big), big))
    return lhs / cube * -3


def quadratic_form_matrix(ma: MAStructure, h: list | None = None) -> list:
    """q(X, Y) = Omega(H X, Y) on the coordinate frame."""
    ctx = ma.ctx
    h = hitchin_endo_matrix(ma) if h is None else h
    r = ctx.r
    big_flat = flat_matrix(ma.Omega)
    # Omega(U, V) = V . i_U Omega = -(V^T W U), W the flat matrix
    return [[-sum((big_flat[b][k] * h[k][a] for k in range(r)), ZERO) for b in range(r)] for a in range(r)]


ORBIT_REPRESENTATIVES = {}


@dataclass
class MA3Report:
    form: str
    sample_point: dict
    H: GradedElement
    lam: ScalarExpr
    lam_at_sample: Fraction
    H_squared_is_scalar: bool
    q_signature: tuple
    orbit: str
    closed: bool
    generalized: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)

    @property
    def lam_sign(self) -> str:
        return "+" if self.lam_at_sample > 0 else "-" if self.lam_at_sample < 0 else "0"

    def to_json(self) -> dict:
        return {
            "command": "ma analyze",
            "dimension": 3,
            "form": self.form,
            "sample_point": {k: str(v) for k, v in sorted(self.sample_point.items())},
            "H": str(self.H),
            "lambda": str(self.lam),
            "lambda_at_sample": str(self.lam_at_sample),
            "lambda_sign": self.lam_sign,
            "H_squared_is_lambda_id": self.H_squared_is_scalar,
            "q_signature": list(self.q_signature),
            "orbit": self.orbit,
            "closed": self.closed,
            "generalized": self.generalized,
            "notes": list(self.notes),
        }


def analyze_3d(ma: MAStructure, sample_point: dict | None = None) -> MA3Report:
    ctx = ma.ctx
    if ma.n != 3:
        raise WrongDegree("analyze_3d needs T*R^3")
    if not ma.effective:
        raise EffectivityRequired("the 3-form is not effective", ma.effectivity_residual)
    point = default_sample_point(ctx) if sample_point is None else {k: Fraction(v) for k, v in sample_point.items()}
    h = hitchin_endo_matrix(ma)
    h2 = mat_mul(h, h)
    lam = trace(h2) / 6
    scalar = mat_eq(h2, mat_scale(identity(ctx.r), lam))
    lam_val = lam.eval(point)
    q = eval_matrix(quadratic_form_matrix(ma, h), point)
    sym = [[(q[i][j] + q[j][i]) / 2 for j in range(len(q))] for i in range(len(q))]
    sig = signature(sym)
    rep = MA3Report(
        form=str(ma.omega),
        sample_point=point,
        H=endo_from_matrix(ctx, h),
        lam=lam,
        lam_at_sample=lam_val,
        H_squared_is_scalar=scalar,
        q_signature=sig,
        orbit=orbit_of(lam_val, sig),
        closed=big_bracket(ma.mu, ma.omega).is_zero(),
    )
    try:
        gs = generalized_structure_3d(ma)
        rep.generalized = gs.to_json()
    except GbxError as exc:
        rep.generalized = {"kind": "unavailable", "error": f"{type(exc).__name__}: {exc}"}
    return rep


def orbit_of(lam_val: Fraction, sig: tuple) -> str:
    """Name of the normal form with the same lambda sign and q signature."""
    if not ORBIT_REPRESENTATIVES:
        for name, builder in (("hess", hess_form), ("SL", sl_form), ("psSL", pssl_form)):
            ctx = GradedContext.cotangent(3)
            rep_ma = build_ma(builder(ctx))
            h = hitchin_endo_matrix(rep_ma)
            lam = trace(mat_mul(h, h)) / 6
            qm = eval_matrix(quadratic_form_matrix(rep_ma, h), default_sample_point(ctx))
            sym = [[(qm[i][j] + qm[j][i]) / 2 for j in range(6)] for i in range(6)]
            ORBIT_REPRESENTATIVES[name] = (1 if lam.constant_value() > 0 else -1, signature(sym))
    s = 1 if lam_val > 0 else -1 if lam_val < 0 else 0
    if s == 0:
        return "degenerate"
    names = [name for name, (ls, sg) in ORBIT_REPRESENTATIVES.items() if ls == s and sg == tuple(sig)]
    # normal forms sharing both invariants are reported together
    return "/".join(names) if names else "unclassified"


@dataclass
class Structure3D:
    S: GradedElement
    J: GradedElement
    scale: ScalarExpr
    self_bracket: GradedElement
    classification: object
    residuals: dict

    def to_json(self) -> dict:
        return {
            "S_self_bracket_zero": self.self_bracket.is_zero(),
            "classification": self.classification.to_json(),
            "normalization": str(self.scale),
            "pn_background_residuals": {k: str(v) for k, v in sorted(self.residuals.items())},
        }


def generalized_structure_3d(ma: MAStructure) -> Structure3D:
    """J = pi_Omega + H/sqrt|lambda| over S = mu + omega (omega closed, lambda constant)."""
    mu = ma.mu
    d_omega = big_bracket(mu, ma.omega)
    if not d_omega.is_zero():
        raise NotClosed("the 3-form is not closed", d_omega)
    h = hitchin_endo_matrix(ma)
    lam = trace(mat_mul(h, h)) / 6
    if not lam.is_constant() or lam.is_zero():
        raise PfaffianNotUnit(f"lambda = {lam} is not a nonzero constant")
    try:
        scale = ScalarExpr.const(abs(lam.constant_value())) ** Fraction(-1, 2)
    except ArithmeticError as exc:
        raise PfaffianNotUnit(f"|lambda| = {lam} has no rational square root") from exc
    h_elem = endo_from_matrix(ma.ctx, mat_scale(h, scale))
    s = mu + ma.omega
    j = ma.pi_Omega + h_elem
    cls = classify_generalized(s, DoubleEndo.from_element(j))
    return Structure3D(s, j, scale, big_bracket(s, s), cls, pn_background_residuals(ma, h_elem))


def pn_background_residuals(ma: MAStructure, h_elem: GradedElement) -> dict:
    """The conditions making (pi_Omega, H) Poisson-Nijenhuis with background omega."""
    bb = big_bracket
    mu, pi, om = ma.mu, ma.pi_Omega, ma.omega
    h2 = endo_from_matrix(ma.ctx, mat_mul(endo_matrix(h_elem), endo_matrix(h_elem)))
    ad = lambda u: bb(pi, u)
    return {
        "ad_pi^2(mu)": ad(ad(mu)),
        "{ad_pi(mu),H}-ad_pi{H,mu}-ad_pi^2(omega)": bb(ad(mu), h_elem) - ad(bb(h_elem, mu)) - ad(ad(om)),
        "{{H,mu},H}+{ad_pi(omega),H}-ad_pi{H,omega}+{H^2,mu}": bb(bb(h_elem, mu), h_elem) + bb(ad(om), h_elem) - ad(bb(h_elem, om)) + bb(h2, mu),
        "{{H,omega},H}+{H^2,omega}": bb(bb(h_elem, om), h_elem) + bb(h2, om),
    }


# --------------------------------------------------------------- instances
def _form(ctx: GradedContext, spec: list) -> GradedElement:
    """Sum of coeff * d<a> ^ d<b> ^ ... from (coeff, [coordinate names]) pairs."""
    out = ctx.zero()
    for coeff, names in spec:
        term = ctx.scalar(as_scalar(coeff))
        for nm in names:
            term = wedge(term, ctx.xi(ctx.base_index(nm)))
        out = out + term
    return out


def von_karman_form(ctx: GradedContext) -> GradedElement:
    """p1 dp1 ^ dq2 - dp2 ^ dq1."""
    return _form(ctx, [(ScalarExpr.var("p1"), ["p1", "q2"]), (-1, ["p2", "q1"])])


def laplace_form(ctx: GradedContext) -> GradedElement:
    return _form(ctx, [(1, ["p1", "q2"]), (-1, ["p2", "q1"])])


def wave_form(ctx: GradedContext) -> GradedElement:
    return _form(ctx, [(1, ["p1", "q2"]), (1, ["p2", "q1"])])


def hess_form(ctx: GradedContext) -> GradedElement:
    return _form(ctx, [(1, ["p1", "p2", "p3"]), (-1, ["q1", "q2", "q3"])])


def sl_form(ctx: GradedContext) -> GradedElement:
    return _form(ctx, [(1, ["p1", "p2", "p3"]), (-1, ["p1", "q2", "q3"]), (-1, ["q1", "p2", "q3"]), (-1, ["q1", "q2", "p3"])])


def pssl_form(ctx: GradedContext) -> GradedElement:
    return _form(ctx, [(1, ["p1", "p2", "p3"]), (-1, ["p1", "q2", "q3"]), (-1, ["p2", "q1", "q3"]), (-1, ["p3", "q1", "q2"])])


def random_effective_2d(rng, ctx: GradedContext, max_degree: int = 1) -> GradedElement:
    """Effective part of a random 2-form: subtract its trace part along Omega."""
    from .fuzz import random_two_form

    big = canonical_symplectic(ctx)
    pi_big = invert_two_form(big)
    w = random_two_form(rng, ctx, max_degree)
    # full contractions with pi_Omega are traces of {pi_Omega, .}
    contraction = trace(endo_matrix(big_bracket(pi_big, w)))
    full = trace(endo_matrix(big_bracket(pi_big, big)))
    return w - big.scale(contraction / full)


# ------------------------------------------------------------ Jacobi systems
def jacobi_context(n: int = 2) -> GradedContext:
    """M x R^2 with M = T*R^n: coordinates q, p and the extra pair (t, s)."""
    coords = [f"q{i + 1}" for i in range(n)] + [f"p{i + 1}" for i in range(n)] + ["t", "s"]
    return GradedContext.tangent_of(coords)


@dataclass
class JacobiReport:
    omega1: GradedElement
    omega2: GradedElement
    A: GradedElement | None
    nondegenerate: bool
    epsilon: int | None
    conditions: dict
    bihamiltonian: dict

    def to_json(self) -> dict:
        return {
            "command": "jacobi analyze",
            "omega1": str(self.omega1),
            "omega2": str(self.omega2),
            "A": None if self.A is None else str(self.A),
            "nondegenerate": self.nondegenerate,
            "epsilon": self.epsilon,
            "conditions": {k: str(v) for k, v in sorted(self.conditions.items())},
            "bihamiltonian": {k: str(v) for k, v in sorted(self.bihamiltonian.items())},
        }


def jacobi_analyze(omega1: GradedElement, omega2: GradedElement) -> JacobiReport:
    """Nondegeneracy (omega1 ^ omega2 = 0, omega1^2 = eps omega2^2) and bihamiltonian conditions."""
    ctx = omega1.ctx
    require_form(omega1, 2)
    require_form(omega2, 2)
    mu = standard_mu(ctx)
    mixed = wedge(omega1, omega2)
    sq1, sq2 = wedge(omega1, omega1), wedge(omega2, omega2)
    eps = None
    for e in (1, -1):
        if not sq1.is_zero() and (sq1 - sq2.scale(e)).is_zero():
            eps = e
    conditions = {"omega1^omega2": mixed, "omega1^omega1-eps*omega2^omega2": sq1 - sq2.scale(eps or 1)}
    a_elem, biham = None, {}
    try:
        pi1, pi2 = invert_two_form(omega1), invert_two_form(omega2)
        a_elem = big_bracket(pi1, omega2)
        bb = big_bracket
        biham = {
            "[pi1,pi1]-[pi2,pi2]": bb(bb(pi1, mu), pi1) - bb(bb(pi2, mu), pi2),
            "[pi1,pi2]": bb(bb(pi1, mu), pi2),
            "d omega1": bb(mu, omega1),
            "d omega2": bb(mu, omega2),
        }
    except Degenerate:
        pass
    nondeg = mixed.is_zero() and eps is not None
    return JacobiReport(omega1, omega2, a_elem, nondeg, eps, conditions, biham)


def jacobi_operator_apply(omega: GradedElement, f) -> GradedElement:
    """omega restricted to the graph of f(q, t): p = f_q, s = f_t."""
    ctx = omega.ctx
    base = list(ctx.base)
    n = (len(base) - 2) // 2
    f = as_scalar(f)
    indep = [f"q{i + 1}" for i in range(n)] + ["t"]
    for v in f.free_vars():
        if v not in indep:
            raise NotABaseFunction(f"{f} depends on {v}")
    grads = {v: f.diff(v) for v in indep}
    subs = {f"p{i + 1}": grads[f"q{i + 1}"] for i in range(n)}
    subs["s"] = grads["t"]
    pulled = {}
    for v in indep:
        pulled[v] = ctx.xi(ctx.base_index(v))
    for dep, g in list(subs.items()):
        one = ctx.zero()
        for v in indep:
            one = one + ctx.xi(ctx.base_index(v)).scale(g.diff(v))
        pulled[dep] = one
    out = ctx.zero()
    for (pe, word), c in omega.terms.items():
        term = ctx.scalar(c.substitute(subs))
        for g in word:
            term = wedge(term, pulled[base[g - ctx.r]])
        out = out + term
    return out
