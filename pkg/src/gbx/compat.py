"""Compatibility conditions between a bivector, a 2-form and an endomorphism.

All conditions are big-bracket expressions evaluated exactly; a report lists
every condition with its residual so a failure shows what did not vanish.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

from .algebroid import deformed_bracket, mu_of, torsion_bigbracket
from .courant import Classification, DoubleEndo, classify_generalized
from .errors import MissingTensor, NotPoisson, SideConditionFails, SkewConditionFails, SquareMismatch, TorsionNonzero
from .graded import GradedElement, big_bracket
from .scalar import ScalarExpr
from .tensors import (
    bivector_from_sharp,
    inverse,
    two_form_from_flat,
    compose,
    endo_matrix,
    endo_trace,
    flat_matrix,
    invert_bivector,
    invert_two_form,
    is_nondegenerate_form,
    mat_eq,
    mat_mul,
    require_endo,
    require_form,
    require_multivector,
    sharp,
    sharp_matrix,
    transpose,
)

HALF = ScalarExpr.const(Fraction(1, 2))
QUARTER = ScalarExpr.const(Fraction(1, 4))


_mu = mu_of


# -------------------------------------------------------------- basic pieces
def poisson_square(a, pi: GradedElement) -> GradedElement:
    """[pi, pi]_mu = {{pi, mu}, pi}."""
    return big_bracket(big_bracket(pi, _mu(a)), pi)


def koszul_bracket(a, pi: GradedElement, alpha: GradedElement, beta: GradedElement) -> GradedElement:
    """[alpha, beta]_pi = {{alpha, {pi, mu}}, beta}."""
    return big_bracket(big_bracket(alpha, big_bracket(pi, _mu(a))), beta)


def pi_n(pi: GradedElement, n_elem: GradedElement) -> GradedElement:
    """Bivector with sharp map N o pi#."""
    return big_bracket(pi, n_elem).scale(HALF)


def omega_n(omega: GradedElement, n_elem: GradedElement) -> GradedElement:
    """2-form with flat map omega_flat o N."""
    return big_bracket(n_elem, omega).scale(HALF)


def skew_condition(pi: GradedElement, n_elem: GradedElement) -> bool:
    """N o pi# = pi# o N*."""
    m, p = endo_matrix(n_elem), sharp_matrix(pi)
    return mat_eq(mat_mul(m, p), mat_mul(p, transpose(m)))


def flat_condition(omega: GradedElement, n_elem: GradedElement) -> bool:
    """omega_flat o N = N* o omega_flat."""
    m, w = endo_matrix(n_elem), flat_matrix(omega)
    return mat_eq(mat_mul(w, m), mat_mul(transpose(m), w))


def compatibility_tensor(a, pi: GradedElement, n_elem: GradedElement) -> GradedElement:
    """C_mu(pi, N) = {pi, {N, mu}} + {N, {pi, mu}}, defined once N pi# = pi# N*."""
    require_multivector(pi, 2)
    require_endo(n_elem)
    if not skew_condition(pi, n_elem):
        residual = big_bracket(pi, n_elem)
        raise SkewConditionFails("N o pi# differs from pi# o N*", residual)
    mu = _mu(a)
    return big_bracket(pi, big_bracket(n_elem, mu)) + big_bracket(n_elem, big_bracket(pi, mu))



def form_from_pn(pi: GradedElement, n_elem: GradedElement) -> GradedElement:
    """omega with omega_flat = (pi#)^-1 o N, so that {pi, omega} = N."""
    require_endo(n_elem)
    if not skew_condition(pi, n_elem):
        raise SkewConditionFails("N o pi# differs from pi# o N*", big_bracket(pi, n_elem))
    w = mat_mul(inverse(sharp_matrix(pi)), endo_matrix(n_elem))
    return two_form_from_flat(pi.ctx, w)


def bivector_from_omega_n(omega: GradedElement, n_elem: GradedElement) -> GradedElement:
    """pi with pi# = N o (omega_flat)^-1, so that {pi, omega} = N."""
    require_endo(n_elem)
    if not flat_condition(omega, n_elem):
        raise SkewConditionFails("omega_flat o N differs from N* o omega_flat", big_bracket(n_elem, omega))
    p = mat_mul(endo_matrix(n_elem), inverse(flat_matrix(omega)))
    return bivector_from_sharp(omega.ctx, p)

# -------------------------------------------------------------- structures
@dataclass
class Condition:
    name: str
    residual: GradedElement

    @property
    def holds(self) -> bool:
        return self.residual.is_zero()

    def to_json(self) -> dict:
        return {"name": self.name, "holds": self.holds, "residual": str(self.residual)}


@dataclass
class StructureReport:
    kind: str
    conditions: list = field(default_factory=list)

    @property
    def verdict(self) -> bool:
        return all(c.holds for c in self.conditions)

    def condition(self, name: str) -> Condition:
        for c in self.conditions:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "verdict": "pass" if self.verdict else "fail",
            "conditions": [c.to_json() for c in self.conditions],
        }


STRUCTURE_KINDS = {
    "Poisson": ("pi",),
    "PN": ("pi", "N"),
    "POmega": ("pi", "omega"),
    "OmegaN": ("omega", "N"),
    "HitchinPair": ("omega", "N"),
    "Complementary": ("pi", "omega"),
    "CompatiblePair": ("pi", "pi1"),
}


def _need(kind: str, tensors: dict) -> list:
    missing = [t for t in STRUCTURE_KINDS[kind] if tensors.get(t) is None]
    if missing:
        raise MissingTensor(f"{kind} needs {', '.join(missing)}")
    return [tensors[t] for t in STRUCTURE_KINDS[kind]]


def _nijenhuis(mu, n_elem) -> GradedElement:
    return big_bracket(n_elem, big_bracket(n_elem, mu)) - big_bracket(compose(n_elem, n_elem), mu)


def check_structure(a, kind: str, **tensors) -> StructureReport:
    """Evaluate the defining conditions of a named structure.

    Algebraic side conditions (N pi# = pi# N*, omega_flat N = N* omega_flat,
    nondegeneracy) are checked first and raise SideConditionFails.
    """
    if kind not in STRUCTURE_KINDS:
        raise ValueError(f"unknown structure kind {kind!r}; expected one of {sorted(STRUCTURE_KINDS)}")
    mu = _mu(a)
    args = _need(kind, tensors)
    bb = big_bracket
    rep = StructureReport(kind)
    add = lambda name, res: rep.conditions.append(Condition(name, res))
    if kind == "Poisson":
        (pi,) = args
        require_multivector(pi, 2)
        add("[pi,pi]=0", poisson_square(mu, pi))
    elif kind == "PN":
        pi, n_elem = args
        require_multivector(pi, 2)
        require_endo(n_elem)
        if not skew_condition(pi, n_elem):
            raise SideConditionFails("N o pi# differs from pi# o N*", bb(pi, n_elem))
        add("[pi,pi]=0", poisson_square(mu, pi))
        add("{{pi,mu},N}+{{N,mu},pi}=0", bb(bb(pi, mu), n_elem) + bb(bb(n_elem, mu), pi))
        add("torsion=0", _nijenhuis(mu, n_elem))
    elif kind == "POmega":
        pi, omega = args
        require_multivector(pi, 2)
        require_form(omega, 2)
        add("[pi,pi]=0", poisson_square(mu, pi))
        add("d omega=0", bb(mu, omega))
        add("{{{pi,omega},mu},omega}=0", bb(bb(bb(pi, omega), mu), omega))
    elif kind in ("OmegaN", "HitchinPair"):
        omega, n_elem = args
        require_form(omega, 2)
        require_endo(n_elem)
        if not flat_condition(omega, n_elem):
            raise SideConditionFails("omega_flat o N differs from N* o omega_flat", bb(n_elem, omega))
        if kind == "HitchinPair" and not is_nondegenerate_form(omega):
            raise SideConditionFails("a Hitchin pair needs a symplectic form", omega)
        add("d omega=0", bb(mu, omega))
        if kind == "OmegaN":
            add("torsion=0", _nijenhuis(mu, n_elem))
        add("d{N,omega}=0", bb(mu, bb(n_elem, omega)))
    elif kind == "Complementary":
        pi, omega = args
        require_multivector(pi, 2)
        require_form(omega, 2)
        add("[pi,pi]=0", poisson_square(mu, pi))
        add("{{omega,{pi,mu}},omega}=0", bb(bb(omega, bb(pi, mu)), omega))
    elif kind == "CompatiblePair":
        pi, pi1 = args
        require_multivector(pi, 2)
        require_multivector(pi1, 2)
        add("[pi,pi]=0", poisson_square(mu, pi))
        add("[pi1,pi1]=0", poisson_square(mu, pi1))
        add("[pi,pi1]=0", bb(bb(pi, mu), pi1))
    return rep


# ------------------------------------------------------- composite structures
@dataclass
class TildeResult:
    mu_tilde: GradedElement
    mu1: GradedElement
    mu2: GradedElement
    self_bracket: GradedElement
    derived_table: dict
    formula_table: dict

    @property
    def tables_agree(self) -> bool:
        return all(self.derived_table[k] == self.formula_table[k] for k in self.derived_table)


def tilde_structure(a, pi: GradedElement, omega: GradedElement) -> TildeResult:
    """mu~ = {{pi, mu}, omega} = {{pi, omega}, mu} + {pi, {mu, omega}}.

    Also tabulates its bracket on the frame two ways: as the derived bracket
    {{X, mu~}, Y} and as [X, Y]_N - pi#(i_X i_Y d omega) with N = {pi, omega}.
    """
    require_multivector(pi, 2)
    require_form(omega, 2)
    mu = _mu(a)
    ctx = mu.ctx
    bb = big_bracket
    n_elem = bb(pi, omega)
    mu1 = bb(n_elem, mu)
    d_omega = bb(mu, omega)
    mu2 = bb(pi, d_omega)
    mu_t = bb(bb(pi, mu), omega)
    derived, formula = {}, {}
    for i, j in combinations(range(ctx.r), 2):
        x, y = ctx.theta(i), ctx.theta(j)
        derived[i, j] = bb(bb(x, mu_t), y)
        formula[i, j] = deformed_bracket(mu, n_elem, x, y) - sharp(
            pi, bb(x, bb(y, d_omega))
        )
    return TildeResult(mu_t, mu1, mu2, bb(mu_t, mu_t), derived, formula)


@dataclass
class TwistResult:
    twist: GradedElement
    sigma: GradedElement
    torsion: GradedElement
    residual: GradedElement
    generalized: DoubleEndo
    classification: Classification


def twist_form(a, omega: GradedElement, n_elem: GradedElement) -> TwistResult:
    """lambda = -(omega + 1/4 {N, {N, omega}}) for a Hitchin pair.

    The residual is T_mu N - {sigma, d_mu lambda} with sigma the inverse of omega.
    ``generalized`` is the block endomorphism (N, sigma#; lambda_flat, -N*) of
    A + A*, classified over mu.
    """
    mu = _mu(a)
    rep = check_structure(mu, "HitchinPair", omega=omega, N=n_elem)
    if not rep.verdict:
        bad = [c for c in rep.conditions if not c.holds][0]
        raise SideConditionFails(f"not a Hitchin pair: {bad.name} fails", bad.residual)
    sigma = invert_two_form(omega)
    lam = -(omega + big_bracket(n_elem, big_bracket(n_elem, omega)).scale(QUARTER))
    t = torsion_bigbracket(mu, n_elem)
    blocks = DoubleEndo.from_blocks(mu.ctx, endo_matrix(n_elem), sharp_matrix(sigma), flat_matrix(lam))
    try:
        cls = classify_generalized(mu, blocks)
    except SquareMismatch:
        cls = Classification("none", "other", {})
    return TwistResult(lam, sigma, t, t - big_bracket(sigma, big_bracket(mu, lam)), blocks, cls)


@dataclass
class RecursionReport:
    n: GradedElement
    omega: GradedElement
    torsion: GradedElement
    c_pi: GradedElement
    c_pi1: GradedElement
    eq_c: GradedElement
    eq_c0: GradedElement
    eq_c1: GradedElement
    pi_n_matches: bool

    def to_json(self) -> dict:
        return {
            "N": str(self.n),
            "torsion": str(self.torsion),
            "C(pi,N)": str(self.c_pi),
            "C(pi1,N)": str(self.c_pi1),
            "eq_C": str(self.eq_c),
            "eq_C0": str(self.eq_c0),
            "eq_C1": str(self.eq_c1),
        }


def recursion_operator(a, pi: GradedElement, pi1: GradedElement) -> RecursionReport:
    """N = pi1# o (pi#)^(-1) = {pi1, omega} for a nondegenerate Poisson pi."""
    mu = _mu(a)
    require_multivector(pi, 2)
    require_multivector(pi1, 2)
    omega = invert_bivector(pi)
    for name, p in (("pi", pi), ("pi1", pi1)):
        sq = poisson_square(mu, p)
        if not sq.is_zero():
            raise NotPoisson(f"{name} is not Poisson", sq)
    bb = big_bracket
    n_elem = bb(pi1, omega)
    t = torsion_bigbracket(mu, n_elem)
    c_pi = compatibility_tensor(mu, pi, n_elem)
    c_pi1 = compatibility_tensor(mu, pi1, n_elem) if skew_condition(pi1, n_elem) else None
    pin = pi_n(pi, n_elem)
    eq_c = bb(bb(mu, pi), n_elem) + bb(bb(mu, n_elem), pi)
    eq_c0 = bb(bb(n_elem, mu), omega)
    eq_c1 = bb(bb(mu, pin), n_elem) + bb(bb(mu, n_elem), pin)
    return RecursionReport(n_elem, omega, t, c_pi, c_pi1 if c_pi1 is not None else bb(pi1, n_elem), eq_c, eq_c0, eq_c1, pin == pi1)


def modular_cocycle(a, n_elem: GradedElement) -> GradedElement:
    """d_mu(Tr N) for a Nijenhuis N."""
    mu = _mu(a)
    require_endo(n_elem)
    t = torsion_bigbracket(mu, n_elem)
    if not t.is_zero():
        raise TorsionNonzero("the modular cocycle needs a Nijenhuis tensor", t)
    return big_bracket(mu, mu.ctx.scalar(endo_trace(n_elem)))


# ---------------------------------------------------- identity residuals
def residual_koszul_square(a, pi: GradedElement, omega: GradedElement) -> GradedElement:
    """1/2[omega,omega]_pi + d_N omega + 1/2 d_mu(omega_N), N = {pi, omega}.

    omega_N here is the 2-form with flat map omega_flat o N, i.e. 1/2{N, omega}.
    """
    mu = _mu(a)
    bb = big_bracket
    n_elem = bb(pi, omega)
    ww = bb(bb(omega, bb(pi, mu)), omega)
    d_n = bb(bb(n_elem, mu), omega)
    return ww.scale(HALF) + d_n + bb(mu, omega_n(omega, n_elem)).scale(HALF)


def residual_koszul_square_contracted(a, pi: GradedElement, omega: GradedElement) -> GradedElement:
    """1/2[omega,omega]_pi + d_N omega + 1/2 d_mu(i_N omega), with i_N = {N, .}."""
    mu = _mu(a)
    bb = big_bracket
    n_elem = bb(pi, omega)
    ww = bb(bb(omega, bb(pi, mu)), omega)
    d_n = bb(bb(n_elem, mu), omega)
    return ww.scale(HALF) + d_n + bb(mu, bb(n_elem, omega)).scale(HALF)


def residual_poisson_square_contracted(a, pi: GradedElement, omega: GradedElement, sign: int = 1) -> GradedElement:
    """{[pi,pi]_mu, omega} - {{pi, d omega}, pi} - sign * C_mu(pi, N), N = {pi, omega}."""
    mu = _mu(a)
    bb = big_bracket
    n_elem = bb(pi, omega)
    c = bb(pi, bb(n_elem, mu)) + bb(n_elem, bb(pi, mu))
    return bb(poisson_square(mu, pi), omega) - bb(bb(pi, bb(mu, omega)), pi) - c.scale(sign)


def residual_poisson_square_twice_contracted(a, pi: GradedElement, omega: GradedElement, sign: int = 1) -> GradedElement:
    """{{[pi,pi],omega},omega} - {{{pi,d omega},pi},omega} - sign * (-{{pi,N},d omega} + 2{pi,d_N omega} + 4T).

    It vanishes identically for sign = -1.
    """
    mu = _mu(a)
    bb = big_bracket
    n_elem = bb(pi, omega)
    d_omega = bb(mu, omega)
    d_n = bb(bb(n_elem, mu), omega)
    t = torsion_bigbracket(mu, n_elem)
    rest = -bb(bb(pi, n_elem), d_omega) + bb(pi, d_n).scale(2) + t.scale(4)
    rhs = bb(bb(bb(pi, d_omega), pi), omega) + rest.scale(sign)
    return bb(bb(poisson_square(mu, pi), omega), omega) - rhs


def residual_compatibility_contracted(a, pi: GradedElement, omega: GradedElement) -> GradedElement:
    """{C_mu(pi,N), omega} - ({{N,pi},d omega} + 2{pi,d_N omega} + 4T)."""
    mu = _mu(a)
    bb = big_bracket
    n_elem = bb(pi, omega)
    c = bb(pi, bb(n_elem, mu)) + bb(n_elem, bb(pi, mu))
    d_n = bb(bb(n_elem, mu), omega)
    t = torsion_bigbracket(mu, n_elem)
    return bb(c, omega) - (bb(bb(n_elem, pi), bb(mu, omega)) + bb(pi, d_n).scale(2) + t.scale(4))


def residual_square_of_bracket_endo(sigma: GradedElement, tau: GradedElement) -> GradedElement:
    """N^2 + 1/2{{N, sigma}, tau} for N = {sigma, tau}."""
    n_elem = big_bracket(sigma, tau)
    return compose(n_elem, n_elem) + big_bracket(big_bracket(n_elem, sigma), tau).scale(HALF)


def residual_contracted_three_form(pi: GradedElement, psi: GradedElement, x: GradedElement, y: GradedElement) -> GradedElement:
    """{{X, {psi, pi}}, Y} - pi#(i_X i_Y psi)."""
    bb = big_bracket
    return bb(bb(x, bb(psi, pi)), y) - sharp(pi, bb(x, bb(y, psi)))
