"""Lie (bi)algebroid structures as elements S with {S, S} = 0.

A structure has components of shifted bidegree (2,-1), (0,1), (1,0), (-1,2).
The (0,1) part mu is the Lie algebroid structure; from it

    [X, Y]_mu = {{X, mu}, Y}       (Schouten bracket of multivectors)
    rho(X) f  = {{X, mu}, f}       (anchor)
    d_mu      = {mu, .}            (differential on forms)
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

from .errors import NotAStructure, WrongBidegree
from .graded import GradedContext, GradedElement, big_bracket
from .scalar import ZERO, ScalarExpr
from .tensors import (
    apply_endo,
    compose,
    endo_matrix,
    require_endo,
    require_form,
    require_multivector,
    section_coeffs,
    vector_coeffs,
    vector_from,
)

COMPONENT_NAMES = {(2, -1): "phi", (0, 1): "mu", (1, 0): "gamma", (-1, 2): "psi"}


@dataclass(frozen=True)
class AlgebroidStructure:
    """A validated structure element together with its certificate {S,S}."""

    ctx: GradedContext
    element: GradedElement
    kind: str = "lie"
    residual: GradedElement | None = field(default=None, compare=False, repr=False)

    @property
    def mu(self) -> GradedElement:
        return self.component("mu")

    @property
    def gamma(self) -> GradedElement:
        return self.component("gamma")

    def component(self, name: str) -> GradedElement:
        for deg, label in COMPONENT_NAMES.items():
            if label == name:
                return self.element.component(deg)
        raise KeyError(name)

    def components(self) -> dict:
        return {COMPONENT_NAMES[d]: e for d, e in self.element.components().items()}


def validate_structure(s: GradedElement, kind: str | None = None) -> AlgebroidStructure:
    """Certify {S,S} = 0; raise NotAStructure carrying the residual otherwise."""
    for deg in s.bidegrees():
        if deg not in COMPONENT_NAMES:
            raise WrongBidegree(f"structure component of bidegree {deg} is not allowed")
    residual = big_bracket(s, s)
    if not residual.is_zero():
        raise NotAStructure(f"{{S,S}} = {residual} is not zero", residual)
    if kind is None:
        present = {COMPONENT_NAMES[d] for d in s.bidegrees()}
        if present <= {"mu"}:
            kind = "lie"
        elif present <= {"mu", "gamma"}:
            kind = "bialgebroid"
        elif "phi" not in present:
            kind = "quasi-lie-bialgebroid"
        else:
            kind = "proto-bialgebroid"
    return AlgebroidStructure(s.ctx, s, kind, residual)


# ------------------------------------------------------------ named structures
def standard_mu(ctx: GradedContext) -> GradedElement:
    """p_i xi^i: the tangent algebroid, whose differential is de Rham's."""
    if not ctx.tangent:
        raise ValueError("the standard structure needs a tangent context")
    out = ctx.zero()
    for i in range(ctx.n):
        out = out + ctx.p(i) * ctx.xi(i)
    return out


def structure_constants_mu(ctx: GradedContext, brackets: dict) -> GradedElement:
    """Constant-coefficient structure with zero anchor from [e_a, e_b] = sum c_k e_k.

    ``brackets`` maps (a, b) with a < b to a dict {k: c}.
    """
    out = ctx.zero()
    for (a, b), rhs in brackets.items():
        for k, c in rhs.items():
            out = out + ctx.monomial(ScalarExpr.const(-c), (ctx.r + a, ctx.r + b, k))
    return out


def so3_mu(ctx: GradedContext) -> GradedElement:
    if ctx.r != 3:
        raise ValueError("so(3) needs rank 3")
    return structure_constants_mu(ctx, {(0, 1): {2: 1}, (1, 2): {0: 1}, (0, 2): {1: -1}})


def heisenberg_mu(ctx: GradedContext) -> GradedElement:
    if ctx.r != 3:
        raise ValueError("the Heisenberg algebra needs rank 3")
    return structure_constants_mu(ctx, {(0, 1): {2: 1}})


def standard_structure(ctx: GradedContext) -> AlgebroidStructure:
    return validate_structure(standard_mu(ctx), "lie")


# ------------------------------------------------------------ derived brackets
def mu_of(a) -> GradedElement:
    """The (0,1) component of a structure, or the element itself."""
    return a.mu if isinstance(a, AlgebroidStructure) else a


def schouten_bracket(a: AlgebroidStructure, x: GradedElement, y: GradedElement) -> GradedElement:
    require_multivector(x)
    require_multivector(y)
    return big_bracket(big_bracket(x, mu_of(a)), y)


def anchor_apply(a: AlgebroidStructure, x: GradedElement, f) -> GradedElement:
    if not isinstance(f, GradedElement):
        f = x.ctx.scalar(f)
    return big_bracket(big_bracket(x, mu_of(a)), f)


def differential_apply(a: AlgebroidStructure, alpha: GradedElement) -> GradedElement:
    require_form(alpha)
    return big_bracket(mu_of(a), alpha)


def differential(mu: GradedElement, alpha: GradedElement) -> GradedElement:
    return big_bracket(mu, alpha)


def deform(a: AlgebroidStructure | GradedElement, n_elem: GradedElement) -> GradedElement:
    """mu_N = {N, mu}; its derived bracket is the deformed bracket of N."""
    mu = mu_of(a)
    require_endo(n_elem)
    return big_bracket(n_elem, mu)


def deformed_bracket(a: AlgebroidStructure, n_elem: GradedElement, x: GradedElement, y: GradedElement) -> GradedElement:
    """[NX, Y] + [X, NY] - N[X, Y] for vector fields."""
    br = lambda u, v: schouten_bracket(a, u, v)
    nx, ny = apply_endo(n_elem, x), apply_endo(n_elem, y)
    return br(nx, y) + br(x, ny) - apply_endo(n_elem, br(x, y))


def torsion_bigbracket(mu: GradedElement, n_elem: GradedElement) -> GradedElement:
    """1/2({N,{N,mu}} - {N^2, mu})."""
    n2 = compose(n_elem, n_elem)
    return (big_bracket(n_elem, big_bracket(n_elem, mu)) - big_bracket(n2, mu)).scale(ScalarExpr.const(1) / 2)


def evaluate_on_frame(t: GradedElement) -> dict:
    """Vector-valued 2-form as the table {(a, b): {{theta_a, T}, theta_b}} for a < b."""
    ctx = t.ctx
    return {(a, b): big_bracket(big_bracket(ctx.theta(a), t), ctx.theta(b)) for a, b in combinations(range(ctx.r), 2)}


class _Frame:
    """Structure functions and anchor of mu on the frame theta_a.

    These are read off once with constant-coefficient brackets; everything
    involving function coefficients then goes through the Leibniz rule.
    """

    def __init__(self, mu: GradedElement):
        ctx = mu.ctx
        self.ctx = ctx
        r = ctx.r
        self.c = {}
        for a in range(r):
            for b in range(r):
                self.c[a, b] = vector_coeffs(big_bracket(big_bracket(ctx.theta(a), mu), ctx.theta(b)))
        self.rho = {}
        for a in range(r):
            self.rho[a] = [
                big_bracket(big_bracket(ctx.theta(a), mu), ctx.x(i)).as_scalar() for i in range(ctx.n)
            ]

    def derivation(self, x: list, f: ScalarExpr) -> ScalarExpr:
        """rho(X) f for X = sum x^a theta_a."""
        out = ZERO
        for a, xa in enumerate(x):
            if xa.is_zero():
                continue
            for i, ra in enumerate(self.rho[a]):
                if not ra.is_zero():
                    df = f.diff(self.ctx.base[i])
                    if not df.is_zero():
                        out = out + xa * ra * df
        return out

    def bracket(self, x: list, y: list) -> list:
        """[X, Y] = x^a y^b [e_a, e_b] + rho(X)(y^c) e_c - rho(Y)(x^c) e_c."""
        r = self.ctx.r
        out = [ZERO] * r
        for a in range(r):
            if x[a].is_zero():
                continue
            for b in range(r):
                if y[b].is_zero():
                    continue
                coef = x[a] * y[b]
                for k, ck in enumerate(self.c[a, b]):
                    if not ck.is_zero():
                        out[k] = out[k] + coef * ck
        for k in range(r):
            out[k] = out[k] + self.derivation(x, y[k]) - self.derivation(y, x[k])
        return out


def _mat_apply(m: list, v: list) -> list:
    return [sum((m[i][j] * v[j] for j in range(len(v)) if not v[j].is_zero()), ZERO) for i in range(len(m))]


def torsion_direct(mu: GradedElement, n_elem: GradedElement) -> dict:
    """[NX,NY] - N([NX,Y] + [X,NY]) + N^2[X,Y] on the coordinate frame, as a table."""
    ctx = mu.ctx
    frame = _Frame(mu)
    m = endo_matrix(n_elem)
    r = ctx.r
    basis = [[ScalarExpr.const(1) if i == a else ZERO for i in range(r)] for a in range(r)]
    out = {}
    for a, b in combinations(range(r), 2):
        x, y = basis[a], basis[b]
        nx, ny = _mat_apply(m, x), _mat_apply(m, y)
        t1 = frame.bracket(nx, ny)
        t2 = _mat_apply(m, [u + v for u, v in zip(frame.bracket(nx, y), frame.bracket(x, ny))])
        t3 = _mat_apply(m, _mat_apply(m, frame.bracket(x, y)))
        out[a, b] = vector_from(ctx, [p - q + s for p, q, s in zip(t1, t2, t3)])
    return out


def nijenhuis_torsion(a: AlgebroidStructure | GradedElement, n_elem: GradedElement, method: str = "bigbracket"):
    """Torsion of N; an element for 'bigbracket', a frame table for 'direct'."""
    mu = mu_of(a)
    require_endo(n_elem)
    if method == "bigbracket":
        return torsion_bigbracket(mu, n_elem)
    if method == "direct":
        return torsion_direct(mu, n_elem)
    raise ValueError(f"unknown torsion method {method!r}")


def torsion_squares_identity(a: AlgebroidStructure | GradedElement, n_elem: GradedElement) -> GradedElement:
    """{mu_N, mu_N} + 2{mu, T}: vanishes for every N when {mu, mu} = 0."""
    mu = mu_of(a)
    mu_n = deform(mu, n_elem)
    t = torsion_bigbracket(mu, n_elem)
    return big_bracket(mu_n, mu_n) + big_bracket(mu, t).scale(2)


def torsion_squares_identity_as_printed(a: AlgebroidStructure | GradedElement, n_elem: GradedElement) -> GradedElement:
    """1/2{mu_N, mu_N} - {mu, T}, the sign as the identity is usually quoted."""
    mu = mu_of(a)
    mu_n = deform(mu, n_elem)
    t = torsion_bigbracket(mu, n_elem)
    return big_bracket(mu_n, mu_n).scale(ScalarExpr.const(1) / 2) - big_bracket(mu, t)


# ----------------------------------------------------------------- Dorfman
def dorfman_bracket(a: AlgebroidStructure, u: GradedElement, v: GradedElement, background: GradedElement | None = None) -> GradedElement:
    """{{u, mu + gamma (+ H)}, v} on sections of A + A*.

    With a closed 3-form H the H-term is {{X, H}, Y} = i_Y i_X H.
    """
    section_coeffs(u)
    section_coeffs(v)
    s = a.mu + a.gamma
    if background is not None:
        require_form(background, 3)
        s = s + background
    return big_bracket(big_bracket(u, s), v)


def gauge_transform(b: GradedElement, u: GradedElement) -> GradedElement:
    """X + alpha  ->  X + alpha + i_X B."""
    require_form(b, 2)
    section_coeffs(u)
    return u + big_bracket(u, b)
