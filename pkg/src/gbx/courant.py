"""Endomorphisms of the double A + A* and generalized structures.

A skew endomorphism of the double is a quadratic element E acting on sections
by u -> {u, E}.  In the frame (theta_1..theta_r, xi^1..xi^r) its matrix has
blocks

    [ N        sigma# ]
    [ lambda   -N*    ]

with N : A -> A, sigma# : A* -> A and lambda : A -> A*.  With S a structure
element the Dorfman bracket is [u, v]_S = {{u, S}, v}.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

from .errors import NotOrthogonal, SquareMismatch
from .graded import GradedContext, GradedElement, big_bracket
from .scalar import ONE, ZERO, ScalarExpr
from .tensors import (
    bivector_from_sharp,
    endo_from_matrix,
    mat_eq,
    mat_mul,
    mat_scale,
    section_coeffs,
    section_from,
    transpose,
    two_form_from_flat,
    identity,
)

HALF = ScalarExpr.const(Fraction(1, 2))


@dataclass
class DoubleEndo:
    """Endomorphism of A + A*; ``element`` is None when it is not skew."""

    ctx: GradedContext
    matrix: list
    element: GradedElement | None = None

    @classmethod
    def from_element(cls, e: GradedElement) -> "DoubleEndo":
        ctx = e.ctx
        cols = []
        for g in range(2 * ctx.r):
            img = big_bracket(ctx.monomial(ONE, (g,)), e)
            cols.append(section_coeffs(img))
        return cls(ctx, transpose(cols), e)

    @classmethod
    def from_blocks(cls, ctx: GradedContext, n: list, sigma: list, lam: list, lower_right: list | None = None) -> "DoubleEndo":
        """Build from block maps; raises NotOrthogonal if they are not skew."""
        r = ctx.r
        lr = lower_right if lower_right is not None else [[-x for x in row] for row in transpose(n)]
        full = [list(n[i]) + list(sigma[i]) for i in range(r)] + [list(lam[i]) + list(lr[i]) for i in range(r)]
        e = endo_from_matrix(ctx, n) + bivector_from_sharp(ctx, sigma) + two_form_from_flat(ctx, [[-x for x in row] for row in lam])
        candidate = cls.from_element(e)
        if not mat_eq(candidate.matrix, full):
            raise NotOrthogonal("the block matrix is not skew for the pairing of A + A*")
        return candidate

    @classmethod
    def from_matrix(cls, ctx: GradedContext, m: list) -> "DoubleEndo":
        """Any endomorphism; keeps the element when the matrix happens to be skew."""
        r = ctx.r
        blocks = [[row[:r] for row in m[:r]], [row[r:] for row in m[:r]], [row[:r] for row in m[r:]], [row[r:] for row in m[r:]]]
        try:
            return cls.from_blocks(ctx, blocks[0], blocks[1], blocks[2], blocks[3])
        except NotOrthogonal:
            return cls(ctx, [list(row) for row in m], None)

    @classmethod
    def identity(cls, ctx: GradedContext) -> "DoubleEndo":
        return cls(ctx, identity(2 * ctx.r), None)

    @property
    def is_orthogonal(self) -> bool:
        return self.element is not None

    def apply(self, u: GradedElement) -> GradedElement:
        c = section_coeffs(u)
        out = []
        for row in self.matrix:
            s = ZERO
            for x, y in zip(row, c):
                if not x.is_zero() and not y.is_zero():
                    s = s + x * y
            out.append(s)
        return section_from(self.ctx, out)

    def square(self) -> list:
        return mat_mul(self.matrix, self.matrix)

    def square_scalar(self) -> ScalarExpr | None:
        """c when the square is c times the identity, else None."""
        sq = self.square()
        c = sq[0][0]
        if mat_eq(sq, mat_scale(identity(len(sq)), c)):
            return c
        return None

    def blocks(self) -> dict:
        r = self.ctx.r
        m = self.matrix
        return {
            "N": [row[:r] for row in m[:r]],
            "sigma": [row[r:] for row in m[:r]],
            "lambda": [row[:r] for row in m[r:]],
            "-N*": [row[r:] for row in m[r:]],
        }


def dorfman(s: GradedElement, u: GradedElement, v: GradedElement) -> GradedElement:
    return big_bracket(big_bracket(u, s), v)


def frame(ctx: GradedContext) -> list:
    return [ctx.monomial(ONE, (g,)) for g in range(2 * ctx.r)]


def courant_torsion_direct(s: GradedElement, endo: DoubleEndo, skew: bool = False) -> dict:
    """[Nu,Nv] - N([Nu,v] + [u,Nv]) + N^2[u,v] on pairs of frame sections.

    With ``skew`` the Courant (skew-symmetrised) bracket replaces Dorfman's.
    """
    if skew:
        br = lambda u, v: (dorfman(s, u, v) - dorfman(s, v, u)).scale(HALF)
    else:
        br = lambda u, v: dorfman(s, u, v)
    f = frame(s.ctx)
    app = endo.apply
    out = {}
    for i, j in combinations(range(len(f)), 2):
        u, v = f[i], f[j]
        nu, nv = app(u), app(v)
        out[i, j] = br(nu, nv) - app(br(nu, v) + br(u, nv)) + app(app(br(u, v)))
    return out


def courant_torsion_bigbracket(s: GradedElement, endo: DoubleEndo) -> GradedElement:
    """1/2({N,{N,S}} - c S) for a skew N with N^2 = c Id, c constant."""
    if endo.element is None:
        raise NotOrthogonal("the big-bracket torsion needs a skew endomorphism")
    c = endo.square_scalar()
    if c is None or not c.is_constant():
        raise SquareMismatch("the big-bracket torsion needs N^2 to be a constant multiple of Id")
    e = endo.element
    return (big_bracket(e, big_bracket(e, s)) - s.scale(c)).scale(HALF)


def courant_torsion(s: GradedElement, endo: DoubleEndo, method: str = "bigbracket"):
    if method == "bigbracket":
        return courant_torsion_bigbracket(s, endo)
    if method == "direct":
        return courant_torsion_direct(s, endo)
    if method == "direct-skew":
        return courant_torsion_direct(s, endo, skew=True)
    raise ValueError(f"unknown torsion method {method!r}")


def evaluate_on_double_frame(t: GradedElement) -> dict:
    f = frame(t.ctx)
    return {(i, j): big_bracket(big_bracket(f[i], t), f[j]) for i, j in combinations(range(len(f)), 2)}


@dataclass
class Classification:
    kind: str
    square: str
    residuals: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"kind": self.kind, "square": self.square, "residuals": {k: str(v) for k, v in sorted(self.residuals.items())}}


def classify_generalized(s: GradedElement, endo: DoubleEndo | GradedElement) -> Classification:
    """Compare {{N, S}, N} with S (complex), -S (product) and 0 (subtangent)."""
    if isinstance(endo, GradedElement):
        endo = DoubleEndo.from_element(endo)
    if endo.element is None:
        raise NotOrthogonal("a generalized structure must be skew")
    c = endo.square_scalar()
    if c is None or not c.is_constant() or c.constant_value() not in (-1, 0, 1):
        raise SquareMismatch("N^2 is not -Id, Id or 0")
    square = {-1: "-Id", 0: "0", 1: "Id"}[int(c.constant_value())]
    e = endo.element
    nsn = big_bracket(big_bracket(e, s), e)
    residuals = {"complex": nsn - s, "product": nsn + s, "subtangent": nsn}
    target = {"-Id": "complex", "Id": "product", "0": "subtangent"}[square]
    kind = target if residuals[target].is_zero() else "none"
    return Classification(kind, square, residuals)


@dataclass
class CourantDeformation:
    deformed: GradedElement
    self_bracket: GradedElement
    residual: GradedElement


def deform_courant(s: GradedElement, endo: DoubleEndo | GradedElement) -> CourantDeformation:
    """S_N = {N, S}; residual 1/2{S_N, S_N} + 1/2{S, {N, {N, S}}} vanishes when {S,S} = 0."""
    e = endo.element if isinstance(endo, DoubleEndo) else endo
    if e is None:
        raise NotOrthogonal("deformation needs a skew endomorphism")
    sn = big_bracket(e, s)
    sb = big_bracket(sn, sn)
    residual = (sb + big_bracket(s, big_bracket(e, sn))).scale(HALF)
    return CourantDeformation(sn, sb, residual)
