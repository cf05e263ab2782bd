"""Tensors as graded elements, and the exact linear algebra behind them.

Matrices are lists of rows of :class:`ScalarExpr`.  Every conversion between an
element and a matrix is defined through the bracket itself:

* endomorphism N:   N(X) = {X, N},       N = N^a_b xi^b theta_a
* bivector pi:      pi#(alpha) = {alpha, pi}
* 2-form omega:     omega_flat(X) = {omega, X} = -i_X omega
* contraction:      i_X alpha = {X, alpha}
"""

from __future__ import annotations

from fractions import Fraction
from itertools import combinations

from .errors import Degenerate, NotAForm, NotAMultivector, NotAnEndomorphism, NotASection
from .graded import GradedContext, GradedElement, big_bracket, identity_endo
from .scalar import ONE, ZERO, ScalarExpr, as_scalar

HALF = ScalarExpr.const(Fraction(1, 2))

Matrix = list


# ------------------------------------------------------------------ matrices
def identity(n: int) -> Matrix:
    return [[ONE if i == j else ZERO for j in range(n)] for i in range(n)]


def zeros(n: int, m: int | None = None) -> Matrix:
    return [[ZERO] * (n if m is None else m) for _ in range(n)]


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    n, k, m = len(a), len(b), len(b[0]) if b else 0
    out = []
    for i in range(n):
        row = []
        for j in range(m):
            s = ZERO
            for t in range(k):
                x, y = a[i][t], b[t][j]
                if not x.is_zero() and not y.is_zero():
                    s = s + x * y
            row.append(s)
        out.append(row)
    return out


def mat_add(a: Matrix, b: Matrix, sign: int = 1) -> Matrix:
    return [[x + y if sign == 1 else x - y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mat_scale(a: Matrix, s) -> Matrix:
    s = as_scalar(s)
    return [[x * s for x in row] for row in a]


def transpose(a: Matrix) -> Matrix:
    return [list(col) for col in zip(*a)]


def mat_eq(a: Matrix, b: Matrix) -> bool:
    return all(x == y for ra, rb in zip(a, b) for x, y in zip(ra, rb))


def is_zero_matrix(a: Matrix) -> bool:
    return all(x.is_zero() for row in a for x in row)


def trace(a: Matrix) -> ScalarExpr:
    s = ZERO
    for i in range(len(a)):
        s = s + a[i][i]
    return s


def determinant(a: Matrix) -> ScalarExpr:
    m = [list(row) for row in a]
    n = len(m)
    det = ONE
    for col in range(n):
        piv = next((r for r in range(col, n) if not m[r][col].is_zero()), None)
        if piv is None:
            return ZERO
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            det = -det
        p = m[col][col]
        det = det * p
        inv = p.inverse()
        for r in range(col + 1, n):
            if m[r][col].is_zero():
                continue
            f = m[r][col] * inv
            m[r] = [x - f * y for x, y in zip(m[r], m[col])]
    return det


def inverse(a: Matrix) -> Matrix:
    n = len(a)
    m = [list(row) + [ONE if i == j else ZERO for j in range(n)] for i, row in enumerate(a)]
    for col in range(n):
        piv = next((r for r in range(col, n) if not m[r][col].is_zero()), None)
        if piv is None:
            raise Degenerate("matrix is singular")
        m[col], m[piv] = m[piv], m[col]
        inv = m[col][col].inverse()
        m[col] = [x * inv for x in m[col]]
        for r in range(n):
            if r != col and not m[r][col].is_zero():
                f = m[r][col]
                m[r] = [x - f * y for x, y in zip(m[r], m[col])]
    return [row[n:] for row in m]


def eval_matrix(a: Matrix, point) -> list:
    return [[x.eval(point) for x in row] for row in a]


def charpoly(a: list) -> list:
    """Coefficients c_0..c_n (leading first) of det(tI - A) for a rational matrix."""
    n = len(a)
    a = [[Fraction(x) for x in row] for row in a]
    coeffs = [Fraction(1)]
    m = [[Fraction(0)] * n for _ in range(n)]
    for k in range(1, n + 1):
        # M_k = A M_{k-1} + c_{k-1} I ; c_k = -tr(A M_k)/k
        prev = m
        m = [[sum(a[i][t] * prev[t][j] for t in range(n)) + (coeffs[-1] if i == j else 0) for j in range(n)] for i in range(n)]
        am = [[sum(a[i][t] * m[t][j] for t in range(n)) for j in range(n)] for i in range(n)]
        coeffs.append(-sum(am[i][i] for i in range(n)) / k)
    return coeffs


def signature(sym: list) -> tuple:
    """(positive, negative, zero) eigenvalue counts of a rational symmetric matrix.

    The characteristic polynomial of a symmetric matrix has only real roots, so
    Descartes' rule of signs counts them exactly.
    """
    c = charpoly(sym)
    n = len(sym)
    zero = 0
    while zero < n and c[n - zero] == 0:
        zero += 1
    trimmed = c[: n + 1 - zero]

    def changes(seq):
        s = [x for x in seq if x != 0]
        return sum(1 for x, y in zip(s, s[1:]) if (x > 0) != (y > 0))

    pos = changes(trimmed)
    deg = len(trimmed) - 1
    neg = changes([x * (-1) ** (deg - i) for i, x in enumerate(trimmed)])
    return pos, neg, zero


# ----------------------------------------------------------- shape checks
def _words_only(u: GradedElement, ok) -> bool:
    return all(not any(pe) and ok(w) for pe, w in u.terms)


def is_multivector(u: GradedElement, k: int | None = None) -> bool:
    r = u.ctx.r
    return _words_only(u, lambda w: all(g < r for g in w) and (k is None or len(w) == k))


def is_form(u: GradedElement, k: int | None = None) -> bool:
    r = u.ctx.r
    return _words_only(u, lambda w: all(g >= r for g in w) and (k is None or len(w) == k))


def is_endomorphism(u: GradedElement) -> bool:
    r = u.ctx.r
    return _words_only(u, lambda w: len(w) == 2 and w[0] < r <= w[1])


def is_section(u: GradedElement) -> bool:
    """Element of A + A*: linear in the odd generators, no momenta."""
    return _words_only(u, lambda w: len(w) == 1)


def require_multivector(u: GradedElement, k: int | None = None) -> None:
    if not is_multivector(u, k):
        raise NotAMultivector(f"expected a {k or ''}-vector, got {u}")


def require_form(u: GradedElement, k: int | None = None) -> None:
    if not is_form(u, k):
        raise NotAForm(f"expected a {k or ''}-form, got {u}")


def require_endo(u: GradedElement) -> None:
    if not is_endomorphism(u):
        raise NotAnEndomorphism(f"expected a (1,1)-tensor, got {u}")


def require_section(u: GradedElement) -> None:
    if not is_section(u):
        raise NotASection(f"expected a section of A + A*, got {u}")


# ------------------------------------------------------ element <-> matrix
def vector_coeffs(u: GradedElement) -> list:
    if not u.is_zero():
        require_multivector(u, 1)
    return [u.coefficient((a,)) for a in range(u.ctx.r)]


def form_coeffs(u: GradedElement) -> list:
    if not u.is_zero():
        require_form(u, 1)
    r = u.ctx.r
    return [u.coefficient((r + a,)) for a in range(r)]


def vector_from(ctx: GradedContext, coeffs) -> GradedElement:
    out = ctx.zero()
    for a, c in enumerate(coeffs):
        out = out + ctx.theta(a).scale(c)
    return out


def form_from(ctx: GradedContext, coeffs) -> GradedElement:
    out = ctx.zero()
    for a, c in enumerate(coeffs):
        out = out + ctx.xi(a).scale(c)
    return out


def section_coeffs(u: GradedElement) -> list:
    """Coefficients on the frame (theta_1..theta_r, xi^1..xi^r)."""
    if not u.is_zero():
        require_section(u)
    return [u.coefficient((g,)) for g in range(2 * u.ctx.r)]


def section_from(ctx: GradedContext, coeffs) -> GradedElement:
    out = ctx.zero()
    for g, c in enumerate(coeffs):
        out = out + ctx.monomial(c, (g,))
    return out


def endo_matrix(n_elem: GradedElement) -> Matrix:
    """M[a][c] = theta_a-coefficient of N(theta_c) = {theta_c, N}."""
    require_endo(n_elem)
    ctx = n_elem.ctx
    cols = [vector_coeffs(big_bracket(ctx.theta(c), n_elem)) for c in range(ctx.r)]
    return transpose(cols)


def endo_from_matrix(ctx: GradedContext, m: Matrix) -> GradedElement:
    out = ctx.zero()
    for a in range(ctx.r):
        for b in range(ctx.r):
            if not m[a][b].is_zero():
                out = out + ctx.monomial(-m[a][b], (a, ctx.r + b))  # xi^b theta_a = -theta_a xi^b
    return out


def sharp_matrix(pi: GradedElement) -> Matrix:
    """P[b][c] = theta_b-coefficient of pi#(xi^c)."""
    if not pi.is_zero():
        require_multivector(pi, 2)
    ctx = pi.ctx
    cols = [vector_coeffs(big_bracket(ctx.xi(c), pi)) for c in range(ctx.r)]
    return transpose(cols)


def bivector_from_sharp(ctx: GradedContext, p: Matrix) -> GradedElement:
    out = ctx.zero()
    for a, b in combinations(range(ctx.r), 2):
        out = out + ctx.monomial(p[b][a], (a, b))
    return out


def flat_matrix(omega: GradedElement) -> Matrix:
    """W[a][c] = xi^a-coefficient of {omega, theta_c}."""
    if not omega.is_zero():
        require_form(omega, 2)
    ctx = omega.ctx
    cols = [form_coeffs(big_bracket(omega, ctx.theta(c))) for c in range(ctx.r)]
    return transpose(cols)


def two_form_from_flat(ctx: GradedContext, w: Matrix) -> GradedElement:
    out = ctx.zero()
    for a, b in combinations(range(ctx.r), 2):
        out = out + ctx.monomial(w[a][b], (ctx.r + a, ctx.r + b))
    return out


def compose(n1: GradedElement, n2: GradedElement) -> GradedElement:
    """Element of the composite endomorphism n1 o n2."""
    return endo_from_matrix(n1.ctx, mat_mul(endo_matrix(n1), endo_matrix(n2)))


def endo_trace(n_elem: GradedElement) -> ScalarExpr:
    return trace(endo_matrix(n_elem))


def is_nondegenerate_form(omega: GradedElement) -> bool:
    return not determinant(flat_matrix(omega)).is_zero()


def invert_two_form(omega: GradedElement) -> GradedElement:
    """Bivector pi with {pi, omega} = Id."""
    require_form(omega, 2)
    w = flat_matrix(omega)
    try:
        winv = inverse(w)
    except Degenerate:
        raise Degenerate(f"2-form {omega} is degenerate") from None
    # pi# o omega_flat = Id on sections  <=>  P = W^{-1}
    pi = bivector_from_sharp(omega.ctx, winv)
    assert big_bracket(pi, omega) == identity_endo(omega.ctx)
    return pi


def invert_bivector(pi: GradedElement) -> GradedElement:
    """2-form omega with {pi, omega} = Id."""
    require_multivector(pi, 2)
    p = sharp_matrix(pi)
    try:
        pinv = inverse(p)
    except Degenerate:
        raise Degenerate(f"bivector {pi} is degenerate") from None
    omega = two_form_from_flat(pi.ctx, pinv)
    assert big_bracket(pi, omega) == identity_endo(pi.ctx)
    return omega


# ------------------------------------------------------------- operations
def interior(x: GradedElement, alpha: GradedElement) -> GradedElement:
    """i_X alpha."""
    return big_bracket(x, alpha)


def interior_bivector(pi: GradedElement, alpha: GradedElement) -> GradedElement:
    """i_pi alpha = 1/2 pi^{ab} i_a i_b alpha."""
    ctx = pi.ctx
    m = sharp_matrix(pi)
    out = ctx.zero()
    for a in range(ctx.r):
        inner = big_bracket(ctx.theta(a), alpha)
        for b in range(ctx.r):
            if not m[a][b].is_zero():
                out = out + big_bracket(ctx.theta(b), inner).scale(m[a][b])
    return out.scale(HALF)


def sharp(pi: GradedElement, alpha: GradedElement) -> GradedElement:
    return big_bracket(alpha, pi)


def flat(omega: GradedElement, x: GradedElement) -> GradedElement:
    return big_bracket(omega, x)


def apply_endo(n_elem: GradedElement, x: GradedElement) -> GradedElement:
    return big_bracket(x, n_elem)


def apply_dual(n_elem: GradedElement, alpha: GradedElement) -> GradedElement:
    """N*(alpha): the transpose acting on 1-forms."""
    coeffs = form_coeffs(alpha)
    m = endo_matrix(n_elem)
    r = n_elem.ctx.r
    return form_from(n_elem.ctx, [sum((coeffs[a] * m[a][b] for a in range(r)), ZERO) for b in range(r)])


def form_value(omega: GradedElement, x: GradedElement, y: GradedElement) -> ScalarExpr:
    """omega(X, Y) = i_Y i_X omega for a 2-form."""
    return big_bracket(y, big_bracket(x, omega)).as_scalar() if not omega.is_zero() else ZERO
