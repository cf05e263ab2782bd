"""The single pretty-printer used by the CLI, the JSON reports and ``str()``.

Its output is valid DSL input, so parse(print(u)) == u.
"""

from __future__ import annotations

from fractions import Fraction

from .scalar import ScalarExpr, _fmt_number


def _format_factor(ctx, pe, word) -> str:
    parts = []
    for i, e in enumerate(pe):
        if e == 1:
            parts.append(ctx.momenta[i])
        elif e:
            parts.append(f"{ctx.momenta[i]}^{e}")
    if word:
        parts.append("^".join(ctx.generator_name(g) for g in word))
    return "*".join(parts)


def format_element(u) -> str:
    if u.is_zero():
        return "0"
    pieces = []
    for (pe, word), c in u.sorted_terms():
        factor = _format_factor(u.ctx, pe, word)
        neg, coeff = _split_sign(c)
        if factor:
            if coeff == "1":
                body = factor
            else:
                body = f"{coeff}*{factor}"
        else:
            body = coeff
        if not pieces:
            pieces.append(("-" if neg else "") + body)
        else:
            pieces.append((" - " if neg else " + ") + body)
    return "".join(pieces)


def _split_sign(c: ScalarExpr):
    """(negative?, text) with the text parenthesised unless it is one monomial."""
    single = c.single_term()
    if single is not None:
        coeff, _ = single
        neg = coeff < 0
        text = str(-c if neg else c)
        return neg, text
    return False, f"({c})"


def format_scalar(c: ScalarExpr) -> str:
    return str(c)


def format_number(q) -> str:
    return _fmt_number(Fraction(q))


def format_matrix(rows) -> list:
    return [[str(x) for x in row] for row in rows]
