"""sympy as an independent oracle for scalar values; used by tests only."""

import sympy

from gbx.scalar import ScalarExpr


def to_sympy(expr: ScalarExpr):
    return sympy.sympify(str(expr).replace("^", "**"), rational=True)


def same(expr: ScalarExpr, sym) -> bool:
    return sympy.simplify(to_sympy(expr) - sym) == 0


def symbols(*names):
    return sympy.symbols(" ".join(names))
