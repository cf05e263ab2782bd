"""The sl(2) action of a symplectic pair and the Lepage decomposition.

For a nondegenerate 2-form omega with inverse pi the operators

    raise:  u -> {omega, u}      lower:  u -> {u, pi}      weight: u -> (q - p) u

satisfy [weight, raise] = 2 raise, [weight, lower] = -2 lower and
[raise, lower] = weight.  Every bihomogeneous u splits uniquely as a sum of
raised primitives (elements killed by the lowering operator).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import ContextMismatch, SingularWeight
from .graded import GradedContext, GradedElement, big_bracket
from .scalar import ScalarExpr
from .tensors import invert_two_form, require_form


@dataclass(frozen=True)
class Sl2Frame:
    omega: GradedElement
    pi: GradedElement

    @classmethod
    def from_form(cls, omega: GradedElement) -> "Sl2Frame":
        require_form(omega, 2)
        return cls(omega, invert_two_form(omega))

    @classmethod
    def canonical(cls, n: int) -> "Sl2Frame":
        """Omega = sum dq_i ^ dp_i on T*R^n."""
        from .monge_ampere import canonical_symplectic

        ctx = GradedContext.cotangent(n)
        return cls.from_form(canonical_symplectic(ctx))

    @property
    def ctx(self) -> GradedContext:
        return self.omega.ctx

    def raise_(self, u: GradedElement) -> GradedElement:
        return big_bracket(self.omega, u)

    def lower(self, u: GradedElement) -> GradedElement:
        return big_bracket(u, self.pi)

    def weight_op(self, u: GradedElement) -> GradedElement:
        """Bracket with {pi, omega} = Id, which scales each bidegree by q - p."""
        return big_bracket(big_bracket(self.pi, self.omega), u)


def weight_of(u: GradedElement) -> int:
    """q - p for a bihomogeneous element."""
    return u.weight()


def is_primitive(frame: Sl2Frame, u: GradedElement) -> bool:
    return frame.lower(u).is_zero()


def _raise_times(frame: Sl2Frame, u: GradedElement, k: int) -> GradedElement:
    for _ in range(k):
        u = frame.raise_(u)
    return u


def lowering_factor(w: int, k: int) -> int:
    """c with lower^k raise^k u = c u for a primitive u of weight w."""
    c = 1
    for j in range(1, k + 1):
        c *= -j * (w + j - 1)
    return c


def lepage_decompose(frame: Sl2Frame, u: GradedElement) -> list:
    """Primitive u_k with u = sum_k raise^k(u_k); u_k has bidegree (p + k, q - k)."""
    if u.ctx != frame.ctx:
        raise ContextMismatch("element and frame live in different contexts")
    if u.is_zero():
        return [u]
    p, q = u.bidegree()
    w = q - p
    parts: dict = {}
    rest = u
    while not rest.is_zero():
        chain = [rest]
        while True:
            nxt = frame.lower(chain[-1])
            if nxt.is_zero():
                break
            chain.append(nxt)
        k = len(chain) - 1
        c = lowering_factor(w - 2 * k, k)
        if c == 0:
            raise SingularWeight(f"weight {w - 2 * k} makes the {k}-th lowering factor vanish")
        uk = chain[k].scale(ScalarExpr.const(Fraction(1, c)))
        parts[k] = parts[k] + uk if k in parts else uk
        rest = rest - _raise_times(frame, uk, k)
    top = max(parts)
    return [parts.get(k, frame.ctx.zero()) for k in range(top + 1)]


def lepage_recompose(frame: Sl2Frame, parts: list) -> GradedElement:
    out = frame.ctx.zero()
    for k, uk in enumerate(parts):
        out = out + _raise_times(frame, uk, k)
    return out
