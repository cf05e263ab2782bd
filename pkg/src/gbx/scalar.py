"""Exact rational-function coefficients over named base coordinates.

A :class:`ScalarExpr` is a quotient of two sparse sums of monomials.  Monomial
exponents are rationals (so ``p1^(-1/2)`` is a single monomial) and the
coefficients are :class:`fractions.Fraction`.  The canonical form moves every
monomial factor of the denominator into the numerator, makes the denominator's
leading coefficient 1 and cancels the polynomial gcd of numerator and
denominator, so a quotient that is a polynomial is stored as one.  Equality is
still decided by cross-multiplication.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import lcm
from typing import Iterable, Mapping, Union

from sympy.polys.domains import QQ
from sympy.polys.rings import ring

from .errors import (
    DivisionByZero,
    NegativeBaseFractionalPower,
    NonRationalValue,
    NotRepresentable,
    PoleAtPoint,
    UnknownCoordinate,
)

Exponent = Union[int, Fraction]
Monomial = tuple  # tuple[tuple[str, Exponent], ...] sorted by name
Poly = dict  # dict[Monomial, Fraction]
Number = Union[int, Fraction]

ONE_MONO: Monomial = ()


def _norm_exp(e) -> Exponent:
    e = Fraction(e)
    return int(e) if e.denominator == 1 else e


@lru_cache(maxsize=1 << 18)
def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    out = []
    i = j = 0
    la, lb = len(a), len(b)
    while i < la and j < lb:
        va, ea = a[i]
        vb, eb = b[j]
        if va == vb:
            e = ea + eb
            if e:
                out.append((va, _norm_exp(e) if isinstance(e, Fraction) else e))
            i += 1
            j += 1
        elif va < vb:
            out.append(a[i])
            i += 1
        else:
            out.append(b[j])
            j += 1
    out.extend(a[i:])
    out.extend(b[j:])
    return tuple(out)


def mono_pow(a: Monomial, k) -> Monomial:
    if k == 0:
        return ONE_MONO
    return tuple((v, _norm_exp(e * k)) for v, e in a)


def mono_inv(a: Monomial) -> Monomial:
    return tuple((v, -e) for v, e in a)


def _min_mono(monos: Iterable[Monomial]) -> Monomial:
    """Per-variable minimum exponent, with absent variables counting as 0."""
    monos = list(monos)
    names = sorted({v for m in monos for v, _ in m})
    out = []
    for v in names:
        lo = min(dict(m).get(v, 0) for m in monos)
        if lo:
            out.append((v, lo))
    return tuple(out)


def _lex_sorted(monos: Iterable[Monomial]) -> list:
    """Monomials in the fixed total order: lex by variable name, high powers first."""
    monos = list(monos)
    names = sorted({v for m in monos for v, _ in m})
    index = {v: i for i, v in enumerate(names)}

    def key(m):
        vec = [0] * len(names)
        for v, e in m:
            vec[index[v]] = e
        return vec

    return sorted(monos, key=key, reverse=True)


def _padd(a: Poly, b: Poly, sign: int = 1) -> Poly:
    out = dict(a)
    for m, c in b.items():
        v = out.get(m, 0) + (c if sign == 1 else -c)
        if v:
            out[m] = v
        else:
            out.pop(m, None)
    return out


def _pmul(a: Poly, b: Poly) -> Poly:
    out: Poly = {}
    for ma, ca in a.items():
        for mb, cb in b.items():
            m = mono_mul(ma, mb)
            v = out.get(m, 0) + ca * cb
            if v:
                out[m] = v
            else:
                out.pop(m, None)
    return out


def _pscale(a: Poly, c, mono: Monomial = ONE_MONO) -> Poly:
    if not c:
        return {}
    if mono:
        return {mono_mul(m, mono): v * c for m, v in a.items()}
    return {m: v * c for m, v in a.items()}


def _pdiff(a: Poly, var: str) -> Poly:
    out: Poly = {}
    for m, c in a.items():
        for k, (v, e) in enumerate(m):
            if v == var:
                e1 = e - 1
                if e1:
                    nm = m[:k] + ((v, _norm_exp(e1) if isinstance(e1, Fraction) else e1),) + m[k + 1:]
                else:
                    nm = m[:k] + m[k + 1:]
                val = out.get(nm, 0) + c * e
                if val:
                    out[nm] = val
                else:
                    out.pop(nm, None)
                break
    return out


@lru_cache(maxsize=None)
def _ring(names: tuple):
    return ring(",".join(names), QQ)[0]


def _cancel(num: Poly, den: Poly) -> tuple:
    """num/den with their gcd removed.

    Fractional exponents are made integral by rescaling each variable, and a
    common monomial shift makes every exponent nonnegative; both maps are
    undone on the way back.
    """
    shift = _min_mono(list(num) + list(den))
    if shift:
        inv = mono_inv(shift)
        num = {mono_mul(m, inv): c for m, c in num.items()}
        den = {mono_mul(m, inv): c for m, c in den.items()}
    names = tuple(sorted({v for p in (num, den) for m in p for v, _ in m}))
    scale = {v: 1 for v in names}
    for p in (num, den):
        for m in p:
            for v, e in m:
                if isinstance(e, Fraction):
                    scale[v] = lcm(scale[v], e.denominator)
    r = _ring(names)

    def to_ring(p: Poly):
        terms = {}
        for m, c in p.items():
            d = dict(m)
            key = tuple(int(d.get(v, 0) * scale[v]) for v in names)
            c = Fraction(c)
            terms[key] = QQ(c.numerator, c.denominator)
        return r.from_dict(terms)

    def from_ring(e) -> Poly:
        out = {}
        for key, c in e.terms():
            mono = tuple((v, _norm_exp(Fraction(k, scale[v]))) for v, k in zip(names, key) if k)
            out[mono] = Fraction(int(c.numerator), int(c.denominator))
        return out

    _, a, b = to_ring(num).cofactors(to_ring(den))
    return from_ring(a), from_ring(b)


def _iroot(x: int, n: int) -> int | None:
    """Exact integer n-th root of x >= 0, or None."""
    if x < 2:
        return x
    r = (1 << ((x.bit_length() + n - 1) // n)) + 1
    while True:
        y = ((n - 1) * r + x // r ** (n - 1)) // n
        if y >= r:
            break
        r = y
    while r ** n > x:
        r -= 1
    while (r + 1) ** n <= x:
        r += 1
    return r if r ** n == x else None


def rational_power(base: Fraction, e: Exponent) -> Fraction:
    """base**e over the rationals; raises when the result is irrational."""
    base = Fraction(base)
    e = Fraction(e)
    if e.denominator == 1:
        if base == 0 and e < 0:
            raise PoleAtPoint("zero raised to a negative power")
        return base ** int(e)
    if base < 0:
        raise NegativeBaseFractionalPower(f"({base})^({e})")
    if base == 0:
        if e < 0:
            raise PoleAtPoint("zero raised to a negative power")
        return Fraction(0)
    n = e.denominator
    rn = _iroot(base.numerator, n)
    rd = _iroot(base.denominator, n)
    if rn is None or rd is None:
        raise NonRationalValue(f"({base})^({e}) is irrational")
    return Fraction(rn, rd) ** e.numerator


def _fmt_number(c: Fraction) -> str:
    c = Fraction(c)
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def _fmt_mono(m: Monomial) -> str:
    parts = []
    for v, e in m:
        if e == 1:
            parts.append(v)
        elif isinstance(e, int) and e > 0:
            parts.append(f"{v}^{e}")
        else:
            parts.append(f"{v}^({_fmt_number(e)})")
    return "*".join(parts)


def _fmt_poly(p: Poly) -> str:
    if not p:
        return "0"
    out = []
    for k, m in enumerate(_lex_sorted(p)):
        c = Fraction(p[m])
        neg = c < 0
        a = -c if neg else c
        body = _fmt_mono(m)
        if not body:
            txt = _fmt_number(a)
        elif a == 1:
            txt = body
        else:
            txt = f"{_fmt_number(a)}*{body}"
        if k == 0:
            out.append(("-" if neg else "") + txt)
        else:
            out.append((" - " if neg else " + ") + txt)
    return "".join(out)


class ScalarExpr:
    """Immutable exact coefficient; arithmetic never loses precision."""

    __slots__ = ("num", "den")

    def __init__(self, num: Poly | None = None, den: Poly | None = None):
        num = {m: Fraction(c) for m, c in (num or {}).items() if c}
        if den is not None:
            den = {m: Fraction(c) for m, c in den.items() if c}
            if not den:
                raise DivisionByZero("zero denominator")
        self.num, self.den = _normalize(num, den)

    @classmethod
    def _raw(cls, num: Poly, den: Poly | None) -> "ScalarExpr":
        obj = object.__new__(cls)
        obj.num, obj.den = num, den
        return obj

    @classmethod
    def const(cls, value: Number) -> "ScalarExpr":
        value = Fraction(value)
        return cls._raw({ONE_MONO: value} if value else {}, None)

    @classmethod
    def var(cls, name: str, exponent: Exponent = 1) -> "ScalarExpr":
        return cls._raw({((name, _norm_exp(exponent)),): Fraction(1)}, None)

    @classmethod
    def monomial(cls, coeff: Number, powers: Mapping[str, Exponent]) -> "ScalarExpr":
        m = tuple(sorted((v, _norm_exp(e)) for v, e in powers.items() if e))
        return cls._raw({m: Fraction(coeff)} if coeff else {}, None)

    # ------------------------------------------------------------------ queries
    def is_zero(self) -> bool:
        return not self.num

    def is_constant(self) -> bool:
        return self.den is None and all(not m for m in self.num)

    def is_polynomial(self) -> bool:
        """No denominator and only nonnegative integer exponents."""
        return self.den is None and all(
            isinstance(e, int) and e >= 0 for m in self.num for _, e in m
        )

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return self.num.get(ONE_MONO, Fraction(0))

    def free_vars(self) -> frozenset:
        names = {v for m in self.num for v, _ in m}
        if self.den:
            names |= {v for m in self.den for v, _ in m}
        return frozenset(names)

    def depends_on(self, name: str) -> bool:
        for m in self.num:
            for v, _ in m:
                if v == name:
                    return True
        if self.den:
            for m in self.den:
                for v, _ in m:
                    if v == name:
                        return True
        return False

    def single_term(self):
        """(coefficient, monomial) when the expression is one monomial term."""
        if self.den is None and len(self.num) == 1:
            (m, c), = self.num.items()
            return c, m
        return None

    # --------------------------------------------------------------- arithmetic
    def __add__(self, other) -> "ScalarExpr":
        other = as_scalar(other)
        if not other.num:
            return self
        if not self.num:
            return other
        if self.den is None and other.den is None:
            return ScalarExpr._raw(_padd(self.num, other.num), None)
        if self.den == other.den:
            return _make(_padd(self.num, other.num), self.den)
        a_den = self.den or {ONE_MONO: Fraction(1)}
        b_den = other.den or {ONE_MONO: Fraction(1)}
        return _make(
            _padd(_pmul(self.num, b_den), _pmul(other.num, a_den)), _pmul(a_den, b_den)
        )

    __radd__ = __add__

    def __neg__(self) -> "ScalarExpr":
        return ScalarExpr._raw({m: -c for m, c in self.num.items()}, self.den)

    def __sub__(self, other) -> "ScalarExpr":
        return self + (-as_scalar(other))

    def __rsub__(self, other) -> "ScalarExpr":
        return as_scalar(other) + (-self)

    def __mul__(self, other) -> "ScalarExpr":
        if isinstance(other, (int, Fraction)):
            if not other:
                return ZERO
            return ScalarExpr._raw({m: c * other for m, c in self.num.items()}, self.den)
        if not isinstance(other, ScalarExpr):
            return NotImplemented
        if not self.num or not other.num:
            return ZERO
        num = _pmul(self.num, other.num)
        if self.den is None and other.den is None:
            return ScalarExpr._raw(num, None)
        if self.den is None:
            return _make(num, other.den)
        if other.den is None:
            return _make(num, self.den)
        return _make(num, _pmul(self.den, other.den))

    __rmul__ = __mul__

    def inverse(self) -> "ScalarExpr":
        if not self.num:
            raise DivisionByZero("division by the zero expression")
        single = self.single_term()
        if single is not None:
            c, m = single
            return ScalarExpr._raw({mono_inv(m): 1 / c}, None)
        den = dict(self.num)
        num = dict(self.den) if self.den else {ONE_MONO: Fraction(1)}
        return _make(num, den)

    def __truediv__(self, other) -> "ScalarExpr":
        other = as_scalar(other)
        return self * other.inverse()

    def __rtruediv__(self, other) -> "ScalarExpr":
        return as_scalar(other) * self.inverse()

    def __pow__(self, e) -> "ScalarExpr":
        e = Fraction(e)
        if e.denominator == 1:
            k = int(e)
            if k < 0:
                return self.inverse() ** (-k)
            out = ONE
            base = self
            while k:
                if k & 1:
                    out = out * base
                base = base * base
                k >>= 1
            return out
        if not self.num:
            if e < 0:
                raise DivisionByZero("zero raised to a negative power")
            return ZERO
        single = self.single_term()
        if single is None:
            raise NotRepresentable(f"fractional power of a non-monomial expression: ({self})^({e})")
        c, m = single
        if c < 0:
            raise NegativeBaseFractionalPower(f"({self})^({_fmt_number(e)})")
        return ScalarExpr._raw({mono_pow(m, e): rational_power(c, e)}, None)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = ScalarExpr.const(other)
        if not isinstance(other, ScalarExpr):
            return NotImplemented
        if self.den is None and other.den is None:
            return self.num == other.num
        a_den = self.den or {ONE_MONO: Fraction(1)}
        b_den = other.den or {ONE_MONO: Fraction(1)}
        return _pmul(self.num, b_den) == _pmul(other.num, a_den)

    __hash__ = None

    # ---------------------------------------------------------------- calculus
    def diff(self, name: str) -> "ScalarExpr":
        if self.den is None:
            return ScalarExpr._raw(_pdiff(self.num, name), None)
        dn = _pdiff(self.num, name)
        dd = _pdiff(self.den, name)
        num = _padd(_pmul(dn, self.den), _pmul(self.num, dd), -1)
        return _make(num, _pmul(self.den, self.den))

    def eval(self, point: Mapping[str, Number]) -> Fraction:
        """Exact value at a point; every free variable must be assigned."""
        num = _peval(self.num, point)
        if self.den is None:
            return num
        den = _peval(self.den, point)
        if den == 0:
            raise PoleAtPoint(f"denominator of {self} vanishes at {dict(point)}")
        return num / den

    def substitute(self, mapping: Mapping[str, "ScalarExpr"]) -> "ScalarExpr":
        def sub_poly(p: Poly) -> "ScalarExpr":
            total = ZERO
            for m, c in p.items():
                term = ScalarExpr.const(c)
                keep = []
                for v, e in m:
                    if v in mapping:
                        term = term * (as_scalar(mapping[v]) ** e)
                    else:
                        keep.append((v, e))
                if keep:
                    term = term * ScalarExpr._raw({tuple(keep): Fraction(1)}, None)
                total = total + term
            return total

        out = sub_poly(self.num)
        if self.den is not None:
            out = out / sub_poly(self.den)
        return out

    def abs_on_chart(self, chart: Mapping[str, int]) -> "ScalarExpr":
        """|self| when its sign is fixed by the chart's coordinate signs."""
        single = self.single_term()
        if single is None:
            if self.is_zero():
                return self
            raise NotRepresentable(f"sign of {self} is not determined by the chart")
        c, m = single
        sign = 1 if c > 0 else -1
        for v, e in m:
            if v not in chart:
                raise NotRepresentable(f"sign of {v} is not fixed by the chart")
            if chart[v] < 0:
                if not isinstance(e, int):
                    raise NegativeBaseFractionalPower(f"{v}^({e}) on a negative chart")
                if e % 2:
                    sign = -sign
        return self if sign > 0 else -self

    # ----------------------------------------------------------------- display
    def __str__(self) -> str:
        if self.den is None:
            return _fmt_poly(self.num)
        return f"({_fmt_poly(self.num)})/({_fmt_poly(self.den)})"

    def __repr__(self) -> str:
        return f"ScalarExpr({str(self)!r})"

    def term_count(self) -> int:
        return len(self.num)

    def is_single_term(self) -> bool:
        return self.single_term() is not None


def _peval(p: Poly, point: Mapping[str, Number]) -> Fraction:
    total = Fraction(0)
    for m, c in p.items():
        val = Fraction(c)
        for v, e in m:
            if v not in point:
                raise UnknownCoordinate(f"no value for coordinate {v!r}")
            val *= rational_power(Fraction(point[v]), e)
        total += val
    return total


def _normalize(num: Poly, den: Poly | None):
    if not num:
        return {}, None
    if den is None:
        return num, None
    if len(den) == 1:
        (m, c), = den.items()
        return {mono_mul(k, mono_inv(m)): v / c for k, v in num.items()}, None
    num, den = _cancel(num, den)
    content = _min_mono(den)
    if content:
        inv = mono_inv(content)
        den = {mono_mul(m, inv): c for m, c in den.items()}
        num = {mono_mul(m, inv): c for m, c in num.items()}
    if len(den) == 1:
        (m, c), = den.items()
        return {mono_mul(k, mono_inv(m)): v / c for k, v in num.items()}, None
    lc = den[_lex_sorted(den)[0]]
    if lc != 1:
        den = {m: c / lc for m, c in den.items()}
        num = {m: c / lc for m, c in num.items()}
    return num, den


def _make(num: Poly, den: Poly | None) -> ScalarExpr:
    n, d = _normalize(num, den)
    return ScalarExpr._raw(n, d)


def as_scalar(value) -> ScalarExpr:
    if isinstance(value, ScalarExpr):
        return value
    if isinstance(value, (int, Fraction)):
        return ScalarExpr.const(value)
    if isinstance(value, str):
        from .dsl import parse_scalar

        return parse_scalar(value)
    raise TypeError(f"cannot use {type(value).__name__} as a scalar")


ZERO = ScalarExpr._raw({}, None)
ONE = ScalarExpr._raw({ONE_MONO: Fraction(1)}, None)
