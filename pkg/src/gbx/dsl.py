"""Parser and evaluator for ``.gbx`` documents.

A document declares one context, binds names to typed elements and lists
commands::

    context cotangent(2) chart(p1>0);
    let omega : form2 = p1*dp1^dq2 - dp2^dq1;
    let J : endo = bb(pi_Omega, normalize(omega));
    check OmegaN(normalize(omega), J) expect fail;
    ma analyze omega;

``^`` is the wedge product, except that ``u^k`` with a numeric right operand
is a power.  Generators are spelled as the printer spells them (``dq1``,
``@q1``, ``mom(q1)``), so printed output parses back to the same element.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from lark import Lark, Token, Tree
from lark.exceptions import UnexpectedCharacters, UnexpectedEOF, UnexpectedInput, UnexpectedToken

from .algebroid import nijenhuis_torsion, standard_mu, validate_structure
from .errors import DslError, DslSyntaxError, DslTypeError, GbxError, UnboundName
from .graded import GradedContext, GradedElement, big_bracket, identity_endo, wedge
from .scalar import ScalarExpr
from .tensors import compose, invert_bivector, invert_two_form, is_endomorphism, is_form, is_multivector, is_section

GRAMMAR = r"""
start: _stmt*
_stmt: context | let | command

context: "context" ctxspec [chart] ";"
ctxspec: "cotangent" "(" INT ")"                         -> ctx_cotangent
       | "tangent" "(" names ")"                         -> ctx_tangent
       | "base" "(" names ")" "fiber" "(" names ")"      -> ctx_general
chart: "chart" "(" sign ("," sign)* ")"
sign: NAME SIGNOP "0"
names: NAME ("," NAME)*

let: "let" NAME ":" NAME "=" expr ";"

command: "check" NAME "(" [args] ")" [expect] ";"       -> cmd_check
       | "eval" expr ";"                                -> cmd_eval
       | "ma" "analyze" expr [at] ";"                    -> cmd_ma_analyze
       | "ma" "apply" expr "to" expr ";"                -> cmd_ma_apply
       | "jacobi" "analyze" expr "," expr ";"           -> cmd_jacobi_analyze
       | "classify" expr "over" expr ";"                -> cmd_classify
expect: "expect" NAME
at: "at" "(" assign ("," assign)* ")"
assign: NAME "=" expr
args: expr ("," expr)*

?expr: sum
?sum: product
    | sum "+" product     -> add
    | sum "-" product     -> sub
?product: unary
    | product "*" unary   -> mul
    | product "/" unary   -> div
?unary: caret
    | "-" unary           -> neg
?caret: atom
    | caret "^" atom      -> caret
?atom: INT                -> number
    | NAME                -> name
    | GEN                 -> name
    | NAME "(" [args] ")" -> call
    | "(" expr ")"

SIGNOP: ">" | "<"
GEN: /@[A-Za-z_][A-Za-z0-9_]*/
NAME: /[A-Za-z_][A-Za-z0-9_]*/
INT: /[0-9]+/
COMMENT: /#[^\n]*/
%import common.WS
%ignore WS
%ignore COMMENT
"""

_PARSER = Lark(GRAMMAR, parser="lalr", propagate_positions=True, maybe_placeholders=True)

KINDS = ("scalar", "vector", "bivector", "endo", "structure", "element", "section")


@dataclass
class Binding:
    name: str
    kind: str
    value: GradedElement
    line: int


@dataclass
class Command:
    verb: str
    line: int
    source: str
    args: dict = field(default_factory=dict)


@dataclass
class Document:
    context: GradedContext
    bindings: dict
    commands: list
    source_name: str = "<string>"

    def builtins(self) -> dict:
        return _builtins(self.context)

    def lookup(self, name: str) -> GradedElement:
        if name in self.bindings:
            return self.bindings[name].value
        return self.builtins()[name]


def _builtins(ctx: GradedContext) -> dict:
    out = {"Id": identity_endo(ctx)}
    if ctx.tangent:
        out["mu"] = standard_mu(ctx)
        n = ctx.n // 2
        if ctx.n % 2 == 0 and ctx.base == tuple(f"q{i + 1}" for i in range(n)) + tuple(f"p{i + 1}" for i in range(n)):
            from .monge_ampere import canonical_symplectic

            big = canonical_symplectic(ctx)
            out["Omega"] = big
            out["pi_Omega"] = invert_two_form(big)
    return out


def _pos(node) -> tuple:
    if isinstance(node, Token):
        return node.line, node.column
    meta = getattr(node, "meta", None)
    if meta is not None and not meta.empty:
        return meta.line, meta.column
    return None, None


def kind_ok(kind: str, u: GradedElement) -> bool:
    if kind == "element":
        return True
    if kind == "scalar":
        return u.is_scalar()
    if kind == "vector":
        return is_multivector(u, 1)
    if kind == "bivector":
        return is_multivector(u, 2)
    if kind == "endo":
        return is_endomorphism(u)
    if kind == "section":
        return is_section(u)
    if kind.startswith("form") and kind[4:].isdigit():
        return is_form(u, int(kind[4:]))
    if kind.startswith("multivector") and kind[11:].isdigit():
        return is_multivector(u, int(kind[11:]))
    raise ValueError(kind)


def _known_kind(kind: str) -> bool:
    return kind in KINDS or (kind.startswith("form") and kind[4:].isdigit()) or (
        kind.startswith("multivector") and kind[11:].isdigit()
    )


class _Evaluator:
    """Evaluates expression trees; ``ctx`` None means plain scalar expressions."""

    def __init__(self, ctx: GradedContext | None, env: dict | None = None):
        self.ctx = ctx
        self.env = env if env is not None else {}
        self.builtins = _builtins(ctx) if ctx is not None else {}

    # values are ScalarExpr in scalar mode, GradedElement otherwise
    def lift(self, v):
        if self.ctx is None or isinstance(v, GradedElement):
            return v
        return self.ctx.scalar(v)

    def constant(self, v, node):
        s = v
        if isinstance(v, GradedElement):
            if not v.is_scalar():
                return None
            s = v.as_scalar()
        return s.constant_value() if s.is_constant() else None

    def ev(self, node):
        if isinstance(node, Token):
            if node.type == "INT":
                return self.lift(ScalarExpr.const(int(node)))
            return self.name(node)
        handler = getattr(self, "_" + node.data, None)
        if handler is None:
            line, col = _pos(node)
            raise DslSyntaxError(f"unexpected construct {node.data}", line, col)
        try:
            return handler(node)
        except DslError:
            raise
        except (GbxError, ValueError, ZeroDivisionError, ArithmeticError) as exc:
            line, col = _pos(node)
            raise DslTypeError(f"{type(exc).__name__}: {exc}", line, col) from exc

    def _number(self, node):
        return self.lift(ScalarExpr.const(int(node.children[0])))

    def _name(self, node):
        return self.name(node.children[0])

    def name(self, tok: Token):
        s = str(tok)
        if s in self.env:
            return self.env[s]
        if self.ctx is None:
            if s.startswith("@"):
                raise UnboundName(f"generator {s} needs a context", tok.line, tok.column)
            return ScalarExpr.var(s)
        if s in self.builtins:
            return self.builtins[s]
        ctx = self.ctx
        if s in ctx.base:
            return ctx.x(s)
        if s in ctx.fiber or s in ctx.duals:
            return ctx.monomial(ScalarExpr.const(1), (ctx.generator_index(s),))
        raise UnboundName(f"unbound name {s!r}", tok.line, tok.column)

    def _add(self, node):
        a, b = (self.ev(c) for c in node.children)
        return a + b

    def _sub(self, node):
        a, b = (self.ev(c) for c in node.children)
        return a - b

    def _neg(self, node):
        return -self.ev(node.children[0])

    def _mul(self, node):
        a, b = (self.ev(c) for c in node.children)
        if self.ctx is None:
            return a * b
        return wedge(self.lift(a), self.lift(b))

    def _div(self, node):
        a, b = (self.ev(c) for c in node.children)
        k = b if self.ctx is None else (b.as_scalar() if b.is_scalar() else None)
        if k is None:
            line, col = _pos(node.children[1])
            raise DslTypeError("only division by base functions is defined", line, col)
        return a / k

    def _caret(self, node):
        a, b = (self.ev(c) for c in node.children)
        k = self.constant(b, node.children[1])
        if k is not None:
            if self.ctx is None:
                return a ** k
            if a.is_scalar():
                return self.ctx.scalar(a.as_scalar() ** k)
            return a ** k
        if self.ctx is None:
            line, col = _pos(node.children[1])
            raise DslTypeError("'^' with a non-numeric exponent needs a context", line, col)
        return wedge(a, b)

    def _call(self, node):
        fname, argnode = node.children
        f = str(fname)
        if self.ctx is None:
            raise DslTypeError(f"function {f} needs a context", fname.line, fname.column)
        if f == "mom":
            if argnode is None or len(argnode.children) != 1 or not isinstance(argnode.children[0], Tree) or argnode.children[0].data != "name":
                raise DslTypeError("mom takes one coordinate name", fname.line, fname.column)
            coord = str(argnode.children[0].children[0])
            return self.ctx.p(coord)
        args = [self.ev(a) for a in argnode.children] if argnode is not None else []
        spec = FUNCTIONS.get(f)
        if spec is None:
            raise UnboundName(f"unknown function {f!r}", fname.line, fname.column)
        arity, fn = spec
        if len(args) != arity:
            raise DslTypeError(f"{f} takes {arity} argument(s), got {len(args)}", fname.line, fname.column)
        return fn(self, *args)


def _mu(ev: _Evaluator) -> GradedElement:
    if "mu" in ev.env:
        return ev.env["mu"]
    if "mu" in ev.builtins:
        return ev.builtins["mu"]
    raise UnboundName("no structure 'mu' is bound in this context")


def _inv(ev, u):
    if is_form(u, 2):
        return invert_two_form(u)
    if is_multivector(u, 2):
        return invert_bivector(u)
    raise DslTypeError("inv takes a 2-form or a bivector")


def _normalize(ev, omega):
    from .monge_ampere import build_ma, normalize_2d

    tilde, _ = normalize_2d(build_ma(omega, require_effective=False))
    return tilde


def _hitchin(ev, omega):
    from .monge_ampere import build_ma, hitchin_endo

    return hitchin_endo(build_ma(omega))


FUNCTIONS = {
    "d": (1, lambda ev, u: big_bracket(_mu(ev), u)),
    "bb": (2, lambda ev, u, v: big_bracket(u, v)),
    "sch": (2, lambda ev, u, v: big_bracket(big_bracket(u, _mu(ev)), v)),
    "inv": (1, _inv),
    "compose": (2, lambda ev, a, b: compose(a, b)),
    "torsion": (1, lambda ev, n: nijenhuis_torsion(_mu(ev), n)),
    "normalize": (1, _normalize),
    "hitchin": (1, _hitchin),
}


# ------------------------------------------------------------------ parsing
def _syntax_error(exc: UnexpectedInput, text: str) -> DslSyntaxError:
    if isinstance(exc, UnexpectedEOF):
        lines = text.splitlines() or [""]
        return DslSyntaxError("unexpected end of input", len(lines), len(lines[-1]) + 1)
    if isinstance(exc, UnexpectedToken):
        tok = exc.token
        what = "end of input" if tok.type == "$END" else repr(str(tok))
        return DslSyntaxError(f"unexpected {what}", exc.line, exc.column)
    if isinstance(exc, UnexpectedCharacters):
        return DslSyntaxError(f"unexpected character {exc.char!r}", exc.line, exc.column)
    return DslSyntaxError(str(exc), getattr(exc, "line", None), getattr(exc, "column", None))


def _parse_tree(text: str, start: str = "start") -> Tree:
    try:
        return _PARSER.parse(text)
    except UnexpectedInput as exc:
        raise _syntax_error(exc, text) from None


_EXPR_PARSER = Lark(GRAMMAR, parser="lalr", propagate_positions=True, maybe_placeholders=True, start="expr")


def _parse_expr_tree(text: str) -> Tree:
    try:
        return _EXPR_PARSER.parse(text)
    except UnexpectedInput as exc:
        raise _syntax_error(exc, text) from None


def parse_scalar(text: str) -> ScalarExpr:
    """A coefficient expression such as ``3/2*q1^2*p1^(-1/2)``."""
    return _Evaluator(None).ev(_parse_expr_tree(text))


def parse_element(text: str, ctx: GradedContext, env: dict | None = None) -> GradedElement:
    return _Evaluator(ctx, env).lift(_Evaluator(ctx, env).ev(_parse_expr_tree(text)))


def _context(node: Tree) -> GradedContext:
    spec = node.children[0]
    chart = {}
    if len(node.children) > 1 and node.children[1] is not None:
        for sign in node.children[1].children:
            nm, op = sign.children
            chart[str(nm)] = 1 if str(op) == ">" else -1
    try:
        if spec.data == "ctx_cotangent":
            return GradedContext.cotangent(int(spec.children[0]), chart)
        if spec.data == "ctx_tangent":
            return GradedContext.tangent_of([str(t) for t in spec.children[0].children], chart)
        base = [str(t) for t in spec.children[0].children]
        fiber = [str(t) for t in spec.children[1].children]
        return GradedContext.general(base, fiber, chart)
    except (GbxError, ValueError) as exc:
        line, col = _pos(node)
        raise DslTypeError(str(exc), line, col) from None


def _source_of(text: str, node) -> str:
    meta = node.meta
    return " ".join(text[meta.start_pos:meta.end_pos].split())


def parse_dsl(text, source_name: str = "<string>", chart: dict | None = None) -> Document:
    """Parse, bind and type-check a document; commands keep evaluated arguments."""
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    tree = _parse_tree(text)
    ctx = None
    bindings: dict = {}
    commands: list = []
    ev = None
    for stmt in tree.children:
        line, col = _pos(stmt)
        if stmt.data == "context":
            if ctx is not None:
                raise DslTypeError("the context is declared twice", line, col)
            ctx = _context(stmt)
            if chart:
                ctx = ctx.with_chart({**ctx.chart_map, **chart})
            ev = _Evaluator(ctx, {})
            continue
        if ctx is None:
            raise DslTypeError("declare a context before anything else", line, col)
        if stmt.data == "let":
            name_tok, kind_tok, expr = stmt.children
            name, kind = str(name_tok), str(kind_tok)
            if name in bindings:
                raise DslTypeError(f"{name!r} is already bound", name_tok.line, name_tok.column)
            if name in ctx.base or name in ctx.fiber or name in ctx.duals:
                raise DslTypeError(f"{name!r} names a coordinate or generator", name_tok.line, name_tok.column)
            if not _known_kind(kind) and kind != "structure":
                raise DslTypeError(f"unknown kind {kind!r}", kind_tok.line, kind_tok.column)
            value = ev.lift(ev.ev(expr))
            if kind == "structure":
                try:
                    validate_structure(value)
                except GbxError as exc:
                    raise DslTypeError(f"{name} is not a structure: {exc}", kind_tok.line, kind_tok.column) from None
            elif not kind_ok(kind, value):
                raise DslTypeError(f"{name} = {value} is not of kind {kind}", kind_tok.line, kind_tok.column)
            bindings[name] = Binding(name, kind, value, line)
            ev.env[name] = value
            continue
        commands.append(_command(stmt, ev, text))
    if ctx is None:
        raise DslTypeError("the document declares no context", 1, 1)
    return Document(ctx, bindings, commands, source_name)


def _command(stmt: Tree, ev: _Evaluator, text: str) -> Command:
    line, _ = _pos(stmt)
    verb = stmt.data[4:]
    cmd = Command(verb, line, _source_of(text, stmt))
    ch = stmt.children
    if verb == "check":
        kind_tok, argnode, expect = ch
        cmd.args["kind"] = str(kind_tok)
        cmd.args["tensors"] = [ev.lift(ev.ev(a)) for a in argnode.children] if argnode is not None else []
        cmd.args["mu"] = _mu(ev) if ("mu" in ev.env or "mu" in ev.builtins) else None
        want = "pass"
        if expect is not None:
            want = str(expect.children[0])
            if want not in ("pass", "fail"):
                raise DslTypeError("expect takes 'pass' or 'fail'", expect.children[0].line, expect.children[0].column)
        cmd.args["expect"] = want
    elif verb == "eval":
        cmd.args["value"] = ev.lift(ev.ev(ch[0]))
    elif verb == "ma_analyze":
        cmd.args["form"] = ev.lift(ev.ev(ch[0]))
        point = None
        if ch[1] is not None:
            point = {}
            for assign in ch[1].children:
                nm, val = assign.children
                c = ev.constant(ev.ev(val), val)
                if c is None:
                    raise DslTypeError("sample-point values must be numbers", nm.line, nm.column)
                point[str(nm)] = Fraction(c)
        cmd.args["sample_point"] = point
    elif verb == "ma_apply":
        cmd.args["form"] = ev.lift(ev.ev(ch[0]))
        f = ev.lift(ev.ev(ch[1]))
        if not f.is_scalar():
            l, c = _pos(ch[1])
            raise DslTypeError("ma apply needs a function", l, c)
        cmd.args["function"] = f.as_scalar()
    elif verb == "jacobi_analyze":
        cmd.args["omega1"] = ev.lift(ev.ev(ch[0]))
        cmd.args["omega2"] = ev.lift(ev.ev(ch[1]))
    elif verb == "classify":
        cmd.args["endo"] = ev.lift(ev.ev(ch[0]))
        cmd.args["structure"] = ev.lift(ev.ev(ch[1]))
    return cmd


def parse_file(path, chart: dict | None = None) -> Document:
    import os

    with open(path, "rb") as fh:
        return parse_dsl(fh.read(), os.path.basename(str(path)), chart)


def parse_chart(spec: str) -> dict:
    """``"p1>0,q2<0"`` -> {"p1": 1, "q2": -1}."""
    out = {}
    for part in filter(None, (s.strip() for s in spec.split(","))):
        for op, sign in ((">", 1), ("<", -1)):
            if op in part:
                name, zero = (s.strip() for s in part.split(op, 1))
                if zero != "0":
                    raise DslSyntaxError(f"chart entries compare with 0, got {part!r}")
                out[name] = sign
                break
        else:
            raise DslSyntaxError(f"cannot read chart entry {part!r}")
    return out
