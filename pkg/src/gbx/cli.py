"""Command line entry point: ``gbx run``, ``gbx check``, ``gbx ma``, ``gbx jacobi``."""

from __future__ import annotations

import argparse
import os
import sys
from fractions import Fraction

from .dsl import parse_chart, parse_element, parse_file
from .errors import DslError, GbxError
from .graded import GradedContext
from .report import document_json, error_json, run_document, serialize

RED, GREEN, RESET = "\033[31m", "\033[32m", "\033[0m"


def _use_color(stream) -> bool:
    mode = os.environ.get("GBX_COLOR", "auto").lower()
    if mode in ("1", "always", "yes", "true"):
        return True
    if mode in ("0", "never", "no", "false"):
        return False
    return hasattr(stream, "isatty") and stream.isatty()


def _diag(msg: str, ok: bool = False) -> None:
    if _use_color(sys.stderr):
        msg = (GREEN if ok else RED) + msg + RESET
    print(msg, file=sys.stderr)


def _emit(doc: dict, as_json: bool) -> None:
    if as_json:
        sys.stdout.buffer.write(serialize(doc))
        sys.stdout.flush()
        return
    for rep in doc["reports"]:
        print(_summary(rep))
    print("ok" if doc.get("ok") else "FAILED")


def _summary(rep: dict) -> str:
    where = f"line {rep['line']}: " if "line" in rep else ""
    if "error" in rep:
        return f"{where}{rep['command']}: error {rep['error']['type']}: {rep['error']['message']}"
    cmd = rep["command"]
    if cmd == "check":
        return f"{where}check {rep['kind']}: {rep['verdict']} (expected {rep['expect']})"
    if cmd == "ma analyze":
        if rep["dimension"] == 2:
            return f"{where}ma analyze: Pf = {rep['pfaffian']}, {rep['type']}, integrable = {rep['integrable']}"
        return f"{where}ma analyze: lambda = {rep['lambda']} ({rep['lambda_sign']}), orbit {rep['orbit']}"
    if cmd == "ma apply":
        return f"{where}ma apply: {rep['value']}"
    if cmd == "eval":
        return f"{where}eval: {rep['value']}"
    if cmd == "classify":
        return f"{where}classify: {rep['kind']} (square {rep['square']})"
    return f"{where}{cmd}: done"


def _point(spec: str | None) -> dict | None:
    if not spec:
        return None
    out = {}
    for part in filter(None, (s.strip() for s in spec.split(","))):
        name, val = (s.strip() for s in part.split("=", 1))
        out[name] = Fraction(val)
    return out


def cmd_run(args) -> int:
    chart = parse_chart(args.chart) if args.chart else None
    doc = parse_file(args.file, chart)
    result = run_document(doc, jobs=args.jobs)
    _emit(result.document, args.json)
    return 0 if result.ok else 1


def cmd_check(args) -> int:
    chart = parse_chart(args.chart) if args.chart else None
    doc = parse_file(args.file, chart)
    _diag(f"{args.file}: {len(doc.bindings)} binding(s), {len(doc.commands)} command(s)", ok=True)
    return 0


def _ma_ctx(args) -> GradedContext:
    chart = parse_chart(args.chart) if args.chart else None
    return GradedContext.cotangent(args.dim, chart)


def cmd_ma_analyze(args) -> int:
    from .monge_ampere import analyze_2d, analyze_3d, build_ma

    ctx = _ma_ctx(args)
    ma = build_ma(parse_element(args.form, ctx))
    point = _point(args.sample_point)
    rep = analyze_2d(ma, point) if args.dim == 2 else analyze_3d(ma, point)
    _emit(document_json([{**rep.to_json(), "ok": True}]), args.json)
    return 0


def cmd_ma_apply(args) -> int:
    from .monge_ampere import build_ma, ma_operator_apply

    ctx = _ma_ctx(args)
    ma = build_ma(parse_element(args.form, ctx))
    f = parse_element(args.function, ctx).as_scalar()
    out = ma_operator_apply(ma, f)
    rep = {"command": "ma apply", "form": str(ma.omega), "function": str(f), "value": str(out), "solution": out.is_zero(), "ok": True}
    _emit(document_json([rep]), args.json)
    return 0


def cmd_jacobi_analyze(args) -> int:
    from .monge_ampere import jacobi_analyze, jacobi_context

    ctx = jacobi_context(args.n)
    rep = jacobi_analyze(parse_element(args.omega1, ctx), parse_element(args.omega2, ctx))
    _emit(document_json([{**rep.to_json(), "ok": True}]), args.json)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="gbx", description="Big-bracket computations for Lie algebroids and Monge-Ampere structures.")
    sub = p.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run every command of a .gbx document")
    run.add_argument("file")
    run.add_argument("--json", action="store_true", help="print the JSON report")
    run.add_argument("--chart", help="extra chart signs, e.g. 'p1>0'")
    run.add_argument("--jobs", type=int, default=1, help="run independent commands in parallel")
    run.set_defaults(func=cmd_run)

    chk = sub.add_parser("check", help="parse and type-check a .gbx document")
    chk.add_argument("file")
    chk.add_argument("--chart")
    chk.set_defaults(func=cmd_check)

    ma = sub.add_parser("ma", help="Monge-Ampere structures on T*R^n")
    ma_sub = ma.add_subparsers(dest="ma_command", required=True)
    an = ma_sub.add_parser("analyze")
    an.add_argument("--dim", type=int, choices=(2, 3), required=True)
    an.add_argument("--form", required=True)
    an.add_argument("--chart")
    an.add_argument("--sample-point", help="e.g. 'p1=1,q1=0'")
    an.add_argument("--json", action="store_true")
    an.set_defaults(func=cmd_ma_analyze)
    ap = ma_sub.add_parser("apply")
    ap.add_argument("--dim", type=int, choices=(2, 3), required=True)
    ap.add_argument("--form", required=True)
    ap.add_argument("--function", required=True)
    ap.add_argument("--chart")
    ap.add_argument("--json", action="store_true")
    ap.set_defaults(func=cmd_ma_apply)

    jac = sub.add_parser("jacobi", help="Jacobi systems on T*R^n x R^2")
    jac_sub = jac.add_subparsers(dest="jacobi_command", required=True)
    ja = jac_sub.add_parser("analyze")
    ja.add_argument("--n", type=int, default=2)
    ja.add_argument("--omega1", required=True)
    ja.add_argument("--omega2", required=True)
    ja.add_argument("--json", action="store_true")
    ja.set_defaults(func=cmd_jacobi_analyze)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except DslError as exc:
        _diag(f"{getattr(args, 'file', '<input>')}:{exc}")
        return 2
    except GbxError as exc:
        err = error_json(exc)
        _diag(f"error: {err['type']}: {err['message']}")
        return 2
    except OSError as exc:
        _diag(f"error: {exc}")
        return 2


if __name__ == "__main__":
    sys.exit(main())
