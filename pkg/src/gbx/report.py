"""Running document commands and writing deterministic JSON reports."""

from __future__ import annotations

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from .compat import check_structure
from .courant import classify_generalized
from .dsl import Command, Document
from .errors import GbxError, ResidualError
from .monge_ampere import (
    analyze_2d,
    analyze_3d,
    build_ma,
    jacobi_analyze,
    ma_operator_apply,
)

SCHEMA = "gbx-report/1"


def error_json(exc: BaseException) -> dict:
    out = {"type": type(exc).__name__, "message": str(exc)}
    if isinstance(exc, ResidualError) and exc.residual is not None:
        out["residual"] = str(exc.residual)
    return out


def run_one(doc: Document, cmd: Command) -> dict:
    """Report for one command; library errors become an ``error`` entry."""
    head = {"command": cmd.verb.replace("_", " "), "line": cmd.line, "source": cmd.source}
    try:
        body = _dispatch(doc, cmd)
    except GbxError as exc:
        body = {"error": error_json(exc)}
        if cmd.verb == "check":
            want = cmd.args["expect"]
            body.update({"kind": cmd.args["kind"], "expect": want, "verdict": "error", "ok": False})
        else:
            body["ok"] = False
    body.pop("command", None)
    return {**head, **body}


def _dispatch(doc: Document, cmd: Command) -> dict:
    a = cmd.args
    if cmd.verb == "check":
        from .compat import STRUCTURE_KINDS

        kind = a["kind"]
        if kind not in STRUCTURE_KINDS:
            raise GbxError(f"unknown structure kind {kind!r}; expected one of {', '.join(sorted(STRUCTURE_KINDS))}")
        names = STRUCTURE_KINDS[kind]
        if len(a["tensors"]) != len(names):
            raise GbxError(f"{kind} takes {len(names)} argument(s): {', '.join(names)}")
        if a["mu"] is None:
            raise GbxError("checks need a structure named mu")
        rep = check_structure(a["mu"], kind, **dict(zip(names, a["tensors"])))
        verdict = "pass" if rep.verdict else "fail"
        out = rep.to_json()
        out.update({"expect": a["expect"], "verdict": verdict, "ok": verdict == a["expect"]})
        return out
    if cmd.verb == "eval":
        v = a["value"]
        return {"value": str(v), "zero": v.is_zero(), "ok": True}
    if cmd.verb == "ma_analyze":
        ma = build_ma(a["form"])
        rep = analyze_2d(ma, a["sample_point"]) if ma.n == 2 else analyze_3d(ma, a["sample_point"])
        return {**rep.to_json(), "ok": True}
    if cmd.verb == "ma_apply":
        ma = build_ma(a["form"])
        out = ma_operator_apply(ma, a["function"])
        return {"form": str(ma.omega), "function": str(a["function"]), "value": str(out), "solution": out.is_zero(), "ok": True}
    if cmd.verb == "jacobi_analyze":
        return {**jacobi_analyze(a["omega1"], a["omega2"]).to_json(), "ok": True}
    if cmd.verb == "classify":
        cls = classify_generalized(a["structure"], a["endo"])
        return {**cls.to_json(), "ok": True}
    raise GbxError(f"unknown command {cmd.verb}")


@dataclass
class RunResult:
    document: dict
    ok: bool


def run_document(doc: Document, jobs: int = 1) -> RunResult:
    """Run every command; commands never mutate bindings, so order is free."""
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            reports = list(pool.map(lambda c: run_one(doc, c), doc.commands))
    else:
        reports = [run_one(doc, c) for c in doc.commands]
    ok = all(r.get("ok", False) for r in reports)
    return RunResult(document_json(reports, doc.source_name, ok), ok)


def document_json(reports: list, source: str | None = None, ok: bool = True) -> dict:
    out = {"schema": SCHEMA, "reports": reports, "ok": ok}
    if source is not None:
        out["source"] = source
    return out


def serialize(report) -> bytes:
    """Sorted keys, two-space indent, trailing newline."""
    if report is None:
        report = document_json([])
    return (json.dumps(report, sort_keys=True, indent=2, ensure_ascii=False) + "\n").encode("utf-8")
