"""Batch front end: problem files in, deterministic JSON reports out.

Exit codes:
  0  solved / verified / check passed
  1  internal error or malformed input
  2  compatibility violation (incompatible moduli, dependent localities, ...)
  3  certificate invalid or not found
  4  solver produced nothing and a bounded search found no witness either

Reports are rendered with sorted keys and stable element strings, so two
runs with the same seed and input are byte-identical.  The timings section
counts processed items instead of wall-clock time for the same reason.
"""

from __future__ import annotations

import argparse
import json
import sys
from importlib import resources
from typing import Optional

from .certificates import verify_certificate
from .elements import format_element, parse_element
from .errors import (
    ApproxError,
    CertificateInvalid,
    CertificateNotFound,
    DependentInputs,
    ExcludedConflict,
    Incompatible,
    IncompatibleModuli,
    NotTIndependent,
    PoleAtCenter,
    TargetNotIntegral,
    WitnessInvalid,
)
from .intmath import factorint
from .localities import descriptor
from .oracle import oracle_search
from .problems import (
    constraints_from_json,
    ledger_to_json,
    map_problem_from_json,
    pairs_from_json,
    problem_from_json,
    strong_from_json,
)
from .ratmap import eval_map, rational_map_approx
from .solver import (
    ApproxProblem,
    block_approx,
    check_compat,
    residue_approx,
    strong_approx_q,
    value_approx,
    verify_solution,
    weak_solve,
)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_INCOMPATIBLE = 2
EXIT_CERT = 3
EXIT_NO_EVIDENCE = 4

_INCOMPATIBLE_KINDS = (
    Incompatible,
    DependentInputs,
    NotTIndependent,
    IncompatibleModuli,
    TargetNotIntegral,
    ExcludedConflict,
    WitnessInvalid,
    PoleAtCenter,
)


def _load(path: str) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def _issues_json(report) -> list[dict]:
    return [
        {
            "kind": i.kind,
            "detail": i.detail,
            "witness": descriptor(i.witness) if i.witness is not None else None,
        }
        for i in report.issues
    ]


def _with_situation(p: ApproxProblem, situation: Optional[str]) -> ApproxProblem:
    if situation is None or situation == p.situation:
        return p
    return ApproxProblem(p.field, situation, p.blocks, p.cert)


def _cmd_solve(args):
    p = _with_situation(problem_from_json(_load(args.problem)), args.situation)
    try:
        sol = block_approx(p)
    except _INCOMPATIBLE_KINDS as e:
        report = getattr(e, "report", None)
        out = {"status": "incompatible", "detail": str(e)}
        if report is not None:
            out["issues"] = _issues_json(report)
        return out, EXIT_INCOMPATIBLE
    except (CertificateInvalid, CertificateNotFound) as e:
        return {"status": "cert_invalid", "detail": str(e)}, EXIT_CERT
    except ApproxError as e:
        witness = oracle_search(p, args.height)
        if witness is None:
            out = {
                "status": "no_solution_evidence",
                "detail": str(e),
                "height": args.height,
            }
            return out, EXIT_NO_EVIDENCE
        out = {
            "status": "error",
            "detail": f"solver failed but a witness exists: {format_element(witness)}",
        }
        return out, EXIT_ERROR
    out = {
        "status": "solved",
        "solution": format_element(sol.x),
        "ledger": ledger_to_json(sol.ledger),
        "timings": {"unit": "items", "blocks": len(p.blocks), "ledger": len(sol.ledger)},
    }
    return out, EXIT_OK if sol.ok else EXIT_ERROR


def _cmd_verify(args):
    p = _with_situation(problem_from_json(_load(args.problem)), args.situation)
    if args.candidate is not None:
        x = parse_element(args.candidate, p.field)
    elif args.report is not None:
        prior = _load(args.report)
        if "solution" not in prior:
            return {"status": "error", "detail": "report has no solution"}, EXIT_ERROR
        x = parse_element(prior["solution"], p.field)
    else:
        return {"status": "error", "detail": "need --candidate or --report"}, EXIT_ERROR
    ledger = verify_solution(p, x)
    ok = all(e.ok for e in ledger)
    out = {
        "status": "solved" if ok else "error",
        "solution": format_element(x),
        "ledger": ledger_to_json(ledger),
        "timings": {"unit": "items", "ledger": len(ledger)},
    }
    return out, EXIT_OK if ok else EXIT_ERROR


def _cmd_check_compat(args):
    p = _with_situation(problem_from_json(_load(args.problem)), args.situation)
    report = check_compat(p)
    out = {
        "status": "solved" if report.ok else "incompatible",
        "issues": _issues_json(report),
        "timings": {"unit": "items", "blocks": len(p.blocks)},
    }
    return out, EXIT_OK if report.ok else EXIT_INCOMPATIBLE


def _cmd_check_cert(args):
    d = _load(args.problem)
    p = problem_from_json(d)
    if p.cert is None:
        return {"status": "cert_invalid", "detail": "no certificate given"}, EXIT_CERT
    members = [v for b in p.blocks for v in b.S]
    report = verify_certificate(p.cert, members, mode=args.mode)
    entries = [
        {"locality": descriptor(e.locality), "verdict": e.verdict, "detail": e.detail}
        for e in report.entries
    ]
    out = {
        "status": "solved" if report.ok else "cert_invalid",
        "certificate_report": entries,
        "mode": report.mode,
        "timings": {"unit": "items", "localities": len(members)},
    }
    return out, EXIT_OK if report.ok else EXIT_CERT


def _cmd_weak(args):
    d = _load(args.problem)
    cs = constraints_from_json(d)
    sol = weak_solve(cs)
    out = {
        "status": "solved",
        "solution": format_element(sol.x),
        "ledger": ledger_to_json(sol.ledger),
        "timings": {"unit": "items", "constraints": len(cs)},
    }
    return out, EXIT_OK if sol.ok else EXIT_ERROR


def _cmd_strong(args):
    cs, excluded = strong_from_json(_load(args.problem))
    x = strong_approx_q(cs, excluded)
    den_support = sorted(factorint(x.a.denominator)) if x.a.denominator > 1 else []
    out = {
        "status": "solved",
        "solution": format_element(x),
        "excluded": descriptor(excluded),
        "denominator_support": den_support,
        "timings": {"unit": "items", "constraints": len(cs)},
    }
    return out, EXIT_OK


def _cmd_value(args):
    field, pairs, cert = pairs_from_json(_load(args.problem), "modulus")
    x = value_approx(pairs, cert)
    out = {
        "status": "solved",
        "solution": format_element(x),
        "timings": {"unit": "items", "pairs": len(pairs)},
    }
    return out, EXIT_OK


def _cmd_residue(args):
    field, pairs, cert = pairs_from_json(_load(args.problem), "target")
    x = residue_approx(pairs, cert)
    out = {
        "status": "solved",
        "solution": format_element(x),
        "timings": {"unit": "items", "pairs": len(pairs)},
    }
    return out, EXIT_OK


def _cmd_func_approx(args):
    field, g, blocks, wits, cert = map_problem_from_json(_load(args.problem))
    point = rational_map_approx(blocks, g, wits, cert)
    image = eval_map(g, point)
    out = {
        "status": "solved",
        "solution": [format_element(c) for c in point],
        "image": [format_element(c) for c in image],
        "timings": {"unit": "items", "blocks": len(blocks), "components": g.dim},
    }
    return out, EXIT_OK


_FIXTURE_COMMANDS = {
    "solve": _cmd_solve,
    "check-compat": _cmd_check_compat,
    "weak": _cmd_weak,
    "strong": _cmd_strong,
    "value": _cmd_value,
    "residue": _cmd_residue,
    "func-approx": _cmd_func_approx,
}


def _fixture_dir():
    return resources.files("locapprox") / "fixtures"


def _cmd_demo(args):
    fdir = _fixture_dir()
    names = sorted(p.name[: -len(".json")] for p in fdir.iterdir() if p.name.endswith(".json"))
    if args.list or args.name is None:
        rows = []
        for n in names:
            d = json.loads((fdir / f"{n}.json").read_text(encoding="utf-8"))
            rows.append({"name": n, "command": d.get("command", "solve"), "title": d.get("title", "")})
        return {"status": "solved", "fixtures": rows}, EXIT_OK
    if args.name not in names:
        return {"status": "error", "detail": f"no fixture {args.name!r}"}, EXIT_ERROR
    path = fdir / f"{args.name}.json"
    d = json.loads(path.read_text(encoding="utf-8"))
    command = d.get("command", "solve")
    handler = _FIXTURE_COMMANDS.get(command)
    if handler is None:
        return {"status": "error", "detail": f"fixture wants unknown command {command!r}"}, EXIT_ERROR
    sub = argparse.Namespace(
        problem=str(path),
        situation=args.situation,
        height=args.height,
        seed=args.seed,
        mode="full",
        candidate=None,
        report=None,
    )
    out, code = handler(sub)
    out = {"fixture": args.name, "command": command, **out}
    return out, code


def _add_common(sp):
    sp.add_argument("--seed", type=int, default=0, help="recorded in the report; all runs are deterministic")
    sp.add_argument("--height", type=int, default=1000, help="bounded-search cap for unsolvability evidence")
    sp.add_argument("--situation", choices=("m", "o"), default=None, help="override the problem file's situation")
    sp.add_argument("--out", default=None, help="also write the report to this path")


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="locapprox",
        description="Exact simultaneous approximation over Q, Q(i) and Q(T).",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    for name, handler, needs_file in (
        ("solve", _cmd_solve, True),
        ("verify", _cmd_verify, True),
        ("check-cert", _cmd_check_cert, True),
        ("check-compat", _cmd_check_compat, True),
        ("weak", _cmd_weak, True),
        ("strong", _cmd_strong, True),
        ("value", _cmd_value, True),
        ("residue", _cmd_residue, True),
        ("func-approx", _cmd_func_approx, True),
        ("demo", _cmd_demo, False),
    ):
        sp = sub.add_parser(name)
        sp.set_defaults(handler=handler)
        if needs_file:
            sp.add_argument("problem", help="problem file (JSON)")
        if name == "verify":
            sp.add_argument("--candidate", default=None, help="element string to verify")
            sp.add_argument("--report", default=None, help="take the candidate from this report")
        if name == "check-cert":
            sp.add_argument("--mode", choices=("full", "exceptional"), default="full")
        if name == "demo":
            sp.add_argument("name", nargs="?", default=None, help="fixture to run")
            sp.add_argument("--list", action="store_true", help="enumerate bundled fixtures")
        _add_common(sp)
    return ap


def _emit(out: dict, args) -> None:
    out.setdefault("seed", args.seed)
    text = json.dumps(out, indent=2, sort_keys=True) + "\n"
    sys.stdout.write(text)
    if getattr(args, "out", None):
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        out, code = args.handler(args)
    except _INCOMPATIBLE_KINDS as e:
        out, code = {"status": "incompatible", "detail": str(e)}, EXIT_INCOMPATIBLE
        report = getattr(e, "report", None)
        if report is not None:
            out["issues"] = _issues_json(report)
    except (CertificateInvalid, CertificateNotFound) as e:
        out, code = {"status": "cert_invalid", "detail": str(e)}, EXIT_CERT
    except (ApproxError, OSError, KeyError, TypeError, ValueError) as e:
        out, code = {"status": "error", "detail": f"{type(e).__name__}: {e}"}, EXIT_ERROR
    _emit(out, args)
    return code


if __name__ == "__main__":
    sys.exit(main())
