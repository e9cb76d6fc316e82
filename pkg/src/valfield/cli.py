"""Command-line interface: ``valfield {chain,extensions,table,verify,corpus}``.

Exit codes: 0 when everything ran and every check passed, 2 when a result is
inconclusive (an unclassified chain), 1 on errors or failed checks.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from .errors import (
    ChainBudgetExhausted,
    HypothesisNotMet,
    Inconclusive,
    NotNormal,
    OracleBoundExceeded,
    RootsNotRational,
    ValFieldError,
)
from .extensions import Bounds, compute_extensions, fundamental_equality_check
from .parse import parse_poly
from .ramification import (
    DEFAULT_ORACLE_BOUND,
    CheckResult,
    automorphism_oracle,
    check_defectless_criterion,
    check_kr_equals_kd_corollary,
    check_main_identity,
    check_no_limit_criterion,
    ramification_invariants,
)
from .valued import render_value

EXIT_OK, EXIT_ERROR, EXIT_INCONCLUSIVE = 0, 1, 2
FIELDS = ("n", "g", "e", "f", "d", "Gr")


# --------------------------------------------------------------------------
# Serialization
# --------------------------------------------------------------------------


def _val(v):
    return render_value(v)


def _step_json(step):
    return {
        "key": str(step.key),
        "value": _val(step.value),
        "e": step.e,
        "f": step.f,
        "alpha": step.alpha,
        "residual": None if step.residual_factor is None else str(step.residual_factor),
    }


def _limit_json(info):
    if info is None:
        return None
    return {
        "case": str(info.case_tag),
        "truncation_depth": info.truncation_depth,
        "delta_omega": info.stable_effective_degree,
        "n0": info.n0,
        "stage_defects": list(info.stage_defects),
        "certified": info.certified,
        "q_omega": None if info.q_omega is None else str(info.q_omega),
        "note": info.note,
    }


def report_json(r):
    closing = None
    if r.closing is not None and len(r.closing) > len(r.chain):
        closing = {"key": str(r.closing.steps[-1].key), "value": _val(r.closing.steps[-1].value)}
    return {
        "e": r.e,
        "f": r.f,
        "degree": r.local_degree,
        "defect": r.defect,
        "case": str(r.case_tag),
        "limit": _limit_json(r.limit),
        "chain": [_step_json(s) for s in r.chain.steps],
        "closing": closing,
    }


def _check_json(c: CheckResult):
    return {"name": c.name, "status": c.status, "witness": c.witness}


def _skipped(name, why):
    return CheckResult(name, True, why, "skipped")


def _inconclusive(name, why):
    return CheckResult(name, False, why, "inconclusive")


# --------------------------------------------------------------------------
# Running one input
# --------------------------------------------------------------------------


def run_entry(base_desc: str, poly_text: str, bounds: Bounds | None = None,
              oracle_bound: int = DEFAULT_ORACLE_BOUND, with_table=True, with_checks=True):
    """Compute reports, table and checks for one input; returns ``(run, objects)``.

    ``run`` is the JSON-ready dictionary; ``objects`` holds the Python
    results (``reports``, ``table``, ``checks``, ``oracle``) for programmatic use.
    """
    bounds = bounds or Bounds()
    desc = base_desc.strip()
    if desc.startswith("tower:") and desc.count(":") == 1:
        desc = f"{desc}:{bounds.tower_depth}"
    expr = parse_poly(poly_text, desc)
    g, base = expr.poly, expr.base
    if not g.is_monic():
        raise ValueError(f"{g} is not monic")
    reports = compute_extensions(g, base, bounds)
    checks, table, oracle = [], None, None
    run = {
        "input": {"base": base_desc.strip(), "poly": str(g), "source": poly_text},
        "extensions": [report_json(r) for r in reports],
        "table": None,
        "checks": [],
    }
    conclusive = all(r.conclusive for r in reports)
    if conclusive:
        w = fundamental_equality_check(g, reports)
        checks.append(CheckResult("fundamental_equality", w.holds, str(w)))
    else:
        checks.append(_inconclusive("fundamental_equality", "unclassified chain (DepthExhaustedUnknown)"))
    if with_table and conclusive:
        try:
            table = ramification_invariants(g, reports, base)
        except NotNormal as exc:
            checks.append(CheckResult("normality", False, str(exc), "not-normal"))
        else:
            run["table"] = dict(table.as_dict(), p=table.p, orders={
                "Gd": table.order_gd, "Gi": table.order_gi, "Gr": table.order_gr})
            checks.append(CheckResult("normality", True, "g splits in K[x]/(g)") if table.normality_checked
                          else _skipped("normality", "not checkable over this base"))
    if with_checks and table is not None:
        checks.append(check_main_identity(table, reports))
        checks.append(check_defectless_criterion(table, reports))
        checks.append(check_no_limit_criterion(table, reports))
        try:
            checks.append(check_kr_equals_kd_corollary(table, reports))
        except HypothesisNotMet as exc:
            checks.append(_skipped("kr_equals_kd_corollary", str(exc)))
        try:
            oracle = automorphism_oracle(g, base, reports, oracle_bound)
        except (OracleBoundExceeded, Inconclusive, RootsNotRational) as exc:
            checks.append(_skipped("automorphism_oracle", str(exc)))
        else:
            agree = oracle.orders == table.orders
            checks.append(CheckResult(
                "automorphism_oracle", agree,
                f"oracle (|G^d|,|G^i|,|G^r|) = {oracle.orders}, table = {table.orders}; "
                + "; ".join(oracle.witnesses)))
    elif with_checks and not conclusive:
        checks.append(_inconclusive("identities", "unclassified chain (DepthExhaustedUnknown)"))
    run["checks"] = [_check_json(c) for c in checks]
    return run, {"poly": g, "base": base, "reports": reports, "table": table, "checks": checks, "oracle": oracle}


def _status_code(checks):
    if any(c.status == "fail" for c in checks):
        return EXIT_ERROR
    if any(c.status == "inconclusive" for c in checks):
        return EXIT_INCONCLUSIVE
    return EXIT_OK


# --------------------------------------------------------------------------
# Corpus manifests
# --------------------------------------------------------------------------


def parse_manifest(text: str):
    """Entries ``(line_no, base, poly, expected)``; ``expected`` maps field -> int or None."""
    out = []
    for no, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        parts = [p.strip() for p in line.split(";")]
        if len(parts) != 3:
            raise ValueError(f"line {no}: expected '<base> ; <poly> ; <n,g,e,f,d,|Gr|>'")
        vals = [v.strip() for v in parts[2].split(",")]
        if len(vals) != len(FIELDS):
            raise ValueError(f"line {no}: expected {len(FIELDS)} comma-separated fields")
        expected = {k: (None if v == "?" else int(v)) for k, v in zip(FIELDS, vals)}
        out.append((no, parts[0], parts[1], expected))
    return out


def actual_fields(objs):
    reports, table = objs["reports"], objs["table"]
    efd = {(r.e, r.f, r.defect) for r in reports}
    e, f, d = efd.pop() if len(efd) == 1 else (None, None, None)
    return {
        "n": objs["poly"].degree(),
        "g": len(reports),
        "e": e,
        "f": f,
        "d": d,
        "Gr": None if table is None else table.order_gr,
    }


def run_corpus(text: str, bounds=None, oracle_bound=DEFAULT_ORACLE_BOUND):
    entries, worst = [], EXIT_OK
    for no, base, poly, expected in parse_manifest(text):
        item = {"line": no, "base": base, "poly": poly,
                "expected": {k: v for k, v in expected.items()}}
        try:
            run, objs = run_entry(base, poly, bounds, oracle_bound)
        except ValFieldError as exc:
            item.update(status="inconclusive" if isinstance(exc, (Inconclusive, ChainBudgetExhausted)) else "error",
                        error=f"{type(exc).__name__}: {exc}")
            worst = max(worst, EXIT_INCONCLUSIVE if item["status"] == "inconclusive" else EXIT_ERROR,
                        key=_severity)
            entries.append(item)
            continue
        actual = actual_fields(objs)
        mismatches = [k for k, v in expected.items() if v is not None and actual[k] != v]
        code = _status_code(objs["checks"])
        if mismatches:
            code = EXIT_ERROR
        item.update(
            actual=actual,
            mismatches=mismatches,
            status={EXIT_OK: "pass", EXIT_ERROR: "fail", EXIT_INCONCLUSIVE: "inconclusive"}[code],
            extensions=run["extensions"],
            table=run["table"],
            checks=run["checks"],
        )
        worst = max(worst, code, key=_severity)
        entries.append(item)
    return {"entries": entries, "summary": _summary(entries)}, worst


def _severity(code):
    return {EXIT_OK: 0, EXIT_INCONCLUSIVE: 1, EXIT_ERROR: 2}[code]


def _summary(entries):
    counts = {}
    for e in entries:
        counts[e["status"]] = counts.get(e["status"], 0) + 1
    return dict(sorted(counts.items()))


# --------------------------------------------------------------------------
# Text rendering
# --------------------------------------------------------------------------


def _render_reports(run, out, trace=False):
    exts = run["extensions"]
    print(f"{run['input']['poly']} over {run['input']['base']}: {len(exts)} extension(s)", file=out)
    for i, r in enumerate(exts, start=1):
        lim = r["limit"]
        extra = ""
        if lim and lim["case"] != "Terminated":
            extra = f", {lim['case']}, delta_omega={lim['delta_omega']}, n0={lim['n0']}"
            extra += "" if lim["certified"] else " (uncertified)"
        print(f"  #{i}: e={r['e']} f={r['f']} degree={r['degree']} defect={r['defect']}{extra}", file=out)
        if trace:
            for j, s in enumerate(r["chain"], start=1):
                alpha = "-" if s["alpha"] is None else s["alpha"]
                print(f"      Q{j} = {s['key']}  beta={s['value']}  e={s['e']} f={s['f']} alpha={alpha}"
                      f"  residual={s['residual']}", file=out)
            if r["closing"]:
                print(f"      closing: {r['closing']['key']}  value={r['closing']['value']}", file=out)


def _render_checks(run, out):
    for c in run["checks"]:
        mark = {"pass": "ok", "fail": "FAIL"}.get(c["status"], c["status"])
        print(f"  [{mark}] {c['name']}: {c['witness']}", file=out)


# --------------------------------------------------------------------------
# Entry point
# --------------------------------------------------------------------------


def build_parser():
    ap = argparse.ArgumentParser(prog="valfield", description="Extensions of valuations, defect and ramification.")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, needs_input=True):
        if needs_input:
            p.add_argument("--base", required=True, help="qp:P, fqt:P[^K], fqst:P[^K] or tower:P[^K][:DEPTH]")
            p.add_argument("--poly", required=True, help="monic polynomial in x, e.g. 'x^2 - x - 1/t'")
        p.add_argument("--json", action="store_true", help="machine-readable output")
        p.add_argument("--max-chain", type=int, default=64)
        p.add_argument("--tower-depth", type=int, default=32)
        p.add_argument("--oracle-bound", type=int, default=DEFAULT_ORACLE_BOUND)
        p.add_argument("--timing", action="store_true", help="include wall-clock timing (breaks byte-identity)")

    common(sub.add_parser("chain", help="print the augmentation trace of every extension"))
    common(sub.add_parser("extensions", help="extension reports and the fundamental equality"))
    common(sub.add_parser("table", help="ramification table of a normal extension"))
    common(sub.add_parser("verify", help="all identity checks, with the automorphism oracle when in bound"))
    cp = sub.add_parser("corpus", help="run a manifest of inputs")
    common(cp, needs_input=False)
    cp.add_argument("--corpus", required=True, type=Path, help="manifest file")
    return ap


def run(argv=None, out=None):
    out = out or sys.stdout
    args = build_parser().parse_args(argv)
    bounds = Bounds(max_chain_len=args.max_chain, tower_depth=args.tower_depth)
    t0 = time.perf_counter()
    try:
        if args.command == "corpus":
            result, code = run_corpus(args.corpus.read_text(), bounds, args.oracle_bound)
            if args.timing:
                result["timing"] = round(time.perf_counter() - t0, 3)
            if args.json:
                print(json.dumps(result, indent=2), file=out)
            else:
                for e in result["entries"]:
                    extra = e.get("error") or (", ".join(e.get("mismatches", [])) and
                                               f"mismatch in {', '.join(e['mismatches'])}")
                    print(f"{e['status']:>12}  {e['base']} ; {e['poly']}" + (f"  ({extra})" if extra else ""),
                          file=out)
                print(f"summary: {result['summary']}", file=out)
            return code
        with_table = args.command in ("table", "verify")
        run_, objs = run_entry(args.base, args.poly, bounds, args.oracle_bound,
                               with_table=with_table, with_checks=args.command == "verify")
        if args.command in ("table", "verify") and objs["table"] is None:
            bad = [c for c in objs["checks"] if c.status in ("not-normal", "inconclusive")]
            if bad and bad[0].status == "inconclusive":
                code = EXIT_INCONCLUSIVE
            else:
                code = EXIT_ERROR
        else:
            code = _status_code(objs["checks"])
        if args.timing:
            run_["timing"] = round(time.perf_counter() - t0, 3)
        if args.json:
            print(json.dumps(run_, indent=2), file=out)
        else:
            _render_reports(run_, out, trace=args.command == "chain")
            if objs["table"] is not None and args.command in ("table", "verify"):
                print(objs["table"].render(), file=out)
            if args.command != "chain":
                _render_checks(run_, out)
            if args.timing:
                print(f"time: {run_['timing']}s", file=out)
        return code
    except (Inconclusive, ChainBudgetExhausted) as exc:
        print(f"inconclusive: {exc}", file=sys.stderr)
        return EXIT_INCONCLUSIVE
    except (ValFieldError, ValueError, OSError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_ERROR


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
