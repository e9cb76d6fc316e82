"""Acceptance suite: one test (and one printed pass/fail line) per criterion.

Run with ``pytest tests/test_acceptance.py -v``; the per-criterion lines are
printed in the terminal summary.  ``python tests/test_acceptance.py`` prints
the same lines without pytest.
"""

import io
import math
import random
import time
from pathlib import Path

import pytest

from valfield.cli import parse_manifest, run, run_entry
from valfield.extensions import CaseTag, compute_extensions, fundamental_equality_check, inseparable_degree
from valfield.ramification import automorphism_oracle
from valfield.core.poly import Poly

from conftest import corpus_chains, poly

ROOT = Path(__file__).parent.parent
MANIFEST = ROOT / "corpus" / "manifest.txt"
RESULTS = {}


def report(n, ok, detail):
    RESULTS[n] = (ok, detail)
    return ok


def entries():
    return parse_manifest(MANIFEST.read_text())


_RUNS = {}


def corpus_runs():
    """``run_entry`` objects for every manifest line, computed once."""
    if not _RUNS:
        for no, base, src, expected in entries():
            _RUNS[no] = (base, src, run_entry(base, src)[1])
    return _RUNS


# 1 ------------------------------------------------------------------------


def test_criterion_1_fundamental_equality():
    chosen = []
    for _, base, src, _ in entries():
        kind = base.split(":")[0]
        if kind in ("qp", "fqt") and base.split(":")[1] in ("2", "3", "5", "7"):
            g, b = poly(base, src)
            if 2 <= g.degree() <= 4:
                chosen.append((g, b))
    t0 = time.perf_counter()
    bad = []
    for g, b in chosen:
        reps = compute_extensions(g, b)
        if not fundamental_equality_check(g, reps).holds:
            bad.append(f"{g} over {b}")
    elapsed = time.perf_counter() - t0
    ok = len(chosen) >= 30 and not bad and elapsed < 10
    report(1, ok, f"{len(chosen)} entries, {len(bad)} violations, {elapsed:.2f}s")
    assert len(chosen) >= 30
    assert not bad, bad
    assert elapsed < 10


# 2 ------------------------------------------------------------------------

REQUIRED_ORACLE = {("qp:5", "x^2 - 5"), ("qp:5", "x^2 + 1"), ("qp:7", "x^2 - x - 1"),
                   ("qp:2", "x^2 - 2"), ("qp:2", "x^2 + 1")}


def test_criterion_2_oracle_agreement():
    compared, mismatches = [], []
    for base, src, objs in corpus_runs().values():
        table, reps = objs["table"], objs["reports"]
        if table is None or not table.normality_checked:
            continue
        g, b = poly(base, src)
        if g.degree() > 4 or inseparable_degree(g)[0] or any(r.closing is None for r in reps):
            continue
        cls = automorphism_oracle(g, b, reps)
        compared.append((base, src))
        if cls.orders != (table.order_gd, table.order_gi, table.order_gr):
            mismatches.append((base, src, cls.orders))
    missing = REQUIRED_ORACLE - set(compared)
    ok = len(compared) >= 10 and not missing and not mismatches
    report(2, ok, f"{len(compared)} Galois entries compared, {len(mismatches)} mismatches")
    assert not missing, missing
    assert len(compared) >= 10
    assert not mismatches, mismatches


# 3 ------------------------------------------------------------------------


@pytest.mark.parametrize("p", [2, 3])
def test_criterion_3_defect_flagship(p):
    t0 = time.perf_counter()
    run_, objs = run_entry(f"tower:{p}", f"x^{p} - x - 1/t")
    elapsed = time.perf_counter() - t0
    (rep,) = objs["reports"]
    T = objs["table"]
    info = rep.limit
    checks = {c.name: c for c in objs["checks"]}
    ok = ((rep.e, rep.f, rep.defect) == (1, 1, p)
          and info.case_tag == CaseTag.INFINITELY_MANY_ALPHA_ONE and info.certified
          and info.stable_effective_degree == p and info.truncation_depth <= 8
          and T.order_gr == p == p ** (T.s + T.t - T.l) * info.stage_defects[-1]
          and checks["main_identity"].holds and elapsed < 1)
    prev = RESULTS.get(3, (True, ""))
    report(3, prev[0] and ok, (prev[1] + "; " if prev[1] else "")
           + f"p={p}: d={rep.defect}, delta={info.stable_effective_degree}, depth={info.truncation_depth}, "
           f"|Gr|={T.order_gr}, {elapsed:.3f}s")
    assert (rep.e, rep.f, rep.defect) == (1, 1, p)
    assert info.case_tag == CaseTag.INFINITELY_MANY_ALPHA_ONE and info.certified
    assert info.stable_effective_degree == p
    assert info.truncation_depth <= 8
    assert T.order_gr == p == p ** (T.s + T.t - T.l) * info.stage_defects[-1]
    assert checks["main_identity"].holds
    assert elapsed < 1


# 4, 5 -------------------------------------------------------------------


def _tabled():
    for base, src, objs in corpus_runs().values():
        if objs["table"] is not None and all(r.conclusive for r in objs["reports"]):
            yield base, src, objs


def test_criterion_4_defectless_biconditional():
    both_true = both_false = 0
    violations = []
    for base, src, objs in _tabled():
        T, reps = objs["table"], objs["reports"]
        lhs = all(r.defect == 1 for r in reps)
        rhs = T.order_gr == T.p ** (T.s + T.t - T.l)
        if lhs != rhs:
            violations.append((base, src))
        both_true += lhs and rhs
        both_false += (not lhs) and (not rhs)
        check = next(c for c in objs["checks"] if c.name == "defectless_criterion")
        assert check.holds == (lhs == rhs)
    ok = not violations and both_true >= 3 and both_false >= 3
    report(4, ok, f"{both_true} entries with both sides true, {both_false} with both false, "
                  f"{len(violations)} violations")
    assert not violations, violations
    assert both_true >= 3 and both_false >= 3


def test_criterion_5_no_limit():
    premise = 0
    violations = []
    for base, src, objs in _tabled():
        T, reps = objs["table"], objs["reports"]
        if T.order_gr == T.p ** (T.s + T.t - T.l):
            premise += 1
            if any(r.case_tag != CaseTag.TERMINATED for r in reps):
                violations.append((base, src))
    report(5, not violations and premise > 0, f"{premise} entries satisfy the premise, {len(violations)} violations")
    assert premise > 0
    assert not violations, violations


# 6 ------------------------------------------------------------------------


@pytest.mark.parametrize("p", [2, 3])
def test_criterion_6_inseparable(p):
    _, objs = run_entry(f"fqst:{p}", f"x^{p} - s")
    T = objs["table"]
    got = (T.e, T.f, T.d, T.l, T.s, T.t, T.u)
    want = (1, p, 1, 1, 1, 0, 0)
    ok = got == want and T.d == p ** (T.u + T.l - T.s - T.t) == 1
    prev = RESULTS.get(6, (True, ""))
    report(6, prev[0] and ok, (prev[1] + "; " if prev[1] else "") + f"p={p}: (e,f,d,l,s,t,u)={got}")
    assert got == want
    assert T.d == p ** (T.u + T.l - T.s - T.t) == 1


# 7 ------------------------------------------------------------------------


def test_criterion_7_effective_degree_monotone():
    rng = random.Random(2024)
    pool = corpus_chains()
    pairs = violations = 0
    while pairs < 250:
        base, g, chain = rng.choice(pool)
        if len(chain) < 1:
            continue
        prefix = chain.truncate(rng.randint(1, len(chain)))
        field = g.field
        if rng.random() < 0.25:
            h = g
        else:
            x = Poly.gen(field)
            h = x ** rng.randint(1, 2 * g.degree())
            for k in range(h.degree()):
                h = h + Poly.constant(field, field(rng.randint(-3, 3))) * x ** k
        deltas = [prefix.effective_degree(h, i) for i in range(1, len(prefix) + 1)]
        if any(b > a for a, b in zip(deltas, deltas[1:])):
            violations += 1
        pairs += 1
    report(7, violations == 0, f"{pairs} (h, chain-prefix) pairs, {violations} violations")
    assert violations == 0


# 8 ------------------------------------------------------------------------


def _conclusive_reports():
    for base, src, objs in corpus_runs().values():
        b = objs["reports"][0].chain.base
        for r in objs["reports"]:
            if r.conclusive:
                yield base, src, b.p, r


def _n0(r):
    return 1 if r.limit is None else r.limit.n0


def test_criterion_8_n0_bound():
    count, violations = 0, []
    for base, src, p, r in _conclusive_reports():
        count += 1
        if _n0(r) > math.log(r.defect, p) + 1 + 1e-12:
            violations.append((base, src))
    prev = RESULTS.get(8, (True, ""))
    report(8, prev[0] and not violations, f"bound n0 <= log_p(d)+1 holds on {count - len(violations)}/{count} reports"
           + (f"; {prev[1]}" if prev[1] else ""))
    assert not violations, violations


def test_criterion_8_equality_on_flagship():
    # The flagship branches have n0 = 1 and d = p, so log_p(d) + 1 = 2: the
    # equality clause of this criterion cannot hold for them.
    rows = []
    for p in (2, 3):
        _, objs = run_entry(f"tower:{p}", f"x^{p} - x - 1/t")
        (r,) = objs["reports"]
        rows.append((p, r.limit.n0, r.defect, math.log(r.defect, p) + 1))
    ok = all(n0 == 1 and d == p and n0 == bound for p, n0, d, bound in rows)
    prev = RESULTS.get(8, (True, ""))
    text = ", ".join(f"p={p}: n0={n0}, d={d}, log_p(d)+1={bound:g}" for p, n0, d, bound in rows)
    report(8, prev[0] and ok, (prev[1] + "; " if prev[1] else "") + "equality on flagship: " + text)
    for p, n0, d, bound in rows:
        assert n0 == 1 and d == p
        assert n0 == bound, f"p={p}: n0={n0} but log_p(d)+1={bound:g}"


# 9 ------------------------------------------------------------------------


def test_criterion_9_determinism():
    outs = []
    for _ in range(2):
        buf = io.StringIO()
        run(["corpus", "--corpus", str(MANIFEST), "--json"], out=buf)
        outs.append(buf.getvalue().encode())
    ok = outs[0] == outs[1]
    report(9, ok, f"two corpus --json runs, {len(outs[0])} bytes each, identical={ok}")
    assert ok


def summary_lines():
    return [f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}" for n, (ok, detail) in sorted(RESULTS.items())]


if __name__ == "__main__":
    import sys

    for name, fn in sorted(globals().items()):
        if not name.startswith("test_criterion"):
            continue
        params = [2, 3] if name in ("test_criterion_3_defect_flagship", "test_criterion_6_inseparable") else [None]
        for p in params:
            try:
                fn(p) if p is not None else fn()
            except AssertionError:
                pass
    print("\n".join(summary_lines()))
    sys.exit(0 if all(ok for ok, _ in RESULTS.values()) else 1)
