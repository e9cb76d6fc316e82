import pytest

from valfield.extensions import compute_extensions
from valfield.parse import parse_poly


def poly(base, text):
    """Parse ``text`` over ``base``; tower bases get the default depth."""
    if base.startswith("tower:") and base.count(":") == 1:
        base += ":32"
    expr = parse_poly(text, base)
    return expr.poly, expr.base


def reports_for(base, text, **kw):
    g, b = poly(base, text)
    return g, b, compute_extensions(g, b, **kw)


@pytest.fixture
def rng():
    import random

    return random.Random(1234)


_CHAINS = []


def corpus_chains():
    """Closing chains of every conclusive corpus report, paired with g."""
    if _CHAINS:
        return _CHAINS
    from pathlib import Path

    from valfield.cli import parse_manifest

    text = (Path(__file__).parent.parent / "corpus" / "manifest.txt").read_text()
    for _, base, src, _ in parse_manifest(text):
        g, b, reps = reports_for(base, src)
        for r in reps:
            ch = r.closing if r.closing is not None else r.chain
            _CHAINS.append((base, g, ch))
    return _CHAINS


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.summary_lines():
        terminalreporter.write_line(line)
