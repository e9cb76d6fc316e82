import io
import json
import subprocess
import sys
from pathlib import Path

import pytest

from valfield.cli import parse_manifest, run

ROOT = Path(__file__).parent.parent
MANIFEST = ROOT / "corpus" / "manifest.txt"


def call(*argv):
    buf = io.StringIO()
    code = run(list(argv), out=buf)
    return code, buf.getvalue()


def test_verify_ok():
    code, out = call("verify", "--base", "qp:2", "--poly", "x^2-2")
    assert code == 0
    assert "[fail]" not in out and "main_identity" in out


def test_table_tower():
    code, out = call("table", "--base", "tower:2", "--poly", "x^2-x-1/t", "--json")
    assert code == 0
    table = json.loads(out)["table"]
    assert table["d"] == 2 and table["orders"]["Gr"] == 2
    assert set(table) >= {"n", "g", "e", "f", "d", "e0", "f0", "t", "s", "l", "u"}


def test_extensions_two_branches():
    code, out = call("extensions", "--base", "qp:5", "--poly", "x^2+1", "--json")
    assert code == 0
    data = json.loads(out)
    assert len(data["extensions"]) == 2
    assert data["checks"][0]["name"] == "fundamental_equality"
    assert data["checks"][0]["status"] == "pass"
    assert "1*1*1 + 1*1*1 = 2" in data["checks"][0]["witness"]


def test_json_keys_and_rationals():
    code, out = call("chain", "--base", "qp:2", "--poly", "x^2 - 2", "--json")
    data = json.loads(out)
    assert list(data)[:4] == ["input", "extensions", "table", "checks"]
    ext = data["extensions"][0]
    assert {"e", "f", "degree", "defect", "limit"} <= set(ext)
    assert ext["chain"][0]["value"] == "1/2"
    assert ext["closing"]["value"] == "inf"


def test_exit_inconclusive():
    code, _ = call("verify", "--base", "tower:2", "--poly", "x^2-x-1/t", "--max-chain", "1")
    assert code == 2


@pytest.mark.parametrize("argv", [
    ("extensions", "--base", "qp:2", "--poly", "x^2 - y"),
    ("extensions", "--base", "qp:4", "--poly", "x^2 - 2"),
    ("extensions", "--base", "qp:3", "--poly", "(x^2+1)^2"),
    ("table", "--base", "qp:2", "--poly", "x^3 - 2"),
])
def test_exit_error(argv):
    code, out = call(*argv)
    assert code == 1


def test_not_monic_is_error():
    code, _ = call("extensions", "--base", "qp:3", "--poly", "2*x^2 + 1")
    assert code == 1


def test_corpus_exit_codes_follow_status():
    code, out = call("corpus", "--corpus", str(MANIFEST), "--json")
    data = json.loads(out)
    assert len(data["entries"]) == len(parse_manifest(MANIFEST.read_text()))
    statuses = {e["status"] for e in data["entries"]}
    expected = 1 if statuses & {"fail", "error"} else 2 if "inconclusive" in statuses else 0
    assert code == expected


def test_manifest_parsing(tmp_path):
    text = "# comment\n\nqp:2 ; x^2 - 2 ; 2,1,2,1,1,?\n"
    (entry,) = parse_manifest(text)
    assert entry[1] == "qp:2" and entry[3]["Gr"] is None and entry[3]["e"] == 2


def test_corpus_json_deterministic():
    a = call("corpus", "--corpus", str(MANIFEST), "--json")[1]
    b = call("corpus", "--corpus", str(MANIFEST), "--json")[1]
    assert a == b


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "valfield.cli", "extensions", "--base", "qp:3", "--poly", "x^2+1"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert "e=1 f=2" in proc.stdout
