import io
import json
import subprocess
import sys
from pathlib import Path

import pytest

from msocomp.cli import run
from msocomp.structure import FiniteStructure
from msocomp.theory import eval_theory

SAMPLES = Path(__file__).resolve().parent.parent / "samples"


def call(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run([str(a) for a in argv], out, err)
    return code, out.getvalue(), err.getvalue()


def ok(*argv):
    code, out, err = call(*argv)
    assert code == 0, err
    return out


def test_theory_matches_engine():
    out = ok("theory", "--chain", SAMPLES / "fin3.chain", "-n", 1)
    assert out.strip() == eval_theory(FiniteStructure.chain(3), (), 1).serialize()
    assert out.strip() == "{[empty(X0),~sing(X0)],[~empty(X0),sing(X0)],[~empty(X0),~sing(X0)]}"


def test_theory_with_named_sets():
    out = ok("theory", "--chain", SAMPLES / "fin4_q.chain", "-n", 0)
    assert out.strip() == "[~empty(X0),~sing(X0)]"
    assert ok("theory", "--tree", SAMPLES / "fork.tree", "-n", 0).startswith("tree:")


def test_decide_ordinal():
    phi = "EX X. (sing(X) & ALL Y.(sing(Y) -> (X=Y | X<Y)))"
    assert ok("decide", "--ordinal", "w^2", "--formula", phi) == "true\n"
    last = "EX X. (sing(X) & ALL Y.(sing(Y) -> (Y=X | Y<X)))"
    assert ok("decide", "--ordinal", "w^2", "--formula", last) == "false\n"
    assert ok("decide", "--ordinal", "w+1", "--formula", last) == "true\n"


def test_decide_structure():
    assert ok("decide", "--chain", SAMPLES / "fin4_q.chain", "--formula", "EX X. (sing(X) & X sub Q)") == "true\n"
    assert ok("decide", "--fin", 0, "--formula", "EX X. sing(X)") == "false\n"


def test_ordinal_examples():
    assert ok("ordinal", "parttype", "--alpha", "w+1", "--classes", "[w,w+1) ; [0,w)") == "w\n"
    assert ok("ordinal", "add", "w+1", "w") == "w*2\n"
    assert ok("ordinal", "mul", "w+1", "w") == "w^2\n"
    assert ok("ordinal", "sub", "w", "w*2+3") == "w + 3\n"
    assert ok("ordinal", "decompose", "w^2+w+1", "w^2+1") == "w^2 + 1 ; w + 1\n"
    assert ok("ordinal", "log", "w^3*2+w") == "3\n"


def test_compose():
    one = "[~empty(X0),sing(X0)]"
    assert ok("compose", one, one) == "[~empty(X0),~sing(X0)]\n"


def test_types():
    assert ok("types", "-n", 0, "-l", 1, "--count-only") == "count 3\n"
    listing = ok("types", "-n", 0, "-l", 1).splitlines()
    assert len([line for line in listing if line.startswith("[")]) == 3


def test_tower():
    out = ok("tower", "--fin", 1, "-n", 1)
    assert "p 0" in out and "idempotent yes" in out


def test_ramsey():
    out = ok("ramsey", "--semigroup", SAMPLES / "z2.sg", "--coloring", SAMPLES / "parity.coloring", "--size", 3)
    assert out.splitlines()[0] == "0 2 4"


def test_wellorder_commands():
    out = ok("wellorder-chain", "--term", "(omegasum (prefix) (period (rev omega)))", "--samples", 100)
    assert "degree 2" in out and "verified yes on 100 pairs" in out
    out = ok("wellorder-tree", "--tree", SAMPLES / "fork.tree")
    assert out.splitlines()[0] == "order 10 < 20 < 40 < 30"
    assert "n* 2 k* 1" in out


def test_uniformize_commands():
    out = ok("uniformize", "--fin", 3, "--formula", "(empty(Y) & empty(X)) | (sing(X) & X sub Y)", "--verify")
    assert "Y={1,2} -> X={1}" in out and "verified yes over 8 sets" in out
    out = ok("uniformize", "--product", 2, 2, "--formula", "X sub Y", "--verify")
    assert "recipe product" in out
    out = ok("uniformize", "--tree", SAMPLES / "fork.tree", "--formula", "X sub Y & X sub Q", "--verify")
    assert "recipe tree" in out and "param K = {10,30}" in out


def test_json_mode_both_positions():
    a = json.loads(ok("--json", "decide", "--fin", 3, "--formula", "EX X. sing(X)"))
    b = json.loads(ok("decide", "--fin", 3, "--formula", "EX X. sing(X)", "--json"))
    assert a == b == {"result": True}
    th = json.loads(ok("theory", "--fin", 2, "-n", 1, "--json"))
    assert th["theory"] == eval_theory(FiniteStructure.chain(2), (), 1).serialize()


def test_deterministic_output():
    argv = ("wellorder-chain", "--term", "(omegasum (prefix (fin 2)) (period omega (rev omega)))",
            "--samples", 50, "--seed", 3)
    assert ok(*argv) == ok(*argv)
    argv = ("uniformize", "--fin", 4, "--formula", "X sub Y", "--sample", 5, "--seed", 9)
    assert ok(*argv) == ok(*argv)


@pytest.mark.parametrize("argv", [
    ("theory", "--fin", 6, "-n", 2, "--budget", 10),
    ("--budget", 10, "theory", "--fin", 6, "-n", 2),
])
def test_budget_exit(argv):
    code, out, err = call(*argv)
    assert code == 2 and out == "" and "budget" in err


@pytest.mark.parametrize("argv", [
    ("decide", "--fin", 3, "--formula", "EX X. (sing(X)"),
    ("decide", "--fin", 3, "--formula", "X sub Q"),
    ("ordinal", "sub", "w^2", "w"),
    ("ordinal", "add", "w"),
    ("uniformize", "--fin", 2, "--formula", "sing(X) & X sub Y"),
    ("theory", "--fin", 2),
    ("nonsense",),
    ("theory", "--fin", 2, "-n", 1, "--budget", 0),
    ("theory", "--chain", "/no/such/file", "-n", 0),
])
def test_error_exit(argv):
    code, out, err = call(*argv)
    assert code == 1 and out == ""


def test_malformed_file_positions(tmp_path):
    bad = tmp_path / "bad.chain"
    bad.write_text("size 3\nQ: 1 x\n")
    code, out, err = call("theory", "--chain", bad, "-n", 0)
    assert code == 1 and out == ""
    assert "line 2, column 6" in err
    bad = tmp_path / "bad.tree"
    bad.write_text("1 -\n2  9\n")
    code, _, err = call("theory", "--tree", bad, "-n", 0)
    assert code == 1 and "unknown parent 9 at line 2, column 4" in err
    code, _, err = call("decide", "--fin", 2, "--formula", "sing(X) &")
    assert code == 1 and "offset" in err


def test_console_script():
    res = subprocess.run([sys.executable, "-m", "msocomp.cli", "decide", "--ordinal", "w", "--formula",
                          "EX X. sing(X)"], capture_output=True, text=True)
    assert res.returncode == 0 and res.stdout == "true\n"
    res = subprocess.run([sys.executable, "-m", "msocomp.cli", "ordinal", "log"], capture_output=True, text=True)
    assert res.returncode == 1 and res.stdout == ""
