import io
import json
import subprocess
import sys

import pytest

from pgact.cli import run
from pgact.fixtures import FIXTURES, fx_d
from pgact.globalize import build_globalization
from pgact.instance import dump_yaml, instance_data, load_algebra_file, load_instance


def call(*argv, stdin=None, monkeypatch=None):
    buf = io.StringIO()
    if stdin is not None:
        monkeypatch.setattr(sys, "stdin", io.StringIO(stdin))
    code = run(list(argv), buf)
    return code, buf.getvalue()


@pytest.fixture
def fixture_file(tmp_path):
    def make(name):
        code, text = call("fixtures", name)
        assert code == 0
        p = tmp_path / f"{name}.yaml"
        p.write_text(text)
        return str(p)
    return make


def test_fixtures_list():
    code, text = call("fixtures", "list")
    assert code == 0
    assert text.split() == list(FIXTURES)


def test_unknown_fixture_is_input_error():
    code, text = call("fixtures", "FX-Z")
    assert code == 2 and "unknown fixture" in text


def test_globalize_fx_a(fixture_file):
    code, text = call("globalize", fixture_file("FX-A"))
    assert code == 0
    assert "dim T = 4" in text


def test_globalize_reads_stdin(monkeypatch):
    _, src = call("fixtures", "FX-B")
    code, text = call("globalize", stdin=src, monkeypatch=monkeypatch)
    assert code == 0 and "dim T = 6" in text


def test_globalize_out_writes_instance(fixture_file, tmp_path):
    out = tmp_path / "glob.yaml"
    code, _ = call("globalize", fixture_file("FX-D"), "--out", str(out))
    assert code == 0
    inst = load_instance(out.read_text())
    assert inst.globalization is not None


def test_nonunital_globalize_fails_with_witness(fixture_file):
    code, text = call("globalize", fixture_file("nonunital"))
    assert code == 1
    assert "s" in text


def test_trace_on_fx_c(fixture_file):
    code, text = call("trace", "e3", fixture_file("FX-C"))
    lines = text.splitlines()
    assert lines[0] == "e2 + 2·e3 (hypotheses violated: R ≠ ⊕D_e)"
    assert lines[1] == "∉ R^α"
    assert code == 0


def test_galois_verify_and_find(fixture_file):
    code, text = call("galois", "verify", fixture_file("FX-D"))
    assert code == 0
    code, text = call("galois", "find", fixture_file("trivial-z2"))
    assert code == 1 and "no Galois" in text
    code, text = call("galois", "find", fixture_file("FX-C"))
    assert code == 2 and "precondition" in text


def test_galois_verify_without_system_is_input_error(fixture_file):
    code, text = call("galois", "verify", fixture_file("FX-A"))
    assert code == 2 and "galois_system" in text


def test_machine_report(fixture_file):
    code, text = call("characterize", fixture_file("FX-E"), "--format", "machine")
    doc = json.loads(text)
    assert code == 0
    assert doc["format"] == "pgact-report/1"
    assert doc["exit_code"] == 0 and doc["ok"]
    assert all(doc["data"]["conditions"].values())
    assert doc["data"]["consistent"] is True


def test_machine_report_on_input_error(tmp_path):
    p = tmp_path / "bad.yaml"
    p.write_text("format: pgact-instance/1\nfield: rational\n")
    code, text = call("check-action", str(p), "--format", "machine")
    doc = json.loads(text)
    assert code == 2 and not doc["ok"]
    assert doc["data"]["error"]["line"] == 1


def test_missing_file_is_input_error(tmp_path):
    code, text = call("check-action", str(tmp_path / "absent.yaml"))
    assert code == 2 and "cannot read" in text


@pytest.mark.parametrize("cmd", ["check-groupoid", "check-action", "skew-ring", "corners", "invariants",
                                 "characterize", "transfer"])
def test_commands_pass_on_fx_d(fixture_file, cmd):
    code, text = call(cmd, fixture_file("FX-D"))
    assert code == 0, text


def test_skew_ring_out_is_algebra_file(fixture_file, tmp_path):
    out = tmp_path / "skew.yaml"
    code, _ = call("skew-ring", fixture_file("FX-D"), "--out", str(out))
    assert code == 0
    assert load_algebra_file(out.read_text()).dim == 7


def test_corners_dimensions(fixture_file):
    code, text = call("corners", fixture_file("FX-A"), "--format", "machine")
    assert code == 0
    assert '"B1AB": 8' in text


def test_check_action_fails_on_broken_composition(fixture_file):
    code, _ = call("check-action", fixture_file("broken-composition"))
    assert code == 1


def test_field_override(fixture_file):
    code, text = call("globalize", fixture_file("FX-A"), "--field", "fp:3", "--format", "machine")
    assert code == 0 and json.loads(text)["ok"]
    code, text = call("globalize", fixture_file("FX-A"), "--field", "fp:4")
    assert code == 2


def test_equivalence(tmp_path):
    A = fx_d()
    Gl = build_globalization(A)
    p = tmp_path / "withglob.yaml"
    p.write_text(dump_yaml(instance_data(A, globalization=Gl)))
    code, text = call("equivalence", str(p))
    assert code == 0
    # without a supplied globalization there is nothing to compare
    q = tmp_path / "plain.yaml"
    q.write_text(dump_yaml(instance_data(A)))
    code, text = call("equivalence", str(q))
    assert code == 2


def test_transfer_enumeration_choice(tmp_path):
    from pgact.action import PartialAction
    from pgact.algebra import Algebra
    from pgact.groupoid import Groupoid
    G = Groupoid.transitive(["x", "y", "z"], ["1"], {("1", "1"): "1"})
    # a three-object groupoid acting on K^3, one coordinate per object
    R = Algebra.coordinate_ring(fx_d().algebra.field, 3)
    objs = {"x": "e1", "y": "e2", "z": "e3"}
    rows, images = {}, {}
    for g in G:
        i, _, j = g.split(":")
        rows[g] = [R.element(objs[i])]
        images[g] = [R.element(objs[i])]
    A = PartialAction.from_data(G, R, rows, images)
    p = tmp_path / "three.yaml"
    p.write_text(dump_yaml(instance_data(A)))
    code, text = call("transfer", str(p))
    assert code == 2 and "transfer condition" in text
    code, text = call("transfer", str(p), "--enumerate-xsets", "all")
    assert code == 0, text


def test_random_is_deterministic():
    a = call("random", "--seed", "5")[1]
    b = call("random", "--seed", "5")[1]
    c = call("random", "--seed", "6")[1]
    assert a == b and a != c
    inst = load_instance(a)
    assert inst.algebra.dim <= 8
    small = load_instance(call("random", "--seed", "5", "--max-dim", "3")[1])
    assert small.algebra.dim <= 3


def test_console_entry_point():
    res = subprocess.run([sys.executable, "-m", "pgact.cli", "fixtures", "list"], capture_output=True, text=True)
    assert res.returncode == 0 and "FX-A" in res.stdout


def test_characterize_alias(fixture_file):
    code, text = call("theorem53", fixture_file("FX-E"), "--format", "machine")
    assert code == 0 and json.loads(text)["command"] == "characterize"
