import pytest
import yaml
from hypothesis import given, settings
from hypothesis import strategies as st

from pgact.errors import InstanceError
from pgact.fixtures import FIXTURES, fx_a, fx_a_hand_globalization, fx_d, fx_d_galois_system
from pgact.globalize import Globalization, build_globalization
from pgact.instance import (
    actions_equal, algebra_file, algebras_equal, dump_yaml, globalizations_equal, instance_data, load_algebra_file,
    load_instance, load_modules, schema, supplied_globalization,
)
from pgact.linalg import Field
from pgact.random_instances import random_instance
from pgact.skewring import SkewRing

SMALL = """\
format: pgact-instance/1
name: swap
field: rational
groupoid:
  elements: ["1", s]
  compose: [["1", "1", "1"], ["1", s, s], [s, "1", s], [s, s, "1"]]
  inverse: {"1": "1", s: s}
algebra:
  coordinate_ring: 2
action:
  "1": {ideal: [e1, e2], map: identity}
  s: {ideal: [e1, e2], map: [e2, e1]}
"""


def test_schema_is_draft_2020_12():
    s = schema()
    assert s["$schema"].endswith("2020-12/schema")
    assert "groupoid" in s["required"]


def test_load_small_instance():
    inst = load_instance(SMALL)
    A = inst.action
    assert inst.name == "swap"
    assert A.algebra.dim == 2 and len(A.groupoid) == 2
    R = A.algebra
    assert A.apply("s", R.element("e1")) == R.element("e2")


def test_field_override():
    inst = load_instance(SMALL, Field.prime(5))
    assert inst.field == Field.prime(5)


@pytest.mark.parametrize("name", ["FX-A", "FX-B", "FX-C", "FX-D", "FX-E", "trivial-z2", "nonunital"])
def test_fixture_round_trip(name):
    A = FIXTURES[name]()
    text = dump_yaml(instance_data(A, name=name))
    back = load_instance(text)
    assert actions_equal(A, back.action)
    assert back.name == name


def test_round_trip_with_system_and_globalization():
    A = fx_d()
    Gl = build_globalization(A)
    text = dump_yaml(instance_data(A, galois_system=fx_d_galois_system(), globalization=Gl,
                                   enumeration=Gl.enumeration))
    back = load_instance(text)
    assert back.galois_system == fx_d_galois_system()
    assert back.enumeration == Gl.enumeration
    assert globalizations_equal(supplied_globalization(back), Gl)


def test_supplied_hand_globalization_loads():
    A = fx_a()
    beta, phi = fx_a_hand_globalization()
    hand = Globalization.from_parts(A, beta, phi)
    back = supplied_globalization(load_instance(dump_yaml(instance_data(A, globalization=hand))))
    assert globalizations_equal(back, hand)


@settings(max_examples=20)
@given(st.integers(min_value=0, max_value=10**6))
def test_random_round_trip(seed):
    A = random_instance(seed).action
    assert actions_equal(A, load_instance(dump_yaml(instance_data(A))).action)


def test_skew_ring_algebra_file_round_trip():
    S = SkewRing(fx_d())
    text = dump_yaml(algebra_file(S.algebra))
    assert algebras_equal(load_algebra_file(text), S.algebra)


def test_algebra_file_rejects_wrong_format():
    with pytest.raises(InstanceError):
        load_algebra_file("format: other\n")


def _error(text):
    with pytest.raises(InstanceError) as info:
        load_instance(text)
    return info.value


def test_schema_violation_reports_path_and_line():
    err = _error(SMALL.replace("coordinate_ring: 2", "coordinate_ring: two"))
    assert err.field == "algebra.coordinate_ring"
    assert err.line == 9


def test_missing_key_reports_root():
    data = yaml.safe_load(SMALL)
    del data["action"]
    err = _error(dump_yaml(data))
    assert err.field == "<root>" and "action" in str(err)


def test_bad_scalar_reports_line():
    err = _error(SMALL.replace("map: [e2, e1]", "map: [e2, 1/0*e1]"))
    assert err.field.startswith("action.s")
    assert err.line == 12


def test_unknown_label_reports_field():
    err = _error(SMALL.replace("ideal: [e1, e2], map: [e2, e1]", "ideal: [e1, e7], map: [e2, e1]"))
    assert err.field.startswith("action.s")


def test_bad_field_name():
    err = _error(SMALL.replace("field: rational", "field: fp:4"))
    assert err.field == "field"


def test_duplicate_product():
    err = _error(SMALL.replace('[s, s, "1"]', '[s, s, "1"], [s, s, s]'))
    assert err.field.startswith("groupoid.compose")


def test_invalid_yaml():
    err = _error("format: [unclosed\n")
    assert err.line is not None


def test_modules_are_keyed_by_skew_labels():
    data = yaml.safe_load(SMALL)
    data["modules"] = [{"name": "V", "dim": 1, "action": {"e1|1": [[1]], "e2|1": [[0]]}}]
    inst = load_instance(dump_yaml(data))
    ring = SkewRing(inst.action)
    (M,) = load_modules(inst, ring)
    assert M.name == "V" and len(M.action) == ring.dim
    data["modules"][0]["action"] = {"nope": [[1]]}
    inst = load_instance(dump_yaml(data))
    with pytest.raises(InstanceError) as info:
        load_modules(inst, ring)
    assert "nope" in str(info.value)
