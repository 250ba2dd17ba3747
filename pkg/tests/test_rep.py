import json

import numpy as np
import pytest

from primstab.constructions import boost, fuchsian_coxeter
from primstab.rep import InputError, RepF2, load_fixture, load_rep, rep_from_dict


def test_fixtures_load(schottky, reducible):
    assert schottky.d == 3 and schottky.coxeter is not None
    assert reducible.coxeter is None


def test_coxeter_only_input():
    x, y, z = fuchsian_coxeter()
    rep = rep_from_dict({"d": 3, "coxeter": {"x": x.tolist(), "y": y.tolist(), "z": z.tolist()}})
    assert np.allclose(rep.A, x @ y) and np.allclose(rep.B, y @ z)


def test_round_trip(schottky):
    again = rep_from_dict(json.loads(json.dumps(schottky.to_dict())))
    assert np.array_equal(again.A, schottky.A) and np.array_equal(again.B, schottky.B)


@pytest.mark.parametrize("data, msg", [
    ([], "top level"),
    ({"d": 3}, "need 'generators'"),
    ({"d": 1, "generators": {}}, "d: expected"),
    ({"generators": {"A": [[1, 0], [0, 1]]}}, "keys A, B"),
    ({"generators": {"A": [[1, 0], [0, 1, 0]], "B": [[1]]}}, "row 1 has 3 entries"),
    ({"generators": {"A": [[1, 0, "x"], [0, 1, 0], [0, 0, 1]], "B": [[1]]}}, r"entry \(0,2\)"),
])
def test_malformed_inputs(data, msg):
    with pytest.raises(InputError, match=msg):
        rep_from_dict(data)


def test_form_violation_names_entry():
    A = boost(3, 1.0)
    A[0, 1] = 0.01
    with pytest.raises(InputError, match=r"generators.A: .*\[\d,\d\]"):
        rep_from_dict({"generators": {"A": A.tolist(), "B": boost(3, 2.0).tolist()}})


def test_dimension_mismatch():
    with pytest.raises(InputError, match="does not match d"):
        rep_from_dict({"d": 2, "generators": {"A": boost(3, 1.0).tolist(), "B": boost(3, 1.0).tolist()}})


def test_coxeter_mismatch():
    x, y, z = fuchsian_coxeter()
    data = {"generators": {"A": (x @ y).tolist(), "B": (x @ z).tolist()},
            "coxeter": {"x": x.tolist(), "y": y.tolist(), "z": z.tolist()}}
    with pytest.raises(InputError, match="Coxeter product"):
        rep_from_dict(data)


def test_malformed_json(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text('{"d": 3,', encoding="utf-8")
    with pytest.raises(InputError, match="malformed JSON at line 1"):
        load_rep(p)


def test_image_and_letters(schottky):
    L = schottky.letters()
    assert np.allclose(schottky.image("aA"), np.eye(4))
    assert np.allclose(L["c"] @ L["C"], np.eye(4), atol=1e-9 * np.max(np.abs(L["C"])) ** 2)
    assert isinstance(load_fixture("schottky.json"), RepF2)
