import io
import json
import subprocess
import sys

import pytest

from nawelch.cli import ConfigFile, InputError, parse_config_text, run, serialize_config
from nawelch.linalg import DiagCertificate
from nawelch.scalar import Scalar


def call(argv):
    out, err = io.StringIO(), io.StringIO()
    code = run(argv, out, err)
    return code, out.getvalue(), err.getvalue()


def write(tmp_path, name, data):
    p = tmp_path / name
    p.write_text(data if isinstance(data, str) else json.dumps(data))
    return str(p)


ORTHONORMAL2 = {"field": "na", "dimension": 2, "vectors": [["1", "0"], ["0", "1"]]}


def test_bounds_example():
    code, out, _ = call(["bounds", "--n", "4", "--d", "2", "--field", "c"])
    assert code == 0
    report = json.loads(out)
    assert list(report) == ["command", "input_digest", "result", "verdict"]
    res = report["result"]
    assert abs(res["welch_max"]["1"] - 1 / 3) < 1e-15
    assert res["gerzon"] == 4
    assert "0.33333333333333331" in out


def test_verify_na_orthonormal(tmp_path):
    path = write(tmp_path, "orthonormal2.json", ORTHONORMAL2)
    code, out, _ = call(["verify-na", "--config", path, "--order", "1"])
    assert code == 0
    res = json.loads(out)["result"]
    assert res["holds"] is True and res["tight"] is True


def test_verify_na_higher_order_and_valuations_as_text(tmp_path):
    path = write(tmp_path, "c.json", {"field": "na", "dimension": 2,
                                       "vectors": [["1", "0"], ["3/5", "4/5"], ["0", "1"]]})
    code, out, _ = call(["verify-na", "--config", path, "--order", "2"])
    assert code == 0
    res = json.loads(out)["result"]
    assert res["holds"] is True
    assert isinstance(res["lhs_valuation"], int)
    # orthogonal pair shows up as the valuation of zero
    code, out, _ = call(["verify-na", "--config", path, "--order", "1"])
    assert '"inf"' in out


def test_mismatched_rows_exit_2(tmp_path):
    path = write(tmp_path, "bad.json", {"field": "na", "dimension": 2, "vectors": [["1", "0"], ["1"]]})
    code, out, err = call(["verify-na", "--config", path, "--order", "1"])
    assert code == 2 and out == ""
    assert "vectors[1]" in err


def test_bad_scalar_reports_location(tmp_path):
    raw = '{"field": "na",\n "dimension": 1,\n "vectors": [["1+*t"]]}'
    path = write(tmp_path, "bad.json", raw)
    code, _, err = call(["verify-na", "--config", path])
    assert code == 2
    assert "line 3" in err and "column" in err


def test_json_syntax_error_location(tmp_path):
    path = write(tmp_path, "bad.json", '{"field": "na",\n "dimension": 1,,}')
    code, _, err = call(["verify-na", "--config", path])
    assert code == 2 and "line 2" in err


def test_input_errors_exit_2(tmp_path):
    assert call(["no-such-command"])[0] == 2
    assert call(["verify-na", "--config", str(tmp_path / "missing.json")])[0] == 2
    assert call(["bounds", "--n", "4", "--d", "2", "--field", "q"])[0] == 2
    assert call(["bounds", "--n", "1", "--d", "2", "--field", "c"])[0] == 2
    assert call(["search-classical", "--n", "2", "--d", "2", "--field", "r"])[0] == 2
    not_unit = write(tmp_path, "nu.json", {"field": "na", "dimension": 1, "vectors": [["t"], ["1"]]})
    assert call(["verify-na", "--config", not_unit])[0] == 2
    # general variant accepts it
    assert call(["verify-na", "--config", not_unit, "--general"])[0] == 0


def test_certificate_paths(tmp_path):
    # S = I for the standard basis, so P = I, D = (1, 1) certifies it
    good = dict(ORTHONORMAL2, certificate={"P": [["1", "0"], ["0", "1"]], "D": ["1", "1"]})
    code, out, _ = call(["verify-na", "--config", write(tmp_path, "g.json", good)])
    assert code == 0 and json.loads(out)["result"]["diag_note"] == "certified"
    wrong = dict(ORTHONORMAL2, certificate={"P": [["1", "0"], ["0", "1"]], "D": ["1", "2"]})
    assert call(["verify-na", "--config", write(tmp_path, "w.json", wrong)])[0] == 2
    size = dict(ORTHONORMAL2, certificate={"P": [["1"]], "D": ["1"]})
    assert call(["verify-na", "--config", write(tmp_path, "s.json", size)])[0] == 2


def test_zauner_and_equiangular(tmp_path):
    d1 = write(tmp_path, "d1.json", {"field": "na", "dimension": 1, "vectors": [["1"]]})
    assert call(["zauner-na", "--config", d1])[0] == 0
    basis = write(tmp_path, "b.json", ORTHONORMAL2)
    assert call(["zauner-na", "--config", basis])[0] == 2  # n != d^2
    pair = write(tmp_path, "p.json", {"field": "na", "dimension": 2, "vectors": [["1", "0"], ["3/5", "4/5"]]})
    assert call(["equiangular-na", "--config", pair, "--norm", "1", "--gamma-val", "0"])[0] == 0
    assert call(["equiangular-na", "--config", pair, "--norm", "1", "--gamma-val", "2"])[0] == 1
    assert call(["equiangular-na", "--config", basis, "--norm", "1", "--gamma-val", "inf"])[0] == 0
    assert call(["equiangular-na", "--config", pair, "--norm", "1", "--gamma-val", "x"])[0] == 2


def test_verify_classical(tmp_path):
    mb = {"field": "r", "dimension": 2,
          "vectors": [["1", "0"], ["-0.5", "0.8660254037844386"], ["-0.5", "-0.8660254037844386"]]}
    code, out, _ = call(["verify-classical", "--config", write(tmp_path, "mb.json", mb)])
    assert code == 0
    assert abs(json.loads(out)["result"]["coherence"] - 0.5) < 1e-12
    cpx = {"field": "c", "dimension": 2, "vectors": [["1", "0"], ["0.6", "0+0.8i"]]}
    assert call(["verify-classical", "--config", write(tmp_path, "c.json", cpx)])[0] == 0
    bad = {"field": "r", "dimension": 2, "vectors": [["1", "0+1i"]]}
    assert call(["verify-classical", "--config", write(tmp_path, "x.json", bad)])[0] == 2
    # an na file is the wrong field for this command
    assert call(["verify-classical", "--config", write(tmp_path, "na.json", ORTHONORMAL2)])[0] == 2


def test_search_na_gens_file(tmp_path):
    gens = write(tmp_path, "gens.json", ["0", "1/2"])
    code, out, _ = call(["search-na", "--d", "2", "--nmax", "2", "--gens", gens, "--gamma-val", "0"])
    assert code == 0
    configs = json.loads(out)["result"]["configs"]
    parsed = [[[Scalar.parse(x) for x in v] for v in c["vectors"]] for c in configs]
    assert [[1, 0], [Scalar.parse("3/5"), Scalar.parse("4/5")]] in parsed
    lonely = write(tmp_path, "g0.json", {"generators": ["0"]})
    assert call(["search-na", "--d", "2", "--nmax", "2", "--gens", lonely, "--gamma-val", "0"])[0] == 1
    dup = write(tmp_path, "dup.json", ["1/2", "2/4"])
    assert call(["search-na", "--d", "2", "--nmax", "2", "--gens", dup, "--gamma-val", "0"])[0] == 2


def test_search_classical_byte_identical():
    argv = ["search-classical", "--n", "3", "--d", "2", "--field", "r", "--trials", "2",
            "--steps", "200", "--seed", "5"]
    c1, o1, _ = call(argv)
    c2, o2, _ = call(argv)
    assert c1 == c2 == 0 and o1 == o2
    assert json.loads(o1)["result"]["gap"] >= -1e-9


def test_reports_byte_identical(tmp_path):
    path = write(tmp_path, "o.json", ORTHONORMAL2)
    for argv in (["verify-na", "--config", path, "--order", "2"],
                 ["bounds", "--n", "7", "--d", "3", "--field", "r", "--orders", "1,2,3"]):
        assert call(argv)[1] == call(argv)[1]


def test_config_round_trip():
    cases = [
        ConfigFile("na", 2, ((Scalar.parse("(1)/(1+t^2)"), Scalar.parse("-3*t")), (Scalar(0), Scalar(1)))),
        ConfigFile("na", 1, ((Scalar(1),),), DiagCertificate(((Scalar(2),),), (Scalar.parse("t"),))),
        ConfigFile("r", 2, ((complex(0.1), complex(-2.5e-17)),)),
        ConfigFile("c", 2, ((complex(0.1, -0.3), complex(1 / 3, 0.0)), (complex(-1, 2), 0j))),
    ]
    for cf in cases:
        text = serialize_config(cf)
        back = parse_config_text(text)
        assert back == cf
        assert serialize_config(back) == text


def test_parse_rejects_bad_certificate_shape():
    with pytest.raises(InputError):
        parse_config_text(json.dumps(dict(ORTHONORMAL2, certificate={"P": [["1", "0"]], "D": ["1"]})))


def test_console_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "nawelch", "bounds", "--n", "4", "--d", "2", "--field", "c"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["result"]["gerzon"] == 4
