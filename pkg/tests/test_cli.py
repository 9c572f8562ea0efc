import io
import json
import subprocess
import sys

import jsonschema
import pytest

from prational.cli import SCHEMAS, run


def call(*argv):
    out = io.StringIO()
    code = run(list(argv), out=out)
    return code, out.getvalue()


def json_lines(text):
    return [json.loads(line) for line in text.splitlines() if line.startswith("{")]


def test_quad_text_and_json():
    code, text = call("quad", "-d", "69", "-p", "3")
    assert code == 0
    assert text.splitlines()[0] == "rk(T)=1 K is not 3-rational"
    (v,) = json_lines(text)
    jsonschema.validate(v, SCHEMAS["verdict"])
    assert v["rk_T"] == 1 and v["invariants"] == [3, 3]


def test_quad_special_case_and_negative_d():
    code, text = call("quad", "-d", "-3", "-p", "3")
    assert code == 0 and "K is 3-rational" in text
    code, text = call("quad", "-d", "-3", "-p", "3", "--method", "auto", "--format", "json")
    v = json.loads(text)
    jsonschema.validate(v, SCHEMAS["verdict"])
    assert v["rational"] and v["method"] == "mirror"


def test_exit_codes(capsys):
    assert call("nonsense")[0] == 1
    assert call("quad", "-d", "69")[0] == 1
    assert call("quad", "-d", "69", "-p", "4")[0] == 1
    assert call("quad", "-d", "12", "-p", "3")[0] == 1
    assert call("quad", "-d", "-6", "-p", "3", "--method", "log-test")[0] == 2
    assert call("compositum", "-d", "2,3", "-p", "2")[0] == 2
    assert "usage" in capsys.readouterr().err


def test_quad_range():
    code, text = call("quad-range", "-d", "2", "--p-max", "31", "--format", "json")
    rows = json_lines(text)
    for r in rows:
        jsonschema.validate(r, SCHEMAS["verdict"])
    bad = [r["p"] for r in rows if not r["rational"]]
    assert bad == [13, 31]


def test_compositum():
    code, text = call("compositum", "-d", "-2,-5,7,17,-19,59", "-p", "3")
    assert code == 0
    (v,) = json_lines(text)
    jsonschema.validate(v, SCHEMAS["verdict"])
    assert v["rational"]


def test_density_json():
    code, text = call("density", "--sign", "imag", "--max", "500", "--format", "json")
    v = json.loads(text)
    jsonschema.validate(v, SCHEMAS["density"])


def test_greenberg_json_and_jobs():
    args = ["greenberg", "-t", "3", "--pool-max", "200", "--iters", "3000", "--seed", "5", "--format", "json"]
    code, one = call(*args)
    code2, two = call(*args, "--jobs", "2")
    assert code == code2 == 0 and one == two and one
    for r in json_lines(one):
        jsonschema.validate(r, SCHEMAS["tuple"])


def test_verify_table_formats():
    code, text = call("verify-table", "-d", "70,59,-118,-19,17,-14", "--format", "json")
    rows = json_lines(text)
    for r in rows[:-1]:
        jsonschema.validate(r, SCHEMAS["table_row"])
    jsonschema.validate(rows[-1], SCHEMAS["structure"])
    assert rows[-1]["structure"] == "(Z/9Z)^3 x (Z/3Z)^6"
    code, text = call("verify-table", "-d", "110,170,161,38,14", "--format", "csv")
    lines = text.splitlines()
    assert lines[0] == "d,h_mod_9,h_3,regulator"
    assert lines[1] == '14,1,1,"Mod(1,3)"'
    assert len(lines) == 32


def test_scan_subcommands_and_jobs():
    code, a = call("scan-allp", "--min", "1", "--max", "150", "--format", "json")
    code, b = call("scan-allp", "--min", "1", "--max", "150", "--format", "json", "--jobs", "2")
    assert a == b
    rows = json_lines(a)
    for r in rows:
        jsonschema.validate(r, SCHEMAS["allp"])
    assert len(rows) == 32
    code, text = call("scan-allp", "--min", "1", "--max", "150")
    assert text.splitlines()[0].endswith("-139,-149]")
    code, a = call("scan-incomplete", "--d-max", "400", "--p-min", "3", "--p-max", "17", "--format", "json")
    code, b = call("scan-incomplete", "--d-max", "400", "--p-min", "3", "--p-max", "17", "--format", "json", "--jobs", "2")
    assert a == b
    for r in json_lines(a):
        jsonschema.validate(r, SCHEMAS["incomplete"])


def test_console_entry_point():
    r = subprocess.run([sys.executable, "-m", "prational", "quad", "-d", "-161", "-p", "2"],
                       capture_output=True, text=True)
    assert r.returncode == 0
    assert r.stdout.startswith("rk(T)=2 K is not 2-rational")
