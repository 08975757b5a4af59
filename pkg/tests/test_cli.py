import json
import math

import pytest

from polymorse import cli
from polymorse.cli import main


def write(tmp_path, name, doc):
    p = tmp_path / name
    p.write_text(json.dumps(doc))
    return str(p)


def read_json(path):
    with open(path) as fh:
        return json.load(fh)


def test_cyclic_census_json(tmp_path, capsys):
    out = tmp_path / "c.json"
    assert main(["cyclic", "--lengths", "1,1,1,1,1", "--json", str(out)]) == 0
    doc = read_json(out)
    assert len(doc["configurations"]) == 14
    assert sorted(c["planar_index"] for c in doc["configurations"])[:2] == [0, 0]
    assert "14 cyclic configurations" in capsys.readouterr().out


def test_json_and_svg_are_byte_stable(tmp_path):
    for k in (1, 2):
        assert main(["cyclic", "--lengths", "3,4,5,6.5", "--json", str(tmp_path / f"{k}.json"),
                     "--svg", str(tmp_path / f"svg{k}")]) == 0
    assert (tmp_path / "1.json").read_bytes() == (tmp_path / "2.json").read_bytes()
    names = sorted(p.name for p in (tmp_path / "svg1").iterdir())
    assert names and names == sorted(p.name for p in (tmp_path / "svg2").iterdir())
    for n in names:
        assert (tmp_path / "svg1" / n).read_bytes() == (tmp_path / "svg2" / n).read_bytes()


def test_morse_numeric_agrees(tmp_path):
    out = tmp_path / "m.json"
    assert main(["morse", "--lengths", "1,1,1,1,3.99", "--numeric", "--json", str(out)]) == 0
    assert read_json(out)["mismatches"] == 0


def test_genericity_exit_code(capsys):
    assert main(["suite", "--lengths", "3,4,5,6"]) == 2
    assert main(["betti", "--lengths", "3,4,5,6"]) == 2


def test_bad_input_exit_code(tmp_path):
    assert main(["betti", "--lengths", "1,2,x"]) == 1
    assert main(["zigzag", "--lengths", "1,1,1,1,1"]) == 1
    assert main(["render", "--config", str(tmp_path / "missing.json")]) == 1


def test_betti_output(tmp_path):
    out = tmp_path / "b.json"
    assert main(["betti", "--lengths", "1,1,1,1,1,1,1", "--json", str(out)]) == 0
    assert read_json(out)["decorated"] == [1, 8, 29, 29, 8, 1]


def test_swap_and_sw(tmp_path, capsys):
    cfg = write(tmp_path, "p.json", {"thetas": [2 * math.pi / 5] * 5})
    assert main(["swap", "--config", cfg, "--vertex", "2"]) == 0
    out = tmp_path / "sw.json"
    assert main(["sw", "--config", cfg, "--json", str(out)]) == 0
    doc = read_json(out)
    assert doc["invariant"] and doc["residual"] < 1e-10
    assert main(["swap", "--config", cfg, "--vertex", "9"]) == 1


def test_zigzag_svg_has_guide_lines(tmp_path):
    d = tmp_path / "z"
    assert main(["zigzag", "--lengths", "3,4,5,6.5", "--svg", str(d)]) == 0
    files = sorted(d.iterdir())
    assert len(files) == 2
    for f in files:
        assert f.read_text().count('stroke-dasharray="5 3"') == 2


def test_render_pentagram_annotates_winding(tmp_path):
    cfg = write(tmp_path, "star.json", {"thetas": [2 * math.pi / 5] * 5})
    out = tmp_path / "star.svg"
    assert main(["render", "--config", cfg, "--out", str(out)]) == 0
    text = out.read_text()
    assert text.startswith("<?xml") and "omega=2" in text and "mu=" in text


def test_deform_preset(tmp_path):
    out = tmp_path / "d.json"
    assert main(["deform", "--preset", "heptagon-pentagram", "--steps", "2000", "--json", str(out)]) == 0
    doc = read_json(out)
    assert doc["consistent"] and doc["end_index"] == doc["start_index"] - 2


def test_deform_crossing_exit_code(tmp_path):
    a = math.pi / 3
    src = write(tmp_path, "s.json", {"thetas": [-a] + [a] * 4})
    dst = write(tmp_path, "t.json", {"thetas": [-1.5] + [(math.pi + 1.5) / 4] * 4})
    assert main(["deform", "--from", src, "--to", dst, "--steps", "500"]) == 4


def test_suite_perfect_quadrilateral(tmp_path):
    out = tmp_path / "s.json"
    assert main(["suite", "--lengths", "3,4,5,6.5", "--trials", "300", "--json", str(out)]) == 0
    doc = read_json(out)
    assert doc["summary"]["verdict"] == "PERFECT" and doc["summary"]["zigzag"] == 2
    assert all(v in (0, True) or k.startswith("search_") for k, v in doc["checks"].items())


def test_suite_reports_mismatch(monkeypatch, tmp_path):
    real = cli.find_critical_points

    def lossy(L, trials, seed):
        R = real(L, trials=trials, seed=seed)
        drop = R.by_class("NonPlanar")[-1]
        R.points = [p for p in R.points if p is not drop]
        return R

    monkeypatch.setattr(cli, "find_critical_points", lossy)
    out = tmp_path / "v.json"
    code = main(["verify-perfect", "--lengths", "1,1,1,1,3.99", "--trials", "3000", "--json", str(out)])
    doc = read_json(out)
    assert code == 3 and doc["verdict"] == "MISMATCH" and doc["deficits"]
