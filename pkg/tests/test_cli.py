import pytest

from listrecolor import cli
from listrecolor.catalog import CATALOGS
from listrecolor.recolor import ExtensionError


@pytest.fixture
def bundle(tmp_path):
    d = tmp_path / "inst"
    assert cli.main(["gen", "--family", "girth10subdiv", "--n", "30", "--seed", "3", "--out", str(d)]) == 0
    return d


@pytest.fixture
def planar_bundle(tmp_path):
    d = tmp_path / "planar"
    assert cli.main(["gen", "--family", "grid5", "--n", "30", "--seed", "1", "--out", str(d)]) == 0
    return d


def test_check_class(bundle, planar_bundle, capsys):
    assert cli.main(["check-class", "--bundle", str(bundle), "--theorem", "mad4"]) == 0
    assert "in class mad4: yes" in capsys.readouterr().out
    assert cli.main(["check-class", "--bundle", str(planar_bundle), "--theorem", "planar6"]) == 0


def test_check_class_rejects(tmp_path):
    g = tmp_path / "k4.txt"
    g.write_text("graph 4 6\ne 0 1\ne 0 2\ne 0 3\ne 1 2\ne 1 3\ne 2 3\n")
    assert cli.main(["check-class", "--graph", str(g), "--theorem", "mad4"]) == cli.EXIT_CLASS


def test_reconfigure_then_verify(bundle, tmp_path, capsys):
    seq = tmp_path / "seq.txt"
    counts = tmp_path / "counts.csv"
    assert cli.main(["reconfigure", "--bundle", str(bundle), "--theorem", "mad4", "--out", str(seq), "--counts", str(counts)]) == 0
    assert seq.read_text().startswith("seq k=18\n")
    assert counts.read_text().startswith("vertex")
    capsys.readouterr()
    assert cli.main(["verify", "--bundle", str(bundle), "--seq", str(seq)]) == 0
    assert capsys.readouterr().out.startswith("ok:")


def test_reconfigure_is_byte_identical(bundle, tmp_path):
    a, b = tmp_path / "a.txt", tmp_path / "b.txt"
    for out in (a, b):
        assert cli.main(["reconfigure", "--bundle", str(bundle), "--theorem", "mad4", "--out", str(out)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_truncated_sequence_fails_verify(bundle, tmp_path, capsys):
    seq = tmp_path / "seq.txt"
    cli.main(["reconfigure", "--bundle", str(bundle), "--theorem", "mad4", "--out", str(seq)])
    lines = seq.read_text().splitlines()
    seq.write_text("\n".join(lines[:-1]) + "\n")
    capsys.readouterr()
    assert cli.main(["verify", "--bundle", str(bundle), "--seq", str(seq)]) == cli.EXIT_VERIFY
    assert "FAIL at step" in capsys.readouterr().out


def test_parse_error_exit(bundle, tmp_path):
    bad = tmp_path / "bad.txt"
    bad.write_text("seq k=18\ns one 2\n")
    assert cli.main(["verify", "--bundle", str(bundle), "--seq", str(bad)]) == cli.EXIT_PARSE
    assert cli.main(["check-class", "--graph", str(tmp_path / "missing.txt"), "--theorem", "mad4"]) == cli.EXIT_PARSE


def test_wrong_class_exit(bundle):
    # 4-lists are too short for the planar theorem, and the graph may have no rotation
    assert cli.main(["reconfigure", "--bundle", str(bundle), "--theorem", "planar6", "--out", "-"]) == cli.EXIT_CLASS


def test_no_configuration_exit(bundle, tmp_path, monkeypatch):
    monkeypatch.setitem(CATALOGS, "mad4", [])
    art = tmp_path / "art"
    code = cli.main(["reconfigure", "--bundle", str(bundle), "--theorem", "mad4", "--out", "-", "--artifact", str(art)])
    assert code == cli.EXIT_NO_CONFIG
    assert (art / "remainder.txt").exists()
    assert (art / "audit.txt").read_text().count("sum of initial charges") == 1


def test_cap_exit(bundle, monkeypatch):
    def boom(*a, **kw):
        raise ExtensionError("no extension within caps")

    monkeypatch.setattr(cli, "reconfigure", boom)
    assert cli.main(["reconfigure", "--bundle", str(bundle), "--theorem", "mad4", "--out", "-"]) == cli.EXIT_CAP


def test_audit(planar_bundle, tmp_path):
    out, table = tmp_path / "audit.txt", tmp_path / "audit.csv"
    code = cli.main(["audit", "--bundle", str(planar_bundle), "--rules", "planar", "--explain", "--out", str(out), "--csv", str(table)])
    assert code == 0
    text = out.read_text()
    assert "sum of initial charges: -12" in text
    assert "unexplained violations: 0" in text
    assert table.read_text().startswith("element,")


def test_oracle(tmp_path, capsys):
    d = tmp_path / "tiny"
    d.mkdir()
    (d / "graph.txt").write_text("graph 2 1\ne 0 1\n")
    (d / "lists.txt").write_text("L 0: 0 1 2\nL 1: 0 1 2\n")
    (d / "alpha.txt").write_text("c 0 0\nc 1 1\n")
    (d / "beta.txt").write_text("c 0 1\nc 1 0\n")
    assert cli.main(["oracle", "--bundle", str(d), "--mode", "dist"]) == 0
    assert "distance: 3" in capsys.readouterr().out
    wit = tmp_path / "w.txt"
    assert cli.main(["oracle", "--bundle", str(d), "--mode", "kgood", "--k", "2", "--out", str(wit)]) == 0
    assert "2-good: yes" in capsys.readouterr().out
    assert cli.main(["verify", "--bundle", str(d), "--seq", str(wit)]) == 0
    assert cli.main(["oracle", "--bundle", str(d), "--mode", "kgood"]) == cli.EXIT_PARSE


def test_corpus_deterministic(tmp_path, capsys):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for out in (a, b):
        assert cli.main(["corpus", "--theorem", "mad4", "--count", "6", "--max-n", "30", "--out", str(out)]) == 0
    assert a.read_bytes() == b.read_bytes()
    rows = a.read_text().splitlines()
    assert len(rows) == 7 and "wall_time" not in rows[0]
    assert cli.main(["corpus", "--theorem", "planar6", "--count", "2", "--timing", "--out", str(a)]) == 0
    assert "wall_time" in a.read_text().splitlines()[0]
