import json
import subprocess
import sys

import numpy as np
import pytest

from topodist.cli import main
from topodist.io import read_report, write_features


@pytest.fixture
def corpus(tmp_path):
    rng = np.random.default_rng(0)
    write_features(rng.standard_normal((40, 3)), tmp_path / "a.tdf")
    write_features(rng.standard_normal((40, 3)) + 1.0, tmp_path / "b.tdf")
    write_features(rng.standard_normal((41, 3)), tmp_path / "c.tdf")
    write_features(rng.standard_normal((300, 2)), tmp_path / "big.tdf")
    write_features(np.full((10, 5), 0.2), tmp_path / "uniform.csv")
    (tmp_path / "bad.tdf").write_bytes(b"NOPE" + b"\0" * 20)
    return tmp_path


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    return code, capsys.readouterr()


def test_td_self_is_zero(corpus, capsys):
    code, out = run(capsys, "td", "--a", corpus / "a.tdf", "--b", corpus / "a.tdf", "--out", corpus / "r.json")
    assert code == 0
    assert out.out.strip() == "td 0.0"
    doc = read_report(corpus / "r.json")
    assert doc["payload"]["value"] == 0.0
    meta = doc["payload"]["metadata"]
    assert meta["a"]["n"] == 40 and meta["a"]["m"] == 3 and meta["seed"] == 0


def test_fid_on_generated_corpora(tmp_path, capsys):
    g1, g2 = tmp_path / "g1.tdf", tmp_path / "g2.tdf"
    assert run(capsys, "generate", "gaussian", "--n", 5000, "--dim", 4, "--seed", 1, "--out", g1)[0] == 0
    assert run(capsys, "generate", "gaussian", "--n", 5000, "--dim", 4, "--shift", 1, "--seed", 2, "--out", g2)[0] == 0
    code, out = run(capsys, "fid", "--a", g1, "--b", g2, "--out", tmp_path / "r.json")
    assert code == 0
    assert read_report(tmp_path / "r.json")["payload"]["value"] == pytest.approx(1.0, rel=0.05)


def test_is_uniform(corpus, capsys):
    code, out = run(capsys, "is", "--probs", corpus / "uniform.csv")
    assert code == 0
    assert float(out.out.split()[1]) == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("cmd", ["kid", "gs", "bottleneck", "wasserstein"])
def test_other_scores_run(corpus, capsys, cmd):
    code, out = run(capsys, cmd, "--a", corpus / "a.tdf", "--b", corpus / "b.tdf", "--gs-points", 20, "--gs-subsets", 2)
    assert code == 0
    assert out.out.startswith(cmd)


def test_diagram_files_feed_bottleneck(corpus, capsys):
    for name in ("a", "b"):
        code, _ = run(capsys, "diagram", "--a", corpus / f"{name}.tdf", "--hom-dim", 1, "--out", corpus / f"{name}.json")
        assert code == 0
    code, out = run(capsys, "bottleneck", "--a", corpus / "a.json", "--b", corpus / "b.json")
    direct = run(capsys, "bottleneck", "--a", corpus / "a.tdf", "--b", corpus / "b.tdf", "--hom-dim", 1)[1]
    assert code == 0 and out.out == direct.out


@pytest.mark.parametrize(
    "argv,expected",
    [
        (["td", "--a", "bad.tdf", "--b", "a.tdf"], 2),
        (["td", "--a", "missing.tdf", "--b", "a.tdf"], 2),
        (["td", "--a", "a.tdf", "--b", "c.tdf"], 3),
        (["kid", "--a", "a.tdf", "--b", "big.tdf"], 3),
        (["is", "--probs", "uniform.csv", "--splits", "50"], 3),
        (["td", "--a", "a.tdf", "--b", "a.tdf", "--inf-factor", "0.5"], 3),
        (["bottleneck", "--a", "big.tdf", "--b", "big.tdf", "--hom-dim", "1"], 4),
        (["diagram", "--a", "big.tdf", "--hom-dim", "1", "--out", "d.json"], 4),
    ],
)
def test_exit_codes(corpus, capsys, argv, expected):
    argv = [str(corpus / a) if a.endswith((".tdf", ".csv", ".json")) else a for a in argv]
    code, out = run(capsys, *argv)
    assert code == expected
    assert out.err.startswith("error [")


def test_usage_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["td", "--a", "x.tdf"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["sweep"])
    assert exc.value.code == 2


def test_matrix_identical_groups(corpus, capsys):
    a = corpus / "a.tdf"
    code, out = run(capsys, "matrix", "--a", a, a, "--b", a, "--out", corpus / "m.csv", "--summary", corpus / "s.json")
    assert code == 0
    rows = [line.split(",") for line in (corpus / "m.csv").read_text().splitlines()]
    assert rows[0] == ["group", "A1", "A2", "B1"]
    assert all(float(v) == 0.0 for row in rows[1:] for v in row[1:])
    assert read_report(corpus / "s.json")["payload"]["metadata"]["summary"]["cross_median"] == 0.0


def test_matrix_needs_groups(corpus, capsys):
    code, _ = run(capsys, "matrix", "--a", corpus / "a.tdf", "--out", corpus / "m.csv")
    assert code == 2


def test_sweep_writes_csv(tmp_path, capsys):
    out = tmp_path / "s.csv"
    code, printed = run(capsys, "sweep", "--groups", 3, "--group-size", 60, "--dim", 4, "--out", out)
    assert code == 0
    lines = out.read_text().splitlines()
    assert lines[0] == "severity,mean,std" and len(lines) == 6
    assert float(printed.out.split()[-1]) > 0.9


def test_sweep_rejects_single_level(tmp_path, capsys):
    code, _ = run(capsys, "sweep", "--severities", "0.1", "--groups", 2, "--group-size", 10, "--out", tmp_path / "s.csv")
    assert code == 3


def test_generate_paired(tmp_path, capsys):
    code, _ = run(capsys, "generate", "paired", "--groups", 2, "--n", 30, "--dim", 3, "--format", "csv", "--out", tmp_path / "g")
    assert code == 0
    assert sorted(p.name for p in (tmp_path / "g").iterdir()) == ["A1.csv", "A2.csv", "B1.csv", "B2.csv"]


def test_manipulate(tmp_path, capsys):
    code, _ = run(capsys, "manipulate", "--groups", 1, "--group-size", 8, "--height", 8, "--width", 8, "--out", tmp_path / "m.csv")
    assert code == 0
    assert len((tmp_path / "m.csv").read_text().splitlines()) == 1 + 3 * 3


def test_console_script():
    out = subprocess.run([sys.executable, "-m", "topodist.cli", "--version"], capture_output=True, text=True)
    assert out.returncode == 0 and "topodist" in out.stdout


def test_report_payload_excludes_wall_time(corpus, capsys):
    run(capsys, "td", "--a", corpus / "a.tdf", "--b", corpus / "b.tdf", "--out", corpus / "r.json")
    doc = json.loads((corpus / "r.json").read_text())
    assert "wall_time" not in json.dumps(doc["payload"])
    assert doc["runtime"]["wall_time_s"] >= 0
