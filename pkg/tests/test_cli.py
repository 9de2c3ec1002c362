"""Command-line interface: flags, config merging, CSV shape, exit codes."""

import math

import numpy as np
import pytest

from mxepi.cli import main
from mxepi.multiplex import (
    MultiplexGraph,
    asn,
    empirical_vector_distribution,
    load_edgelist,
    write_edgelist,
)
from mxepi.netgen import LayerSpec, independent_multiplex
from mxepi.theory import threshold_lambda_a


@pytest.fixture()
def graph_file(tmp_path):
    g = independent_multiplex(LayerSpec("er", 250, 4.0), LayerSpec("er", 250, 3.0), seed=12)
    path = tmp_path / "g.mx"
    write_edgelist(g, path)
    return path


def run(args, capsys):
    code = main([str(a) for a in args])
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_generate_writes_loadable_file_and_metrics(tmp_path, capsys):
    out = tmp_path / "net.mx"
    code, stdout, _ = run(
        ["generate", "--kind", "er-er", "--n", "300", "--ka", "4", "--kb", "3",
         "--seed", "7", "--out", out],
        capsys,
    )
    assert code == 0
    g = load_edgelist(out)
    assert g.n == 300
    line = stdout.strip()
    assert line.startswith("n=300 ka=")
    # file header carries the rng stamp and the resolved command
    head = out.read_text().splitlines()[:3]
    assert any(h.startswith("#command: mxepi generate") for h in head)
    assert "#rng philox seed=7" in head


def test_generate_same_seed_same_bytes(tmp_path, capsys):
    paths = [tmp_path / "a.mx", tmp_path / "b.mx"]
    for p in paths:
        code, *_ = run(
            ["generate", "--kind", "sf-sf", "--n", "200", "--ka", "4", "--kb", "4",
             "--seed", "3", "--out", p],
            capsys,
        )
        assert code == 0
    assert paths[0].read_bytes() == paths[1].read_bytes()


def test_generate_asn_one_gives_identical_layers(tmp_path, capsys):
    out = tmp_path / "same.mx"
    code, stdout, _ = run(
        ["generate", "--kind", "er-er", "--n", "300", "--ka", "4", "--kb", "4",
         "--asn", "1", "--seed", "5", "--out", out],
        capsys,
    )
    assert code == 0
    g = load_edgelist(out)
    assert g.edges_a == g.edges_b
    assert asn(g) == pytest.approx(1.0)


def test_generate_infeasible_asn_exits_2(tmp_path, capsys):
    code, _, stderr = run(
        ["generate", "--kind", "er-er", "--n", "300", "--ka", "4", "--kb", "6",
         "--asn", "1", "--seed", "11", "--out", tmp_path / "x.mx"],
        capsys,
    )
    assert code == 2
    assert "infeasible" in stderr


def test_generate_ddc_off_target_warns_but_succeeds(tmp_path, capsys):
    out = tmp_path / "dd.mx"
    code, stdout, stderr = run(
        ["generate", "--kind", "er-er", "--n", "150", "--ka", "3", "--kb", "7",
         "--ddc", "1.0", "--seed", "11", "--out", out],
        capsys,
    )
    assert code == 0
    assert "warning" in stderr
    assert out.exists()


def test_generate_rejects_asn_plus_ddc(tmp_path, capsys):
    code, _, stderr = run(
        ["generate", "--kind", "er-er", "--n", "100", "--ka", "4", "--kb", "4",
         "--asn", "0.5", "--ddc", "0.1", "--out", tmp_path / "x.mx"],
        capsys,
    )
    assert code == 1
    assert "error" in stderr


def test_metrics_matches_generate_report(tmp_path, capsys):
    out = tmp_path / "net.mx"
    _, gen_line, _ = run(
        ["generate", "--kind", "er-er", "--n", "200", "--ka", "5", "--kb", "4",
         "--seed", "9", "--out", out],
        capsys,
    )
    code, met_line, _ = run(["metrics", out], capsys)
    assert code == 0
    assert met_line == gen_line


def test_threshold_single_layer_prints_critical_rate(tmp_path, capsys):
    g = independent_multiplex(LayerSpec("er", 400, 4.0), LayerSpec("er", 400, 2.0), seed=2)
    lone = MultiplexGraph(n=g.n, edges_a=g.edges_a, edges_b=frozenset())
    path = tmp_path / "single.mx"
    write_edgelist(lone, path)
    code, stdout, _ = run(["threshold", path, "--out", tmp_path / "t.csv"], capsys)
    assert code == 0
    value = float(stdout.strip().split("=")[1])
    expected = threshold_lambda_a(empirical_vector_distribution(lone), 0.0)
    assert value == pytest.approx(expected, abs=1e-9)


def test_threshold_curve_csv_shape(graph_file, tmp_path, capsys):
    out = tmp_path / "curve.csv"
    code, *_ = run(["threshold", graph_file, "--grid-step", "0.05", "--out", out], capsys)
    assert code == 0
    lines = out.read_text().splitlines()
    assert lines[0].startswith("# command: mxepi threshold")
    assert lines[1] == "lambda_a,lambda_b"
    rows = [tuple(map(float, ln.split(","))) for ln in lines[2:]]
    assert len(rows) >= 3
    # swept in ascending lambda_a and ends on the lambda_a axis
    assert [la for la, _ in rows] == sorted(la for la, _ in rows)
    assert rows[0][0] == 0.0 and rows[-1][1] == 0.0


def test_sweep_bitwise_identical_across_workers(graph_file, tmp_path, capsys):
    outs = [tmp_path / "w1.csv", tmp_path / "w3.csv"]
    for out, workers in zip(outs, ("1", "3")):
        code, *_ = run(
            ["sweep", graph_file, "--steps", "3", "--max-lambda", "0.4",
             "--realizations", "24", "--seed", "5", "--workers", workers, "--out", out],
            capsys,
        )
        assert code == 0
    assert outs[0].read_bytes() == outs[1].read_bytes()


def test_sweep_header_reruns_identically(graph_file, tmp_path, capsys, monkeypatch):
    monkeypatch.chdir(tmp_path)
    first = tmp_path / "first.csv"
    run(
        ["sweep", graph_file, "--steps", "2", "--max-lambda", "0.3",
         "--realizations", "10", "--seed", "8", "--out", first],
        capsys,
    )
    header = first.read_text().splitlines()[0]
    tokens = header.removeprefix("# command: mxepi ").split()
    rerun = tmp_path / "rerun.csv"
    code, *_ = run(tokens + ["--out", str(rerun)], capsys)
    assert code == 0
    assert rerun.read_bytes() == first.read_bytes()


def test_sweep_theory_only_skips_simulation(graph_file, tmp_path, capsys):
    out = tmp_path / "theory.csv"
    code, *_ = run(
        ["sweep", graph_file, "--steps", "4", "--theory-only", "--out", out], capsys
    )
    assert code == 0
    for line in out.read_text().splitlines()[2:]:
        cells = line.split(",")
        assert cells[3] == "nan" and cells[-1] == "0"


def test_sweep_fixed_sections_restrict_lambda_a(graph_file, tmp_path, capsys):
    out = tmp_path / "sections.csv"
    code, *_ = run(
        ["sweep", graph_file, "--steps", "4", "--fix-lambda-a=0.1,0.2",
         "--theory-only", "--out", out],
        capsys,
    )
    assert code == 0
    las = {line.split(",")[0] for line in out.read_text().splitlines()[2:]}
    assert las == {"0.1", "0.2"}


def test_config_file_fills_gaps_flags_override(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("kind=er-er\nn=250\nka=4\nkb=4\n")
    out = tmp_path / "net.mx"
    code, stdout, _ = run(
        ["generate", "--config", cfg, "--ka", "5", "--seed", "2", "--out", out],
        capsys,
    )
    assert code == 0
    header = out.read_text().splitlines()[1]
    assert "--ka 5" in header and "--kb 4" in header and "--n 250" in header


def test_config_unknown_key_rejected(tmp_path, capsys):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("bogus=1\n")
    code, _, stderr = run(["metrics", "whatever.mx", "--config", cfg], capsys)
    assert code == 1
    assert "unknown config key" in stderr


def test_missing_graph_file_is_input_error(capsys):
    code, _, stderr = run(["sweep", "missing.mx"], capsys)
    assert code == 1
    assert "cannot read graph file" in stderr


def test_unknown_flag_is_input_error(capsys):
    code, _, stderr = run(["threshold", "g.mx", "--frobnicate"], capsys)
    assert code == 1


def test_study_asn_rows_and_columns(tmp_path, capsys):
    out = tmp_path / "asn.csv"
    code, *_ = run(
        ["study", "asn", "--kind", "er-er", "--n", "200", "--ka", "4", "--kb", "4",
         "--targets", "0,0.5,1", "--rates", "0.2", "--realizations", "16",
         "--seed", "3", "--out", out],
        capsys,
    )
    assert code == 0
    lines = out.read_text().splitlines()
    assert lines[1] == "target,achieved,status,diag_threshold,s_theory_0.2,s_sim_0.2"
    rows = [ln.split(",") for ln in lines[2:]]
    assert len(rows) == 3
    assert all(r[2] == "ok" for r in rows)
    for r in rows:
        assert abs(float(r[1]) - float(r[0])) <= 0.01
        assert 0.0 < float(r[3]) < 1.0


def test_study_marks_infeasible_targets(tmp_path, capsys):
    out = tmp_path / "asn.csv"
    code, *_ = run(
        ["study", "asn", "--kind", "er-er", "--n", "200", "--ka", "4", "--kb", "8",
         "--targets", "0,1", "--rates", "0.2", "--realizations", "16",
         "--seed", "3", "--out", out],
        capsys,
    )
    assert code == 0
    rows = [ln.split(",") for ln in out.read_text().splitlines()[2:]]
    assert rows[0][2] == "ok"
    assert rows[1][2] == "infeasible"
    assert rows[1][3] == "nan" and rows[1][-1] == "nan"


def test_study_ddc_thresholds_move_with_target(tmp_path, capsys):
    out = tmp_path / "ddc.csv"
    code, *_ = run(
        ["study", "ddc", "--kind", "er-er", "--n", "200", "--ka", "4", "--kb", "4",
         "--targets=-0.5,0,0.5", "--rates", "0.25", "--realizations", "16",
         "--seed", "3", "--out", out],
        capsys,
    )
    assert code == 0
    rows = [ln.split(",") for ln in out.read_text().splitlines()[2:]]
    thresholds = [float(r[3]) for r in rows]
    assert thresholds == sorted(thresholds, reverse=True)


def test_study_empty_targets_gives_header_only(tmp_path, capsys):
    out = tmp_path / "empty.csv"
    code, *_ = run(
        ["study", "asn", "--kind", "er-er", "--n", "120", "--ka", "4", "--kb", "4",
         "--targets", "", "--rates", "0.2", "--out", out],
        capsys,
    )
    assert code == 0
    lines = out.read_text().splitlines()
    assert len(lines) == 2
    assert lines[1].startswith("target,achieved,status")


def test_study_theory_only_leaves_sim_nan(tmp_path, capsys):
    out = tmp_path / "t.csv"
    code, *_ = run(
        ["study", "asn", "--kind", "er-er", "--n", "150", "--ka", "4", "--kb", "4",
         "--targets", "0.5", "--rates", "0.3", "--theory-only", "--out", out],
        capsys,
    )
    assert code == 0
    row = out.read_text().splitlines()[2].split(",")
    assert row[-1] == "nan"
    assert row[-2] != "nan"
