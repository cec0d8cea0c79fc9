import json

import numpy as np
import pytest

from winoconv.cli import main
from winoconv.tensor_io import load_tensor, save_tensor


def test_no_args_prints_usage_and_exits_nonzero(capsys):
    with pytest.raises(SystemExit) as exc:
        main([])
    assert exc.value.code != 0
    assert "usage" in capsys.readouterr().err.lower()


def test_unknown_subcommand(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code != 0


def test_transform_prints_canonical_f23(capsys, tmp_path):
    assert main(["transform", "--m", "2", "--r", "3", "--outdir", str(tmp_path)]) == 0
    out = capsys.readouterr().out
    assert "F(2x2, 3x3)" in out
    assert "[ 1  0 -1  0]" in out
    assert (tmp_path / "g.csv").read_text().splitlines()[1] == "1/2,1/2,1/2"


def test_transform_custom_points(capsys):
    assert main(["transform", "--m", "2", "--r", "3", "--points", "0,1/2,-1/2"]) == 0
    assert "points: 0, 1/2, -1/2, inf" in capsys.readouterr().out


def test_transform_bad_points_is_error(capsys):
    assert main(["transform", "--m", "2", "--r", "3", "--points", "0,1,1"]) == 1
    assert "error:" in capsys.readouterr().err


def test_conv_subcommand(tmp_path, capsys):
    rng = np.random.default_rng(0)
    inp = tmp_path / "in.wtns"
    ker = tmp_path / "k.wtns"
    out = tmp_path / "out.wtns"
    stats = tmp_path / "stats.jsonl"
    save_tensor(inp, rng.standard_normal((1, 2, 8, 8)).astype(np.float32), "NCHW")
    save_tensor(ker, rng.standard_normal((3, 2, 3, 3)).astype(np.float32), "KCRR")
    assert main(["conv", "--input", str(inp), "--kernels", str(ker),
                 "--output", str(out), "--m", "2", "--pad", "1",
                 "--stats", str(stats)]) == 0
    lines = [json.loads(l) for l in stats.read_text().splitlines()]
    spatial, wino, err = lines
    assert spatial["path"] == "spatial"
    assert spatial["multiplications"] == 1 * 2 * 8 * 8 * 9 * 3
    assert wino["multiplications"] == 1 * 2 * 16 * 3 * 16  # N*C*tiles*K*alpha^2
    assert err["max_rel_error"] < 1e-4
    arr, layout = load_tensor(out)
    assert layout == "NCHW" and arr.shape == (1, 3, 8, 8)


def test_conv_rejects_wrong_layout(tmp_path, capsys):
    path = tmp_path / "in.wtns"
    save_tensor(path, np.ones((1, 1, 4, 4), dtype=np.float32), "KCRR")
    assert main(["conv", "--input", str(path), "--kernels", str(path),
                 "--output", str(tmp_path / "o")]) == 1
    assert "expected an NCHW tensor" in capsys.readouterr().err


def test_dse_subcommand(tmp_path, capsys):
    assert main(["dse", "--workload", "vgg16d", "--m-values", "1,2,3,4,5",
                 "--budgets", "688,700,684", "--outdir", str(tmp_path)]) == 0
    out = capsys.readouterr().out
    assert "recommended: m=4" in out
    for name in ("fig1.csv", "fig2.csv", "fig3.csv", "fig6.csv"):
        assert (tmp_path / name).exists()
    fig3 = (tmp_path / "fig3.csv").read_text().splitlines()
    assert fig3[0] == "m,pct_mult_decrease,pct_transform_increase"


def test_simulate_subcommand(tmp_path, capsys):
    assert main(["simulate", "--m", "4", "--c", "4", "--k", "8", "--height", "14",
                 "--width", "14", "--pes", "4", "--seed", "7",
                 "--outdir", str(tmp_path)]) == 0
    lines = (tmp_path / "trace.jsonl").read_text().splitlines()
    trace = json.loads(lines[0])
    report = json.loads(lines[1])
    assert trace["issue_cycles"] == 16 * 4 * 2
    assert trace["data_transform_invocations"] == trace["issue_cycles"]
    assert report["consistent"] is True
    arr, _ = load_tensor(tmp_path / "simulated_output.wtns")
    assert arr.shape == (1, 8, 14, 14)


def test_simulate_reference_mode(tmp_path):
    assert main(["simulate", "--m", "2", "--c", "2", "--k", "4", "--height", "6",
                 "--width", "6", "--pes", "2", "--seed", "7", "--reference-design",
                 "--outdir", str(tmp_path)]) == 0
    trace = json.loads((tmp_path / "trace.jsonl").read_text().splitlines()[0])
    assert trace["data_transform_invocations"] == 2 * trace["issue_cycles"]


def test_simulate_deterministic_with_seed(tmp_path):
    for sub in ("a", "b"):
        (tmp_path / sub).mkdir()
        assert main(["simulate", "--m", "2", "--seed", "3",
                     "--outdir", str(tmp_path / sub)]) == 0
    assert (tmp_path / "a" / "trace.jsonl").read_bytes() \
        == (tmp_path / "b" / "trace.jsonl").read_bytes()
    assert (tmp_path / "a" / "simulated_output.wtns").read_bytes() \
        == (tmp_path / "b" / "simulated_output.wtns").read_bytes()


def test_report_subcommand(tmp_path, capsys):
    assert main(["report", "--workload", "vgg16d", "--outdir", str(tmp_path)]) == 0
    out = capsys.readouterr().out
    assert "shared_transform_m4" in out
    table = (tmp_path / "table2.csv").read_text()
    assert "28.046" in table
    assert (tmp_path / "table2_reference.csv").exists()


def test_report_rejects_other_workloads(tmp_path, capsys):
    net = tmp_path / "w.workload"
    net.write_text("workload other\nlayer 1 8 8 1 1 3 1 g\n")
    assert main(["report", "--workload", str(net), "--outdir", str(tmp_path)]) == 1
    assert "vgg16d" in capsys.readouterr().err


def test_outdir_env_override(tmp_path, monkeypatch):
    override = tmp_path / "env_dir"
    monkeypatch.setenv("WINOCONV_OUTDIR", str(override))
    assert main(["report", "--workload", "vgg16d", "--outdir", str(tmp_path / "flag")]) == 0
    assert (override / "table2.csv").exists()
    assert not (tmp_path / "flag").exists()
