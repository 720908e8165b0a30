import csv
import json
from fractions import Fraction

import pytest

from typigraph.cli import main
from typigraph.core import Alphabet, JointPmf, Pmf, save_distribution

BIN = Alphabet((0, 1))


@pytest.fixture
def joint_file(binary_joint, tmp_path):
    path = tmp_path / "joint.json"
    save_distribution(binary_joint, str(path))
    return str(path)


@pytest.fixture
def copy_file(copy_channel, tmp_path):
    path = tmp_path / "copy.json"
    save_distribution(copy_channel, str(path))
    return str(path)


# --- info -------------------------------------------------------------------


def test_info_prints_all_quantities(joint_file, capsys):
    assert main(["info", "--dist", joint_file]) == 0
    out = capsys.readouterr().out
    assert "H(X) = 1.000000" in out
    assert "H(XY) = 1.721928" in out
    assert "H(Y|X) = 0.721928" in out
    assert "I(X;Y) = 0.278072" in out


def test_info_product_prints_zero_mi(tmp_path, capsys):
    j = JointPmf(BIN, BIN, ((Fraction(1, 4),) * 2,) * 2)
    path = tmp_path / "prod.json"
    save_distribution(j, str(path))
    assert main(["info", "--dist", str(path)]) == 0
    assert "I(X;Y) = 0.000000" in capsys.readouterr().out


def test_info_missing_file_exits_2(tmp_path, capsys):
    rc = main(["info", "--dist", str(tmp_path / "nope.json")])
    assert rc == 2
    assert "not found" in capsys.readouterr().err


def test_info_malformed_file_exits_2(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"type": "pmf", "alphabet": [0, 1], "probs": ["1/2", "1/3"]}))
    rc = main(["info", "--dist", str(path)])
    assert rc == 2
    err = capsys.readouterr().err
    assert "bad.json" in err


def test_info_json_record(joint_file, tmp_path):
    out = tmp_path / "rec.json"
    assert main(["info", "--dist", joint_file, "--out", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert doc["schema"] == "typigraph.run/1"
    assert doc["config_sha256"]
    assert doc["payload"]["I(X;Y)"] == pytest.approx(0.278072)


def test_info_csv_record(joint_file, tmp_path):
    out = tmp_path / "rec.csv"
    assert main(["info", "--dist", joint_file, "--out", str(out), "--format", "csv"]) == 0
    rows = list(csv.reader(out.read_text().splitlines()))
    assert rows[0] == ["quantity", "bits"]
    assert ["I(X;Y)", "0.278072"] in rows


def test_info_pmf_only_entropy(tmp_path, capsys):
    save_distribution(Pmf(BIN, (Fraction(2, 5), Fraction(3, 5))), str(tmp_path / "p.json"))
    assert main(["info", "--dist", str(tmp_path / "p.json")]) == 0
    out = capsys.readouterr().out
    assert "H(X) = 0.970951" in out
    assert "I(X;Y)" not in out


# --- graph -------------------------------------------------------------------


def test_graph_stats_line_and_export(joint_file, tmp_path, capsys):
    out = tmp_path / "g.json"
    edges = tmp_path / "g.csv"
    rc = main(
        ["graph", "--dist", joint_file, "--n", "4", "--out", str(out), "--edges", str(edges)]
    )
    assert rc == 0
    stdout = capsys.readouterr().out
    assert "left=14 right=14" in stdout
    assert "degree-bound: PASS" in stdout
    doc = json.loads(out.read_text())
    assert doc["schema"] == "typigraph.graph/1"
    assert doc["config_sha256"]
    assert doc["left_size"] == 14
    with open(edges) as fh:
        assert fh.readline().strip() == "left_rank,right_rank"


def test_graph_deterministic_bytes(joint_file, tmp_path):
    out = tmp_path / "g.json"
    main(["graph", "--dist", joint_file, "--n", "4", "--out", str(out)])
    first = out.read_bytes()
    main(["graph", "--dist", joint_file, "--n", "4", "--out", str(out)])
    assert out.read_bytes() == first


def test_graph_cap_exit_3(joint_file, capsys):
    rc = main(["graph", "--dist", joint_file, "--n", "30", "--cap", "1000"])
    assert rc == 3
    assert "implicit" in capsys.readouterr().err


def test_graph_implicit_mode(joint_file, capsys):
    rc = main(["graph", "--dist", joint_file, "--n", "30", "--cap", "1000", "--mode", "implicit"])
    assert rc == 0
    assert "left=" in capsys.readouterr().out


def test_graph_param_overrides(joint_file, capsys):
    rc = main(["graph", "--dist", joint_file, "--n", "4", "--lambda", "1/4"])
    assert rc == 0
    rc = main(["graph", "--dist", joint_file, "--n", "4", "--eps1", "0"])
    assert rc == 2  # slacks must be positive
    rc = main(["graph", "--dist", joint_file, "--n", "4", "--schedule", "warp"])
    assert rc == 2


# --- subgraph ----------------------------------------------------------------


def test_subgraph_an_verification(joint_file, tmp_path, capsys):
    out = tmp_path / "an.json"
    rc = main(
        ["subgraph", "--dist", joint_file, "--n", "10", "--kind", "an", "--out", str(out)]
    )
    assert rc == 0
    stdout = capsys.readouterr().out
    assert "single-type verification: PASS" in stdout
    assert "left=252 right=252" in stdout
    doc = json.loads(out.read_text())
    assert doc["kind"] == "single_type"
    assert doc["config_sha256"]


def test_subgraph_gamma_requires_aux(joint_file, capsys):
    rc = main(["subgraph", "--dist", joint_file, "--n", "12", "--kind", "gamma"])
    assert rc == 2
    assert "--aux" in capsys.readouterr().err


def test_subgraph_gamma_with_copy_channel(joint_file, copy_file, capsys):
    rc = main(
        ["subgraph", "--dist", joint_file, "--n", "12", "--kind", "gamma", "--aux", copy_file]
    )
    assert rc == 0
    out = capsys.readouterr().out
    assert "aux verification: PASS" in out
    assert "blocks=2" in out


def test_subgraph_gamma_wrong_aux_type(joint_file, tmp_path, capsys):
    bad = tmp_path / "notcond.json"
    save_distribution(Pmf(BIN, (Fraction(1, 2), Fraction(1, 2))), str(bad))
    rc = main(
        ["subgraph", "--dist", joint_file, "--n", "12", "--kind", "gamma", "--aux", str(bad)]
    )
    assert rc == 2


# --- simulate ----------------------------------------------------------------


def test_simulate_outputs(joint_file, tmp_path, capsys):
    out = tmp_path / "sim.json"
    args = [
        "simulate", "--dist", joint_file, "--n", "8",
        "--r1", "2/8", "--r2", "2/8", "--trials", "200", "--seed", "9",
        "--out", str(out),
    ]
    assert main(args) == 0
    stdout = capsys.readouterr().out
    assert "bracket verdict:" in stdout
    doc = json.loads(out.read_text())
    assert doc["payload"]["monte_carlo"]["trials"] == 200
    assert doc["payload"]["bracket"]["high"] <= 1.0
    csv_path = tmp_path / "sim.csv"
    rows = list(csv.reader(csv_path.read_text().splitlines()))
    assert rows[0] == ["a", "empirical", "suen"]
    assert len(rows) == 12  # header + 11 grid points

    first = out.read_bytes()
    assert main(args) == 0
    assert out.read_bytes() == first  # fixed (config, seed): identical bytes


def test_simulate_validation(joint_file):
    base = ["simulate", "--dist", joint_file, "--n", "8", "--r1", "0.25", "--r2", "0.25"]
    assert main(base + ["--trials", "0", "--seed", "1"]) == 2
    assert main(base + ["--trials", "10", "--seed", "-1"]) == 2
    assert main(
        ["simulate", "--dist", joint_file, "--n", "8", "--r1", "-0.5",
         "--r2", "0.25", "--trials", "10", "--seed", "1"]
    ) == 2


# --- wring ---------------------------------------------------------------------


def write_xy_csv(path, pairs):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["x", "y"])
        for x, y in pairs:
            writer.writerow([" ".join(map(str, x)), " ".join(map(str, y))])


def test_wring_xy_csv(tmp_path, capsys):
    path = tmp_path / "edges.csv"
    pairs = []
    for i in range(16):
        bits = tuple((i >> (7 - t)) & 1 for t in range(8))
        pairs.append((bits, bits))
    write_xy_csv(path, pairs)
    out = tmp_path / "trace.json"
    rc = main(["wring", "--edges", str(path), "--delta", "0.05", "--out", str(out)])
    assert rc == 0
    stdout = capsys.readouterr().out
    assert "k=4" in stdout
    assert "converged=True" in stdout
    doc = json.loads(out.read_text())
    assert doc["payload"]["surviving_fraction"] == "1/16"
    assert doc["payload"]["pinsker_tv"] is not None


def test_wring_product_edges_k0(tmp_path, capsys):
    path = tmp_path / "prod.csv"
    xs = [(0, 0), (0, 1), (1, 0), (1, 1)]
    write_xy_csv(path, [(x, y) for x in xs for y in xs])
    rc = main(["wring", "--edges", str(path), "--delta", "0.05"])
    assert rc == 0
    assert "k=0" in capsys.readouterr().out


def test_wring_rank_csv_via_graph_header(joint_file, tmp_path, capsys):
    gjson = tmp_path / "g.json"
    gcsv = tmp_path / "g.csv"
    main(["graph", "--dist", joint_file, "--n", "4", "--out", str(gjson), "--edges", str(gcsv)])
    capsys.readouterr()
    rc = main(
        ["wring", "--edges", str(gcsv), "--graph", str(gjson), "--delta", "0.3"]
    )
    assert rc == 0
    assert "wring:" in capsys.readouterr().out

    # ranks without a header file: config error
    rc = main(["wring", "--edges", str(gcsv), "--delta", "0.3"])
    assert rc == 2


def test_wring_empty_csv_exit_2(tmp_path):
    path = tmp_path / "empty.csv"
    path.write_text("x,y\n")
    assert main(["wring", "--edges", str(path), "--delta", "0.1"]) == 2
    path2 = tmp_path / "zero.csv"
    path2.write_text("")
    assert main(["wring", "--edges", str(path2), "--delta", "0.1"]) == 2


def test_wring_malformed_header_exit_2(tmp_path):
    path = tmp_path / "bad.csv"
    path.write_text("foo,bar\n1,2\n")
    assert main(["wring", "--edges", str(path), "--delta", "0.1"]) == 2


def test_wring_bad_rank_exit_2(joint_file, tmp_path):
    gjson = tmp_path / "g.json"
    main(["graph", "--dist", joint_file, "--n", "4", "--out", str(gjson)])
    path = tmp_path / "ranks.csv"
    path.write_text("left_rank,right_rank\n99,0\n")
    rc = main(["wring", "--edges", str(path), "--graph", str(gjson), "--delta", "0.1"])
    assert rc == 2


# --- argparse plumbing ---------------------------------------------------------


def test_unknown_subcommand_exits_2():
    assert main(["transmogrify"]) == 2


def test_missing_required_flag_exits_2():
    assert main(["graph", "--n", "4"]) == 2
