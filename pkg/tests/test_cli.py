import json
from pathlib import Path

import pytest

from src import config
from src.agents.compare_agent import aggregate
from src.cli import EXIT_INPUT, EXIT_OK, EXIT_USAGE, main
from src.connectors.instance_files import read_instance, read_jsonl, write_instance_file
from src.models.graph import Graph
from src.models.solve import CompareRow

FIXTURE_DIR = Path(config.FIXTURE_DIR)


def _fixture(name: str) -> str:
    return str(FIXTURE_DIR / f"{name}.txt")


# ── generate ──

def test_generate_names_file(tmp_path, capsys):
    code = main(["generate", "--class", "random", "--n", "25", "--m", "33", "--seed", "1",
                 "--out", str(tmp_path)])
    assert code == EXIT_OK
    path = tmp_path / "R_25_33_10_25_s1.txt"
    assert path.exists()
    assert capsys.readouterr().out.strip() == str(path)
    g = read_instance(path)
    assert (g.n, g.m) == (25, 33)


def test_generate_is_reproducible(tmp_path):
    a, b = tmp_path / "a.txt", tmp_path / "b.txt"
    for out in (a, b):
        main(["generate", "--class", "toroidal", "--n", "3", "--m", "4", "--seed", "7", "--out", str(out)])
    assert a.read_text() == b.read_text()


@pytest.mark.parametrize(
    "argv",
    [
        ["--class", "random", "--n", "4", "--m", "7"],
        ["--class", "grid", "--n", "1", "--m", "5"],
        ["--class", "hypercube", "--n", "3", "--m", "4"],
        ["--class", "random", "--n", "5", "--m", "4", "--low", "5"],
    ],
)
def test_generate_bad_parameters(tmp_path, argv):
    assert main(["generate", *argv, "--out", str(tmp_path)]) == EXIT_INPUT


# ── solve ──

def test_solve_fixture(capsys):
    assert main(["solve", _fixture("fig3")]) == EXIT_OK
    out = capsys.readouterr().out
    assert "Best (lb):   32" in out
    assert "Status:      optimal" in out


def test_solve_jsonl_and_outputs(tmp_path, capsys):
    json_out, log_out = tmp_path / "run.json", tmp_path / "log.jsonl"
    code = main(["solve", _fixture("fig4"), "--jsonl", "--formulation", "flow",
                 "--json-out", str(json_out), "--log-out", str(log_out)])
    assert code == EXIT_OK
    record = json.loads(capsys.readouterr().out.strip().splitlines()[-1])
    assert record["lb"] == 43.0
    assert record["formulation"] == "FLOW"
    assert record["status"] == "optimal"
    assert json.loads(json_out.read_text())["lb"] == 43.0
    events = [row["event"] for row in read_jsonl(log_out)]
    assert events[-1] == "finish"


def test_solve_batch_prints_one_line_per_instance(capsys):
    assert main(["solve", _fixture("fig3"), _fixture("fig5")]) == EXIT_OK
    lines = capsys.readouterr().out.strip().splitlines()
    assert [json.loads(line)["lb"] for line in lines] == [32.0, 40.0]


def test_solve_tree(capsys):
    assert main(["solve", _fixture("fig5"), "--mwit", "--formulation", "tcyc"]) == EXIT_OK
    out = capsys.readouterr().out
    lb = float(next(line for line in out.splitlines() if line.startswith("Best (lb):")).split()[-1])
    assert lb < 40


def test_solve_cyc_without_cliques(capsys):
    assert main(["solve", _fixture("fig6"), "--formulation", "cyc", "--no-clique-cuts"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "Best (lb):   90" in out
    assert "clique=0" in out


def test_solve_cyc_tree_is_input_error():
    assert main(["solve", _fixture("fig3"), "--formulation", "cyc", "--mwit"]) == EXIT_INPUT


def test_solve_warm_start_file(tmp_path, capsys):
    ws = tmp_path / "ws.txt"
    ws.write_text("3 4 5\n")
    assert main(["solve", _fixture("fig3"), "--warm-start", f"file:{ws}", "--jsonl"]) == EXIT_OK
    record = json.loads(capsys.readouterr().out.strip())
    assert record["lb"] == 32.0
    assert record["warm_start"] == f"file:{ws}"


def test_solve_bad_warm_start_file(tmp_path):
    ws = tmp_path / "ws.txt"
    ws.write_text("0 1 2\n")
    assert main(["solve", _fixture("fig3"), "--warm-start", f"file:{ws}"]) == EXIT_INPUT


def test_solve_greedy_warm_start(capsys):
    assert main(["solve", _fixture("fig6"), "--warm-start", "greedy"]) == EXIT_OK
    assert "Best (lb):   90" in capsys.readouterr().out


def test_missing_file():
    assert main(["solve", "does/not/exist.txt"]) == EXIT_INPUT


def test_parse_error(tmp_path):
    bad = tmp_path / "bad.txt"
    bad.write_text("3 1\n1 2 3\n0 0\n")
    assert main(["solve", str(bad)]) == EXIT_INPUT


def test_bad_formulation_is_usage_error():
    with pytest.raises(SystemExit) as e:
        main(["solve", _fixture("fig3"), "--formulation", "lp"])
    assert e.value.code == EXIT_USAGE


@pytest.mark.parametrize(
    "flags",
    [
        ["--gap", "0"],
        ["--gap", "-1e-3"],
        ["--gap", "nan"],
        ["--time-limit", "-1"],
        ["--time-limit", "0"],
        ["--root-rounds", "-2"],
    ],
)
def test_out_of_range_solve_flags_are_usage_errors(flags, capsys):
    with pytest.raises(SystemExit) as e:
        main(["solve", _fixture("fig3"), *flags])
    assert e.value.code == EXIT_USAGE
    assert flags[0] in capsys.readouterr().err


@pytest.mark.parametrize("flags", [["--threads", "0"], ["--time-limit", "-5"]])
def test_out_of_range_compare_flags_are_usage_errors(flags):
    with pytest.raises(SystemExit) as e:
        main(["compare", str(FIXTURE_DIR), *flags])
    assert e.value.code == EXIT_USAGE


def test_no_command(capsys):
    assert main([]) == EXIT_USAGE
    assert "usage" in capsys.readouterr().out.lower()


# ── oracle ──

def test_oracle(capsys):
    assert main(["oracle", _fixture("fig4")]) == EXIT_OK
    assert "MWIF: 43" in capsys.readouterr().out


def test_oracle_json(capsys):
    assert main(["oracle", _fixture("fig3"), "--mwit", "--json"]) == EXIT_OK
    assert json.loads(capsys.readouterr().out)["value"] == 22.0


def test_oracle_refuses_large(tmp_path):
    path = tmp_path / "big.txt"
    main(["generate", "--class", "random", "--n", "30", "--m", "40", "--out", str(path)])
    assert main(["oracle", str(path)]) == EXIT_INPUT


# ── compare ──

def test_compare_fixtures(tmp_path, capsys):
    out = tmp_path / "cmp.jsonl"
    assert main(["compare", str(FIXTURE_DIR), "--threads", "1", "--json-out", str(out)]) == EXIT_OK
    rows = read_jsonl(out)
    overall = next(r for r in rows if r["name"] == "overall")
    assert overall["n_instances"] == 4
    assert overall["n_diff"] == 4
    assert "overall" in capsys.readouterr().out


def test_compare_trees_never_differ(tmp_path):
    for k, n in enumerate((3, 5, 7)):
        path_graph = Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)], [10.0 + i for i in range(n)])
        write_instance_file(path_graph, tmp_path / f"R_{n}_{n - 1}_10_25_s{k}.txt")
    out = tmp_path / "cmp.jsonl"
    assert main(["compare", str(tmp_path), "--threads", "1", "--json-out", str(out)]) == EXIT_OK
    rows = read_jsonl(out)
    assert all(r["n_diff"] == 0 for r in rows)
    assert next(r for r in rows if r["name"] == "random")["n_instances"] == 3


def test_compare_missing_dir(tmp_path):
    assert main(["compare", str(tmp_path / "nope")]) == EXIT_INPUT


def test_aggregate_skips_unsolved():
    rows = [
        CompareRow(name="a", graph_class="grid", mwif=10.0, mwit=8.0, diff_percent=20.0, n_diff=1),
        CompareRow(name="b", graph_class="grid", mwif=10.0, mwit=10.0, diff_percent=0.0),
        CompareRow(name="c", graph_class="grid"),
    ]
    summary = aggregate(rows)
    assert [r.name for r in summary] == ["grid", "overall"]
    assert summary[0].n_instances == 2
    assert summary[0].n_diff == 1
    assert summary[0].diff_percent == 20.0


# ── dump-model ──

def test_dump_model(tmp_path):
    out = tmp_path / "fig3.lp"
    assert main(["dump-model", _fixture("fig3"), "--formulation", "mtz", "--mwit", "--out", str(out)]) == EXIT_OK
    text = out.read_text()
    assert "MTZ" in text
    assert "tree" in text
