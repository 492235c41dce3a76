import pytest

from rvrp.app import main
from rvrp.core import get_logger
from rvrp.core.config import read_config_file

log = get_logger(__name__)


@pytest.fixture
def instance_file(tmp_path):
    path = str(tmp_path / "case.rvrp")
    code = main(
        ["gen-instance", "--robots", "8", "--goals", "3", "--cap", "6", "--seed", "4", "--out", path]
    )
    assert code == 0
    return path


def test_gen_grid(tmp_path):
    out = tmp_path / "grid.graph"
    assert main(["gen-grid", "--rows", "3", "--cols", "4", "--out", str(out)]) == 0
    assert out.is_file()
    manifest = read_config_file(f"{out}.manifest")
    assert manifest["subcommand"] == "gen-grid"
    assert manifest["rows"] == "3"


def test_solve_with_optimal(tmp_path, instance_file, capsys):
    out = str(tmp_path / "report")
    code = main(
        ["solve", "--instance", instance_file, "--method", "greedy", "--with-optimal", "--out", out]
    )
    assert code == 0
    printed = capsys.readouterr().out
    log.debug(printed)
    assert "holds=true" in printed
    lines = (tmp_path / "report.csv").read_text().splitlines()
    assert lines[0] == "method,J0,J,normalized,objective_calls,redundant_edges,bound_holds"
    assert [line.split(",")[0] for line in lines[1:]] == ["greedy", "optimal"]


def test_optimal_refused(tmp_path):
    instance = str(tmp_path / "big.rvrp")
    assert main(["gen-instance", "--robots", "24", "--goals", "2", "--noise", "none", "--out", instance]) == 0
    code = main(["solve", "--instance", instance, "--method", "optimal", "--out", str(tmp_path / "r")])
    assert code == 2


@pytest.mark.parametrize(
    "argv",
    [
        ["solve", "--instance", "missing.rvrp", "--out", "x"],
        ["replay", "--trace", "missing.csv", "--out", "x"],
        ["bench", "--series", "A", "--caps", "2", "--out", "x"],
        ["bench", "--caps", "4,x", "--out", "x"],
        ["bench", "--methods", "magic", "--out", "x"],
        ["bench", "--iterations", "0", "--out", "x"],
        ["solve", "--method", "magic", "--instance", "a"],
    ],
)
def test_input_errors(tmp_path, monkeypatch, argv):
    monkeypatch.chdir(tmp_path)
    assert main(argv) == 1


def test_bench_reproducible_from_manifest(tmp_path):
    first = str(tmp_path / "first")
    argv = ["bench", "--series", "A", "--iterations", "2", "--caps", "4,6", "--jobs", "1", "--seed", "9"]
    assert main(argv + ["--out", first]) == 0
    second = str(tmp_path / "second")
    assert main(["bench", "--config", f"{first}.manifest", "--out", second]) == 0
    assert (tmp_path / "first.csv").read_bytes() == (tmp_path / "second.csv").read_bytes()
    assert (tmp_path / "first_gaussian_100.dat").read_bytes() == (
        tmp_path / "second_gaussian_100.dat"
    ).read_bytes()


def test_sweep(tmp_path):
    out = str(tmp_path / "sweep")
    argv = ["sweep", "--iterations", "1", "--sweep", "0,100", "--jobs", "1", "--out", out]
    assert main(argv) == 0
    lines = (tmp_path / "sweep_sweep.dat").read_text().splitlines()
    assert lines[0].startswith("# sigma ")
    assert len(lines) == 3


def test_replay_empty_trace(tmp_path):
    trace = tmp_path / "empty.csv"
    trace.write_text("request_time_s,pickup_node,dropoff_node\n")
    out = str(tmp_path / "empty")
    argv = ["replay", "--trace", str(trace), "--policy", "non_redundant", "--jobs", "1", "--out", out]
    assert main(argv) == 0
    summary = read_config_file(f"{out}_non_redundant.summary")
    assert summary["empty"] == "true"


def test_replay_synthetic_both(tmp_path):
    out = str(tmp_path / "replay")
    argv = [
        "replay", "--synthetic", "rate=0.2,duration=600", "--policy", "both",
        "--jobs", "1", "--seed", "3", "--out", out,
    ]
    assert main(argv) == 0
    assert (tmp_path / "replay_redundant.summary").is_file()
    assert (tmp_path / "replay_non_redundant.summary").is_file()
    rows = (tmp_path / "replay.csv").read_text().splitlines()
    assert rows[0] == "request_time_s,wait_s,policy,batch_index"
    assert {row.split(",")[2] for row in rows[1:]} == {"redundant", "non_redundant"}


def test_gen_trace(tmp_path):
    out = tmp_path / "trace.csv"
    assert main(["gen-trace", "--rate", "0.1", "--hours", "0.5", "--seed", "1", "--out", str(out)]) == 0
    assert out.read_text().startswith("request_time_s,pickup_node,dropoff_node\n")
