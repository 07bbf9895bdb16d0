import csv
import random

import pytest

from conftest import DATA
from rcpsp_rar import bench
from rcpsp_rar.bench import (
    TABLE_LINEUP,
    RESULT_HEADER,
    AlgorithmSpec,
    deviation,
    emit_trace,
    load_best_known,
    run_benchmark,
)
from rcpsp_rar.cli import main
from rcpsp_rar.instance import ParseError, random_instance, to_psplib
from rcpsp_rar.rar import RunReport

J301 = str(DATA / "j301_1.sm")


def read_rows(path):
    with open(path, newline="") as fh:
        return list(csv.reader(fh))


def test_best_known_file(tmp_path):
    p = tmp_path / "bk.txt"
    p.write_text("j9010_5 78\n# comment\n\nj1201_2 109\n")
    assert load_best_known(p) == {"j9010_5": 78, "j1201_2": 109}
    p.write_text("")
    assert load_best_known(p) == {}
    p.write_text("j9010_5 78\nbroken line here\n")
    with pytest.raises(ParseError, match="line 2"):
        load_best_known(p)


def test_deviation_arithmetic():
    assert deviation(112, 109) == 2.75
    assert deviation(78, 78) == 0.0
    assert deviation(80, None) is None


def test_emit_trace(tmp_path):
    report = RunReport(5, (1, 2), [(1, 6, 5)], 1, 3)
    path = tmp_path / "t.csv"
    assert emit_trace(report, path) == 0
    assert path.read_text() == "iteration,current_cost,best_cost\n1,6,5\n"
    blocker = tmp_path / "file"
    blocker.write_text("x")
    assert emit_trace(report, blocker / "sub" / "t.csv") == 1


def test_algorithm_specs():
    assert AlgorithmSpec.parse("rar:10").label == "Remove and Reinsert with 10 activities"
    assert AlgorithmSpec.parse("rar:10").slug == "rar-10"
    assert AlgorithmSpec.parse("tabu-mm").label == "Tabu search – MultiMove (MM)"
    assert len({AlgorithmSpec.parse(a).label for a in TABLE_LINEUP}) == 8
    with pytest.raises(ValueError):
        AlgorithmSpec.parse("genetic")


def test_zero_instances(tmp_path):
    out = tmp_path / "r.csv"
    status, rows = run_benchmark([], [AlgorithmSpec("rar")], [0], out)
    assert status == 0 and rows == []
    assert read_rows(out) == [list(RESULT_HEADER)]


def test_table_structure(tmp_path):
    paths = [J301]
    rng = random.Random(0)
    for i in range(2):
        p = tmp_path / f"gen{i}.sm"
        p.write_text(to_psplib(random_instance(12, rng, n_resources=2)))
        paths.append(str(p))
    specs = [AlgorithmSpec.parse(a, iterations=5, bnb_budget=2000) for a in TABLE_LINEUP]
    out = tmp_path / "r.csv"
    status, rows = run_benchmark(paths, specs, [0], out, best_known={"j301_1": 43})
    assert status == 0
    table = read_rows(out)
    assert table[0] == list(RESULT_HEADER)
    assert len(table) == 1 + 24
    assert table[1:] == sorted(table[1:], key=lambda r: (r[0], r[1], int(r[8])))
    j30 = [r for r in table[1:] if r[0] == "j301_1"]
    assert all(r[3] == "43" and float(r[4]) == pytest.approx(100 * (int(r[2]) - 43) / 43, abs=0.005) for r in j30)
    assert all(r[3] == "" and r[4] == "" for r in table[1:] if r[0] != "j301_1")


def test_missing_file_fails(tmp_path):
    status, rows = run_benchmark([str(tmp_path / "nope.sm")], [AlgorithmSpec("rar", iterations=2)], [0], tmp_path / "r.csv")
    assert status == 1 and rows == []


def test_validation_failure_is_fatal(tmp_path, monkeypatch):
    def corrupt(self, instance, seed):
        order = tuple(instance.topological_order)
        return RunReport(1, order, [(1, 1, 1)], 1, 1)  # claims an impossible makespan

    monkeypatch.setattr(AlgorithmSpec, "run", corrupt)
    status, rows = run_benchmark([J301], [AlgorithmSpec("rar")], [0], tmp_path / "r.csv")
    assert status == 1 and rows == []
    assert read_rows(tmp_path / "r.csv") == [list(RESULT_HEADER)]


def test_cli_run(tmp_path, capsys):
    out, bk = tmp_path / "r.csv", tmp_path / "bk.txt"
    bk.write_text("j301_1 43\n")
    trace = str(tmp_path / "tr" / "{instance}_{algorithm}_{seed}.csv")
    code = main(["--instance", J301, "--algorithm", "rar", "--m", "3", "--iterations", "40",
                 "--seed", "0", "--seed", "1", "--best-known", str(bk), "--out", str(out), "--trace", trace])
    assert code == 0
    rows = read_rows(out)
    assert len(rows) == 3 and rows[1][1] == "Remove and Reinsert with 3 activities"
    assert (tmp_path / "tr" / "j301_1_rar-3_1.csv").exists()
    trace_rows = read_rows(tmp_path / "tr" / "j301_1_rar-3_0.csv")
    assert trace_rows[0] == ["iteration", "current_cost", "best_cost"] and len(trace_rows) == 41
    assert "j301_1 (best known 43)" in capsys.readouterr().out


def test_cli_bad_arguments(tmp_path):
    assert main(["--algorithm", "nope", "--out", str(tmp_path / "r.csv")]) == 2
    assert main(["--iterations", "0", "--out", str(tmp_path / "r.csv")]) == 2


def test_cli_glob_and_backend(tmp_path):
    out = tmp_path / "r.csv"
    pattern = str(DATA / "j30*.sm")
    assert main(["--instance", pattern, "--iterations", "3", "--seed", "0", "--backend", "python",
                 "--bnb-budget", "500", "--out", str(out), "-q"]) == 0
    assert len(read_rows(out)) == 2
    from rcpsp_rar import backend
    backend.set_backend(backend.DEFAULT_BACKEND)


def test_parallel_jobs_match_serial(tmp_path):
    specs = [AlgorithmSpec("rar", iterations=10, m_remove=3)]
    a = run_benchmark([J301], specs, [0, 1], tmp_path / "a.csv")[1]
    b = run_benchmark([J301], specs, [0, 1], tmp_path / "b.csv", jobs=2)[1]
    assert [(r.best, r.decodes) for r in a] == [(r.best, r.decodes) for r in b]


def test_summary_layout():
    rows = [bench.BenchmarkRow("j", "A", 10, 9, 5, 100, 0.1, s) for s in range(2)]
    text = bench.summarize(rows)
    assert text.splitlines()[0] == "j (best known 9)"
