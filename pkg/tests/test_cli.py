import json

import pytest

from tseqclust.cli import main

from .conftest import S1, S2, S3

EXAMPLE = [("s1", S1), ("s2", S2), ("s3", S3)]
EX_FLAGS = ["--p-e", "1", "--p-t", str(1 / 9), "--delta", "1", "--tau", "3.5"]


def write_jsonl(path, seqs):
    lines = [json.dumps({"id": sid, "events": [{"e": e, "t": t} for e, t in ev]}) for sid, ev in seqs]
    path.write_text("\n".join(lines) + "\n")
    return str(path)


@pytest.fixture
def example_file(tmp_path):
    return write_jsonl(tmp_path / "ex.jsonl", EXAMPLE)


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


class TestDist:
    def test_same_id(self, capsys, example_file):
        code, out, _ = run(capsys, "dist", example_file, "--id-a", "s2", "--id-b", "s2", *EX_FLAGS)
        assert code == 0 and json.loads(out)["cost"] == 0.0

    def test_example_drops(self, capsys, example_file):
        code, out, _ = run(capsys, "dist", example_file, "--id-a", "s1", "--id-b", "s2", *EX_FLAGS)
        res = json.loads(out)
        assert code == 0
        # s2 = C, C, P, S, R: the P and the second S are left out
        assert res["col_drops"] == [0, 0, 1, 1, 0]
        assert res["pairs"] == [[0, 0], [1, 1], [2, 4]]
        assert set(res) == {"cost", "pairs", "row_drops", "col_drops"}

    def test_missing_id(self, capsys, example_file):
        code, _, err = run(capsys, "dist", example_file, "--id-a", "s1", "--id-b", "nope", *EX_FLAGS)
        assert code == 2 and "nope" in err

    def test_parse_failure(self, capsys, tmp_path):
        bad = tmp_path / "bad.jsonl"
        bad.write_text('{"id":"a","events":[{"e":"S","t":"x"}]}\n')
        code, _, err = run(capsys, "dist", bad, "--id-a", "a", "--id-b", "a", *EX_FLAGS)
        assert code == 1 and "line 1" in err

    def test_unreadable(self, capsys, tmp_path):
        code, _, _ = run(capsys, "dist", tmp_path / "none.jsonl", "--id-a", "a", "--id-b", "a", *EX_FLAGS)
        assert code == 1

    def test_delta_inf_spelling(self, capsys, example_file):
        code, out, _ = run(capsys, "dist", example_file, "--id-a", "s1", "--id-b", "s3", "--delta", "inf")
        assert code == 0 and json.loads(out)["row_drops"] == [0, 0, 0]

    def test_needs_metric(self, capsys, example_file):
        code, _, _ = run(capsys, "dist", example_file, "--id-a", "s1", "--id-b", "s3")
        assert code == 2

    def test_tau_tmax_defaults_and_override(self, capsys, example_file):
        _, a, _ = run(capsys, "dist", example_file, "--id-a", "s1", "--id-b", "s2", "--tau", "3", "--t-max", "20")
        _, b, _ = run(
            capsys, "dist", example_file, "--id-a", "s1", "--id-b", "s2",
            "--p-e", "9", "--p-t", "1", "--delta", str(23 / 9 + 1), "--tau", "3",
        )
        assert json.loads(a) == json.loads(b)
        _, c, _ = run(capsys, "dist", example_file, "--id-a", "s1", "--id-b", "s2", "--tau", "3", "--t-max", "20", "--delta", "0.1")
        # explicit delta wins: only the free C@2 pair is kept, six drops at 0.1
        assert json.loads(c)["cost"] == pytest.approx(0.6)

    def test_bad_tau(self, capsys, example_file):
        code, _, _ = run(capsys, "dist", example_file, "--id-a", "s1", "--id-b", "s2", "--tau", "5", "--t-max", "1")
        assert code == 2


class TestCluster:
    def test_k1_duplicates(self, capsys, tmp_path):
        f = write_jsonl(tmp_path / "d.jsonl", [("a", S1), ("b", S1)])
        out = tmp_path / "run"
        code, _, _ = run(capsys, "cluster", f, "--method", "kmeans", "--k", 1, "--delta", 1, "--out-dir", out)
        assert code == 0
        assert (out / "assignments.csv").read_text() == "id,cluster\na,0\nb,0\n"
        cent = json.loads((out / "centroids.json").read_text())
        assert [e["t"] for e in cent[0]["events"]] == [1.0, 2.0, 4.5]
        metrics = json.loads((out / "metrics.json").read_text())
        assert metrics["total_inertia"] == 0.0 and metrics["cluster_sizes"] == [2]
        assert (out / "histogram.csv").read_text().startswith("cluster,type,bin_start,count\n")

    def test_k_too_large(self, capsys, example_file, tmp_path):
        code, _, _ = run(capsys, "cluster", example_file, "--k", 9999, "--delta", 1, "--out-dir", tmp_path / "o")
        assert code == 2
        assert not (tmp_path / "o").exists()

    def test_svg(self, capsys, example_file, tmp_path):
        pytest.importorskip("matplotlib")
        code, _, _ = run(capsys, "cluster", example_file, "--k", 2, "--method", "hac", *EX_FLAGS, "--out-dir", tmp_path / "o", "--svg")
        assert code == 0 and (tmp_path / "o" / "histogram.svg").read_text().lstrip().startswith("<?xml")


class TestSynthEval:
    def test_synth_sizes(self, capsys, tmp_path):
        for scenario, n in [("ratio", 135), ("extra", 45)]:
            out = tmp_path / f"{scenario}.jsonl"
            assert run(capsys, "synth", "--scenario", scenario, "--out", out)[0] == 0
            assert len(out.read_text().splitlines()) == n
            labels = (tmp_path / f"{scenario}.labels.csv").read_text().splitlines()
            assert labels[0] == "id,label" and len(labels) == n + 1

    def test_synth_deterministic(self, capsys, tmp_path):
        a, b = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
        run(capsys, "synth", "--scenario", "missing", "--seed", 3, "--out", a)
        run(capsys, "synth", "--scenario", "missing", "--seed", 3, "--out", b)
        assert a.read_bytes() == b.read_bytes()

    def test_pipeline_extra(self, capsys, tmp_path):
        data = tmp_path / "x.jsonl"
        run(capsys, "synth", "--scenario", "extra", "--out", data)
        code, _, _ = run(
            capsys, "cluster", data, "--method", "hac", "--k", 2,
            "--p-e", 1, "--p-t", 1 / 9, "--delta", 4, "--out-dir", tmp_path / "run",
        )
        assert code == 0
        code, out, _ = run(
            capsys, "eval", "--pred", tmp_path / "run" / "assignments.csv",
            "--truth", tmp_path / "x.labels.csv", "--merge", "1=3", "--out-dir", tmp_path / "ev",
        )
        assert code == 0 and json.loads(out)["kappa"] == 1.0
        assert (tmp_path / "ev" / "confusion.csv").exists()

    def test_eval_perfect_and_mismatch(self, capsys, tmp_path):
        (tmp_path / "p.csv").write_text("id,cluster\na,7\nb,8\n")
        (tmp_path / "t.csv").write_text("id,label\na,1\nb,2\n")
        (tmp_path / "u.csv").write_text("id,label\na,1\nc,2\n")
        code, out, _ = run(capsys, "eval", "--pred", tmp_path / "p.csv", "--truth", tmp_path / "t.csv")
        assert code == 0 and json.loads(out)["kappa"] == 1.0
        code, _, _ = run(capsys, "eval", "--pred", tmp_path / "p.csv", "--truth", tmp_path / "u.csv")
        assert code == 2

    def test_eval_bad_merge(self, capsys, tmp_path):
        (tmp_path / "p.csv").write_text("id,cluster\na,7\n")
        (tmp_path / "t.csv").write_text("id,label\na,1\n")
        code, _, _ = run(capsys, "eval", "--pred", tmp_path / "p.csv", "--truth", tmp_path / "t.csv", "--merge", "13")
        assert code == 2


class TestHistAverage:
    def test_hist_example(self, capsys, example_file, tmp_path):
        (tmp_path / "a.csv").write_text("id,cluster\ns1,s1\ns2,s2\ns3,s3\n")
        code, out, _ = run(capsys, "hist", example_file, "--assignments", tmp_path / "a.csv", "--bin-width", 1)
        rows = out.splitlines()[1:]
        assert code == 0 and len(rows) == 12
        assert sum(int(r.split(",")[3]) for r in rows) == 12

    def test_hist_missing_assignment(self, capsys, example_file, tmp_path):
        (tmp_path / "a.csv").write_text("id,cluster\ns1,0\n")
        assert run(capsys, "hist", example_file, "--assignments", tmp_path / "a.csv")[0] == 2

    def test_hist_bad_width(self, capsys, example_file):
        assert run(capsys, "hist", example_file, "--bin-width", 0)[0] == 2

    def test_average(self, capsys, example_file, tmp_path):
        out = tmp_path / "c.json"
        code, _, _ = run(capsys, "average", example_file, *EX_FLAGS, "--ids", "s1", "s3", "--out", out)
        res = json.loads(out.read_text())
        assert code == 0 and res["inertia_trace"] == sorted(res["inertia_trace"], reverse=True)
        assert run(capsys, "average", example_file, *EX_FLAGS, "--ids", "zz")[0] == 2


class TestRepro:
    def test_extra(self, capsys, tmp_path):
        code, out, _ = run(capsys, "repro", "--experiment", "extra", "--out", tmp_path / "r.json")
        res = json.loads(out)
        assert res["runs"]["extra-drop"]["kappa"] == 1.0
        assert res["runs"]["extra-nodrop"]["kappa"] <= 0
        assert code == 0 and res["passed"]

    def test_failed_expectation_exit_code(self, capsys):
        code, out, _ = run(capsys, "repro", "--experiment", "extra", "--convention", "swapped")
        assert (code == 0) == json.loads(out)["passed"]

    def test_unknown(self, capsys):
        with pytest.raises(SystemExit) as info:
            main(["repro", "--experiment", "nope"])
        assert info.value.code == 2
