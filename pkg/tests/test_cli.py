import csv
import io
import json

import pytest

from tripack.cli import CSV_COLUMNS, main
from tripack.core import Instance, fig1_instance, save_instance
from tripack.lpcert import SCALED_CERTIFICATE


@pytest.fixture
def fig1_file(tmp_path):
    p = tmp_path / "fig1.json"
    save_instance(fig1_instance(), p)
    return str(p)


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_solve_best(capsys, fig1_file):
    code, out, _ = run(capsys, "solve", "--input", fig1_file, "--alg", "best")
    res = json.loads(out)
    assert code == 0 and res["weight"] == 2 and res["algorithm"] == "1"
    assert res["weights"] == {"1": 2, "2": 2, "3": 2}


def test_solve_alg3_exact(capsys, fig1_file):
    code, out, _ = run(capsys, "solve", "--input", fig1_file, "--alg", "3", "--star-backend", "exact")
    assert code == 0 and json.loads(out)["weight"] == 2


def test_solve_zero_instance(capsys, tmp_path):
    p = tmp_path / "z.json"
    save_instance(Instance(6, [[0] * 6 for _ in range(6)]), p)
    code, out, _ = run(capsys, "solve", "--input", str(p))
    res = json.loads(out)
    assert code == 0 and res["weight"] == 0 and sorted(res["labels"]) == [0, 0, 0, 1, 1, 1]


def test_solve_csv_and_output_file(capsys, fig1_file, tmp_path):
    dest = tmp_path / "r.csv"
    code, out, _ = run(capsys, "solve", "--input", fig1_file, "--format", "csv", "--output", str(dest))
    assert code == 0 and out == ""
    rows = list(csv.DictReader(io.StringIO(dest.read_text())))
    assert tuple(rows[0]) == CSV_COLUMNS and rows[0]["w_best"] == "2"


def test_bad_input_exit_2(capsys, tmp_path):
    p = tmp_path / "bad.json"
    p.write_text('{"n": 4, "weights": [[0,0,0,0],[0,0,0,0],[0,0,0,0],[0,0,0,0]]}')
    assert run(capsys, "solve", "--input", str(p))[0] == 2
    assert run(capsys, "solve", "--input", str(tmp_path / "missing.json"))[0] == 2
    with pytest.raises(SystemExit) as exc:
        main(["solve", "--input", str(p), "--alg", "4"])
    assert exc.value.code == 2


def test_bench_reproducible(capsys):
    args = ("bench", "--kind", "uniform-int", "--n", "6", "--count", "6", "--seed", "9", "--with-lemmas")
    code1, out1, _ = run(capsys, *args)
    code2, out2, _ = run(capsys, *args)
    assert code1 == code2 == 0 and out1 == out2
    rows = list(csv.DictReader(io.StringIO(out1)))
    assert len(rows) == 6 and all(r["lemma_failures"] == "0" for r in rows)
    assert [r["seed"] for r in rows] == [str(9 + i) for i in range(6)]


def test_bench_parallel_matches_serial(capsys):
    base = ("bench", "--kind", "zero-one", "--n", "6", "--count", "8", "--seed", "7", "--with-oracle")
    _, serial, _ = run(capsys, *base)
    _, parallel, _ = run(capsys, *base, "--jobs", "2")
    assert serial == parallel


def test_bench_zero_count(capsys):
    code, out, _ = run(capsys, "bench", "--count", "0")
    assert code == 0 and out.strip() == ",".join(CSV_COLUMNS)


def test_bench_json_and_metric(capsys):
    code, out, _ = run(capsys, "bench", "--kind", "metric", "--n", "6", "--count", "3",
                       "--with-oracle", "--format", "json")
    data = json.loads(out)
    assert code == 0 and data["summary"]["count"] == 3 and data["summary"]["below_10_17"] == 0


def test_bench_oracle_limit(capsys, monkeypatch):
    monkeypatch.setenv("TRIPACK_ORACLE_LIMIT", "6")
    assert run(capsys, "bench", "--n", "9", "--count", "1", "--with-oracle")[0] == 2


def test_check_lemmas(capsys, fig1_file):
    code, out, _ = run(capsys, "check-lemmas", "--input", fig1_file)
    lines = [l for l in out.splitlines() if l.startswith(("pass", "FAIL", "skip"))]
    assert code == 0 and len(lines) == 15 and all(l.startswith("pass") for l in lines)
    code, out, _ = run(capsys, "check-lemmas", "--input", fig1_file, "--format", "json")
    assert code == 0 and len(json.loads(out)["checks"]) == 15


def test_verify_cert(capsys):
    code, out, _ = run(capsys, "verify-cert")
    assert code == 0 and "objective: 10/17" in out
    assert sum(1 for l in out.splitlines() if l.endswith("pass")) == 43


def test_verify_cert_corrupted(capsys, tmp_path):
    lam = list(SCALED_CERTIFICATE)
    lam[0] = 130
    p = tmp_path / "corrupted.json"
    p.write_text(json.dumps({"scale": 153, "lambdas": lam}))
    code, out, err = run(capsys, "verify-cert", "--lambda-file", str(p))
    assert code == 1 and "(y)" in err and "FAIL" in out


def test_verify_cert_bad_file(capsys, tmp_path):
    p = tmp_path / "short.json"
    p.write_text("[1, 2, 3]")
    assert run(capsys, "verify-cert", "--lambda-file", str(p))[0] == 2


def test_emit_lp(capsys, tmp_path):
    dest = tmp_path / "lp.txt"
    assert run(capsys, "verify-cert", "--emit-lp", "--output", str(dest))[0] == 0
    text = dest.read_text()
    assert text.startswith("minimize y")
    assert "C34: -alpha5 + beta5 >= 0" in text and "C55: -beta8 + gamma8 >= 0" in text


def test_oracle(capsys, fig1_file):
    code, out, _ = run(capsys, "oracle", "--input", fig1_file)
    assert code == 0 and json.loads(out)["opt"] == 2
    code, out, _ = run(capsys, "oracle", "--input", fig1_file, "--matching-size", "3")
    assert json.loads(out)["weight"] == 3
