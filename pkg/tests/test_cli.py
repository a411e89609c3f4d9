import json

import pytest

from qweak.cli import BENCH_HEADER, RunReport, main

BELL_QASM = """OPENQASM 2.0;
qreg q[2];
creg c[2];
h q[1];
cx q[1],q[0];
measure q[0] -> c[0];
measure q[1] -> c[1];
"""


def run_cli(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_sample_ghz2_histogram(capsys):
    code, out, _ = run_cli(
        capsys, "sample", "--gen", "ghz:2", "--backend", "dd", "--shots", "1000", "--seed", "7", "--format", "histogram"
    )
    assert code == 0
    doc = json.loads(out)
    assert set(doc["counts"]) == {"00", "11"}
    assert sum(doc["counts"].values()) == 1000


def test_sample_deterministic_output(capsys):
    argv = ("sample", "--gen", "random:4:5:1", "--shots", "2000", "--seed", "3")
    first = run_cli(capsys, *argv)[1]
    second = run_cli(capsys, *argv)[1]
    assert first == second


@pytest.mark.parametrize("backend", ["vector", "dd"])
def test_sample_lines(capsys, backend):
    code, out, _ = run_cli(
        capsys, "sample", "--gen", "ghz:3", "--backend", backend, "--shots", "50", "--format", "lines"
    )
    assert code == 0
    lines = out.split()
    assert len(lines) == 50 and set(lines) <= {"000", "111"}


def test_sample_qft32_vector_memory_out(capsys):
    code, _, err = run_cli(capsys, "sample", "--gen", "qft:32", "--backend", "vector", "--shots", "1")
    assert code == 3
    assert "memory out" in err


def test_sample_qft32_dd_reports_size(capsys):
    code, out, err = run_cli(capsys, "sample", "--gen", "qft:32", "--backend", "dd", "--shots", "1000000", "--seed", "1")
    assert code == 0
    assert "size=32" in err
    assert sum(json.loads(out)["counts"].values()) == 10**6


def test_sample_from_file(capsys, tmp_path):
    path = tmp_path / "bell.qasm"
    path.write_text(BELL_QASM)
    out_path = tmp_path / "out.json"
    code, out, _ = run_cli(capsys, "sample", "--circuit", str(path), "--shots", "100", "--output", str(out_path))
    assert code == 0 and out == ""
    assert set(json.loads(out_path.read_text())["counts"]) <= {"00", "11"}


def test_parse_error_exit_code(capsys, tmp_path):
    path = tmp_path / "bad.qasm"
    path.write_text("OPENQASM 2.0;\nqreg q[1];\nfoo q[0];\n")
    code, _, err = run_cli(capsys, "sample", "--circuit", str(path))
    assert code == 2 and "foo" in err


def test_missing_file_exit_code(capsys, tmp_path):
    code, _, _ = run_cli(capsys, "sample", "--circuit", str(tmp_path / "missing.qasm"))
    assert code == 1


def test_bad_generator_exit_code(capsys):
    assert run_cli(capsys, "sample", "--gen", "nope:3")[0] == 2


def test_compare_ghz3(capsys):
    code, out, _ = run_cli(capsys, "compare", "--gen", "ghz:3")
    assert code == 0
    rows = dict(line.split()[:2] for line in out.splitlines()[1:])
    assert float(rows["max_amplitude_deviation"]) < 1e-10
    assert float(rows["tvd_vector_exact"]) < 0.005
    assert float(rows["tvd_dd_exact"]) < 0.005


def test_compare_random_8_20(capsys):
    assert run_cli(capsys, "compare", "--gen", "random:8:20:5")[0] == 0


def test_compare_qft1(capsys):
    code, out, _ = run_cli(capsys, "compare", "--gen", "qft:1", "--seed", "2")
    assert code == 0
    rows = dict(line.split()[:2] for line in out.splitlines()[1:])
    # with two outcomes the TVD is the deviation of either frequency from 1/2
    assert float(rows["tvd_vector_exact"]) < 0.002
    assert float(rows["tvd_dd_exact"]) < 0.002


def test_compare_fails_on_statistics(capsys, monkeypatch):
    # a DD sampler biased towards "00" must trip the TVD and chi-squared gates
    from qweak import ddsampler

    def biased(state, shots, seed=0, *, workers=1):
        return {"00": shots // 2, "01": shots - shots // 2}

    monkeypatch.setattr(ddsampler, "sample_many", biased)
    code, _, err = run_cli(capsys, "compare", "--gen", "qft:2", "--shots", "100000")
    assert code == 4
    assert "tvd_dd_exact" in err and "chi2_dd" in err
    assert "tvd_vector_exact" not in err


def test_compare_tvd_limit_scales_with_support():
    from qweak.cli import tvd_tolerance

    assert tvd_tolerance(2, 10**6) == 0.005
    assert tvd_tolerance(256, 10**6) == pytest.approx(0.048)


def test_compare_too_large(capsys):
    assert run_cli(capsys, "compare", "--gen", "ghz:11")[0] == 2


def test_bench_rows(capsys):
    code, out, _ = run_cli(
        capsys, "bench", "--gen", "qft:8", "--gen", "ghz:4", "--shots", "1000", "--dense-limit", "6"
    )
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == BENCH_HEADER
    rows = [line.split() for line in lines[1:]]
    assert [r[:4] for r in rows] == [
        ["qft_8", "8", "vector", "MO"],
        ["qft_8", "8", "dd", "8"],
        ["ghz_4", "4", "vector", "16"],
        ["ghz_4", "4", "dd", "7"],
    ]


def test_bench_unknown_backend(capsys):
    assert run_cli(capsys, "bench", "--gen", "qft:2", "--backends", "gpu")[0] == 2


def test_usage_error_exits_2():
    with pytest.raises(SystemExit) as info:
        main(["sample", "--backend", "gpu"])
    assert info.value.code == 2


def test_run_report_line():
    assert RunReport("qft_32", 32, "vector", None, 0, 0, 1).line().split()[3] == "MO"
    assert RunReport("qft_32", 32, "dd", 32, 0.5, 0.25, 1).line().split()[3:] == ["32", "0.500", "0.250"]
