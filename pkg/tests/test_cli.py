import json
import os

import pytest

from ispcf.cli import main


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def payload(out):
    d = json.loads(out)
    d.pop("timing", None)
    return d


def test_check_program(capsys):
    code, out, _ = run_cli(capsys, "check", "randbool")
    assert code == 0
    assert payload(out)["results"]["type"] == "Dist (unit + unit)"


def test_check_all_registry_programs(capsys):
    from ispcf.stdlib import list_programs
    for entry in list_programs():
        code, out, _ = run_cli(capsys, "check", entry.name)
        assert code == 0, entry.name


def test_check_file_path(tmp_path, capsys):
    f = tmp_path / "p.ispcf"
    f.write_text("ret (1.0, 2)\n")
    code, out, _ = run_cli(capsys, "check", str(f))
    assert code == 0
    assert payload(out)["results"]["type"] == "Dist (real * int)"


def test_check_ill_typed_exits_one(tmp_path, capsys):
    f = tmp_path / "bad.ispcf"
    f.write_text("score (ret 1.0)\n")
    code, _, err = run_cli(capsys, "check", str(f))
    assert code == 1
    assert "error" in err


def test_unknown_program_exits_one(capsys):
    code, _, err = run_cli(capsys, "check", "enoent_program")
    assert code == 1


def test_run_reports_score_and_value(capsys):
    code, out, _ = run_cli(capsys, "run", "randbool", "--seed", "1")
    assert code == 0
    res = payload(out)["results"]
    assert res["outcome"] == "normal"
    assert res["value"] in ("ret true", "ret false")
    assert res["score_float"] == 1.0


def test_run_score_program(capsys):
    import textwrap, tempfile
    with tempfile.NamedTemporaryFile(
            "w", suffix=".ispcf", delete=False) as fh:
        fh.write("score 0.5; ret ()\n")
        path = fh.name
    code, out, _ = run_cli(capsys, "run", path)
    res = payload(out)["results"]
    assert res["score_float"] == 0.5
    assert res["score"] == "1*2^-1"
    os.unlink(path)


def test_run_trace(capsys):
    code, out, _ = run_cli(capsys, "run", "randbool", "--seed", "0",
                           "--trace")
    res = payload(out)["results"]
    rules = [e["rule"] for e in res["trace"]]
    assert rules[0] == "sample"
    assert all(set(e) == {"step", "rule", "i", "score"}
               for e in res["trace"])


def test_run_requires_observable_dist(capsys):
    code, _, err = run_cli(capsys, "run", "rand_uniform_seq")
    assert code == 1
    assert "observable" in err


def test_sample_reports(capsys):
    code, out, _ = run_cli(
        capsys, "sample", "randbool", "--samples", "500", "--event", "inl")
    res = payload(out)["results"]
    assert abs(res["mean"] - 0.5) < 0.08
    assert res["samples"] == 500


def test_sample_moments_and_hist_and_ks(capsys):
    code, out, _ = run_cli(
        capsys, "sample", "expo_prime", "--samples", "800", "--moments",
        "--bins", "8", "--ks", "exp1")
    res = payload(out)["results"]
    assert abs(res["moments"][0]["mean"] - 1.0) < 0.2
    assert res["ks"]["statistic"] < 0.06
    total = sum(res["histogram"]["weights"])
    assert abs(total - 800 * res["mean"]) < 1e-6


def test_sample_ks_requires_real(capsys):
    code, _, err = run_cli(capsys, "sample", "box_muller", "--samples",
                           "10", "--ks", "stdnormal")
    assert code == 1


def test_sample_csv_histogram(capsys):
    code, out, _ = run_cli(
        capsys, "sample", "expo_prime", "--samples", "200", "--bins", "4",
        "--format", "csv")
    lines = out.strip().splitlines()
    assert lines[0] == "lo,hi,weight"
    assert len(lines) == 5


def test_sample_reproducible_reports(capsys):
    args = ("sample", "von_neumann", "--samples", "300", "--seed", "9",
            "--moments")
    _, out1, _ = run_cli(capsys, *args)
    _, out2, _ = run_cli(capsys, *args)
    assert payload(out1) == payload(out2)


def test_sample_threads_env_equivalence(capsys, monkeypatch):
    args = ("sample", "randbool", "--samples", "400", "--seed", "2",
            "--event", "inl")
    monkeypatch.setenv("ISPCF_THREADS", "1")
    _, out1, _ = run_cli(capsys, *args)
    monkeypatch.setenv("ISPCF_THREADS", "8")
    _, out8, _ = run_cli(capsys, *args)
    p1, p8 = payload(out1), payload(out8)
    p1["config"].pop("threads")
    p8["config"].pop("threads")
    assert p1 == p8


def test_enumerate_command(capsys):
    code, out, _ = run_cli(
        capsys, "enumerate", "randbool", "--level", "3", "--depth", "40",
        "--event", "inl")
    res = payload(out)["results"]
    assert res["event_mass"] == "3/8"
    points = {e["point"]: e["weight"] for e in res["valuation"]}
    assert points == {"ret true": "3/8", "ret false": "3/8"}


def test_enumerate_event_mass_monotone_in_level(capsys):
    masses = []
    for level in (3, 6):
        _, out, _ = run_cli(
            capsys, "enumerate", "randbool", "--level", str(level),
            "--depth", "40", "--event", "inl")
        num, den = payload(out)["results"]["event_mass"].split("/")
        masses.append(int(num) / int(den))
    assert masses[0] <= masses[1]


def test_enumerate_branch_guard_exit_code(tmp_path, capsys):
    f = tmp_path / "wide.ispcf"
    f.write_text("do x <- sample; do y <- sample; do z <- sample; "
                 "ret (pos (x - y * z))\n")
    code, _, err = run_cli(capsys, "enumerate", str(f), "--level", "6",
                           "--depth", "60", "--max-branches", "500")
    assert code == 2
    assert "guard" in err


def test_measure_approx(capsys):
    code, out, _ = run_cli(
        capsys, "measure-approx", "--measure", "uniform01", "--level", "1",
        "--open", "(0,1)")
    res = payload(out)["results"]
    assert res["open_mass"] == "0/1"
    assert res["total_mass"] == "1/1"
    code, out, _ = run_cli(
        capsys, "measure-approx", "--measure", "uniform01", "--level", "3",
        "--open", "(-1,2)")
    assert payload(out)["results"]["open_mass"] == "1/1"
    code, out, _ = run_cli(
        capsys, "measure-approx", "--measure", "point:1/3", "--level", "2",
        "--open", "(0,1)")
    assert payload(out)["results"]["open_mass"] == "1/1"


def test_measure_approx_mass_rises_with_level(capsys):
    masses = []
    for level in ("1", "3", "6"):
        _, out, _ = run_cli(
            capsys, "measure-approx", "--measure", "uniform01", "--level",
            level, "--open", "(0,1)")
        num, den = payload(out)["results"]["open_mass"].split("/")
        masses.append(int(num) / int(den))
    assert masses[0] == 0.0
    assert masses == sorted(masses)
    assert masses[-1] > 0.9


def test_measure_approx_unknown_measure(capsys):
    code, _, err = run_cli(capsys, "measure-approx", "--measure", "what")
    assert code == 1


def test_measure_approx_interval_format(capsys):
    code, out, _ = run_cli(
        capsys, "measure-approx", "--measure", "uniform01", "--level", "1")
    res = payload(out)["results"]
    pts = [e["point"] for e in res["valuation"]]
    assert {"lo": "0*2^0", "hi": "1*2^-1"} in pts
