import pytest

from ntwfsm import NTapeMachine, TROPICAL_MIN, build_aligner, write_machine
from ntwfsm.cli import main
from ntwfsm.oracle_check import CaseConfig, run_check

from conftest import single_path_machine


@pytest.fixture
def aligner_file(tmp_path):
    path = tmp_path / "aligner.ntw"
    path.write_text(write_machine(build_aligner()), encoding="utf-8")
    return str(path)


@pytest.fixture
def single_path_file(tmp_path):
    machine = single_path_machine("ab", weight_per_step=1)
    machine.set_initial(0, 0)
    machine.set_final(2, 1)
    path = tmp_path / "single.ntw"
    path.write_text(write_machine(machine), encoding="utf-8")
    return str(path)


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


# --- validate ----------------------------------------------------------------


def test_validate_ok(capsys, aligner_file):
    code, out, _ = run_cli(capsys, "validate", "--machine", aligner_file, "--input-tapes", "1,2")
    assert code == 0
    assert out.strip() == "ok"


def test_validate_rejects_epsilon_without_flag(capsys, tmp_path):
    machine = NTapeMachine(1, TROPICAL_MIN, num_states=2)
    machine.set_initial(0)
    machine.set_final(1)
    machine.add_transition(0, 1, ("",), 1)
    path = tmp_path / "eps.ntw"
    path.write_text(write_machine(machine), encoding="utf-8")
    code, _, err = run_cli(capsys, "validate", "--machine", str(path))
    assert code == 3
    assert "consumes nothing" in err
    code, out, _ = run_cli(capsys, "validate", "--machine", str(path), "--allow-eps")
    assert code == 0 and out.strip() == "ok"


def test_missing_machine_file_is_usage_error(capsys):
    code, _, err = run_cli(capsys, "validate", "--machine", "/nonexistent/machine.ntw")
    assert code == 2
    assert "machine.ntw" in err


def test_corrupt_machine_file_is_content_error(capsys, tmp_path):
    path = tmp_path / "bad.ntw"
    path.write_text("ntwfsm n=1 semiring=tropical-min\nbogus\n", encoding="utf-8")
    code, _, err = run_cli(capsys, "validate", "--machine", str(path))
    assert code == 3
    assert "line 2" in err


def test_missing_required_flag_exits_2(capsys):
    with pytest.raises(SystemExit) as excinfo:
        main(["validate"])
    assert excinfo.value.code == 2


# --- bestpath / transduce ------------------------------------------------------


def test_bestpath_prints_weight_line(capsys, aligner_file):
    code, out, _ = run_cli(
        capsys, "bestpath", "--machine", aligner_file, "--input-tapes", "1,2", "swum", "swim"
    )
    assert code == 0
    lines = out.splitlines()
    assert lines[-1] == "2"
    assert sum(1 for line in lines if line.startswith("t ")) == 5
    assert "tape1\tswum" in lines
    assert "tape2\tswim" in lines


def test_bestpath_rejected_input_exits_1(capsys, single_path_file):
    code, _, err = run_cli(capsys, "bestpath", "--machine", single_path_file, "ba")
    assert code == 1
    assert err


def test_bestpath_accepted(capsys, single_path_file):
    code, out, _ = run_cli(capsys, "bestpath", "--machine", single_path_file, "ab")
    assert code == 0
    assert out.splitlines()[-1] == "3"


def test_bestpath_epsilon_cycle_exits_3(capsys, tmp_path):
    machine = NTapeMachine(1, TROPICAL_MIN, num_states=1, eps_mode=True)
    machine.set_initial(0)
    machine.set_final(0)
    machine.add_transition(0, 0, ("",), 0)
    path = tmp_path / "cycle.ntw"
    path.write_text(write_machine(machine), encoding="utf-8")
    code, _, err = run_cli(capsys, "bestpath", "--machine", str(path), "")
    assert code == 3
    assert "cycle" in err or "self-loop" in err


def test_direction_override(capsys, tmp_path):
    machine = NTapeMachine(1, TROPICAL_MIN, num_states=2)
    machine.set_initial(0, 0)
    machine.set_final(1, 0)
    machine.add_transition(0, 1, ("a",), 1)
    machine.add_transition(0, 1, ("a",), 5)
    path = tmp_path / "two.ntw"
    path.write_text(write_machine(machine), encoding="utf-8")
    _, out_min, _ = run_cli(capsys, "bestpath", "--machine", str(path), "a")
    assert out_min.splitlines()[-1] == "1"
    _, out_max, _ = run_cli(
        capsys, "bestpath", "--machine", str(path), "--direction", "max", "a"
    )
    assert out_max.splitlines()[-1] == "5"


def test_transduce_prints_output_tapes(capsys, aligner_file):
    code, out, _ = run_cli(
        capsys, "transduce", "--machine", aligner_file, "--input-tapes", "1,2", "swum", "swim"
    )
    assert code == 0
    lines = out.splitlines()
    assert lines[-1] == "2"
    tapes = dict(line.split("\t") for line in lines[:-1])
    assert set(tapes) == {"tape3", "tape4", "tape5"}
    assert (tapes["tape3"], tapes["tape4"]) in {("sw-um", "swi-m"), ("swu-m", "sw-im")}


# --- align ---------------------------------------------------------------------


def test_align_single_pair(capsys):
    code, out, _ = run_cli(capsys, "align", "gemacht", "machen")
    assert code == 0
    fields = out.strip().split("\t")
    assert len(fields) == 4
    assert fields[3] == "5"
    assert fields[0].replace("-", "") == "gemacht"
    assert fields[1].replace("-", "") == "machen"


def test_align_identity(capsys):
    code, out, _ = run_cli(capsys, "align", "a", "a")
    assert code == 0
    assert out.strip() == "a\ta\tK\t0"


def test_align_forbid_id(capsys):
    code, out, _ = run_cli(capsys, "align", "--forbid-id", "swum", "swim")
    assert code == 0
    assert out.strip().split("\t")[:2] == ["swu-m", "sw-im"]


def test_align_custom_marker(capsys):
    code, out, _ = run_cli(capsys, "align", "--marker", "*", "", "x")
    assert code == 0
    assert out.strip() == "*\tx\tI\t1"


def test_align_marker_collision_is_usage_error(capsys):
    code, _, err = run_cli(capsys, "align", "a-b", "ab")
    assert code == 2
    assert "marker" in err


def test_align_missing_words(capsys):
    code, _, err = run_cli(capsys, "align", "onlyone")
    assert code == 2


def test_align_batch(capsys, tmp_path):
    batch = tmp_path / "pairs.tsv"
    batch.write_text("swum\tswim\ngemacht\tmachen\n", encoding="utf-8")
    code, out, _ = run_cli(capsys, "align", "--batch", str(batch))
    assert code == 0
    lines = out.splitlines()
    assert len(lines) == 2
    assert lines[0].split("\t")[3] == "2"
    assert lines[1].split("\t")[3] == "5"


def test_align_batch_bad_line(capsys, tmp_path):
    batch = tmp_path / "pairs.tsv"
    batch.write_text("no tabs here\n", encoding="utf-8")
    code, _, err = run_cli(capsys, "align", "--batch", str(batch))
    assert code == 2
    assert "tab-separated" in err


def test_align_is_deterministic(capsys):
    first = run_cli(capsys, "align", "gemacht", "machen")
    second = run_cli(capsys, "align", "gemacht", "machen")
    assert first == second


# --- bench ----------------------------------------------------------------------


def test_bench_text_report(capsys):
    code, out, _ = run_cli(capsys, "bench", "--rmax", "2", "--trials", "1")
    assert code == 0
    assert "pair 'gemacht':'machen'" in out
    rows = [line.split() for line in out.splitlines()[2:]]
    assert rows[0][0] == "1" and rows[0][5] == "1.00"
    assert rows[1][4] == "4.0"


def test_bench_csv_report(capsys):
    code, out, _ = run_cli(
        capsys, "bench", "--rmax", "2", "--trials", "1", "--format", "csv", "--pair", "ab:cd"
    )
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "r,len1,len2,ms,A,B,C"
    first = lines[1].split(",")
    assert first[0] == "1" and first[1] == "2" and first[2] == "2"
    assert float(first[5]) == 1.0


def test_bench_alt_heap_column(capsys):
    code, out, _ = run_cli(
        capsys, "bench", "--rmax", "1", "--trials", "1", "--alt-heap", "--format", "csv"
    )
    assert code == 0
    assert out.splitlines()[0] == "r,len1,len2,ms,A,B,C,D"


def test_bench_writes_csv_and_figure(capsys, tmp_path):
    out_file = tmp_path / "bench.csv"
    code, _, err = run_cli(
        capsys, "bench", "--rmax", "2", "--trials", "1", "--out", str(out_file)
    )
    assert code == 0
    assert out_file.exists()
    figure = tmp_path / "bench.png"
    assert figure.exists() and figure.stat().st_size > 0
    assert "bench.png" in err


def test_bench_no_plot(capsys, tmp_path):
    out_file = tmp_path / "bench.csv"
    code, _, _ = run_cli(
        capsys, "bench", "--rmax", "1", "--trials", "1", "--out", str(out_file), "--no-plot"
    )
    assert code == 0
    assert out_file.exists()
    assert not (tmp_path / "bench.png").exists()


def test_bench_bad_pair(capsys):
    code, _, err = run_cli(capsys, "bench", "--pair", "nosep")
    assert code == 2


# --- oracle-check -----------------------------------------------------------------


def test_oracle_check_passes(capsys):
    code, out, _ = run_cli(capsys, "oracle-check", "--cases", "40", "--seed", "5")
    assert code == 0
    assert "40/40" in out


def test_oracle_check_deterministic_stream(capsys):
    args = ("oracle-check", "--cases", "25", "--seed", "11")
    code_a, out_a, _ = run_cli(capsys, *args)
    code_b, out_b, _ = run_cli(capsys, *args)
    assert code_a == code_b == 0
    # summary repeats exactly apart from the elapsed-time field
    assert out_a.split("(")[0] == out_b.split("(")[0]


def test_oracle_check_reports_injected_fault():
    # a broken search must be flagged with a reproducer, exercising the
    # failure path the CLI exits 1 on
    def broken(machine, strings, tapes, **kwargs):
        from ntwfsm import fsm_viterbi
        from ntwfsm.search import BestPath

        best = fsm_viterbi(machine, strings, tapes, **kwargs)
        return BestPath(best.transitions, best.weight + 1, best.labels)

    report = run_check(CaseConfig(cases=60, seed=5), search_fn=broken)
    assert not report.ok
    failure = report.failures[0]
    assert failure.search_weight != failure.oracle_weight
    assert failure.machine_text.startswith("ntwfsm")
