import json
import subprocess
import sys

import pytest

from halting_nets.cli import main
from halting_nets.machines import format_program, halt_after, loop_forever


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_net_level_one_has_27_points(tmp_path, capsys):
    path = tmp_path / "cube.net"
    code, out, _ = run(capsys, "net", "--dim", "3", "--level", "1", "-o", str(path))
    assert code == 0
    assert json.loads(out)["points"] == 27
    assert len(path.read_text().splitlines()) == 28


def test_net_level_zero_epsilon_one(capsys):
    code, out, err = run(capsys, "net", "--dim", "3", "--level", "0")
    assert code == 0
    lines = out.splitlines()
    assert json.loads(lines[0])["epsilon_bound"] == "1"
    assert len(lines) == 9
    assert "8 points" in err


def test_net_punctured_header(tmp_path, capsys):
    path = tmp_path / "p.net"
    code, out, _ = run(capsys, "net", "--dim", "3", "--level", "2", "--puncture", "auto", "-o", str(path))
    summary = json.loads(out)
    assert code == 0
    assert summary["space_tag"] == "punctured" and summary["d_squared"] == "1/16"
    header = json.loads(path.read_text().splitlines()[0])
    assert header["d_squared"] == "1/16"


def test_net_csv_export(tmp_path, capsys):
    csv = tmp_path / "c.csv"
    assert run(capsys, "net", "--dim", "2", "--level", "1", "--csv", str(csv))[0] == 0
    assert csv.read_text().splitlines()[:2] == ["x0,x1", "0,0"]


@pytest.mark.parametrize(
    "flags, verdict",
    [
        (["--level", "2"], "Trivial"),
        (["--level", "2", "--boundary"], "Nontrivial"),
        (["--level", "2", "--puncture", "auto"], "Nontrivial"),
        (["--level", "3", "--puncture", "1/16", "--switch-round", "3"], "Nontrivial"),
    ],
)
def test_homology_verdicts(tmp_path, capsys, flags, verdict):
    path = tmp_path / "n.net"
    run(capsys, "net", "--dim", "3", *flags, "-o", str(path))
    code, out, _ = run(capsys, "homology", str(path))
    assert code == 0
    doc = json.loads(out)
    assert doc["verdict"] == verdict
    assert "elapsed_ms" not in doc


def test_homology_timing_flag(tmp_path, capsys):
    path = tmp_path / "n.net"
    run(capsys, "net", "--dim", "2", "--level", "2", "-o", str(path))
    code, out, _ = run(capsys, "homology", str(path), "--timing")
    assert code == 0 and "elapsed_ms" in json.loads(out)


def test_complex_summary(tmp_path, capsys):
    path = tmp_path / "n.net"
    run(capsys, "net", "--dim", "3", "--level", "1", "--boundary", "-o", str(path))
    code, out, _ = run(capsys, "complex", str(path))
    assert code == 0
    assert json.loads(out) == {"level": 1, "dimension": 3, "cell_counts": [26, 48, 24, 0], "euler": 2}


def test_reduce_machine_files(tmp_path, capsys):
    halt3 = tmp_path / "halt3.tm"
    halt3.write_text(format_program(halt_after(3)))
    loop = tmp_path / "loop.tm"
    loop.write_text(format_program(loop_forever()))
    code, out, _ = run(capsys, "reduce", "--machine", str(halt3), "--budget", "5")
    assert code == 0 and json.loads(out)["answer"] == "Yes"
    code, out, _ = run(capsys, "reduce", "--machine", str(loop), "--budget", "4", "--quantum", "50")
    assert code == 0 and json.loads(out)["answer"] == "No"


def test_reduce_fool(capsys):
    code, out, err = run(capsys, "reduce", "--fool", "--budget", "3", "--quantum", "10")
    doc = json.loads(out)
    assert code == 0
    assert doc["misclassified"] is True
    assert doc["answer"] == "No"
    assert doc["ground_truth"] == "HaltedAt(31)"
    assert "misclassified True" in err


def test_reduce_outputs_and_export(tmp_path, capsys):
    report, net = tmp_path / "r.json", tmp_path / "acc.net"
    code, out, _ = run(
        capsys, "reduce", "--sample", "halt_after_7", "--budget", "2", "--quantum", "5",
        "-o", str(report), "--export-net", str(net),
    )
    assert code == 0
    assert report.read_text() == out
    assert json.loads(net.read_text().splitlines()[0])["level"] == 2


def test_outputs_are_byte_identical(tmp_path, capsys):
    args = ["reduce", "--sample", "collatz", "--input", "6", "--budget", "3", "--quantum", "20"]
    first = run(capsys, *args)[1]
    assert run(capsys, *args)[1] == first
    a, b = tmp_path / "a.net", tmp_path / "b.net"
    run(capsys, "net", "--dim", "3", "--level", "2", "--puncture", "auto", "-o", str(a))
    run(capsys, "net", "--dim", "3", "--level", "2", "--puncture", "auto", "-o", str(b))
    assert a.read_bytes() == b.read_bytes()


def test_machine_command(tmp_path, capsys):
    code, out, _ = run(capsys, "machine", "halt_after", "--steps", "2")
    assert code == 0 and out.startswith("# halt_after_2")
    code, _, _ = run(capsys, "machine", "nosuch")
    assert code == 2


@pytest.mark.parametrize(
    "argv",
    [
        ["net", "--dim", "5", "--level", "1"],
        ["net", "--level", "-1"],
        ["net", "--level", "1", "--boundary", "--puncture", "auto"],
        ["net", "--level", "1", "--puncture", "0"],
        ["reduce", "--budget", "2"],
        ["reduce", "--fool", "--quantum", "0"],
        ["bogus"],
    ],
)
def test_usage_errors_exit_2(argv, capsys):
    with pytest.raises(SystemExit) as info:
        main(argv)
    assert info.value.code == 2


def test_switch_round_past_level_exit_2(capsys):
    assert run(capsys, "net", "--level", "1", "--puncture", "auto", "--switch-round", "4")[0] == 2


def test_unknown_sample_exit_2(capsys):
    assert run(capsys, "reduce", "--sample", "nosuch", "--budget", "1")[0] == 2


def test_io_errors_exit_3(tmp_path, capsys):
    assert run(capsys, "homology", str(tmp_path / "missing.net"))[0] == 3
    assert run(capsys, "reduce", "--machine", str(tmp_path / "missing.tm"))[0] == 3
    assert run(capsys, "net", "--level", "1", "-o", str(tmp_path / "no" / "dir" / "x.net"))[0] == 3


def test_data_errors_exit_4(tmp_path, capsys):
    off = tmp_path / "off.net"
    off.write_text('{"dimension": 2, "epsilon_bound": "1", "level": 1, "space_tag": "cube"}\n1/2^2 0/2^0\n')
    assert run(capsys, "homology", str(off))[0] == 4
    garbage = tmp_path / "g.net"
    garbage.write_text("hello\n")
    assert run(capsys, "complex", str(garbage))[0] == 4
    bad_tm = tmp_path / "bad.tm"
    bad_tm.write_text("states: q0 ; init: q0 ; halt:\nq0 * -> q9 * S\n")
    code, _, err = run(capsys, "reduce", "--machine", str(bad_tm))
    assert code == 4 and "undefined state q9" in err


def test_homology_at_coarser_level_off_grid(tmp_path, capsys):
    path = tmp_path / "n.net"
    run(capsys, "net", "--dim", "2", "--level", "2", "-o", str(path))
    assert run(capsys, "homology", str(path), "--level", "1")[0] == 4


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "halting_nets.cli", "net", "--dim", "2", "--level", "0"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0
    assert len(proc.stdout.splitlines()) == 5
