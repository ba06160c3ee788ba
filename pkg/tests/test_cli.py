import argparse
import logging

import pytest

from core.utils import EXIT_NO, EXIT_NOT_REALIZATION, EXIT_PARSE_ERROR, EXIT_PRECONDITION, EXIT_UNKNOWN, EXIT_YES
from helpers import complete, cycle, path, two_urpaths_with_rung
from main import build_parser, main, parse_bounds
from pathograph.formats import format_pgf, format_pgf_many

SQUARE_TEXT = """\
vertices: a b c d
edge: a b
edge: a d
edge: c b
edge: c d
urpath: u a c
spoke: b u
spoke: d u
"""

# the one realization with a single internal vertex
SQUARE_PGR = """\
vertices: a b c d x
edge: a b
edge: a d
edge: c b
edge: c d
edge: a x
edge: x c
edge: b x
edge: d x
path: u a x c
"""

UNIFORM_TILES = "tile: u g g g g\n"
MISMATCHED_TILES = "tile: s g r g b\ntile: t g y g b\n"


@pytest.fixture
def files(write_file, theta_prism_wheel):
    return {
        "square": write_file("square.pgf", SQUARE_TEXT),
        "k3": write_file("k3.pgf", format_pgf(complete(3))),
        "p3": write_file("p3.pgf", format_pgf(path(3))),
        "tpw": write_file("tpw.pgf", format_pgf_many(theta_prism_wheel)),
        "rung": write_file("rung.pgf", format_pgf(two_urpaths_with_rung())),
        "pgr": write_file("square.pgr", SQUARE_PGR),
    }


def test_validate(files, write_file, capsys):
    assert main(["validate", files["square"]]) == EXIT_YES
    assert capsys.readouterr().out.startswith("pathograph 1: ok")
    bad = write_file("bad.pgf", "vertices: a b\nedge: a b\nurpath: u a b\n")
    assert main(["validate", bad]) == EXIT_NO
    assert "pathograph 1: invalid" in capsys.readouterr().out


def test_decide_rungless_yes(files, capsys):
    assert main(["decide", files["square"], files["k3"]]) == EXIT_YES
    out = capsys.readouterr().out.splitlines()
    assert out[0] == "mode: rungless"
    assert out[1] == "answer: yes"
    assert out[2].startswith("witness: 1:")
    assert any(line.startswith("path: u a ") for line in out)


def test_decide_oracle_unknown(files, capsys):
    code = main(["decide", files["square"], files["tpw"], "--mode", "oracle", "--max-internal", "1"])
    assert code == EXIT_UNKNOWN
    assert "answer: unknown at bound 1" in capsys.readouterr().out


def test_oracle_command(files, capsys):
    assert main(["oracle", files["square"], files["k3"], "--max-internal", "3"]) == EXIT_YES
    out = capsys.readouterr().out
    assert "mode: oracle" in out
    assert "witness: 1:" in out


def test_auto_mode_uses_rung_elimination(files, capsys):
    assert main(["decide", files["rung"], files["k3"]]) == EXIT_YES
    out = capsys.readouterr().out
    assert "mode: closed" in out
    assert "rungless member:" in out


def test_auto_mode_falls_back_to_the_oracle(files, capsys):
    assert main(["decide", files["rung"], files["p3"], "--max-internal", "2"]) == EXIT_UNKNOWN
    assert "mode: oracle" in capsys.readouterr().out


def test_closed_mode_needs_a_closed_family(files):
    assert main(["decide", files["rung"], files["p3"], "--mode", "closed"]) == EXIT_PRECONDITION


def test_rungless_mode_needs_a_rungless_pathograph(files):
    assert main(["decide", files["rung"], files["k3"], "--mode", "rungless"]) == EXIT_PRECONDITION


def test_parse_errors(files, write_file):
    bad = write_file("bad.pgf", "vertices: a\nedge a\n")
    assert main(["decide", bad, files["k3"]]) == EXIT_PARSE_ERROR
    invalid = write_file("invalid.pgf", "vertices: a b\nedge: a b\nurpath: u a b\n")
    assert main(["decide", invalid, files["k3"]]) == EXIT_PARSE_ERROR


def test_check(files, capsys):
    assert main(["check", files["square"], files["k3"], "--realization", files["pgr"]]) == EXIT_NO
    out = capsys.readouterr().out.splitlines()
    assert out == ["string: 1:{a,b,c,d}", "transitions: 1", "forbidden-free: no"]


def test_check_rejects_a_non_realization(files, write_file):
    broken = write_file("broken.pgr", SQUARE_PGR.replace("edge: d x\n", ""))
    assert main(["check", files["square"], files["k3"], "--realization", broken]) == EXIT_NOT_REALIZATION


def test_characterize_formats(files, capsys):
    assert main(["characterize", files["square"], files["k3"], "--format", "dot"]) == EXIT_YES
    assert capsys.readouterr().out.startswith("digraph characterization {")
    assert main(["characterize", files["square"], files["k3"]]) == EXIT_YES
    assert capsys.readouterr().out.startswith("alphabet: 1:{}")


def test_enumerate(files, capsys):
    assert main(["enumerate", files["square"], "--max-internal", "2"]) == EXIT_YES
    lines = capsys.readouterr().out.splitlines()
    assert len(lines) == 10
    assert lines[0] == "1:{a,b,c,d}"


def test_enumerate_with_rungs_needs_pgr(files, capsys):
    assert main(["enumerate", files["rung"], "--max-internal", "1"]) == EXIT_PRECONDITION
    assert main(["enumerate", files["rung"], "--max-internal", "1", "--pgr"]) == EXIT_YES
    assert "path: u1 " in capsys.readouterr().out


def test_encode(files, capsys):
    assert main(["encode", files["p3"], "--relation", "induced_subgraph"]) == EXIT_YES
    assert capsys.readouterr().out.startswith("vertices:")
    assert main(["encode", files["square"], "--relation", "subgraph"]) == EXIT_PRECONDITION


def test_truemper(write_file, wheel5, capsys):
    assert main(["truemper", "theta"]) == EXIT_YES
    assert "urpath:" in capsys.readouterr().out
    assert main(["truemper", "wheel", "--graph", write_file("w.pgf", format_pgf(wheel5))]) == EXIT_NO
    assert capsys.readouterr().out.startswith("graph 1: wheel on {")
    assert main(["truemper", "theta", "--graph", write_file("c6.pgf", format_pgf(cycle(6)))]) == EXIT_YES
    assert capsys.readouterr().out == "graph 1: theta-free\n"


def test_reduce(write_file, capsys, caplog):
    caplog.set_level(logging.INFO)
    tiles = write_file("uniform.tiles", UNIFORM_TILES)
    assert main(["reduce", tiles, "--bounds", "2x2"]) == EXIT_YES
    assert "# stage 1 instance" in capsys.readouterr().out
    assert "counts: 6 2 13 6 1" in caplog.text
    assert "stage 1 witness, periods 4x4, 8 vertices" in caplog.text


def test_reduce_without_tiling(write_file, caplog):
    tiles = write_file("mismatched.tiles", MISMATCHED_TILES)
    assert main(["reduce", tiles, "--bounds", "3x3"]) == EXIT_NO
    assert "no periodic tiling with periods up to 3x3" in caplog.text


def test_out_option(files, tmp_path, capsys):
    target = tmp_path / "answer.txt"
    assert main(["--out", str(target), "decide", files["square"], files["k3"]]) == EXIT_YES
    assert capsys.readouterr().out == ""
    assert target.read_text(encoding="utf-8").startswith("mode: rungless\n")


def test_unwritable_out_file(files, tmp_path):
    target = tmp_path / "no-such-dir" / "answer.txt"
    assert main(["--out", str(target), "validate", files["square"]]) == EXIT_PARSE_ERROR


def test_missing_input_file(tmp_path):
    assert main(["validate", str(tmp_path / "missing.pgf")]) == EXIT_PARSE_ERROR


def test_parse_bounds():
    assert parse_bounds("3X5") == (3, 5)
    with pytest.raises(argparse.ArgumentTypeError):
        parse_bounds("0x2")
    with pytest.raises(SystemExit):
        build_parser().parse_args(["reduce", "t.tiles", "--bounds", "four"])
