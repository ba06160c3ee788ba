import pytest
from hypothesis import given, settings

from core.utils import FormatParseError
from helpers import pathographs
from pathograph.formats import format_pgf, format_pgf_many, load_pgf_file, parse_pgf, parse_pgf_many, strip_comment

SQUARE_TEXT = """\
# square with one urpath
vertices: a b c d
edge: a b
edge: a d
edge: c b
edge: c d
urpath: u a c   # seen from b and d
spoke: b u
spoke: d u
"""


def test_parse_square(square_h):
    assert parse_pgf(SQUARE_TEXT) == square_h


def test_format_then_parse_gives_back_the_pathograph(square_h):
    text = format_pgf(square_h, comments=["square"])
    assert text.startswith("# square\nvertices: a b c d\n")
    assert parse_pgf(text) == square_h


def test_hash_inside_id_is_not_a_comment():
    assert strip_comment("vertices: u#1 a # trailing") == "vertices: u#1 a"
    p = parse_pgf("vertices: u#1 a\nedge: u#1 a\n")
    assert p.vertices == ("u#1", "a")


def test_many_blocks_skip_blank_ones(square_h, k3):
    text = "\n---\n".join([format_pgf(square_h), "# nothing here\n", format_pgf(k3)])
    assert parse_pgf_many(text) == [square_h, k3]
    assert parse_pgf_many(format_pgf_many([square_h, k3])) == [square_h, k3]


def test_parse_pgf_wants_exactly_one_block(square_h, k3):
    with pytest.raises(FormatParseError, match="expected one pathograph, found 2 blocks"):
        parse_pgf(format_pgf_many([square_h, k3]))


@pytest.mark.parametrize(
    "text, line, fragment",
    [
        ("vertices: a b\nbogus: a\n", 2, "unknown directive 'bogus'"),
        ("vertices: a\nedge: a b\n", 2, "unknown vertex 'b'"),
        ("vertices: a b\nspoke: a u\n", 2, "unknown urpath 'u'"),
        ("vertices: a b\nedge: a\n", 2, "takes 2 ids"),
        ("vertices: a b c\nurpath: u a c\nurpath: u b c\n", 3, "duplicate urpath 'u'"),
        ("vertices: a b\nno colon here\n", 2, "expected 'directive"),
        ("vertices: a {b}\n", 1, "invalid id"),
    ],
)
def test_parse_errors_carry_line_numbers(text, line, fragment):
    with pytest.raises(FormatParseError, match=fragment) as exc:
        parse_pgf(text)
    assert exc.value.line_number == line


def test_parser_does_not_validate_invariants():
    p = parse_pgf("vertices: a b\nedge: a b\nurpath: u a b\n")
    assert p.validate()


def test_load_pgf_file(write_file, square_h):
    assert load_pgf_file(write_file("h.pgf", SQUARE_TEXT)) == [square_h]


def test_load_missing_file(tmp_path):
    with pytest.raises(FormatParseError, match="cannot read"):
        load_pgf_file(str(tmp_path / "absent.pgf"))


@settings(max_examples=60, deadline=None)
@given(pathographs(with_rungs=True))
def test_format_is_parsed_back(p):
    assert parse_pgf(format_pgf(p)) == p
