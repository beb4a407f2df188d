import logging
from fractions import Fraction

import pytest

from mapfile import MapSyntaxError, format_map, parse_map, read_map
from randommaps import random_map
from seriescore import MapTuple, Series


def test_shear_file():
    parsed = parse_map("vars: z1 z2\nF1 = z1 + z2^2\nF2 = z2\n")
    assert parsed.vars == ["z1", "z2"]
    assert parsed.assignments == ["z1 + z2^2", "z2"]
    assert parsed.map.degree == 8
    assert parsed.map == MapTuple([Series(2, 8, {(1, 0): 1, (0, 2): 1}), Series.variable(1, 2, 8)])
    assert parsed.tangent_to_identity


def test_rational_coefficients():
    parsed = parse_map("vars: x\nF1 = x + 3/2*x^2", 4)
    assert parsed.map[0] == Series(1, 4, {(1,): 1, (2,): Fraction(3, 2)})
    assert parsed.tangent_to_identity


def test_constant_term_is_parsed_but_flagged():
    parsed = parse_map("vars: x\nF1 = 1 + x")
    assert parsed.map[0] == Series(1, 8, {(0,): 1, (1,): 1})
    assert not parsed.tangent_to_identity


def test_comments_blank_lines_and_precedence():
    text = """
    # a comment line
    vars: x y   # trailing comment

    F1 = x - y^2*2 + (x + y)^2 - x^2 - 2*x*y
    F2 = -y^2 + y + 2^2*y^3/4 + y^2
    """
    parsed = parse_map(text, 5)
    x, y = (Series.variable(k, 2, 5) for k in range(2))
    assert parsed.map[0] == x - y * y
    assert parsed.map[1] == y + y * y * y


def test_unary_minus_binds_looser_than_power():
    parsed = parse_map("vars: x\nF1 = x - -x^2 + 2^3*x^3", 4)
    assert parsed.map[0] == Series(1, 4, {(1,): 1, (2,): 1, (3,): 8})


def test_terms_above_degree_are_dropped_with_warning(caplog):
    with caplog.at_level(logging.WARNING, logger="mapfile"):
        parsed = parse_map("vars: x\nF1 = x + x^2 + x^5", 3)
    assert parsed.map[0] == Series(1, 3, {(1,): 1, (2,): 1})
    assert "F1 has terms up to degree 5" in caplog.text


def test_cancelling_terms_do_not_warn(caplog):
    with caplog.at_level(logging.WARNING, logger="mapfile"):
        parse_map("vars: x\nF1 = x + x^5 - x^5", 3)
    assert caplog.text == ""


@pytest.mark.parametrize(
    "text,line,column",
    [
        ("vars: x\nF1 = x + y", 2, 10),
        ("vars: x\nF1 = x + 0.5*x^2", 2, 10),
        ("F1 = x", 1, 1),
        ("vars: x y\nF2 = y\nF1 = x", 2, 1),
        ("vars: x y\nF1 = x", 2, 1),
        ("vars: x\nF1 = x/(1 + x)", 2, 13),
        ("vars: x\nF1 = x^-1", 2, 8),
        ("vars: x\nF1 = x^(1/2)", 2, 10),
        ("vars: x\nF1 = (x + 1", 2, 12),
        ("vars: x\nF1 = x $ 2", 2, 8),
        ("vars: x\nF1 = ", 2, 5),
        ("vars: x\nF1 = x/0", 2, 8),
    ],
)
def test_syntax_errors_carry_positions(text, line, column):
    with pytest.raises(MapSyntaxError) as info:
        parse_map(text)
    assert info.value.line == line
    assert info.value.column == column


def test_format_then_parse_reproduces_map():
    F = random_map(3, 3, 3, 6)
    assert parse_map(format_map(F), 6).map == F
    assert format_map(F, ["x", "y", "w"]).startswith("vars: x y w\nF1 = ")


def test_read_map_from_disk(write_map):
    path = write_map("vars: x\nF1 = x + x^2\n")
    assert read_map(path, 4).map == MapTuple([Series(1, 4, {(1,): 1, (2,): 1})])


@pytest.mark.parametrize(
    "text,column",
    [
        ("vars: x\nF1 = x + 0*7^2000000000", 14),
        ("vars: x\nF1 = x^300", 8),
        ("vars: x\nF1 = x + 0*(2^200)^30", 19),
    ],
)
def test_oversized_powers_are_rejected(text, column):
    with pytest.raises(MapSyntaxError) as info:
        parse_map(text)
    assert info.value.column == column


def test_moderate_powers_are_accepted():
    parsed = parse_map("vars: x\nF1 = x + 2^3/8*x^2 + 0*3^200 + x^256", 3)
    assert parsed.map[0] == Series(1, 3, {(1,): 1, (2,): 1})
