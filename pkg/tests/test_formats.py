import pytest
from hypothesis import given

from limitset.errors import FormatError
from limitset.formats import (
    load,
    parse_graph,
    parse_poly_rule,
    parse_rule,
    parse_sft,
    serialize_graph,
    serialize_poly_rule,
    serialize_rule,
    serialize_sft,
)
from limitset.library import and_rule, elementary_rule, golden_mean, path_sft
from limitset.polyca import riccati_rule, square_plus_one
from limitset.shifts import canonical_presentation, equal_subshifts
from strategies import sfts


@given(sfts())
def test_sft_round_trip(sft):
    text = serialize_sft(sft)
    back = parse_sft(text)
    assert back == sft and serialize_sft(back) == text


def test_graph_round_trip():
    p = canonical_presentation(golden_mean())
    text = serialize_graph(p)
    back = parse_graph(text)
    assert serialize_graph(back) == text and equal_subshifts(back, golden_mean())


def test_graph_without_alphabet_line():
    g = parse_graph("vertex: a\nvertex: b\nedge: a b x\nedge: b a y\n")
    assert g.alphabet.symbols == ("x", "y")


@pytest.mark.parametrize("ca", [and_rule(), elementary_rule(110)])
def test_rule_round_trip(ca):
    text = serialize_rule(ca)
    back = parse_rule(text)
    assert back.table == ca.table and back.memory == ca.memory and serialize_rule(back) == text


def test_poly_rule_round_trip():
    for rule in (riccati_rule(), square_plus_one(projective=True)):
        text = serialize_poly_rule(rule)
        assert serialize_poly_rule(parse_poly_rule(text)) == text
    assert parse_poly_rule("memory: 0 1\npoly: 1*t1 + -1*t0^2\n") == riccati_rule()


@pytest.mark.parametrize(
    "text, line",
    [
        ("alphabet: 0 1\nmemory: 0 1\nrule: 0 0 -> 0\nrule: 0 0 -> 1\n", 4),
        ("alphabet: 0 1\nmemory: 0\nrule: 0 1 -> 0\n", 3),
        ("alphabet: 0 1\nmemory: 0\nrule: 2 -> 0\n", 3),
        ("alphabet: 0 1\nmemory: 1 0\n", 2),
        ("alphabet: 0 1\nbogus line\n", 2),
    ],
)
def test_rule_errors_carry_line_numbers(text, line):
    with pytest.raises(FormatError, match=f"r.rule:{line}:"):
        parse_rule(text, "r.rule")


def test_incomplete_rule_table():
    with pytest.raises(FormatError, match="incomplete"):
        parse_rule("alphabet: 0 1\nmemory: 0\nrule: 0 -> 1\n", "r.rule")


def test_sft_errors():
    with pytest.raises(FormatError, match="s.sft:3:"):
        parse_sft("alphabet: a b\nwindow: 0 1\nallow: a\n", "s.sft")
    with pytest.raises(FormatError, match="s.sft:2:"):
        parse_sft("alphabet: a b\nwindow: 1 0\n", "s.sft")
    with pytest.raises(FormatError):
        parse_graph("vertex: a\nedge: a c 0\n")


def test_load_from_disk(tmp_path):
    path = tmp_path / "path.sft"
    path.write_text(serialize_sft(path_sft()))
    assert load(path, "sft") == path_sft()
    with pytest.raises(FormatError, match="cannot read"):
        load(tmp_path / "missing.rule", "rule")
