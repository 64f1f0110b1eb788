from __future__ import annotations

import pytest
from hypothesis import given

from weaklog.errors import ParseError, SignatureError
from weaklog.syntax import (L_INQ, L_INT, Atom, Schema, Substitution, apply_subst, instantiate, match_template,
                            parse, parse_equation, to_text)
from strategies import formulas


@given(formulas())
def test_print_parse_round_trip(f):
    assert parse(to_text(f)) == f


@given(formulas())
def test_size_counts_nodes(f):
    assert f.size == sum(1 for _ in f.subformulas())


def test_precedence():
    assert parse("p0 -> p1 -> p2") == parse("p0 -> (p1 -> p2)")
    assert parse("p0 & p1 | p2") == parse("(p0 & p1) | p2")
    assert parse("~p0") == parse("p0 -> bot")


def test_standard_flag():
    assert parse("p0 -> p1 * p2").standard
    assert not parse("p0 -> p1 | p2").standard


@pytest.mark.parametrize("text", ["p0 ->", "(p0", "p0 p1", "", "q3"])
def test_parse_errors(text):
    with pytest.raises(ParseError):
        parse(text)


def test_tensor_outside_signature():
    with pytest.raises((ParseError, SignatureError)):
        parse("p0 * p1", L_INT)


def test_equation():
    e = parse_equation("p0 ~ ~~p0")
    assert e.lhs == Atom(0) and e.rhs == parse("~~p0")
    assert parse_equation("p0 = p1") == parse_equation("p0 ~ p1")


@given(formulas(2), formulas(3, max_leaves=4))
def test_substitution_replaces_every_occurrence(f, g):
    h = apply_subst({0: g}, f)
    hits = sum(1 for x in f.subformulas() if x == Atom(0))
    assert h.size == f.size + hits * (g.size - 1)
    if 0 not in g.atoms():
        assert 0 not in h.atoms()
    assert apply_subst(Substitution(), f) == f


def test_match_and_instantiate():
    s = Schema.make("_phi -> (_psi -> _phi)", name="K")
    f = parse("(p0 | p1) -> (bot -> (p0 | p1))")
    asg = match_template(s.template, f)
    assert asg is not None and instantiate(s.template, asg) == f
    assert match_template(s.template, parse("p0 -> (p1 -> p2)")) is None


def test_metavariables_need_flag():
    with pytest.raises(ParseError):
        parse("_phi -> _phi")
    assert parse("_phi -> _phi", L_INQ, allow_meta=True).metas() == {"phi"}
