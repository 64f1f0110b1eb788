from __future__ import annotations

import pytest
from hypothesis import given, settings

from weaklog.errors import DerivationFormatError, DNFTooLarge
from weaklog.proofsys import AXIOMS, check_derivation, dnf, fixpoint_iterate, parse_derivation, system
from weaklog.syntax import L_INT, big_or, parse
from weaklog.team import ClassicalTeamModel, kripke_bundle
from weaklog.heyting import FinitePoset
from strategies import formulas, int_formulas

IDENTITY = """
p0 -> ((p0 -> p0) -> p0) ; axiom A1
(p0 -> ((p0 -> p0) -> p0)) -> ((p0 -> (p0 -> p0)) -> (p0 -> p0)) ; axiom A2
(p0 -> (p0 -> p0)) -> (p0 -> p0) ; mp 2 1
p0 -> (p0 -> p0) ; axiom A1
p0 -> p0 ; mp 3 4
"""


def test_identity_derivation():
    d = parse_derivation(IDENTITY, L_INT)
    assert check_derivation("inqi", [], d, parse("p0 -> p0")).ok


def test_bad_modus_ponens_is_located():
    d = parse_derivation(IDENTITY.replace("mp 3 4", "mp 4 3"), L_INT)
    r = check_derivation("inqi", [], d)
    assert not r.ok and r.bad_line == 5


def test_premises_and_wrong_conclusion():
    d = parse_derivation("p0 ; premise 1\np0 -> p1 ; premise 2\np1 ; mp 2 1\n")
    assert check_derivation("inqb", [parse("p0"), parse("p0 -> p1")], d).ok
    r = check_derivation("inqb", [parse("p0")], d)
    assert not r.ok and r.bad_line == 2
    assert check_derivation("inqb", [parse("p0"), parse("p0 -> p1")], d, parse("p0")).bad_line == 3


def test_split_needs_standard_antecedent():
    ok = parse_derivation("(~p0 -> p1 | p2) -> (~p0 -> p1) | (~p0 -> p2) ; axiom A10")
    assert check_derivation("inqi", [], ok).ok
    bad = parse_derivation("((p0 | p3) -> p1 | p2) -> ((p0 | p3) -> p1) | ((p0 | p3) -> p2) ; axiom A10")
    assert not check_derivation("inqi", [], bad).ok


def test_dne_only_in_classical_systems():
    d = parse_derivation("~~p0 -> p0 ; axiom DNE")
    assert check_derivation("inqb", [], d).ok
    assert not check_derivation("inqi", [], d).ok


def test_tensor_outside_plain_systems():
    d = parse_derivation("p0 -> p0 * p1 ; axiom A11")
    assert check_derivation("inqit", [], d).ok
    assert not check_derivation("inqi", [], d).ok


def test_format_errors():
    with pytest.raises(DerivationFormatError):
        parse_derivation("p0 -> p0")
    with pytest.raises(DerivationFormatError):
        parse_derivation("p0 ; because")
    with pytest.raises(KeyError):
        system("cl")


def test_axiom_table():
    assert set(system("inqbt").axioms) == set(AXIOMS)
    assert "DNE" not in system("inqit").axioms


@settings(max_examples=150, deadline=None)
@given(formulas(3, max_leaves=8))
def test_dnf_is_classically_equivalent(f):
    try:
        ds = dnf(f, "inq")
    except DNFTooLarge:
        return
    assert all(d.standard for d in ds)
    m = ClassicalTeamModel(3)
    assert m.value(big_or(ds)) == m.value(f)


@settings(max_examples=60, deadline=None)
@given(int_formulas(2, max_leaves=6))
def test_dnf_holds_on_kripke_frames(f):
    try:
        ds = dnf(f, "int")
    except DNFTooLarge:
        return
    b = kripke_bundle(FinitePoset.chain(2), (0, 1))
    assert b.value(big_or(ds)) == b.value(f)


def test_dnf_cap():
    f = parse("(p0 | p1 | p2 | p3) -> (p0 | p1 | p2 | p3)")
    with pytest.raises(DNFTooLarge):
        dnf(f, "int", cap=8)


@pytest.mark.parametrize("text", ["bot -> bot", "~~p0", "p0", "bot"])
def test_fixpoints(text):
    r = fixpoint_iterate(parse(text))
    assert r.period == 1


def test_negation_cycles():
    r = fixpoint_iterate(parse("~p0"))
    assert r.period == 2 and r.fixpoint is None


def test_fixpoint_needs_one_variable():
    with pytest.raises(ValueError):
        fixpoint_iterate(parse("p0 -> p1"))
