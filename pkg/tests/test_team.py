from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from weaklog import oracles
from weaklog.errors import CapExceeded, WeaklogError
from weaklog.heyting import FinitePoset, posets
from weaklog.syntax import parse
from weaklog.team import (ClassicalTeamModel, KripkeBundle, KripkeTeamModel, inqb_entails, inqb_equivalent,
                          inqi_countermodel_search, inqi_entails_bounded, kripke_bundle, logic_oracle,
                          supports_classical, supports_kripke)
from strategies import formulas

M2 = ClassicalTeamModel(2)


@settings(max_examples=150, deadline=None)
@given(formulas(2, max_leaves=8))
def test_classical_value_matches_naive(f):
    v = M2.value(f)
    for t in range(16):
        team = frozenset(w for w in range(4) if t >> w & 1)
        assert bool(v >> t & 1) == oracles.naive_supports(team, f, (0, 1))


@given(formulas(3, max_leaves=10))
def test_empty_team_and_downward_closure(f):
    m = ClassicalTeamModel(3)
    v = m.value(f)
    assert v & 1
    for t in range(256):
        if v >> t & 1:
            # every subteam of a supporting team supports
            for w in range(8):
                assert v >> (t & ~(1 << w)) & 1


def test_apply_rejects_unknown_connective():
    with pytest.raises(WeaklogError):
        M2.apply("xor", 1, 1)


def test_atom_cap():
    with pytest.raises(CapExceeded):
        ClassicalTeamModel(6)


def test_inqb_witness_is_real():
    phi = parse("p0 | ~p0")
    v = inqb_entails([], phi)
    assert not v.holds
    assert not oracles.naive_supports(frozenset(v.witness.world_list()), phi, v.witness.atoms)
    assert inqb_entails([parse("p0"), parse("p0 -> p1")], parse("p1")).holds


def test_inqb_plain_rejects_tensor():
    with pytest.raises(WeaklogError):
        inqb_entails([], parse("p0 * p1 -> p0"), tensor=False)


def test_dne_holds_for_standard_formulas_only():
    assert inqb_equivalent(parse("~~(p0 -> p1)"), parse("p0 -> p1"))
    assert not inqb_equivalent(parse("~~(p0 | p1)"), parse("p0 | p1"))


def test_supports_classical_accepts_world_lists():
    assert supports_classical([1, 3], parse("p0"), (0, 1))
    assert not supports_classical([0, 1], parse("p0"), (0, 1))
    with pytest.raises(ValueError):
        supports_classical([3], parse("p0"))


# ------------------------------------------------------------------ Kripke

FRAMES = [P for n in (1, 2, 3) for P in posets(n)]


def _naive_block(P, atoms, val, f):
    leq = [[bool(P.leq[i, j]) for j in range(P.size)] for i in range(P.size)]
    vmap = {a: frozenset(i for i in range(P.size) if u >> i & 1) for a, u in zip(atoms, val)}
    out = 0
    for t in range(1 << P.size):
        team = frozenset(i for i in range(P.size) if t >> i & 1)
        if oracles.naive_supports_kripke(leq, vmap, team, f):
            out |= 1 << t
    return out


@settings(max_examples=40, deadline=None)
@given(formulas(2, max_leaves=6), st.sampled_from(FRAMES))
def test_kripke_bundle_matches_naive(f, P):
    b = kripke_bundle(P, (0, 1))
    v = b.value(f)
    mask = (1 << b.width) - 1
    step = max(1, b.blocks // 6)
    for k in range(0, b.blocks, step):
        assert (v >> (k * b.width)) & mask == _naive_block(P, (0, 1), b.valuations[k], f)


@settings(max_examples=60, deadline=None)
@given(formulas(2, max_leaves=8))
def test_one_point_frame_is_classical(f):
    # a single point is a single world; the team {w} behaves classically
    b = kripke_bundle(FRAMES[0], (0, 1))
    m = ClassicalTeamModel(2)
    v = b.value(f)
    for k, val in enumerate(b.valuations):
        w = sum((u & 1) << i for i, u in enumerate(val))
        assert bool(v >> (k * 2 + 1) & 1) == m.supports([w], f)


def test_kripke_persistence():
    P = FinitePoset.chain(3)
    b = kripke_bundle(P, (0,))
    for f in map(parse, ["p0", "~p0", "~~p0 -> p0", "p0 | ~p0"]):
        v = b.value(f)
        for k in range(b.blocks):
            for i in range(3):
                if v >> (k * b.width + (1 << i)) & 1:
                    for j in range(3):
                        if P.leq[i, j]:
                            assert v >> (k * b.width + (1 << j)) & 1


def test_double_negation_has_intuitionistic_countermodel():
    cm = inqi_countermodel_search(parse("~~p0 -> p0"), 3)
    assert cm is not None
    assert not supports_kripke(cm.model, cm.team, parse("~~p0 -> p0"))
    assert inqi_countermodel_search(parse("p0 -> p0 | p1"), 3) is None


def test_split_is_intuitionistic_for_standard_antecedent():
    assert inqi_entails_bounded([parse("~p0 -> p1 | p2")], parse("(~p0 -> p1) | (~p0 -> p2)"), 2) is None


def test_valuation_must_be_persistent():
    with pytest.raises(ValueError):
        KripkeTeamModel.make(FinitePoset.chain(2), {0: 0b01})


def test_logic_oracle_names():
    assert logic_oracle("inqb")([], parse("~~p0 -> p0"))
    assert not logic_oracle("inqi", 2)([], parse("~~p0 -> p0"))
    with pytest.raises(ValueError):
        logic_oracle("cl")


def test_tensor_single_block_matches_bundle():
    P = FinitePoset.chain(2)
    b = kripke_bundle(P, (0, 1))
    f = parse("p0 * p1")
    v = b.value(f)
    for k, val in enumerate(b.valuations):
        single = KripkeBundle(P, (0, 1), [val])
        assert single.value(f) == (v >> (k * b.width)) & ((1 << b.width) - 1)
