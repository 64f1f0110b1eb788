from __future__ import annotations

import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from weaklog.corpus import by_height
from weaklog.heyting import posets
from weaklog.proofsys import AXIOMS
from weaklog.soundness import (FillerPool, KripkeBlockCheck, MultiModel, ValueTable, check_schema_exhaustive,
                               check_schema_inclusion, check_schema_sampled)
from weaklog.syntax import L_INQ, L_INT, Schema, instantiate
from weaklog.team import ClassicalTeamModel, kripke_bundle

CORPUS = by_height((0, 1), L_INQ, 2)
STD = [f for f in CORPUS if f.standard]
FRAMES = [P for n in (1, 2) for P in posets(n)]


@pytest.fixture(scope="module")
def classical():
    table = ValueTable(ClassicalTeamModel(2))
    return table, FillerPool.build(table, CORPUS), FillerPool.build(table, STD)


def _direct_failures(model, schema, fillers_any, fillers_std):
    metas = sorted(schema.template.metas())
    pools = [fillers_std if schema.sort_of(m) == "standard" else fillers_any for m in metas]
    bad = 0
    for choice in itertools.product(*pools):
        if model.value(instantiate(schema.template, dict(zip(metas, choice)))) != model.full:
            bad += 1
    return bad


def test_pool_dedupes_by_value(classical):
    table, ap, sp = classical
    assert len(ap) < len(CORPUS)
    assert len({table.of(f) for f in CORPUS}) == len(ap)
    assert set(sp.ids) <= set(ap.ids)


@pytest.mark.parametrize("name", ["A1", "A6", "A9", "A10", "A12", "DNE"])
def test_classical_axioms_hold(classical, name):
    table, ap, sp = classical
    assert check_schema_exhaustive(table, AXIOMS[name], ap, sp).ok


@pytest.mark.parametrize("text,std", [("_phi -> _psi", ()), ("~~_phi -> _phi", ()), ("(_phi -> _psi | _chi) -> (_phi -> _psi) | (_phi -> _chi)", ())])
def test_unsound_schemas_are_caught(classical, text, std):
    table, ap, sp = classical
    sch = Schema.make(text, std, name="x")
    res = check_schema_exhaustive(table, sch, ap, sp, max_failures=1)
    assert not res.ok
    inst = instantiate(sch.template, res.failures[0])
    assert not ClassicalTeamModel(2).valid(inst)


def test_exhaustive_counts_agree_with_direct_evaluation():
    # small enough to instantiate every tuple of representatives
    model = ClassicalTeamModel(2)
    table = ValueTable(model)
    fs = by_height((0, 1), L_INT, 2)[:40]
    ap = FillerPool.build(table, fs)
    sch = Schema.make("(_phi -> _psi) -> (~_psi -> ~_phi)", name="contra")
    assert check_schema_exhaustive(table, sch, ap, ap).ok
    assert _direct_failures(model, sch, ap.reps, ap.reps) == 0
    sch = Schema.make("(_phi -> _psi) -> (_psi -> _phi)", name="conv")
    res = check_schema_exhaustive(table, sch, ap, ap, max_failures=10**6)
    assert len(res.failures) == _direct_failures(model, sch, ap.reps, ap.reps)


def test_chunking_does_not_change_the_answer(classical):
    table, ap, sp = classical
    sch = Schema.make("(_phi -> _psi) -> (_psi -> _phi)", name="conv")
    a = check_schema_exhaustive(table, sch, ap, sp, max_failures=10**6)
    b = check_schema_exhaustive(table, sch, ap, sp, chunk_rows=7, max_failures=10**6)
    key = lambda r: sorted((str(x["phi"]), str(x["psi"])) for x in r.failures)
    assert key(a) == key(b)


def test_inclusion_matches_exhaustive(classical):
    table, ap, sp = classical
    assert check_schema_inclusion(table, AXIOMS["A14"], ap, sp).ok
    assert check_schema_exhaustive(table, AXIOMS["A14"], ap, sp).ok
    bad = Schema.make("(_phi -> _chi) -> ((_psi -> _tau) -> (_phi * _psi -> _chi & _tau))", name="bad")
    res = check_schema_inclusion(table, bad, ap, sp)
    assert not res.ok
    assert not ClassicalTeamModel(2).valid(instantiate(bad.template, res.failures[0]))
    assert not check_schema_exhaustive(table, bad, ap, sp, max_failures=1).ok


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**31 - 1))
def test_sampled_never_contradicts_exhaustive(seed):
    import random

    table = ValueTable(ClassicalTeamModel(2))
    ap = FillerPool.build(table, CORPUS)
    sch = Schema.make("_phi | _psi -> _phi", name="x")
    res = check_schema_sampled(table, sch, ap, ap, 50, random.Random(seed))
    for asg in res.failures:
        assert not ClassicalTeamModel(2).valid(instantiate(sch.template, asg))


def test_block_check_agrees_with_bundle():
    chk = KripkeBlockCheck(FRAMES, (0, 1), CORPUS, STD)
    multi = MultiModel([kripke_bundle(P, (0, 1)) for P in FRAMES])
    for name in ("A1", "A8", "A10", "A11", "A13"):
        assert chk.check(AXIOMS[name]).ok, name
    res = chk.check(AXIOMS["DNE"], max_failures=1)
    assert not res.ok
    asg = {k: v for k, v in res.failures[0].items() if k in ("alpha",)}
    assert multi.value(instantiate(AXIOMS["DNE"].template, asg)) != multi.full


def test_block_check_rejects_split_for_arbitrary_antecedents():
    chk = KripkeBlockCheck(FRAMES, (0, 1), CORPUS, STD)
    loose = Schema.make("(_alpha -> _phi | _psi) -> (_alpha -> _phi) | (_alpha -> _psi)", (), name="split")
    assert not chk.check(loose, max_failures=1).ok
