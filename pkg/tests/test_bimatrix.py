from __future__ import annotations

import json
from importlib import resources

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from weaklog import oracles
from weaklog.algebra import random_algebra
from weaklog.bimatrix import (Bimatrix, bimatrix_entails, export_horn, horn_sentence, is_reduced, leibniz_reduce,
                              load_bimatrix, parse_pairs)
from weaklog.heyting import FinitePoset, upset_algebra
from weaklog.syntax import L_INT, parse


def _random_bimatrix(seed: int, size: int) -> Bimatrix:
    rng = np.random.default_rng(seed)
    alg = random_algebra(L_INT, size, rng)
    truth = frozenset(int(a) for a in np.flatnonzero(rng.integers(0, 2, size)))
    core = frozenset(int(a) for a in np.flatnonzero(rng.integers(0, 2, size)))
    return Bimatrix(alg, truth, core)


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2**31 - 1), st.integers(1, 3))
def test_reduction_against_polynomial_separation(seed, size):
    m = _random_bimatrix(seed, size)
    red = leibniz_reduce(m)
    brute, closed = oracles.brute_leibniz(m.alg, m.truth, m.core, depth=3)
    assert red.partition.refines(brute)
    if closed:
        assert brute.refines(red.partition)
    assert is_reduced(red.matrix)
    assert leibniz_reduce(red.matrix).matrix.size == red.matrix.size


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2**31 - 1), st.integers(1, 3))
def test_reduction_preserves_consequence(seed, size):
    m = _random_bimatrix(seed, size)
    red = leibniz_reduce(m).matrix
    pairs = [([], parse("p0 -> p0")), ([parse("p0")], parse("p0 | p1")), ([parse("p0 & p1")], parse("p1")),
             ([parse("p0"), parse("p0 -> p1")], parse("p1")), ([], parse("~~p0 -> p0"))]
    for gamma, phi in pairs:
        assert bimatrix_entails([m], gamma, phi).holds == bimatrix_entails([red], gamma, phi).holds


def test_entailment_matches_table():
    h = upset_algebra(FinitePoset.chain(2))
    m = Bimatrix(h.alg, {h.top}, frozenset(range(h.size)))
    fs = [parse("p0"), parse("~~p0"), parse("p0 | ~p0")]
    tab = oracles.entailment_table(m.alg, m.truth, m.core, fs, (0,))
    assert bimatrix_entails([m], [fs[1]], fs[0]).holds == (tab[1] & ~tab[0] == 0)
    assert not bimatrix_entails([m], [], fs[2]).holds


def test_empty_core_is_vacuous():
    h = upset_algebra(FinitePoset.chain(2))
    m = Bimatrix(h.alg, frozenset(), frozenset())
    assert bimatrix_entails([m], [], parse("bot")).holds


def test_json_round_trip(tmp_path):
    m = _random_bimatrix(3, 3)
    p = tmp_path / "m.json"
    p.write_text(json.dumps(m.to_json()))
    assert load_bimatrix(p) == m


def test_horn_sentence_shapes():
    assert horn_sentence(0, [], parse("p0 -> p0"), True) == "fof(c0, axiom, ![X0]: (d(X0) => t(imp(X0,X0))))."
    assert horn_sentence(0, [], parse("p0 -> p0"), False) == "fof(c0, axiom, ![X0]: t(imp(X0,X0)))."
    assert horn_sentence(1, [], parse("bot -> bot"), True) == "fof(c1, axiom, t(imp(bot,bot)))."


@pytest.mark.parametrize("weak,name", [(True, "horn_weak.p"), (False, "horn_standard.p")])
def test_horn_golden_files(weak, name):
    data = resources.files("weaklog.data")
    pairs = parse_pairs(data.joinpath("horn_pairs.txt").read_text(encoding="utf-8"))
    assert export_horn(pairs, weak=weak) == data.joinpath(name).read_text(encoding="utf-8")


def test_parse_pairs_errors():
    with pytest.raises(ValueError):
        parse_pairs("p0, p1")
