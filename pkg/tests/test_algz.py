from __future__ import annotations

import json

import pytest

from weaklog.algz import (TransformerPair, check_alg3, check_alg4, delta_apply, inqb_pair, load_pair,
                          nonalgebraizability_replay, tau_apply)
from weaklog.corpus import by_height
from weaklog.expanded import ExpandedAlgebra
from weaklog.heyting import medvedev_algebra, regular_core
from weaklog.syntax import L_INT, parse, parse_equation
from weaklog.team import logic_oracle


def _K():
    return [regular_core(medvedev_algebra(s)) for s in (1, 2, 3)]


def test_transformers_apply():
    t = inqb_pair()
    assert tau_apply(t, parse("p0 | p1")) == [parse_equation("p0 | p1 ~ bot -> bot")]
    assert delta_apply(t, parse_equation("p0 ~ p1")) == [parse("(p0 -> p1) & (p1 -> p0)")]


def test_json_round_trip(tmp_path):
    t = inqb_pair()
    path = tmp_path / "pair.json"
    path.write_text(json.dumps(t.to_json()))
    assert load_pair(path) == t


def test_templates_are_validated():
    with pytest.raises(ValueError):
        TransformerPair.from_text(["_phi ~ p0"], ["_x -> _y"])
    with pytest.raises(ValueError):
        TransformerPair.from_text(["_phi ~ bot -> bot"], ["_x -> _z"])


def test_alg4_holds_on_regular_cores():
    assert check_alg4(_K(), inqb_pair()).holds


def test_alg4_fails_with_one_sided_delta():
    t = TransformerPair.from_text(["_phi ~ bot -> bot"], ["_x -> _y"])
    res = check_alg4(_K(), t)
    assert not res.holds
    i, a, b = res.witness
    assert a != b


def test_alg4_holds_on_full_universe():
    # a <-> b is top exactly when a = b in any Heyting algebra
    K = [ExpandedAlgebra(medvedev_algebra(2).alg, frozenset(range(5)))]
    assert check_alg4(K, inqb_pair()).holds


@pytest.mark.parametrize("logic", ["inqb", "inqi"])
def test_alg3_on_small_corpus(logic):
    corpus = by_height((0, 1), L_INT, 2)
    assert check_alg3(logic_oracle(logic, 2), inqb_pair(), corpus).ok


def test_alg3_detects_a_bad_tau():
    t = TransformerPair.from_text(["_phi ~ bot"], ["(_x -> _y) & (_y -> _x)"])
    rep = check_alg3(logic_oracle("inqb"), t, [parse("p0"), parse("p0 -> p0")])
    assert not rep.ok


def test_nonalgebraizability_rows():
    rows = nonalgebraizability_replay(_K(), frame_size=2)
    assert rows and all(r.excluded for r in rows)
