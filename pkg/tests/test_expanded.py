from __future__ import annotations

import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from weaklog.algebra import random_algebra
from weaklog.expanded import (ExpandedAlgebra, NotUnivariate, QuasiEquation, check_preservation, core_entails,
                              core_valid, parse_sigma, sigma_core, subalgebras)
from weaklog.heyting import DNE_EQUATION, FinitePoset, medvedev_algebra, regular_core, upset_algebra
from weaklog.syntax import L_INT, TOP, Equation, parse, parse_equation
from strategies import int_formulas


def _members():
    return [regular_core(medvedev_algebra(s)) for s in (1, 2, 3)]


def test_dne_holds_on_regular_cores_only():
    K = _members()
    assert core_entails(K, [], DNE_EQUATION).holds
    w = core_entails(K, [], DNE_EQUATION, restrict=False)
    assert not w.holds and w.witness.algebra == 1


def test_witness_is_least():
    K = _members()
    res = core_entails(K, [], parse_equation("p0 | ~p0 ~ ~bot"), restrict=False)
    assert not res.holds
    alg = K[res.witness.algebra].alg
    a = res.witness.assignment[0]
    assert alg.eval(parse("p0 | ~p0"), {0: a}) != alg.eval(TOP, {})
    for b in range(a):
        assert alg.eval(parse("p0 | ~p0"), {0: b}) == alg.eval(TOP, {})


def test_empty_core_is_vacuous():
    alg = upset_algebra(FinitePoset.chain(2)).alg
    ea = ExpandedAlgebra(alg, frozenset())
    assert core_entails([ea], [], parse_equation("bot ~ ~bot")).holds
    assert core_entails([ea], [], parse_equation("p0 ~ bot")).holds


def _brute_core_entails(ea, theta, concl):
    atoms = sorted(set().union(concl.atoms(), *[e.atoms() for e in theta]))
    for vals in itertools.product(sorted(ea.core), repeat=len(atoms)):
        h = dict(zip(atoms, vals))
        if all(ea.alg.eval(e.lhs, h) == ea.alg.eval(e.rhs, h) for e in theta):
            if ea.alg.eval(concl.lhs, h) != ea.alg.eval(concl.rhs, h):
                return False
    return True


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 2**31 - 1), int_formulas(2, max_leaves=5), int_formulas(2, max_leaves=5),
       int_formulas(2, max_leaves=5))
def test_core_entailment_matches_brute_force(seed, g, f, h):
    rng = np.random.default_rng(seed)
    alg = random_algebra(L_INT, 3, rng)
    core = frozenset(int(a) for a in np.flatnonzero(rng.integers(0, 2, 3)))
    ea = ExpandedAlgebra(alg, core)
    theta = [Equation(g, f)]
    concl = Equation(f, h)
    assert core_entails([ea], theta, concl).holds == _brute_core_entails(ea, theta, concl)


def test_sigma_core():
    h = medvedev_algebra(2)
    assert sigma_core(h.alg, [DNE_EQUATION]) == h.regular_elements()
    with pytest.raises(NotUnivariate):
        sigma_core(h.alg, parse_sigma(["p0 ~ p1"]))


def test_quasi_equation_parse():
    q = QuasiEquation.parse("p0 ~ ~bot, p1 ~ p0 => p1 ~ ~bot")
    assert len(q.premises) == 2 and str(q.conclusion) == "p1 ~ ~bot"
    assert core_valid(regular_core(medvedev_algebra(2)), q).holds


def test_subalgebras_contain_generated():
    alg = medvedev_algebra(2).alg
    subs = subalgebras(alg)
    assert frozenset(range(alg.size)) in subs
    assert all(alg.op("and", a, b) in s for s in subs for a in s for b in s)


@pytest.mark.parametrize("op", ["S", "P", "C"])
def test_preservation_on_medvedev(op):
    K = _members()[:2]
    ambient = _members()
    q = QuasiEquation.parse("p0 ~ ~~p0")
    rep = check_preservation(K, [DNE_EQUATION], q, op, ambient=ambient)
    assert rep.ok, rep.violations
    assert rep.instances > 0


def test_preservation_rejects_uncored_members():
    alg = medvedev_algebra(2).alg
    with pytest.raises(ValueError):
        check_preservation([ExpandedAlgebra(alg, frozenset({0}))], [DNE_EQUATION], QuasiEquation.parse("p0 ~ p0"), "S")
