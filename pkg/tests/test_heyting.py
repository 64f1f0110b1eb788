from __future__ import annotations

import pytest
from hypothesis import given, settings

from weaklog.errors import CapExceeded, WeaklogError
from weaklog.heyting import (FinitePoset, heyting_violations, ipc_equiv_bounded, medvedev_algebra, medvedev_frame,
                             ml_entails_bounded, posets, product_heyting, regular_core, rooted_posets,
                             tensor_violations, upset_algebra)
from weaklog.syntax import parse
from strategies import int_formulas

# numbers of posets up to isomorphism, and of rooted ones
POSET_COUNTS = {1: 1, 2: 2, 3: 5, 4: 16}
ROOTED_COUNTS = {1: 1, 2: 1, 3: 2, 4: 5}


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_poset_enumeration_counts(n):
    assert len(posets(n)) == POSET_COUNTS[n]
    assert len(rooted_posets(n)) == ROOTED_COUNTS[n]


def test_posets_are_pairwise_non_isomorphic():
    ps = posets(4)
    for i, a in enumerate(ps):
        for b in ps[i + 1:]:
            assert not a.isomorphic(b)


@pytest.mark.parametrize("s,size,regular", [(1, 2, 2), (2, 5, 4), (3, 19, 8)])
def test_medvedev_sizes(s, size, regular):
    h = medvedev_algebra(s)
    assert h.size == size
    assert len(h.regular_elements()) == regular
    assert regular_core(h).core == h.regular_elements()


def test_medvedev_cap():
    with pytest.raises(CapExceeded):
        medvedev_frame(5)


def test_chain_upsets():
    h = upset_algebra(FinitePoset.chain(3))
    assert h.size == 4
    assert h.neg(h.bot) == h.top
    assert all(h.leq(h.bot, a) and h.leq(a, h.top) for a in range(h.size))


@pytest.mark.parametrize("s", [1, 2, 3])
def test_team_tensor_laws(s):
    assert tensor_violations(medvedev_algebra(s, tensor=True)) == []


def test_product_is_heyting():
    h = product_heyting([upset_algebra(FinitePoset.chain(2)), upset_algebra(FinitePoset.antichain(2))])
    assert h.size == 3 * 4
    assert heyting_violations(h.alg) == []


def test_non_heyting_rejected():
    from weaklog.heyting import HeytingAlgebra
    from weaklog.algebra import FiniteAlgebra
    from weaklog.syntax import L_INT

    bad = FiniteAlgebra(L_INT, 2, {"and": [[0, 0], [0, 1]], "or": [[0, 1], [1, 1]],
                                   "imp": [[0, 0], [0, 0]], "bot": 0})
    with pytest.raises(WeaklogError):
        HeytingAlgebra(bad)


def test_ipc_equivalence():
    assert ipc_equiv_bounded(parse("~~~p0"), parse("~p0"), 4).equivalent_up_to_bound
    v = ipc_equiv_bounded(parse("~~p0"), parse("p0"), 4)
    assert not v.equivalent_up_to_bound and v.countermodel is not None


@settings(max_examples=40, deadline=None)
@given(int_formulas(2, max_leaves=6))
def test_glivenko(f):
    # ~~f is classically valid iff it is valid on every finite Heyting algebra
    ml = ml_entails_bounded([], parse("~~(" + str(f) + ")"), 2).holds
    from weaklog.team import ClassicalTeamModel

    m = ClassicalTeamModel(2)
    classical = all(m.supports([w], f) for w in range(4))
    assert ml == classical
