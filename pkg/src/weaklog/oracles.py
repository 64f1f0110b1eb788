"""Slow, direct reference implementations used to cross-check the fast paths.

Nothing here is clever: teams are frozensets of worlds, subteams are listed
explicitly, and polynomial functions are enumerated as value vectors."""
from __future__ import annotations

import itertools
from typing import Sequence

from .algebra import FiniteAlgebra, Partition
from .syntax import AND, BOT, IMP, OR, TENSOR, Atom, Formula


def worlds(n_atoms: int) -> list[tuple[int, ...]]:
    """World ``w`` assigns bit ``i`` of ``w`` to the ``i``-th atom."""
    return [tuple((w >> i) & 1 for i in range(n_atoms)) for w in range(1 << n_atoms)]


def subteams(team: frozenset) -> list[frozenset]:
    items = sorted(team)
    return [frozenset(c) for r in range(len(items) + 1) for c in itertools.combinations(items, r)]


def naive_supports(team: frozenset, f: Formula, atoms: Sequence[int]) -> bool:
    """Classical team support, clause by clause.  ``team`` holds world numbers."""
    pos = {a: i for i, a in enumerate(atoms)}
    if isinstance(f, Atom):
        i = pos[f.index]
        return all((w >> i) & 1 for w in team)
    if f.op == BOT:
        return not team
    a = f.args[0]
    b = f.args[1]
    if f.op == AND:
        return naive_supports(team, a, atoms) and naive_supports(team, b, atoms)
    if f.op == OR:
        return naive_supports(team, a, atoms) or naive_supports(team, b, atoms)
    if f.op == IMP:
        return all(naive_supports(u, b, atoms) for u in subteams(team) if naive_supports(u, a, atoms))
    if f.op == TENSOR:
        for u in subteams(team):
            if naive_supports(u, a, atoms) and naive_supports(team - u, b, atoms):
                return True
        return False
    raise ValueError(f.op)


def naive_valid(f: Formula, atoms: Sequence[int]) -> bool:
    return naive_supports(frozenset(range(1 << len(atoms))), f, atoms)


def naive_supports_kripke(leq, valuation: dict, team: frozenset, f: Formula) -> bool:
    """Intuitionistic team support on a frame given by its order matrix.
    ``valuation`` maps atoms to sets of points."""
    if isinstance(f, Atom):
        return team <= valuation[f.index]
    if f.op == BOT:
        return not team
    a = f.args[0]
    b = f.args[1]
    if f.op == AND:
        return naive_supports_kripke(leq, valuation, team, a) and naive_supports_kripke(leq, valuation, team, b)
    if f.op == OR:
        return naive_supports_kripke(leq, valuation, team, a) or naive_supports_kripke(leq, valuation, team, b)
    if f.op == IMP:
        n = len(leq)
        above = frozenset(j for i in team for j in range(n) if leq[i][j])
        return all(naive_supports_kripke(leq, valuation, u, b) for u in subteams(above)
                   if naive_supports_kripke(leq, valuation, u, a))
    if f.op == TENSOR:
        return any(naive_supports_kripke(leq, valuation, u, a) and naive_supports_kripke(leq, valuation, team - u, b)
                   for u in subteams(team))
    raise ValueError(f.op)


# ------------------------------------------------------------------ polynomials

def unary_polynomials(alg: FiniteAlgebra, depth: int) -> tuple[list[tuple[int, ...]], bool]:
    """All unary polynomial functions of nesting depth at most ``depth`` (the
    variable and every constant have depth 0), as value vectors.  The flag
    says whether the set was already closed under the operations."""
    n = alg.size
    ident = tuple(range(n))
    found = {ident}
    found.update(tuple([c] * n) for c in range(n))
    for op, ar in alg.sig.connectives:
        if ar == 0:
            found.add(tuple([alg.op(op)] * n))
    binary = [(op, alg.tables[op]) for op, ar in alg.sig.connectives if ar == 2]
    closed = False
    for _ in range(depth):
        cur = sorted(found)
        new = set()
        for op, tab in binary:
            for f in cur:
                for g in cur:
                    h = tuple(int(tab[f[x], g[x]]) for x in range(n))
                    if h not in found:
                        new.add(h)
        if not new:
            closed = True
            break
        found |= new
    return sorted(found), closed


def brute_leibniz(alg: FiniteAlgebra, truth, core, depth: int = 3) -> tuple[Partition, bool]:
    """Elements are identified when no polynomial of bounded depth separates
    them by membership in the truth set or the core."""
    polys, closed = unary_polynomials(alg, depth)
    truth, core = set(truth), set(core)
    keys = []
    for a in range(alg.size):
        keys.append(tuple((p[a] in truth, p[a] in core) for p in polys))
    return Partition.from_key(keys), closed


def entailment_table(alg: FiniteAlgebra, truth, core, formulas: Sequence[Formula], atoms: Sequence[int]) -> list[int]:
    """For each formula, the bitmask of core assignments making it true."""
    core = sorted(core)
    truth = set(truth)
    out = []
    for f in formulas:
        m = 0
        for k, vals in enumerate(itertools.product(core, repeat=len(atoms))):
            if alg.eval(f, dict(zip(atoms, vals))) in truth:
                m |= 1 << k
        out.append(m)
    return out
