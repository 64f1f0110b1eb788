from __future__ import annotations

from hypothesis import strategies as st

from weaklog.syntax import AND, BOT, IMP, OR, TENSOR, App, Atom


def formulas(n_atoms: int = 3, ops=(AND, OR, IMP, TENSOR), max_leaves: int = 12):
    leaf = st.one_of(st.integers(0, n_atoms - 1).map(Atom), st.just(App(BOT)))
    return st.recursive(
        leaf,
        lambda kids: st.builds(lambda op, a, b: App(op, (a, b)), st.sampled_from(ops), kids, kids),
        max_leaves=max_leaves,
    )


def int_formulas(n_atoms: int = 3, max_leaves: int = 12):
    return formulas(n_atoms, (AND, OR, IMP), max_leaves)
