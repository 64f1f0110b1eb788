"""Formula enumeration and random generation for test corpora."""
from __future__ import annotations

import random
from typing import Iterator, Sequence

from .syntax import AND, BOTTOM, IMP, OR, TENSOR, App, Atom, Formula, Signature, L_INT

BINARY = (AND, OR, IMP, TENSOR)


def binary_ops(sig: Signature) -> list[str]:
    return [op for op in BINARY if op in sig]


def leaves(atoms: Sequence[int], with_bot: bool = True) -> list[Formula]:
    out: list[Formula] = [Atom(a) for a in atoms]
    if with_bot:
        out.append(BOTTOM)
    return out


def by_size(atoms: Sequence[int], sig: Signature = L_INT, max_size: int = 5, with_bot: bool = True) -> list[list[Formula]]:
    """``layers[s]`` = all formulas with exactly ``s`` nodes (``layers[0]`` empty).

    Only binary connectives occur, so every formula has odd size."""
    ops = binary_ops(sig)
    layers: list[list[Formula]] = [[] for _ in range(max_size + 1)]
    if max_size >= 1:
        layers[1] = leaves(atoms, with_bot)
    for s in range(3, max_size + 1, 2):
        out = layers[s]
        for ls in range(1, s - 1, 2):
            rs = s - 1 - ls
            for op in ops:
                for a in layers[ls]:
                    for b in layers[rs]:
                        out.append(App(op, (a, b)))
    return layers


def iter_size(layers: list[list[Formula]], s: int, ops: Sequence[str]) -> Iterator[Formula]:
    """Lazily produce the formulas of size ``s`` from stored smaller layers
    (used when the top layer is too large to keep in memory)."""
    for ls in range(1, s - 1, 2):
        rs = s - 1 - ls
        for op in ops:
            for a in layers[ls]:
                for b in layers[rs]:
                    yield App(op, (a, b))


def count_by_size(n_leaves: int, n_ops: int, max_size: int) -> list[int]:
    c = [0] * (max_size + 1)
    if max_size >= 1:
        c[1] = n_leaves
    for s in range(3, max_size + 1, 2):
        c[s] = n_ops * sum(c[ls] * c[s - 1 - ls] for ls in range(1, s - 1, 2))
    return c


def by_height(atoms: Sequence[int], sig: Signature = L_INT, max_height: int = 2, with_bot: bool = True) -> list[Formula]:
    """All formulas of height at most ``max_height`` (leaves have height 1),
    ordered by height, then connective, then arguments."""
    ops = binary_ops(sig)
    levels = [leaves(atoms, with_bot)]  # levels[h-1] = formulas of height exactly h
    upto = list(levels[0])
    for h in range(2, max_height + 1):
        below = upto
        prev = levels[-1]
        prev_set = set(prev)
        new = []
        for op in ops:
            for a in below:
                for b in below:
                    if a in prev_set or b in prev_set:
                        new.append(App(op, (a, b)))
        levels.append(new)
        upto = upto + new
    return upto


def random_formula(rng: random.Random, atoms: Sequence[int], sig: Signature = L_INT, max_height: int = 3,
                   leaf_prob: float = 0.3, with_bot: bool = True) -> Formula:
    ops = binary_ops(sig)
    lv = leaves(atoms, with_bot)

    def go(h: int) -> Formula:
        if h <= 1 or rng.random() < leaf_prob:
            return rng.choice(lv)
        return App(rng.choice(ops), (go(h - 1), go(h - 1)))

    return go(max_height)


def random_standard(rng: random.Random, atoms: Sequence[int], sig: Signature = L_INT, max_height: int = 3) -> Formula:
    ops = [op for op in binary_ops(sig) if op != OR]
    lv = leaves(atoms)

    def go(h: int) -> Formula:
        if h <= 1 or rng.random() < 0.3:
            return rng.choice(lv)
        return App(rng.choice(ops), (go(h - 1), go(h - 1)))

    return go(max_height)
