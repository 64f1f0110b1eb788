"""Logical bimatrices: an algebra with a truth set and a core set.

Includes core-restricted consequence, reduction by the largest congruence
compatible with both predicates, and export of consequence pairs as
equality-free strict universal Horn sentences (TPTP-style ``fof``)."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from .algebra import FiniteAlgebra, Partition, algebra_from_json, coarsest_stable_partition
from .expanded import CoreWitness, Entailment, _assignment_chunks
from .syntax import App, Atom, Formula, Signature, L_INQ, parse


@dataclass(frozen=True)
class Bimatrix:
    alg: FiniteAlgebra
    truth: frozenset
    core: frozenset
    provenance: str = field(default="", compare=False)

    def __post_init__(self):
        for name in ("truth", "core"):
            s = frozenset(int(a) for a in getattr(self, name))
            if any(not 0 <= a < self.alg.size for a in s):
                raise ValueError(f"{name} must be a subset of the universe")
            object.__setattr__(self, name, s)

    @property
    def size(self) -> int:
        return self.alg.size

    def to_json(self) -> dict:
        return self.alg.to_json(core=self.core, truth=self.truth, provenance=self.provenance or None)

    @classmethod
    def from_json(cls, d: dict) -> "Bimatrix":
        alg, extra = algebra_from_json(d)
        return cls(alg, extra.get("truth", frozenset()), extra.get("core", frozenset(range(alg.size))),
                   extra.get("provenance", ""))


def bimatrix_entails(K: Sequence[Bimatrix], Gamma: Sequence[Formula], phi: Formula) -> Entailment:
    """For every member and every assignment of the atoms into its core: if all
    of Gamma is true, so is phi.  First witness in lexicographic order."""
    atoms = sorted(set().union(phi.atoms(), *[g.atoms() for g in Gamma]))
    for i, m in enumerate(K):
        dom = np.array(sorted(m.core), dtype=np.int64)
        if not len(dom):
            continue  # no assignment of the variables into an empty core
        truth = np.zeros(m.size, dtype=bool)
        truth[list(m.truth)] = True
        for _, cols, length in _assignment_chunks(dom, len(atoms)):
            colmap = {a: cols[k] for k, a in enumerate(atoms)}
            alive = np.arange(length)
            for g in Gamma:
                sub = {a: c[alive] for a, c in colmap.items()}
                alive = alive[truth[m.alg.eval_many(g, sub, len(alive))]]
                if not len(alive):
                    break
            if not len(alive):
                continue
            sub = {a: c[alive] for a, c in colmap.items()}
            bad = np.flatnonzero(~truth[m.alg.eval_many(phi, sub, len(alive))])
            if len(bad):
                j = int(alive[bad[0]])
                return Entailment(False, CoreWitness(i, {a: int(colmap[a][j]) for a in atoms}))
    return Entailment(True)


class Reduction(NamedTuple):
    matrix: Bimatrix
    projection: tuple  # element -> block (element of the quotient)
    partition: Partition


def predicate_partition(m: Bimatrix) -> Partition:
    return Partition.from_key([(a in m.truth, a in m.core) for a in range(m.size)])


def leibniz_partition(m: Bimatrix) -> Partition:
    """Largest congruence whose blocks do not split truth or core."""
    return coarsest_stable_partition(m.alg, predicate_partition(m))


def leibniz_reduce(m: Bimatrix) -> Reduction:
    part = leibniz_partition(m)
    q = m.alg.quotient(part)
    ids = part.ids
    red = Bimatrix(q, frozenset(int(ids[a]) for a in m.truth), frozenset(int(ids[a]) for a in m.core),
                   m.provenance + (" (reduced)" if m.provenance else ""))
    return Reduction(red, tuple(int(x) for x in ids), part)


def is_reduced(m: Bimatrix) -> bool:
    return leibniz_partition(m).num_blocks == m.size


# ------------------------------------------------------------------ Horn export

def _term(f: Formula, names: dict[int, str]) -> str:
    if isinstance(f, Atom):
        return names[f.index]
    if not f.args:
        return f.op
    return f"{f.op}(" + ",".join(_term(a, names) for a in f.args) + ")"


def _first_occurrence(fs: Iterable[Formula]) -> list[int]:
    order: list[int] = []
    for f in fs:
        stack = [f]
        while stack:
            g = stack.pop()
            if isinstance(g, Atom):
                if g.index not in order:
                    order.append(g.index)
            elif isinstance(g, App):
                stack.extend(reversed(g.args))
    return order


def horn_sentence(i: int, gamma: Sequence[Formula], phi: Formula, weak: bool) -> str:
    """``fof(c<i>, axiom, ![X0,...]: (t(g1) & ... & d(X0) & ... => t(phi))).``

    Variables are numbered by first occurrence, reading Gamma left to right
    and then phi.  The core atoms ``d(X)`` appear only in weak mode."""
    order = _first_occurrence(list(gamma) + [phi])
    names = {a: f"X{k}" for k, a in enumerate(order)}
    ant = [f"t({_term(g, names)})" for g in gamma]
    if weak:
        ant += [f"d({names[a]})" for a in order]
    cons = f"t({_term(phi, names)})"
    if not ant:
        body = cons
    else:
        lhs = ant[0] if len(ant) == 1 else "(" + " & ".join(ant) + ")"
        body = f"({lhs} => {cons})"
    if order:
        body = "![" + ",".join(names[a] for a in order) + "]: " + body
    return f"fof(c{i}, axiom, {body})."


def export_horn(pairs: Sequence[tuple[Sequence[Formula], Formula]], weak: bool = True) -> str:
    return "".join(horn_sentence(i, g, p, weak) + "\n" for i, (g, p) in enumerate(pairs))


def parse_pairs(text: str, sig: Signature = L_INQ) -> list[tuple[list[Formula], Formula]]:
    """Lines ``g1, g2 |- phi`` (``|-`` alone for an empty Gamma); ``#`` comments."""
    out = []
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "|-" not in line:
            raise ValueError(f"line {no}: expected 'gamma |- phi'")
        left, right = line.split("|-", 1)
        gamma = [parse(g, sig) for g in left.split(",") if g.strip()]
        out.append((gamma, parse(right, sig)))
    return out


def load_bimatrix(path) -> Bimatrix:
    with open(path, encoding="utf-8") as fh:
        return Bimatrix.from_json(json.load(fh))
