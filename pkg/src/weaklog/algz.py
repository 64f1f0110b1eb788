"""Transformer pairs (tau, Delta) and finite checks of the algebraizability
conditions for weak logics."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Callable, Iterable, NamedTuple, Sequence

import numpy as np

from .expanded import ExpandedAlgebra, core_entails, sigma_core
from .syntax import (TOP, Atom, Equation, Formula, Meta, Signature, L_INQ, instantiate, iff, parse,
                     parse_equation, to_text)

Oracle = Callable[[Sequence[Formula], Formula], bool]

PHI, X, Y = "phi", "x", "y"


def _dedupe(items):
    seen, out = set(), []
    for it in items:
        if it not in seen:
            seen.add(it)
            out.append(it)
    return out


@dataclass(frozen=True)
class TransformerPair:
    """``tau``: equation templates in ``_phi``; ``delta``: formula templates in ``_x``, ``_y``."""

    tau: tuple[Equation, ...]
    delta: tuple[Formula, ...]
    name: str = ""

    def __post_init__(self):
        for e in self.tau:
            if not (e.lhs.metas() | e.rhs.metas()) <= {PHI}:
                raise ValueError("tau templates may only use the metavariable _phi")
            if e.atoms():
                raise ValueError("tau templates may not mention atoms")
        for d in self.delta:
            if not d.metas() <= {X, Y}:
                raise ValueError("delta templates may only use _x and _y")
            if d.atoms():
                raise ValueError("delta templates may not mention atoms")
        object.__setattr__(self, "tau", tuple(_dedupe(self.tau)))
        object.__setattr__(self, "delta", tuple(_dedupe(self.delta)))

    @classmethod
    def from_text(cls, tau: Iterable[str], delta: Iterable[str], name: str = "", sig: Signature = L_INQ):
        return cls(tuple(parse_equation(t, sig, allow_meta=True) for t in tau),
                   tuple(parse(d, sig, allow_meta=True) for d in delta), name)

    @classmethod
    def from_json(cls, d: dict) -> "TransformerPair":
        return cls.from_text(d["tau"], d["delta"], d.get("name", ""))

    def to_json(self) -> dict:
        return {"name": self.name, "tau": [str(e) for e in self.tau], "delta": [to_text(d) for d in self.delta]}


def inqb_pair() -> TransformerPair:
    """tau(phi) = {phi ~ top} with top = bot -> bot, Delta(x, y) = {x <-> y}."""
    return TransformerPair((Equation(Meta(PHI), TOP),), (iff(Meta(X), Meta(Y)),), "inqb")


def tau_apply(t: TransformerPair, f: Formula) -> list[Equation]:
    return [Equation(instantiate(e.lhs, {PHI: f}), instantiate(e.rhs, {PHI: f})) for e in t.tau]


def tau_apply_set(t: TransformerPair, fs: Iterable[Formula]) -> list[Equation]:
    return _dedupe(e for f in fs for e in tau_apply(t, f))


def delta_apply(t: TransformerPair, e: Equation) -> list[Formula]:
    return [instantiate(d, {X: e.lhs, Y: e.rhs}) for d in t.delta]


def delta_apply_set(t: TransformerPair, es: Iterable[Equation]) -> list[Formula]:
    return _dedupe(f for e in es for f in delta_apply(t, e))


# ------------------------------------------------------------------ checks

class Alg4Result(NamedTuple):
    holds: bool
    witness: tuple | None = None  # (member index, a, b)

    def __bool__(self):
        return self.holds


def check_alg4(K: Sequence[ExpandedAlgebra], t: TransformerPair) -> Alg4Result:
    """For all members and core elements a, b: a = b iff every equation of
    tau[Delta(x, y)] holds at x = a, y = b."""
    eqs = tau_apply_set(t, delta_apply(t, Equation(Atom(0), Atom(1))))
    for i, ea in enumerate(K):
        c = ea.core_array()
        if not len(c):
            continue
        xs, ys = np.repeat(c, len(c)), np.tile(c, len(c))
        cols = {0: xs, 1: ys}
        ok = np.ones(len(xs), dtype=bool)
        for e in eqs:
            ok &= ea.alg.eval_many(e.lhs, cols, len(xs)) == ea.alg.eval_many(e.rhs, cols, len(xs))
        bad = np.flatnonzero(ok != (xs == ys))
        if len(bad):
            j = int(bad[0])
            return Alg4Result(False, (i, int(xs[j]), int(ys[j])))
    return Alg4Result(True)


@dataclass
class Alg3Row:
    phi: Formula
    forward: bool  # phi |- Delta[tau(phi)]
    backward: bool  # Delta[tau(phi)] |- phi

    @property
    def ok(self) -> bool:
        return self.forward and self.backward


@dataclass
class Alg3Report:
    rows: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.rows)

    def failures(self) -> list:
        return [r for r in self.rows if not r.ok]


def check_alg3(logic_oracle: Oracle, t: TransformerPair, corpus: Iterable[Formula]) -> Alg3Report:
    """phi -||- Delta[tau(phi)] for every formula of the corpus."""
    rep = Alg3Report()
    for phi in corpus:
        back = delta_apply_set(t, tau_apply(t, phi))
        fwd = all(logic_oracle([phi], g) for g in back)
        bwd = logic_oracle(back, phi)
        rep.rows.append(Alg3Row(phi, fwd, bwd))
    return rep


AGREE_TRUE, AGREE_FALSE, K_TOO_SMALL, FAILURE = "agree-true", "agree-false", "K too small", "failure"


@dataclass
class Alg1Row:
    gamma: tuple
    phi: Formula
    oracle: bool
    algebraic: bool
    witness: object = None

    @property
    def status(self) -> str:
        if self.oracle == self.algebraic:
            return AGREE_TRUE if self.oracle else AGREE_FALSE
        # a finite K can only miss refutations
        return K_TOO_SMALL if self.algebraic else FAILURE


@dataclass
class Alg1Report:
    rows: list = field(default_factory=list)

    def count(self, status: str) -> int:
        return sum(r.status == status for r in self.rows)

    @property
    def ok(self) -> bool:
        return self.count(FAILURE) == 0

    @property
    def exact(self) -> bool:
        return all(r.status in (AGREE_TRUE, AGREE_FALSE) for r in self.rows)


def algebraic_entails(K: Sequence[ExpandedAlgebra], t: TransformerPair, gamma: Sequence[Formula], phi: Formula):
    """tau[Gamma] |=^c_K tau(phi); returns (holds, witness)."""
    prem = tau_apply_set(t, gamma)
    for e in tau_apply(t, phi):
        res = core_entails(K, prem, e)
        if not res.holds:
            return False, res.witness
    return True, None


def check_alg1_sampled(logic_oracle: Oracle, K: Sequence[ExpandedAlgebra], t: TransformerPair,
                       cases: Iterable[tuple[Sequence[Formula], Formula]]) -> Alg1Report:
    rep = Alg1Report()
    for gamma, phi in cases:
        gamma = tuple(gamma)
        alg, w = algebraic_entails(K, t, gamma, phi)
        rep.rows.append(Alg1Row(gamma, phi, bool(logic_oracle(list(gamma), phi)), alg, w))
    return rep


@dataclass
class UniquenessReport:
    delta_equivalent: bool
    tau_mismatches: list = field(default_factory=list)  # formulas where tau0, tau1 differ on K

    @property
    def ok(self) -> bool:
        return self.delta_equivalent and not self.tau_mismatches


def cross_check_uniqueness(t0: TransformerPair, t1: TransformerPair, logic_oracle: Oracle,
                           K: Sequence[ExpandedAlgebra], corpus: Iterable[Formula]) -> UniquenessReport:
    """Delta0(x, y) -||- Delta1(x, y) by the oracle (x, y = p0, p1), and
    tau0(phi), tau1(phi) mutually core-entailed over K on the corpus."""
    eq = Equation(Atom(0), Atom(1))
    d0, d1 = delta_apply(t0, eq), delta_apply(t1, eq)
    deq = all(logic_oracle(d0, g) for g in d1) and all(logic_oracle(d1, g) for g in d0)
    rep = UniquenessReport(deq)
    for phi in corpus:
        a, b = tau_apply(t0, phi), tau_apply(t1, phi)
        same = all(core_entails(K, a, e).holds for e in b) and all(core_entails(K, b, e).holds for e in a)
        if not same:
            rep.tau_mismatches.append(phi)
    return rep


# ------------------------------------------------------------------ negative control

NONALG_CANDIDATES = ("bot -> bot", "~~p0", "~~p0 -> p0", "p0", "~p0", "bot")


@dataclass
class NonAlgRow:
    rho: Formula
    countermodel: object  # Kripke countermodel to rho, or None
    trivial_core: bool  # Sigma = {rho ~ top} makes every element core on all of K

    @property
    def excluded(self) -> bool:
        return self.countermodel is not None or self.trivial_core


def nonalgebraizability_replay(K: Sequence[ExpandedAlgebra], frame_size: int = 2,
                               candidates: Sequence[str] = NONALG_CANDIDATES) -> list[NonAlgRow]:
    """For each univariate candidate rho, either rho is refuted by a
    Kripke-team model or the core it defines is the whole algebra."""
    from .team import inqi_countermodel_search

    rows = []
    for text in candidates:
        rho = parse(text)
        cm = inqi_countermodel_search(rho, frame_size)
        trivial = all(sigma_core(ea.alg, [Equation(rho, TOP)]) == frozenset(range(ea.size)) for ea in K)
        rows.append(NonAlgRow(rho, cm, trivial))
    return rows


def load_pair(path) -> TransformerPair:
    with open(path, encoding="utf-8") as fh:
        return TransformerPair.from_json(json.load(fh))
