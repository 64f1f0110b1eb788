"""Hilbert systems for the inquisitive and dependence logics, derivation
checking, the disjunctive normal form and univariate fixpoint iteration,
plus sampled checks of the schematic fragment and finite representability."""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from typing import Callable, Iterable, NamedTuple, Sequence

from .errors import DerivationFormatError, DNFTooLarge, FixpointNotFound, SignatureError
from .syntax import (AND, IMP, L_INQ, L_INT, OR, TENSOR, App, Atom, Formula, Schema, Signature,
                     Substitution, apply_subst, big_and, instantiate, match_schema, parse, to_text)

Oracle = Callable[[Sequence[Formula], Formula], bool]

_AXIOM_TEXT = {
    "A1": ("_phi -> (_psi -> _phi)", ()),
    "A2": ("(_phi -> (_psi -> _chi)) -> ((_phi -> _psi) -> (_phi -> _chi))", ()),
    "A3": ("_phi & _psi -> _phi", ()),
    "A4": ("_phi & _psi -> _psi", ()),
    "A5": ("_phi -> (_psi -> _phi & _psi)", ()),
    "A6": ("_phi -> _phi | _psi", ()),
    "A7": ("_psi -> _phi | _psi", ()),
    "A8": ("(_phi -> _chi) -> ((_psi -> _chi) -> (_phi | _psi -> _chi))", ()),
    "A9": ("bot -> _phi", ()),
    "A10": ("(_alpha -> _phi | _psi) -> (_alpha -> _phi) | (_alpha -> _psi)", ("alpha",)),
    "A11": ("_alpha -> _alpha * _beta", ("alpha", "beta")),
    "A12": ("_alpha * _beta -> _beta * _alpha", ("alpha", "beta")),
    "A13": ("_phi * (_psi | _chi) -> (_phi * _psi) | (_phi * _chi)", ()),
    "A14": ("(_phi -> _chi) -> ((_psi -> _tau) -> (_phi * _psi -> _chi * _tau))", ()),
    "A15": ("(_alpha -> _gamma) -> ((_beta -> _gamma) -> (_alpha * _beta -> _gamma))", ("alpha", "beta", "gamma")),
    "DNE": ("~~_alpha -> _alpha", ("alpha",)),
}

AXIOMS: dict[str, Schema] = {
    k: Schema.make(text, std, name=k) for k, (text, std) in _AXIOM_TEXT.items()
}


@dataclass(frozen=True)
class AxiomSystem:
    name: str
    sig: Signature
    axioms: tuple[str, ...]

    def schema(self, name: str) -> Schema:
        if name not in self.axioms:
            raise KeyError(f"{name} is not an axiom of {self.name}")
        return AXIOMS[name]


_BASE = tuple(f"A{i}" for i in range(1, 11))
_TENS = tuple(f"A{i}" for i in range(11, 16))
SYSTEMS = {
    "inqi": AxiomSystem("InqI", L_INT, _BASE),
    "inqb": AxiomSystem("InqB", L_INT, _BASE + ("DNE",)),
    "inqit": AxiomSystem("InqIt", L_INQ, _BASE + _TENS),
    "inqbt": AxiomSystem("InqBt", L_INQ, _BASE + _TENS + ("DNE",)),
}


def system(name: str) -> AxiomSystem:
    try:
        return SYSTEMS[name.lower()]
    except KeyError:
        raise KeyError(f"unknown system {name!r}; choose from {sorted(SYSTEMS)}") from None


# ------------------------------------------------------------------ derivations

@dataclass(frozen=True)
class Axiom:
    schema: str
    assignment: tuple = ()  # optional (metavariable, formula) pairs


@dataclass(frozen=True)
class Premise:
    index: int  # 1-based


@dataclass(frozen=True)
class MP:
    major: int  # line holding  minor -> current
    minor: int


@dataclass
class Derivation:
    lines: list = field(default_factory=list)  # (Formula, justification)

    def add(self, f: Formula, just) -> "Derivation":
        self.lines.append((f, just))
        return self

    @property
    def conclusion(self) -> Formula | None:
        return self.lines[-1][0] if self.lines else None

    def to_text(self) -> str:
        out = []
        for f, j in self.lines:
            if isinstance(j, Axiom):
                tag = f"axiom {j.schema}"
            elif isinstance(j, Premise):
                tag = f"premise {j.index}"
            else:
                tag = f"mp {j.major} {j.minor}"
            out.append(f"{to_text(f)} ; {tag}")
        return "\n".join(out) + "\n"


class CheckResult(NamedTuple):
    ok: bool
    bad_line: int | None = None  # 1-based
    reason: str = ""

    def __bool__(self):
        return self.ok


_JUST = re.compile(r"^\s*(?:axiom\s+(?P<ax>A\d+|DNE)|premise\s+(?P<pr>\d+)|mp\s+(?P<i>\d+)\s+(?P<j>\d+))\s*$", re.I)


def parse_derivation(text: str, sig: Signature = L_INQ) -> Derivation:
    """One step per line: ``<formula> ; axiom A<k> | axiom DNE | premise <i> | mp <i> <j>``.
    Blank lines and ``#`` comments are ignored."""
    d = Derivation()
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if ";" not in line:
            raise DerivationFormatError(f"line {no}: missing ';' before the justification")
        ftext, jtext = line.rsplit(";", 1)
        f = parse(ftext, sig)
        m = _JUST.match(jtext)
        if m is None:
            raise DerivationFormatError(f"line {no}: cannot read justification {jtext.strip()!r}")
        if m.group("ax"):
            ax = m.group("ax").upper()
            d.add(f, Axiom("DNE" if ax == "DNE" else ax))
        elif m.group("pr"):
            d.add(f, Premise(int(m.group("pr"))))
        else:
            d.add(f, MP(int(m.group("i")), int(m.group("j"))))
    return d


def check_derivation(sys: AxiomSystem | str, premises: Sequence[Formula], d: Derivation,
                     conclusion: Formula | None = None) -> CheckResult:
    """Verify every line; report the first failing line (1-based).

    When ``conclusion`` is given, the last line must be that formula; an empty
    derivation then fails at line 0."""
    if isinstance(sys, str):
        sys = system(sys)
    if not d.lines:
        if conclusion is not None:
            return CheckResult(False, 0, "empty derivation")
        return CheckResult(True)
    for n, (f, just) in enumerate(d.lines, 1):
        for g in f.subformulas():
            if isinstance(g, App) and g.op not in sys.sig:
                return CheckResult(False, n, f"connective {g.op} not in {sys.name}")
        if isinstance(just, Axiom):
            if just.schema not in sys.axioms:
                return CheckResult(False, n, f"{just.schema} is not an axiom of {sys.name}")
            sch = AXIOMS[just.schema]
            if just.assignment:
                asg = dict(just.assignment)
                bad = [m for m, v in asg.items() if sch.sort_of(m) == "standard" and not v.standard]
                if bad:
                    return CheckResult(False, n, f"_{bad[0]} must be standard")
                if instantiate(sch.template, asg) != f:
                    return CheckResult(False, n, f"not the stated instance of {just.schema}")
            elif match_schema(sch, f) is None:
                return CheckResult(False, n, f"not an instance of {just.schema}")
        elif isinstance(just, Premise):
            if not 1 <= just.index <= len(premises):
                return CheckResult(False, n, f"no premise {just.index}")
            if premises[just.index - 1] != f:
                return CheckResult(False, n, f"line differs from premise {just.index}")
        elif isinstance(just, MP):
            i, j = just.major, just.minor
            if not (1 <= i < n and 1 <= j < n):
                return CheckResult(False, n, "modus ponens must cite earlier lines")
            major, minor = d.lines[i - 1][0], d.lines[j - 1][0]
            if major != App(IMP, (minor, f)):
                return CheckResult(False, n, f"line {i} is not line {j} -> this line")
        else:
            return CheckResult(False, n, "unknown justification")
    if conclusion is not None and d.lines[-1][0] != conclusion:
        return CheckResult(False, len(d.lines), "last line is not the required conclusion")
    return CheckResult(True)


# ------------------------------------------------------------------ normal form

DNF_PAIR_CAP = 12


def dnf(f: Formula, sys: str = "inq", cap: int = DNF_PAIR_CAP, memo: dict | None = None) -> list[Formula]:
    """Standard (or-free) disjuncts whose disjunction is equivalent to ``f``.

    No simplification is applied.  Conjunction and tensor distribute
    pairwise (left disjunct outer); an implication with antecedent disjuncts
    ``I`` and consequent disjuncts ``J`` yields one left-nested conjunction of
    ``a_i -> b_c(i)`` per choice function ``c: I -> J``, in
    ``itertools.product`` order.  Raises DNFTooLarge when ``|I| * |J| > cap``."""
    if sys not in ("int", "inq"):
        raise ValueError("sys must be 'int' or 'inq'")
    if memo is None:
        memo = {}

    def go(g: Formula) -> tuple:
        r = memo.get(g)
        if r is not None:
            return r
        if isinstance(g, Atom) or not g.args:
            r = (g,)
        else:
            op = g.op
            if op == OR:
                r = go(g.args[0]) + go(g.args[1])
            elif op in (AND, TENSOR):
                if op == TENSOR and sys == "int":
                    raise SignatureError("tensor is not available in the intuitionistic signature")
                a, b = go(g.args[0]), go(g.args[1])
                r = tuple(App(op, (x, y)) for x in a for y in b)
            elif op == IMP:
                a, b = go(g.args[0]), go(g.args[1])
                if len(a) * len(b) > cap:
                    raise DNFTooLarge(f"implication with {len(a)} x {len(b)} disjunct pairs exceeds cap {cap}")
                if len(b) == 1:
                    r = (big_and(App(IMP, (x, b[0])) for x in a),)
                else:
                    r = tuple(big_and(App(IMP, (x, b[c])) for x, c in zip(a, choice))
                              for choice in itertools.product(range(len(b)), repeat=len(a)))
            else:
                raise SignatureError(f"no normal-form rule for {op!r}")
        memo[g] = r
        return r

    return list(go(f))


# ------------------------------------------------------------------ fixpoints

class FixpointResult(NamedTuple):
    fixpoint: Formula | None
    period: int  # 1 for a fixpoint, 2 for a two-cycle
    n: int  # least n at which the iteration repeats
    orbit: tuple  # rho^0 .. rho^n


def fixpoint_iterate(rho: Formula, max_n: int = 8, frame_bound: int = 6) -> FixpointResult:
    """Iterate ``rho^0 = x``, ``rho^(k+1) = rho(rho^k)`` until ``rho^n`` is
    equivalent (bounded intuitionistic check) to ``rho^(n-1)`` -- a fixpoint,
    reported as ``rho^(n-1)`` -- or to ``rho^(n-2)`` -- a two-cycle.

    ``rho`` must be or-free with at most one atom; tensor is read as
    disjunction.  Constant formulas are iterated in ``p0``."""
    from .heyting import ipc_equiv_bounded

    atoms = rho.atoms()
    if len(atoms) > 1:
        raise ValueError("fixpoint iteration needs a formula in one variable")
    if not rho.standard:
        raise ValueError("fixpoint iteration needs an or-free formula")
    x = next(iter(atoms), 0)
    orbit = [Atom(x)]
    for n in range(1, max_n + 1):
        orbit.append(apply_subst({x: orbit[-1]}, rho))
        if ipc_equiv_bounded(orbit[n], orbit[n - 1], frame_bound).equivalent_up_to_bound:
            return FixpointResult(orbit[n - 1], 1, n, tuple(orbit))
        if n >= 2 and ipc_equiv_bounded(orbit[n], orbit[n - 2], frame_bound).equivalent_up_to_bound:
            return FixpointResult(None, 2, n, tuple(orbit))
    raise FixpointNotFound(f"no fixpoint or two-cycle within {max_n} iterations")


IDEMPOTENT_FORMULAS = ("bot -> bot", "~~p0", "p0 * ~p0", "p0", "bot")


# ------------------------------------------------------------------ schematic fragment

class SchmVerdict(NamedTuple):
    in_schm_up_to_sample: bool
    rejected_by: Substitution | None
    sample_size: int

    def __bool__(self):
        return self.in_schm_up_to_sample


def schm_sample(logic_oracle: Oracle, Gamma: Sequence[Formula], phi: Formula,
                substs: Iterable[Substitution]) -> SchmVerdict:
    """Check ``s[Gamma] |- s(phi)`` for each supplied substitution.  A positive
    verdict only speaks for the sample."""
    k = 0
    for s in substs:
        k += 1
        if not logic_oracle([apply_subst(s, g) for g in Gamma], apply_subst(s, phi)):
            return SchmVerdict(False, s, k)
    return SchmVerdict(True, None, k)


def atomic_instances(Lambda: Sequence[Formula], atoms: Sequence[int]) -> list[Formula]:
    """All images of members of Lambda under maps of their atoms into ``atoms``."""
    out, seen = [], set()
    for lam in Lambda:
        src = sorted(lam.atoms())
        for img in itertools.product(atoms, repeat=len(src)):
            g = apply_subst({a: Atom(b) for a, b in zip(src, img)}, lam)
            if g not in seen:
                seen.add(g)
                out.append(g)
    return out


@dataclass
class RepresentabilityRow:
    gamma: tuple
    phi: Formula
    weak: bool
    schematic: bool

    @property
    def agree(self) -> bool:
        return self.weak == self.schematic


@dataclass
class RepresentabilityReport:
    rows: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(r.agree for r in self.rows)

    def disagreements(self) -> list:
        return [r for r in self.rows if not r.agree]


def representability_check(weak_oracle: Oracle, schm_oracle: Oracle, Lambda: Sequence[Formula],
                           cases: Iterable[tuple[Sequence[Formula], Formula]]) -> RepresentabilityReport:
    """Compare ``Gamma |- phi`` with ``Gamma + At[Lambda] |-_S phi`` case by
    case, ``At[Lambda]`` taken over the atoms occurring in the case."""
    rep = RepresentabilityReport()
    for gamma, phi in cases:
        gamma = tuple(gamma)
        atoms = sorted(set().union(phi.atoms(), *[g.atoms() for g in gamma])) or [0]
        extra = atomic_instances(Lambda, atoms)
        rep.rows.append(RepresentabilityRow(gamma, phi, bool(weak_oracle(list(gamma), phi)),
                                            bool(schm_oracle(list(gamma) + extra, phi))))
    return rep
