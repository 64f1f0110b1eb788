"""Expanded algebras (an algebra plus a core predicate), core consequence
and the class operators S, P and C at finite scale."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from .algebra import (DEFAULT_CELL_CAP, FiniteAlgebra, find_homomorphisms, generate_subalgebra, product,
                      product_coords)
from .errors import CapExceeded, WeaklogError
from .syntax import Equation, Signature, parse_equation

CHUNK = 1 << 16


class NotUnivariate(WeaklogError):
    """A core-defining equation mentions an atom other than p0."""


@dataclass(frozen=True)
class ExpandedAlgebra:
    alg: FiniteAlgebra
    core: frozenset
    provenance: str = field(default="", compare=False)

    def __post_init__(self):
        core = frozenset(int(a) for a in self.core)
        if any(not 0 <= a < self.alg.size for a in core):
            raise ValueError("core must be a subset of the universe")
        object.__setattr__(self, "core", core)

    @property
    def size(self) -> int:
        return self.alg.size

    def core_array(self) -> np.ndarray:
        return np.array(sorted(self.core), dtype=np.int64)


@dataclass(frozen=True)
class QuasiEquation:
    premises: tuple[Equation, ...]
    conclusion: Equation

    def __str__(self):
        if not self.premises:
            return str(self.conclusion)
        return ", ".join(map(str, self.premises)) + " => " + str(self.conclusion)

    def atoms(self) -> frozenset[int]:
        out = self.conclusion.atoms()
        for e in self.premises:
            out |= e.atoms()
        return out

    @classmethod
    def parse(cls, text: str, sig: Signature | None = None) -> "QuasiEquation":
        kw = {} if sig is None else {"sig": sig}
        if "=>" in text:
            left, right = text.rsplit("=>", 1)
            prem = tuple(parse_equation(p, **kw) for p in left.split(",") if p.strip())
        else:
            right, prem = text, ()
        return cls(prem, parse_equation(right, **kw))


def parse_sigma(lines: Iterable[str], sig: Signature | None = None) -> list[Equation]:
    kw = {} if sig is None else {"sig": sig}
    return [parse_equation(t, **kw) for t in lines]


def sigma_core(alg: FiniteAlgebra, Sigma: Sequence[Equation]) -> frozenset[int]:
    """Elements satisfying every equation of ``Sigma`` (equations in p0 only)."""
    for e in Sigma:
        if not e.atoms() <= {0}:
            raise NotUnivariate(f"{e} mentions atoms other than p0")
    elems = np.arange(alg.size)
    ok = np.ones(alg.size, dtype=bool)
    for e in Sigma:
        cols = {0: elems}
        ok &= alg.eval_many(e.lhs, cols, alg.size) == alg.eval_many(e.rhs, cols, alg.size)
    return frozenset(int(a) for a in np.flatnonzero(ok))


def sigma_expand(alg: FiniteAlgebra, Sigma: Sequence[Equation], provenance: str = "") -> ExpandedAlgebra:
    return ExpandedAlgebra(alg, sigma_core(alg, Sigma), provenance)


def is_core_generated(ea: ExpandedAlgebra) -> bool:
    return len(generate_subalgebra(ea.alg, ea.core)) == ea.alg.size


class CoreWitness(NamedTuple):
    algebra: int  # index into K
    assignment: dict  # atom -> element


class Entailment(NamedTuple):
    holds: bool
    witness: CoreWitness | None = None

    def __bool__(self):
        return self.holds


def _assignment_chunks(domain: np.ndarray, n: int, chunk: int = CHUNK):
    """Yield ``(start, columns)`` covering domain**n in lexicographic order
    (first atom most significant)."""
    base = len(domain)
    total = base ** n
    for start in range(0, total, chunk):
        idx = np.arange(start, min(total, start + chunk), dtype=np.int64)
        cols = []
        for k in range(n):
            div = base ** (n - 1 - k)
            cols.append(domain[(idx // div) % base])
        yield start, cols, len(idx)


def first_failure(alg: FiniteAlgebra, domain: Sequence[int], atoms: Sequence[int],
                  premises: Sequence[Equation], concl: Equation) -> dict | None:
    """Least assignment (lexicographic over ``domain``) satisfying the premises
    and falsifying the conclusion, or None."""
    domain = np.asarray(sorted(domain), dtype=np.int64)
    n = len(atoms)
    if n and len(domain) == 0:
        return None
    for _, cols, length in _assignment_chunks(domain, n):
        colmap = {a: cols[i] for i, a in enumerate(atoms)}
        alive = np.arange(length)
        for e in premises:
            sub = {a: c[alive] for a, c in colmap.items()}
            keep = alg.eval_many(e.lhs, sub, len(alive)) == alg.eval_many(e.rhs, sub, len(alive))
            alive = alive[keep]
            if not len(alive):
                break
        if not len(alive):
            continue
        sub = {a: c[alive] for a, c in colmap.items()}
        bad = alg.eval_many(concl.lhs, sub, len(alive)) != alg.eval_many(concl.rhs, sub, len(alive))
        hits = np.flatnonzero(bad)
        if len(hits):
            j = int(alive[hits[0]])
            return {a: int(colmap[a][j]) for a in atoms}
    return None


def core_entails(K: Sequence[ExpandedAlgebra], Theta: Sequence[Equation], concl: Equation,
                 restrict: bool = True) -> Entailment:
    """``Theta |=^c_K concl``: atoms range over cores only (over the whole
    universe when ``restrict`` is False).  The first witness is the least
    algebra index, then the lexicographically least assignment."""
    atoms = sorted(set().union(concl.atoms(), *[e.atoms() for e in Theta]))
    for i, ea in enumerate(K):
        domain = sorted(ea.core) if restrict else range(ea.alg.size)
        if not domain:
            continue  # no assignment of the variables into an empty core
        w = first_failure(ea.alg, list(domain), atoms, Theta, concl)
        if w is not None:
            return Entailment(False, CoreWitness(i, w))
    return Entailment(True, None)


def core_valid(ea: ExpandedAlgebra, q: QuasiEquation) -> Entailment:
    return core_entails([ea], q.premises, q.conclusion)


# --------------------------------------------------------------- class operators

def subalgebras(alg: FiniteAlgebra, cap: int = 4096) -> list[frozenset[int]]:
    """All subuniverses, ordered by size then lexicographically."""
    start = generate_subalgebra(alg, ())
    seen = {start}
    frontier = [start]
    while frontier:
        nxt = []
        for s in frontier:
            for a in range(alg.size):
                if a in s:
                    continue
                t = generate_subalgebra(alg, s | {a})
                if t not in seen:
                    seen.add(t)
                    nxt.append(t)
                    if len(seen) > cap:
                        raise CapExceeded(f"more than {cap} subalgebras")
        frontier = nxt
    if alg.size and len(start) == 0:
        seen.discard(start)  # the empty set is not an algebra
    return sorted(seen, key=lambda s: (len(s), sorted(s)))


@dataclass
class PreservationReport:
    op: str
    instances: int = 0
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def _check_sigma(K: Sequence[ExpandedAlgebra], Sigma) -> None:
    for i, ea in enumerate(K):
        if sigma_core(ea.alg, Sigma) != ea.core:
            raise ValueError(f"member {i} is not Sigma-cored")


def check_preservation(K: Sequence[ExpandedAlgebra], Sigma: Sequence[Equation], q: QuasiEquation, op: str,
                       ambient: Sequence[ExpandedAlgebra] = (), cap: int = DEFAULT_CELL_CAP,
                       sub_cap: int = 4096) -> PreservationReport:
    """Check, on concrete images, that Sigma-cores are recomputed correctly
    and that core validity of ``q`` carries over under ``op``:

    * ``S``: every subalgebra of every member;
    * ``P``: every binary product of members (including squares);
    * ``C``: every member A strictly embedded in an ambient B whose Sigma-core
      is the image of core(A).  Refutations in B are pulled back to A."""
    op = op.upper()
    if op not in ("S", "P", "C"):
        raise ValueError(f"unknown class operator {op!r}")
    _check_sigma(K, Sigma)
    rep = PreservationReport(op)
    valid = [core_valid(ea, q).holds for ea in K]
    if op == "S":
        for i, ea in enumerate(K):
            for sub in subalgebras(ea.alg, sub_cap):
                B, old = ea.alg.restrict(sub)
                rep.instances += 1
                core_b = sigma_core(B, Sigma)
                expect = frozenset(j for j, a in enumerate(old) if a in ea.core)
                if core_b != expect:
                    rep.violations.append({"member": i, "subalgebra": sorted(sub), "problem": "sigma-core"})
                    continue
                if valid[i] and not core_valid(ExpandedAlgebra(B, core_b), q).holds:
                    rep.violations.append({"member": i, "subalgebra": sorted(sub), "problem": "validity lost"})
    elif op == "P":
        for i, j in itertools.combinations_with_replacement(range(len(K)), 2):
            A, B = K[i], K[j]
            prod = product([A.alg, B.alg], cap)
            rep.instances += 1
            core_p = sigma_core(prod, Sigma)
            sizes = [A.size, B.size]
            expect = frozenset(e for e in range(prod.size)
                               if (lambda c: c[0] in A.core and c[1] in B.core)(product_coords(sizes, e)))
            if core_p != expect:
                rep.violations.append({"factors": (i, j), "problem": "sigma-core"})
                continue
            if valid[i] and valid[j] and not core_valid(ExpandedAlgebra(prod, core_p), q).holds:
                rep.violations.append({"factors": (i, j), "problem": "validity lost"})
    else:
        for j, B in enumerate(ambient):
            core_b = sigma_core(B.alg, Sigma)
            for i, A in enumerate(K):
                if A.alg.sig != B.alg.sig or len(A.core) != len(core_b):
                    continue
                embs = find_homomorphisms(A.alg, B.alg, "strict", A.core, core_b, injective=True)
                for h in embs:
                    if {h[a] for a in A.core} != core_b:
                        continue
                    rep.instances += 1
                    res = core_valid(ExpandedAlgebra(B.alg, core_b), q)
                    if res.holds:
                        continue
                    if valid[i]:
                        rep.violations.append({"member": i, "ambient": j, "embedding": h, "problem": "validity lost"})
                    inv = {b: a for a, b in enumerate(h)}
                    pulled = {k: inv[v] for k, v in res.witness.assignment.items()}
                    if not _refutes(A, q, pulled):
                        rep.violations.append({"member": i, "ambient": j, "embedding": h, "problem": "witness transport"})
    return rep


def _refutes(ea: ExpandedAlgebra, q: QuasiEquation, h: dict) -> bool:
    if any(v not in ea.core for v in h.values()):
        return False
    ev = ea.alg.eval
    if any(ev(e.lhs, h) != ev(e.rhs, h) for e in q.premises):
        return False
    return ev(q.conclusion.lhs, h) != ev(q.conclusion.rhs, h)


class Embedding(NamedTuple):
    found: bool
    member: int | None = None
    mapping: dict | None = None

    def __bool__(self):
        return self.found


def local_subgraph_embeds(A: ExpandedAlgebra, X: Iterable[int], K: Sequence[ExpandedAlgebra],
                          strict: bool = False) -> Embedding:
    """Injective map from the partial structure on ``X`` into some member of
    ``K`` preserving every operation defined inside ``X`` and the core
    (forward; both ways when ``strict``)."""
    X = sorted(set(X))
    xs = set(X)
    pos = {a: i for i, a in enumerate(X)}
    # defined facts: (op, arg positions, result position)
    facts = []
    for op, ar in A.alg.sig.connectives:
        t = A.alg.tables[op]
        if ar == 0:
            if t in xs:
                facts.append((op, (), pos[t]))
            continue
        for args in itertools.product(X, repeat=ar):
            r = int(t[args])
            if r in xs:
                facts.append((op, tuple(pos[a] for a in args), pos[r]))
    # facts become checkable once their highest position is assigned
    by_last: list[list] = [[] for _ in X]
    for f in facts:
        last = max(f[1] + (f[2],))
        by_last[last].append(f)
    in_core = [a in A.core for a in X]
    for k, B in enumerate(K):
        if B.alg.sig != A.alg.sig:
            continue
        tabs = B.alg.tables
        img: list[int] = []
        used: set[int] = set()

        def go(i: int) -> bool:
            if i == len(X):
                return True
            for b in range(B.alg.size):
                if b in used:
                    continue
                if in_core[i] and b not in B.core:
                    continue
                if strict and not in_core[i] and b in B.core:
                    continue
                img.append(b)
                ok = True
                for op, args, r in by_last[i]:
                    t = tabs[op]
                    val = t if not args else int(t[tuple(img[a] for a in args)])
                    if val != img[r]:
                        ok = False
                        break
                if ok:
                    used.add(b)
                    if go(i + 1):
                        return True
                    used.discard(b)
                img.pop()
            return False

        if go(0):
            return Embedding(True, k, dict(zip(X, img)))
    return Embedding(False)
