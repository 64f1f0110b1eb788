"""Heyting algebras of upsets of finite posets, Medvedev frames and a
bounded intuitionistic equivalence checker."""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from .algebra import FiniteAlgebra, product
from .errors import CapExceeded, WeaklogError
from .syntax import (AND, BOT, IMP, L_INQ, L_INT, OR, TENSOR, App, Atom, Equation, Formula,
                     parse_equation)

DEFAULT_UPSET_CAP = 256
MAX_POINTS = 24
MAX_MEDVEDEV = 4


class NotAPoset(WeaklogError):
    pass


class FinitePoset:
    """``leq[i][j]`` is True iff ``i <= j``.  Validated on construction."""

    __slots__ = ("size", "leq", "up", "down", "name")

    def __init__(self, leq, name: str = ""):
        m = np.array(leq, dtype=bool)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise NotAPoset("order must be a square matrix")
        n = m.shape[0]
        if n > MAX_POINTS:
            raise CapExceeded(f"{n} points exceeds the poset cap {MAX_POINTS}")
        if not m.diagonal().all():
            raise NotAPoset("order is not reflexive")
        if (m & m.T & ~np.eye(n, dtype=bool)).any():
            raise NotAPoset("order is not antisymmetric")
        mi = m.astype(np.int64)
        if ((mi @ mi > 0) & ~m).any():
            raise NotAPoset("order is not transitive")
        m.setflags(write=False)
        self.size = n
        self.leq = m
        self.up = [sum(1 << j for j in range(n) if m[i, j]) for i in range(n)]
        self.down = [sum(1 << j for j in range(n) if m[j, i]) for i in range(n)]
        self.name = name

    def __repr__(self):
        nm = f" {self.name}" if self.name else ""
        return f"<FinitePoset{nm} size={self.size}>"

    def __eq__(self, other):
        return isinstance(other, FinitePoset) and np.array_equal(self.leq, other.leq)

    def __hash__(self):
        return hash(self.leq.tobytes())

    @classmethod
    def from_covers(cls, n: int, pairs: Iterable[tuple[int, int]], name: str = "") -> "FinitePoset":
        """Reflexive-transitive closure of the given ``(lower, upper)`` pairs."""
        m = np.eye(n, dtype=bool)
        for a, b in pairs:
            m[a, b] = True
        for k in range(n):
            m |= m[:, [k]] & m[[k], :]
        return cls(m, name)

    @classmethod
    def chain(cls, n: int) -> "FinitePoset":
        return cls(np.triu(np.ones((n, n), dtype=bool)), f"chain{n}")

    @classmethod
    def antichain(cls, n: int) -> "FinitePoset":
        return cls(np.eye(n, dtype=bool), f"antichain{n}")

    def is_upset(self, mask: int) -> bool:
        for i in range(self.size):
            if mask >> i & 1 and self.up[i] & ~mask:
                return False
        return True

    def upsets(self, cap: int | None = DEFAULT_UPSET_CAP) -> list[int]:
        """All upsets as bitmasks, ascending.  Built point by point so the
        work is proportional to the output, not to ``2**size``."""
        # points with smaller up-sets first, so a point is decided after everything above it
        order = sorted(range(self.size), key=lambda i: bin(self.up[i]).count("1"))
        out = [0]
        for i in order:
            strict = self.up[i] & ~(1 << i)
            out = out + [u | (1 << i) for u in out if u & strict == strict]
            if cap is not None and len(out) > cap:
                raise CapExceeded(f"poset {self.name or self.size} has more than {cap} upsets")
        return sorted(out)

    def roots(self) -> list[int]:
        return [i for i in range(self.size) if self.down[i] == 1 << i]

    def is_rooted(self) -> bool:
        return len(self.roots()) == 1

    def invariant(self) -> tuple:
        """Isomorphism invariant used to bucket posets before exact checks."""
        return tuple(sorted(self._point_invariants()))

    def _point_invariants(self) -> list[tuple[int, int]]:
        return [(bin(self.up[i]).count("1"), bin(self.down[i]).count("1")) for i in range(self.size)]

    def isomorphic(self, other: "FinitePoset") -> bool:
        if self.size != other.size or self.invariant() != other.invariant():
            return False
        inv_a = self._point_invariants()
        inv_b = other._point_invariants()
        n = self.size
        a, b = self.leq, other.leq
        img = [-1] * n
        used = [False] * n

        def go(i: int) -> bool:
            if i == n:
                return True
            for j in range(n):
                if used[j] or inv_b[j] != inv_a[i]:
                    continue
                if all(a[i, k] == b[j, img[k]] and a[k, i] == b[img[k], j] for k in range(i)):
                    img[i] = j
                    used[j] = True
                    if go(i + 1):
                        return True
                    used[j] = False
            img[i] = -1
            return False

        return go(0)

    def generated(self, point: int) -> "FinitePoset":
        """The rooted subframe of points above ``point``."""
        pts = [j for j in range(self.size) if self.up[point] >> j & 1]
        return FinitePoset(self.leq[np.ix_(pts, pts)])


@lru_cache(maxsize=None)
def posets(n: int) -> tuple[FinitePoset, ...]:
    """All posets on ``n`` points up to isomorphism, in a fixed order.

    Every poset has a natural labelling in which the last point is maximal,
    so extending each smaller poset by a new maximal point above each of its
    downsets reaches all of them; duplicates are removed by exact isomorphism
    checks inside invariant buckets."""
    if n == 0:
        return (FinitePoset(np.zeros((0, 0), dtype=bool)),)
    out: list[FinitePoset] = []
    buckets: dict[tuple, list[FinitePoset]] = {}
    for base in posets(n - 1):
        # downsets of base = complements of upsets
        full = (1 << base.size) - 1
        for ups in base.upsets(cap=None):
            below = full & ~ups
            m = np.zeros((n, n), dtype=bool)
            m[: n - 1, : n - 1] = base.leq
            m[n - 1, n - 1] = True
            for j in range(n - 1):
                if below >> j & 1:
                    m[j, n - 1] = True
            cand = FinitePoset(m)
            bucket = buckets.setdefault(cand.invariant(), [])
            if any(cand.isomorphic(q) for q in bucket):
                continue
            bucket.append(cand)
            out.append(cand)
    return tuple(out)


@lru_cache(maxsize=None)
def rooted_posets(n: int) -> tuple[FinitePoset, ...]:
    """Rooted posets on ``n`` points up to isomorphism (a new root under each
    poset on ``n - 1`` points); the root is point 0."""
    if n < 1:
        return ()
    out = []
    for base in posets(n - 1):
        m = np.zeros((n, n), dtype=bool)
        m[0, :] = True
        m[1:, 1:] = base.leq
        out.append(FinitePoset(m))
    return tuple(out)


def medvedev_frame(s_size: int) -> FinitePoset:
    """Nonempty subsets of an ``s_size``-set ordered by reverse inclusion.

    Point ``i`` is the subset with bitmask ``i + 1``; the full set is the
    last point and lies below every other point."""
    if not 1 <= s_size:
        raise ValueError("s_size must be positive")
    if s_size > MAX_MEDVEDEV:
        raise CapExceeded(f"Medvedev frames are capped at |s| <= {MAX_MEDVEDEV}")
    k = (1 << s_size) - 1
    m = np.zeros((k, k), dtype=bool)
    for i in range(k):
        for j in range(k):
            x, y = i + 1, j + 1
            m[i, j] = (x & y) == y  # x ⊇ y
    return FinitePoset(m, f"medvedev{s_size}")


# --------------------------------------------------------------------------

@dataclass
class HeytingAlgebra:
    """A finite algebra checked to be Heyting on construction.

    When built from a poset, element ``i`` is the upset ``upsets[i]``."""

    alg: FiniteAlgebra
    poset: FinitePoset | None = None
    upsets: list[int] | None = None
    provenance: str = ""
    _regular: frozenset | None = field(default=None, repr=False)

    def __post_init__(self):
        bad = heyting_violations(self.alg)
        if bad:
            raise WeaklogError("not a Heyting algebra: " + "; ".join(bad))

    @property
    def size(self) -> int:
        return self.alg.size

    @property
    def bot(self) -> int:
        return self.alg.tables[BOT]

    @property
    def top(self) -> int:
        return self.alg.tables[IMP][self.bot, self.bot].item()

    def leq(self, a: int, b: int) -> bool:
        return self.alg.tables[AND][a, b] == a

    def neg(self, a: int) -> int:
        return int(self.alg.tables[IMP][a, self.bot])

    def regular_elements(self) -> frozenset[int]:
        if self._regular is None:
            imp = self.alg.tables[IMP]
            n = imp[:, self.bot]
            nn = n[n]
            self._regular = frozenset(int(a) for a in np.flatnonzero(nn == np.arange(self.size)))
        return self._regular

    def describe(self, a: int) -> str:
        """Human-readable name of an element (its upset, when known)."""
        if self.upsets is None:
            return str(a)
        pts = [str(i) for i in range(self.poset.size) if self.upsets[a] >> i & 1]
        return "{" + ",".join(pts) + "}"

    @property
    def has_tensor(self) -> bool:
        return TENSOR in self.alg.sig


def heyting_violations(alg: FiniteAlgebra) -> list[str]:
    """Empty list iff ``alg`` (restricted to and/or/imp/bot) is a Heyting algebra.

    Checks that (and, or) is a lattice with least element bot and that
    a & b <= c  <=>  a <= b -> c for all triples."""
    out = []
    for op in (AND, OR, IMP, BOT):
        if op not in alg.sig:
            return [f"missing connective {op}"]
    n = alg.size
    meet, join, imp = alg.tables[AND], alg.tables[OR], alg.tables[IMP]
    bot = alg.tables[BOT]
    idx = np.arange(n)
    if not (np.array_equal(meet, meet.T) and np.array_equal(join, join.T)):
        out.append("meet/join not commutative")
    if not (np.array_equal(meet[idx, idx], idx) and np.array_equal(join[idx, idx], idx)):
        out.append("meet/join not idempotent")
    if not np.array_equal(meet[meet[:, :, None], idx[None, None, :]], meet[idx[:, None, None], meet[None, :, :]]):
        out.append("meet not associative")
    if not np.array_equal(join[join[:, :, None], idx[None, None, :]], join[idx[:, None, None], join[None, :, :]]):
        out.append("join not associative")
    if not (np.array_equal(meet[idx[:, None], join], idx[:, None].repeat(n, 1))):
        out.append("absorption a & (a | b) = a fails")
    if not np.array_equal(meet[bot, :], np.full(n, bot)):
        out.append("bot is not least")
    le = meet == idx[:, None]  # le[a, b] iff a <= b
    lhs = le[meet[:, :, None], idx[None, None, :]]  # a & b <= c
    rhs = le[idx[:, None, None], imp[None, :, :]]  # a <= b -> c
    if not np.array_equal(lhs, rhs):
        a, b, c = (int(x[0]) for x in np.nonzero(lhs != rhs))
        out.append(f"residuation fails at a={a}, b={b}, c={c}")
    return out


def upset_algebra(P: FinitePoset, cap: int = DEFAULT_UPSET_CAP, name: str = "") -> HeytingAlgebra:
    """Heyting algebra of the upsets of ``P``, elements in numeric bitset order."""
    ups = P.upsets(cap)
    m = len(ups)
    index = {u: i for i, u in enumerate(ups)}
    arr = np.array(ups, dtype=np.int64)
    lookup = np.vectorize(index.__getitem__, otypes=[np.int64])
    meet = lookup(arr[:, None] & arr[None, :])
    join = lookup(arr[:, None] | arr[None, :])
    bad = arr[:, None] & ~arr[None, :]  # U minus V
    res = np.zeros((m, m), dtype=np.int64)
    for pnt in range(P.size):
        ok = (bad & P.up[pnt]) == 0
        res |= ok.astype(np.int64) << pnt
    imp = lookup(res)
    alg = FiniteAlgebra(L_INT, m, {AND: meet, OR: join, IMP: imp, BOT: index[0]},
                        name=name or f"Up({P.name or P.size})")
    return HeytingAlgebra(alg, P, ups, provenance=f"upsets of {P.name or 'a ' + str(P.size) + '-point poset'}")


def heyting_from_algebra(alg: FiniteAlgebra, provenance: str = "") -> HeytingAlgebra:
    return HeytingAlgebra(alg, provenance=provenance)


def medvedev_algebra(s_size: int, tensor: bool = False, cap: int = DEFAULT_UPSET_CAP) -> HeytingAlgebra:
    """Upset algebra of the Medvedev frame on ``s_size`` points, optionally
    expanded by the team-union tensor (see ``with_team_tensor``)."""
    P = medvedev_frame(s_size)
    h = upset_algebra(P, cap, name=f"ML{s_size}")
    h.provenance = f"upsets of the Medvedev frame over a {s_size}-element set"
    return with_team_tensor(h, s_size) if tensor else h


def with_team_tensor(h: HeytingAlgebra, s_size: int) -> HeytingAlgebra:
    """Expand a Medvedev upset algebra by the tensor of team semantics.

    An element is a family of nonempty teams closed under nonempty subteams;
    ``X * Y`` collects the nonempty unions ``u | v`` with ``u`` in X or empty
    and ``v`` in Y or empty.  The result is checked against the tensor laws."""
    ups = h.upsets
    m = len(ups)
    nt = 1 << s_size  # team masks 0..nt-1, point i is team mask i+1
    member = np.zeros((m, nt), dtype=np.int64)
    for e, u in enumerate(ups):
        member[e, 0] = 1
        for i in range(nt - 1):
            if u >> i & 1:
                member[e, i + 1] = 1
    out = np.zeros((m, m), dtype=np.int64)
    for t in range(1, nt):
        b = np.zeros((nt, nt), dtype=np.int64)
        for u in range(nt):
            for v in range(nt):
                if u | v == t:
                    b[u, v] = 1
        hit = (member @ b @ member.T) > 0
        out |= hit.astype(np.int64) << (t - 1)
    index = {u: i for i, u in enumerate(ups)}
    tens = np.vectorize(index.__getitem__, otypes=[np.int64])(out)
    tabs = dict(h.alg.tables)
    tabs[TENSOR] = tens
    alg = FiniteAlgebra(L_INQ, m, tabs, name=h.alg.name + "t")
    res = HeytingAlgebra(alg, h.poset, h.upsets, h.provenance + " with team tensor")
    bad = tensor_violations(res)
    if bad:
        raise WeaklogError("tensor laws fail: " + "; ".join(bad))
    return res


TENSOR_LAWS_TEXT = {
    "Dist": "_x * (_y | _z) ~ (_x * _y) | (_x * _z)",
    "Mon": "(_x -> _z) -> ((_y -> _k) -> ((_x * _y) -> (_z * _k))) ~ bot -> bot",
}


def tensor_laws() -> dict[str, Equation]:
    return {k: parse_equation(v, L_INQ, allow_meta=True) for k, v in TENSOR_LAWS_TEXT.items()}


def tensor_violations(h: HeytingAlgebra, mon_cap: int = 200) -> list[str]:
    """Check the axioms on the tensor: the regular elements with tensor form
    a Boolean algebra (tensor acts as their join), (Dist) and (Mon).

    (Mon) is checked as ``(x->z) & (y->k) & (x*y) <= z*k`` which is the same
    as the curried equation being equal to top."""
    alg = h.alg
    if TENSOR not in alg.sig:
        return ["no tensor"]
    out = []
    n = alg.size
    t, meet, join, imp = alg.tables[TENSOR], alg.tables[AND], alg.tables[OR], alg.tables[IMP]
    idx = np.arange(n)
    reg = sorted(h.regular_elements())
    r = np.array(reg)
    neg = imp[:, h.bot]
    sub = t[np.ix_(r, r)]
    classical_join = neg[meet[neg[r][:, None], neg[r][None, :]]]
    if not np.array_equal(sub, classical_join):
        out.append("tensor is not the Boolean join on regular elements")
    # Dist: x*(y|z) = x*y | x*z
    lhs = t[idx[:, None, None], join[None, :, :]]
    rhs = join[t[:, :, None], t[:, None, :]]
    if not np.array_equal(lhs, rhs):
        out.append("(Dist) fails")
    if n <= mon_cap:
        le = meet == idx[:, None]
        for x in range(n):
            xz = imp[x]  # x -> z over z
            xy = t[x]  # x * y over y
            # A[z, y, k] = (x->z) & (y->k) & (x*y)
            a = meet[xz[:, None, None], meet[imp[None, :, :], xy[None, :, None]]]
            tz = t[idx[:, None, None], idx[None, None, :]]  # z * k
            tz = np.broadcast_to(tz, a.shape)
            if not le[a, tz].all():
                out.append(f"(Mon) fails at x={x}")
                break
    else:
        out.append(f"(Mon) not checked: more than {mon_cap} elements")
    return out


def product_heyting(hs: Sequence[HeytingAlgebra]) -> HeytingAlgebra:
    alg = product([h.alg for h in hs])
    return HeytingAlgebra(alg, provenance=" x ".join(h.alg.name or "?" for h in hs))


# --------------------------------------------------------------------------

def tensor_as_or(f: Formula) -> Formula:
    if not isinstance(f, App) or not f.args:
        return f
    args = tuple(tensor_as_or(a) for a in f.args)
    return App(OR if f.op == TENSOR else f.op, args)


class Countermodel(NamedTuple):
    poset: FinitePoset
    valuation: dict  # atom index -> upset bitmask
    values: tuple  # (value of f, value of g) as upset bitmasks

    def describe(self) -> str:
        val = ", ".join(f"p{k}={_pts(v)}" for k, v in sorted(self.valuation.items()))
        return f"{self.poset.size}-point frame, {val}: values {_pts(self.values[0])} vs {_pts(self.values[1])}"


def _pts(mask: int) -> str:
    return "{" + ",".join(str(i) for i in range(mask.bit_length()) if mask >> i & 1) + "}"


class EquivVerdict(NamedTuple):
    equivalent_up_to_bound: bool
    bound: int
    countermodel: Countermodel | None


def ipc_equiv_bounded(f: Formula, g: Formula, frame_bound: int = 6) -> EquivVerdict:
    """Search rooted posets with at most ``frame_bound`` points for a
    valuation giving ``f`` and ``g`` different upsets.  Tensor is read as
    disjunction.  A positive verdict only covers the searched frames."""
    f2, g2 = tensor_as_or(f), tensor_as_or(g)
    if f2 == g2:
        return EquivVerdict(True, frame_bound, None)
    atoms = sorted(f2.atoms() | g2.atoms())
    for size in range(1, frame_bound + 1):
        for P in rooted_posets(size):
            h = _upset_cache(P)
            alg = h.alg
            k = len(atoms)
            if k:
                grid = np.indices((alg.size,) * k).reshape(k, -1)
                cols = {a: grid[i] for i, a in enumerate(atoms)}
                length = grid.shape[1]
            else:
                cols, length = {}, 1
            vf = alg.eval_many(f2, cols, length)
            vg = alg.eval_many(g2, cols, length)
            diff = np.flatnonzero(vf != vg)
            if len(diff):
                j = int(diff[0])
                val = {a: h.upsets[int(cols[a][j])] for a in atoms}
                return EquivVerdict(False, frame_bound, Countermodel(P, val, (h.upsets[int(vf[j])], h.upsets[int(vg[j])])))
    return EquivVerdict(True, frame_bound, None)


_UPSET_CACHE: dict[FinitePoset, HeytingAlgebra] = {}


def _upset_cache(P: FinitePoset) -> HeytingAlgebra:
    h = _UPSET_CACHE.get(P)
    if h is None:
        h = _UPSET_CACHE[P] = upset_algebra(P, cap=None)
    return h


def regular_core(h: HeytingAlgebra):
    """Expanded algebra whose core is the set of regular elements."""
    from .expanded import ExpandedAlgebra, sigma_core

    core = sigma_core(h.alg, [DNE_EQUATION])
    return ExpandedAlgebra(h.alg, core, provenance=h.provenance)


DNE_EQUATION = Equation(Atom(0), App(IMP, (App(IMP, (Atom(0), App(BOT))), App(BOT))))


@lru_cache(maxsize=None)
def medvedev_family(s_max: int = 3, tensor: bool = False) -> tuple[HeytingAlgebra, ...]:
    return tuple(medvedev_algebra(s, tensor) for s in range(1, s_max + 1))


class MLVerdict(NamedTuple):
    holds: bool
    witness: tuple | None = None  # (|s|, assignment atom -> element)

    def __bool__(self):
        return self.holds


def ml_entails_bounded(Gamma: Sequence[Formula], phi: Formula, s_max: int = 3) -> MLVerdict:
    """Consequence over the Medvedev upset algebras with ``|s| <= s_max`` and
    unrestricted assignments: if every premise is top, so is ``phi``.  Tensor
    is read as disjunction."""
    from .expanded import first_failure
    from .syntax import TOP

    gamma = [Equation(tensor_as_or(g), TOP) for g in Gamma]
    concl = Equation(tensor_as_or(phi), TOP)
    atoms = sorted(set().union(phi.atoms(), *[g.atoms() for g in Gamma]))
    for s, h in enumerate(medvedev_family(s_max), 1):
        w = first_failure(h.alg, range(h.size), atoms, gamma, concl)
        if w is not None:
            return MLVerdict(False, (s, w))
    return MLVerdict(True)
