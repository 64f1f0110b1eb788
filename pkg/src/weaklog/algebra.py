"""Finite algebras given by dense operation tables.

Elements are ``0..size-1``.  A table for an ``k``-ary connective is a numpy
array of shape ``(size,) * k``; constants are stored as plain ints.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import CapExceeded, SignatureError, UnassignedAtom, WeaklogError
from .syntax import Atom, Formula, Meta, Signature

MAX_ARITY = 3  # soft limit: tables are dense
DEFAULT_CELL_CAP = 1_000_000


class FiniteAlgebra:
    """A finite algebra over ``sig``.  Treat instances as immutable."""

    __slots__ = ("sig", "size", "tables", "name", "_key")

    def __init__(self, sig: Signature, size: int, tables: Mapping[str, object], name: str = ""):
        if size < 1:
            raise ValueError("an algebra needs at least one element")
        tabs: dict[str, object] = {}
        for op, ar in sig.connectives:
            if op not in tables:
                raise SignatureError(f"missing table for {op}")
            if ar > MAX_ARITY:
                raise SignatureError(f"{op} has arity {ar}; dense tables support at most {MAX_ARITY}")
            t = tables[op]
            if ar == 0:
                c = int(np.asarray(t).reshape(()))
                if not 0 <= c < size:
                    raise ValueError(f"constant {op}={c} out of range")
                tabs[op] = c
            else:
                arr = np.array(t, dtype=np.int64)
                if arr.shape != (size,) * ar:
                    raise ValueError(f"table for {op} has shape {arr.shape}, expected {(size,) * ar}")
                if arr.size and (arr.min() < 0 or arr.max() >= size):
                    raise ValueError(f"table for {op} has entries out of range")
                arr.setflags(write=False)
                tabs[op] = arr
        extra = set(tables) - set(sig.ops)
        if extra:
            raise SignatureError(f"tables given for connectives outside the signature: {sorted(extra)}")
        self.sig = sig
        self.size = size
        self.tables = tabs
        self.name = name
        self._key = None

    def __repr__(self):
        nm = f" {self.name}" if self.name else ""
        return f"<FiniteAlgebra{nm} size={self.size} sig={self.sig.label}>"

    def key(self) -> tuple:
        """Hashable identity of the tables (names are ignored)."""
        if self._key is None:
            parts = []
            for op in self.sig.ops:
                t = self.tables[op]
                parts.append((op, t if isinstance(t, int) else t.tobytes()))
            object.__setattr__(self, "_key", (self.size, tuple(parts)))
        return self._key

    def __eq__(self, other):
        return isinstance(other, FiniteAlgebra) and self.sig == other.sig and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def op(self, name: str, *args: int) -> int:
        t = self.tables[name]
        return t if isinstance(t, int) else int(t[args])

    # ----------------------------------------------------------- evaluation

    def eval(self, f: Formula, h: Mapping[int, int]) -> int:
        """Value of ``f`` under the assignment ``h`` (atom index -> element)."""
        memo: dict[Formula, int] = {}
        tabs = self.tables

        def go(g: Formula) -> int:
            if isinstance(g, Atom):
                try:
                    return int(h[g.index])
                except KeyError:
                    raise UnassignedAtom(g.index) from None
            if isinstance(g, Meta):
                raise WeaklogError(f"cannot evaluate metavariable _{g.name}")
            r = memo.get(g)
            if r is None:
                try:
                    t = tabs[g.op]
                except KeyError:
                    raise SignatureError(f"{g.op} is not interpreted in this algebra") from None
                if not g.args:
                    r = t
                else:
                    r = int(t[tuple(go(a) for a in g.args)])
                memo[g] = r
            return r

        return go(f)

    def eval_many(self, f: Formula, columns: Mapping[int, np.ndarray], length: int | None = None) -> np.ndarray:
        """Vectorised evaluation: ``columns[i]`` holds the values of atom ``i``
        across a batch of assignments.  Returns one value per assignment."""
        if length is None:
            length = len(next(iter(columns.values()))) if columns else 1
        memo: dict[Formula, np.ndarray] = {}
        tabs = self.tables

        def go(g: Formula) -> np.ndarray:
            if isinstance(g, Atom):
                try:
                    return columns[g.index]
                except KeyError:
                    raise UnassignedAtom(g.index) from None
            if isinstance(g, Meta):
                raise WeaklogError(f"cannot evaluate metavariable _{g.name}")
            r = memo.get(g)
            if r is None:
                t = tabs.get(g.op)
                if t is None:
                    raise SignatureError(f"{g.op} is not interpreted in this algebra")
                if not g.args:
                    r = np.full(length, t, dtype=np.int64)
                else:
                    r = t[tuple(go(a) for a in g.args)]
                memo[g] = r
            return r

        return go(f)

    def term_function(self, f: Formula, atoms: Sequence[int]) -> np.ndarray:
        """Full table of the term function of ``f`` in the listed atoms."""
        n = len(atoms)
        if n == 0:
            return np.asarray(self.eval(f, {}))
        grids = np.indices((self.size,) * n).reshape(n, -1)
        vals = self.eval_many(f, {a: grids[i] for i, a in enumerate(atoms)}, grids.shape[1])
        return vals.reshape((self.size,) * n)

    # ----------------------------------------------------------- structure

    def generate(self, seed: Iterable[int]) -> frozenset[int]:
        return generate_subalgebra(self, seed)

    def restrict(self, elements: Iterable[int]) -> tuple["FiniteAlgebra", list[int]]:
        """Subalgebra on a closed set, renumbered in increasing order.

        Returns the algebra and the list mapping new indices to old ones."""
        old = sorted(set(elements))
        pos = {a: i for i, a in enumerate(old)}
        lookup = np.full(self.size, -1, dtype=np.int64)
        lookup[old] = np.arange(len(old))
        tabs = {}
        for op, ar in self.sig.connectives:
            t = self.tables[op]
            if ar == 0:
                if t not in pos:
                    raise ValueError("subset does not contain all constants")
                tabs[op] = pos[t]
            else:
                sub = t[np.ix_(*([old] * ar))]
                new = lookup[sub]
                if (new < 0).any():
                    raise ValueError("subset is not closed under " + op)
                tabs[op] = new
        return FiniteAlgebra(self.sig, len(old), tabs), old

    def quotient(self, partition: "Partition") -> "FiniteAlgebra":
        """Quotient by a congruence; block ``i`` becomes element ``i``."""
        blocks = partition.ids
        reps = partition.representatives()
        tabs = {}
        for op, ar in self.sig.connectives:
            t = self.tables[op]
            if ar == 0:
                tabs[op] = int(blocks[t])
            else:
                tabs[op] = blocks[t[np.ix_(*([reps] * ar))]]
        return FiniteAlgebra(self.sig, len(reps), tabs)

    # ----------------------------------------------------------- JSON

    def to_json(self, core=None, truth=None, provenance: str | None = None) -> dict:
        d: dict = {"sig": self.sig.ops, "size": self.size, "tables": {}}
        for op, ar in self.sig.connectives:
            t = self.tables[op]
            d["tables"][op] = t if ar == 0 else t.tolist()
        if core is not None:
            d["core"] = sorted(int(x) for x in core)
        if truth is not None:
            d["truth"] = sorted(int(x) for x in truth)
        if provenance:
            d["provenance"] = provenance
        return d


def algebra_from_json(d: Mapping) -> tuple[FiniteAlgebra, dict]:
    """Inverse of ``to_json``; returns ``(algebra, extras)`` where extras holds
    ``core``/``truth`` (as frozensets, when present) and ``provenance``."""
    size = int(d["size"])
    tables = d["tables"]
    conns = []
    for op in d["sig"]:
        if op not in tables:
            raise SignatureError(f"no table for {op}")
        conns.append((op, np.asarray(tables[op]).ndim))
    sig = Signature.from_ops([c for c, _ in conns])
    if dict(sig.connectives) != dict(conns):
        sig = Signature(tuple(conns))
    alg = FiniteAlgebra(sig, size, tables, name=d.get("name", ""))
    extras = {}
    for k in ("core", "truth"):
        if k in d and d[k] is not None:
            s = frozenset(int(x) for x in d[k])
            if any(not 0 <= x < size for x in s):
                raise ValueError(f"{k} mentions elements outside the universe")
            extras[k] = s
    if "provenance" in d:
        extras["provenance"] = d["provenance"]
    return alg, extras


def load_algebra(path) -> tuple[FiniteAlgebra, dict]:
    with open(path, encoding="utf-8") as fh:
        return algebra_from_json(json.load(fh))


def dump_algebra(path, alg: FiniteAlgebra, **kw) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(alg.to_json(**kw), fh, indent=1)
        fh.write("\n")


# --------------------------------------------------------------- operations

def evaluate(alg: FiniteAlgebra, f: Formula, h: Mapping[int, int]) -> int:
    return alg.eval(f, h)


def generate_subalgebra(alg: FiniteAlgebra, seed: Iterable[int]) -> frozenset[int]:
    """Least subset containing ``seed`` and the constants, closed under all tables."""
    mask = np.zeros(alg.size, dtype=bool)
    for a in seed:
        if not 0 <= a < alg.size:
            raise ValueError(f"seed element {a} outside the universe")
        mask[a] = True
    for op, ar in alg.sig.connectives:
        if ar == 0:
            mask[alg.tables[op]] = True
    while True:
        cur = np.flatnonzero(mask)
        new = mask.copy()
        for op, ar in alg.sig.connectives:
            if ar == 0 or len(cur) == 0:
                continue
            new[alg.tables[op][np.ix_(*([cur] * ar))].ravel()] = True
        if (new == mask).all():
            return frozenset(int(x) for x in np.flatnonzero(mask))
        mask = new


def product(algs: Sequence[FiniteAlgebra], cap: int = DEFAULT_CELL_CAP) -> FiniteAlgebra:
    """Direct product.  Element order is lexicographic in the factor indices
    with the first factor most significant; see ``product_coords``."""
    if not algs:
        raise ValueError("empty product")
    sig = algs[0].sig
    for a in algs[1:]:
        if a.sig != sig:
            raise SignatureError("factors have different signatures")
    sizes = [a.size for a in algs]
    n = int(np.prod(sizes, dtype=object))
    max_ar = max([ar for _, ar in sig.connectives] + [1])
    if n ** max_ar > cap:
        raise CapExceeded(f"product has {n} elements, tables would need {n ** max_ar} cells (cap {cap})")
    coords = np.array(list(itertools.product(*[range(s) for s in sizes])), dtype=np.int64).reshape(n, len(algs))
    radix = np.ones(len(sizes), dtype=np.int64)
    for i in range(len(sizes) - 2, -1, -1):
        radix[i] = radix[i + 1] * sizes[i + 1]
    tabs = {}
    for op, ar in sig.connectives:
        if ar == 0:
            tabs[op] = int(sum(a.tables[op] * int(radix[i]) for i, a in enumerate(algs)))
            continue
        grid = np.indices((n,) * ar).reshape(ar, -1)
        out = np.zeros(grid.shape[1], dtype=np.int64)
        for i, a in enumerate(algs):
            comp = a.tables[op][tuple(coords[grid[k], i] for k in range(ar))]
            out += comp * radix[i]
        tabs[op] = out.reshape((n,) * ar)
    return FiniteAlgebra(sig, n, tabs)


def product_coords(sizes: Sequence[int], element: int) -> tuple[int, ...]:
    """Factor coordinates of a product element (inverse of the canonical order)."""
    out = []
    for s in reversed(sizes):
        out.append(element % s)
        element //= s
    return tuple(reversed(out))


def product_index(sizes: Sequence[int], coords: Sequence[int]) -> int:
    idx = 0
    for s, c in zip(sizes, coords):
        idx = idx * s + c
    return idx


def is_homomorphism(src: FiniteAlgebra, dst: FiniteAlgebra, h: Sequence[int]) -> bool:
    h = np.asarray(h, dtype=np.int64)
    for op, ar in src.sig.connectives:
        ts, td = src.tables[op], dst.tables[op]
        if ar == 0:
            if h[ts] != td:
                return False
            continue
        grid = np.indices((src.size,) * ar).reshape(ar, -1)
        lhs = h[ts[tuple(grid)]]
        rhs = td[tuple(h[grid[k]] for k in range(ar))]
        if not np.array_equal(lhs, rhs):
            return False
    return True


def find_homomorphisms(
    src: FiniteAlgebra,
    dst: FiniteAlgebra,
    mode: str = "all",
    src_core: Iterable[int] | None = None,
    dst_core: Iterable[int] | None = None,
    injective: bool = False,
    limit: int | None = None,
) -> list[tuple[int, ...]]:
    """All homomorphisms ``src -> dst`` as tuples ``h[a]``.

    ``mode='strong'`` keeps maps sending the source core into the target
    core; ``mode='strict'`` additionally requires ``a in core <=> h(a) in core``.
    Enumeration is by backtracking in source-element order with forward
    propagation of forced values, so the output order is lexicographic."""
    if src.sig != dst.sig:
        raise SignatureError("homomorphisms need a shared signature")
    if mode not in ("all", "strong", "strict"):
        raise ValueError(f"unknown mode {mode!r}")
    scol = dcol = None
    if mode != "all":
        if src_core is None or dst_core is None:
            raise ValueError(f"mode {mode!r} needs both cores")
        scol = np.zeros(src.size, dtype=bool)
        scol[list(src_core)] = True
        dcol = np.zeros(dst.size, dtype=bool)
        dcol[list(dst_core)] = True
    strict = mode == "strict"
    n = src.size
    ops = [(op, ar, src.tables[op], dst.tables[op]) for op, ar in src.sig.connectives]
    results: list[tuple[int, ...]] = []

    def allowed(a: int, b: int, h: list[int]) -> bool:
        if scol is not None:
            if scol[a] and not dcol[b]:
                return False
            if strict and dcol[b] and not scol[a]:
                return False
        if injective and b in h:
            return False
        return True

    def propagate(h: list[int], queue: list[int]) -> bool:
        # each newly fixed element may complete argument tuples
        while queue:
            a = queue.pop()
            for op, ar, ts, td in ops:
                if ar == 0:
                    continue
                fixed = [i for i in range(n) if h[i] >= 0]
                for args in itertools.product(fixed, repeat=ar):
                    if a not in args:
                        continue
                    r = int(ts[args])
                    v = int(td[tuple(h[x] for x in args)])
                    if h[r] < 0:
                        if not allowed(r, v, h):
                            return False
                        h[r] = v
                        queue.append(r)
                    elif h[r] != v:
                        return False
        return True

    h0 = [-1] * n
    queue = []
    for op, ar, ts, td in ops:
        if ar == 0:
            if h0[ts] >= 0 and h0[ts] != td:
                return []
            if h0[ts] < 0:
                if not allowed(ts, td, h0):
                    return []
                h0[ts] = td
                queue.append(ts)
    if not propagate(h0, queue):
        return []

    def search(h: list[int]):
        if limit is not None and len(results) >= limit:
            return
        try:
            a = h.index(-1)
        except ValueError:
            results.append(tuple(h))
            return
        for b in range(dst.size):
            if not allowed(a, b, h):
                continue
            h2 = list(h)
            h2[a] = b
            if propagate(h2, [a]):
                search(h2)
                if limit is not None and len(results) >= limit:
                    return

    search(h0)
    return results


# --------------------------------------------------------------- partitions

@dataclass(frozen=True)
class Partition:
    """Equivalence relation on ``0..n-1`` as block ids numbered by least element."""

    ids: np.ndarray = field(compare=False)

    def __post_init__(self):
        object.__setattr__(self, "ids", _normalize(self.ids))

    @classmethod
    def identity(cls, n: int) -> "Partition":
        return cls(np.arange(n))

    @classmethod
    def full(cls, n: int) -> "Partition":
        return cls(np.zeros(n, dtype=np.int64))

    @classmethod
    def from_key(cls, keys: Sequence) -> "Partition":
        """Elements with equal keys share a block."""
        seen: dict = {}
        return cls(np.array([seen.setdefault(k, len(seen)) for k in keys], dtype=np.int64))

    @property
    def n(self) -> int:
        return len(self.ids)

    @property
    def num_blocks(self) -> int:
        return int(self.ids.max()) + 1 if len(self.ids) else 0

    def blocks(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in range(self.num_blocks)]
        for a, b in enumerate(self.ids):
            out[b].append(a)
        return out

    def representatives(self) -> list[int]:
        return [b[0] for b in self.blocks()]

    def related(self, a: int, b: int) -> bool:
        return self.ids[a] == self.ids[b]

    def refines(self, other: "Partition") -> bool:
        """True when every block of ``self`` lies inside a block of ``other``."""
        pairs = set(zip(self.ids.tolist(), other.ids.tolist()))
        return len(pairs) == self.num_blocks

    def meet(self, other: "Partition") -> "Partition":
        return Partition.from_key(list(zip(self.ids.tolist(), other.ids.tolist())))

    def __eq__(self, other):
        return isinstance(other, Partition) and np.array_equal(self.ids, other.ids)

    def __hash__(self):
        return hash(tuple(self.ids.tolist()))

    def __repr__(self):
        return "Partition(" + " | ".join(" ".join(map(str, b)) for b in self.blocks()) + ")"


def _normalize(ids) -> np.ndarray:
    ids = np.asarray(ids).ravel()
    _, first, inv = np.unique(ids, return_index=True, return_inverse=True)
    order = np.argsort(first)
    rank = np.empty_like(order)
    rank[order] = np.arange(len(order))
    out = rank[inv].astype(np.int64)
    out.setflags(write=False)
    return out


def _translation_columns(alg: FiniteAlgebra) -> list[np.ndarray]:
    """For every basic operation and argument position, an ``n x m`` matrix
    whose row ``x`` lists ``f(params with x in that position)`` over all
    parameter tuples: the basic translations of the algebra."""
    cols = []
    for op, ar in alg.sig.connectives:
        if ar == 0:
            continue
        t = alg.tables[op]
        for i in range(ar):
            cols.append(np.moveaxis(t, i, 0).reshape(alg.size, -1))
    return cols


def is_congruence(alg: FiniteAlgebra, part: Partition) -> bool:
    ids = part.ids
    for m in _translation_columns(alg):
        img = ids[m]
        # related elements must have identical image rows
        for blk in part.blocks():
            if len(blk) > 1 and not (img[blk] == img[blk[0]]).all():
                return False
    return True


def coarsest_stable_partition(alg: FiniteAlgebra, init: Partition) -> Partition:
    """Largest congruence contained in ``init`` (Moore-style refinement)."""
    if init.n != alg.size:
        raise ValueError("partition size does not match the algebra")
    cols = _translation_columns(alg)
    ids = init.ids
    while True:
        sig = np.concatenate([ids[:, None]] + [ids[m] for m in cols], axis=1)
        _, new = np.unique(sig, axis=0, return_inverse=True)
        new = _normalize(new)
        if int(new.max()) == int(ids.max()):
            return Partition(new)
        ids = new


def random_algebra(sig: Signature, size: int, rng: np.random.Generator, name: str = "") -> FiniteAlgebra:
    tabs = {}
    for op, ar in sig.connectives:
        tabs[op] = int(rng.integers(size)) if ar == 0 else rng.integers(0, size, (size,) * ar)
    return FiniteAlgebra(sig, size, tabs, name)
