"""Batch validity of axiom schemas over large filler corpora.

Fillers are first collapsed to their semantic values, so a schema is checked
once per tuple of distinct values.  Values are interned to small integer ids
and every connective is applied once per distinct pair of argument ids;
numpy only shuffles the id arrays around.  The connective clauses themselves
come from the team models, so this exercises the same semantics as the
single-formula evaluators."""
from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .syntax import Atom, Formula, Meta, Schema, instantiate, to_text

_BASE = 1 << 31


class MultiModel:
    """Several team models side by side; a value is the tuple of their values."""

    def __init__(self, models: Sequence):
        self.models = list(models)
        self.full = tuple(m.full for m in self.models)

    def value(self, f: Formula) -> tuple:
        return tuple(m.value(f) for m in self.models)

    def apply(self, op: str, a=None, b=None) -> tuple:
        if a is None:
            return tuple(m.apply(op) for m in self.models)
        return tuple(m.apply(op, x, y) for m, x, y in zip(self.models, a, b))


class ValueTable:
    """Interned semantic values with memoized connective tables."""

    def __init__(self, model):
        self.model = model
        self.values: list = []
        self.index: dict = {}
        self.memo: dict[str, tuple[np.ndarray, np.ndarray]] = {}
        self.full_id = self.intern(model.full)

    def intern(self, v) -> int:
        i = self.index.get(v)
        if i is None:
            i = len(self.values)
            self.values.append(v)
            self.index[v] = i
        return i

    def of(self, f: Formula) -> int:
        return self.intern(self.model.value(f))

    def binary(self, op: str, A: np.ndarray, B: np.ndarray) -> np.ndarray:
        codes = A * _BASE + B
        uniq, inv = np.unique(codes, return_inverse=True)
        keys, res = self.memo.get(op, (np.empty(0, np.int64), np.empty(0, np.int64)))
        pos = np.searchsorted(keys, uniq)
        hit = pos < len(keys)
        hit[hit] = keys[pos[hit]] == uniq[hit]
        out = np.empty(len(uniq), np.int64)
        out[hit] = res[pos[hit]]
        missing = uniq[~hit]
        if len(missing):
            vals = self.values
            new = np.fromiter((self.intern(self.model.apply(op, vals[int(c) // _BASE], vals[int(c) % _BASE]))
                               for c in missing), np.int64, len(missing))
            out[~hit] = new
            keys = np.concatenate([keys, missing])
            res = np.concatenate([res, new])
            order = np.argsort(keys, kind="stable")
            self.memo[op] = (keys[order], res[order])
        return out[inv.reshape(-1)]

    def evaluate(self, template: Formula, columns: dict[str, np.ndarray], n: int) -> np.ndarray:
        if isinstance(template, Meta):
            return columns[template.name]
        if isinstance(template, Atom) or not template.args:
            return np.full(n, self.of(template), np.int64)
        a, b = template.args
        return self.binary(template.op, self.evaluate(a, columns, n), self.evaluate(b, columns, n))


@dataclass
class FillerPool:
    """Distinct values reached by a corpus, with one representative each."""

    ids: np.ndarray
    reps: list[Formula]
    corpus_size: int

    @classmethod
    def build(cls, table: ValueTable, formulas: Sequence[Formula]) -> "FillerPool":
        ids, reps, seen = [], [], set()
        for f in formulas:
            i = table.of(f)
            if i not in seen:
                seen.add(i)
                ids.append(i)
                reps.append(f)
        return cls(np.array(ids, np.int64), reps, len(formulas))

    def __len__(self):
        return len(self.ids)


@dataclass
class SchemaResult:
    schema: str
    mode: str
    tuples: int
    failures: list = field(default_factory=list)  # representative assignments

    @property
    def ok(self) -> bool:
        return not self.failures


def _pools_for(schema: Schema, any_pool: FillerPool, std_pool: FillerPool):
    metas = sorted(schema.template.metas())
    return metas, [std_pool if schema.sort_of(m) == "standard" else any_pool for m in metas]


def check_schema_exhaustive(table: ValueTable, schema: Schema, any_pool: FillerPool, std_pool: FillerPool,
                            chunk_rows: int = 1 << 18, max_failures: int = 5) -> SchemaResult:
    metas, pools = _pools_for(schema, any_pool, std_pool)
    sizes = [len(p) for p in pools]
    total = math.prod(sizes)
    res = SchemaResult(schema.name, "exhaustive", total)
    k = 0
    while k < len(sizes) and math.prod(sizes[k:]) > chunk_rows:
        k += 1
    tail = [p.ids for p in pools[k:]]
    grids = np.meshgrid(*tail, indexing="ij") if tail else []
    tail_cols = [g.reshape(-1) for g in grids]
    n = len(tail_cols[0]) if tail_cols else 1
    for prefix in itertools.product(*[range(s) for s in sizes[:k]]):
        cols = {m: np.full(n, pools[j].ids[prefix[j]], np.int64) for j, m in enumerate(metas[:k])}
        cols.update({m: tail_cols[j] for j, m in enumerate(metas[k:])})
        out = table.evaluate(schema.template, cols, n)
        for row in np.flatnonzero(out != table.full_id)[:max_failures - len(res.failures)]:
            asg = {}
            for j, m in enumerate(metas):
                vid = int(cols[m][row])
                asg[m] = pools[j].reps[int(np.flatnonzero(pools[j].ids == vid)[0])]
            res.failures.append(asg)
        if len(res.failures) >= max_failures:
            break
    return res


def check_schema_sampled(table: ValueTable, schema: Schema, any_pool: FillerPool, std_pool: FillerPool,
                         samples: int, rng: random.Random, max_failures: int = 5) -> SchemaResult:
    metas, pools = _pools_for(schema, any_pool, std_pool)
    picks = [[rng.randrange(len(p)) for _ in range(samples)] for p in pools]
    cols = {m: pools[j].ids[np.array(picks[j], np.int64)] for j, m in enumerate(metas)}
    out = table.evaluate(schema.template, cols, samples)
    res = SchemaResult(schema.name, "sampled", samples)
    for row in np.flatnonzero(out != table.full_id)[:max_failures]:
        res.failures.append({m: pools[j].reps[picks[j][row]] for j, m in enumerate(metas)})
    return res


def spot_check(model, schema: Schema, any_pool: FillerPool, std_pool: FillerPool, samples: int,
               rng: random.Random) -> list[str]:
    """Instantiate the schema with representative formulas and evaluate the
    instance directly; returns the instances that are not valid."""
    metas, pools = _pools_for(schema, any_pool, std_pool)
    bad = []
    for _ in range(samples):
        asg = {m: pools[j].reps[rng.randrange(len(pools[j]))] for j, m in enumerate(metas)}
        inst = instantiate(schema.template, asg)
        if model.value(inst) != model.full:
            bad.append(to_text(inst))
    return bad


# ------------------------------------------------------------------ Kripke blocks

class KripkeBlockCheck:
    """Schema validity on a family of frames, split by valuation.

    Every connective acts inside one (frame, valuation) block of a bundle
    value, and fillers are chosen independently for each metavariable, so a
    schema is valid on all filler tuples iff, in every block, it is valid on
    the product of the block values the fillers reach.  Block values are
    downsets of a small team lattice, so each product is tiny."""

    def __init__(self, frames: Sequence, atoms: Sequence[int], any_corpus: Sequence[Formula],
                 std_corpus: Sequence[Formula]):
        from .team import KripkeBundle, kripke_bundle

        self.frames = list(frames)
        self.signatures = []  # (frame index, block, any pool, std pool)
        self.tables = []
        seen = set()
        for fi, P in enumerate(self.frames):
            bundle = kripke_bundle(P, tuple(atoms))
            single = KripkeBundle(P, (), [()])
            table = ValueTable(single)
            self.tables.append(table)
            w = bundle.width
            mask = (1 << w) - 1
            pools = []
            for corpus in (any_corpus, std_corpus):
                vals = [bundle.value(f) for f in corpus]
                per_block = []
                for k in range(bundle.blocks):
                    reps: dict[int, Formula] = {}
                    for f, v in zip(corpus, vals):
                        reps.setdefault((v >> (k * w)) & mask, f)
                    per_block.append(reps)
                pools.append(per_block)
            for k in range(bundle.blocks):
                key = (fi, frozenset(pools[0][k]), frozenset(pools[1][k]))
                if key in seen:
                    continue
                seen.add(key)
                mk = [FillerPool(np.array([table.intern(v) for v in reps], np.int64), list(reps.values()),
                                 len(reps)) for reps in (pools[0][k], pools[1][k])]
                self.signatures.append((fi, k, mk[0], mk[1]))

    def check(self, schema: Schema, max_failures: int = 5) -> SchemaResult:
        res = SchemaResult(schema.name, "exhaustive-blocks", 0)
        for fi, k, ap, sp in self.signatures:
            r = check_schema_exhaustive(self.tables[fi], schema, ap, sp, max_failures=max_failures)
            res.tuples += r.tuples
            for asg in r.failures:
                res.failures.append({"frame": self.frames[fi], "valuation_block": k, **asg})
            if len(res.failures) >= max_failures:
                break
        return res


# ------------------------------------------------------------------ inclusion form

def _curried(template: Formula) -> tuple[list[Formula], Formula]:
    ants = []
    while isinstance(template, Formula) and getattr(template, "op", None) == "imp" and not isinstance(template, Meta):
        ants.append(template.args[0])
        template = template.args[1]
    return ants, template


def _bits(v: int, nbits: int) -> np.ndarray:
    return np.array([(v >> i) & 1 for i in range(nbits)], dtype=np.float64)


def check_schema_inclusion(table: ValueTable, schema: Schema, any_pool: FillerPool, std_pool: FillerPool,
                           max_failures: int = 1) -> SchemaResult:
    """Validity of ``X1 -> (X2 -> ... -> C)`` checked as ``X1 & X2 & ... <= C``
    on team sets, which is equivalent because support sets are downward
    closed.  Each part is tabulated over the metavariables it mentions, and
    for each team a counterexample exists iff the sum over all filler tuples
    of ``X1 * X2 * ... * (1 - C)`` is positive; numpy's einsum contracts
    that sum pairwise.  Intended for schemas whose parts mention few
    metavariables (A14 has four, each part only two)."""
    ants, concl = _curried(schema.template)
    metas, pools = _pools_for(schema, any_pool, std_pool)
    pool_of = dict(zip(metas, pools))
    letters = {m: chr(ord("a") + i) for i, m in enumerate(metas)}
    nbits = int(table.model.full).bit_length()

    def part_table(f: Formula, negate: bool):
        ms = sorted(f.metas())
        grids = np.meshgrid(*[pool_of[m].ids for m in ms], indexing="ij") if ms else []
        n = grids[0].size if ms else 1
        ids = table.evaluate(f, {m: g.reshape(-1) for m, g in zip(ms, grids)}, n)
        cache = {}
        rows = []
        for i in ids:
            i = int(i)
            if i not in cache:
                cache[i] = _bits(table.values[i], nbits)
            rows.append(cache[i])
        arr = np.stack(rows).reshape(tuple(len(pool_of[m]) for m in ms) + (nbits,))
        return ms, (1.0 - arr) if negate else arr

    parts = [part_table(a, False) for a in ants] + [part_table(concl, True)]
    spec = ",".join("".join(letters[m] for m in ms) + "z" for ms, _ in parts) + "->z"
    arrays = [arr for _, arr in parts]
    path = np.einsum_path(spec, *arrays, optimize="optimal")[0]
    res = SchemaResult(schema.name, "inclusion", math.prod(len(p) for p in pools))
    counts = np.einsum(spec, *arrays, optimize=path)
    for b in np.flatnonzero(counts > 0.5)[:max_failures]:
        # fix metavariables one at a time, keeping a positive count
        fixed: dict[str, int] = {}
        for m in metas:
            for v in range(len(pool_of[m])):
                trial = {**fixed, m: v}
                sub = []
                sub_spec = []
                for ms, arr in parts:
                    idx = tuple(trial[x] if x in trial else slice(None) for x in ms) + (int(b),)
                    sub.append(arr[idx])
                    sub_spec.append("".join(letters[x] for x in ms if x not in trial))
                if np.einsum(",".join(sub_spec) + "->", *sub, optimize=True) > 0.5:
                    fixed = trial
                    break
        res.failures.append({m: pool_of[m].reps[fixed[m]] for m in metas})
    return res
