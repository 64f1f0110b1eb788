"""The acceptance batteries.  Each ``criterion_N`` returns a CriterionResult;
``run_all`` runs a selection, optionally in worker processes."""
from __future__ import annotations

import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from importlib import resources
from typing import Callable

import numpy as np

from . import oracles
from .algebra import random_algebra
from .algz import check_alg3, check_alg4, inqb_pair
from .bimatrix import Bimatrix, bimatrix_entails, export_horn, leibniz_partition, leibniz_reduce, parse_pairs
from .corpus import by_height, by_size, iter_size, binary_ops, random_formula, random_standard
from .expanded import QuasiEquation, check_preservation, core_entails, sigma_expand
from .heyting import (DNE_EQUATION, FinitePoset, ipc_equiv_bounded, medvedev_algebra, posets, product_heyting,
                      regular_core, tensor_violations, upset_algebra)
from .proofsys import AXIOMS, IDEMPOTENT_FORMULAS, SYSTEMS, dnf, fixpoint_iterate
from .soundness import (FillerPool, KripkeBlockCheck, MultiModel, ValueTable, check_schema_exhaustive,
                        check_schema_inclusion, spot_check)
from .syntax import (L_INQ, L_INT, TOP, App, Equation, Formula, apply_subst, instantiate, match_template,
                     parse, parse_equation, to_text)
from .team import (ClassicalTeamModel, frames_up_to, inqb_entails, inqi_countermodel_search, kripke_bundle,
                   logic_oracle, supports_classical)

TITLES = {
    1: "four-world support vectors",
    2: "split axiom and its substitution instance",
    3: "axiom schema soundness and modus ponens",
    4: "disjunctive normal form",
    5: "Medvedev algebras versus team semantics",
    6: "algebraizability conditions",
    7: "univariate core candidates and fixpoints",
    8: "Leibniz reduction",
    9: "class operators and cores",
    10: "Horn export golden files",
}

MAX_LISTED = 10


@dataclass
class CriterionResult:
    number: int
    title: str
    passed: bool
    elapsed: float
    details: dict = field(default_factory=dict)
    failures: list = field(default_factory=list)

    def line(self) -> str:
        tag = "PASS" if self.passed else "FAIL"
        return f"[{tag}] criterion {self.number:2d}: {self.title} ({self.elapsed:.1f}s)"

    def to_json(self) -> dict:
        # wall-clock time stays out so reports are identical across runs
        return {"number": self.number, "title": self.title, "passed": self.passed,
                "details": self.details, "failures": self.failures[:MAX_LISTED]}


class _Run:
    """Collects failures and details for one criterion."""

    def __init__(self, number: int):
        self.number = number
        self.details: dict = {}
        self.failures: list[str] = []
        self.t0 = time.perf_counter()

    def require(self, cond: bool, msg: str) -> bool:
        if not cond:
            self.failures.append(msg)
        return cond

    def done(self) -> CriterionResult:
        return CriterionResult(self.number, TITLES[self.number], not self.failures,
                               time.perf_counter() - self.t0, self.details, self.failures)


def _asg_text(asg: dict) -> str:
    parts = []
    for k, v in sorted(asg.items(), key=lambda kv: str(kv[0])):
        parts.append(f"{k}={to_text(v) if isinstance(v, Formula) else v}")
    return ", ".join(parts)


# ------------------------------------------------------------------ 1

# the four worlds: bit 0 is p (p0), bit 1 is q (p1)
FOUR_WORLDS = {"a": 3, "b": 1, "c": 2, "d": 0}


def criterion_1(**_) -> CriterionResult:
    run = _Run(1)
    w = FOUR_WORLDS
    cases = [
        ((w["b"], w["d"]), "~~(p0 | ~p0)", True),
        ((w["b"], w["d"]), "p0 | ~p0", False),
        ((w["a"], w["b"]), "p0", True),
    ]
    rows = []
    for team, text, expected in cases:
        f = parse(text)
        fast = supports_classical(team, f, atoms=(0, 1))
        slow = oracles.naive_supports(frozenset(team), f, (0, 1))
        rows.append({"team": sorted(team), "formula": text, "supports": fast})
        run.require(fast == expected, f"team {sorted(team)} / {text}: got {fast}, expected {expected}")
        run.require(slow == expected, f"reference evaluator disagrees on {text}")
    run.details["rows"] = rows
    return run.done()


# ------------------------------------------------------------------ 2

SPLIT = "(p0 -> (p1 | p2)) -> ((p0 -> p1) | (p0 -> p2))"


def criterion_2(**_) -> CriterionResult:
    run = _Run(2)
    split = parse(SPLIT)
    inst = apply_subst({0: parse("p1 | p2")}, split)
    v1 = inqb_entails([], split)
    v2 = inqb_entails([], inst)
    run.require(v1.holds, "split axiom refuted")
    run.require(not v2.holds and v2.witness is not None, "substitution instance not refuted")
    if v2.witness is not None:
        w = v2.witness
        team = frozenset(w.world_list())
        run.require(not oracles.naive_supports(team, inst, w.atoms), "counter-team supports the instance")
        run.details["counter_team"] = w.describe()
    run.details["instance"] = to_text(inst)
    return run.done()


# ------------------------------------------------------------------ 3

ATOMS3 = (0, 1, 2)
CLASSICAL_SYSTEMS = ("inqb", "inqbt")
KRIPKE_SYSTEMS = ("inqi", "inqit")
KRIPKE_FRAME_SIZE = 3
SPOT_SAMPLES = 50
MP_SAMPLES = 1000


def _soundness_corpus(sig, height: int = 3):
    fs = by_height(ATOMS3, sig, height)
    return fs, [f for f in fs if f.standard]


def _check_classical_system(name: str, run: _Run, rng: random.Random) -> dict:
    sysm = SYSTEMS[name]
    fs, std = _soundness_corpus(sysm.sig)
    table = ValueTable(ClassicalTeamModel(3))
    ap, sp = FillerPool.build(table, fs), FillerPool.build(table, std)
    fresh = ClassicalTeamModel(3)
    info = {"corpus": len(fs), "values": len(ap), "standard_values": len(sp), "schemas": {}}
    for ax in sysm.axioms:
        sch = AXIOMS[ax]
        if len(sch.template.metas()) <= 3:
            res = check_schema_exhaustive(table, sch, ap, sp)
        else:
            res = check_schema_inclusion(table, sch, ap, sp)
            # the inclusion form must agree with direct evaluation on a smaller corpus
            fs2, std2 = _soundness_corpus(sysm.sig, 2)
            ap2, sp2 = FillerPool.build(table, fs2), FillerPool.build(table, std2)
            d = check_schema_exhaustive(table, sch, ap2, sp2)
            i = check_schema_inclusion(table, sch, ap2, sp2)
            run.require(d.ok == i.ok, f"{name} {ax}: inclusion form and direct evaluation disagree")
        bad = spot_check(fresh, sch, ap, sp, SPOT_SAMPLES, rng)
        info["schemas"][ax] = {"mode": res.mode, "tuples": res.tuples}
        for asg in res.failures:
            run.failures.append(f"{name} {ax} invalid at {_asg_text(asg)}")
        for text in bad:
            run.failures.append(f"{name} {ax}: direct evaluation refutes {text}")
    return info


_KRIPKE_CHECKS: dict = {}


def _kripke_check(sig) -> KripkeBlockCheck:
    key = sig.name
    if key not in _KRIPKE_CHECKS:
        fs, std = _soundness_corpus(sig)
        _KRIPKE_CHECKS[key] = KripkeBlockCheck(list(frames_up_to(KRIPKE_FRAME_SIZE)), ATOMS3, fs, std)
    return _KRIPKE_CHECKS[key]


def _kripke_model() -> MultiModel:
    return MultiModel([kripke_bundle(P, ATOMS3) for P in frames_up_to(KRIPKE_FRAME_SIZE)])


def _check_kripke_system(name: str, run: _Run, rng: random.Random) -> dict:
    sysm = SYSTEMS[name]
    chk = _kripke_check(sysm.sig)
    info = {"block_signatures": len(chk.signatures), "schemas": {}}
    for ax in sysm.axioms:
        sch = AXIOMS[ax]
        res = chk.check(sch)
        info["schemas"][ax] = {"mode": res.mode, "tuples": res.tuples}
        for asg in res.failures:
            run.failures.append(f"{name} {ax} has a Kripke countermodel at {_asg_text(asg)}")
    # direct evaluation of sampled instances by countermodel search
    fs, std = _soundness_corpus(sysm.sig)
    for ax in sysm.axioms:
        sch = AXIOMS[ax]
        for _ in range(SPOT_SAMPLES // 5):
            asg = {m: rng.choice(std if sch.sort_of(m) == "standard" else fs) for m in sch.template.metas()}
            inst = instantiate(sch.template, asg)
            cm = inqi_countermodel_search(inst, KRIPKE_FRAME_SIZE)
            if cm is not None:
                run.failures.append(f"{name} {ax}: countermodel to {to_text(inst)}: {cm.describe()}")
    # control: the classical schema must fail here
    dne = chk.check(AXIOMS["DNE"], max_failures=1)
    run.require(not dne.ok, f"{name}: double negation elimination was not refuted (checker is vacuous)")
    return info


def _mp_sample(name: str, valid: Callable[[Formula], bool], rng: random.Random, n: int,
               run: _Run) -> dict:
    """Sample modus ponens steps from valid formulas; the conclusion must be
    valid.  Major premises come from axiom instances whose antecedent
    matches a pool formula, or from pool formulas of the form A -> B with A
    in the pool."""
    sysm = SYSTEMS[name]
    sig = sysm.sig
    schemas = [AXIOMS[a] for a in sysm.axioms if AXIOMS[a].template.op == "imp"]

    def filler(sort: str) -> Formula:
        if sort == "standard":
            return random_standard(rng, ATOMS3, sig, 2)
        return random_formula(rng, ATOMS3, sig, 2)

    def axiom_instance(sch, fixed=None):
        asg = dict(fixed or {})
        for m in sorted(sch.template.metas()):
            if m not in asg:
                asg[m] = filler(sch.sort_of(m))
        return instantiate(sch.template, asg)

    pool: list[Formula] = []
    pool_set: set[Formula] = set()
    while len(pool) < 100:
        f = axiom_instance(rng.choice(schemas))
        if not valid(f):
            run.failures.append(f"{name}: axiom instance {to_text(f)} is not valid")
            return {"mp_steps": 0}
        if f not in pool_set:
            pool.append(f)
            pool_set.add(f)
    steps = attempts = 0
    while steps < n and attempts < 200 * n:
        attempts += 1
        X = rng.choice(pool)
        if rng.random() < 0.5:
            sch = rng.choice(schemas)
            asg = match_template(sch.template.args[0], X)
            if asg is None or any(sch.sort_of(m) == "standard" and not v.standard for m, v in asg.items()):
                continue
            major = axiom_instance(sch, asg)
            if not valid(major):
                run.failures.append(f"{name}: axiom instance {to_text(major)} is not valid")
                continue
        else:
            if not (isinstance(X, App) and X.op == "imp" and X.args[0] in pool_set):
                continue
            major = X
        Y = major.args[1]
        steps += 1
        if not valid(Y):
            run.failures.append(f"{name}: modus ponens from valid premises gives invalid {to_text(Y)}")
        elif Y not in pool_set and Y.size <= 40:
            pool.append(Y)
            pool_set.add(Y)
    run.require(steps == n, f"{name}: only {steps} modus ponens samples found")
    return {"mp_steps": steps, "pool": len(pool)}


def criterion_3(seed: int = 0, **_) -> CriterionResult:
    run = _Run(3)
    rng = random.Random(seed)
    for name in CLASSICAL_SYSTEMS:
        run.details[name] = _check_classical_system(name, run, rng)
    for name in KRIPKE_SYSTEMS:
        run.details[name] = _check_kripke_system(name, run, rng)
    cm = ClassicalTeamModel(3)
    km = _kripke_model()
    for name in CLASSICAL_SYSTEMS:
        run.details[name].update(_mp_sample(name, cm.valid, random.Random(seed + 1), MP_SAMPLES, run))
    for name in KRIPKE_SYSTEMS:
        run.details[name].update(_mp_sample(name, lambda f: km.value(f) == km.full, random.Random(seed + 2),
                                            MP_SAMPLES, run))
    return run.done()


# ------------------------------------------------------------------ 4

DNF_MAX_SIZE = 9


class _SmallMemo(dict):
    """Memo that stops storing once frozen (the top layer is streamed)."""

    frozen = False

    def __setitem__(self, key, value):
        if not self.frozen:
            super().__setitem__(key, value)


def _dnf_battery(sig, sys: str, run: _Run) -> dict:
    atoms = ATOMS3
    layers = by_size(atoms, sig, DNF_MAX_SIZE - 2)
    model = ClassicalTeamModel(3)
    memo = _SmallMemo()
    checked = 0

    def check(f: Formula):
        nonlocal checked
        checked += 1
        ds = dnf(f, sys, memo=memo)
        acc = 0
        for d in ds:
            if not d.standard:
                run.failures.append(f"{sys}: disjunct {to_text(d)} of {to_text(f)} contains a disjunction")
            acc |= model.value(d)
        if acc != model.value(f):
            run.failures.append(f"{sys}: normal form of {to_text(f)} is not equivalent")

    for layer in layers:
        for f in layer:
            check(f)
    memo.frozen = True
    model.store_limit = 0
    for f in iter_size(layers, DNF_MAX_SIZE, binary_ops(sig)):
        check(f)
        if len(run.failures) > 50:
            break
    return {"formulas": checked}


def criterion_4(seed: int = 0, **_) -> CriterionResult:
    run = _Run(4)
    # the bitset evaluator against clause-by-clause evaluation, two atoms
    rng = random.Random(seed)
    m2 = ClassicalTeamModel(2)
    for _ in range(500):
        f = random_formula(rng, (0, 1), L_INQ, 4)
        v = m2.value(f)
        for t in range(16):
            slow = oracles.naive_supports(frozenset(w for w in range(4) if t >> w & 1), f, (0, 1))
            if slow != bool(v >> t & 1):
                run.failures.append(f"evaluators disagree on {to_text(f)} at team {t}")
                break
    run.details["int"] = _dnf_battery(L_INT, "int", run)
    run.details["inq"] = _dnf_battery(L_INQ, "inq", run)
    return run.done()


# ------------------------------------------------------------------ 5

def criterion_5(**_) -> CriterionResult:
    run = _Run(5)
    corpus = by_height((0, 1), L_INT, 3)
    K = [regular_core(medvedev_algebra(s)) for s in (1, 2, 3)]
    model = ClassicalTeamModel(2)
    counts = {"team_valid": 0, "team_refuted": 0}
    for f in corpus:
        team_valid = model.valid(f)
        core = [core_entails([ea], [], Equation(f, TOP)).holds for ea in K]
        if team_valid:
            counts["team_valid"] += 1
            if not all(core):
                run.failures.append(f"{to_text(f)} is team-valid but core-refuted")
        else:
            counts["team_refuted"] += 1
            if all(core):
                run.failures.append(f"{to_text(f)} is team-refuted but core-valid on every algebra")
    run.details.update(counts, corpus=len(corpus), algebra_sizes=[ea.size for ea in K],
                       core_sizes=[len(ea.core) for ea in K])
    return run.done()


# ------------------------------------------------------------------ 6

def _plain_algebras():
    algs = [medvedev_algebra(s) for s in (1, 2, 3, 4)]
    small = []
    for n in range(1, 5):
        for P in posets(n):
            h = upset_algebra(P)
            algs.append(h)
            if n <= 3:
                small.append(h)
    for i in range(len(small)):
        for j in range(i, len(small)):
            if small[i].size * small[j].size <= 200:
                algs.append(product_heyting([small[i], small[j]]))
    return algs


def _tensor_algebras():
    ml = [medvedev_algebra(s, tensor=True) for s in (1, 2, 3, 4)]
    algs = list(ml)
    for i in range(3):
        for j in range(i, 3):
            if ml[i].size * ml[j].size <= 200:
                algs.append(product_heyting([ml[i], ml[j]]))
    return algs


def criterion_6(**_) -> CriterionResult:
    run = _Run(6)
    t = inqb_pair()
    sigma = [DNE_EQUATION]
    for label, algs, sig, logic in (("inqb", _plain_algebras(), L_INT, "inqb"),
                                    ("inqbt", _tensor_algebras(), L_INQ, "inqbt")):
        if sig is L_INQ:
            for h in algs:
                bad = tensor_violations(h)
                run.require(not bad, f"{h.alg.name or h.provenance}: {bad}")
        run.require(all(h.size <= 200 for h in algs), f"{label}: an algebra exceeds 200 elements")
        K = [sigma_expand(h.alg, sigma, h.provenance) for h in algs]
        a4 = check_alg4(K, t)
        if not a4.holds:
            i, a, b = a4.witness
            run.failures.append(f"{label}: alg4 fails on member {i} at ({a}, {b})")
        corpus = by_height((0, 1), sig, 3)
        a3 = check_alg3(logic_oracle(logic), t, corpus)
        for r in a3.failures()[:MAX_LISTED]:
            run.failures.append(f"{label}: alg3 fails for {to_text(r.phi)} (forward {r.forward}, backward {r.backward})")
        run.details[label] = {"algebras": len(K), "largest": max(h.size for h in algs),
                              "alg3_corpus": len(corpus), "alg3_failures": len(a3.failures())}
    return run.done()


# ------------------------------------------------------------------ 7

NONALG_RHOS = ("~~p0", "~~p0 -> p0", "p0", "~p0", "bot")


def criterion_7(**_) -> CriterionResult:
    run = _Run(7)
    found = {}
    for text in NONALG_RHOS:
        cm = inqi_countermodel_search(parse(text), frame_size=2)
        run.require(cm is not None, f"no countermodel to {text} within 2 points")
        found[text] = cm.describe() if cm else None
    fix = {}
    for text in IDEMPOTENT_FORMULAS:
        rho = parse(text)
        r = fixpoint_iterate(rho)
        ok = r.period == 1 and r.fixpoint is not None
        ok = ok and ipc_equiv_bounded(r.fixpoint, rho).equivalent_up_to_bound
        run.require(ok, f"{text} is not idempotent (period {r.period}, n {r.n})")
        fix[text] = {"n": r.n, "period": r.period}
    r = fixpoint_iterate(parse("~p0"))
    run.require(r.period == 2, f"~p0 iteration has period {r.period}")
    fix["~p0"] = {"n": r.n, "period": r.period}
    run.details.update(countermodels=found, fixpoints=fix)
    return run.done()


# ------------------------------------------------------------------ 8

def _heyting_small():
    out = [upset_algebra(FinitePoset.chain(k)).alg for k in range(0, 4)]
    out.append(upset_algebra(FinitePoset.antichain(2)).alg)
    return out


def _random_subset(rng: np.random.Generator, n: int) -> frozenset:
    return frozenset(int(a) for a in np.flatnonzero(rng.random(n) < 0.5))


def criterion_8(seeds: int = 100, **_) -> CriterionResult:
    run = _Run(8)
    hey = _heyting_small()
    formulas = by_height((0, 1), L_INT, 2)
    pairs = [((), phi) for phi in formulas] + [((g,), phi) for g in formulas for phi in formulas]
    stats = {"matrices": 0, "nontrivial_reductions": 0, "not_closed_at_depth3": 0, "library_entailment_checks": 0}
    for seed in range(seeds):
        rng = np.random.default_rng(seed)
        algs = list(hey) + [random_algebra(L_INT, n, rng) for n in (1, 2, 3, 4)]
        for alg in algs:
            m = Bimatrix(alg, _random_subset(rng, alg.size), _random_subset(rng, alg.size))
            stats["matrices"] += 1
            fast = leibniz_partition(m)
            slow, closed = oracles.brute_leibniz(alg, m.truth, m.core, depth=3)
            stats["not_closed_at_depth3"] += not closed
            if fast != slow:
                run.failures.append(f"seed {seed} {alg.name or alg.size}: refinement {fast.blocks} vs brute {slow.blocks}")
                continue
            red = leibniz_reduce(m)
            stats["nontrivial_reductions"] += red.matrix.size < m.size
            again = leibniz_reduce(red.matrix)
            run.require(again.matrix.size == red.matrix.size, f"seed {seed}: reduction is not idempotent")
            t1 = oracles.entailment_table(alg, m.truth, m.core, formulas, (0, 1))
            t2 = oracles.entailment_table(red.matrix.alg, red.matrix.truth, red.matrix.core, formulas, (0, 1))
            full1 = (1 << len(m.core) ** 2) - 1
            full2 = (1 << len(red.matrix.core) ** 2) - 1
            idx = {f: i for i, f in enumerate(formulas)}
            for gamma, phi in pairs:
                if gamma:
                    h1 = t1[idx[gamma[0]]] & ~t1[idx[phi]] == 0
                    h2 = t2[idx[gamma[0]]] & ~t2[idx[phi]] == 0
                else:
                    h1, h2 = t1[idx[phi]] == full1, t2[idx[phi]] == full2
                if h1 != h2:
                    run.failures.append(f"seed {seed}: reduction changes {[to_text(g) for g in gamma]} |- {to_text(phi)}")
                    break
                if seed < 5:
                    stats["library_entailment_checks"] += 1
                    lib = bimatrix_entails([m], list(gamma), phi).holds
                    run.require(lib == h1, f"seed {seed}: library entailment disagrees on {to_text(phi)}")
            if len(run.failures) > 20:
                break
    run.details.update(stats)
    return run.done()


# ------------------------------------------------------------------ 9

SIGMA_POOL = (
    ("p0 ~ ~~p0",),
    ("p0 ~ p0",),
    ("p0 | ~p0 ~ bot -> bot",),
    ("~~p0 ~ bot -> bot",),
    ("p0 ~ bot -> bot",),
    ("p0 | ~p0 ~ bot -> bot", "p0 ~ ~~p0"),
)


def _preservation_pool():
    base = []
    for n in (1, 2, 3):
        base.extend(upset_algebra(P).alg for P in posets(n))
    ambient = list(base)
    ambient.extend(upset_algebra(P).alg for P in posets(4))
    ambient.append(medvedev_algebra(2).alg)
    return base, ambient


def criterion_9(seed: int = 0, instances: int = 200, **_) -> CriterionResult:
    run = _Run(9)
    base, ambient_algs = _preservation_pool()
    rng = random.Random(seed)
    stats = {"instances": 0, "S": 0, "P": 0, "C": 0, "valid_somewhere": 0}
    for k in range(instances):
        sigma = [parse_equation(s, L_INT) for s in rng.choice(SIGMA_POOL)]
        members = rng.sample(base, rng.choice((1, 2)))
        K = [sigma_expand(a, sigma) for a in members]
        amb = [sigma_expand(a, sigma) for a in ambient_algs]
        prem = [Equation(random_formula(rng, (0, 1), L_INT, 2), random_formula(rng, (0, 1), L_INT, 2))
                for _ in range(rng.choice((0, 0, 1)))]
        concl = Equation(random_formula(rng, (0, 1), L_INT, 2), random_formula(rng, (0, 1), L_INT, 2))
        q = QuasiEquation(tuple(prem), concl)
        stats["instances"] += 1
        stats["valid_somewhere"] += any(core_entails([ea], q.premises, q.conclusion).holds for ea in K)
        for op in ("S", "P", "C"):
            rep = check_preservation(K, sigma, q, op, ambient=amb)
            stats[op] += rep.instances
            for v in rep.violations[:3]:
                run.failures.append(f"instance {k} ({q}; {op}): {v}")
    run.details.update(stats)
    return run.done()


# ------------------------------------------------------------------ 10

def _data(name: str) -> str:
    return resources.files("weaklog.data").joinpath(name).read_text(encoding="utf-8")


def criterion_10(**_) -> CriterionResult:
    run = _Run(10)
    pairs = parse_pairs(_data("horn_pairs.txt"))
    run.require(len(pairs) == 10, f"corpus has {len(pairs)} pairs")
    for weak, golden in ((True, "horn_weak.p"), (False, "horn_standard.p")):
        got = export_horn(pairs, weak=weak).encode("utf-8")
        want = _data(golden).encode("utf-8")
        if got != want:
            gl, wl = got.splitlines(), want.splitlines()
            first = next((i for i, (a, b) in enumerate(zip(gl, wl)) if a != b), min(len(gl), len(wl)))
            run.failures.append(f"{golden}: first difference at line {first + 1}")
    run.details["pairs"] = len(pairs)
    return run.done()


CRITERIA: dict[int, Callable[..., CriterionResult]] = {
    1: criterion_1, 2: criterion_2, 3: criterion_3, 4: criterion_4, 5: criterion_5,
    6: criterion_6, 7: criterion_7, 8: criterion_8, 9: criterion_9, 10: criterion_10,
}


def run_criterion(number: int, seed: int = 0) -> CriterionResult:
    try:
        return CRITERIA[number](seed=seed)
    except Exception as exc:  # report, do not abort the whole suite
        return CriterionResult(number, TITLES[number], False, 0.0, {}, [f"{type(exc).__name__}: {exc}"])


def run_all(selected=None, threads: int = 1, seed: int = 0) -> list[CriterionResult]:
    nums = sorted(selected or CRITERIA)
    if threads <= 1:
        return [run_criterion(n, seed) for n in nums]
    with ProcessPoolExecutor(max_workers=threads) as ex:
        return list(ex.map(run_criterion, nums, [seed] * len(nums)))
