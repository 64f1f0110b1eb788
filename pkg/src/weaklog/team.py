"""Team semantics: a decision oracle for the classical inquisitive and
dependence systems, and bounded Kripke-team evaluation for the
intuitionistic ones.

Representation.  The value of a formula is the *set of teams supporting it*,
stored as a Python int used as a bitset indexed by team.  A team is itself a
bitmask over worlds (classical) or frame points (Kripke).  All connectives
then become a handful of big-int operations:

* ``&``/``|`` for conjunction/disjunction;
* implication: complement of the upward closure (in the subteam order) of
  ``A & ~B`` -- in the Kripke case looked up at the successor closure of each
  team;
* tensor: pairwise unions of supporting teams.

World ``w`` of the classical model makes atom number ``i`` (in the sorted
list of occurring atoms) true iff bit ``i`` of ``w`` is set.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, NamedTuple, Sequence

from .errors import CapExceeded, WeaklogError
from .heyting import FinitePoset, posets
from .syntax import AND, BOT, IMP, OR, TENSOR, Atom, Formula, Substitution, big_or

MAX_CLASSICAL_ATOMS = 4
DEFAULT_FRAME_SIZE = 4
DEFAULT_KRIPKE_ATOMS = 3


# ------------------------------------------------------------------ lattices of teams

@lru_cache(maxsize=None)
def _team_lattice(n_points: int):
    """Helpers for the lattice of subsets of ``n_points`` points.

    Returns ``(full, masks)`` where ``full`` has one bit per team and
    ``masks[i]`` marks the teams containing point ``i``."""
    nt = 1 << n_points
    full = (1 << nt) - 1
    masks = []
    for i in range(n_points):
        m = 0
        for t in range(nt):
            if t >> i & 1:
                m |= 1 << t
        masks.append(m)
    return full, tuple(masks)


def _up_close(s: int, masks: Sequence[int]) -> int:
    # add point i to every team of s that lacks it; shifting by 2**i adds it
    for i, m in enumerate(masks):
        s |= (s & ~m) << (1 << i)
    return s


def _down_close(s: int, masks: Sequence[int]) -> int:
    for i, m in enumerate(masks):
        s |= (s & m) >> (1 << i)
    return s


def _bits(x: int):
    while x:
        low = x & -x
        yield low.bit_length() - 1
        x ^= low


def _maximal(s: int, masks: Sequence[int]) -> int:
    covered = 0
    for i, m in enumerate(masks):
        covered |= (s & m) >> (1 << i)
    return s & ~covered


# ------------------------------------------------------------------ classical

class ClassicalTeamModel:
    """All teams over the ``2**n`` valuations of ``n`` atoms.

    ``atoms`` lists the atom indices the model interprets (default
    ``0..n-1``); position ``i`` in that list is bit ``i`` of a world."""

    def __init__(self, n: int | None = None, atoms: Sequence[int] | None = None, store_limit: int | None = None):
        if atoms is None:
            atoms = range(n or 0)
        self.atoms = tuple(atoms)
        self.n = len(self.atoms)
        if self.n > MAX_CLASSICAL_ATOMS:
            raise CapExceeded(f"classical team models are capped at {MAX_CLASSICAL_ATOMS} atoms")
        self.worlds = 1 << self.n
        self.full, self.masks = _team_lattice(self.worlds)
        self._pos = {a: i for i, a in enumerate(self.atoms)}
        self._atom_vals = {}
        for i, a in enumerate(self.atoms):
            true_worlds = sum(1 << w for w in range(self.worlds) if w >> i & 1)
            self._atom_vals[a] = sum(1 << t for t in range(1 << self.worlds) if t & ~true_worlds == 0)
        self.store_limit = store_limit
        self.cache: dict[Formula, int] = {}
        self._tensor_cache: dict[tuple[int, int], int] = {}

    def atom_value(self, index: int) -> int:
        try:
            return self._atom_vals[index]
        except KeyError:
            raise WeaklogError(f"atom p{index} is not interpreted by this model") from None

    def value(self, f: Formula) -> int:
        """Bitset of the teams supporting ``f``."""
        cache = self.cache
        r = cache.get(f)
        if r is not None:
            return r
        if isinstance(f, Atom):
            return self.atom_value(f.index)
        if not f.args:
            r = self.apply(f.op)
        else:
            r = self.apply(f.op, *[self.value(a) for a in f.args])
        if self.store_limit is None or f.size <= self.store_limit:
            cache[f] = r
        return r

    def apply(self, op: str, a: int = 0, b: int = 0) -> int:
        """The support clause of one connective on argument values."""
        if op == BOT:
            return 1  # only the empty team
        if op == AND:
            return a & b
        if op == OR:
            return a | b
        if op == IMP:
            return self.full & ~_up_close(a & ~b, self.masks)
        if op == TENSOR:
            return self.tensor(a, b)
        raise WeaklogError(f"no team clause for connective {op!r}")

    def tensor(self, a: int, b: int) -> int:
        key = (a, b) if a <= b else (b, a)
        r = self._tensor_cache.get(key)
        if r is None:
            ma, mb = _maximal(a, self.masks), _maximal(b, self.masks)
            acc = 0
            bl = list(_bits(mb))
            for u in _bits(ma):
                for v in bl:
                    acc |= 1 << (u | v)
            r = self._tensor_cache[key] = _down_close(acc, self.masks)
        return r

    def supports(self, team, f: Formula) -> bool:
        t = team_mask(team)
        if t >> self.worlds:
            raise ValueError("team mentions worlds outside the model")
        return bool(self.value(f) >> t & 1)

    def valid(self, f: Formula) -> bool:
        return self.value(f) == self.full

    def world_set(self, team: int) -> list[int]:
        return [w for w in range(self.worlds) if team >> w & 1]

    def bitstring(self, team: int) -> str:
        return "".join("1" if team >> w & 1 else "0" for w in range(self.worlds))


def team_mask(team) -> int:
    if isinstance(team, int):
        return team
    m = 0
    for w in team:
        m |= 1 << w
    return m


def _atoms_of(fs: Iterable[Formula]) -> list[int]:
    out: set[int] = set()
    for f in fs:
        out |= f.atoms()
    return sorted(out)


@lru_cache(maxsize=64)
def classical_model(atoms: tuple[int, ...]) -> ClassicalTeamModel:
    return ClassicalTeamModel(atoms=atoms)


def supports_classical(team, f: Formula, atoms: Sequence[int] | None = None) -> bool:
    """Does ``team`` (bitmask or iterable of worlds) support ``f``?  Worlds are
    valuations of ``atoms`` (default: ``0..max atom of f``)."""
    if atoms is None:
        atoms = range(max(f.atoms(), default=-1) + 1)
    return classical_model(tuple(atoms)).supports(team, f)


class TeamWitness(NamedTuple):
    atoms: tuple  # atom indices, position i is bit i of a world
    team: int  # bitmask over worlds
    worlds: int

    def bitstring(self) -> str:
        """One character per world in valuation order, '1' for members."""
        return "".join("1" if self.team >> w & 1 else "0" for w in range(self.worlds))

    def world_list(self) -> list[int]:
        return [w for w in range(self.worlds) if self.team >> w & 1]

    def describe(self) -> str:
        names = ",".join(f"p{a}" for a in self.atoms)
        return f"team {self.bitstring()} over valuations of ({names})"


class TeamVerdict(NamedTuple):
    holds: bool
    witness: TeamWitness | None = None

    def __bool__(self):
        return self.holds


def inqb_entails(Gamma: Sequence[Formula], phi: Formula, tensor: bool = True) -> TeamVerdict:
    """Classical team entailment over the occurring atoms.  With ``tensor``
    False, formulas containing the tensor are rejected (the plain system)."""
    fs = list(Gamma) + [phi]
    if not tensor and any(TENSOR in f.ops() for f in fs):
        raise WeaklogError("tensor is not part of this system")
    atoms = tuple(_atoms_of(fs))
    m = classical_model(atoms)
    prem = m.full
    for g in Gamma:
        prem &= m.value(g)
    bad = prem & ~m.value(phi)
    if not bad:
        return TeamVerdict(True)
    team = (bad & -bad).bit_length() - 1
    return TeamVerdict(False, TeamWitness(atoms, team, m.worlds))


def inqb_equivalent(f: Formula, g: Formula) -> bool:
    atoms = tuple(_atoms_of([f, g]))
    m = classical_model(atoms)
    return m.value(f) == m.value(g)


# ------------------------------------------------------------------ Kripke teams

@dataclass(frozen=True)
class KripkeTeamModel:
    """A poset with a persistent valuation (atom index -> upset bitmask)."""

    poset: FinitePoset
    valuation: tuple  # sorted (atom, upset mask) pairs

    def __post_init__(self):
        val = tuple(sorted(dict(self.valuation).items()))
        for a, u in val:
            if not self.poset.is_upset(u):
                raise ValueError(f"V(p{a}) is not upward closed")
        object.__setattr__(self, "valuation", val)

    @classmethod
    def make(cls, poset: FinitePoset, valuation: dict) -> "KripkeTeamModel":
        return cls(poset, tuple(valuation.items()))

    def describe(self) -> str:
        rel = [f"{i}<={j}" for i in range(self.poset.size) for j in range(self.poset.size)
               if i != j and self.poset.leq[i, j]]
        val = ", ".join(f"V(p{a})={_pts(u)}" for a, u in self.valuation)
        return f"{self.poset.size} points [{' '.join(rel) or 'discrete'}], {val}"


def _pts(mask: int) -> str:
    return "{" + ",".join(str(i) for i in range(mask.bit_length()) if mask >> i & 1) + "}"


class KripkeBundle:
    """Evaluate formulas on one frame under many valuations at once.

    Block ``v`` of a value (``2**|P|`` bits starting at ``v * 2**|P|``) is the
    set of supporting teams under valuation ``valuations[v]``."""

    def __init__(self, poset: FinitePoset, atoms: Sequence[int], valuations: Sequence[Sequence[int]],
                 store_limit: int | None = None):
        self.poset = poset
        self.atoms = tuple(atoms)
        self.valuations = [tuple(v) for v in valuations]
        n = poset.size
        self.width = 1 << n
        nb = len(self.valuations)
        self.blocks = nb
        self.full = (1 << (self.width * nb)) - 1
        base_full, base_masks = _team_lattice(n)
        rep = sum(1 << (k * self.width) for k in range(nb))  # one bit at each block start
        self.rep = rep
        self.masks = tuple(m * rep for m in base_masks)
        succ = [0] * self.width
        for t in range(self.width):
            r = 0
            for i in range(n):
                if t >> i & 1:
                    r |= poset.up[i]
            succ[t] = r
        self.succ = succ
        self._atom_vals = {}
        for j, a in enumerate(self.atoms):
            acc = 0
            for k, val in enumerate(self.valuations):
                u = val[j]
                block = sum(1 << t for t in range(self.width) if t & ~u == 0)
                acc |= block << (k * self.width)
            self._atom_vals[a] = acc
        self.store_limit = store_limit
        self.cache: dict[Formula, int] = {}

    def value(self, f: Formula) -> int:
        r = self.cache.get(f)
        if r is not None:
            return r
        if isinstance(f, Atom):
            try:
                return self._atom_vals[f.index]
            except KeyError:
                raise WeaklogError(f"atom p{f.index} has no valuation") from None
        if not f.args:
            r = self.apply(f.op)
        else:
            r = self.apply(f.op, *[self.value(a) for a in f.args])
        if self.store_limit is None or f.size <= self.store_limit:
            self.cache[f] = r
        return r

    def apply(self, op: str, a: int = 0, b: int = 0) -> int:
        if op == BOT:
            return self.rep
        if op == AND:
            return a & b
        if op == OR:
            return a | b
        if op == IMP:
            good = self.full & ~_up_close(a & ~b, self.masks)
            r = 0
            for t, s in enumerate(self.succ):
                r |= ((good >> s) & self.rep) << t
            return r
        if op == TENSOR:
            r = 0
            for u in range(self.width):
                au = (a >> u) & self.rep
                if not au:
                    continue
                for v in range(self.width):
                    hit = au & (b >> v)
                    if hit:
                        r |= hit << (u | v)
            return r
        raise WeaklogError(f"no team clause for connective {op!r}")

    def choice_mask(self, team_choice: str) -> int:
        if team_choice == "all":
            return self.full
        if team_choice == "full":
            return self.rep << (self.width - 1)
        if team_choice == "singletons":
            return sum(self.rep << (1 << i) for i in range(self.poset.size))
        raise ValueError(f"unknown team choice {team_choice!r}")

    def locate(self, bit: int) -> tuple[int, int]:
        return divmod(bit, self.width)


@lru_cache(maxsize=None)
def _valuations(poset: FinitePoset, k: int) -> tuple:
    ups = poset.upsets(cap=None)
    return tuple(itertools.product(ups, repeat=k))


def supports_kripke(m: KripkeTeamModel, team, f: Formula) -> bool:
    val = dict(m.valuation)
    atoms = sorted(f.atoms())
    missing = [a for a in atoms if a not in val]
    if missing:
        raise WeaklogError(f"atom p{missing[0]} has no valuation")
    b = KripkeBundle(m.poset, atoms, [tuple(val[a] for a in atoms)])
    t = team_mask(team)
    if t >> m.poset.size:
        raise ValueError("team mentions points outside the frame")
    return bool(b.value(f) >> t & 1)


class KripkeCountermodel(NamedTuple):
    model: KripkeTeamModel
    team: int  # bitmask over points

    def describe(self) -> str:
        return f"{self.model.describe()}; team {_pts(self.team)}"


@lru_cache(maxsize=256)
def kripke_bundle(poset: FinitePoset, atoms: tuple[int, ...]) -> KripkeBundle:
    return KripkeBundle(poset, atoms, _valuations(poset, len(atoms)))


def frames_up_to(frame_size: int):
    for n in range(1, frame_size + 1):
        yield from posets(n)


def inqi_countermodel_search(f: Formula, frame_size: int = DEFAULT_FRAME_SIZE, team_choice: str = "all",
                             max_atoms: int = DEFAULT_KRIPKE_ATOMS, premises: Sequence[Formula] = ()) -> KripkeCountermodel | None:
    """First (model, team) refuting ``premises |= f``, searching frames by size
    (isomorphism classes in a fixed order), then valuations in lexicographic
    order, then teams by bitmask; None if no countermodel within bounds."""
    atoms = tuple(_atoms_of([f, *premises]))
    if len(atoms) > max_atoms:
        raise CapExceeded(f"{len(atoms)} atoms exceeds the Kripke search cap {max_atoms}")
    for P in frames_up_to(frame_size):
        b = kripke_bundle(P, atoms)
        prem = b.full
        for g in premises:
            prem &= b.value(g)
        bad = prem & b.choice_mask(team_choice) & ~b.value(f)
        if bad:
            bit = (bad & -bad).bit_length() - 1
            v, t = b.locate(bit)
            model = KripkeTeamModel(P, tuple(zip(atoms, b.valuations[v])))
            return KripkeCountermodel(model, t)
    return None


def inqi_valid_bounded(f: Formula, frame_size: int = DEFAULT_FRAME_SIZE, **kw) -> bool:
    return inqi_countermodel_search(f, frame_size, **kw) is None


def inqi_entails_bounded(Gamma: Sequence[Formula], phi: Formula, frame_size: int = DEFAULT_FRAME_SIZE, **kw):
    return inqi_countermodel_search(phi, frame_size, premises=Gamma, **kw)


# ------------------------------------------------------------------ admissibility

def standard_equivalent(f: Formula) -> Formula | None:
    """A disjunct of the normal form of ``f`` that is team-equivalent to ``f``
    (so ``f`` is equivalent to a standard formula), or None."""
    from .proofsys import dnf

    disjuncts = dnf(f, "inq" if TENSOR in f.ops() else "int")
    whole = big_or(disjuncts)
    for a in disjuncts:
        if inqb_equivalent(whole, a):
            return a
    return None


def is_admissible_inqb(s: Substitution) -> bool:
    """True iff every image of ``s`` is team-equivalent to a standard formula."""
    return all(standard_equivalent(v) is not None for _, v in s.items())


LOGICS = ("inqb", "inqbt", "inqi", "inqit")


def logic_oracle(logic: str, frame_size: int = 3):
    """``(Gamma, phi) -> bool`` for the named system.  The classical systems
    are decided exactly; the intuitionistic ones by bounded countermodel
    search (True means no countermodel up to ``frame_size`` points)."""
    logic = logic.lower()
    if logic in ("inqb", "inqbt"):
        tensor = logic == "inqbt"
        return lambda gamma, phi: inqb_entails(gamma, phi, tensor=tensor).holds
    if logic in ("inqi", "inqit"):
        return lambda gamma, phi: inqi_entails_bounded(gamma, phi, frame_size) is None
    raise ValueError(f"unknown logic {logic!r}; choose from {LOGICS}")
