"""Formulas, signatures, parsing/printing, substitutions and schema matching.

Formulas are immutable trees built from three node types:

* ``Atom(k)`` for the propositional variable ``p<k>``,
* ``App(op, args)`` for a connective applied to arguments,
* ``Meta(name)`` for a metavariable inside schema / transformer templates.

Negation and bi-implication are not connectives: ``~f`` is stored as
``f -> bot`` and ``f <-> g`` as ``(f -> g) & (g -> f)``.  The printer
re-sugars both shapes so that ``parse(str(f)) == f`` always holds.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping

from .errors import ParseError, SignatureError

AND, OR, IMP, BOT, TENSOR = "and", "or", "imp", "bot", "tensor"


@dataclass(frozen=True)
class Signature:
    """A finite purely functional signature: ``(name, arity)`` pairs."""

    connectives: tuple[tuple[str, int], ...]
    name: str = ""

    def __post_init__(self):
        names = [c for c, _ in self.connectives]
        if len(set(names)) != len(names):
            raise SignatureError(f"duplicate connective names in {names}")
        for c, a in self.connectives:
            if a < 0:
                raise SignatureError(f"negative arity for {c}")

    def arity(self, op: str) -> int:
        for c, a in self.connectives:
            if c == op:
                return a
        raise SignatureError(f"connective {op!r} is not in signature {self.label}")

    def __contains__(self, op: str) -> bool:
        return any(c == op for c, _ in self.connectives)

    @property
    def ops(self) -> list[str]:
        return [c for c, _ in self.connectives]

    @property
    def label(self) -> str:
        return self.name or "{" + ", ".join(f"{c}/{a}" for c, a in self.connectives) + "}"

    @staticmethod
    def named(name: str) -> "Signature":
        key = name.lower().replace("l_", "")
        if key in ("int", "intuitionistic"):
            return L_INT
        if key in ("inq", "tensor"):
            return L_INQ
        raise SignatureError(f"unknown signature name {name!r}")

    @staticmethod
    def from_ops(ops: Iterable[str]) -> "Signature":
        arities = {AND: 2, OR: 2, IMP: 2, BOT: 0, TENSOR: 2}
        ops = list(ops)
        for sig in (L_INT, L_INQ):
            if sorted(ops) == sorted(sig.ops):
                return sig
        try:
            return Signature(tuple((o, arities[o]) for o in ops))
        except KeyError as e:
            raise SignatureError(f"unknown connective {e.args[0]!r}; give arities explicitly") from None


L_INT = Signature(((AND, 2), (OR, 2), (IMP, 2), (BOT, 0)), "L_int")
L_INQ = Signature(((AND, 2), (OR, 2), (IMP, 2), (BOT, 0), (TENSOR, 2)), "L_inq")


class Formula:
    """Base class of formula nodes.  Structural equality, cached hash."""

    __slots__ = ("_hash", "size", "height", "standard")

    def __setattr__(self, name, value):
        raise AttributeError("formulas are immutable")

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"Formula({to_text(self)!r})"

    def __str__(self):
        return to_text(self)

    # convenience builders so tests read naturally
    def __and__(self, other: "Formula") -> "Formula":
        return App(AND, (self, other))

    def __or__(self, other: "Formula") -> "Formula":
        return App(OR, (self, other))

    def __mul__(self, other: "Formula") -> "Formula":
        return App(TENSOR, (self, other))

    def __rshift__(self, other: "Formula") -> "Formula":
        return App(IMP, (self, other))

    def __invert__(self) -> "Formula":
        return App(IMP, (self, BOTTOM))

    def subformulas(self) -> Iterator["Formula"]:
        """Post-order traversal (children before parents), with repetitions."""
        stack: list[tuple[Formula, bool]] = [(self, False)]
        while stack:
            f, done = stack.pop()
            if done or not isinstance(f, App) or not f.args:
                yield f
                continue
            stack.append((f, True))
            for a in reversed(f.args):
                stack.append((a, False))

    def atoms(self) -> frozenset[int]:
        return frozenset(f.index for f in self.subformulas() if isinstance(f, Atom))

    def metas(self) -> frozenset[str]:
        return frozenset(f.name for f in self.subformulas() if isinstance(f, Meta))

    def ops(self) -> frozenset[str]:
        return frozenset(f.op for f in self.subformulas() if isinstance(f, App))


_set = object.__setattr__


class Atom(Formula):
    __slots__ = ("index",)

    def __init__(self, index: int):
        if index < 0:
            raise ValueError("atom index must be non-negative")
        _set(self, "index", index)
        _set(self, "_hash", hash(("A", index)))
        _set(self, "size", 1)
        _set(self, "height", 1)
        _set(self, "standard", True)

    def __eq__(self, other):
        return self is other or (isinstance(other, Atom) and other.index == self.index)

    __hash__ = Formula.__hash__

    def __reduce__(self):
        return (Atom, (self.index,))


class Meta(Formula):
    """Metavariable used in schema and transformer templates."""

    __slots__ = ("name",)

    def __init__(self, name: str):
        _set(self, "name", name)
        _set(self, "_hash", hash(("M", name)))
        _set(self, "size", 1)
        _set(self, "height", 1)
        _set(self, "standard", True)

    def __eq__(self, other):
        return self is other or (isinstance(other, Meta) and other.name == self.name)

    __hash__ = Formula.__hash__

    def __reduce__(self):
        return (Meta, (self.name,))


class App(Formula):
    __slots__ = ("op", "args")

    def __init__(self, op: str, args: tuple = ()):
        args = tuple(args)
        _set(self, "op", op)
        _set(self, "args", args)
        _set(self, "_hash", hash((op, args)))
        if args:
            _set(self, "size", 1 + sum(a.size for a in args))
            _set(self, "height", 1 + max(a.height for a in args))
            _set(self, "standard", op != OR and all(a.standard for a in args))
        else:
            _set(self, "size", 1)
            _set(self, "height", 1)
            _set(self, "standard", True)

    def __eq__(self, other):
        if self is other:
            return True
        return (
            isinstance(other, App)
            and self._hash == other._hash
            and self.op == other.op
            and self.args == other.args
        )

    __hash__ = Formula.__hash__

    def __reduce__(self):
        return (App, (self.op, self.args))


BOTTOM = App(BOT)
TOP = App(IMP, (BOTTOM, BOTTOM))  # the top element is written bot -> bot


def p(i: int) -> Atom:
    return Atom(i)


def neg(f: Formula) -> Formula:
    return App(IMP, (f, BOTTOM))


def iff(f: Formula, g: Formula) -> Formula:
    return App(AND, (App(IMP, (f, g)), App(IMP, (g, f))))


def big_and(fs: Iterable[Formula]) -> Formula:
    """Left-nested conjunction; the empty conjunction is TOP."""
    out = None
    for f in fs:
        out = f if out is None else App(AND, (out, f))
    return TOP if out is None else out


def big_or(fs: Iterable[Formula]) -> Formula:
    """Left-nested disjunction; the empty disjunction is BOTTOM."""
    out = None
    for f in fs:
        out = f if out is None else App(OR, (out, f))
    return BOTTOM if out is None else out


def check_signature(f: Formula, sig: Signature) -> None:
    for g in f.subformulas():
        if isinstance(g, App) and sig.arity(g.op) != len(g.args):
            raise SignatureError(f"{g.op} applied to {len(g.args)} arguments, arity is {sig.arity(g.op)}")


# ---------------------------------------------------------------- parsing

_TOKEN = re.compile(
    r"\s*(?:(?P<atom>p\d+)|(?P<bot>bot\b|⊥)|(?P<meta>_[A-Za-z]\w*)|(?P<op><->|->|[~&|*()≈=¬∧∨→⊗↔])|(?P<word>[A-Za-z]\w*)|(?P<bad>\S))"
)
_UNICODE = {"¬": "~", "∧": "&", "∨": "|", "→": "->", "⊗": "*", "↔": "<->", "≈": "=" }
_BINOPS = {"&": (4, AND, "left"), "|": (3, OR, "left"), "*": (3, TENSOR, "left"), "->": (2, IMP, "right"), "<->": (1, "iff", "right")}


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    toks = []
    pos = 0
    n = len(text)
    while pos < n:
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            break
        kind = m.lastgroup
        val = m.group(kind)
        start = m.start(kind)
        if kind == "bad":
            raise ParseError(f"unexpected character {val!r}", start, text)
        if kind == "word":
            raise ParseError(f"unknown identifier {val!r}", start, text)
        if kind == "op":
            val = _UNICODE.get(val, val)
        toks.append((kind, val, start))
        pos = m.end()
    toks.append(("end", "", n))
    return toks


class _Parser:
    def __init__(self, text: str, sig: Signature, allow_meta: bool):
        self.text = text
        self.sig = sig
        self.allow_meta = allow_meta
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def fail(self, msg, tok=None):
        tok = tok or self.peek()
        raise ParseError(msg, tok[2], self.text)

    def need(self, op: str, pos: int):
        if op not in self.sig:
            raise SignatureError(f"connective {op!r} (at position {pos}) is not in signature {self.sig.label}")

    def formula(self, min_prec: int = 1) -> Formula:
        left = self.unary()
        while True:
            kind, val, pos = self.peek()
            if kind != "op" or val not in _BINOPS:
                return left
            prec, op, assoc = _BINOPS[val]
            if prec < min_prec:
                return left
            self.take()
            right = self.formula(prec if assoc == "right" else prec + 1)
            if op == "iff":
                self.need(IMP, pos)
                self.need(AND, pos)
                left = iff(left, right)
            else:
                self.need(op, pos)
                left = App(op, (left, right))

    def unary(self) -> Formula:
        kind, val, pos = self.take()
        if kind == "op" and val == "~":
            self.need(IMP, pos)
            self.need(BOT, pos)
            return neg(self.unary())
        if kind == "op" and val == "(":
            f = self.formula()
            k2, v2, _ = self.take()
            if v2 != ")":
                self.i -= 1
                self.fail("expected ')'")
            return f
        if kind == "atom":
            return Atom(int(val[1:]))
        if kind == "bot":
            self.need(BOT, pos)
            return BOTTOM
        if kind == "meta":
            if not self.allow_meta:
                self.fail(f"metavariable {val} not allowed here", (kind, val, pos))
            return Meta(val[1:])
        if kind == "end":
            self.fail("unexpected end of input", (kind, val, pos))
        self.fail(f"unexpected token {val!r}", (kind, val, pos))


def parse(text: str, sig: Signature = L_INQ, allow_meta: bool = False) -> Formula:
    """Parse a formula.  Raises ParseError (with position) or SignatureError."""
    ps = _Parser(text, sig, allow_meta)
    f = ps.formula()
    if ps.peek()[0] != "end":
        ps.fail(f"unexpected token {ps.peek()[1]!r}")
    return f


@dataclass(frozen=True)
class Equation:
    lhs: Formula
    rhs: Formula

    def __str__(self):
        return f"{to_text(self.lhs)} ~ {to_text(self.rhs)}"

    def atoms(self) -> frozenset[int]:
        return self.lhs.atoms() | self.rhs.atoms()

    def map(self, fn) -> "Equation":
        return Equation(fn(self.lhs), fn(self.rhs))


def parse_equation(text: str, sig: Signature = L_INQ, allow_meta: bool = False) -> Equation:
    """Parse ``lhs ~ rhs`` (``≈`` and ``=`` are accepted as the middle symbol)."""
    ps = _Parser(text, sig, allow_meta)
    lhs = ps.formula()
    kind, val, pos = ps.take()
    if kind != "op" or val not in ("~", "="):
        ps.i -= 1
        ps.fail("expected '~' between the two sides of an equation")
    rhs = ps.formula()
    if ps.peek()[0] != "end":
        ps.fail(f"unexpected token {ps.peek()[1]!r}")
    return Equation(lhs, rhs)


# ---------------------------------------------------------------- printing

_PREC = {AND: 4, OR: 3, TENSOR: 3, IMP: 2}
_SYM = {AND: "&", OR: "|", TENSOR: "*", IMP: "->"}


def _iff_parts(f: Formula):
    if isinstance(f, App) and f.op == AND:
        a, b = f.args
        if (
            isinstance(a, App) and a.op == IMP and isinstance(b, App) and b.op == IMP
            and a.args[0] == b.args[1] and a.args[1] == b.args[0]
        ):
            return a.args
    return None


def _prec(f: Formula) -> int:
    if isinstance(f, App) and len(f.args) == 2:
        if f.op == IMP and f.args[1] == BOTTOM:
            return 5
        if _iff_parts(f) is not None:
            return 1
        return _PREC.get(f.op, 6)
    return 6


def to_text(f: Formula) -> str:
    """Render with minimal parentheses; ``parse(to_text(f)) == f``."""
    if isinstance(f, Atom):
        return f"p{f.index}"
    if isinstance(f, Meta):
        return f"_{f.name}"
    if not f.args:
        return f.op
    if len(f.args) != 2 or (f.op not in _SYM):
        return f"{f.op}(" + ", ".join(to_text(a) for a in f.args) + ")"
    a, b = f.args
    if f.op == IMP and b == BOTTOM:
        inner = to_text(a)
        return "~" + (inner if _prec(a) >= 5 else f"({inner})")
    parts = _iff_parts(f)
    if parts is not None:
        a, b = parts
        prec, sym, right_assoc = 1, "<->", True
    else:
        prec, sym, right_assoc = _PREC[f.op], _SYM[f.op], f.op == IMP
    la = to_text(a)
    lb = to_text(b)
    if _prec(a) < prec or (right_assoc and _prec(a) == prec):
        la = f"({la})"
    if _prec(b) < prec or (not right_assoc and _prec(b) == prec):
        lb = f"({lb})"
    return f"{la} {sym} {lb}"


# ---------------------------------------------------------------- substitutions

class Substitution:
    """Finite map from atom indices to formulas; unmapped atoms stay fixed."""

    __slots__ = ("_map",)

    def __init__(self, mapping: Mapping[int, Formula] | None = None):
        m = {}
        for k, v in (mapping or {}).items():
            k = k.index if isinstance(k, Atom) else int(k)
            if not (isinstance(v, Atom) and v.index == k):
                m[k] = v
        self._map = m

    @classmethod
    def identity(cls) -> "Substitution":
        return cls()

    def __getitem__(self, k: int) -> Formula:
        return self._map.get(k, Atom(k))

    def __contains__(self, k):
        return k in self._map

    def items(self):
        return self._map.items()

    def support(self) -> list[int]:
        return sorted(self._map)

    def __eq__(self, other):
        return isinstance(other, Substitution) and self._map == other._map

    def __hash__(self):
        return hash(frozenset(self._map.items()))

    def __repr__(self):
        body = ", ".join(f"p{k} -> {to_text(v)}" for k, v in sorted(self._map.items()))
        return "{" + body + "}"

    def __call__(self, f: Formula) -> Formula:
        return apply_subst(self, f)

    def compose(self, inner: "Substitution") -> "Substitution":
        """``self.compose(inner)`` is ``self`` after ``inner``."""
        m = {k: apply_subst(self, v) for k, v in inner.items()}
        for k, v in self._map.items():
            m.setdefault(k, v)
        return Substitution(m)


def compose(s2: Substitution, s1: Substitution) -> Substitution:
    return s2.compose(s1)


def apply_subst(s: Substitution | Mapping[int, Formula], f: Formula) -> Formula:
    m = s._map if isinstance(s, Substitution) else s
    if not m:
        return f
    memo: dict[Formula, Formula] = {}

    def go(g: Formula) -> Formula:
        if isinstance(g, Atom):
            return m.get(g.index, g)
        if not isinstance(g, App) or not g.args:
            return g
        r = memo.get(g)
        if r is None:
            new = tuple(go(a) for a in g.args)
            r = g if all(x is y for x, y in zip(new, g.args)) else App(g.op, new)
            memo[g] = r
        return r

    return go(f)


def classify_subst(s: Substitution, atoms: Iterable[int] | None = None) -> str:
    """``'atomic'``, ``'or_free'`` or ``'general'`` on the given atoms."""
    keys = s.support() if atoms is None else list(atoms)
    images = [s[k] for k in keys]
    if all(isinstance(v, Atom) for v in images):
        return "atomic"
    if all(v.standard for v in images):
        return "or_free"
    return "general"


# ---------------------------------------------------------------- schemas

@dataclass(frozen=True)
class Schema:
    """A template over metavariables; ``sorts`` maps names to ``'any'`` or ``'standard'``."""

    template: Formula
    sorts: tuple[tuple[str, str], ...] = ()
    name: str = ""

    @classmethod
    def make(cls, text: str, standard: Iterable[str] = (), name: str = "", sig: Signature = L_INQ) -> "Schema":
        tpl = parse(text, sig, allow_meta=True)
        std = set(standard)
        sorts = tuple(sorted((m, "standard" if m in std else "any") for m in tpl.metas()))
        return cls(tpl, sorts, name)

    def sort_of(self, meta: str) -> str:
        return dict(self.sorts).get(meta, "any")

    def __str__(self):
        return to_text(self.template)


def match_template(template: Formula, f: Formula, assignment: dict | None = None) -> dict[str, Formula] | None:
    """Syntactic first-order matching of a template against a formula."""
    asg: dict[str, Formula] = dict(assignment or {})
    stack = [(template, f)]
    while stack:
        t, g = stack.pop()
        if isinstance(t, Meta):
            old = asg.get(t.name)
            if old is None:
                asg[t.name] = g
            elif old != g:
                return None
        elif isinstance(t, Atom):
            if t != g:
                return None
        else:
            if not isinstance(g, App) or g.op != t.op or len(g.args) != len(t.args):
                return None
            stack.extend(zip(t.args, g.args))
    return asg


def match_schema(sch: Schema, f: Formula) -> dict[str, Formula] | None:
    asg = match_template(sch.template, f)
    if asg is None:
        return None
    for name, sort in sch.sorts:
        if sort == "standard" and name in asg and not asg[name].standard:
            return None
    return asg


def instantiate(template: Formula, assignment: Mapping[str, Formula]) -> Formula:
    memo: dict[Formula, Formula] = {}

    def go(t: Formula) -> Formula:
        if isinstance(t, Meta):
            try:
                return assignment[t.name]
            except KeyError:
                raise KeyError(f"metavariable _{t.name} is unassigned") from None
        if not isinstance(t, App) or not t.args:
            return t
        r = memo.get(t)
        if r is None:
            r = memo[t] = App(t.op, tuple(go(a) for a in t.args))
        return r

    return go(template)
