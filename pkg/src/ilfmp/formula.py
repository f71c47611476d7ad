"""Formulas of the interpretability language: AST, parser, printer, axiom schemes.

The language has ``T``, ``F``, variables, ``->``, ``|``, ``&``, the unary box
``[]`` and the binary ``|>``.  Negation and diamond are abbreviations::

    ~A   ==  A -> F
    <>A  ==  ~[]~A

Binding strength, tightest first: ``~ [] <>``, ``&``, ``|``, ``|>``, ``->``.
``->`` associates to the right, ``&`` and ``|`` to the left, and ``|>`` not at
all (``a |> b |> c`` is rejected).
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .errors import ArityError, AssociativityError, FormulaSyntaxError


class Formula:
    """Base class; concrete nodes are frozen dataclasses below."""

    __slots__ = ()

    def __str__(self) -> str:
        return to_text(self)


@dataclass(frozen=True, repr=False)
class Bot(Formula):
    def __repr__(self) -> str:
        return "Bot()"


@dataclass(frozen=True, repr=False)
class Top(Formula):
    def __repr__(self) -> str:
        return "Top()"


@dataclass(frozen=True)
class Var(Formula):
    name: str


@dataclass(frozen=True)
class Imp(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Box(Formula):
    body: Formula


@dataclass(frozen=True)
class Rhd(Formula):
    left: Formula
    right: Formula


BOT = Bot()
TOP = Top()

BINARY = (Imp, Or, And, Rhd)


def neg(a: Formula) -> Formula:
    return Imp(a, BOT)


def diamond(a: Formula) -> Formula:
    return neg(Box(neg(a)))


def iff(a: Formula, b: Formula) -> Formula:
    return And(Imp(a, b), Imp(b, a))


def conj(items: Iterable[Formula]) -> Formula:
    """Left-nested conjunction; the empty conjunction is ``T``."""
    out: Formula | None = None
    for item in items:
        out = item if out is None else And(out, item)
    return TOP if out is None else out


def children(f: Formula) -> tuple[Formula, ...]:
    if isinstance(f, BINARY):
        return (f.left, f.right)
    if isinstance(f, Box):
        return (f.body,)
    return ()


def _as_negation(f: Formula) -> Formula | None:
    if isinstance(f, Imp) and isinstance(f.right, Bot):
        return f.left
    return None


def _as_diamond(f: Formula) -> Formula | None:
    inner = _as_negation(f)
    if isinstance(inner, Box):
        return _as_negation(inner.body)
    return None


# ---------------------------------------------------------------- analysis


def subformulas(f: Formula) -> frozenset[Formula]:
    out: set[Formula] = set()
    stack = [f]
    while stack:
        g = stack.pop()
        if g in out:
            continue
        out.add(g)
        stack.extend(children(g))
    return frozenset(out)


def size(f: Formula) -> int:
    """Number of nodes of the syntax tree (shared subtrees counted each time)."""
    return 1 + sum(size(c) for c in children(f))


def modal_depth(f: Formula) -> int:
    if isinstance(f, (Box, Rhd)):
        return 1 + max(modal_depth(c) for c in children(f))
    return max((modal_depth(c) for c in children(f)), default=0)


def variables(f: Formula) -> tuple[str, ...]:
    """Variable names of ``f`` in order of first occurrence (left to right)."""
    seen: dict[str, None] = {}

    def walk(g: Formula) -> None:
        if isinstance(g, Var):
            seen.setdefault(g.name)
        for c in children(g):
            walk(c)

    walk(f)
    return tuple(seen)


def postorder(f: Formula) -> list[Formula]:
    """Distinct subformulas, each listed after all of its own subformulas."""
    order: list[Formula] = []
    done: set[Formula] = set()
    stack: list[tuple[Formula, bool]] = [(f, False)]
    while stack:
        g, expanded = stack.pop()
        if g in done:
            continue
        if expanded:
            done.add(g)
            order.append(g)
            continue
        stack.append((g, True))
        for c in reversed(children(g)):
            if c not in done:
                stack.append((c, False))
    return order


# ---------------------------------------------------------------- printing

_PREC = {Imp: 1, Rhd: 2, Or: 3, And: 4}
_PREFIX = 5
_ATOM = 6

_ASCII = {Imp: "->", Rhd: "|>", Or: "|", And: "&", "not": "~", "box": "[]", "dia": "<>", "top": "T", "bot": "F"}
_UNICODE = {Imp: "→", Rhd: "▷", Or: "∨", And: "∧", "not": "¬", "box": "□", "dia": "◇", "top": "⊤", "bot": "⊥"}


def _prec(f: Formula) -> int:
    if _as_negation(f) is not None:
        return _PREFIX
    if isinstance(f, Box):
        return _PREFIX
    return _PREC.get(type(f), _ATOM)


def to_text(f: Formula, unicode: bool = False) -> str:
    """Render with the fewest parentheses that still parse back to ``f``."""
    sym = _UNICODE if unicode else _ASCII
    sep = " "

    def wrap(g: Formula, need: bool) -> str:
        s = go(g)
        return f"({s})" if need else s

    def go(g: Formula) -> str:
        if isinstance(g, Var):
            return g.name
        if isinstance(g, Top):
            return sym["top"]
        if isinstance(g, Bot):
            return sym["bot"]
        inner = _as_diamond(g)
        if inner is not None:
            return sym["dia"] + wrap(inner, _prec(inner) < _PREFIX)
        inner = _as_negation(g)
        if inner is not None:
            return sym["not"] + wrap(inner, _prec(inner) < _PREFIX)
        if isinstance(g, Box):
            return sym["box"] + wrap(g.body, _prec(g.body) < _PREFIX)
        p = _PREC[type(g)]
        lp, rp = _prec(g.left), _prec(g.right)
        if isinstance(g, Imp):
            left, right = lp <= p, rp < p
        elif isinstance(g, Rhd):
            left, right = lp <= p, rp <= p
        else:
            left, right = lp < p, rp <= p
        return f"{wrap(g.left, left)}{sep}{sym[type(g)]}{sep}{wrap(g.right, right)}"

    return go(f)


# ---------------------------------------------------------------- parsing

_SYMBOLS = [
    ("|>", "RHD"), ("->", "IMP"), ("[]", "BOX"), ("<>", "DIA"),
    ("~", "NOT"), ("&", "AND"), ("|", "OR"), ("(", "LP"), (")", "RP"),
    ("⊤", "TOP"), ("⊥", "BOT"), ("¬", "NOT"), ("∧", "AND"), ("∨", "OR"),
    ("→", "IMP"), ("□", "BOX"), ("◇", "DIA"), ("▷", "RHD"),
]


def tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens: list[tuple[str, str, int]] = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch.isalpha() and ch.isascii() or ch == "_":
            j = i + 1
            while j < len(text) and (text[j].isascii() and text[j].isalnum() or text[j] in "_'"):
                j += 1
            word = text[i:j]
            kind = {"T": "TOP", "F": "BOT"}.get(word, "VAR")
            tokens.append((kind, word, i))
            i = j
            continue
        for sym, kind in _SYMBOLS:
            if text.startswith(sym, i):
                tokens.append((kind, sym, i))
                i += len(sym)
                break
        else:
            raise FormulaSyntaxError(f"unexpected character {ch!r}", i)
    tokens.append(("EOF", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.toks = tokenize(text)
        self.i = 0

    def peek(self) -> tuple[str, str, int]:
        return self.toks[self.i]

    def take(self, kind: str) -> tuple[str, str, int]:
        tok = self.peek()
        if tok[0] != kind:
            found = tok[1] or "end of input"
            raise FormulaSyntaxError(f"expected {kind}, found {found!r}", tok[2])
        self.i += 1
        return tok

    def parse(self) -> Formula:
        f = self.imp()
        tok = self.peek()
        if tok[0] != "EOF":
            raise FormulaSyntaxError(f"unexpected {tok[1]!r}", tok[2])
        return f

    def imp(self) -> Formula:
        left = self.rhd()
        if self.peek()[0] == "IMP":
            self.i += 1
            return Imp(left, self.imp())
        return left

    def rhd(self) -> Formula:
        left = self.disj()
        if self.peek()[0] == "RHD":
            self.i += 1
            right = self.disj()
            tok = self.peek()
            if tok[0] == "RHD":
                raise AssociativityError("'|>' is not associative; add parentheses", tok[2])
            return Rhd(left, right)
        return left

    def disj(self) -> Formula:
        f = self.conj()
        while self.peek()[0] == "OR":
            self.i += 1
            f = Or(f, self.conj())
        return f

    def conj(self) -> Formula:
        f = self.unary()
        while self.peek()[0] == "AND":
            self.i += 1
            f = And(f, self.unary())
        return f

    def unary(self) -> Formula:
        kind, word, pos = self.peek()
        if kind == "NOT":
            self.i += 1
            return neg(self.unary())
        if kind == "BOX":
            self.i += 1
            return Box(self.unary())
        if kind == "DIA":
            self.i += 1
            return diamond(self.unary())
        if kind == "LP":
            self.i += 1
            f = self.imp()
            self.take("RP")
            return f
        if kind in ("VAR", "TOP", "BOT"):
            self.i += 1
            if kind == "TOP":
                return TOP
            return BOT if kind == "BOT" else Var(word)
        found = word or "end of input"
        raise FormulaSyntaxError(f"expected a formula, found {found!r}", pos)


def parse(text: str) -> Formula:
    return _Parser(text).parse()


def as_formula(f: Formula | str) -> Formula:
    return parse(f) if isinstance(f, str) else f


# ---------------------------------------------------------------- JSON

_OPS = {Imp: "imp", Or: "or", And: "and", Rhd: "rhd"}
_BY_OP = {v: k for k, v in _OPS.items()}


def to_json(f: Formula) -> dict:
    if isinstance(f, Var):
        return {"op": "var", "name": f.name}
    if isinstance(f, Top):
        return {"op": "top"}
    if isinstance(f, Bot):
        return {"op": "bot"}
    if isinstance(f, Box):
        return {"op": "box", "args": [to_json(f.body)]}
    return {"op": _OPS[type(f)], "args": [to_json(f.left), to_json(f.right)]}


def from_json(obj: dict) -> Formula:
    op = obj.get("op")
    args = obj.get("args", [])
    if op == "var":
        return Var(obj["name"])
    if op == "top":
        return TOP
    if op == "bot":
        return BOT
    if op == "box" and len(args) == 1:
        return Box(from_json(args[0]))
    if op in _BY_OP and len(args) == 2:
        return _BY_OP[op](from_json(args[0]), from_json(args[1]))
    raise ValueError(f"malformed formula JSON: {obj!r}")


# ---------------------------------------------------------------- axiom schemes


def _g1(a, b):
    return Imp(Box(Imp(a, b)), Imp(Box(a), Box(b)))


def _g2(a):
    return Imp(Box(Imp(Box(a), a)), Box(a))


def _j1(a, b):
    return Imp(Box(Imp(a, b)), Rhd(a, b))


def _j2(a, b, c):
    return Imp(And(Rhd(a, b), Rhd(b, c)), Rhd(a, c))


def _j2plus(a, b, c):
    return Imp(And(Rhd(a, Or(b, c)), Rhd(b, c)), Rhd(a, c))


def _j3(a, b, c):
    return Imp(And(Rhd(a, c), Rhd(b, c)), Rhd(Or(a, b), c))


def _j4(a, b):
    return Imp(Rhd(a, b), Imp(diamond(a), diamond(b)))


def _j4plus(a, b, c):
    return Imp(Box(Imp(a, b)), Imp(Rhd(c, a), Rhd(c, b)))


def _j5(a):
    return Rhd(diamond(a), a)


def _j6(a):
    return iff(Box(neg(a)), Rhd(a, BOT))


def _p(a, b):
    return Imp(Rhd(a, b), Box(Rhd(a, b)))


SCHEMES = {
    "G1": _g1,
    "G2": _g2,
    "J1": _j1,
    "J2": _j2,
    "J2plus": _j2plus,
    "J3": _j3,
    "J4": _j4,
    "J4plus": _j4plus,
    "J5": _j5,
    "J6": _j6,
    "P": _p,
}
ARITY = {name: fn.__code__.co_argcount for name, fn in SCHEMES.items()}
FRESH = ("p", "q", "r")


def axiom_instance(name: str, args: Sequence[Formula | str]) -> Formula:
    """Instantiate scheme ``name`` with ``args`` for its metavariables A, B, C in order.

    G0 (all tautologies) is not a single scheme and is not available here.
    """
    if name not in SCHEMES:
        raise KeyError(f"unknown axiom scheme {name!r}; known: {', '.join(SCHEMES)}")
    if len(args) != ARITY[name]:
        raise ArityError(f"{name} takes {ARITY[name]} arguments, got {len(args)}")
    return SCHEMES[name](*(as_formula(a) for a in args))


def scheme(name: str) -> Formula:
    """The scheme instantiated with fresh distinct variables p, q, r."""
    if name not in SCHEMES:
        raise KeyError(f"unknown axiom scheme {name!r}")
    return axiom_instance(name, [Var(v) for v in FRESH[: ARITY[name]]])


# ---------------------------------------------------------------- generation


def random_formula(
    rng: random.Random,
    depth: int,
    names: Sequence[str] = ("p", "q"),
    modal_budget: int | None = None,
) -> Formula:
    """A random formula of tree height at most ``depth``.

    ``modal_budget`` caps the modal depth of the result.
    """
    if modal_budget is None:
        modal_budget = depth
    if depth <= 0 or rng.random() < 0.2:
        pick = rng.randrange(len(names) + 2)
        if pick == len(names):
            return TOP if rng.random() < 0.5 else BOT
        return Var(names[pick % len(names)])
    kinds = ["imp", "or", "and", "not"]
    if modal_budget > 0:
        kinds += ["box", "rhd", "rhd", "dia"]
    kind = rng.choice(kinds)
    sub = lambda m: random_formula(rng, depth - 1, names, m)  # noqa: E731
    if kind == "not":
        return neg(sub(modal_budget))
    if kind == "box":
        return Box(sub(modal_budget - 1))
    if kind == "dia":
        return diamond(sub(modal_budget - 1))
    if kind == "rhd":
        return Rhd(sub(modal_budget - 1), sub(modal_budget - 1))
    cls = {"imp": Imp, "or": Or, "and": And}[kind]
    return cls(sub(modal_budget), sub(modal_budget))


def iter_nodes(f: Formula) -> Iterator[Formula]:
    yield f
    for c in children(f):
        yield from iter_nodes(c)
