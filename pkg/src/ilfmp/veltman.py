"""Finite Veltman frames (W, R, {S_x}) and their forcing relation.

Each world x carries its own relation S_x with ``y S_x z`` only for ``x R y``.
The ``|>`` clause reads::

    x |= A |> B  iff  every y with x R y and y |= A has some z with y S_x z and z |= B

Frame conditions for J1, J2+, J4+ and J5 are first-order properties of
(R, S_x); ``check_condition`` evaluates them directly and
``valid_in_frame`` checks the schemes semantically.  The two are meant to
agree on every frame.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping

import numpy as np

from . import relations
from ._kernel import Kernel, refutation, valuation_table
from .errors import UnknownWorld
from .formula import SCHEMES, And, Bot, Box, Formula, Imp, Or, Rhd, Top, Var, as_formula, scheme, variables

CONDITIONS = ("J1", "J2plus", "J4plus", "J5")


def _pairs(items: Iterable) -> frozenset[tuple[str, str]]:
    return frozenset((str(a), str(b)) for a, b in items)


@dataclass(frozen=True, eq=True)
class VeltmanFrame:
    worlds: tuple[str, ...]
    R: frozenset[tuple[str, str]]
    S: Mapping[str, frozenset[tuple[str, str]]] = field(default_factory=dict)

    def __post_init__(self):
        worlds = tuple(str(w) for w in self.worlds)
        if not worlds:
            raise ValueError("a frame needs at least one world")
        if len(set(worlds)) != len(worlds):
            raise ValueError("duplicate world ids")
        known = set(worlds)
        R = _pairs(self.R)
        S = {str(x): _pairs(v) for x, v in dict(self.S).items()}
        S = {x: v for x, v in S.items() if v}
        for a, b in R:
            if a not in known or b not in known:
                raise ValueError(f"R pair ({a}, {b}) mentions an unknown world")
        for x, rel in S.items():
            if x not in known:
                raise ValueError(f"S is indexed by unknown world {x!r}")
            for a, b in rel:
                if a not in known or b not in known:
                    raise ValueError(f"S_{x} pair ({a}, {b}) mentions an unknown world")
        object.__setattr__(self, "worlds", worlds)
        object.__setattr__(self, "R", R)
        object.__setattr__(self, "S", S)

    def __hash__(self):
        return hash((self.worlds, self.R, frozenset(self.S.items())))

    @cached_property
    def index(self) -> dict[str, int]:
        return {w: i for i, w in enumerate(self.worlds)}

    def s(self, x: str) -> frozenset[tuple[str, str]]:
        return self.S.get(x, frozenset())

    def successors(self, x: str) -> set[str]:
        return relations.image(self.R, x)

    @cached_property
    def r_matrix(self) -> np.ndarray:
        n = len(self.worlds)
        m = np.zeros((n, n), dtype=bool)
        for a, b in self.R:
            m[self.index[a], self.index[b]] = True
        return m

    @cached_property
    def witness_tensor(self) -> np.ndarray:
        n = len(self.worlds)
        t = np.zeros((n, n, n), dtype=bool)
        for x, rel in self.S.items():
            for y, z in rel:
                t[self.index[x], self.index[y], self.index[z]] = True
        return t


@dataclass(frozen=True)
class VeltmanModel:
    frame: VeltmanFrame
    valuation: Mapping[str, frozenset[str]] = field(default_factory=dict)

    def __post_init__(self):
        val = {str(p): frozenset(str(w) for w in ws) for p, ws in dict(self.valuation).items()}
        for p, ws in val.items():
            stray = ws - set(self.frame.worlds)
            if stray:
                raise ValueError(f"valuation of {p!r} mentions unknown worlds {sorted(stray)}")
        object.__setattr__(self, "valuation", val)

    def __hash__(self):
        return hash((self.frame, frozenset(self.valuation.items())))

    @property
    def worlds(self) -> tuple[str, ...]:
        return self.frame.worlds


def frame(worlds, R=(), S=None) -> VeltmanFrame:
    return VeltmanFrame(tuple(worlds), frozenset(R), dict(S or {}))


def model(worlds, R=(), S=None, valuation=None) -> VeltmanModel:
    return VeltmanModel(frame(worlds, R, S), dict(valuation or {}))


# ---------------------------------------------------------------- validation


@dataclass
class ValidationReport:
    violations: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def __str__(self) -> str:
        return "OK" if self.ok else "\n".join(self.violations)


def check_accessibility(worlds: tuple[str, ...], R: frozenset) -> list[str]:
    out = []
    for a, b, c in relations.transitivity_failures(R):
        out.append(f"R not transitive: {a} R {b} and {b} R {c} but not {a} R {c}")
    for w in worlds:
        if (w, w) in R:
            out.append(f"R not irreflexive: {w} R {w}")
    cycle = relations.find_cycle(worlds, R)
    if cycle is not None:
        out.append("R not conversely well-founded: cycle " + " R ".join(cycle))
    return out


def validate_frame(f: VeltmanFrame | VeltmanModel) -> ValidationReport:
    if isinstance(f, VeltmanModel):
        f = f.frame
    violations = check_accessibility(f.worlds, f.R)
    for x in f.worlds:
        for y, z in sorted(f.s(x)):
            if (x, y) not in f.R:
                violations.append(f"S_{x} pair ({y}, {z}) has {y} not in R[{x}]")
    return ValidationReport(violations)


# ---------------------------------------------------------------- forcing


def forces(m: VeltmanModel, x: str, f: Formula | str) -> bool:
    """Truth of ``f`` at world ``x``, by direct recursion on ``f``."""
    f = as_formula(f)
    fr = m.frame
    if x not in fr.index:
        raise UnknownWorld(x)
    succ = relations.successor_map(fr.R)
    answers = {w: relations.successor_map(fr.s(w)) for w in fr.worlds}
    memo: dict[tuple[str, Formula], bool] = {}

    def ev(w: str, g: Formula) -> bool:
        key = (w, g)
        if key in memo:
            return memo[key]
        if isinstance(g, Var):
            out = w in m.valuation.get(g.name, ())
        elif isinstance(g, Top):
            out = True
        elif isinstance(g, Bot):
            out = False
        elif isinstance(g, Imp):
            out = not ev(w, g.left) or ev(w, g.right)
        elif isinstance(g, Or):
            out = ev(w, g.left) or ev(w, g.right)
        elif isinstance(g, And):
            out = ev(w, g.left) and ev(w, g.right)
        elif isinstance(g, Box):
            out = all(ev(y, g.body) for y in succ.get(w, ()))
        elif isinstance(g, Rhd):
            out = all(
                any(ev(z, g.right) for z in answers[w].get(y, ()))
                for y in succ.get(w, ())
                if ev(y, g.left)
            )
        else:
            raise TypeError(f"not a formula: {g!r}")
        memo[key] = out
        return out

    return ev(x, f)


def _model_kernel(m: VeltmanModel) -> Kernel:
    fr = m.frame
    atoms = {}
    for p, ws in m.valuation.items():
        row = np.zeros((1, len(fr.worlds)), dtype=bool)
        for w in ws:
            row[0, fr.index[w]] = True
        atoms[p] = row
    return Kernel(fr.r_matrix, fr.witness_tensor, atoms)


class Evaluator:
    """Caches truth sets of many formulas over one model."""

    def __init__(self, m: VeltmanModel):
        self.model = m
        self.kernel = _model_kernel(m)

    def extension(self, f: Formula | str) -> frozenset[str]:
        row = self.kernel.truth(as_formula(f))[0]
        return frozenset(w for w, t in zip(self.model.worlds, row) if t)

    def forces(self, x: str, f: Formula | str) -> bool:
        if x not in self.model.frame.index:
            raise UnknownWorld(x)
        return bool(self.kernel.truth(as_formula(f))[0, self.model.frame.index[x]])


def extension(m: VeltmanModel, f: Formula | str) -> frozenset[str]:
    """The set of worlds forcing ``f``."""
    return Evaluator(m).extension(f)


# ---------------------------------------------------------------- validity


def _formula_of(s: str | Formula) -> Formula:
    return scheme(s) if isinstance(s, str) and s in SCHEMES else as_formula(s)


def refute_in_frame(f: VeltmanFrame, a: Formula | str) -> tuple[VeltmanModel, str] | None:
    """A model on ``f`` and a world refuting ``a``, or None if ``a`` is valid in ``f``."""
    a = _formula_of(a)
    names = variables(a)
    table = valuation_table(names, len(f.worlds))
    hit = refutation(Kernel(f.r_matrix, f.witness_tensor, table), a)
    if hit is None:
        return None
    row, w = hit
    val = {p: frozenset(x for i, x in enumerate(f.worlds) if table[p][row, i]) for p in names}
    return VeltmanModel(f, val), f.worlds[w]


def valid_in_frame(f: VeltmanFrame, a: str | Formula) -> bool:
    """Whether an axiom scheme (by name) or a formula is valid in ``f``.

    Schemes are instantiated with fresh variables and checked under every
    valuation of those variables at every world.
    """
    return refute_in_frame(f, a) is None


def check_condition(f: VeltmanFrame, cond: str) -> bool:
    """The first-order frame condition corresponding to axiom ``cond``."""
    W, R = f.worlds, f.R
    if cond == "J1":
        return all((y, y) in f.s(x) for x, y in R)
    if cond == "J4plus":
        return all((x, z) in R for x in W for _, z in f.s(x))
    if cond == "J2plus":
        return check_condition(f, "J4plus") and all(relations.is_transitive(f.s(x)) for x in W)
    if cond == "J5":
        succ = relations.successor_map(R)
        return all((y, z) in f.s(x) for x, y in R for z in succ.get(y, ()))
    raise KeyError(f"no frame condition for {cond!r}; known: {', '.join(CONDITIONS)}")


# ---------------------------------------------------------------- I/O


def to_json(m: VeltmanModel | VeltmanFrame) -> dict:
    fr = m.frame if isinstance(m, VeltmanModel) else m
    order = fr.index
    key = lambda p: (order[p[0]], order[p[1]])  # noqa: E731
    out = {
        "worlds": list(fr.worlds),
        "R": [list(p) for p in sorted(fr.R, key=key)],
        "S": {x: [list(p) for p in sorted(fr.s(x), key=key)] for x in fr.worlds if fr.s(x)},
    }
    if isinstance(m, VeltmanModel):
        out["valuation"] = {
            p: sorted(ws, key=order.__getitem__) for p, ws in sorted(m.valuation.items())
        }
    return out


def from_json(obj: dict | str) -> VeltmanModel:
    if isinstance(obj, str):
        obj = json.loads(obj)
    S = obj.get("S", {})
    if not isinstance(S, dict):
        raise ValueError("Veltman model JSON needs S as an object keyed by world")
    return model(obj["worlds"], [tuple(p) for p in obj.get("R", [])],
                 {x: [tuple(p) for p in v] for x, v in S.items()}, obj.get("valuation", {}))


def to_dot(m: VeltmanModel | VeltmanFrame, name: str = "veltman") -> str:
    fr = m.frame if isinstance(m, VeltmanModel) else m
    val = m.valuation if isinstance(m, VeltmanModel) else {}
    lines = [f"digraph {name} {{", "  node [shape=circle];"]
    for w in fr.worlds:
        props = ",".join(sorted(p for p, ws in val.items() if w in ws))
        label = f"{w}\\n{props}" if props else w
        lines.append(f'  "{w}" [label="{label}"];')
    order = fr.index
    for a, b in sorted(fr.R, key=lambda p: (order[p[0]], order[p[1]])):
        lines.append(f'  "{a}" -> "{b}" [style=solid, color=black];')
    for x in fr.worlds:
        for y, z in sorted(fr.s(x), key=lambda p: (order[p[0]], order[p[1]])):
            lines.append(f'  "{y}" -> "{z}" [style=dashed, color=gray, label="{x}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
