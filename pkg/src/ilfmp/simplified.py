"""Simplified Veltman frames (W, R, S) with one global relation S.

Standard clause (the ``x R z`` conjunct keeps the answer inside R[x])::

    x |= A |> B  iff  every y with x R y, y |= A has z with x R z, y S z, z |= B

The alternative clause drops ``x R z``; under it the persistence principle
``A |> B -> [](A |> B)`` becomes valid on every frame, which is why the
standard clause is the default.

Two different frame notions live here on purpose.  ``s_check_condition``
gives the conditions under which J1, J2+, J5 are *valid* (localised to R),
while ``classify`` tests the stronger global requirements (S reflexive, S
transitive, R contained in S) defining the simplified frames of a logic.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import Iterable, Mapping

import numpy as np

from . import relations
from ._kernel import Kernel, refutation, valuation_table
from .errors import UnknownWorld
from .formula import SCHEMES, And, Bot, Box, Formula, Imp, Or, Rhd, Top, Var, as_formula, scheme, variables
from .veltman import ValidationReport, check_accessibility

SEMANTICS = ("standard", "alternative")
CONDITIONS = ("J1", "J2plus", "J5")


class LogicId(str, Enum):
    ILminus_J4plus = "ILminus_J4plus"
    ILminus_J1J4plus = "ILminus_J1J4plus"
    ILminus_J4plusJ5 = "ILminus_J4plusJ5"
    ILminus_J1J4plusJ5 = "ILminus_J1J4plusJ5"
    ILminus_J2plus = "ILminus_J2plus"
    CL = "CL"
    ILminus_J2plusJ5 = "ILminus_J2plusJ5"
    IL = "IL"

    def __str__(self) -> str:
        return self.value

    @property
    def axioms(self) -> frozenset[str]:
        return LOGIC_AXIOMS[self]


# CL and IL are taken in their IL^-(J1, J2+) and IL^-(J1, J2+, J5) presentations.
LOGIC_AXIOMS: dict[LogicId, frozenset[str]] = {
    LogicId.ILminus_J4plus: frozenset({"J4plus"}),
    LogicId.ILminus_J1J4plus: frozenset({"J1", "J4plus"}),
    LogicId.ILminus_J4plusJ5: frozenset({"J4plus", "J5"}),
    LogicId.ILminus_J1J4plusJ5: frozenset({"J1", "J4plus", "J5"}),
    LogicId.ILminus_J2plus: frozenset({"J2plus"}),
    LogicId.CL: frozenset({"J1", "J2plus"}),
    LogicId.ILminus_J2plusJ5: frozenset({"J2plus", "J5"}),
    LogicId.IL: frozenset({"J1", "J2plus", "J5"}),
}


def _pairs(items: Iterable) -> frozenset[tuple[str, str]]:
    return frozenset((str(a), str(b)) for a, b in items)


@dataclass(frozen=True)
class SimplifiedFrame:
    worlds: tuple[str, ...]
    R: frozenset[tuple[str, str]]
    S: frozenset[tuple[str, str]] = frozenset()

    def __post_init__(self):
        worlds = tuple(str(w) for w in self.worlds)
        if not worlds:
            raise ValueError("a frame needs at least one world")
        if len(set(worlds)) != len(worlds):
            raise ValueError("duplicate world ids")
        R, S = _pairs(self.R), _pairs(self.S)
        known = set(worlds)
        for name, rel in (("R", R), ("S", S)):
            for a, b in rel:
                if a not in known or b not in known:
                    raise ValueError(f"{name} pair ({a}, {b}) mentions an unknown world")
        object.__setattr__(self, "worlds", worlds)
        object.__setattr__(self, "R", R)
        object.__setattr__(self, "S", S)

    @cached_property
    def index(self) -> dict[str, int]:
        return {w: i for i, w in enumerate(self.worlds)}

    def _matrix(self, rel) -> np.ndarray:
        n = len(self.worlds)
        m = np.zeros((n, n), dtype=bool)
        for a, b in rel:
            m[self.index[a], self.index[b]] = True
        return m

    @cached_property
    def r_matrix(self) -> np.ndarray:
        return self._matrix(self.R)

    @cached_property
    def s_matrix(self) -> np.ndarray:
        return self._matrix(self.S)

    def witness_tensor(self, semantics: str = "standard") -> np.ndarray:
        R, S = self.r_matrix, self.s_matrix
        if semantics == "standard":
            return R[:, None, :] & S[None, :, :]
        if semantics == "alternative":
            return np.broadcast_to(S[None, :, :], (len(self.worlds),) * 3)
        raise ValueError(f"unknown semantics {semantics!r}; use one of {SEMANTICS}")


@dataclass(frozen=True)
class SimplifiedModel:
    frame: SimplifiedFrame
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


def frame(worlds, R=(), S=()) -> SimplifiedFrame:
    return SimplifiedFrame(tuple(worlds), frozenset(R), frozenset(S))


def model(worlds, R=(), S=(), valuation=None) -> SimplifiedModel:
    return SimplifiedModel(frame(worlds, R, S), dict(valuation or {}))


def validate_frame(f: SimplifiedFrame | SimplifiedModel) -> ValidationReport:
    if isinstance(f, SimplifiedModel):
        f = f.frame
    return ValidationReport(check_accessibility(f.worlds, f.R))


# ---------------------------------------------------------------- forcing


def _forces(m: SimplifiedModel, x: str, f: Formula, keep_inside: bool) -> bool:
    fr = m.frame
    if x not in fr.index:
        raise UnknownWorld(x)
    succ = relations.successor_map(fr.R)
    s_succ = relations.successor_map(fr.S)
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
            inside = succ.get(w, set())
            out = True
            for y in inside:
                if not ev(y, g.left):
                    continue
                zs = s_succ.get(y, set())
                if keep_inside:
                    zs = zs & inside
                if not any(ev(z, g.right) for z in zs):
                    out = False
                    break
        else:
            raise TypeError(f"not a formula: {g!r}")
        memo[key] = out
        return out

    return ev(x, f)


def s_forces(m: SimplifiedModel, x: str, f: Formula | str) -> bool:
    """Truth at ``x`` under the standard clause (answers must lie in R[x])."""
    return _forces(m, x, as_formula(f), keep_inside=True)


def s_forces_alt(m: SimplifiedModel, x: str, f: Formula | str) -> bool:
    """Truth at ``x`` under the alternative clause (any S-successor answers)."""
    return _forces(m, x, as_formula(f), keep_inside=False)


class Evaluator:
    """Caches truth sets of many formulas over one model."""

    def __init__(self, m: SimplifiedModel, semantics: str = "standard"):
        self.model = m
        fr = m.frame
        atoms = {}
        for p, ws in m.valuation.items():
            row = np.zeros((1, len(fr.worlds)), dtype=bool)
            for w in ws:
                row[0, fr.index[w]] = True
            atoms[p] = row
        self.kernel = Kernel(fr.r_matrix, fr.witness_tensor(semantics), atoms)

    def extension(self, f: Formula | str) -> frozenset[str]:
        row = self.kernel.truth(as_formula(f))[0]
        return frozenset(w for w, t in zip(self.model.worlds, row) if t)

    def forces(self, x: str, f: Formula | str) -> bool:
        if x not in self.model.frame.index:
            raise UnknownWorld(x)
        return bool(self.kernel.truth(as_formula(f))[0, self.model.frame.index[x]])


def extension(m: SimplifiedModel, f: Formula | str, semantics: str = "standard") -> frozenset[str]:
    return Evaluator(m, semantics).extension(f)


# ---------------------------------------------------------------- validity


def refute_in_frame(
    f: SimplifiedFrame, a: Formula | str, semantics: str = "standard"
) -> tuple[SimplifiedModel, str] | None:
    a = scheme(a) if isinstance(a, str) and a in SCHEMES else as_formula(a)
    names = variables(a)
    table = valuation_table(names, len(f.worlds))
    hit = refutation(Kernel(f.r_matrix, f.witness_tensor(semantics), table), a)
    if hit is None:
        return None
    row, w = hit
    val = {p: frozenset(x for i, x in enumerate(f.worlds) if table[p][row, i]) for p in names}
    return SimplifiedModel(f, val), f.worlds[w]


def s_valid_in_frame(f: SimplifiedFrame, a: str | Formula, semantics: str = "standard") -> bool:
    return refute_in_frame(f, a, semantics) is None


def s_check_condition(f: SimplifiedFrame, cond: str) -> bool:
    """First-order condition under which axiom ``cond`` is valid in ``f``."""
    R, S = f.R, f.S
    succ = relations.successor_map(R)
    if cond == "J1":
        return all((y, y) in S for _, y in R)
    if cond == "J2plus":
        for x in f.worlds:
            inside = succ.get(x, set())
            for y, z in S:
                if y in inside and z in inside:
                    for v in inside:
                        if (z, v) in S and (y, v) not in S:
                            return False
        return True
    if cond == "J5":
        return all((y, z) in S for _, y in R for z in succ.get(y, ()))
    raise KeyError(f"no frame condition for {cond!r}; known: {', '.join(CONDITIONS)}")


def classify(f: SimplifiedFrame, logic: LogicId | str) -> bool:
    """Whether ``f`` is a simplified frame of ``logic`` (global structural conditions)."""
    ax = LogicId(logic).axioms
    if "J1" in ax and any((w, w) not in f.S for w in f.worlds):
        return False
    if "J2plus" in ax and not relations.is_transitive(f.S):
        return False
    if "J5" in ax and not f.R <= f.S:
        return False
    return True


# ---------------------------------------------------------------- I/O


def to_json(m: SimplifiedModel | SimplifiedFrame) -> dict:
    fr = m.frame if isinstance(m, SimplifiedModel) else m
    order = fr.index
    key = lambda p: (order[p[0]], order[p[1]])  # noqa: E731
    out = {
        "worlds": list(fr.worlds),
        "R": [list(p) for p in sorted(fr.R, key=key)],
        "S": [list(p) for p in sorted(fr.S, key=key)],
    }
    if isinstance(m, SimplifiedModel):
        out["valuation"] = {
            p: sorted(ws, key=order.__getitem__) for p, ws in sorted(m.valuation.items())
        }
    return out


def from_json(obj: dict | str) -> SimplifiedModel:
    if isinstance(obj, str):
        obj = json.loads(obj)
    S = obj.get("S", [])
    if isinstance(S, dict):
        raise ValueError("simplified model JSON needs S as a flat list of pairs")
    return model(obj["worlds"], [tuple(p) for p in obj.get("R", [])],
                 [tuple(p) for p in S], obj.get("valuation", {}))


def to_dot(m: SimplifiedModel | SimplifiedFrame, name: str = "simplified") -> str:
    fr = m.frame if isinstance(m, SimplifiedModel) else m
    val = m.valuation if isinstance(m, SimplifiedModel) else {}
    order = fr.index
    key = lambda p: (order[p[0]], order[p[1]])  # noqa: E731
    lines = [f"digraph {name} {{", "  node [shape=circle];"]
    for w in fr.worlds:
        props = ",".join(sorted(p for p, ws in val.items() if w in ws))
        label = f"{w}\\n{props}" if props else w
        lines.append(f'  "{w}" [label="{label}"];')
    for a, b in sorted(fr.R, key=key):
        lines.append(f'  "{a}" -> "{b}" [style=solid, color=black];')
    for a, b in sorted(fr.S, key=key):
        lines.append(f'  "{a}" -> "{b}" [style=dashed, color=gray];')
    lines.append("}")
    return "\n".join(lines) + "\n"
