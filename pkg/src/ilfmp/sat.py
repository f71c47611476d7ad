"""Bounded countermodel search by reduction to propositional SAT.

For a fixed carrier {w1, ..., wn} the frame relations, the valuation and the
truth value of every subformula at every world become propositional
variables.  The clauses say that R is a strict partial order, that the frame
belongs to the requested class, that truth values follow the forcing clauses,
and that the query fails at w1.  A satisfying assignment is a countermodel,
and unsatisfiability means there is none on n worlds.  Fixing the refuting
world to w1 loses nothing because carriers are labelled.
"""

from __future__ import annotations

from itertools import product
from typing import Iterable

import pycosat

from . import simplified as simp
from . import veltman as velt
from .formula import And, Bot, Box, Formula, Imp, Or, Rhd, Top, Var, postorder, variables


def world_names(n: int) -> tuple[str, ...]:
    return tuple(f"w{i + 1}" for i in range(n))


class _Cnf:
    def __init__(self):
        self.top = 0
        self.clauses: list[list[int]] = []
        self.true = self.new()
        self.add([self.true])

    def new(self) -> int:
        self.top += 1
        return self.top

    def add(self, clause: Iterable[int]) -> None:
        self.clauses.append(list(clause))

    def define_and(self, lits: list[int]) -> int:
        if not lits:
            return self.true
        if len(lits) == 1:
            return lits[0]
        out = self.new()
        for lit in lits:
            self.add([-out, lit])
        self.add([out] + [-lit for lit in lits])
        return out

    def define_or(self, lits: list[int]) -> int:
        if not lits:
            return -self.true
        if len(lits) == 1:
            return lits[0]
        out = self.new()
        for lit in lits:
            self.add([out, -lit])
        self.add([-out] + lits)
        return out


class _Encoding:
    def __init__(self, n: int, kind: str):
        self.n = n
        self.kind = kind
        self.cnf = _Cnf()
        c = self.cnf
        rng = range(n)
        self.R = {(i, j): (c.new() if i != j else -c.true) for i in rng for j in rng}
        if kind == "veltman":
            self.S3 = {(x, y, z): c.new() for x in rng for y in rng for z in rng}
        else:
            self.S = {(i, j): c.new() for i in rng for j in rng}
        for i, j, k in product(rng, rng, rng):
            if i != j and j != k:
                c.add([-self.R[i, j], -self.R[j, k], self.R[i, k]])

    # -- frame classes

    def simplified_class(self, logic: simp.LogicId) -> None:
        c, rng = self.cnf, range(self.n)
        ax = logic.axioms
        if "J1" in ax:
            for i in rng:
                c.add([self.S[i, i]])
        if "J2plus" in ax:
            for i, j, k in product(rng, rng, rng):
                c.add([-self.S[i, j], -self.S[j, k], self.S[i, k]])
        if "J5" in ax:
            for i, j in product(rng, rng):
                if i != j:
                    c.add([-self.R[i, j], self.S[i, j]])

    def veltman_class(self, conditions: Iterable[str]) -> None:
        c, rng = self.cnf, range(self.n)
        conds = set(conditions)
        if "J2plus" in conds:
            conds.add("J4plus")
        for x, y, z in product(rng, rng, rng):
            s = self.S3[x, y, z]
            c.add([-s, self.R[x, y]])
            if "J4plus" in conds:
                c.add([-s, self.R[x, z]])
            if "J5" in conds:
                c.add([-self.R[x, y], -self.R[y, z], s])
        if "J1" in conds:
            for x, y in product(rng, rng):
                c.add([-self.R[x, y], self.S3[x, y, y]])
        if "J2plus" in conds:
            for x, y, z, v in product(rng, rng, rng, rng):
                c.add([-self.S3[x, y, z], -self.S3[x, z, v], self.S3[x, y, v]])

    # -- forcing

    def witness(self, x: int, y: int, z: int, semantics: str) -> list[int]:
        if self.kind == "veltman":
            return [self.S3[x, y, z]]
        if semantics == "alternative":
            return [self.S[y, z]]
        return [self.R[x, z], self.S[y, z]]

    def formula(self, f: Formula, semantics: str = "standard") -> dict:
        c, rng = self.cnf, range(self.n)
        self.P = {(p, w): c.new() for p in variables(f) for w in rng}
        T: dict[tuple[Formula, int], int] = {}
        for g in postorder(f):
            for w in rng:
                if isinstance(g, Var):
                    T[g, w] = self.P[g.name, w]
                elif isinstance(g, Top):
                    T[g, w] = c.true
                elif isinstance(g, Bot):
                    T[g, w] = -c.true
                elif isinstance(g, Imp):
                    T[g, w] = c.define_or([-T[g.left, w], T[g.right, w]])
                elif isinstance(g, Or):
                    T[g, w] = c.define_or([T[g.left, w], T[g.right, w]])
                elif isinstance(g, And):
                    T[g, w] = c.define_and([T[g.left, w], T[g.right, w]])
                elif isinstance(g, Box):
                    T[g, w] = c.define_and([
                        c.define_or([-self.R[w, y], T[g.body, y]]) for y in rng if y != w
                    ])
                elif isinstance(g, Rhd):
                    per_y = []
                    for y in rng:
                        if y == w:
                            continue
                        answers = [
                            c.define_and(self.witness(w, y, z, semantics) + [T[g.right, z]])
                            for z in rng
                        ]
                        per_y.append(c.define_or([-self.R[w, y], -T[g.left, y]] + answers))
                    T[g, w] = c.define_and(per_y)
                else:
                    raise TypeError(f"not a formula: {g!r}")
        return T

    # -- decoding

    def decode(self, solution: list[int], f: Formula):
        true = {lit for lit in solution if lit > 0}
        names = world_names(self.n)
        rng = range(self.n)
        R = [(names[i], names[j]) for i in rng for j in rng if i != j and self.R[i, j] in true]
        val = {p: [names[w] for w in rng if self.P[p, w] in true] for p in variables(f)}
        if self.kind == "veltman":
            S = {names[x]: [(names[y], names[z]) for y in rng for z in rng if self.S3[x, y, z] in true]
                 for x in rng}
            return velt.model(names, R, S, val)
        S = [(names[i], names[j]) for i in rng for j in rng if self.S[i, j] in true]
        return simp.model(names, R, S, val)


def find_simplified(f: Formula, logic: simp.LogicId, n: int, semantics: str = "standard"):
    """A simplified model of ``logic``'s class on n worlds refuting ``f`` at w1, or None."""
    enc = _Encoding(n, "simplified")
    enc.simplified_class(simp.LogicId(logic))
    T = enc.formula(f, semantics)
    enc.cnf.add([-T[f, 0]])
    sol = pycosat.solve(enc.cnf.clauses)
    if sol == "UNSAT":
        return None
    return enc.decode(sol, f)


def find_veltman(f: Formula, conditions: Iterable[str], n: int):
    """A Veltman model on n worlds meeting ``conditions`` refuting ``f`` at w1, or None."""
    enc = _Encoding(n, "veltman")
    enc.veltman_class(conditions)
    T = enc.formula(f)
    enc.cnf.add([-T[f, 0]])
    sol = pycosat.solve(enc.cnf.clauses)
    if sol == "UNSAT":
        return None
    return enc.decode(sol, f)
