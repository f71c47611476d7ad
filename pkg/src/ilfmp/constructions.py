"""Turning Veltman countermodels into simplified ones.

* ``construct_sv`` / ``construct_sv2`` unravel a finite Veltman model into the
  finite set of its R-chains ``<x1, ..., xn>``; R' is "proper initial segment"
  and S' is computed from the per-world relations S_v of the base.  Every chain
  forces exactly what its last element forces in the base.
* ``construct_svil`` builds the trace model for IL^-(J2+, J5).  It is infinite
  as soon as the base admits an S-step, so it is offered as a bounded fragment
  together with a lazy handle.
* ``strengthen`` and ``reduce_il`` turn a finite IL^-(J2+, J5) countermodel of
  a strengthened formula into an IL countermodel of the original one.

Chain and trace world ids are strings: ``"a-b"`` for the chain <a, b> and
``"a-b-b@0,w"`` for the trace (<a, b, b>, <0, w>).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Sequence

from . import relations
from . import simplified as simp
from . import veltman as velt
from .errors import BoundError, PreconditionError
from .formula import And, Bot, Box, Formula, Imp, Or, Rhd, Top, Var, as_formula, conj, subformulas, to_text
from .simplified import LogicId, SimplifiedModel

Chain = tuple[str, ...]
EPSILON: Chain = ()
MARK = 0

SV_LOGICS = (LogicId.ILminus_J4plus, LogicId.ILminus_J1J4plus, LogicId.ILminus_J4plusJ5, LogicId.ILminus_J1J4plusJ5)
SV2_LOGICS = (LogicId.ILminus_J2plus, LogicId.CL)
SVIL_CONDITIONS = ("J2plus", "J5")
_RESERVED = "-@,"


# ---------------------------------------------------------------- chain helpers


def minus1(x: Chain) -> Chain:
    return x[:-1]


def last(x: Chain) -> str:
    if not x:
        raise ValueError("the empty chain has no last element")
    return x[-1]


def append(x: Chain, w: str) -> Chain:
    return x + (w,)


def is_prefix(x: Chain, y: Chain) -> bool:
    return len(x) <= len(y) and y[: len(x)] == x


def is_proper_prefix(x: Chain, y: Chain) -> bool:
    return len(x) < len(y) and y[: len(x)] == x


def meet(y: Chain, z: Chain) -> Chain:
    """Longest common initial segment (possibly empty)."""
    k = 0
    while k < len(y) and k < len(z) and y[k] == z[k]:
        k += 1
    return y[:k]


def setm(y: Chain, x: Chain) -> frozenset[str]:
    """Elements occurring in ``y`` but not in ``x``."""
    return frozenset(y) - frozenset(x)


def chain_id(x: Chain) -> str:
    return "-".join(x)


def parse_chain_id(text: str) -> Chain:
    return tuple(text.split("-"))


def r_chains(f: velt.VeltmanFrame) -> list[Chain]:
    """All nonempty sequences whose consecutive elements are R-related."""
    succ = relations.successor_map(f.R)
    order = f.index
    out: list[Chain] = []
    stack = [(w,) for w in reversed(f.worlds)]
    while stack:
        x = stack.pop()
        out.append(x)
        for w in sorted(succ.get(x[-1], ()), key=order.__getitem__, reverse=True):
            stack.append(x + (w,))
    out.sort(key=lambda c: (len(c), [order[w] for w in c]))
    return out


# ---------------------------------------------------------------- preconditions


def _check_ids(worlds: Sequence[str], extra: Sequence[str] = ()) -> list[str]:
    bad = [w for w in worlds if any(ch in w for ch in _RESERVED) or w in extra]
    return [f"world id {w!r} clashes with the id syntax" for w in bad]


def _require(m: velt.VeltmanModel, conditions, extra_ids=()) -> None:
    failures = list(velt.validate_frame(m.frame).violations)
    failures += _check_ids(m.worlds, extra_ids)
    if not failures:
        failures += [f"frame condition {c} fails" for c in sorted(conditions)
                     if not velt.check_condition(m.frame, c)]
    if failures:
        raise PreconditionError("base model not admissible", failures)


def _lift(m: velt.VeltmanModel, ids: dict[str, str]) -> dict[str, set[str]]:
    return {p: {i for i, w in ids.items() if w in ws} for p, ws in m.valuation.items()}


# ---------------------------------------------------------------- chain models


def _chain_model(m: velt.VeltmanModel, s_rel) -> SimplifiedModel:
    chains = r_chains(m.frame)
    ids = [chain_id(c) for c in chains]
    R = {(ids[i], ids[j]) for i, x in enumerate(chains) for j, y in enumerate(chains)
         if is_proper_prefix(x, y)}
    S = {(ids[i], ids[j]) for i, y in enumerate(chains) for j, z in enumerate(chains)
         if s_rel(y, z)}
    val = _lift(m, {i: last(c) for i, c in zip(ids, chains)})
    return simp.model(ids, R, S, val)


def construct_sv(m: velt.VeltmanModel, logic: LogicId | str) -> SimplifiedModel:
    """Finite simplified model of R-chains for the four J4+ logics without J2+.

    ``y S' z`` holds when, for ``x = (y-1) meet (z-1)``, either x is empty and
    y is an initial segment of z, or x is nonempty and ``y^e S_v z^e`` for
    some v in ``Setm(y-1, x-1)``.
    """
    logic = LogicId(logic)
    if logic not in SV_LOGICS:
        raise PreconditionError(f"construct_sv handles {', '.join(map(str, SV_LOGICS))}, not {logic}")
    _require(m, logic.axioms)
    fr = m.frame

    def s_rel(y: Chain, z: Chain) -> bool:
        x = meet(minus1(y), minus1(z))
        if x == EPSILON:
            return is_prefix(y, z)
        labels = setm(minus1(y), minus1(x))
        assert last(x) in labels
        return any((last(y), last(z)) in fr.s(v) for v in labels)

    return _chain_model(m, s_rel)


def construct_sv2(m: velt.VeltmanModel, logic: LogicId | str) -> SimplifiedModel:
    """Finite simplified model of R-chains for IL^-(J2+) and CL.

    Unlike ``construct_sv``, S' allows a path ``y^e = a1 S_v1 a2 ... S_vl z^e``
    with every label in ``Setm(y-1, x-1)``, provided that set contains
    ``Setm(z-1, x-1)``; the empty-meet case requires y = z.
    """
    logic = LogicId(logic)
    if logic not in SV2_LOGICS:
        raise PreconditionError(f"construct_sv2 handles {', '.join(map(str, SV2_LOGICS))}, not {logic}")
    _require(m, logic.axioms)
    fr = m.frame
    closures: dict[frozenset, frozenset] = {}

    def reach(labels: frozenset) -> frozenset:
        if labels not in closures:
            closures[labels] = relations.transitive_closure(
                pair for v in labels for pair in fr.s(v))
        return closures[labels]

    def s_rel(y: Chain, z: Chain) -> bool:
        x = meet(minus1(y), minus1(z))
        if x == EPSILON:
            return y == z
        labels = setm(minus1(y), minus1(x))
        assert last(x) in labels
        if not labels >= setm(minus1(z), minus1(x)):
            return False
        return (last(y), last(z)) in reach(labels)

    return _chain_model(m, s_rel)


# ---------------------------------------------------------------- trace model


@dataclass(frozen=True)
class TraceWorld:
    """A pair (gamma, delta); delta[i] labels the step gamma[i] -> gamma[i+1].

    A label 0 marks an R-step, a world label v marks an S_v-step.
    """

    gamma: tuple[str, ...]
    delta: tuple = ()

    def __post_init__(self):
        if not self.gamma:
            raise ValueError("gamma must be nonempty")
        if len(self.delta) + 1 != len(self.gamma):
            raise ValueError("need |delta| + 1 == |gamma|")

    def __len__(self) -> int:
        return len(self.gamma)

    @property
    def last(self) -> str:
        return self.gamma[-1]

    def prefix(self, k: int) -> "TraceWorld":
        return TraceWorld(self.gamma[:k], self.delta[: k - 1])

    def extend(self, w: str, label) -> "TraceWorld":
        return TraceWorld(self.gamma + (w,), self.delta + (label,))

    def is_prefix_of(self, other: "TraceWorld") -> bool:
        n = len(self)
        return n <= len(other) and other.gamma[:n] == self.gamma and other.delta[: n - 1] == self.delta

    def is_proper_prefix_of(self, other: "TraceWorld") -> bool:
        return len(self) < len(other) and self.is_prefix_of(other)

    def reduced(self) -> "TraceWorld":
        """The prefix before the final run of S-steps."""
        k = 1
        for i, v in enumerate(self.delta):
            if v == MARK:
                k = i + 2
        return self.prefix(k)

    @property
    def id(self) -> str:
        return "-".join(self.gamma) + "@" + ",".join(str(v) for v in self.delta)

    @classmethod
    def from_id(cls, text: str) -> "TraceWorld":
        g, _, d = text.partition("@")
        delta = tuple(MARK if v == "0" else v for v in d.split(",")) if d else ()
        return cls(tuple(g.split("-")), delta)


def trace_r(x: TraceWorld, y: TraceWorld) -> bool:
    """``x R' y``: y extends x and every S-step after x is labelled by an earlier world of y beyond x."""
    if not x.is_proper_prefix_of(y):
        return False
    n = len(x)
    for i in range(n, len(y)):
        v = y.delta[i - 1]
        if v != MARK and v not in y.gamma[n - 1 : i - 1]:
            return False
    return True


def trace_s(y: TraceWorld, z: TraceWorld) -> bool:
    return y.reduced().is_prefix_of(z.reduced()) and len(y) < len(z)


class SvilModel:
    """The (generally infinite) trace model over a finite Veltman base."""

    def __init__(self, base: velt.VeltmanModel):
        self.base = base
        fr = base.frame
        self._succ = relations.successor_map(fr.R)
        self._steps: dict[str, list[tuple[str, object]]] = {}
        order = fr.index
        for u in fr.worlds:
            steps = [(w, MARK) for w in sorted(self._succ.get(u, ()), key=order.__getitem__)]
            for v in fr.worlds:
                for a, w in sorted(fr.s(v), key=lambda p: order[p[1]]):
                    if a == u:
                        steps.append((w, v))
            self._steps[u] = steps
        self._evaluator = velt.Evaluator(base)
        self._direct: dict[tuple[TraceWorld, Formula, int], bool] = {}

    def steps(self, u: str) -> list[tuple[str, object]]:
        """Admissible (next world, label) pairs from base world ``u``."""
        return self._steps[u]

    def traces(self, depth: int) -> list[TraceWorld]:
        if depth < 1:
            raise BoundError("depth bound must be at least 1")
        out = []
        frontier = [TraceWorld((w,)) for w in self.base.worlds]
        while frontier:
            out.extend(frontier)
            frontier = [t.extend(w, v) for t in frontier if len(t) < depth for w, v in self.steps(t.last)]
        return out

    def r_successors(self, x: TraceWorld, max_len: int) -> Iterator[TraceWorld]:
        """Every y with ``x R' y`` and ``|y| <= max_len``."""
        n = len(x)

        def grow(t: TraceWorld) -> Iterator[TraceWorld]:
            if len(t) >= max_len:
                return
            allowed = set(t.gamma[n - 1 : len(t) - 1])
            for w, v in self.steps(t.last):
                if v == MARK or v in allowed:
                    child = t.extend(w, v)
                    yield child
                    yield from grow(child)

        yield from grow(x)

    def forces(self, x: TraceWorld | str, f: Formula | str) -> bool:
        """Truth at ``x``, answered by the base model at ``x``'s last world."""
        if isinstance(x, str):
            x = TraceWorld.from_id(x)
        return self._evaluator.forces(x.last, f)

    def direct_forces(self, x: TraceWorld, f: Formula | str, window: int = 2) -> bool:
        """Truth at ``x`` from R' and S' alone, looking ``window`` steps ahead.

        The ``|>`` clause quantifies over R'-successors y at most ``window``
        longer than x and over answers z at most ``window`` longer than y.
        """
        return self._direct_eval(x, as_formula(f), window)

    def _direct_eval(self, x: TraceWorld, g: Formula, window: int) -> bool:
        key = (x, g, window)
        if key in self._direct:
            return self._direct[key]
        ev = self._direct_eval
        if isinstance(g, Var):
            out = x.last in self.base.valuation.get(g.name, ())
        elif isinstance(g, Top):
            out = True
        elif isinstance(g, Bot):
            out = False
        elif isinstance(g, Imp):
            out = not ev(x, g.left, window) or ev(x, g.right, window)
        elif isinstance(g, Or):
            out = ev(x, g.left, window) or ev(x, g.right, window)
        elif isinstance(g, And):
            out = ev(x, g.left, window) and ev(x, g.right, window)
        elif isinstance(g, Box):
            out = all(ev(y, g.body, window) for y in self.r_successors(x, len(x) + window))
        elif isinstance(g, Rhd):
            out = True
            for y in self.r_successors(x, len(x) + window):
                if not ev(y, g.left, window):
                    continue
                if not any(trace_s(y, z) and ev(z, g.right, window)
                           for z in self.r_successors(x, len(y) + window)):
                    out = False
                    break
        else:
            raise TypeError(f"not a formula: {g!r}")
        self._direct[key] = out
        return out

    def fragment(self, depth: int) -> tuple[SimplifiedModel, dict[str, TraceWorld]]:
        ts = self.traces(depth)
        order = self.base.frame.index
        label_key = lambda v: -1 if v == MARK else order[v]  # noqa: E731
        ts.sort(key=lambda t: (len(t), [order[w] for w in t.gamma], [label_key(v) for v in t.delta]))
        by_id = {t.id: t for t in ts}
        R = {(x.id, y.id) for x in ts for y in ts if trace_r(x, y)}
        S = {(y.id, z.id) for y in ts for z in ts if trace_s(y, z)}
        val = _lift(self.base, {t.id: t.last for t in ts})
        return simp.model(list(by_id), R, S, val), by_id


@dataclass
class SvilResult:
    fragment: SimplifiedModel
    traces: dict[str, TraceWorld]
    handle: SvilModel
    depth_bound: int


def construct_svil(m: velt.VeltmanModel, depth_bound: int) -> SvilResult:
    """Trace model for IL^-(J2+, J5): bounded fragment plus lazy forcing handle."""
    if depth_bound < 1:
        raise BoundError("depth bound must be at least 1")
    _require(m, SVIL_CONDITIONS, extra_ids=("0",))
    handle = SvilModel(m)
    frag, traces = handle.fragment(depth_bound)
    return SvilResult(frag, traces, handle, depth_bound)


# ---------------------------------------------------------------- IL reduction


def strengthen_antecedent(a: Formula | str) -> Formula:
    a = as_formula(a)
    parts = []
    for c in sorted(subformulas(a), key=to_text):
        parts.append(And(Rhd(c, c), Box(Rhd(c, c))))
    return conj(parts)


def strengthen(a: Formula | str) -> Formula:
    """``(conjunction of C |> C and [](C |> C) over subformulas C of a) -> a``."""
    a = as_formula(a)
    return Imp(strengthen_antecedent(a), a)


def root_of(f: simp.SimplifiedFrame) -> str | None:
    for w in f.worlds:
        if all((w, x) in f.R for x in f.worlds if x != w):
            return w
    return None


def generated_submodel(m: SimplifiedModel, w: str) -> SimplifiedModel:
    """Restriction of ``m`` to ``w`` and its R-successors."""
    keep = {w} | relations.image(m.frame.R, w)
    worlds = [x for x in m.worlds if x in keep]
    R = [(a, b) for a, b in m.frame.R if a in keep and b in keep]
    S = [(a, b) for a, b in m.frame.S if a in keep and b in keep]
    val = {p: ws & keep for p, ws in m.valuation.items()}
    return simp.model(worlds, R, S, val)


def reduce_il(m: SimplifiedModel, a: Formula | str) -> SimplifiedModel:
    """Close S under identity; preserves forcing of every subformula of ``a``.

    ``m`` must be a rooted simplified IL^-(J2+, J5) model whose root forces
    the antecedent of ``strengthen(a)`` and refutes ``a``.
    """
    a = as_formula(a)
    failures = list(simp.validate_frame(m).violations)
    if not simp.classify(m.frame, LogicId.ILminus_J2plusJ5):
        failures.append("frame is not a simplified IL^-(J2+, J5)-frame (S transitive, R inside S)")
    w = root_of(m.frame)
    if w is None:
        failures.append("model has no root; restrict it with generated_submodel first")
    elif not failures:
        ev = simp.Evaluator(m)
        if not ev.forces(w, strengthen_antecedent(a)):
            failures.append(f"root {w} does not force the strengthening antecedent")
        if ev.forces(w, a):
            failures.append(f"root {w} forces the formula, so there is nothing to refute")
    if failures:
        raise PreconditionError("reduce_il precondition failed", failures)
    S = set(m.frame.S) | {(x, x) for x in m.worlds}
    return SimplifiedModel(simp.SimplifiedFrame(m.worlds, m.frame.R, frozenset(S)), m.valuation)
