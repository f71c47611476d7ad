"""Frame enumeration, bounded countermodel search and derivability sanity checks.

Enumeration is exhaustive over labelled carriers {w1, ..., wn} with no
isomorphism reduction, so a search that exhausts its bound proves nothing
about validity beyond that bound.  Larger carriers are searched through the
SAT encoding in ``sat``; whatever engine finds a witness, it is re-checked
with the pointwise evaluators before being returned.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from itertools import product
from typing import Iterable, Iterator

from . import relations, sat
from . import simplified as simp
from . import veltman as velt
from .errors import BoundError
from .formula import Formula, as_formula, scheme, to_text
from .simplified import LogicId

world_names = sat.world_names

MAX_VELTMAN_SIZE = 4
MAX_SIMPLIFIED_SIZE = 5
MAX_FACT_VELTMAN_SIZE = 3
# Largest carrier searched by enumeration under engine="auto"; SAT above it.
AUTO_ENUMERATE_SIZE = 3

# Frame-condition sets of the IL^- family, weakest first.  The first four
# have no simplified counterpart and are searched on the Veltman side only.
VELTMAN_LOGICS: dict[str, frozenset[str]] = {
    "ILminus": frozenset(),
    "ILminus_J1": frozenset({"J1"}),
    "ILminus_J5": frozenset({"J5"}),
    "ILminus_J1J5": frozenset({"J1", "J5"}),
    **{str(k): v for k, v in simp.LOGIC_AXIOMS.items()},
}

# Inclusions between logics, weaker -> stronger.  Frame classes run the
# other way.
LATTICE: tuple[tuple[str, str], ...] = (
    ("ILminus", "ILminus_J1"),
    ("ILminus", "ILminus_J5"),
    ("ILminus", "ILminus_J4plus"),
    ("ILminus_J1", "ILminus_J1J5"),
    ("ILminus_J5", "ILminus_J1J5"),
    ("ILminus_J1", "ILminus_J1J4plus"),
    ("ILminus_J5", "ILminus_J4plusJ5"),
    ("ILminus_J4plus", "ILminus_J1J4plus"),
    ("ILminus_J4plus", "ILminus_J4plusJ5"),
    ("ILminus_J4plus", "ILminus_J2plus"),
    ("ILminus_J1J5", "ILminus_J1J4plusJ5"),
    ("ILminus_J1J4plus", "ILminus_J1J4plusJ5"),
    ("ILminus_J4plusJ5", "ILminus_J1J4plusJ5"),
    ("ILminus_J1J4plus", "CL"),
    ("ILminus_J2plus", "CL"),
    ("ILminus_J4plusJ5", "ILminus_J2plusJ5"),
    ("ILminus_J2plus", "ILminus_J2plusJ5"),
    ("ILminus_J1J4plusJ5", "IL"),
    ("CL", "IL"),
    ("ILminus_J2plusJ5", "IL"),
)


def _check_size(n: int, top: int, what: str) -> None:
    if not isinstance(n, int) or n < 1 or n > top:
        raise BoundError(f"{what} size must be between 1 and {top}, got {n!r}")


def _conditions(conditions: Iterable[str]) -> frozenset[str]:
    conds = frozenset(conditions)
    unknown = conds - set(velt.CONDITIONS)
    if unknown:
        raise KeyError(f"unknown frame conditions {sorted(unknown)}; known: {', '.join(velt.CONDITIONS)}")
    return conds


def _mask_subsets(items: list) -> Iterator[frozenset]:
    for mask in range(1 << len(items)):
        yield frozenset(items[i] for i in range(len(items)) if mask >> i & 1)


# ---------------------------------------------------------------- enumeration


def _s_options(x: str, W: tuple[str, ...], succ: dict, conds: frozenset[str]) -> list[frozenset]:
    ys = [w for w in W if w in succ.get(x, ())]
    inside = "J4plus" in conds or "J2plus" in conds
    zs = ys if inside else list(W)
    out = []
    for rel in _mask_subsets([(y, z) for y in ys for z in zs]):
        if "J1" in conds and any((y, y) not in rel for y in ys):
            continue
        if "J5" in conds and any((y, z) not in rel for y in ys for z in succ.get(y, ())):
            continue
        if "J2plus" in conds and not relations.is_transitive(rel):
            continue
        out.append(rel)
    return out


def enumerate_veltman_frames(n: int, conditions: Iterable[str] = ()) -> Iterator[velt.VeltmanFrame]:
    """Every IL^- frame on w1..wn satisfying the given frame conditions.

    All conditions constrain each S_x separately, so the admissible S_x are
    filtered per world and combined by a product.
    """
    _check_size(n, MAX_VELTMAN_SIZE, "Veltman frame")
    conds = _conditions(conditions)
    W = world_names(n)
    for R in relations.strict_partial_orders(W):
        succ = relations.successor_map(R)
        options = [_s_options(x, W, succ, conds) for x in W]
        for combo in product(*options):
            yield velt.VeltmanFrame(W, R, dict(zip(W, combo)))


def enumerate_simplified_frames(n: int, logic: LogicId | str = LogicId.ILminus_J4plus) -> Iterator[simp.SimplifiedFrame]:
    """Every simplified frame on w1..wn passing ``classify(logic)``.

    ``ILminus_J4plus`` imposes no structural condition, so it enumerates all
    simplified frames.
    """
    _check_size(n, MAX_SIMPLIFIED_SIZE, "simplified frame")
    ax = LogicId(logic).axioms
    W = world_names(n)
    for R in relations.strict_partial_orders(W):
        forced = set()
        if "J1" in ax:
            forced |= {(w, w) for w in W}
        if "J5" in ax:
            forced |= R
        free = [(a, b) for a in W for b in W if (a, b) not in forced]
        for extra in _mask_subsets(free):
            S = extra | forced
            if "J2plus" in ax and not relations.is_transitive(S):
                continue
            yield simp.SimplifiedFrame(W, R, S)


# ---------------------------------------------------------------- random generation


def random_veltman_frame(
    rng: random.Random, n: int, conditions: Iterable[str] = (), density: float = 0.4
) -> velt.VeltmanFrame:
    """A random IL^- frame on w1..wn meeting ``conditions`` by construction."""
    conds = _conditions(conditions)
    W = world_names(n)
    R = rng.choice(list(relations.strict_partial_orders(W)))
    succ = relations.successor_map(R)
    inside = "J4plus" in conds or "J2plus" in conds
    S = {}
    for x in W:
        ys = [w for w in W if w in succ.get(x, ())]
        zs = ys if inside else W
        rel = {(y, z) for y in ys for z in zs if rng.random() < density}
        if "J1" in conds:
            rel |= {(y, y) for y in ys}
        if "J5" in conds:
            rel |= {(y, z) for y in ys for z in succ.get(y, ())}
        if "J2plus" in conds:
            rel = set(relations.transitive_closure(rel))
        S[x] = rel
    return velt.VeltmanFrame(W, R, S)


def random_valuation(rng: random.Random, worlds: Iterable[str], names: Iterable[str]) -> dict[str, set[str]]:
    worlds = list(worlds)
    return {p: {w for w in worlds if rng.random() < 0.5} for p in names}


def random_veltman_model(
    rng: random.Random, n: int, conditions: Iterable[str] = (), names=("p", "q"), density: float = 0.4
) -> velt.VeltmanModel:
    fr = random_veltman_frame(rng, n, conditions, density)
    return velt.VeltmanModel(fr, random_valuation(rng, fr.worlds, names))


def random_simplified_frame(
    rng: random.Random, n: int, logic: LogicId | str = LogicId.ILminus_J4plus, density: float = 0.4
) -> simp.SimplifiedFrame:
    ax = LogicId(logic).axioms
    W = world_names(n)
    R = rng.choice(list(relations.strict_partial_orders(W)))
    S = {(a, b) for a in W for b in W if rng.random() < density}
    if "J1" in ax:
        S |= {(w, w) for w in W}
    if "J5" in ax:
        S |= R
    if "J2plus" in ax:
        S = set(relations.transitive_closure(S))
    return simp.SimplifiedFrame(W, R, S)


def random_simplified_model(
    rng: random.Random, n: int, logic: LogicId | str = LogicId.ILminus_J4plus, names=("p", "q"), density: float = 0.4
) -> simp.SimplifiedModel:
    fr = random_simplified_frame(rng, n, logic, density)
    return simp.SimplifiedModel(fr, random_valuation(rng, fr.worlds, names))


# ---------------------------------------------------------------- search


@dataclass
class SearchResult:
    verdict: str  # "countermodel_found" | "exhausted_bound"
    formula: Formula
    logic: str
    semantics: str
    bound: int
    witness: tuple | None = None
    frames_examined: int = 0
    sat_calls: int = 0
    engine: str = "enumerate"
    elapsed: float = 0.0

    @property
    def found(self) -> bool:
        return self.verdict == "countermodel_found"

    def to_json(self) -> dict:
        out = {
            "verdict": self.verdict,
            "formula": to_text(self.formula),
            "logic": self.logic,
            "semantics": self.semantics,
            "bound": self.bound,
            "frames_examined": self.frames_examined,
            "sat_calls": self.sat_calls,
            "engine": self.engine,
            "elapsed": round(self.elapsed, 6),
            "witness": None,
        }
        if self.witness is not None:
            m, w = self.witness
            dump = velt.to_json if isinstance(m, velt.VeltmanModel) else simp.to_json
            out["witness"] = {"world": w, "model": dump(m)}
        return out


def _confirm(m, w: str, a: Formula, semantics: str) -> None:
    # Independent re-evaluation by the recursive evaluators.
    if isinstance(m, velt.VeltmanModel):
        ok = not velt.forces(m, w, a) and velt.validate_frame(m).ok
    else:
        force = simp.s_forces_alt if semantics == "alternative" else simp.s_forces
        ok = not force(m, w, a) and simp.validate_frame(m).ok
    if not ok:
        raise RuntimeError(f"search produced a witness that does not refute {to_text(a)}")


def _resolve(logic, semantics: str) -> tuple[str, frozenset[str]]:
    name = str(logic.value if isinstance(logic, LogicId) else logic)
    if semantics == "veltman":
        if name not in VELTMAN_LOGICS:
            raise KeyError(f"unknown logic {name!r}; known: {', '.join(VELTMAN_LOGICS)}")
        return name, VELTMAN_LOGICS[name]
    if semantics in ("simplified", "standard", "alternative"):
        return LogicId(name).value, LogicId(name).axioms
    raise ValueError(f"semantics must be 'veltman' or 'simplified', got {semantics!r}")


def find_countermodel(
    a: Formula | str,
    logic: LogicId | str,
    semantics: str = "simplified",
    max_size: int = 3,
    engine: str = "auto",
    simplified_clause: str = "standard",
) -> SearchResult:
    """Search frames of ``logic``'s class with at most ``max_size`` worlds for a refutation of ``a``.

    Sizes are tried in increasing order, so the witness is a smallest one.
    ``engine`` is "enumerate", "sat" or "auto" (enumerate small sizes, SAT
    beyond ``AUTO_ENUMERATE_SIZE``).  ``simplified_clause`` picks the
    standard or alternative reading of ``|>`` on simplified frames.
    """
    a = as_formula(a)
    name, conds = _resolve(logic, semantics)
    veltman_side = semantics == "veltman"
    _check_size(max_size, MAX_VELTMAN_SIZE if veltman_side else MAX_SIMPLIFIED_SIZE, "search")
    if engine not in ("auto", "enumerate", "sat"):
        raise ValueError(f"engine must be auto, enumerate or sat, got {engine!r}")
    clause = "veltman" if veltman_side else simplified_clause
    start = time.perf_counter()
    result = SearchResult("exhausted_bound", a, name, semantics, max_size, engine=engine)
    for n in range(1, max_size + 1):
        use_sat = engine == "sat" or (engine == "auto" and n > AUTO_ENUMERATE_SIZE)
        if use_sat:
            result.sat_calls += 1
            if veltman_side:
                m = sat.find_veltman(a, conds, n)
            else:
                m = sat.find_simplified(a, LogicId(name), n, simplified_clause)
            hit = None if m is None else (m, m.worlds[0])
        else:
            hit = None
            frames = (enumerate_veltman_frames(n, conds) if veltman_side
                      else enumerate_simplified_frames(n, name))
            for fr in frames:
                result.frames_examined += 1
                hit = (velt.refute_in_frame(fr, a) if veltman_side
                       else simp.refute_in_frame(fr, a, simplified_clause))
                if hit is not None:
                    break
        if hit is not None:
            _confirm(hit[0], hit[1], a, clause)
            result.verdict = "countermodel_found"
            result.witness = hit
            break
    result.elapsed = time.perf_counter() - start
    return result


# ---------------------------------------------------------------- derivability facts


@dataclass(frozen=True)
class Fact:
    id: str
    premises: frozenset[str]
    conclusion: str
    simplified_logic: LogicId | None = None
    holds: bool = True

    @property
    def statement(self) -> str:
        return f"ILminus({', '.join(sorted(self.premises))}) |- {self.conclusion}"


FACTS: tuple[Fact, ...] = (
    Fact("1", frozenset({"J2plus"}), "J2", LogicId.ILminus_J2plus),
    Fact("2", frozenset({"J1", "J2"}), "J2plus"),
    Fact("3", frozenset({"J2plus"}), "J4plus", LogicId.ILminus_J2plus),
    Fact("4", frozenset({"J4plus"}), "J4", LogicId.ILminus_J4plus),
    Fact("5", frozenset({"J1", "J4"}), "J4plus"),
    Fact("6a", frozenset({"J1", "J2", "J5"}), "J4", LogicId.IL),
    Fact("6b", frozenset({"J1", "J2"}), "J4", LogicId.CL),
    Fact("6c", frozenset({"J1", "J2", "J4", "J5"}), "J6", LogicId.IL),
    Fact("6d", frozenset({"J1", "J2", "J4"}), "J6", LogicId.CL),
)
CONTROL = Fact("control", frozenset({"J4plus"}), "J5", LogicId.ILminus_J4plus, holds=False)


@dataclass
class FactCheck:
    fact: Fact
    side: str
    max_size: int
    passed: bool
    frames_examined: int = 0
    sat_calls: int = 0
    witness: tuple | None = None

    @property
    def statement(self) -> str:
        if self.side == "simplified":
            return f"simplified {self.fact.simplified_logic}-frames |= {self.fact.conclusion}"
        return self.fact.statement

    def to_json(self) -> dict:
        out = {
            "fact": self.fact.id,
            "statement": self.statement,
            "expected": "holds" if self.fact.holds else "fails",
            "side": self.side,
            "max_size": self.max_size,
            "passed": self.passed,
            "frames_examined": self.frames_examined,
            "sat_calls": self.sat_calls,
            "witness": None,
        }
        if self.witness is not None:
            m, w = self.witness
            dump = velt.to_json if isinstance(m, velt.VeltmanModel) else simp.to_json
            out["witness"] = {"world": w, "model": dump(m)}
        return out


@dataclass
class FactsReport:
    checks: list[FactCheck] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        """True when every fact holds on the checked frames and the control fails."""
        return all(c.passed == c.fact.holds for c in self.checks)

    def to_json(self) -> dict:
        return {"ok": self.ok, "checks": [c.to_json() for c in self.checks]}

    def __str__(self) -> str:
        lines = []
        for c in self.checks:
            verdict = "valid" if c.passed else "refuted"
            mark = "ok" if c.passed == c.fact.holds else "MISMATCH"
            lines.append(
                f"[{mark}] fact {c.fact.id:<7} {c.side:<10} n<={c.max_size}  {c.statement:<44} "
                f"{verdict} ({c.frames_examined} frames, {c.sat_calls} sat calls)"
            )
        return "\n".join(lines)


def _veltman_fact(fact: Fact, max_size: int) -> FactCheck:
    # Premises with a first-order condition restrict the enumeration; the
    # others (J2, J4) are imposed by checking their validity frame by frame.
    conds = fact.premises & set(velt.CONDITIONS)
    schematic = [scheme(p) for p in sorted(fact.premises - conds)]
    goal = scheme(fact.conclusion)
    check = FactCheck(fact, "veltman", max_size, True)
    for n in range(1, max_size + 1):
        for fr in enumerate_veltman_frames(n, conds):
            if not all(velt.valid_in_frame(fr, s) for s in schematic):
                continue
            check.frames_examined += 1
            hit = velt.refute_in_frame(fr, goal)
            if hit is not None:
                _confirm(hit[0], hit[1], goal, "veltman")
                check.passed, check.witness = False, hit
                return check
    return check


def _simplified_fact(fact: Fact, max_size: int, engine: str) -> FactCheck:
    res = find_countermodel(scheme(fact.conclusion), fact.simplified_logic, "simplified", max_size, engine)
    return FactCheck(fact, "simplified", max_size, not res.found, res.frames_examined, res.sat_calls, res.witness)


def check_derivability_facts(veltman_size: int = 3, simplified_size: int = 5, engine: str = "auto") -> FactsReport:
    """Check each derivability fact semantically on all small frames of the premise logic.

    A fact L |- X passes when every enumerated frame validating L also
    validates X.  This is a necessary condition for derivability, not a
    proof.  The control fact is expected to fail with a witness.
    """
    _check_size(veltman_size, MAX_FACT_VELTMAN_SIZE, "Veltman fact-check")
    _check_size(simplified_size, MAX_SIMPLIFIED_SIZE, "simplified fact-check")
    report = FactsReport()
    for fact in FACTS + (CONTROL,):
        report.checks.append(_veltman_fact(fact, veltman_size))
        if fact.simplified_logic is not None:
            report.checks.append(_simplified_fact(fact, simplified_size, engine))
    return report
