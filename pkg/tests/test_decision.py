import json
import random

import pytest

from ilfmp import decision as dec
from ilfmp import simplified as simp
from ilfmp import veltman as velt
from ilfmp.errors import BoundError
from ilfmp.formula import TOP, axiom_instance, parse, random_formula, scheme
from ilfmp.simplified import LogicId

# Frozen from brute-force oracles that filter all relation families on the
# carrier with validate_frame plus the frame conditions.
VELTMAN_COUNTS = {
    (2, ()): 9,
    (2, ("J1",)): 5,
    (2, ("J5",)): 9,
    (2, ("J4plus",)): 5,
    (2, ("J2plus",)): 5,
    (2, ("J1", "J2plus")): 3,
    (3, ()): 3505,
    (3, ("J1",)): 505,
    (3, ("J5",)): 1969,
    (3, ("J4plus",)): 265,
    (3, ("J2plus",)): 220,
    (3, ("J1", "J2plus")): 46,
    (3, ("J1", "J2plus", "J5")): 34,
    (3, ("J1", "J5")): 313,
}

SIMPLIFIED_COUNTS = {
    (2, "ILminus_J4plus"): 48,
    (2, "ILminus_J1J4plus"): 12,
    (2, "ILminus_J4plusJ5"): 32,
    (2, "ILminus_J1J4plusJ5"): 8,
    (2, "ILminus_J2plus"): 39,
    (2, "CL"): 12,
    (2, "ILminus_J2plusJ5"): 23,
    (2, "IL"): 8,
    (3, "ILminus_J4plus"): 9728,
    (3, "ILminus_J1J4plus"): 1216,
    (3, "ILminus_J4plusJ5"): 3200,
    (3, "ILminus_J1J4plusJ5"): 400,
    (3, "ILminus_J2plus"): 3249,
    (3, "CL"): 551,
    (3, "ILminus_J2plusJ5"): 789,
    (3, "IL"): 167,
}


@pytest.mark.parametrize("key, count", VELTMAN_COUNTS.items())
def test_veltman_counts(key, count):
    n, conds = key
    frames = list(dec.enumerate_veltman_frames(n, conds))
    assert len(frames) == count
    assert len(set(frames)) == count
    assert all(velt.validate_frame(f).ok for f in frames)
    assert all(velt.check_condition(f, c) for f in frames for c in conds)


@pytest.mark.parametrize("key, count", SIMPLIFIED_COUNTS.items())
def test_simplified_counts(key, count):
    n, logic = key
    frames = list(dec.enumerate_simplified_frames(n, logic))
    assert len(frames) == count
    assert len(set(frames)) == count
    assert all(simp.classify(f, logic) and simp.validate_frame(f).ok for f in frames)


def test_single_world():
    assert len(list(dec.enumerate_veltman_frames(1))) == 1
    (f,) = dec.enumerate_simplified_frames(1, "IL")
    assert f.S == {("w1", "w1")} and f.R == frozenset()


def test_j5_filter_is_subset():
    # Two worlds admit no R-chain of length two, so J5 is vacuous there;
    # the inclusion only becomes strict at three worlds.
    for n in (2, 3):
        everything = set(dec.enumerate_veltman_frames(n))
        j5 = set(dec.enumerate_veltman_frames(n, {"J5"}))
        assert j5 <= everything
    assert len(j5) < len(everything)


def test_enumeration_is_deterministic():
    a = [velt.to_json(f) for f in dec.enumerate_veltman_frames(2, {"J1"})]
    b = [velt.to_json(f) for f in dec.enumerate_veltman_frames(2, {"J1"})]
    assert a == b


def test_bounds():
    with pytest.raises(BoundError):
        next(dec.enumerate_veltman_frames(5))
    with pytest.raises(BoundError):
        next(dec.enumerate_veltman_frames(0))
    with pytest.raises(BoundError):
        next(dec.enumerate_simplified_frames(6, "IL"))
    with pytest.raises(BoundError):
        dec.find_countermodel(TOP, "IL", "simplified", 6)
    with pytest.raises(BoundError):
        dec.find_countermodel(TOP, "IL", "veltman", 5)
    with pytest.raises(BoundError):
        dec.check_derivability_facts(4, 3)


def test_unknown_condition():
    with pytest.raises(KeyError):
        next(dec.enumerate_veltman_frames(2, {"J3"}))


def test_class_inclusion_follows_lattice():
    for n in (1, 2, 3):
        classes = {lg: set(dec.enumerate_simplified_frames(n, lg)) for lg in LogicId}
        for weak, strong in dec.LATTICE:
            if weak in classes and strong in classes:
                assert classes[LogicId(strong)] <= classes[LogicId(weak)]


def test_veltman_class_inclusion_follows_lattice():
    for n in (2, 3):
        classes = {name: set(dec.enumerate_veltman_frames(n, conds)) for name, conds in dec.VELTMAN_LOGICS.items()}
        for weak, strong in dec.LATTICE:
            assert classes[strong] <= classes[weak]


def test_random_frames_meet_conditions():
    rng = random.Random(0)
    for _ in range(200):
        conds = rng.sample(velt.CONDITIONS, rng.randint(0, 3))
        f = dec.random_veltman_frame(rng, rng.randint(1, 4), conds)
        assert velt.validate_frame(f).ok
        assert all(velt.check_condition(f, c) for c in conds)
    for lg in LogicId:
        f = dec.random_simplified_frame(rng, 4, lg)
        assert simp.classify(f, lg)


# ---------------------------------------------------------------- search


@pytest.mark.parametrize("logic", list(dec.VELTMAN_LOGICS))
def test_top_never_refuted(logic):
    assert dec.find_countermodel(TOP, logic, "veltman", 3).verdict == "exhausted_bound"
    if logic in set(map(str, LogicId)):
        assert dec.find_countermodel(TOP, logic, "simplified", 5).verdict == "exhausted_bound"


def test_j5_needs_three_worlds():
    a = axiom_instance("J5", [parse("p")])
    assert not dec.find_countermodel(a, "ILminus_J4plus", "simplified", 2).found
    res = dec.find_countermodel(a, "ILminus_J4plus", "simplified", 3)
    assert res.found
    m, w = res.witness
    assert not simp.s_forces(m, w, a)
    assert len(m.worlds) == 3


def test_axiom_of_logic_not_refuted():
    res = dec.find_countermodel(axiom_instance("J1", ["p", "q"]), "CL", "simplified", 3)
    assert res.verdict == "exhausted_bound"
    assert res.witness is None and res.frames_examined > 0


def test_result_json():
    res = dec.find_countermodel("<>p |> p", "ILminus_J4plus", "simplified", 3)
    data = json.loads(json.dumps(res.to_json()))
    assert data["verdict"] == "countermodel_found"
    m = simp.from_json(data["witness"]["model"])
    assert not simp.s_forces(m, data["witness"]["world"], "<>p |> p")


def test_monotone_in_bound():
    rng = random.Random(12)
    for _ in range(15):
        f = random_formula(rng, 4, ("p",))
        found = [dec.find_countermodel(f, "ILminus_J2plus", "simplified", n).found for n in (1, 2, 3, 4)]
        assert found == sorted(found)


@pytest.mark.parametrize("logic", ["ILminus_J4plus", "CL", "IL", "ILminus_J2plusJ5"])
def test_sat_agrees_with_enumeration_simplified(logic):
    rng = random.Random(31)
    for _ in range(12):
        f = random_formula(rng, 4, ("p", "q"), 2)
        for n in (1, 2, 3):
            e = dec.find_countermodel(f, logic, "simplified", n, engine="enumerate")
            s = dec.find_countermodel(f, logic, "simplified", n, engine="sat")
            assert e.found == s.found


@pytest.mark.parametrize("logic", ["ILminus", "ILminus_J1J5", "ILminus_J2plus", "IL"])
def test_sat_agrees_with_enumeration_veltman(logic):
    rng = random.Random(37)
    for _ in range(10):
        f = random_formula(rng, 4, ("p",), 2)
        for n in (1, 2, 3):
            e = dec.find_countermodel(f, logic, "veltman", n, engine="enumerate")
            s = dec.find_countermodel(f, logic, "veltman", n, engine="sat")
            assert e.found == s.found


def test_sat_agrees_at_four_worlds_for_il():
    for name in ("J4", "P"):
        f = scheme(name)
        e = dec.find_countermodel(f, "IL", "simplified", 4, engine="enumerate")
        s = dec.find_countermodel(f, "IL", "simplified", 4, engine="sat")
        assert e.found == s.found


def test_alternative_clause_search():
    p_ax = scheme("P")
    assert dec.find_countermodel(p_ax, "ILminus_J4plus", "simplified", 4).found
    res = dec.find_countermodel(p_ax, "ILminus_J4plus", "simplified", 4, simplified_clause="alternative")
    assert not res.found


def test_veltman_only_logics():
    res = dec.find_countermodel(scheme("J4plus"), "ILminus", "veltman", 2)
    assert res.found
    with pytest.raises(ValueError):
        dec.find_countermodel(scheme("J4plus"), "ILminus", "simplified", 2)


# ---------------------------------------------------------------- facts


def test_facts_small():
    report = dec.check_derivability_facts(3, 3)
    assert report.ok
    control = [c for c in report.checks if not c.fact.holds]
    assert control and all(not c.passed and c.witness is not None for c in control)
    data = json.loads(json.dumps(report.to_json()))
    assert data["ok"] is True
