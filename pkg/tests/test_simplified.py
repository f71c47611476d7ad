import json
import random

import pytest

from ilfmp import simplified as simp
from ilfmp.decision import enumerate_simplified_frames, random_simplified_frame, random_simplified_model
from ilfmp.errors import UnknownWorld
from ilfmp.formula import Rhd, Var, random_formula, scheme
from ilfmp.simplified import LogicId

p, q = Var("p"), Var("q")


def test_forcing_examples():
    one = simp.model(["a"], [], [("a", "a")])
    assert simp.s_forces(one, "a", Rhd(p, q))
    assert simp.s_forces_alt(one, "a", Rhd(p, q))
    m = simp.model("ab", [("a", "b")], [("b", "b")], {"p": ["b"], "q": ["b"]})
    assert simp.s_forces(m, "a", Rhd(p, q))
    m3 = simp.model("abc", [("a", "b")], [("b", "c")], {"p": ["b"], "q": ["c"]})
    assert not simp.s_forces(m3, "a", Rhd(p, q))
    assert simp.s_forces_alt(m3, "a", Rhd(p, q))


def test_alt_needs_some_s_successor():
    m = simp.model("ab", [("a", "b")], [], {"p": ["b"], "q": ["a", "b"]})
    assert not simp.s_forces_alt(m, "a", Rhd(p, q))


def test_unknown_world():
    m = simp.model(["a"])
    with pytest.raises(UnknownWorld):
        simp.s_forces(m, "z", p)
    with pytest.raises(UnknownWorld):
        simp.s_forces_alt(m, "z", p)


def test_validate():
    assert simp.validate_frame(simp.frame("ab", [("a", "b")], [("b", "a")])).ok
    assert not simp.validate_frame(simp.frame("ab", [("a", "b"), ("b", "a")])).ok


def test_condition_examples():
    assert simp.s_check_condition(simp.frame("ab", [("a", "b")], [("b", "b")]), "J1")
    f = simp.frame("abc", [("a", "b"), ("a", "c")], [("b", "c"), ("c", "b")])
    assert not simp.s_check_condition(f, "J2plus")
    g = simp.frame("abc", [("a", "b"), ("a", "c")], [("b", "c"), ("c", "b"), ("b", "b"), ("c", "c")])
    assert simp.s_check_condition(g, "J2plus")
    chain = [("a", "b"), ("b", "c"), ("a", "c")]
    assert simp.s_check_condition(simp.frame("abc", chain, [("b", "c")]), "J5")
    assert not simp.s_check_condition(simp.frame("abc", chain, [("a", "c")]), "J5")


def test_classify_examples():
    W = "ab"
    full = [(x, y) for x in W for y in W]
    assert all(simp.classify(simp.frame(W, [("a", "b")], full), lg) for lg in LogicId)
    assert not simp.classify(simp.frame(W, [("a", "b")], [("b", "b")]), "CL")
    f = simp.frame(W, [("a", "b")], [("a", "a"), ("b", "b")])
    assert simp.classify(f, LogicId.CL)
    assert not simp.classify(f, LogicId.IL)


def test_classify_is_stronger_than_validity_conditions():
    # S reflexive only where J1 needs it: J1 valid, yet not a CL-frame.
    f = simp.frame("ab", [("a", "b")], [("b", "b")])
    assert simp.s_valid_in_frame(f, "J1")
    assert not simp.classify(f, LogicId.ILminus_J1J4plus)


def test_kernel_matches_recursion():
    rng = random.Random(3)
    for _ in range(150):
        m = random_simplified_model(rng, rng.randint(1, 4), density=rng.random())
        for sem, rec in (("standard", simp.s_forces), ("alternative", simp.s_forces_alt)):
            ev = simp.Evaluator(m, sem)
            for _ in range(6):
                f = random_formula(rng, 5, ("p", "q"))
                for w in m.worlds:
                    assert ev.forces(w, f) == rec(m, w, f)


def test_semantics_agree_when_s_inside_r_reach():
    # If every S-answer z of an R-successor y of x is itself R-reachable from x,
    # the x R z conjunct is redundant.
    rng = random.Random(5)
    checked = 0
    for _ in range(400):
        m = random_simplified_model(rng, rng.randint(1, 4), density=0.5)
        fr = m.frame
        if not fr.S <= fr.R:
            continue
        checked += 1
        f = random_formula(rng, 4, ("p", "q"))
        for w in m.worlds:
            assert simp.s_forces(m, w, f) == simp.s_forces_alt(m, w, f)
    assert checked > 20


@pytest.mark.parametrize("name", ["J3", "J4plus", "J6", "J4"])
def test_always_valid_schemes(name):
    for n in (1, 2):
        for fr in enumerate_simplified_frames(n):
            assert simp.s_valid_in_frame(fr, name)


def test_p_valid_under_alternative_clause():
    for n in (1, 2):
        for fr in enumerate_simplified_frames(n):
            assert simp.s_valid_in_frame(fr, "P", "alternative")


def test_p_fails_under_standard_clause():
    # y S z with z outside R[x]: the answer is visible from y's position but not from x's.
    f = simp.frame("xyz", [("x", "y"), ("y", "z"), ("x", "z")], [("z", "z")])
    f2 = simp.frame("wxyz", [("w", "x"), ("x", "y"), ("w", "y"), ("w", "z")], [("y", "z")])
    assert simp.s_valid_in_frame(f, "P")
    assert not simp.s_valid_in_frame(f2, "P")


def test_classify_implies_axiom_validity():
    rng = random.Random(9)
    for logic in LogicId:
        for _ in range(40):
            fr = random_simplified_frame(rng, rng.randint(1, 3), logic, density=0.3)
            assert simp.classify(fr, logic)
            for ax in logic.axioms:
                assert simp.s_valid_in_frame(fr, ax)


def test_json_round_trip():
    m = simp.model("ab", [("a", "b")], [("b", "b")], {"p": ["b"]})
    data = simp.to_json(m)
    assert data["S"] == [["b", "b"]]
    assert simp.from_json(json.dumps(data)) == m


def test_dot():
    dot = simp.to_dot(simp.model("ab", [("a", "b")], [("b", "a")]))
    assert '"a" -> "b" [style=solid, color=black];' in dot
    assert '"b" -> "a" [style=dashed, color=gray];' in dot


def test_fresh_scheme_instances():
    assert simp.s_valid_in_frame(simp.frame(["a"]), scheme("J5"))
