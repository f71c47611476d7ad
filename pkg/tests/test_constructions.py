import itertools
import random

import pytest

from ilfmp import constructions as cons
from ilfmp import simplified as simp
from ilfmp import veltman as velt
from ilfmp.constructions import TraceWorld
from ilfmp.decision import random_simplified_model, random_veltman_model
from ilfmp.errors import BoundError, PreconditionError
from ilfmp.formula import TOP, And, Box, Imp, Rhd, Var, parse, random_formula, subformulas
from ilfmp.relations import is_transitive
from ilfmp.simplified import LogicId

p, q = Var("p"), Var("q")


def chains_by_brute_force(fr):
    """All sequences without repetition whose consecutive elements are R-related."""
    out = set()
    for k in range(1, len(fr.worlds) + 1):
        for seq in itertools.permutations(fr.worlds, k):
            if all((a, b) in fr.R for a, b in zip(seq, seq[1:])):
                out.add(seq)
    return out


def sv2_s_by_tuples(m, y, z, max_len=3):
    """S' of the SV2 construction by listing label tuples (v1..vl), l <= max_len."""
    x = cons.meet(cons.minus1(y), cons.minus1(z))
    if x == ():
        return y == z
    labels = cons.setm(cons.minus1(y), cons.minus1(x))
    if not labels >= cons.setm(cons.minus1(z), cons.minus1(x)):
        return False
    fr = m.frame
    for l in range(1, max_len + 1):
        for vs in itertools.product(sorted(labels), repeat=l):
            frontier = {cons.last(y)}
            for v in vs:
                frontier = {b for a, b in fr.s(v) if a in frontier}
            if cons.last(z) in frontier:
                return True
    return False


# ---------------------------------------------------------------- chain helpers


def test_chain_helpers():
    assert cons.minus1(("a",)) == ()
    assert cons.last(("a", "b")) == "b"
    assert cons.meet(("a", "b", "c"), ("a", "b", "d")) == ("a", "b")
    assert cons.meet(("a",), ("b",)) == ()
    assert cons.setm(("a", "b", "c"), ("a",)) == {"b", "c"}
    assert cons.is_proper_prefix(("a",), ("a", "b"))
    assert not cons.is_proper_prefix(("a",), ("a",))
    assert cons.parse_chain_id(cons.chain_id(("a", "b"))) == ("a", "b")


def test_chain_enumeration_matches_brute_force():
    rng = random.Random(2)
    for _ in range(60):
        m = random_veltman_model(rng, rng.randint(1, 4))
        assert set(cons.r_chains(m.frame)) == chains_by_brute_force(m.frame)


# ---------------------------------------------------------------- SV


def test_sv_single_world():
    out = cons.construct_sv(velt.model(["a"]), "ILminus_J4plus")
    assert out.worlds == ("a",)
    assert out.frame.R == frozenset()
    assert out.frame.S == {("a", "a")}


def test_sv_two_chain():
    out = cons.construct_sv(velt.model("ab", [("a", "b")]), "ILminus_J4plus")
    assert set(out.worlds) == {"a", "b", "a-b"}
    assert out.frame.R == {("a", "a-b")}


def test_sv_linear_three():
    base = velt.model("abc", [("a", "b"), ("b", "c"), ("a", "c")])
    out = cons.construct_sv(base, "ILminus_J4plus")
    assert len(out.worlds) == 7


def test_sv_rejects_bad_base():
    bad = velt.model("ab", [("a", "b")], {"a": [("b", "a")]})
    with pytest.raises(PreconditionError) as err:
        cons.construct_sv(bad, "ILminus_J4plus")
    assert "J4plus" in str(err.value)
    with pytest.raises(PreconditionError):
        cons.construct_sv(velt.model("ab", [("a", "b")]), "ILminus_J1J4plus")
    with pytest.raises(PreconditionError):
        cons.construct_sv(velt.model(["a"]), "CL")
    with pytest.raises(PreconditionError):
        cons.construct_sv(velt.model(["a-b"]), "ILminus_J4plus")


@pytest.mark.parametrize("logic", cons.SV_LOGICS)
def test_sv_preserves_truth_and_class(logic):
    rng = random.Random(hash(str(logic)) % 1000)
    corpus = [random_formula(rng, 5, ("p", "q"), 3) for _ in range(25)]
    for _ in range(40):
        m = random_veltman_model(rng, rng.randint(1, 4), logic.axioms)
        out = cons.construct_sv(m, logic)
        assert simp.classify(out.frame, logic)
        ev, base = simp.Evaluator(out), velt.Evaluator(m)
        for f in corpus:
            for w in out.worlds:
                assert ev.forces(w, f) == base.forces(cons.parse_chain_id(w)[-1], f)


# ---------------------------------------------------------------- SV2


def test_sv2_single_world_matches_sv():
    base = velt.model(["a"], [], {}, {"p": ["a"]})
    assert cons.construct_sv2(base, "ILminus_J2plus") == cons.construct_sv(base, "ILminus_J4plus")


def test_sv2_loop_example():
    base = velt.model("ab", [("a", "b")], {"a": [("b", "b")]})
    out = cons.construct_sv2(base, "CL")
    assert ("a-b", "a-b") in out.frame.S
    assert len(out.worlds) == 3


@pytest.mark.parametrize("logic", cons.SV2_LOGICS)
def test_sv2_path_search_matches_tuple_enumeration(logic):
    rng = random.Random(17)
    for _ in range(40):
        m = random_veltman_model(rng, rng.randint(2, 4), logic.axioms)
        out = cons.construct_sv2(m, logic)
        ids = list(out.worlds)
        for a in ids:
            for b in ids:
                y, z = cons.parse_chain_id(a), cons.parse_chain_id(b)
                # Paths in a world set of size <= 4 never need more than 3 steps
                # to connect distinct endpoints, and a loop y^e = z^e needs at most 4.
                assert ((a, b) in out.frame.S) == sv2_s_by_tuples(m, y, z, max_len=4)


@pytest.mark.parametrize("logic", cons.SV2_LOGICS)
def test_sv2_output_transitive(logic):
    rng = random.Random(23)
    for _ in range(80):
        m = random_veltman_model(rng, rng.randint(1, 4), logic.axioms)
        out = cons.construct_sv2(m, logic)
        assert is_transitive(out.frame.S)
        assert simp.classify(out.frame, logic)


def test_countermodel_transport():
    m = velt.model("ab", [("a", "b")], {}, {"p": ["b"]})
    assert not velt.forces(m, "a", "p |> p")
    out = cons.construct_sv(m, "ILminus_J4plus")
    assert not simp.s_forces(out, "a", "p |> p")


# ---------------------------------------------------------------- SVIL


def loop_base():
    return velt.model("wu", [("w", "u")], {"w": [("u", "u")]}, {"p": ["u"]})


def test_trace_world_ids():
    t = TraceWorld(("w", "u", "u"), (0, "w"))
    assert t.id == "w-u-u@0,w"
    assert TraceWorld.from_id(t.id) == t
    assert TraceWorld.from_id("w@") == TraceWorld(("w",), ())
    assert t.reduced() == TraceWorld(("w", "u"), (0,))
    assert TraceWorld(("u", "u"), ("w",)).reduced() == TraceWorld(("u",), ())


def test_trace_world_rejects_bad_shape():
    with pytest.raises(ValueError):
        TraceWorld(("w", "u"), ())


def test_svil_single_world():
    base = velt.model(["w"])
    for d in (1, 2, 5):
        res = cons.construct_svil(base, d)
        assert res.fragment.worlds == ("w@",)


def test_svil_loop_base_traces():
    res = cons.construct_svil(loop_base(), 3)
    assert set(res.fragment.worlds) == {"w@", "u@", "w-u@0", "u-u@w", "w-u-u@0,w", "u-u-u@w,w"}


def test_svil_fragments_grow():
    sizes = [len(cons.construct_svil(loop_base(), d).fragment.worlds) for d in range(1, 7)]
    assert sizes == sorted(sizes) and len(set(sizes)) == len(sizes)


def test_svil_rejects():
    with pytest.raises(BoundError):
        cons.construct_svil(loop_base(), 0)
    with pytest.raises(PreconditionError):
        cons.construct_svil(velt.model("abc", [("a", "b"), ("b", "c"), ("a", "c")]), 2)
    with pytest.raises(PreconditionError):
        cons.construct_svil(velt.model(["0"]), 2)


def test_r_prime_condition_one():
    # From <w> the S_w-step u -> u is allowed (w occurs before it); from <u> it is not.
    h = cons.SvilModel(loop_base())
    w, u = TraceWorld(("w",), ()), TraceWorld(("u",), ())
    assert cons.trace_r(w, TraceWorld(("w", "u", "u"), (0, "w")))
    assert not cons.trace_r(u, TraceWorld(("u", "u"), ("w",)))
    assert {t.id for t in h.r_successors(w, 4)} == {"w-u@0", "w-u-u@0,w", "w-u-u-u@0,w,w"}


def test_svil_lazy_handle_is_base_forcing():
    m = loop_base()
    h = cons.construct_svil(m, 3).handle
    for tid in ("w@", "u-u@w", "w-u-u@0,w"):
        for f in ("p", "p |> p", "[]p", "<>p |> p"):
            assert h.forces(tid, f) == velt.forces(m, TraceWorld.from_id(tid).last, f)


# ---------------------------------------------------------------- strengthen / reduce_il


def test_strengthen_examples():
    assert cons.strengthen(p) == Imp(And(Rhd(p, p), Box(Rhd(p, p))), p)
    pair = lambda c: And(Rhd(c, c), Box(Rhd(c, c)))  # noqa: E731
    # sorted by printed form: "p", "p |> q", "q"
    assert cons.strengthen_antecedent(Rhd(p, q)) == And(And(pair(p), pair(Rhd(p, q))), pair(q))
    assert cons.strengthen(TOP) == Imp(And(Rhd(TOP, TOP), Box(Rhd(TOP, TOP))), TOP)
    assert cons.strengthen("p |> q") == cons.strengthen(Rhd(p, q))


def test_reduce_il_reflexive_unchanged():
    m = simp.model("ab", [("a", "b")], [("a", "a"), ("b", "b"), ("a", "b")], {"p": ["b"]})
    out = cons.reduce_il(m, "~[]p")
    assert out.frame.S == m.frame.S


def test_reduce_il_single_world():
    m = simp.model(["a"])
    out = cons.reduce_il(m, "p")
    assert simp.classify(out.frame, LogicId.IL)
    assert out.frame.S == {("a", "a")}


def test_reduce_il_hand_instance():
    # r S s, s S s; r itself is only reached by the identity added below.
    m = simp.model(
        "wrs",
        [("w", "r"), ("w", "s"), ("r", "s")],
        [("r", "s"), ("s", "s"), ("w", "r"), ("w", "s")],
        {"p": ["r", "s"]},
    )
    a = "(p |> ~p) | []~p"
    assert not simp.s_forces(m, "w", a)
    out = cons.reduce_il(m, a)
    assert not simp.classify(m.frame, LogicId.IL)
    assert simp.classify(out.frame, LogicId.IL)
    for g in subformulas(parse(a)):
        for x in m.worlds:
            assert simp.s_forces(out, x, g) == simp.s_forces(m, x, g)


def test_reduce_il_preconditions():
    with pytest.raises(PreconditionError) as err:
        cons.reduce_il(simp.model("ab", [], [("a", "b")]), "p")
    assert "root" in str(err.value)
    with pytest.raises(PreconditionError):
        cons.reduce_il(simp.model(["a"], [], [], {"p": ["a"]}), "p")
    with pytest.raises(PreconditionError):
        cons.reduce_il(simp.model("ab", [("a", "b")], [("b", "b")]), "p")


def test_generated_submodel():
    m = random_simplified_model(random.Random(1), 4, LogicId.ILminus_J2plusJ5)
    w = m.worlds[0]
    sub = cons.generated_submodel(m, w)
    assert cons.root_of(sub.frame) == w
    for x in sub.worlds:
        assert simp.s_forces(sub, x, "p |> q") == simp.s_forces(m, x, "p |> q")
