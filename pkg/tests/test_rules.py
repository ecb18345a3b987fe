import pytest

from graphconflicts.conditions import Bounds, disj, exists, nac
from graphconflicts.conflicts import initial_parallel_independent_pair
from graphconflicts.graphs import (
    GluingViolation, Morphism, are_isomorphic, compose, copair, coproduct, pushout,
)
from graphconflicts.rules import (
    AC_PRODUCE, DELETE_USE, PRODUCE_AC, USE_DELETE, ACViolation, Rule, TransformationPair,
    apply, check_parallel_independence, embed_transformation_pair, embeddings_into, find_matches,
    pair_isomorphism,
)
from graphconflicts.verify import iter_pairs

from corpus import (
    AC_PAIRS, EDGE, EMPTY, ONE, PLAIN_PAIRS, THREE, TWO, G, M, build, delete_node,
    keep_node, p1, p2,
)
from oracles import brute_morphisms, equal_maps, report_invariants

FOUR = G(4)


def test_rule_requires_injective_legs():
    with pytest.raises(ValueError):
        Rule("bad", M(TWO, ONE, [0, 0]), Morphism.identity(TWO))


def test_rule_condition_over_left():
    with pytest.raises(ValueError):
        Rule("bad", Morphism.identity(ONE), Morphism.identity(ONE), nac(M(TWO, THREE, [0, 1])))


def test_find_matches_running_example():
    ms = find_matches(p2(), TWO)
    assert len(ms) == 2 and all(m.gluing_ok and m.ac_ok for m in ms)
    ms = find_matches(p2(), THREE)
    assert ms and not any(m.ac_ok for m in ms)
    assert find_matches(p2(), THREE, respect_ac=True) == []


def test_find_matches_empty_left():
    create = Rule("create", Morphism.identity(EMPTY), M(EMPTY, ONE, []))
    assert len(find_matches(create, EDGE)) == 1


def test_find_matches_gluing_status():
    ms = find_matches(delete_node(), EDGE)
    assert len(ms) == 2 and not any(m.gluing_ok for m in ms)


def test_apply_p1():
    t = apply(p1(), M(ONE, TWO, [0]))
    assert are_isomorphic(t.target, G(3, [(0, 1)]))


def test_apply_identity_rule():
    t = apply(keep_node(), M(ONE, EDGE, [1]))
    assert are_isomorphic(t.target, EDGE)


def test_apply_p2_adds_node():
    t = apply(p2(), M(ONE, TWO, [0]))
    assert are_isomorphic(t.target, THREE) and t.ac_respected


def test_apply_errors():
    with pytest.raises(ACViolation):
        apply(p2(), M(ONE, THREE, [0]))
    t = apply(p2(), M(ONE, THREE, [0]), disregard_ac=True)
    assert not t.ac_respected
    with pytest.raises(GluingViolation):
        apply(delete_node(), M(ONE, EDGE, [0]))


def test_squares_are_pushouts():
    for pair in PLAIN_PAIRS + AC_PAIRS:
        for rule in build(pair):
            for m in find_matches(rule, G(3, [(0, 1), (1, 1)])):
                if not m.gluing_ok:
                    continue
                t = apply(rule, m.morphism, disregard_ac=True)
                for leg, top, bottom in ((rule.l, t.d_left, t.match), (rule.r, t.d_right, t.comatch)):
                    g, f_star, g_star = pushout(leg, t.i)
                    iso = [u for u in brute_morphisms(g, top.cod, mono=True)
                           if u.is_iso and equal_maps(compose(f_star, u), top)
                           and equal_maps(compose(g_star, u), bottom)]
                    assert len(iso) == 1


# -- parallel independence --------------------------------------------------

def running_pair(g, n1, n2):
    return TransformationPair.build(p1(), M(ONE, g, [n1]), p2(), M(ONE, g, [n2]), disregard_ac=False)


def test_running_example_shared_node_is_produce_ac():
    rep = check_parallel_independence(running_pair(TWO, 0, 0))
    assert rep.classes == {PRODUCE_AC}


def test_running_example_single_node_is_independent():
    assert check_parallel_independence(running_pair(ONE, 0, 0)).parallel_independent


def test_no_co_inheritance():
    # p2 may also fire once four nodes exist
    ac = disj(ONE, [nac(M(ONE, THREE, [0])), exists(M(ONE, FOUR, [0]))])
    q2 = Rule("p2", p2().l, p2().r, ac)
    tp = TransformationPair.build(p1(), M(ONE, TWO, [0]), q2, M(ONE, TWO, [0]), disregard_ac=False)
    assert check_parallel_independence(tp).classes == {PRODUCE_AC}
    tp = TransformationPair.build(p1(), M(ONE, FOUR, [0]), q2, M(ONE, FOUR, [0]), disregard_ac=False)
    assert check_parallel_independence(tp).parallel_independent


def test_two_deletions_of_one_node():
    d1, d2 = build((delete_node, delete_node))
    tp = TransformationPair.build(d1, M(ONE, ONE, [0]), d2, M(ONE, ONE, [0]))
    assert check_parallel_independence(tp).classes == {USE_DELETE, DELETE_USE}


def test_report_invariants_on_corpus():
    n = 0
    for pair in PLAIN_PAIRS[:4] + AC_PAIRS[:4]:
        r1, r2 = build(pair)
        for tp, rep in iter_pairs(r1, r2, Bounds(3, 1)):
            n += 1
            assert report_invariants(rep) == []
            if rep.d12 is not None:
                sols = [d for d in brute_morphisms(r1.left, tp.t2.context)
                        if equal_maps(compose(d, tp.t2.d_left), tp.o1)]
                assert len(sols) == 1
    assert n > 100


# -- extension diagrams -----------------------------------------------------

def test_embed_identity_is_copy():
    tp = running_pair(TWO, 0, 0)
    ext = embed_transformation_pair(tp, Morphism.identity(TWO))
    assert pair_isomorphism(ext.big, tp) is not None


def test_embed_coproduct_pair_into_example_conflict():
    tp_k = initial_parallel_independent_pair(p1(), p2())
    m = M(tp_k.source, TWO, [0, 0])
    ext = embed_transformation_pair(tp_k, m, disregard_ac=False)
    assert check_parallel_independence(ext.big).classes == {PRODUCE_AC}


def test_embed_dangling_fails():
    d, k = build((delete_node, keep_node))
    tp = TransformationPair.build(d, M(ONE, ONE, [0]), k, M(ONE, ONE, [0]))
    with pytest.raises(GluingViolation):
        embed_transformation_pair(tp, M(ONE, EDGE, [0]))


def test_embed_boundary():
    # the second step keeps a node the first one deletes; mapping the kept
    # copy onto the deleted node leaves no extension diagram
    d, k = build((delete_node, keep_node))
    tp_k = initial_parallel_independent_pair(d, k)
    m = M(tp_k.source, ONE, [0, 0])
    with pytest.raises(GluingViolation) as err:
        embed_transformation_pair(tp_k, m)
    assert err.value.kind == "boundary"


def test_coproduct_extension_recovers_independent_pairs():
    checked = 0
    for pair in PLAIN_PAIRS + AC_PAIRS:
        r1, r2 = build(pair)
        tp_k = initial_parallel_independent_pair(r1, r2)
        _, i1, i2 = coproduct(r1.left, r2.left)
        for tp, rep in iter_pairs(r1, r2, Bounds(3, 1)):
            if not rep.parallel_independent:
                continue
            m = copair(i1, i2, tp.o1, tp.o2)
            ext = embed_transformation_pair(tp_k, m)
            assert pair_isomorphism(ext.big, tp) is not None
            checked += 1
    assert checked > 50


def test_conflict_inheritance_on_corpus():
    """A use-delete (delete-use) conflict is inherited by every pair that
    embeds into it."""
    checked = 0
    for pair in PLAIN_PAIRS[:6]:
        r1, r2 = build(pair)
        pairs = list(iter_pairs(r1, r2, Bounds(3, 1)))
        for small, srep in pairs[:40]:
            for big, brep in pairs:
                for ext in embeddings_into(small, big):
                    checked += 1
                    for cls in (USE_DELETE, DELETE_USE):
                        if cls in brep.classes:
                            assert cls in srep.classes
    assert checked > 100
