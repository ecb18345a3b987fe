import random

import pytest

from graphconflicts.conditions import (
    And, Bounds, CTrue, ContextMismatch, Equivalent, Exists, Inequivalent, NacConjunction, No,
    Not, Unknown, Yes, bounded_equivalent, bounded_satisfiable, condition_key, conj, disj,
    equal_up_to_iso, exists, false, forall, is_false, is_true, left, literals_dnf, nac, neg,
    normalize, satisfies, shift, small_model_size, to_text, true,
)
from graphconflicts.graphs import (
    UNTYPED, Morphism, compose, coproduct, enumerate_graphs, enumerate_morphisms,
    gluing_violation, pushout, pushout_complement,
)
from graphconflicts.rules import Rule

from corpus import EDGE, EMPTY, LOOP, ONE, THREE, TWO, G, M, p1, p2
from generators import left_instances, random_condition, shift_instances
from oracles import brute_satisfies

HOSTS = list(enumerate_graphs(UNTYPED, 4, 2))
SMALL_HOSTS = list(enumerate_graphs(UNTYPED, 3, 2))


def every_morphism(p, hosts=HOSTS):
    for h in hosts:
        yield from enumerate_morphisms(p, h)


# -- construction -----------------------------------------------------------

def test_exists_child_must_live_over_codomain():
    with pytest.raises(ContextMismatch):
        Exists(M(ONE, TWO, [0]), CTrue(ONE))


def test_and_children_share_context():
    with pytest.raises(ContextMismatch):
        And(ONE, [CTrue(TWO)])


def test_nac_conjunction_rejects_iso():
    with pytest.raises(ValueError):
        NacConjunction(ONE, (Morphism.identity(ONE),))
    with pytest.raises(ValueError):
        NacConjunction(TWO, (M(TWO, ONE, [0, 0]),))


def test_nac_conjunction_round_trip():
    nc = NacConjunction(ONE, (M(ONE, TWO, [0]), M(ONE, LOOP, [0])))
    assert NacConjunction.from_condition(nc.to_condition()) == nc
    assert NacConjunction.from_condition(exists(M(ONE, TWO, [0]))) is None


def test_sugar():
    c = exists(M(ONE, LOOP, [0]))
    assert is_true(true(ONE)) and is_false(false(ONE))
    assert isinstance(neg(c), Not)
    assert isinstance(forall(M(ONE, LOOP, [0]), true(LOOP)), Not)
    assert is_true(conj(ONE, []))
    assert is_false(disj(ONE, []))


# -- satisfaction -----------------------------------------------------------

def test_true_always_satisfied():
    for m in every_morphism(ONE, SMALL_HOSTS):
        assert satisfies(m, true(ONE))


def test_running_example_nac():
    rule = p2()
    # two nodes present: the NAC does not fire
    assert satisfies(M(ONE, TWO, [0]), rule.ac)
    # after p1 adds a node there are three
    h1 = G(3, [(0, 1)])
    assert not satisfies(M(ONE, h1, [0]), rule.ac)


def test_non_injective_extension_into_small_graph():
    c = exists(M(TWO, ONE, [0, 0]))
    # q must be injective with q∘a = p; into a 2-node graph via an injective p none exists
    assert not satisfies(M(TWO, TWO, [0, 1]), c)
    assert satisfies(M(TWO, TWO, [1, 1]), c)


def test_satisfaction_context_mismatch():
    with pytest.raises(ContextMismatch):
        satisfies(Morphism.identity(TWO), true(ONE))


def test_satisfaction_matches_reference():
    rng = random.Random(7)
    for _ in range(40):
        p = rng.choice([EMPTY, ONE, TWO, EDGE])
        c = random_condition(rng, p, 2)
        for m in every_morphism(p, SMALL_HOSTS):
            assert satisfies(m, c) == brute_satisfies(m, c)


def test_and_not_are_boolean():
    a = exists(M(ONE, LOOP, [0]))
    b = exists(M(ONE, EDGE, [0]))
    for m in every_morphism(ONE, SMALL_HOSTS):
        assert satisfies(m, And(ONE, [a, b])) == (satisfies(m, a) and satisfies(m, b))
        assert satisfies(m, Not(a)) == (not satisfies(m, a))


# -- shift ------------------------------------------------------------------

def test_shift_identity_is_equivalent():
    rng = random.Random(3)
    for _ in range(10):
        c = random_condition(rng, ONE, 2)
        assert isinstance(bounded_equivalent(shift(Morphism.identity(ONE), c), c, Bounds(3, 2)), Equivalent)


def test_shift_over_empty_identity():
    c = exists(Morphism.initial(ONE))
    s = shift(Morphism.identity(EMPTY), c)
    assert isinstance(bounded_equivalent(s, c, Bounds(3, 2)), Equivalent)


def test_shift_running_example_nac_over_coproduct():
    k, i1, i2 = coproduct(ONE, ONE)
    s = shift(i2, p2().ac)
    want = conj(k, [nac(M(k, THREE, [0, 1])), nac(M(k, THREE, [0, 0]))])
    assert isinstance(bounded_equivalent(s, want, Bounds(4, 2)), Equivalent)


def test_shift_sound_on_sample():
    bad = []
    for b, c in shift_instances(15, seed=11):
        s = shift(b, c)
        for n in every_morphism(b.cod):
            if satisfies(compose(b, n), c) != satisfies(n, s):
                bad.append((b, c, n))
                break
    assert bad == []


def test_shift_composition():
    rng = random.Random(5)
    for _ in range(8):
        c = random_condition(rng, ONE, 2)
        b1 = M(ONE, TWO, [0])
        b2 = M(TWO, G(2, [(0, 1)]), [0, 1])
        one_step = shift(compose(b1, b2), c)
        two_steps = shift(b2, shift(b1, c))
        assert isinstance(bounded_equivalent(one_step, two_steps, Bounds(3, 2)), Equivalent)


def test_shift_context_mismatch():
    with pytest.raises(ContextMismatch):
        shift(Morphism.identity(TWO), true(ONE))


# -- left -------------------------------------------------------------------

def steps(rule, hosts=HOSTS):
    for g in hosts:
        for m in enumerate_morphisms(rule.left, g):
            if gluing_violation(rule.l, m):
                continue
            d, i, _ = pushout_complement(rule.l, m)
            h, _, m_star = pushout(rule.r, i)
            yield m, m_star


def test_left_of_true():
    assert is_true(left(p1(), true(EDGE)))


def test_left_identity_rule():
    ident = Rule("id", Morphism.identity(ONE), Morphism.identity(ONE))
    c = exists(M(ONE, LOOP, [0]))
    assert isinstance(bounded_equivalent(left(ident, c), c, Bounds(3, 2)), Equivalent)


def test_left_returns_false_when_gluing_fails():
    # a freshly created node never carries a loop (dangling for the inverse step)
    add = Rule("add", M(EMPTY, EMPTY, []), M(EMPTY, ONE, []))
    assert is_false(left(add, exists(M(ONE, LOOP, [0], []))))
    # two fresh nodes are never identified
    add2 = Rule("add2", M(EMPTY, EMPTY, []), M(EMPTY, TWO, []))
    assert is_false(left(add2, exists(M(TWO, ONE, [0, 0]))))


def test_left_context_mismatch():
    with pytest.raises(ContextMismatch):
        left(p1(), true(ONE))


def test_left_sound_on_sample():
    bad = []
    for rule, c in left_instances(15, seed=12):
        lc = left(rule, c)
        for m, m_star in steps(rule):
            if satisfies(m, lc) != satisfies(m_star, c):
                bad.append((rule, c, m))
                break
    assert bad == []


# -- normal forms and keys --------------------------------------------------

def test_normalize_examples():
    c = exists(M(ONE, LOOP, [0]))
    assert condition_key(normalize(Not(Not(c)))) == condition_key(normalize(c))
    assert condition_key(normalize(And(ONE, [true(ONE), c]))) == condition_key(normalize(c))
    assert condition_key(normalize(And(ONE, [c, c]))) == condition_key(normalize(c))
    assert is_false(normalize(And(ONE, [c, Not(c)])))


def test_normalize_preserves_meaning():
    rng = random.Random(9)
    for _ in range(40):
        p = rng.choice([ONE, TWO, EDGE])
        c = random_condition(rng, p, 2)
        for mono in (False, True):
            got = bounded_equivalent(c, normalize(c, mono), Bounds(3, 2, mono))
            assert isinstance(got, Equivalent), (to_text(c), mono)


def test_condition_key_up_to_iso():
    a = exists(M(ONE, TWO, [0]))
    b = exists(M(ONE, TWO, [1]))
    assert equal_up_to_iso(a, b)
    assert not equal_up_to_iso(a, exists(M(ONE, LOOP, [0])))


def test_literals_dnf_shape():
    a = exists(M(ONE, LOOP, [0]))
    b = exists(M(ONE, EDGE, [0]))
    dnf = literals_dnf(disj(ONE, [a, And(ONE, [b, Not(a)])]))
    assert sorted(len(c) for c in dnf) == [1, 2]


# -- bounded reasoning ------------------------------------------------------

def test_bounded_satisfiable_true():
    r = bounded_satisfiable(true(TWO))
    assert isinstance(r, Yes) and r.witness == Morphism.identity(TWO)


def test_bounded_satisfiable_iso_nac_is_no():
    assert isinstance(bounded_satisfiable(nac(Morphism.identity(ONE))), No)


def test_bounded_satisfiable_running_example():
    k, i1, i2 = coproduct(ONE, ONE)
    ac_k = conj(k, [nac(M(k, THREE, [0, 1])), nac(M(k, THREE, [0, 0]))])
    star = disj(k, [exists(M(k, TWO, [0, 0])), exists(Morphism.identity(k))])
    r = bounded_satisfiable(And(k, [ac_k, star]))
    assert isinstance(r, Yes)
    assert r.witness.cod.n_nodes == 2


def test_bounded_satisfiable_outside_fragment_is_unknown():
    # every node has an outgoing edge, and there is a node: no finite model
    # within one node and zero edges, and the fragment does not apply
    every = forall(M(EMPTY, ONE, []), exists(M(ONE, EDGE, [0])))
    c = And(EMPTY, [every, exists(M(EMPTY, ONE, []))])
    assert small_model_size(c) is None
    assert isinstance(bounded_satisfiable(c, max_nodes=1, max_edges=0), Unknown)


def test_bounded_equivalent_examples():
    c = exists(M(ONE, LOOP, [0]))
    assert isinstance(bounded_equivalent(c, normalize(c)), Equivalent)
    r = bounded_equivalent(true(ONE), nac(Morphism.identity(ONE)))
    assert isinstance(r, Inequivalent)
    with pytest.raises(ContextMismatch):
        bounded_equivalent(true(ONE), true(TWO))
