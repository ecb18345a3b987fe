from graphconflicts.conditions import Bounds, bounded_equivalent, Equivalent
from graphconflicts.conflicts import build_symbolic_pair, compute_initial_conflicts
from graphconflicts.graphs import are_isomorphic, enumerate_quotients
from graphconflicts.rules import PRODUCE_AC, TransformationPair, check_parallel_independence, pair_isomorphism
from graphconflicts.unfolding import (
    NotEstablished, Regular, check_regular, disjunctive_unfolding, nac_critical_pair_predicate,
    unfold_literal,
)

from corpus import (
    NAC_PAIRS, ONE, TWO, M, add_edge, build, delete_edge, delete_edge_target, delete_node, keep_node_forall, p1, p2,
)

B = Bounds(3, 2)


def only_conflict(r1, r2, bounds=B):
    res = compute_initial_conflicts(r1, r2, bounds)
    assert len(res) == 1
    return res.conflicts[0]


def test_running_example_is_regular():
    ic = only_conflict(p1(), p2(), Bounds(3, 3))
    reg = check_regular(ic, Bounds(4, 2))
    assert isinstance(reg, Regular)
    assert len(reg.form.literals) == 2
    assert isinstance(reg.form.check, Equivalent)


def test_running_example_unfolding():
    ic = only_conflict(p1(), p2(), Bounds(3, 3))
    pairs = disjunctive_unfolding(ic, check_regular(ic, Bounds(4, 2)).form)
    assert len(pairs) == 2
    shared = TransformationPair.build(p1(), M(ONE, TWO, [0]), p2(), M(ONE, TWO, [0]))
    assert any(pair_isomorphism(tp, shared) is not None for tp in pairs)
    for tp in pairs:
        assert tp.ac_respected
        assert check_parallel_independence(tp).classes == {PRODUCE_AC}
        v = nac_critical_pair_predicate(tp)
        assert v.holds and v.case == "2b"


def test_plain_conflict_under_injective_matches_is_a_singleton():
    r1, r2 = build((delete_edge_target, delete_edge))
    ic = only_conflict(r1, r2, Bounds(3, 2, mono=True))
    reg = check_regular(ic, Bounds(3, 2, mono=True))
    assert isinstance(reg, Regular)
    # folding the edge into a loop leaves the injective matches
    (lit,) = [lit for lit in reg.form.literals if lit.gluing_ok]
    assert lit.a.is_iso and lit.remainder.nacs == ()
    assert len(disjunctive_unfolding(ic, reg.form)) == 1


def test_plain_conflict_under_arbitrary_matches_lists_quotients():
    r1, r2 = build((delete_edge_target, delete_edge))
    ic = only_conflict(r1, r2)
    reg = check_regular(ic, B)
    assert isinstance(reg, Regular)
    assert len(reg.form.literals) == len(list(enumerate_quotients(ic.K)))
    for tp in disjunctive_unfolding(ic, reg.form):
        assert not check_parallel_independence(tp).parallel_independent


def test_nested_conditions_are_not_established():
    r1, r2 = build((keep_node_forall, add_edge))
    res = compute_initial_conflicts(r1, r2, B)
    assert res.conflicts
    for ic in res.conflicts:
        reg = check_regular(ic, B)
        assert isinstance(reg, NotEstablished) and reg.reason


def test_nac_corpus_unfolds_to_conflicts_only():
    regular = 0
    for pair in NAC_PAIRS:
        r1, r2 = build(pair)
        for ic in compute_initial_conflicts(r1, r2, B).conflicts:
            reg = check_regular(ic, B)
            if not isinstance(reg, Regular):
                continue
            regular += 1
            assert isinstance(bounded_equivalent(reg.form.to_condition(), ic.stp.conflict_condition, B),
                              Equivalent)
            for lit in reg.form.literals:
                tp = unfold_literal(ic.stp, lit)
                assert (tp is None) == (not lit.gluing_ok)
            for tp in disjunctive_unfolding(ic, reg.form):
                assert not check_parallel_independence(tp).parallel_independent
    assert regular >= len(NAC_PAIRS)


def test_nac_predicate_use_delete_case():
    d1, d2 = build((delete_node, delete_node))
    tp = TransformationPair.build(d1, M(ONE, ONE, [0]), d2, M(ONE, ONE, [0]))
    assert nac_critical_pair_predicate(tp).case == "1a"


def test_nac_predicate_padded_graph():
    # the extra node keeps the matches from covering the graph
    d1, d2 = build((delete_node, delete_node))
    tp = TransformationPair.build(d1, M(ONE, TWO, [0]), d2, M(ONE, TWO, [0]))
    v = nac_critical_pair_predicate(tp)
    assert not v.holds and v.case == "none"
    tp = TransformationPair.build(p1(), M(ONE, ONE, [0]), p2(), M(ONE, ONE, [0]))
    assert nac_critical_pair_predicate(tp).case == "none"


def test_stp_and_ic_are_interchangeable():
    ic = only_conflict(p1(), p2(), Bounds(3, 3))
    a = check_regular(ic, Bounds(4, 2))
    b = check_regular(build_symbolic_pair(ic.stp.tp), Bounds(4, 2))
    assert [l.a for l in a.form.literals] == [l.a for l in b.form.literals]
    assert are_isomorphic(a.form.literals[0].C, b.form.literals[0].C)


def test_literal_failing_gluing_yields_no_pair():
    # folding the edge into a loop identifies the deleted target with the kept source
    r1, r2 = build((delete_edge_target, delete_edge))
    ic = only_conflict(r1, r2)
    form = check_regular(ic, B).form
    bad = [lit for lit in form.literals if not lit.gluing_ok]
    assert len(bad) == 1 and bad[0].C.n_nodes == 1
    assert unfold_literal(ic.stp, bad[0]) is None
    assert len(disjunctive_unfolding(ic, form)) == len(form.literals) - 1
