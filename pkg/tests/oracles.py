"""Brute-force reference implementations used as test oracles.

Nothing here calls the search code under test: morphisms are enumerated by
trying every total map and keeping the structure-preserving ones.
"""
import itertools

from graphconflicts.graphs import Graph, Morphism, compose
from graphconflicts.rules import AC_PRODUCE, DELETE_USE, PRODUCE_AC, USE_DELETE


def brute_morphisms(a: Graph, b: Graph, mono: bool = False):
    out = []
    for nmap in itertools.product(range(b.n_nodes), repeat=a.n_nodes):
        if any(a.node_types[v] != b.node_types[w] for v, w in enumerate(nmap)):
            continue
        if mono and len(set(nmap)) < len(nmap):
            continue
        choices = []
        for s, t, ty in a.edges:
            choices.append([x for x, (s2, t2, ty2) in enumerate(b.edges)
                            if s2 == nmap[s] and t2 == nmap[t] and ty2 == ty])
        for emap in itertools.product(*choices):
            if mono and len(set(emap)) < len(emap):
                continue
            out.append(Morphism(a, b, tuple(nmap), tuple(emap)))
    return out


def brute_isomorphic(a: Graph, b: Graph) -> bool:
    if a.size != b.size:
        return False
    return any(f.is_iso for f in brute_morphisms(a, b, mono=True))


def equal_maps(f: Morphism, g: Morphism) -> bool:
    return f.nodes == g.nodes and f.edges == g.edges and f.dom == g.dom and f.cod == g.cod


def pushout_violations(f: Morphism, g: Morphism, d: Graph, f_star: Morphism, g_star: Morphism, tests):
    """Check commutativity and the universal property against every cocone
    into each graph of ``tests``. Returns a list of problems."""
    problems = []
    if not equal_maps(compose(f, g_star), compose(g, f_star)):
        problems.append("square does not commute")
    for x in tests:
        for h_c in brute_morphisms(g.cod, x):
            for h_b in brute_morphisms(f.cod, x):
                if not equal_maps(compose(f, h_b), compose(g, h_c)):
                    continue
                mediators = [u for u in brute_morphisms(d, x)
                             if equal_maps(compose(f_star, u), h_c) and equal_maps(compose(g_star, u), h_b)]
                if len(mediators) != 1:
                    problems.append(f"{len(mediators)} mediating morphisms into {x}")
    return problems


def coproduct_violations(a: Graph, b: Graph, s: Graph, i1: Morphism, i2: Morphism, tests):
    problems = []
    for x in tests:
        for h1 in brute_morphisms(a, x):
            for h2 in brute_morphisms(b, x):
                mediators = [u for u in brute_morphisms(s, x)
                             if equal_maps(compose(i1, u), h1) and equal_maps(compose(i2, u), h2)]
                if len(mediators) != 1:
                    problems.append(f"{len(mediators)} mediating morphisms into {x}")
    return problems


def factorizations(f: Morphism, graphs):
    """Every (e surjective, m injective) with m∘e = f through a middle graph
    drawn from ``graphs`` (one per iso class)."""
    out = []
    for c in graphs:
        for e in brute_morphisms(f.dom, c):
            if not e.is_surjective:
                continue
            for m in brute_morphisms(c, f.cod, mono=True):
                if equal_maps(compose(e, m), f):
                    out.append((e, m))
    return out


def brute_satisfies(p: Morphism, cond) -> bool:
    """Reference satisfaction: ∃(a, c) holds iff some injective q with
    q∘a = p satisfies c."""
    from graphconflicts.conditions import And, CTrue, Not
    if isinstance(cond, CTrue):
        return True
    if isinstance(cond, Not):
        return not brute_satisfies(p, cond.child)
    if isinstance(cond, And):
        return all(brute_satisfies(p, c) for c in cond.children)
    a = cond.morphism
    return any(equal_maps(compose(a, q), p) and brute_satisfies(q, cond.child)
               for q in brute_morphisms(a.cod, p.cod, mono=True))


def report_invariants(rep):
    """Violated invariants of an independence report, by name."""
    problems = []
    if rep.parallel_independent != (not rep.classes):
        problems.append("independence flag")
    if (USE_DELETE in rep.classes) != (rep.d12 is None):
        problems.append("use-delete")
    if (DELETE_USE in rep.classes) != (rep.d21 is None):
        problems.append("delete-use")
    if (AC_PRODUCE in rep.classes) != (rep.d12 is not None and rep.d12_ac_ok is False):
        problems.append("ac-produce")
    if (PRODUCE_AC in rep.classes) != (rep.d21 is not None and rep.d21_ac_ok is False):
        problems.append("produce-ac")
    if {USE_DELETE, AC_PRODUCE} <= rep.classes or {DELETE_USE, PRODUCE_AC} <= rep.classes:
        problems.append("exclusive classes together")
    return problems
