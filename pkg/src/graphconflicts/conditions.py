"""Nested application conditions over typed graphs.

A condition lives over a context graph ``P`` and is built from ``CTrue``,
``Exists(a, child)``, ``Not`` and ``And``. Satisfaction by a morphism
``p: P -> G`` quantifies the witnesses ``q`` over injective morphisms only;
``p`` itself may be arbitrary.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Optional, Sequence, Union

from .graphs import (
    Graph, Morphism, compose, coproduct, enumerate_graphs, enumerate_morphisms,
    enumerate_quotients, iter_morphisms, pushout, pushout_complement,
    gluing_violation, _refined_cells,
)


class ContextMismatch(ValueError):
    pass


class Condition:
    """Base class; subclasses are immutable and hashable."""

    __slots__ = ()

    @property
    def context(self) -> Graph:
        raise NotImplementedError

    def __and__(self, other):
        return conj(self.context, [self, other])

    def __or__(self, other):
        return disj(self.context, [self, other])

    def __invert__(self):
        return Not(self)

    def __repr__(self):
        return to_text(self)


class CTrue(Condition):
    __slots__ = ("_context", "_hash")

    def __init__(self, context: Graph):
        self._context = context
        self._hash = hash(("T", context))

    @property
    def context(self):
        return self._context

    def __eq__(self, other):
        return isinstance(other, CTrue) and other._context == self._context

    def __hash__(self):
        return self._hash


class Exists(Condition):
    __slots__ = ("morphism", "child", "_hash")

    def __init__(self, morphism: Morphism, child: Optional[Condition] = None):
        if child is None:
            child = CTrue(morphism.cod)
        if child.context != morphism.cod:
            raise ContextMismatch("child condition must live over the codomain of the morphism")
        self.morphism = morphism
        self.child = child
        self._hash = hash(("E", morphism, child))

    @property
    def context(self):
        return self.morphism.dom

    def __eq__(self, other):
        return (isinstance(other, Exists) and other._hash == self._hash
                and other.morphism == self.morphism and other.child == self.child)

    def __hash__(self):
        return self._hash


class Not(Condition):
    __slots__ = ("child", "_hash")

    def __init__(self, child: Condition):
        self.child = child
        self._hash = hash(("N", child))

    @property
    def context(self):
        return self.child.context

    def __eq__(self, other):
        return isinstance(other, Not) and other._hash == self._hash and other.child == self.child

    def __hash__(self):
        return self._hash


class And(Condition):
    __slots__ = ("_context", "children", "_hash")

    def __init__(self, context: Graph, children: Sequence[Condition]):
        children = tuple(children)
        for c in children:
            if c.context != context:
                raise ContextMismatch("conjuncts must share the context")
        self._context = context
        self.children = children
        self._hash = hash(("A", context, children))

    @property
    def context(self):
        return self._context

    def __eq__(self, other):
        return (isinstance(other, And) and other._hash == self._hash
                and other._context == self._context and other.children == self.children)

    def __hash__(self):
        return self._hash


# -- sugar ------------------------------------------------------------------

def true(context: Graph) -> Condition:
    return CTrue(context)


def false(context: Graph) -> Condition:
    return Not(CTrue(context))


def exists(a: Morphism, child: Optional[Condition] = None) -> Condition:
    return Exists(a, child)


def neg(c: Condition) -> Condition:
    return Not(c)


def conj(context: Graph, parts: Sequence[Condition]) -> Condition:
    parts = list(parts)
    if not parts:
        return CTrue(context)
    if len(parts) == 1:
        return parts[0]
    return And(context, parts)


def disj(context: Graph, parts: Sequence[Condition]) -> Condition:
    parts = list(parts)
    if not parts:
        return false(context)
    if len(parts) == 1:
        return parts[0]
    return Not(And(context, [Not(p) for p in parts]))


def forall(a: Morphism, child: Condition) -> Condition:
    return Not(Exists(a, Not(child)))


def nac(a: Morphism) -> Condition:
    return Not(Exists(a))


def is_true(c: Condition) -> bool:
    return isinstance(c, CTrue)


def is_false(c: Condition) -> bool:
    return isinstance(c, Not) and isinstance(c.child, CTrue)


@dataclass(frozen=True)
class NacConjunction:
    """``∧_j ¬∃ n_j`` with injective, non-isomorphic ``n_j``."""

    context: Graph
    nacs: tuple[Morphism, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "nacs", tuple(self.nacs))
        for n in self.nacs:
            if n.dom != self.context:
                raise ContextMismatch("NAC morphism must start at the context")
            if not n.is_injective:
                raise ValueError("NAC morphisms must be injective")
            if n.is_surjective:
                raise ValueError("an isomorphic NAC is unsatisfiable")

    def to_condition(self) -> Condition:
        return conj(self.context, [nac(n) for n in self.nacs])

    @classmethod
    def from_condition(cls, c: Condition) -> Optional["NacConjunction"]:
        """Read a condition of shape ``∧ ¬∃ n_j`` back, or return None."""
        parts = c.children if isinstance(c, And) else ((c,) if not is_true(c) else ())
        nacs = []
        for p in parts:
            if not (isinstance(p, Not) and isinstance(p.child, Exists) and is_true(p.child.child)):
                return None
            n = p.child.morphism
            if not n.is_injective or n.is_surjective:
                return None
            nacs.append(n)
        return cls(c.context, tuple(nacs))


# -- satisfaction -----------------------------------------------------------

def witnesses(p: Morphism, a: Morphism) -> Iterator[Morphism]:
    """Injective ``q: C -> G`` with ``q ∘ a = p``."""
    fixed_n: dict[int, int] = {}
    for v, w in enumerate(a.nodes):
        if fixed_n.setdefault(w, p.nodes[v]) != p.nodes[v]:
            return
    fixed_e: dict[int, int] = {}
    for e, f in enumerate(a.edges):
        if fixed_e.setdefault(f, p.edges[e]) != p.edges[e]:
            return
    yield from iter_morphisms(a.cod, p.cod, mono=True, fixed_nodes=fixed_n, fixed_edges=fixed_e)


def satisfies(p: Morphism, cond: Condition) -> bool:
    if p.dom != cond.context:
        raise ContextMismatch("morphism domain differs from the condition context")
    return _sat(p, cond)


def _sat(p: Morphism, cond: Condition) -> bool:
    if isinstance(cond, CTrue):
        return True
    if isinstance(cond, Not):
        return not _sat(p, cond.child)
    if isinstance(cond, And):
        return all(_sat(p, c) for c in cond.children)
    if isinstance(cond, Exists):
        child = cond.child
        for q in witnesses(p, cond.morphism):
            if _sat(q, child):
                return True
        return False
    raise TypeError(f"not a condition: {cond!r}")


# -- Shift and Left ---------------------------------------------------------

def shift(b: Morphism, cond: Condition) -> Condition:
    """Move ``cond`` over ``P`` along ``b: P -> P'``.

    For every ``n: P' -> H``: ``n ∘ b`` satisfies ``cond`` iff ``n``
    satisfies the result.
    """
    if b.dom != cond.context:
        raise ContextMismatch("shift morphism must start at the condition context")
    return _shift(b, cond)


@lru_cache(maxsize=None)
def _shift(b: Morphism, cond: Condition) -> Condition:
    if isinstance(cond, CTrue):
        return CTrue(b.cod)
    if isinstance(cond, Not):
        return Not(_shift(b, cond.child))
    if isinstance(cond, And):
        return And(b.cod, [_shift(b, c) for c in cond.children])
    a = cond.morphism
    s, i1, i2 = coproduct(b.cod, a.cod)
    p = b.dom
    npairs = [(i1.nodes[b.nodes[x]], i2.nodes[a.nodes[x]]) for x in range(p.n_nodes)]
    epairs = [(i1.edges[b.edges[x]], i2.edges[a.edges[x]]) for x in range(p.n_edges)]
    ng = [None] * b.cod.n_nodes + [1] * a.cod.n_nodes
    eg = [None] * b.cod.n_edges + [1] * a.cod.n_edges
    out = []
    for q in enumerate_quotients(s, npairs, epairs, ng, eg):
        a2 = compose(i1, q)
        b2 = compose(i2, q)
        out.append(Exists(a2, _shift(b2, cond.child)))
    return disj(b.cod, out)


def left(rule, cond: Condition) -> Condition:
    """Translate a condition over the right-hand side of ``rule`` to its
    left-hand side: for every step with match ``m`` and comatch ``m*``,
    ``m`` satisfies the result iff ``m*`` satisfies ``cond``.

    ``rule`` is anything with injective ``l: I -> L`` and ``r: I -> R``.
    """
    l, r = rule.l, rule.r
    if cond.context != r.cod:
        raise ContextMismatch("condition must live over the right-hand side")
    return left_span(l, r, cond)


@lru_cache(maxsize=None)
def left_span(l: Morphism, r: Morphism, cond: Condition) -> Condition:
    if isinstance(cond, CTrue):
        return CTrue(l.cod)
    if isinstance(cond, Not):
        return Not(left_span(l, r, cond.child))
    if isinstance(cond, And):
        return And(l.cod, [left_span(l, r, c) for c in cond.children])
    a = cond.morphism
    if gluing_violation(r, a) is not None:
        return false(l.cod)
    d, i, d_to_c = pushout_complement(r, a)
    c2, l2, a_star = pushout(l, i)
    return Exists(a_star, left_span(l2, d_to_c, cond.child))


# -- canonical keys ---------------------------------------------------------

def transport(c: Condition, iso: Morphism) -> Condition:
    """Rename the context of ``c`` along an isomorphism."""
    if isinstance(c, CTrue):
        return CTrue(iso.cod)
    if isinstance(c, Not):
        return Not(transport(c.child, iso))
    if isinstance(c, And):
        return And(iso.cod, [transport(x, iso) for x in c.children])
    return Exists(compose(iso.inverse(), c.morphism), c.child)


def _relabelings(g: Graph, anchors: Sequence[tuple]) -> Iterator[Morphism]:
    """Isomorphisms from ``g`` onto relabeled copies, covering every labeling
    that respects the given per-node anchor invariants. Equal keys then
    come out of ``min`` over these."""
    cells = {}
    refined = _refined_cells(g)
    colour = {}
    for i, cell in enumerate(refined):
        for v in cell:
            colour[v] = i
    for v in range(g.n_nodes):
        cells.setdefault((anchors[v], g.node_types[v], colour[v]), []).append(v)
    ordered = [cells[k] for k in sorted(cells)]
    for perms in itertools.product(*(itertools.permutations(c) for c in ordered)):
        order = list(itertools.chain.from_iterable(perms))
        pos = [0] * g.n_nodes
        for i, v in enumerate(order):
            pos[v] = i
        groups: dict[tuple, list[int]] = {}
        for e, (s, t, ty) in enumerate(g.edges):
            groups.setdefault((pos[s], pos[t], ty), []).append(e)
        keys = sorted(groups)
        for eperms in itertools.product(*(itertools.permutations(groups[k]) for k in keys)):
            eorder = list(itertools.chain.from_iterable(eperms))
            epos = [0] * g.n_edges
            for i, e in enumerate(eorder):
                epos[e] = i
            new_edges = tuple((pos[g.edges[e][0]], pos[g.edges[e][1]], g.edges[e][2]) for e in eorder)
            h = Graph(g.type_graph, tuple(g.node_types[v] for v in order), new_edges)
            yield Morphism(g, h, tuple(pos), tuple(epos))


@lru_cache(maxsize=None)
def condition_key(c: Condition) -> tuple:
    """Key that is equal for conditions that agree up to renaming the
    codomains of their nested morphisms (the context itself stays fixed)."""
    if isinstance(c, CTrue):
        return ("T",)
    if isinstance(c, Not):
        return ("N", condition_key(c.child))
    if isinstance(c, And):
        return ("A", tuple(sorted(condition_key(x) for x in c.children)))
    a = c.morphism
    cod = a.cod
    pre: list[list[int]] = [[] for _ in range(cod.n_nodes)]
    for v, w in enumerate(a.nodes):
        pre[w].append(v)
    epre: dict[int, list[int]] = {}
    for e, f in enumerate(a.edges):
        epre.setdefault(f, []).append(e)
    anchors = [tuple(x) if x else (10 ** 6,) for x in pre]
    best = None
    for iso in _relabelings(cod, anchors):
        a2 = compose(a, iso)
        enc = ("E", iso.cod.node_types, iso.cod.edges, a2.nodes, a2.edges,
               condition_key(transport(c.child, iso)))
        if best is None or enc < best:
            best = enc
    return best


def equal_up_to_iso(c1: Condition, c2: Condition) -> bool:
    return c1.context == c2.context and condition_key(c1) == condition_key(c2)


# -- normalization ----------------------------------------------------------

def _implies_plain(a1: Morphism, a2: Morphism) -> bool:
    """``∃(a1, anything)`` implies ``∃(a2, True)``: some injective ``h`` with
    ``h ∘ a2 = a1``."""
    if a2.cod.n_nodes > a1.cod.n_nodes or a2.cod.n_edges > a1.cod.n_edges:
        return False
    return next(witnesses(a1, a2), None) is not None


def normalize(cond: Condition, mono: bool = False) -> Condition:
    """Logically equivalent simplification.

    Flattens conjunctions, removes double negation, prunes True/False,
    drops duplicates (up to iso) and literals subsumed by another literal of
    the same conjunction. With ``mono`` the result is only claimed equivalent
    for injective morphisms ``p``.
    """
    return _normalize(cond, mono)


@lru_cache(maxsize=None)
def _normalize(cond: Condition, mono: bool) -> Condition:
    ctx = cond.context
    if isinstance(cond, CTrue):
        return cond
    if isinstance(cond, Not):
        inner = _normalize(cond.child, mono)
        if isinstance(inner, Not):
            return inner.child
        return Not(inner)
    if isinstance(cond, Exists):
        a = cond.morphism
        child = _normalize(cond.child, True)  # witnesses are always injective
        if is_false(child):
            return false(ctx)
        if mono and not a.is_injective:
            return false(ctx)
        if mono and a.is_iso:
            return _normalize(transport(child, a.inverse()), mono)
        return Exists(a, child)
    parts: list[Condition] = []
    stack = list(cond.children)
    while stack:
        x = _normalize(stack.pop(0), mono)
        if isinstance(x, And):
            stack[:0] = list(x.children)
            continue
        if is_true(x):
            continue
        if is_false(x):
            return false(ctx)
        parts.append(x)
    seen = {}
    for x in parts:
        seen.setdefault(condition_key(x), x)
    keys = set(seen)
    for k in keys:
        if ("N", k) in keys:
            return false(ctx)
    parts = [seen[k] for k in sorted(seen)]
    parts = _drop_subsumed(parts)
    return conj(ctx, parts)


def _drop_subsumed(parts: list[Condition]) -> list[Condition]:
    out = list(parts)
    changed = True
    while changed:
        changed = False
        for i, x in enumerate(out):
            others = out[:i] + out[i + 1:]
            if _redundant(x, others):
                out = others
                changed = True
                break
    return out


def _redundant(x: Condition, others: list[Condition]) -> bool:
    if isinstance(x, Exists) and is_true(x.child):
        # ∃(a2) is implied by any ∃(a1, c) with a1 factoring through a2
        return any(isinstance(y, Exists) and _implies_plain(y.morphism, x.morphism) for y in others)
    if isinstance(x, Not) and isinstance(x.child, Exists):
        # ¬∃(a1, c) is implied by ¬∃(a2) when a1 factors through a2
        a1 = x.child.morphism
        return any(isinstance(y, Not) and isinstance(y.child, Exists) and is_true(y.child.child)
                   and _implies_plain(a1, y.child.morphism) for y in others)
    return False


# -- DNF over literals ------------------------------------------------------

def literals_dnf(cond: Condition, limit: int = 256) -> Optional[list[list[Condition]]]:
    """Disjunctive normal form whose atoms are ``Exists`` or ``Not(Exists)``.

    Returns a list of conjunctions (lists of literals); ``[]`` is False and
    ``[[]]`` is True. None when the form would exceed ``limit`` conjuncts.
    """
    try:
        return _dnf(cond, True, limit)
    except _TooBig:
        return None


class _TooBig(Exception):
    pass


def _dnf(c: Condition, positive: bool, limit: int):
    if isinstance(c, CTrue):
        return [[]] if positive else []
    if isinstance(c, Not):
        return _dnf(c.child, not positive, limit)
    if isinstance(c, Exists):
        return [[c if positive else Not(c)]]
    if positive:
        acc = [[]]
        for ch in c.children:
            sub = _dnf(ch, True, limit)
            acc = [x + y for x in acc for y in sub]
            if len(acc) > limit:
                raise _TooBig
        return acc
    out = []
    for ch in c.children:
        out.extend(_dnf(ch, False, limit))
        if len(out) > limit:
            raise _TooBig
    return out


# -- bounded reasoning ------------------------------------------------------

@dataclass(frozen=True)
class Bounds:
    max_nodes: int = 3
    max_edges: int = 3
    mono: bool = False

    @property
    def restrict(self) -> str:
        return "mono" if self.mono else "all"

    def describe(self) -> str:
        return f"graphs with at most {self.max_nodes} nodes and {self.max_edges} edges, {self.restrict} morphisms"


@dataclass(frozen=True)
class Yes:
    witness: Morphism


@dataclass(frozen=True)
class No:
    reason: str = ""


@dataclass(frozen=True)
class Unknown:
    bounds: Optional[Bounds] = None


SatResult = Union[Yes, No, Unknown]


@dataclass(frozen=True)
class Equivalent:
    bounds: Bounds


@dataclass(frozen=True)
class Inequivalent:
    counterexample: Morphism


EquivResult = Union[Equivalent, Inequivalent, Unknown]


def iter_universe(p: Graph, bounds: Bounds) -> Iterator[Morphism]:
    """Every morphism from ``p`` into every graph within ``bounds`` (one graph
    per iso class)."""
    restrict = bounds.restrict
    for g in enumerate_graphs(p.type_graph, bounds.max_nodes, bounds.max_edges):
        yield from enumerate_morphisms(p, g, restrict)


def small_model_size(cond: Condition, mono: bool = False) -> Optional[tuple[int, int]]:
    """Size bound below which any model can be shrunk, when ``cond`` is in
    the fragment where this holds; otherwise None.

    The fragment: a disjunction of conjunctions of positive literals
    ``∃(a, ∧ ¬∃ n)`` and negative literals ``¬∃(n)``. A model restricted to
    the union of the witnesses of the positive literals still satisfies
    the conjunction.
    """
    dnf = literals_dnf(normalize(cond, mono))
    if dnf is None:
        return None
    p = cond.context
    worst = (0, 0)
    for conjunct in dnf:
        nn, ne, positives = 0, 0, 0
        for lit in conjunct:
            if isinstance(lit, Exists):
                if _nac_morphisms(lit.child) is None:
                    return None
                positives += 1
                nn += lit.morphism.cod.n_nodes
                ne += lit.morphism.cod.n_edges
            else:
                if not is_true(lit.child.child):
                    return None
        if positives == 0:
            nn, ne = p.n_nodes, p.n_edges
        worst = (max(worst[0], nn), max(worst[1], ne))
    return worst


def _nac_morphisms(c: Condition) -> Optional[list[Morphism]]:
    """The NAC morphisms if ``c`` is a conjunction of plain NACs (any
    morphisms), else None."""
    parts = c.children if isinstance(c, And) else ((c,) if not is_true(c) else ())
    out = []
    for p in parts:
        if not (isinstance(p, Not) and isinstance(p.child, Exists) and is_true(p.child.child)):
            return None
        out.append(p.child.morphism)
    return out


def bounded_satisfiable(cond: Condition, restrict: str = "all", max_nodes: int = 3,
                        max_edges: int = 3) -> SatResult:
    bounds = Bounds(max_nodes, max_edges, restrict == "mono")
    p = cond.context
    if is_true(cond):
        return Yes(Morphism.identity(p))
    for m in iter_universe(p, bounds):
        if _sat(m, cond):
            return Yes(m)
    size = small_model_size(cond, bounds.mono)
    if size is not None and size[0] <= max_nodes and size[1] <= max_edges:
        return No(f"no model within {bounds.describe()}; every model shrinks to "
                  f"{size[0]} nodes and {size[1]} edges")
    return Unknown(bounds)


def bounded_equivalent(c1: Condition, c2: Condition, bounds: Bounds = Bounds()) -> EquivResult:
    if c1.context != c2.context:
        raise ContextMismatch("conditions over different contexts")
    for m in iter_universe(c1.context, bounds):
        if _sat(m, c1) != _sat(m, c2):
            return Inequivalent(m)
    return Equivalent(bounds)


# -- display ----------------------------------------------------------------

def _graph_text(g: Graph) -> str:
    return repr(g)


def to_text(c: Condition) -> str:
    if isinstance(c, CTrue):
        return "true"
    if is_false(c):
        return "false"
    if isinstance(c, Not):
        return "¬" + to_text(c.child)
    if isinstance(c, And):
        return "(" + " ∧ ".join(to_text(x) for x in c.children) + ")"
    a = c.morphism
    body = f"∃({list(a.nodes)}/{list(a.edges)} → {_graph_text(a.cod)}"
    if not is_true(c.child):
        body += ", " + to_text(c.child)
    return body + ")"


def depth(c: Condition) -> int:
    if isinstance(c, CTrue):
        return 0
    if isinstance(c, Not):
        return depth(c.child)
    if isinstance(c, And):
        return max((depth(x) for x in c.children), default=0)
    return 1 + depth(c.child)


def size(c: Condition) -> int:
    if isinstance(c, CTrue):
        return 1
    if isinstance(c, Not):
        return 1 + size(c.child)
    if isinstance(c, And):
        return 1 + sum(size(x) for x in c.children)
    return 1 + size(c.child)
