"""Rules with left application conditions, DPO steps and parallel independence."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .conditions import CTrue, Condition, is_true, normalize, satisfies
from .graphs import (
    Graph, GluingViolation, Morphism, compose, gluing_violation, iter_morphisms,
    lift_through_mono, mediate, pushout, pushout_complement,
)

USE_DELETE = "UseDelete"
DELETE_USE = "DeleteUse"
PRODUCE_AC = "ProduceAC"
AC_PRODUCE = "ACProduce"
CONFLICT_CLASSES = (USE_DELETE, DELETE_USE, PRODUCE_AC, AC_PRODUCE)


class ACViolation(Exception):
    """The match does not satisfy the rule's application condition."""


@dataclass(frozen=True, eq=False)
class Rule:
    """A span ``L <-l- I -r-> R`` of injective morphisms with a condition over L."""

    name: str
    l: Morphism
    r: Morphism
    ac: Optional[Condition] = None

    def __post_init__(self):
        if self.l.dom != self.r.dom:
            raise ValueError(f"rule {self.name}: legs do not share the interface")
        if not (self.l.is_injective and self.r.is_injective):
            raise ValueError(f"rule {self.name}: legs must be injective")
        if self.ac is None:
            object.__setattr__(self, "ac", CTrue(self.l.cod))
        if self.ac.context != self.l.cod:
            raise ValueError(f"rule {self.name}: condition must live over the left-hand side")

    @property
    def left(self) -> Graph:
        return self.l.cod

    @property
    def interface(self) -> Graph:
        return self.l.dom

    @property
    def right(self) -> Graph:
        return self.r.cod

    @property
    def is_plain(self) -> bool:
        return is_true(normalize(self.ac))

    def plain(self) -> "Rule":
        return Rule(self.name, self.l, self.r)

    def inverse(self) -> "Rule":
        return Rule(self.name + "^-1", self.r, self.l)

    def deleted(self) -> tuple[set[int], set[int]]:
        """Nodes and edges of L outside the interface."""
        return (set(range(self.left.n_nodes)) - set(self.l.nodes),
                set(range(self.left.n_edges)) - set(self.l.edges))

    def created(self) -> tuple[set[int], set[int]]:
        return (set(range(self.right.n_nodes)) - set(self.r.nodes),
                set(range(self.right.n_edges)) - set(self.r.edges))

    def _key(self):
        return (self.name, self.l, self.r, self.ac)

    def __eq__(self, other):
        return isinstance(other, Rule) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        return f"Rule({self.name!r})"

    @classmethod
    def from_inclusions(cls, name: str, left: Graph, right: Graph, interface: Graph,
                        l_nodes, l_edges=(), r_nodes=None, r_edges=None, ac=None) -> "Rule":
        """Build a rule from explicit interface maps."""
        l = Morphism(interface, left, tuple(l_nodes), tuple(l_edges))
        r = Morphism(interface, right,
                     tuple(r_nodes if r_nodes is not None else l_nodes),
                     tuple(r_edges if r_edges is not None else l_edges))
        return cls(name, l, r, ac)


@dataclass(frozen=True)
class Match:
    morphism: Morphism
    gluing_ok: bool
    ac_ok: bool


def find_matches(rule: Rule, g: Graph, respect_ac: bool = False, restrict: str = "all") -> list[Match]:
    out = []
    for m in iter_morphisms(rule.left, g, mono=restrict == "mono"):
        glue = gluing_violation(rule.l, m) is None
        ok = satisfies(m, rule.ac)
        if respect_ac and not ok:
            continue
        out.append(Match(m, glue, ok))
    return out


@dataclass(frozen=True)
class DirectTransformation:
    """``G <-d_left- D -d_right-> H`` with match ``L -> G`` and comatch ``R -> H``."""

    rule: Rule
    match: Morphism
    comatch: Morphism
    i: Morphism
    d_left: Morphism
    d_right: Morphism
    ac_respected: bool

    @property
    def source(self) -> Graph:
        return self.match.cod

    @property
    def target(self) -> Graph:
        return self.comatch.cod

    @property
    def context(self) -> Graph:
        return self.i.cod


def apply(rule: Rule, m: Morphism, disregard_ac: bool = False) -> DirectTransformation:
    if m.dom != rule.left:
        raise ValueError("match must start at the left-hand side")
    ok = satisfies(m, rule.ac)
    if not ok and not disregard_ac:
        raise ACViolation(f"match violates the condition of {rule.name}")
    d, i, d_left = pushout_complement(rule.l, m)
    h, d_right, comatch = pushout(rule.r, i)
    return DirectTransformation(rule, m, comatch, i, d_left, d_right, ok)


@dataclass(frozen=True)
class TransformationPair:
    t1: DirectTransformation
    t2: DirectTransformation

    def __post_init__(self):
        if self.t1.source != self.t2.source:
            raise ValueError("both steps must start at the same graph")

    @property
    def source(self) -> Graph:
        return self.t1.source

    @property
    def rules(self) -> tuple[Rule, Rule]:
        return (self.t1.rule, self.t2.rule)

    @property
    def o1(self) -> Morphism:
        return self.t1.match

    @property
    def o2(self) -> Morphism:
        return self.t2.match

    @property
    def ac_respected(self) -> bool:
        return self.t1.ac_respected and self.t2.ac_respected

    @property
    def jointly_surjective(self) -> bool:
        k = self.source
        return (len(set(self.o1.nodes) | set(self.o2.nodes)) == k.n_nodes
                and len(set(self.o1.edges) | set(self.o2.edges)) == k.n_edges)

    @classmethod
    def build(cls, rule1: Rule, o1: Morphism, rule2: Rule, o2: Morphism,
              disregard_ac: bool = True) -> "TransformationPair":
        return cls(apply(rule1, o1, disregard_ac), apply(rule2, o2, disregard_ac))


@dataclass(frozen=True)
class IndependenceReport:
    d12: Optional[Morphism]
    d21: Optional[Morphism]
    d12_ac_ok: Optional[bool]
    d21_ac_ok: Optional[bool]
    classes: frozenset = field(default_factory=frozenset)

    @property
    def parallel_independent(self) -> bool:
        return not self.classes

    @property
    def plain_conflict(self) -> bool:
        return USE_DELETE in self.classes or DELETE_USE in self.classes


def _preserved(o: Morphism, t_other: DirectTransformation) -> Optional[Morphism]:
    return lift_through_mono(o, t_other.d_left)


def check_parallel_independence(tp: TransformationPair, plain: bool = False) -> IndependenceReport:
    """Solve ``k2 ∘ d12 = o1`` and ``k1 ∘ d21 = o2`` and test the other rule's
    condition on the moved matches. ``plain`` ignores the conditions."""
    t1, t2 = tp.t1, tp.t2
    d12 = _preserved(t1.match, t2)
    d21 = _preserved(t2.match, t1)
    classes = set()
    ok12 = ok21 = None
    if d12 is None:
        classes.add(USE_DELETE)
    elif not plain:
        ok12 = satisfies(compose(d12, t2.d_right), t1.rule.ac)
        if not ok12:
            classes.add(AC_PRODUCE)
    if d21 is None:
        classes.add(DELETE_USE)
    elif not plain:
        ok21 = satisfies(compose(d21, t1.d_right), t2.rule.ac)
        if not ok21:
            classes.add(PRODUCE_AC)
    return IndependenceReport(d12, d21, ok12, ok21, frozenset(classes))


# -- extension diagrams -----------------------------------------------------

@dataclass(frozen=True)
class Extension:
    """A pair embedded into a bigger context along ``m``, with the induced
    vertical morphisms on the contexts and results of both steps."""

    small: TransformationPair
    big: TransformationPair
    m: Morphism
    d1: Morphism
    d2: Morphism
    h1: Morphism
    h2: Morphism


def _extend_step(t: DirectTransformation, m: Morphism, disregard_ac: bool):
    big = apply(t.rule, compose(t.match, m), disregard_ac=True)
    # the context of the small step must land inside the context of the big one
    d = lift_through_mono(compose(t.d_left, m), big.d_left)
    if d is None:
        gone = [("node", v) for v, w in enumerate(compose(t.d_left, m).nodes)
                if w not in set(big.d_left.nodes)]
        raise GluingViolation("boundary", gone)
    h = mediate(t.d_right, t.comatch, compose(d, big.d_right), big.comatch)
    if h is None:
        raise GluingViolation("boundary", [])
    if not disregard_ac and not big.ac_respected:
        raise ACViolation(f"extended match violates the condition of {t.rule.name}")
    return big, d, h


def embed_transformation_pair(small: TransformationPair, m: Morphism,
                              disregard_ac: bool = True) -> Extension:
    """Extend both steps of ``small`` along ``m: K -> G``.

    Raises :class:`GluingViolation` when a composite match violates the
    gluing condition, or with kind ``"boundary"`` when ``m`` maps part of an
    upper context onto something the lower step deletes (no extension
    diagram exists then).
    """
    if m.dom != small.source:
        raise ValueError("extension morphism must start at the pair's source")
    for t in (small.t1, small.t2):
        bad = gluing_violation(t.rule.l, compose(t.match, m))
        if bad is not None:
            raise bad
    b1, d1, h1 = _extend_step(small.t1, m, disregard_ac)
    b2, d2, h2 = _extend_step(small.t2, m, disregard_ac)
    return Extension(small, TransformationPair(b1, b2), m, d1, d2, h1, h2)


def try_embed(small: TransformationPair, m: Morphism) -> Optional[Extension]:
    try:
        return embed_transformation_pair(small, m)
    except GluingViolation:
        return None


def pair_isomorphism(a: TransformationPair, b: TransformationPair) -> Optional[Morphism]:
    """An iso of sources commuting with both matches (same rules required)."""
    if a.rules != b.rules:
        return None
    ka, kb = a.source, b.source
    if ka.size != kb.size:
        return None
    fixed_n: dict[int, int] = {}
    fixed_e: dict[int, int] = {}
    for x, y in ((a.o1, b.o1), (a.o2, b.o2)):
        for v, w in zip(x.nodes, y.nodes):
            if fixed_n.setdefault(v, w) != w:
                return None
        for e, f in zip(x.edges, y.edges):
            if fixed_e.setdefault(e, f) != f:
                return None
    for iso in iter_morphisms(ka, kb, mono=True, fixed_nodes=fixed_n, fixed_edges=fixed_e):
        return iso
    return None


def embeddings_into(small: TransformationPair, big: TransformationPair,
                    mono: bool = False) -> list[Extension]:
    """All extension morphisms ``m`` from ``small`` to ``big`` that commute
    with both matches and admit extension diagrams."""
    if small.rules != big.rules:
        return []
    fixed_n: dict[int, int] = {}
    fixed_e: dict[int, int] = {}
    for x, y in ((small.o1, big.o1), (small.o2, big.o2)):
        for v, w in zip(x.nodes, y.nodes):
            if fixed_n.setdefault(v, w) != w:
                return []
        for e, f in zip(x.edges, y.edges):
            if fixed_e.setdefault(e, f) != f:
                return []
    out = []
    for m in iter_morphisms(small.source, big.source, mono=mono, fixed_nodes=fixed_n, fixed_edges=fixed_e):
        ext = try_embed(small, m)
        if ext is not None:
            out.append(ext)
    return out
