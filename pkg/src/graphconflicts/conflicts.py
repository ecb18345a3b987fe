"""Symbolic transformation pairs, critical pairs and initial conflicts."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Optional, Union

from .conditions import (
    And, Bounds, Condition, Exists, No, Not, Unknown, Yes, _sat, false, left_span,
    literals_dnf, normalize, satisfies, shift, small_model_size,
)
from .graphs import (
    Graph, GluingViolation, Morphism, canonical_form, compose, coproduct,
    enumerate_graphs, enumerate_jointly_epi_pairs, gluing_violation, iter_morphisms,
    lift_through_mono, mediate,
)
from .rules import (
    Extension, IndependenceReport, Rule, TransformationPair, apply,
    check_parallel_independence, embeddings_into, try_embed,
)

USE_DELETE_DELETE_USE = "UseDeleteDeleteUse"
AC_INITIAL = "ACInitial"


class NotAConflict(ValueError):
    """The given pair is parallel independent."""


@dataclass(frozen=True)
class SymbolicTransformationPair:
    tp: TransformationPair
    ac_K: Condition
    ac_star_K: Condition
    ac_star_d12: Condition
    ac_star_d21: Condition
    report: IndependenceReport

    @property
    def K(self) -> Graph:
        return self.tp.source

    @property
    def rules(self) -> tuple[Rule, Rule]:
        return self.tp.rules

    @property
    def conflict_condition(self) -> Condition:
        """``ac_K ∧ ac*_K``."""
        return And(self.K, [self.ac_K, self.ac_star_K])


def build_symbolic_pair(tp: TransformationPair) -> SymbolicTransformationPair:
    """Attach the extension condition and the conflict-inducing condition.

    ``ac_K`` holds for ``m`` iff both extended matches satisfy their rule
    conditions; ``ac*_K`` holds iff the extended pair is in conflict.
    """
    t1, t2 = tp.t1, tp.t2
    rho1, rho2 = tp.rules
    k = tp.source
    ac_k = And(k, [shift(t1.match, rho1.ac), shift(t2.match, rho2.ac)])
    report = check_parallel_independence(tp, plain=True)
    if report.d12 is not None:
        moved = compose(report.d12, t2.d_right)
        star12 = left_span(t2.d_left, t2.d_right, shift(moved, rho1.ac))
    else:
        star12 = false(k)
    if report.d21 is not None:
        moved = compose(report.d21, t1.d_right)
        star21 = left_span(t1.d_left, t1.d_right, shift(moved, rho2.ac))
    else:
        star21 = false(k)
    star = Not(And(k, [star12, star21]))
    return SymbolicTransformationPair(tp, ac_k, star, star12, star21, report)


# -- verdict types ----------------------------------------------------------

@dataclass(frozen=True)
class NoUpToBound:
    bounds: Bounds


@dataclass(frozen=True)
class Inducing:
    m: Morphism
    extension: Extension
    report: IndependenceReport


@dataclass(frozen=True)
class NotInducingUpToBound:
    bounds: Bounds


CriticalVerdict = Union[Yes, NoUpToBound, No, Unknown]
InducingVerdict = Union[Inducing, NotInducingUpToBound, No, Unknown]


@dataclass(frozen=True)
class CriticalPair:
    stp: SymbolicTransformationPair
    witness: Morphism

    @property
    def jointly_surjective(self) -> bool:
        return self.stp.tp.jointly_surjective


@dataclass(frozen=True)
class InitialConflict:
    stp: SymbolicTransformationPair
    kind: str
    inducing: InducingVerdict

    @property
    def K(self) -> Graph:
        return self.stp.K


@dataclass
class InitialConflictResult:
    conflicts: list[InitialConflict]
    rejected: list[InitialConflict]
    plain_initial: list[TransformationPair]
    bounds: Bounds

    def __iter__(self):
        return iter(self.conflicts)

    def __len__(self):
        return len(self.conflicts)


# -- plain critical pairs and initial conflicts -----------------------------

def overlaps(rho1: Rule, rho2: Rule, restrict: str = "all") -> list[TransformationPair]:
    """AC-disregarding pairs at every jointly surjective match pair (up to
    iso) where both gluing conditions hold."""
    mono = restrict == "mono"
    out = []
    for o1, o2 in enumerate_jointly_epi_pairs(rho1.left, rho2.left, mono, mono):
        if gluing_violation(rho1.l, o1) or gluing_violation(rho2.l, o2):
            continue
        out.append(TransformationPair(apply(rho1, o1, True), apply(rho2, o2, True)))
    return out


def compute_plain_critical_pairs(p1: Rule, p2: Rule, restrict: str = "all") -> list[TransformationPair]:
    """Use-delete/delete-use pairs over jointly surjective overlaps.

    Rule conditions are ignored; the returned pairs keep the original rules
    so their conditions can be shifted later.
    """
    return [tp for tp in overlaps(p1, p2, restrict)
            if check_parallel_independence(tp, plain=True).plain_conflict]


def embeds(small: TransformationPair, big: TransformationPair, mono: bool = False) -> Optional[Extension]:
    found = embeddings_into(small, big, mono=mono)
    return found[0] if found else None


def compute_plain_initial_conflicts(p1: Rule, p2: Rule, restrict: str = "all",
                                    critical: Optional[list[TransformationPair]] = None) -> list[TransformationPair]:
    """Critical pairs into which no smaller critical pair embeds."""
    cps = critical if critical is not None else compute_plain_critical_pairs(p1, p2, restrict)
    out = []
    for cp in cps:
        smaller = False
        for other in cps:
            if other is cp:
                continue
            ext = embeds(other, cp)
            if ext is not None and not ext.m.is_iso:
                smaller = True
                break
        if not smaller:
            out.append(cp)
    return out


def initial_parallel_independent_pair(p1: Rule, p2: Rule) -> TransformationPair:
    """The pair over ``L1 + L2`` at the coproduct injections."""
    _, i1, i2 = coproduct(p1.left, p2.left)
    for rule, i in ((p1, i1), (p2, i2)):
        bad = gluing_violation(rule.l, i)
        if bad is not None:
            raise bad
    return TransformationPair(apply(p1, i1, True), apply(p2, i2, True))


def initiality_violations(ic: TransformationPair, tp: TransformationPair,
                          universe: Bounds) -> list[tuple]:
    """Directly test that ``ic`` is initial for ``tp``.

    ``ic`` must embed into ``tp`` via some ``f_I``; then every pair ``tp2``
    over a graph within ``universe`` that embeds into ``tp`` via ``f`` must
    admit exactly one embedding ``f2`` of ``ic`` with ``f ∘ f2 = f_I``.
    Returns the offending ``(tp2, f, number_of_f2)`` triples, or a single
    ``("no-embedding",)`` marker.
    """
    top = embeddings_into(ic, tp)
    if len(top) != 1:
        return [("no-embedding", len(top))]
    f_i = top[0].m
    rho1, rho2 = tp.rules
    bad = []
    for g in enumerate_graphs(tp.source.type_graph, universe.max_nodes, universe.max_edges):
        m1s = [m for m in iter_morphisms(rho1.left, g) if gluing_violation(rho1.l, m) is None]
        m2s = [m for m in iter_morphisms(rho2.left, g) if gluing_violation(rho2.l, m) is None]
        if not m1s or not m2s:
            continue
        for f in iter_morphisms(g, tp.source):
            for m1 in m1s:
                if compose(m1, f) != tp.o1:
                    continue
                for m2 in m2s:
                    if compose(m2, f) != tp.o2:
                        continue
                    tp2 = TransformationPair(apply(rho1, m1, True), apply(rho2, m2, True))
                    if try_embed(tp2, f) is None:
                        continue
                    lifts = [e for e in embeddings_into(ic, tp2) if compose(e.m, f) == f_i]
                    if len(lifts) != 1:
                        bad.append((tp2, f, len(lifts)))
    return bad


# -- witness search ---------------------------------------------------------

def _positive_codomains(c: Condition) -> list[Graph]:
    dnf = literals_dnf(normalize(c), limit=64)
    out = []
    for conjunct in dnf or []:
        for lit in conjunct:
            if isinstance(lit, Exists):
                out.append(lit.morphism.cod)
    return out


def candidate_graphs(stp: SymbolicTransformationPair, bounds: Bounds) -> Iterator[Graph]:
    """``K`` first, then the codomains of positive literals of the
    conflict condition, then every graph within the bounds."""
    seen = set()
    first = [stp.K] + _positive_codomains(stp.conflict_condition)
    for g in first + list(enumerate_graphs(stp.K.type_graph, bounds.max_nodes, bounds.max_edges)):
        key = canonical_form(g)
        if key in seen:
            continue
        seen.add(key)
        yield g


def _bound_covers(stp: SymbolicTransformationPair, bounds: Bounds, injective_m: bool) -> bool:
    size = small_model_size(stp.conflict_condition, injective_m)
    return size is not None and size[0] <= bounds.max_nodes and size[1] <= bounds.max_edges


def composite_matches_ok(stp: SymbolicTransformationPair, m: Morphism, mono: bool) -> bool:
    """Under injective matches the extended matches must stay injective;
    ``m`` itself may identify elements."""
    if not mono:
        return True
    return compose(stp.tp.o1, m).is_injective and compose(stp.tp.o2, m).is_injective


def is_critical_pair(stp: SymbolicTransformationPair, bounds: Bounds = Bounds()) -> CriticalVerdict:
    """Jointly surjective matches plus an injective ``m: K -> G`` with
    ``m ⊨ ac_K ∧ ac*_K`` and both composite matches satisfying gluing."""
    if not stp.tp.jointly_surjective:
        return No("matches are not jointly surjective")
    cond = stp.conflict_condition
    r1, r2 = stp.rules
    for g in candidate_graphs(stp, bounds):
        for m in iter_morphisms(stp.K, g, mono=True):
            if gluing_violation(r1.l, compose(stp.tp.o1, m)) or gluing_violation(r2.l, compose(stp.tp.o2, m)):
                continue
            if _sat(m, cond):
                return Yes(m)
    if _bound_covers(stp, bounds, injective_m=True):
        return No("no injective witness and every witness would fit the bound")
    return NoUpToBound(bounds)


def unfold_at(stp: SymbolicTransformationPair, m: Morphism) -> Optional[Extension]:
    """The lower row of the extension diagrams along ``m`` when it exists
    and both extended steps respect the rule conditions."""
    ext = try_embed(stp.tp, m)
    if ext is None or not ext.big.ac_respected:
        return None
    return ext


def iter_unfolding(stp: SymbolicTransformationPair, bounds: Bounds,
                   graphs: Optional[Iterable[Graph]] = None) -> Iterator[tuple[Morphism, Extension, IndependenceReport]]:
    if graphs is None:
        graphs = enumerate_graphs(stp.K.type_graph, bounds.max_nodes, bounds.max_edges)
    for g in graphs:
        for m in iter_morphisms(stp.K, g):
            if not composite_matches_ok(stp, m, bounds.mono):
                continue
            ext = unfold_at(stp, m)
            if ext is None:
                continue
            yield m, ext, check_parallel_independence(ext.big)


def enumerate_unfolding(stp: SymbolicTransformationPair, bounds: Bounds = Bounds()):
    """All unfolded pairs over graphs within the bounds, with their
    independence reports; parallel independent members are kept."""
    return list(iter_unfolding(stp, bounds))


def conflict_inducing_status(stp: SymbolicTransformationPair, bounds: Bounds = Bounds()) -> InducingVerdict:
    for m, ext, report in iter_unfolding(stp, bounds, candidate_graphs(stp, bounds)):
        if not report.parallel_independent:
            return Inducing(m, ext, report)
    if _bound_covers(stp, bounds, injective_m=False):
        return No("the conflict condition has no model and every model would fit the bound")
    return NotInducingUpToBound(bounds)


# -- initial conflicts ------------------------------------------------------

def compute_initial_conflicts(rho1: Rule, rho2: Rule, bounds: Bounds = Bounds()) -> InitialConflictResult:
    """Plain initial conflicts of the plain parts plus the pair over
    ``L1 + L2``, each kept when some unfolding of it is a conflict."""
    restrict = bounds.restrict
    plain = compute_plain_initial_conflicts(rho1, rho2, restrict)
    candidates = [(tp, USE_DELETE_DELETE_USE) for tp in plain]
    candidates.append((initial_parallel_independent_pair(rho1, rho2), AC_INITIAL))
    kept, rejected = [], []
    for tp, kind in candidates:
        stp = build_symbolic_pair(tp)
        status = conflict_inducing_status(stp, bounds)
        ic = InitialConflict(stp, kind, status)
        (kept if isinstance(status, Inducing) else rejected).append(ic)
    return InitialConflictResult(kept, rejected, plain, bounds)


def compute_critical_pairs(rho1: Rule, rho2: Rule, bounds: Bounds = Bounds()):
    """Critical pairs for rules with conditions, plus the overlaps whose
    verdict was not Yes."""
    found, other = [], []
    for tp in overlaps(rho1, rho2, bounds.restrict):
        stp = build_symbolic_pair(tp)
        verdict = is_critical_pair(stp, bounds)
        if isinstance(verdict, Yes):
            found.append(CriticalPair(stp, verdict.witness))
        else:
            other.append((stp, verdict))
    return found, other


def representations(tp: TransformationPair, conflicts: Iterable[InitialConflict]) -> list[tuple[InitialConflict, Extension]]:
    """Every initial conflict embedding into ``tp`` along an ``m`` that
    satisfies its conflict condition."""
    out = []
    for ic in conflicts:
        for ext in embeddings_into(ic.stp.tp, tp):
            if satisfies(ext.m, ic.stp.conflict_condition):
                out.append((ic, ext))
    return out


def find_representing_initial_conflict(tp: TransformationPair, conflicts: Iterable[InitialConflict]):
    """Pick the initial conflict representing a conflicting pair.

    Use-delete/delete-use conflicts go to the plain initial conflict that
    embeds; pure AC conflicts to the pair over ``L1 + L2`` at the mediating
    morphism of the matches.
    """
    report = check_parallel_independence(tp)
    if report.parallel_independent:
        raise NotAConflict("the pair is parallel independent")
    conflicts = list(conflicts)
    if report.plain_conflict:
        pool = [ic for ic in conflicts if ic.kind == USE_DELETE_DELETE_USE]
    else:
        pool = [ic for ic in conflicts if ic.kind == AC_INITIAL]
    for ic in pool:
        if ic.kind == AC_INITIAL:
            small = ic.stp.tp
            m = mediate(small.o1, small.o2, tp.o1, tp.o2)
            ext = try_embed(small, m) if m is not None else None
            exts = [ext] if ext is not None else []
        else:
            exts = embeddings_into(ic.stp.tp, tp)
        for ext in exts:
            if not satisfies(ext.m, ic.stp.conflict_condition):
                raise AssertionError("representative morphism violates the conflict condition")
            return ic, ext
    return None
