"""Regular forms of initial conflicts and their disjunctive unfoldings."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union

from .conditions import (
    And, Bounds, CTrue, Condition, Equivalent, Exists, NacConjunction, Not, bounded_equivalent,
    condition_key, conj, disj, is_false, is_true, literals_dnf, normalize, shift,
)
from .conflicts import InitialConflict, SymbolicTransformationPair, composite_matches_ok
from .graphs import Morphism, compose, enumerate_quotients, gluing_violation
from .rules import TransformationPair, apply, check_parallel_independence, pair_isomorphism


class PreconditionViolation(ValueError):
    pass


@dataclass(frozen=True)
class UnfoldingLiteral:
    a: Morphism
    remainder: NacConjunction
    gluing_ok: bool  # the extended matches satisfy gluing and stay in the match class

    @property
    def C(self):
        return self.a.cod

    def to_condition(self) -> Condition:
        return Exists(self.a, self.remainder.to_condition())


@dataclass(frozen=True)
class DisjunctiveForm:
    context: object
    literals: tuple[UnfoldingLiteral, ...]
    check: object = None  # bounded equivalence verdict against ac_K ∧ ac*_K

    def __post_init__(self):
        if not self.literals:
            raise ValueError("a disjunctive form needs at least one literal")

    def to_condition(self) -> Condition:
        return disj(self.context, [lit.to_condition() for lit in self.literals])


@dataclass(frozen=True)
class Regular:
    form: DisjunctiveForm


@dataclass(frozen=True)
class NotEstablished:
    reason: str


def _stp(ic) -> SymbolicTransformationPair:
    return ic.stp if isinstance(ic, InitialConflict) else ic


def _epis(k) -> list[Morphism]:
    """Surjections out of ``k`` up to iso. ``∨ ∃(e)`` over these is
    equivalent to True."""
    return list(enumerate_quotients(k))


def _nac_remainder(a: Morphism, cond: Condition) -> Optional[Union[NacConjunction, bool]]:
    """Normalize ``cond`` over the codomain of ``a`` (witnesses are
    injective) into a NAC conjunction. False means unsatisfiable, None means
    the shape is not reached."""
    c = normalize(cond, mono=True)
    if is_false(c):
        return False
    return NacConjunction.from_condition(c)


def _literal(stp, a: Morphism, remainder: NacConjunction, mono: bool) -> UnfoldingLiteral:
    r1, r2 = stp.rules
    ok = (composite_matches_ok(stp, a, mono)
          and gluing_violation(r1.l, compose(stp.tp.o1, a)) is None
          and gluing_violation(r2.l, compose(stp.tp.o2, a)) is None)
    return UnfoldingLiteral(a, remainder, ok)


def _dedup(literals: list[UnfoldingLiteral]) -> list[UnfoldingLiteral]:
    seen = {}
    for lit in literals:
        seen.setdefault(condition_key(lit.to_condition()), lit)
    return [seen[k] for k in sorted(seen)]


def _is_nac_rule(rule) -> bool:
    c = normalize(rule.ac, mono=True)
    return is_true(c) or NacConjunction.from_condition(c) is not None


def _nac_path(stp, mono: bool):
    """Shift the extension condition over every positive literal of the
    conflict-inducing condition."""
    star = normalize(stp.ac_star_K)
    if is_false(star):
        return NotEstablished("the conflict-inducing condition is unsatisfiable")
    if is_true(star):
        pacs = _epis(stp.K)
    else:
        dnf = literals_dnf(star)
        pacs = []
        for conjunct in dnf or [None]:
            if conjunct is None or len(conjunct) != 1 or not isinstance(conjunct[0], Exists) \
                    or not is_true(conjunct[0].child):
                return NotEstablished("conflict-inducing condition is not a disjunction of plain positive literals")
            pacs.append(conjunct[0].morphism)
    literals = []
    for b in pacs:
        rem = _nac_remainder(b, shift(b, stp.ac_K))
        if rem is False:
            continue
        if rem is None:
            return NotEstablished("shifted extension condition is not a NAC conjunction")
        literals.append(_literal(stp, b, rem, mono))
    return literals


def _fold(stp, a: Morphism, cond: Condition, depth: int, out: list, mono: bool) -> Optional[str]:
    """Rewrite ``∃(a, cond)`` into literals with NAC remainders."""
    if depth > 4:
        return "nesting too deep"
    c = normalize(cond, mono=True)
    dnf = literals_dnf(c)
    if dnf is None:
        return "normal form too large"
    for conjunct in dnf:
        pos = [x for x in conjunct if isinstance(x, Exists)]
        negs = [x for x in conjunct if not isinstance(x, Exists)]
        if not pos:
            rem = NacConjunction.from_condition(conj(a.cod, negs)) if negs else NacConjunction(a.cod)
            if rem is None:
                return "a negative literal carries a nested condition"
            out.append(_literal(stp, a, rem, mono))
            continue
        first, rest = pos[0], pos[1:] + negs
        b = first.morphism
        if not b.is_injective:
            continue
        inner = And(b.cod, [first.child, shift(b, conj(a.cod, rest))]) if rest else first.child
        why = _fold(stp, compose(a, b), inner, depth + 1, out, mono)
        if why:
            return why
    return None


def _general_path(stp, mono: bool):
    cond = normalize(stp.conflict_condition)
    dnf = literals_dnf(cond)
    if dnf is None:
        return NotEstablished("normal form too large")
    literals: list[UnfoldingLiteral] = []
    k = stp.K
    for conjunct in dnf:
        pos = [x for x in conjunct if isinstance(x, Exists)]
        if pos:
            first = pos[0]
            rest = [x for x in conjunct if x is not first]
            b = first.morphism
            inner = And(b.cod, [first.child, shift(b, conj(k, rest))]) if rest else first.child
            why = _fold(stp, b, inner, 1, literals, mono)
        else:
            why = None
            for e in _epis(k):
                why = _fold(stp, e, shift(e, conj(k, conjunct)), 1, literals, mono)
                if why:
                    break
        if why:
            return NotEstablished(why)
    return literals


def check_regular(ic, bounds: Bounds = Bounds()):
    """Bring ``ac_K ∧ ac*_K`` into the shape ``∨ ∃(a_i, ∧ ¬∃ n_ij)``.

    Rules whose conditions are NAC conjunctions follow the constructive
    route; other conditions are normalized and folded, and anything that
    does not reach the shape is reported as not established. The result is
    cross-checked by bounded equivalence.
    """
    stp = _stp(ic)
    r1, r2 = stp.rules
    if _is_nac_rule(r1) and _is_nac_rule(r2):
        literals = _nac_path(stp, bounds.mono)
    else:
        literals = _general_path(stp, bounds.mono)
    if isinstance(literals, NotEstablished):
        return literals
    literals = _dedup(literals)
    if not literals:
        return NotEstablished("no satisfiable literal")
    form = DisjunctiveForm(stp.K, tuple(literals))
    # the extension morphism is arbitrary even when matches are injective
    verdict = bounded_equivalent(form.to_condition(), stp.conflict_condition,
                                 Bounds(bounds.max_nodes, bounds.max_edges))
    if not isinstance(verdict, Equivalent):
        return NotEstablished(f"regular form disagrees with the conflict condition at {verdict}")
    return Regular(DisjunctiveForm(stp.K, tuple(literals), verdict))


def unfold_literal(stp, lit: UnfoldingLiteral) -> Optional[TransformationPair]:
    if not lit.gluing_ok:
        return None
    r1, r2 = stp.rules
    return TransformationPair(apply(r1, compose(stp.tp.o1, lit.a), True),
                              apply(r2, compose(stp.tp.o2, lit.a), True))


def disjunctive_unfolding(ic, form: DisjunctiveForm) -> list[TransformationPair]:
    """One pair per literal whose composite matches satisfy gluing, iso-deduplicated."""
    stp = _stp(ic)
    out: list[TransformationPair] = []
    for lit in form.literals:
        tp = unfold_literal(stp, lit)
        if tp is None:
            continue
        if not tp.ac_respected:
            raise AssertionError("identity on a literal codomain must satisfy its remainder")
        if any(pair_isomorphism(tp, other) is not None for other in out):
            continue
        out.append(tp)
    return out


# -- classical critical pairs for NAC rules ---------------------------------

@dataclass(frozen=True)
class NacCriticalVerdict:
    holds: bool
    case: str  # one of "1a", "1b", "2a", "2b", "none"


def _nacs(rule):
    c = normalize(rule.ac, mono=True)
    if is_true(c):
        return ()
    nc = NacConjunction.from_condition(c)
    if nc is None:
        raise PreconditionViolation(f"rule {rule.name} does not carry a NAC conjunction")
    return nc.nacs


def _jointly_surjective(f: Morphism, g: Morphism) -> bool:
    k = f.cod
    return (len(set(f.nodes) | set(g.nodes)) == k.n_nodes
            and len(set(f.edges) | set(g.edges)) == k.n_edges)


def _forbid_produce(nacs, moved: Morphism, comatch: Morphism) -> bool:
    from .conditions import witnesses
    for n in nacs:
        for q in witnesses(moved, n):
            if _jointly_surjective(q, comatch):
                return True
    return False


def nac_critical_pair_predicate(tp: TransformationPair) -> NacCriticalVerdict:
    """Classical critical-pair test for rules with NACs, checked case by case
    (1a/2a use-delete/delete-use on jointly surjective matches, 1b/2b a NAC
    occurrence created by the other step and covered together with its
    comatch)."""
    r1, r2 = tp.rules
    nacs1, nacs2 = _nacs(r1), _nacs(r2)
    report = check_parallel_independence(tp, plain=True)
    js = tp.jointly_surjective
    if report.d12 is None and js:
        return NacCriticalVerdict(True, "1a")
    if report.d12 is not None and _forbid_produce(nacs1, compose(report.d12, tp.t2.d_right), tp.t2.comatch):
        return NacCriticalVerdict(True, "1b")
    if report.d21 is None and js:
        return NacCriticalVerdict(True, "2a")
    if report.d21 is not None and _forbid_produce(nacs2, compose(report.d21, tp.t1.d_right), tp.t1.comatch):
        return NacCriticalVerdict(True, "2b")
    return NacCriticalVerdict(False, "none")
