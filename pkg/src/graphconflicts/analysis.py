"""Analysis pipeline for one rule pair and its JSON/text report."""
from __future__ import annotations

import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence

from .conditions import Bounds, Condition, No, Unknown, Yes, normalize, to_text
from .conflicts import (
    Inducing, NoUpToBound, NotInducingUpToBound, compute_critical_pairs,
    compute_initial_conflicts, compute_plain_critical_pairs, overlaps,
)
from .dot import export_dot
from .graphs import Graph, Morphism
from .rules import Rule, TransformationPair, check_parallel_independence, pair_isomorphism
from .unfolding import (
    PreconditionViolation, Regular, check_regular, nac_critical_pair_predicate, unfold_literal,
)

COMMANDS = ("critical-pairs", "initial-conflicts", "unfold", "classify")


# -- JSON views -------------------------------------------------------------

def graph_view(g: Graph) -> dict:
    return {"nodes": list(g.node_types), "edges": [[s, t, ty] for s, t, ty in g.edges]}


def morphism_view(f: Morphism) -> dict:
    return {"nodes": list(f.nodes), "edges": list(f.edges)}


def pair_view(tp: TransformationPair) -> dict:
    return {
        "rules": [r.name for r in tp.rules],
        "graph": graph_view(tp.source),
        "match1": morphism_view(tp.o1),
        "match2": morphism_view(tp.o2),
    }


def report_view(report) -> dict:
    return {
        "parallel_independent": report.parallel_independent,
        "classes": sorted(report.classes),
    }


def condition_view(c: Condition) -> dict:
    """Conditions over K are read under arbitrary extension morphisms."""
    return {"text": to_text(c), "normalized": to_text(normalize(c))}


def verdict_view(v, bounds: Bounds) -> dict:
    """Every verdict names the bound it was established under; definitive
    ones say so."""
    if isinstance(v, Yes):
        return {"verdict": "yes", "witness": morphism_view(v.witness), "established": "definitive"}
    if isinstance(v, Inducing):
        return {"verdict": "inducing", "witness": morphism_view(v.m),
                "graph": graph_view(v.m.cod), "classes": sorted(v.report.classes),
                "established": "definitive"}
    if isinstance(v, No):
        return {"verdict": "no", "reason": v.reason, "established": "definitive"}
    if isinstance(v, (NoUpToBound, NotInducingUpToBound)):
        return {"verdict": "no-up-to-bound", "established": bounds.describe()}
    if isinstance(v, Unknown):
        return {"verdict": "unknown", "established": bounds.describe()}
    raise TypeError(f"unexpected verdict {v!r}")


# -- report -----------------------------------------------------------------

@dataclass
class AnalysisReport:
    rules: tuple[str, str]
    bounds: Bounds
    sections: dict = field(default_factory=dict)
    timings: dict = field(default_factory=dict)

    def to_json(self, timings: bool = False) -> dict:
        out = {
            "rules": list(self.rules),
            "bounds": {"max_nodes": self.bounds.max_nodes, "max_edges": self.bounds.max_edges,
                       "matches": self.bounds.restrict, "description": self.bounds.describe()},
        }
        out.update(self.sections)
        if timings:
            out["timings"] = {k: round(v, 4) for k, v in self.timings.items()}
        return out

    def to_text(self, timings: bool = False) -> str:
        lines = [f"rules {self.rules[0]} / {self.rules[1]} ({self.bounds.describe()})"]
        s = self.sections
        if "critical_pairs" in s:
            cp = s["critical_pairs"]
            lines.append(f"  plain critical pairs: {len(cp['plain'])}")
            lines.append(f"  critical pairs: {len(cp['critical'])} "
                         f"(other overlaps: {len(cp['other'])})")
        if "initial_conflicts" in s:
            ic = s["initial_conflicts"]
            lines.append(f"  plain initial conflicts: {len(ic['plain'])}")
            lines.append(f"  initial conflicts: {len(ic['conflicts'])} "
                         f"(rejected candidates: {len(ic['rejected'])})")
            for item in ic["conflicts"]:
                g = item["pair"]["graph"]
                lines.append(f"    {item['kind']} over {len(g['nodes'])} nodes / {len(g['edges'])} edges: "
                             f"{item['inducing']['verdict']} {item['inducing'].get('classes', '')}")
                lines.append(f"      ac_K  = {item['ac_K']['normalized']}")
                lines.append(f"      ac*_K = {item['ac_star_K']['normalized']}")
        if "unfold" in s:
            for item in s["unfold"]:
                if item["regular"]:
                    lines.append(f"  unfolding of {item['kind']}: {item['pairs']} pairs "
                                 f"from {len(item['literals'])} literals")
                    for lit in item["literals"]:
                        pair = lit["pair"]
                        what = ("no pair (gluing fails)" if not lit["gluing_ok"] else
                                "duplicate pair" if pair is None else
                                ",".join(pair["classes"]) or "independent")
                        lines.append(f"    literal into {len(lit['C']['nodes'])} nodes / "
                                     f"{len(lit['C']['edges'])} edges, {len(lit['remainder'])} NACs: {what}")
                else:
                    lines.append(f"  unfolding of {item['kind']}: not established ({item['reason']})")
        if "classify" in s:
            counts: dict = {}
            for item in s["classify"]:
                key = ",".join(item["classes"]) or "independent"
                counts[key] = counts.get(key, 0) + 1
            lines.append(f"  overlaps classified: {len(s['classify'])}")
            for key in sorted(counts):
                lines.append(f"    {key}: {counts[key]}")
        if timings:
            for k, v in self.timings.items():
                lines.append(f"  time {k}: {v:.3f}s")
        return "\n".join(lines) + "\n"


def _unfold_section(ics, bounds: Bounds, dot: Optional[Path], prefix: str) -> list:
    """Per initial conflict: its regular form literal by literal, with the
    pair each literal yields (None when gluing fails or the pair repeats an
    earlier one up to iso)."""
    out = []
    for idx, ic in enumerate(ics):
        reg = check_regular(ic, bounds)
        if not isinstance(reg, Regular):
            out.append({"kind": ic.kind, "regular": False, "reason": reg.reason, "literals": []})
            continue
        stp = ic.stp
        seen: list[TransformationPair] = []
        literals = []
        for j, lit in enumerate(reg.form.literals):
            item = {"C": graph_view(lit.C), "a": morphism_view(lit.a),
                    "remainder": [morphism_view(n) | {"N": graph_view(n.cod)} for n in lit.remainder.nacs],
                    "gluing_ok": lit.gluing_ok, "pair": None}
            tp = unfold_literal(stp, lit)
            if tp is not None and not any(pair_isomorphism(tp, other) is not None for other in seen):
                seen.append(tp)
                pv = pair_view(tp)
                pv.update(report_view(check_parallel_independence(tp)))
                try:
                    v = nac_critical_pair_predicate(tp)
                    pv["nac_critical"] = {"holds": v.holds, "case": v.case}
                except PreconditionViolation:
                    pv["nac_critical"] = None
                item["pair"] = pv
                if dot:
                    export_dot(tp, dot / f"{prefix}unfolding_{idx}_{j}.dot")
            literals.append(item)
        out.append({"kind": ic.kind, "regular": True, "form": to_text(reg.form.to_condition()),
                    "established": bounds.describe(), "literals": literals,
                    "pairs": len(seen)})
    return out


def run_analysis(rho1: Rule, rho2: Rule, bounds: Bounds = Bounds(),
                 commands: Sequence[str] = COMMANDS, dot_dir=None) -> AnalysisReport:
    """Run the selected analyses on one ordered rule pair."""
    unknown = set(commands) - set(COMMANDS)
    if unknown:
        raise ValueError(f"unknown commands: {sorted(unknown)}")
    dot = Path(dot_dir) if dot_dir else None
    prefix = f"{rho1.name}__{rho2.name}__"
    report = AnalysisReport((rho1.name, rho2.name), bounds)

    if "critical-pairs" in commands:
        t = time.perf_counter()
        plain = compute_plain_critical_pairs(rho1.plain(), rho2.plain(), bounds.restrict)
        found, other = compute_critical_pairs(rho1, rho2, bounds)
        report.sections["critical_pairs"] = {
            "plain": [pair_view(tp) for tp in plain],
            "critical": [dict(pair_view(cp.stp.tp),
                              ac_K=condition_view(cp.stp.ac_K),
                              ac_star_K=condition_view(cp.stp.ac_star_K),
                              verdict=verdict_view(Yes(cp.witness), bounds))
                         for cp in found],
            "other": [dict(pair_view(stp.tp), verdict=verdict_view(v, bounds)) for stp, v in other],
        }
        if dot:
            for i, cp in enumerate(found):
                export_dot(cp.stp.tp, dot / f"{prefix}critical_{i}.dot")
        report.timings["critical-pairs"] = time.perf_counter() - t

    ics = None
    if "initial-conflicts" in commands or "unfold" in commands:
        t = time.perf_counter()
        res = compute_initial_conflicts(rho1, rho2, bounds)
        ics = res.conflicts

        def ic_view(ic):
            return {"kind": ic.kind, "pair": pair_view(ic.stp.tp),
                    "ac_K": condition_view(ic.stp.ac_K),
                    "ac_star_K": condition_view(ic.stp.ac_star_K),
                    "inducing": verdict_view(ic.inducing, bounds)}

        if "initial-conflicts" in commands:
            report.sections["initial_conflicts"] = {
                "plain": [pair_view(tp) for tp in res.plain_initial],
                "conflicts": [ic_view(ic) for ic in res.conflicts],
                "rejected": [ic_view(ic) for ic in res.rejected],
            }
            if dot:
                for i, ic in enumerate(res.conflicts):
                    export_dot(ic.stp.tp, dot / f"{prefix}initial_{i}.dot")
                    export_dot(ic.stp.ac_K, dot / f"{prefix}initial_{i}_ac_K.dot")
                    export_dot(ic.stp.ac_star_K, dot / f"{prefix}initial_{i}_ac_star_K.dot")
        report.timings["initial-conflicts"] = time.perf_counter() - t

    if "unfold" in commands:
        t = time.perf_counter()
        report.sections["unfold"] = _unfold_section(ics, bounds, dot, prefix)
        report.timings["unfold"] = time.perf_counter() - t

    if "classify" in commands:
        t = time.perf_counter()
        items = []
        for tp in overlaps(rho1, rho2, bounds.restrict):
            if not tp.ac_respected:
                continue
            item = pair_view(tp)
            item.update(report_view(check_parallel_independence(tp)))
            items.append(item)
        report.sections["classify"] = items
        report.timings["classify"] = time.perf_counter() - t
    return report
