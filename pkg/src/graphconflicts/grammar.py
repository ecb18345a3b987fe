"""JSON grammar files: a type graph, named graphs, rules with left conditions.

Layout::

    {
      "type_graph": {"nodes": ["N"], "edges": [{"name": "E", "source": "N", "target": "N"}]},
      "graphs": {"G": {"nodes": {"a": "N", "b": "N"},
                       "edges": {"e": {"source": "a", "target": "b", "type": "E"}}}},
      "rules": [{"name": "p", "left": "G", "interface": {...}, "right": {...},
                 "l": {"nodes": {"x": "a"}, "edges": {}}, "r": {...},
                 "ac": {"kind": "not", "child": {"kind": "exists", ...}}}],
      "defaults": {"max_nodes": 3, "max_edges": 3, "matches": "all"}
    }

Graphs may be given inline or by name. Node lists (``["a", "b"]``) use the
first node type, edge lists (``[["a", "b"]]``) the first edge type.
Morphisms always spell out their node and edge maps by name.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Optional

from .conditions import And, CTrue, Condition, Exists, Not
from .graphs import UNTYPED, Graph, Morphism, TypeGraph
from .rules import Rule


class GrammarError(ValueError):
    def __init__(self, message: str, path: str = ""):
        self.path = path
        super().__init__(f"{path}: {message}" if path else message)


@dataclass
class NamedGraph:
    graph: Graph
    node_names: tuple[str, ...]
    edge_names: tuple[str, ...]

    def node_index(self, name, path):
        try:
            return self.node_names.index(name)
        except ValueError:
            raise GrammarError(f"unknown node {name!r}", path) from None

    def edge_index(self, name, path):
        try:
            return self.edge_names.index(name)
        except ValueError:
            raise GrammarError(f"unknown edge {name!r}", path) from None


@dataclass
class GrammarFile:
    type_graph: TypeGraph
    graphs: dict[str, NamedGraph] = field(default_factory=dict)
    rules: list[Rule] = field(default_factory=list)
    defaults: dict = field(default_factory=dict)
    names: dict = field(default_factory=dict)  # rule name -> named graphs, kept for serialization

    def rule(self, name: str) -> Rule:
        for r in self.rules:
            if r.name == name:
                return r
        raise GrammarError(f"no rule named {name!r}", "rules")

    def structure(self):
        """Comparable view used to check round trips."""
        return (self.type_graph,
                {k: (v.graph, v.node_names, v.edge_names) for k, v in self.graphs.items()},
                [(r.name, r.l, r.r, r.ac) for r in self.rules],
                self.defaults)


# -- parsing ----------------------------------------------------------------

def _parse_type_graph(data, path) -> TypeGraph:
    if data is None:
        return UNTYPED
    try:
        nodes = tuple(data["nodes"])
        edges = []
        for i, e in enumerate(data.get("edges", [])):
            if isinstance(e, dict):
                edges.append((e["name"], e["source"], e["target"]))
            else:
                edges.append(tuple(e))
        return TypeGraph(nodes, tuple(edges))
    except (KeyError, TypeError, ValueError) as exc:
        raise GrammarError(f"invalid type graph ({exc})", path) from None


def _parse_graph(data, tg: TypeGraph, named: dict, path: str) -> NamedGraph:
    if isinstance(data, str):
        if data not in named:
            raise GrammarError(f"unknown graph {data!r}", path)
        return named[data]
    if not isinstance(data, dict):
        raise GrammarError("graph must be an object or a graph name", path)
    raw_nodes = data.get("nodes", {})
    if isinstance(raw_nodes, list):
        if not tg.nodes:
            raise GrammarError("type graph declares no node types", path)
        raw_nodes = {str(n): tg.nodes[0] for n in raw_nodes}
    if not isinstance(raw_nodes, dict):
        raise GrammarError("nodes must be a list or an object", path + ".nodes")
    node_names = tuple(str(n) for n in raw_nodes)
    if len(set(node_names)) != len(node_names):
        raise GrammarError("duplicate node name", path + ".nodes")
    node_types = []
    for n, t in raw_nodes.items():
        if t not in tg.nodes:
            raise GrammarError(f"unknown node type {t!r}", f"{path}.nodes.{n}")
        node_types.append(t)
    raw_edges = data.get("edges", {})
    if isinstance(raw_edges, list):
        raw_edges = {f"e{i}": e for i, e in enumerate(raw_edges)}
    edge_names = tuple(str(e) for e in raw_edges)
    edges = []
    for name, e in raw_edges.items():
        epath = f"{path}.edges.{name}"
        if isinstance(e, dict):
            s, t, ty = e.get("source"), e.get("target"), e.get("type")
        else:
            e = list(e)
            s, t = e[0], e[1]
            ty = e[2] if len(e) > 2 else None
        if ty is None:
            if not tg.edges:
                raise GrammarError("type graph declares no edge types", epath)
            ty = tg.edges[0][0]
        for end in (s, t):
            if end not in node_names:
                raise GrammarError(f"edge references missing node {end!r}", epath)
        si, ti = node_names.index(s), node_names.index(t)
        if ty not in tg.edge_ends:
            raise GrammarError(f"unknown edge type {ty!r}", epath)
        if tg.edge_ends[ty] != (node_types[si], node_types[ti]):
            raise GrammarError(f"endpoint types do not match edge type {ty!r}", epath)
        edges.append((si, ti, ty))
    return NamedGraph(Graph(tg, tuple(node_types), tuple(edges)), node_names, edge_names)


def _parse_morphism(data, src: NamedGraph, tgt: NamedGraph, path: str) -> Morphism:
    if not isinstance(data, dict):
        raise GrammarError("morphism must be an object with node and edge maps", path)
    nmap = data.get("nodes", {})
    emap = data.get("edges", {})
    nodes = []
    for name in src.node_names:
        if name not in nmap:
            raise GrammarError(f"node {name!r} is not mapped", path + ".nodes")
        nodes.append(tgt.node_index(nmap[name], f"{path}.nodes.{name}"))
    edges = []
    for name in src.edge_names:
        if name not in emap:
            raise GrammarError(f"edge {name!r} is not mapped", path + ".edges")
        edges.append(tgt.edge_index(emap[name], f"{path}.edges.{name}"))
    for k in nmap:
        if k not in src.node_names:
            raise GrammarError(f"unknown node {k!r}", path + ".nodes")
    for k in emap:
        if k not in src.edge_names:
            raise GrammarError(f"unknown edge {k!r}", path + ".edges")
    try:
        return Morphism(src.graph, tgt.graph, tuple(nodes), tuple(edges))
    except ValueError as exc:
        raise GrammarError(f"invalid morphism ({exc})", path) from None


def _parse_condition(data, ctx: NamedGraph, tg, named, path: str, contexts: dict) -> Condition:
    if not isinstance(data, dict) or "kind" not in data:
        raise GrammarError("condition must be an object with a kind", path)
    kind = data["kind"]
    if kind == "true":
        return CTrue(ctx.graph)
    if kind == "not":
        return Not(_parse_condition(data.get("child"), ctx, tg, named, path + ".child", contexts))
    if kind == "and":
        kids = [_parse_condition(c, ctx, tg, named, f"{path}.children[{i}]", contexts)
                for i, c in enumerate(data.get("children", []))]
        return And(ctx.graph, kids)
    if kind == "exists":
        target = _parse_graph(data.get("target"), tg, named, path + ".target")
        a = _parse_morphism(data.get("morphism"), ctx, target, path + ".morphism")
        contexts[id(target.graph)] = target
        child = data.get("child", {"kind": "true"})
        return Exists(a, _parse_condition(child, target, tg, named, path + ".child", contexts))
    raise GrammarError(f"unknown condition kind {kind!r}", path)


def load_grammar(data: dict) -> GrammarFile:
    if not isinstance(data, dict):
        raise GrammarError("grammar must be a JSON object")
    tg = _parse_type_graph(data.get("type_graph"), "type_graph")
    g = GrammarFile(tg)
    for name, gd in (data.get("graphs") or {}).items():
        g.graphs[name] = _parse_graph(gd, tg, g.graphs, f"graphs.{name}")
    seen = set()
    for i, rd in enumerate(data.get("rules") or []):
        path = f"rules[{i}]"
        if not isinstance(rd, dict) or "name" not in rd:
            raise GrammarError("rule needs a name", path)
        if rd["name"] in seen:
            raise GrammarError(f"duplicate rule name {rd['name']!r}", path)
        seen.add(rd["name"])
        left = _parse_graph(rd.get("left"), tg, g.graphs, path + ".left")
        iface = _parse_graph(rd.get("interface"), tg, g.graphs, path + ".interface")
        right = _parse_graph(rd.get("right"), tg, g.graphs, path + ".right")
        l = _parse_morphism(rd.get("l"), iface, left, path + ".l")
        r = _parse_morphism(rd.get("r"), iface, right, path + ".r")
        if not l.is_injective or not r.is_injective:
            raise GrammarError("rule legs must be injective", path)
        contexts = {}
        ac = _parse_condition(rd.get("ac", {"kind": "true"}), left, tg, g.graphs, path + ".ac", contexts)
        rule = Rule(rd["name"], l, r, ac)
        g.rules.append(rule)
        g.names[rd["name"]] = (left, iface, right, contexts)
    d = data.get("defaults") or {}
    g.defaults = {"max_nodes": int(d.get("max_nodes", 3)), "max_edges": int(d.get("max_edges", 3)),
                  "matches": d.get("matches", "all")}
    if g.defaults["matches"] not in ("all", "mono"):
        raise GrammarError("matches must be 'all' or 'mono'", "defaults.matches")
    return g


def parse_grammar(path) -> GrammarFile:
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as exc:
        raise GrammarError(f"cannot read grammar ({exc})", str(path)) from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GrammarError(f"syntax error at line {exc.lineno} column {exc.colno}: {exc.msg}", str(path)) from None
    return load_grammar(data)


# -- serialization ----------------------------------------------------------

def default_names(g: Graph) -> NamedGraph:
    return NamedGraph(g, tuple(f"v{i}" for i in range(g.n_nodes)), tuple(f"e{i}" for i in range(g.n_edges)))


def graph_to_json(ng: NamedGraph) -> dict:
    g = ng.graph
    return {
        "nodes": {n: t for n, t in zip(ng.node_names, g.node_types)},
        "edges": {name: {"source": ng.node_names[s], "target": ng.node_names[t], "type": ty}
                  for name, (s, t, ty) in zip(ng.edge_names, g.edges)},
    }


def morphism_to_json(f: Morphism, src: NamedGraph, tgt: NamedGraph) -> dict:
    return {
        "nodes": {src.node_names[v]: tgt.node_names[w] for v, w in enumerate(f.nodes)},
        "edges": {src.edge_names[e]: tgt.edge_names[x] for e, x in enumerate(f.edges)},
    }


def condition_to_json(c: Condition, ctx: Optional[NamedGraph] = None, contexts: Optional[dict] = None) -> dict:
    ctx = ctx or default_names(c.context)
    contexts = contexts or {}
    if isinstance(c, CTrue):
        return {"kind": "true"}
    if isinstance(c, Not):
        return {"kind": "not", "child": condition_to_json(c.child, ctx, contexts)}
    if isinstance(c, And):
        return {"kind": "and", "children": [condition_to_json(x, ctx, contexts) for x in c.children]}
    tgt = contexts.get(id(c.morphism.cod)) or default_names(c.morphism.cod)
    return {"kind": "exists", "target": graph_to_json(tgt),
            "morphism": morphism_to_json(c.morphism, ctx, tgt),
            "child": condition_to_json(c.child, tgt, contexts)}


def grammar_to_json(g: GrammarFile) -> dict:
    def name_of(ng: NamedGraph):
        for k, v in g.graphs.items():
            if v is ng:
                return k
        return graph_to_json(ng)

    rules = []
    for r in g.rules:
        left, iface, right, contexts = g.names.get(
            r.name, (default_names(r.left), default_names(r.interface), default_names(r.right), {}))
        rules.append({
            "name": r.name,
            "left": name_of(left), "interface": name_of(iface), "right": name_of(right),
            "l": morphism_to_json(r.l, iface, left),
            "r": morphism_to_json(r.r, iface, right),
            "ac": condition_to_json(r.ac, left, contexts),
        })
    tg = g.type_graph
    return {
        "type_graph": {"nodes": list(tg.nodes),
                       "edges": [{"name": n, "source": s, "target": t} for n, s, t in tg.edges]},
        "graphs": {k: graph_to_json(v) for k, v in g.graphs.items()},
        "rules": rules,
        "defaults": dict(g.defaults),
    }


def serialize_grammar(g: GrammarFile) -> str:
    return json.dumps(grammar_to_json(g), indent=2)


def grammar_from_rules(rules, type_graph: TypeGraph = UNTYPED, defaults=None) -> GrammarFile:
    g = GrammarFile(type_graph, rules=list(rules))
    g.defaults = dict(defaults or {"max_nodes": 3, "max_edges": 3, "matches": "all"})
    return g
