"""DOT rendering of graphs, transformation pairs and condition trees."""
from __future__ import annotations

from pathlib import Path

from .conditions import And, CTrue, Condition, Exists, Not, is_false
from .graphs import Graph
from .rules import DirectTransformation, TransformationPair


def _q(s) -> str:
    return '"' + str(s).replace('"', '\\"') + '"'


def _body(g: Graph, prefix: str, node_style=None, edge_style=None, indent="  ") -> list[str]:
    node_style = node_style or {}
    edge_style = edge_style or {}
    lines = []
    for v, t in enumerate(g.node_types):
        attrs = {"label": f"{v}:{t}"}
        attrs.update(node_style.get(v, {}))
        lines.append(f"{indent}{_q(prefix + str(v))} [{_attrs(attrs)}];")
    for e, (s, t, ty) in enumerate(g.edges):
        attrs = {"label": ty}
        attrs.update(edge_style.get(e, {}))
        lines.append(f"{indent}{_q(prefix + str(s))} -> {_q(prefix + str(t))} [{_attrs(attrs)}];")
    return lines


def _attrs(d: dict) -> str:
    return ", ".join(f"{k}={_q(v)}" for k, v in d.items())


def graph_to_dot(g: Graph, name: str = "G") -> str:
    return "\n".join([f"digraph {_q(name)} {{"] + _body(g, "n") + ["}"]) + "\n"


def _step_styles(t: DirectTransformation):
    """Dashed for what the step deletes in its source, bold for what it
    creates in its target."""
    kept_n = set(t.d_left.nodes)
    kept_e = set(t.d_left.edges)
    src_n = {v: {"style": "dashed"} for v in range(t.source.n_nodes) if v not in kept_n}
    src_e = {e: {"style": "dashed"} for e in range(t.source.n_edges) if e not in kept_e}
    old_n = set(t.d_right.nodes)
    old_e = set(t.d_right.edges)
    tgt_n = {v: {"style": "bold"} for v in range(t.target.n_nodes) if v not in old_n}
    tgt_e = {e: {"style": "bold"} for e in range(t.target.n_edges) if e not in old_e}
    return src_n, src_e, tgt_n, tgt_e


def pair_to_dot(tp: TransformationPair, name: str = "pair") -> str:
    """Three panels ``H1 <= G => H2``; the overlap of both matches is shaded."""
    s1n, s1e, t1n, t1e = _step_styles(tp.t1)
    s2n, s2e, t2n, t2e = _step_styles(tp.t2)
    overlap = set(tp.o1.nodes) & set(tp.o2.nodes)
    g_nodes = {}
    for v in range(tp.source.n_nodes):
        st = {}
        if v in s1n or v in s2n:
            st["style"] = "dashed"
        if v in overlap:
            st["style"] = (st.get("style", "") + ",filled").lstrip(",")
            st["fillcolor"] = "lightgrey"
        if st:
            g_nodes[v] = st
    g_edges = {**s1e, **s2e}
    lines = [f"digraph {_q(name)} {{", "  rankdir=LR;"]
    for cname, label, g, ns, es, prefix in (
            ("cluster_h1", f"H1 ({tp.t1.rule.name})", tp.t1.target, t1n, t1e, "h1_"),
            ("cluster_g", "G", tp.source, g_nodes, g_edges, "g_"),
            ("cluster_h2", f"H2 ({tp.t2.rule.name})", tp.t2.target, t2n, t2e, "h2_")):
        lines.append(f"  subgraph {cname} {{")
        lines.append(f"    label={_q(label)};")
        lines.extend(_body(g, prefix, ns, es, "    "))
        lines.append("  }")
    lines.append("}")
    return "\n".join(lines) + "\n"


def condition_to_dot(c: Condition, name: str = "condition") -> str:
    """Each ``Exists`` becomes a cluster holding its codomain; ``Not`` and
    ``And`` become labelled clusters around their children."""
    counter = [0]
    lines = [f"digraph {_q(name)} {{", "  compound=true;"]

    def fresh():
        counter[0] += 1
        return counter[0]

    def walk(x: Condition, indent: str):
        k = fresh()
        if isinstance(x, CTrue) or is_false(x):
            lines.append(f"{indent}{_q(f'c{k}')} [shape=plaintext, label={_q('true' if isinstance(x, CTrue) else 'false')}];")
            return
        if isinstance(x, Not):
            lines.append(f"{indent}subgraph cluster_{k} {{ label=\"not\"; style=dashed;")
            walk(x.child, indent + "  ")
            lines.append(f"{indent}}}")
            return
        if isinstance(x, And):
            lines.append(f"{indent}subgraph cluster_{k} {{ label=\"and\";")
            if not x.children:
                lines.append(f"{indent}  {_q(f'c{k}_empty')} [shape=plaintext, label=\"true\"];")
            for ch in x.children:
                walk(ch, indent + "  ")
            lines.append(f"{indent}}}")
            return
        a = x.morphism
        label = "exists " + ",".join(f"{v}->{w}" for v, w in enumerate(a.nodes))
        lines.append(f"{indent}subgraph cluster_{k} {{ label={_q(label)};")
        lines.extend(_body(a.cod, f"x{k}_", indent=indent + "  "))
        if a.cod.n_nodes == 0:
            lines.append(f"{indent}  {_q(f'x{k}_empty')} [shape=point];")
        walk(x.child, indent + "  ")
        lines.append(f"{indent}}}")

    walk(c, "  ")
    lines.append("}")
    return "\n".join(lines) + "\n"


def export_dot(obj, path) -> Path:
    """Write ``obj`` (graph, pair or condition) as DOT to ``path``."""
    if isinstance(obj, Graph):
        text = graph_to_dot(obj)
    elif isinstance(obj, TransformationPair):
        text = pair_to_dot(obj)
    elif isinstance(obj, Condition):
        text = condition_to_dot(obj)
    else:
        raise TypeError(f"cannot render {type(obj).__name__} as DOT")
    p = Path(path)
    p.parent.mkdir(parents=True, exist_ok=True)
    p.write_text(text)
    return p
