"""Finite typed graphs, their morphisms and the colimit constructions on them.

Graphs use dense integer ids: nodes are ``0..n-1`` and edges ``0..m-1``.
Everything here is immutable, so graphs and morphisms can be used as
dictionary keys and memoisation keys.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterable, Iterator, NamedTuple, Optional, Sequence


class GluingViolation(Exception):
    """Raised when a pushout complement does not exist.

    ``kind`` is ``"dangling"`` or ``"identification"``; ``elements`` lists
    the offending ``("node", id)`` / ``("edge", id)`` items of the host graph
    (dangling) or of the match domain (identification).
    """

    def __init__(self, kind: str, elements: Sequence[tuple[str, int]]):
        self.kind = kind
        self.elements = tuple(elements)
        super().__init__(f"{kind} violation at {list(self.elements)}")


@dataclass(frozen=True)
class TypeGraph:
    nodes: tuple[str, ...]
    edges: tuple[tuple[str, str, str], ...]  # (edge type, source type, target type)

    def __post_init__(self):
        object.__setattr__(self, "nodes", tuple(self.nodes))
        object.__setattr__(self, "edges", tuple(tuple(e) for e in self.edges))
        if len(set(self.nodes)) != len(self.nodes):
            raise ValueError("duplicate node type")
        names = [e[0] for e in self.edges]
        if len(set(names)) != len(names):
            raise ValueError("duplicate edge type")
        for name, src, tgt in self.edges:
            if src not in self.nodes or tgt not in self.nodes:
                raise ValueError(f"edge type {name!r} has undeclared endpoint type")

    @cached_property
    def edge_ends(self) -> dict[str, tuple[str, str]]:
        return {name: (src, tgt) for name, src, tgt in self.edges}


UNTYPED = TypeGraph(("N",), (("E", "N", "N"),))


@dataclass(frozen=True, eq=False)
class Graph:
    """A finite graph typed over ``type_graph``.

    ``edges[e] = (source, target, edge_type)``.
    """

    type_graph: TypeGraph
    node_types: tuple[str, ...]
    edges: tuple[tuple[int, int, str], ...]

    def __post_init__(self):
        object.__setattr__(self, "node_types", tuple(self.node_types))
        object.__setattr__(self, "edges", tuple(tuple(e) for e in self.edges))
        tg = self.type_graph
        for t in self.node_types:
            if t not in tg.nodes:
                raise ValueError(f"unknown node type {t!r}")
        n = len(self.node_types)
        for e, (s, t, ty) in enumerate(self.edges):
            if not (0 <= s < n and 0 <= t < n):
                raise ValueError(f"edge {e} has a missing endpoint")
            if ty not in tg.edge_ends:
                raise ValueError(f"unknown edge type {ty!r}")
            if (self.node_types[s], self.node_types[t]) != tg.edge_ends[ty]:
                raise ValueError(f"edge {e} endpoint types do not match {ty!r}")

    @classmethod
    def build(cls, nodes, edges=(), type_graph: TypeGraph = UNTYPED) -> "Graph":
        """Convenience constructor.

        ``nodes`` is a count (all of the first node type) or a sequence of
        node types; edges are ``(s, t)`` or ``(s, t, type)`` triples.
        """
        if isinstance(nodes, int):
            nodes = (type_graph.nodes[0],) * nodes
        default_edge = type_graph.edges[0][0] if type_graph.edges else None
        es = tuple(e if len(e) == 3 else (e[0], e[1], default_edge) for e in edges)
        return cls(type_graph, tuple(nodes), es)

    @classmethod
    def empty(cls, type_graph: TypeGraph = UNTYPED) -> "Graph":
        return cls(type_graph, (), ())

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, Graph):
            return NotImplemented
        return (self.node_types == other.node_types and self.edges == other.edges
                and self.type_graph == other.type_graph)

    def __hash__(self):
        return self._hash

    @cached_property
    def _hash(self) -> int:
        return hash((self.node_types, self.edges, self.type_graph))

    @property
    def n_nodes(self) -> int:
        return len(self.node_types)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    @property
    def size(self) -> tuple[int, int]:
        return (len(self.node_types), len(self.edges))

    @cached_property
    def edge_groups(self) -> dict[tuple[int, int, str], tuple[int, ...]]:
        groups: dict[tuple[int, int, str], list[int]] = {}
        for e, key in enumerate(self.edges):
            groups.setdefault(key, []).append(e)
        return {k: tuple(v) for k, v in groups.items()}

    @cached_property
    def incident(self) -> tuple[tuple[int, ...], ...]:
        inc: list[list[int]] = [[] for _ in self.node_types]
        for e, (s, t, _) in enumerate(self.edges):
            inc[s].append(e)
            if t != s:
                inc[t].append(e)
        return tuple(tuple(x) for x in inc)

    @cached_property
    def nodes_of_type(self) -> dict[str, tuple[int, ...]]:
        out: dict[str, list[int]] = {}
        for v, t in enumerate(self.node_types):
            out.setdefault(t, []).append(v)
        return {k: tuple(v) for k, v in out.items()}

    def __repr__(self):
        if self.type_graph == UNTYPED:
            es = ", ".join(f"{s}->{t}" for s, t, _ in self.edges)
            return f"Graph({self.n_nodes} nodes; {es})" if es else f"Graph({self.n_nodes} nodes)"
        es = ", ".join(f"{s}-{ty}->{t}" for s, t, ty in self.edges)
        return f"Graph({list(self.node_types)}; {es})" if es else f"Graph({list(self.node_types)})"


class MorphismClass(NamedTuple):
    mono: bool
    epi: bool
    iso: bool


@dataclass(frozen=True, eq=False)
class Morphism:
    """A typed graph morphism ``dom -> cod`` given by total node and edge maps."""

    dom: Graph
    cod: Graph
    nodes: tuple[int, ...]
    edges: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "nodes", tuple(self.nodes))
        object.__setattr__(self, "edges", tuple(self.edges))
        dom, cod = self.dom, self.cod
        if dom.type_graph != cod.type_graph:
            raise ValueError("morphism between graphs over different type graphs")
        if len(self.nodes) != dom.n_nodes or len(self.edges) != dom.n_edges:
            raise ValueError("morphism is not total")
        for v, w in enumerate(self.nodes):
            if not 0 <= w < cod.n_nodes or dom.node_types[v] != cod.node_types[w]:
                raise ValueError(f"node {v} mapped to invalid or ill-typed node {w}")
        for e, f in enumerate(self.edges):
            if not 0 <= f < cod.n_edges:
                raise ValueError(f"edge {e} mapped to missing edge {f}")
            s, t, ty = dom.edges[e]
            if cod.edges[f] != (self.nodes[s], self.nodes[t], ty):
                raise ValueError(f"edge {e} mapping does not commute with source/target")

    @classmethod
    def identity(cls, g: Graph) -> "Morphism":
        return cls(g, g, tuple(range(g.n_nodes)), tuple(range(g.n_edges)))

    @classmethod
    def initial(cls, g: Graph) -> "Morphism":
        return cls(Graph.empty(g.type_graph), g, (), ())

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, Morphism):
            return NotImplemented
        return (self.nodes == other.nodes and self.edges == other.edges
                and self.dom == other.dom and self.cod == other.cod)

    def __hash__(self):
        return self._hash

    @cached_property
    def _hash(self) -> int:
        return hash((self.nodes, self.edges, self.dom, self.cod))

    @cached_property
    def is_injective(self) -> bool:
        return (len(set(self.nodes)) == len(self.nodes)
                and len(set(self.edges)) == len(self.edges))

    @cached_property
    def is_surjective(self) -> bool:
        return (len(set(self.nodes)) == self.cod.n_nodes
                and len(set(self.edges)) == self.cod.n_edges)

    @property
    def is_iso(self) -> bool:
        return self.is_injective and self.is_surjective

    def then(self, g: "Morphism") -> "Morphism":
        """``g ∘ self``."""
        return compose(self, g)

    def inverse(self) -> "Morphism":
        if not self.is_iso:
            raise ValueError("only isomorphisms are invertible")
        nodes = [0] * self.cod.n_nodes
        for v, w in enumerate(self.nodes):
            nodes[w] = v
        edges = [0] * self.cod.n_edges
        for e, f in enumerate(self.edges):
            edges[f] = e
        return Morphism(self.cod, self.dom, tuple(nodes), tuple(edges))

    def node_image(self) -> frozenset[int]:
        return frozenset(self.nodes)

    def edge_image(self) -> frozenset[int]:
        return frozenset(self.edges)

    def __repr__(self):
        return f"Morphism(nodes={list(self.nodes)}, edges={list(self.edges)})"


@dataclass(frozen=True)
class Span:
    left: Morphism
    right: Morphism

    def __post_init__(self):
        if self.left.dom != self.right.dom:
            raise ValueError("span legs must share their domain")


@dataclass(frozen=True)
class Cospan:
    left: Morphism
    right: Morphism

    def __post_init__(self):
        if self.left.cod != self.right.cod:
            raise ValueError("cospan legs must share their codomain")


def compose(f: Morphism, g: Morphism) -> Morphism:
    """Return ``g ∘ f``."""
    if f.cod != g.dom:
        raise ValueError("cannot compose: codomain of f differs from domain of g")
    return Morphism(f.dom, g.cod,
                    tuple(g.nodes[v] for v in f.nodes),
                    tuple(g.edges[e] for e in f.edges))


def classify_morphism(f: Morphism) -> MorphismClass:
    return MorphismClass(f.is_injective, f.is_surjective, f.is_iso)


# ---------------------------------------------------------------------------
# morphism search

def _node_order(a: Graph, fixed: Iterable[int]) -> list[int]:
    chosen = set(fixed)
    rest = [v for v in range(a.n_nodes) if v not in chosen]
    order = []
    while rest:
        def score(v):
            linked = 0
            for e in a.incident[v]:
                s, t, _ = a.edges[e]
                if (s in chosen) or (t in chosen):
                    linked += 1
            return (-linked, -len(a.incident[v]), v)
        best = min(rest, key=score)
        rest.remove(best)
        chosen.add(best)
        order.append(best)
    return order


def iter_morphisms(a: Graph, b: Graph, mono: bool = False,
                   fixed_nodes: Optional[dict[int, int]] = None,
                   fixed_edges: Optional[dict[int, int]] = None) -> Iterator[Morphism]:
    """Yield every morphism ``a -> b`` (injective ones if ``mono``) agreeing
    with the given partial node/edge assignments."""
    if a.type_graph != b.type_graph:
        return
    fn = dict(fixed_nodes or {})
    fe = dict(fixed_edges or {})
    for e, f in fe.items():
        s, t, ty = a.edges[e]
        s2, t2, ty2 = b.edges[f]
        if ty != ty2:
            return
        for x, y in ((s, s2), (t, t2)):
            if fn.setdefault(x, y) != y:
                return
    for v, w in fn.items():
        if not 0 <= w < b.n_nodes or a.node_types[v] != b.node_types[w]:
            return
    if mono and (len(set(fn.values())) != len(fn) or len(set(fe.values())) != len(fe)):
        return
    if mono and (a.n_nodes > b.n_nodes or a.n_edges > b.n_edges):
        return

    groups = a.edge_groups
    bgroups = b.edge_groups
    node_map: list[Optional[int]] = [None] * a.n_nodes
    for v, w in fn.items():
        node_map[v] = w
    for (s, t, ty), es in groups.items():
        if node_map[s] is not None and node_map[t] is not None:
            if not bgroups.get((node_map[s], node_map[t], ty)):
                return
    used_nodes = set(fn.values()) if mono else set()
    order = _node_order(a, fn)
    need = {key: len(es) for key, es in groups.items()}

    def edges_ok(v):
        for e in a.incident[v]:
            s, t, ty = a.edges[e]
            ms, mt = node_map[s], node_map[t]
            if ms is None or mt is None:
                continue
            avail = len(bgroups.get((ms, mt, ty), ()))
            if avail == 0 or (mono and avail < need[(s, t, ty)]):
                return False
        return True

    free_edges = [e for e in range(a.n_edges) if e not in fe]

    def assign_edges(i, edge_map, used):
        if i == len(free_edges):
            yield Morphism(a, b, tuple(node_map), tuple(edge_map))
            return
        e = free_edges[i]
        s, t, ty = a.edges[e]
        for f in bgroups.get((node_map[s], node_map[t], ty), ()):
            if mono and f in used:
                continue
            edge_map[e] = f
            if mono:
                used.add(f)
            yield from assign_edges(i + 1, edge_map, used)
            if mono:
                used.discard(f)

    def assign_nodes(i):
        if i == len(order):
            edge_map = [None] * a.n_edges
            for e, f in fe.items():
                edge_map[e] = f
            yield from assign_edges(0, edge_map, set(fe.values()) if mono else set())
            return
        v = order[i]
        for w in b.nodes_of_type.get(a.node_types[v], ()):
            if mono and w in used_nodes:
                continue
            node_map[v] = w
            if edges_ok(v):
                if mono:
                    used_nodes.add(w)
                yield from assign_nodes(i + 1)
                if mono:
                    used_nodes.discard(w)
            node_map[v] = None

    yield from assign_nodes(0)


def enumerate_morphisms(a: Graph, b: Graph, restrict: str = "all") -> list[Morphism]:
    if restrict not in ("all", "mono"):
        raise ValueError("restrict must be 'all' or 'mono'")
    return list(iter_morphisms(a, b, mono=restrict == "mono"))


def lift_through_mono(f: Morphism, k: Morphism) -> Optional[Morphism]:
    """The unique ``d`` with ``k ∘ d = f`` for injective ``k``, if any."""
    if f.cod != k.cod:
        raise ValueError("f and k must share their codomain")
    node_pre = {w: v for v, w in enumerate(k.nodes)}
    edge_pre = {w: v for v, w in enumerate(k.edges)}
    try:
        nodes = tuple(node_pre[w] for w in f.nodes)
        edges = tuple(edge_pre[w] for w in f.edges)
    except KeyError:
        return None
    return Morphism(f.dom, k.dom, nodes, edges)


def mediate(o1: Morphism, o2: Morphism, m1: Morphism, m2: Morphism) -> Optional[Morphism]:
    """The morphism ``m`` with ``m∘o1 = m1`` and ``m∘o2 = m2`` when ``(o1, o2)``
    is jointly surjective, or ``None`` if the assignments clash."""
    k = o1.cod
    nodes: list[Optional[int]] = [None] * k.n_nodes
    edges: list[Optional[int]] = [None] * k.n_edges
    for o, m in ((o1, m1), (o2, m2)):
        for v, w in enumerate(o.nodes):
            if nodes[w] is None:
                nodes[w] = m.nodes[v]
            elif nodes[w] != m.nodes[v]:
                return None
        for e, f in enumerate(o.edges):
            if edges[f] is None:
                edges[f] = m.edges[e]
            elif edges[f] != m.edges[e]:
                return None
    if None in nodes or None in edges:
        raise ValueError("mediate needs a jointly surjective pair")
    try:
        return Morphism(k, m1.cod, tuple(nodes), tuple(edges))
    except ValueError:
        return None


def jointly_surjective(f: Morphism, g: Morphism) -> bool:
    k = f.cod
    return (len(set(f.nodes) | set(g.nodes)) == k.n_nodes
            and len(set(f.edges) | set(g.edges)) == k.n_edges)


# ---------------------------------------------------------------------------
# colimits

class _UnionFind:
    def __init__(self, n):
        self.parent = list(range(n))

    def find(self, x):
        while self.parent[x] != x:
            self.parent[x] = self.parent[self.parent[x]]
            x = self.parent[x]
        return x

    def union(self, x, y):
        rx, ry = self.find(x), self.find(y)
        if rx == ry:
            return False
        if rx < ry:
            self.parent[ry] = rx
        else:
            self.parent[rx] = ry
        return True


def _quotient_by_classes(u: Graph, node_cls: Sequence[int], edge_cls: Sequence[int]) -> Morphism:
    """Build ``u -> u/~`` from class labels; classes are renumbered by first
    occurrence so the result is deterministic."""
    nmap: dict[int, int] = {}
    node_types = []
    for v, c in enumerate(node_cls):
        if c not in nmap:
            nmap[c] = len(node_types)
            node_types.append(u.node_types[v])
    emap: dict[int, int] = {}
    edges = []
    for e, c in enumerate(edge_cls):
        if c not in emap:
            emap[c] = len(edges)
            s, t, ty = u.edges[e]
            edges.append((nmap[node_cls[s]], nmap[node_cls[t]], ty))
    q = Graph(u.type_graph, tuple(node_types), tuple(edges))
    return Morphism(u, q, tuple(nmap[c] for c in node_cls), tuple(emap[c] for c in edge_cls))


def _close(u: Graph, node_pairs, edge_pairs):
    nuf, euf = _UnionFind(u.n_nodes), _UnionFind(u.n_edges)
    for x, y in node_pairs:
        nuf.union(x, y)
    for x, y in edge_pairs:
        euf.union(x, y)
    for e in range(u.n_edges):
        r = euf.find(e)
        if r != e:
            s, t, _ = u.edges[e]
            s2, t2, _ = u.edges[r]
            nuf.union(s, s2)
            nuf.union(t, t2)
    return nuf, euf


def quotient(u: Graph, node_pairs=(), edge_pairs=()) -> Morphism:
    """Quotient of ``u`` by the smallest congruence containing the pairs."""
    nuf, euf = _close(u, node_pairs, edge_pairs)
    node_cls = [nuf.find(v) for v in range(u.n_nodes)]
    for v, c in enumerate(node_cls):
        if u.node_types[v] != u.node_types[c]:
            raise ValueError("quotient would identify nodes of different types")
    # parallel edges stay distinct unless explicitly identified
    return _quotient_by_classes(u, node_cls, [euf.find(e) for e in range(u.n_edges)])


def coproduct(a: Graph, b: Graph) -> tuple[Graph, Morphism, Morphism]:
    if a.type_graph != b.type_graph:
        raise ValueError("coproduct of graphs over different type graphs")
    n, m = a.n_nodes, a.n_edges
    s = Graph(a.type_graph, a.node_types + b.node_types,
              a.edges + tuple((x + n, y + n, ty) for x, y, ty in b.edges))
    i1 = Morphism(a, s, tuple(range(n)), tuple(range(m)))
    i2 = Morphism(b, s, tuple(range(n, n + b.n_nodes)), tuple(range(m, m + b.n_edges)))
    return s, i1, i2


def copair(i1: Morphism, i2: Morphism, h1: Morphism, h2: Morphism) -> Morphism:
    """The coproduct mediating morphism ``[h1, h2]``."""
    return mediate(i1, i2, h1, h2)


def pushout(f: Morphism, g: Morphism) -> tuple[Graph, Morphism, Morphism]:
    """Pushout of ``B <-f- A -g-> C``.

    Returns ``(D, f_star: C -> D, g_star: B -> D)`` with ``g_star∘f = f_star∘g``.
    """
    if f.dom != g.dom:
        raise ValueError("pushout needs a span")
    s, i1, i2 = coproduct(f.cod, g.cod)
    npairs = [(i1.nodes[f.nodes[v]], i2.nodes[g.nodes[v]]) for v in range(f.dom.n_nodes)]
    epairs = [(i1.edges[f.edges[e]], i2.edges[g.edges[e]]) for e in range(f.dom.n_edges)]
    q = quotient(s, npairs, epairs)
    return q.cod, compose(i2, q), compose(i1, q)


def gluing_violation(l: Morphism, m: Morphism) -> Optional[GluingViolation]:
    """Check the gluing condition for ``l: I -> L`` (mono) and ``m: L -> G``."""
    if not l.is_injective:
        raise ValueError("rule leg must be injective")
    lhs, g = m.dom, m.cod
    kept_n, kept_e = set(l.nodes), set(l.edges)
    del_n = [v for v in range(lhs.n_nodes) if v not in kept_n]
    del_e = [e for e in range(lhs.n_edges) if e not in kept_e]
    bad = []
    seen: dict[int, int] = {}
    for v in range(lhs.n_nodes):
        w = m.nodes[v]
        if w in seen:
            u = seen[w]
            if u not in kept_n or v not in kept_n:
                bad.extend([("node", u), ("node", v)])
        else:
            seen[w] = v
    seen = {}
    for e in range(lhs.n_edges):
        w = m.edges[e]
        if w in seen:
            u = seen[w]
            if u not in kept_e or e not in kept_e:
                bad.extend([("edge", u), ("edge", e)])
        else:
            seen[w] = e
    if bad:
        return GluingViolation("identification", sorted(set(bad)))
    gone_n = {m.nodes[v] for v in del_n}
    gone_e = {m.edges[e] for e in del_e}
    dangling = [("edge", e) for e, (s, t, _) in enumerate(g.edges)
                if e not in gone_e and (s in gone_n or t in gone_n)]
    if dangling:
        return GluingViolation("dangling", dangling)
    return None


def pushout_complement(l: Morphism, m: Morphism) -> tuple[Graph, Morphism, Morphism]:
    """Pushout complement of ``I -l-> L -m-> G``.

    Returns ``(D, i: I -> D, d: D -> G)``; raises :class:`GluingViolation`.
    """
    if l.cod != m.dom:
        raise ValueError("l and m are not composable")
    bad = gluing_violation(l, m)
    if bad is not None:
        raise bad
    lhs, g = m.dom, m.cod
    kept_n, kept_e = set(l.nodes), set(l.edges)
    gone_n = {m.nodes[v] for v in range(lhs.n_nodes) if v not in kept_n}
    gone_e = {m.edges[e] for e in range(lhs.n_edges) if e not in kept_e}
    d_nodes = [v for v in range(g.n_nodes) if v not in gone_n]
    d_edges = [e for e in range(g.n_edges) if e not in gone_e]
    nidx = {v: i for i, v in enumerate(d_nodes)}
    eidx = {e: i for i, e in enumerate(d_edges)}
    d = Graph(g.type_graph, tuple(g.node_types[v] for v in d_nodes),
              tuple((nidx[g.edges[e][0]], nidx[g.edges[e][1]], g.edges[e][2]) for e in d_edges))
    incl = Morphism(d, g, tuple(d_nodes), tuple(d_edges))
    i = Morphism(l.dom, d, tuple(nidx[m.nodes[x]] for x in l.nodes),
                 tuple(eidx[m.edges[x]] for x in l.edges))
    return d, i, incl


def epi_mono_factorize(f: Morphism) -> tuple[Morphism, Morphism]:
    """Split ``f`` into ``m ∘ e`` with ``e`` surjective and ``m`` injective."""
    b = f.cod
    img_n = sorted(set(f.nodes))
    img_e = sorted(set(f.edges))
    nidx = {v: i for i, v in enumerate(img_n)}
    eidx = {e: i for i, e in enumerate(img_e)}
    c = Graph(b.type_graph, tuple(b.node_types[v] for v in img_n),
              tuple((nidx[b.edges[e][0]], nidx[b.edges[e][1]], b.edges[e][2]) for e in img_e))
    e = Morphism(f.dom, c, tuple(nidx[v] for v in f.nodes), tuple(eidx[x] for x in f.edges))
    m = Morphism(c, b, tuple(img_n), tuple(img_e))
    return e, m


# ---------------------------------------------------------------------------
# quotient enumeration (jointly surjective pairs, Shift overlaps)

def enumerate_quotients(u: Graph, node_pairs=(), edge_pairs=(),
                        node_groups: Optional[Sequence[Optional[int]]] = None,
                        edge_groups: Optional[Sequence[Optional[int]]] = None) -> Iterator[Morphism]:
    """Yield every quotient ``u -> Q`` identifying at least the given pairs.

    An element tagged with group ``g`` may share its class with at most one
    element per group, which is how injectivity of a coproduct leg is
    enforced. Each quotient is produced once.
    """
    ng = list(node_groups) if node_groups is not None else [None] * u.n_nodes
    eg = list(edge_groups) if edge_groups is not None else [None] * u.n_edges
    nuf, euf = _close(u, node_pairs, edge_pairs)

    def blocks(uf, n, groups, typ):
        out: dict[int, list[int]] = {}
        for x in range(n):
            out.setdefault(uf.find(x), []).append(x)
        res = []
        for root in sorted(out):
            members = out[root]
            gs = [groups[x] for x in members if groups[x] is not None]
            if len(gs) != len(set(gs)):
                return None
            types = {typ(x) for x in members}
            if len(types) != 1:
                return None
            res.append((members, frozenset(gs), types.pop()))
        return res

    nblocks = blocks(nuf, u.n_nodes, ng, lambda v: u.node_types[v])
    eblocks_raw = blocks(euf, u.n_edges, eg, lambda e: u.edges[e][2])
    if nblocks is None or eblocks_raw is None:
        return

    def coarsen(items, compatible):
        """Set partitions of ``items`` into compatible groups (restricted growth)."""
        merged: list[list[int]] = []
        state: list[tuple] = []

        def rec(i):
            if i == len(items):
                yield [list(g) for g in merged]
                return
            it = items[i]
            for j, g in enumerate(merged):
                if compatible(state[j], it):
                    old = state[j]
                    g.append(i)
                    state[j] = (old[0], old[1] | it[1], old[2])
                    yield from rec(i + 1)
                    g.pop()
                    state[j] = old
            merged.append([i])
            state.append((it[0], it[1], it[2]))
            yield from rec(i + 1)
            merged.pop()
            state.pop()
        yield from rec(0)

    def compatible(st, it):
        return st[2] == it[2] and not (st[1] & it[1])

    for node_part in coarsen(nblocks, compatible):
        node_cls = [0] * u.n_nodes
        for c, grp in enumerate(node_part):
            for bi in grp:
                for v in nblocks[bi][0]:
                    node_cls[v] = c
        # edge blocks keyed additionally by endpoint classes
        eitems = []
        for members, gs, ty in eblocks_raw:
            s, t, _ = u.edges[members[0]]
            eitems.append((members, gs, (node_cls[s], node_cls[t], ty)))
        for edge_part in coarsen(eitems, compatible):
            edge_cls = [0] * u.n_edges
            for c, grp in enumerate(edge_part):
                for bi in grp:
                    for e in eitems[bi][0]:
                        edge_cls[e] = c
            yield _quotient_by_classes(u, node_cls, edge_cls)


def enumerate_jointly_epi_pairs(a1: Graph, a2: Graph, restrict_second_to_mono: bool = False,
                                restrict_first_to_mono: bool = False) -> list[tuple[Morphism, Morphism]]:
    """All jointly surjective pairs ``(e1: a1 -> K, e2: a2 -> K)`` up to iso."""
    s, i1, i2 = coproduct(a1, a2)
    ng = ([0 if restrict_first_to_mono else None] * a1.n_nodes
          + [1 if restrict_second_to_mono else None] * a2.n_nodes)
    eg = ([0 if restrict_first_to_mono else None] * a1.n_edges
          + [1 if restrict_second_to_mono else None] * a2.n_edges)
    return [(compose(i1, q), compose(i2, q))
            for q in enumerate_quotients(s, node_groups=ng, edge_groups=eg)]


def overlap_key(e1: Morphism, e2: Morphism) -> tuple:
    """Iso-invariant key of a jointly surjective pair: the kernel partition."""
    return (e1.nodes + e2.nodes, e1.edges + e2.edges)


# ---------------------------------------------------------------------------
# isomorphism and canonical forms

def _refined_cells(g: Graph) -> list[list[int]]:
    colour = [(t,) for t in g.node_types]
    for _ in range(3):
        new = []
        for v in range(g.n_nodes):
            outs, ins = [], []
            for e in g.incident[v]:
                s, t, ty = g.edges[e]
                if s == v:
                    outs.append((ty, colour[t], t == v))
                if t == v and s != v:
                    ins.append((ty, colour[s]))
            new.append((colour[v], tuple(sorted(outs)), tuple(sorted(ins))))
        ranks = {c: i for i, c in enumerate(sorted(set(new)))}
        nxt = [(ranks[c],) for c in new]
        if len(set(nxt)) == len(set(colour)):
            colour = nxt
            break
        colour = nxt
    cells: dict = {}
    for v in range(g.n_nodes):
        cells.setdefault((g.node_types[v], colour[v]), []).append(v)
    return [cells[k] for k in sorted(cells)]


def canonical_form(g: Graph) -> tuple:
    """Exact canonical encoding: isomorphic graphs get equal keys."""
    cells = _refined_cells(g)
    best = None
    for perms in itertools.product(*(itertools.permutations(c) for c in cells)):
        pos = {}
        for v in itertools.chain.from_iterable(perms):
            pos[v] = len(pos)
        types = tuple(g.node_types[v] for v in itertools.chain.from_iterable(perms))
        enc = (types, tuple(sorted((pos[s], pos[t], ty) for s, t, ty in g.edges)))
        if best is None or enc < best:
            best = enc
    if best is None:
        best = ((), ())
    return best


def find_isomorphism(a: Graph, b: Graph) -> Optional[Morphism]:
    if a.size != b.size or a.type_graph != b.type_graph:
        return None
    if sorted(a.node_types) != sorted(b.node_types):
        return None
    if sorted(e[2] for e in a.edges) != sorted(e[2] for e in b.edges):
        return None
    return next(iter_morphisms(a, b, mono=True), None)


def are_isomorphic(a: Graph, b: Graph) -> Optional[Morphism]:
    return find_isomorphism(a, b)


@lru_cache(maxsize=None)
def enumerate_graphs(type_graph: TypeGraph, max_nodes: int, max_edges: int) -> tuple[Graph, ...]:
    """Every graph with at most the given numbers of nodes and edges, one per
    isomorphism class, ordered by size."""
    out = []
    for n in range(max_nodes + 1):
        for types in itertools.combinations_with_replacement(type_graph.nodes, n):
            slots = [(s, t, name) for s in range(n) for t in range(n)
                     for name, st, tt in type_graph.edges
                     if types[s] == st and types[t] == tt]
            seen = set()
            for k in range(max_edges + 1):
                for combo in itertools.combinations_with_replacement(slots, k):
                    g = Graph(type_graph, types, combo)
                    key = canonical_form(g)
                    if key not in seen:
                        seen.add(key)
                        out.append((n, k, key, g))
    out.sort(key=lambda x: (x[0], x[1], x[2]))
    return tuple(x[3] for x in out)
