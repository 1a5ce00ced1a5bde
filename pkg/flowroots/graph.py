"""
Multigraphs with stable edge ids.

Contains:
- Multigraph / Edge: immutable value types; loops and parallel edges allowed
- parse / parse_stream: graph6, sparse6 and edge-list ingestion
- delete_edge / contract_edge and the derived edits identify_vertices,
  split_at_cutset, blocks
- bridges, edge_connectivity, series_reduce, minimal_three_cutsets
- canonical_key: exact isomorphism-invariant key (used as the memo key)
"""

import logging
import re
from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from itertools import combinations
from typing import Dict, FrozenSet, Iterable, List, NamedTuple, Optional, Sequence, Tuple

import networkx as nx

from .exceptions import (
    Disconnected,
    GraphError,
    HasBridge,
    MalformedInput,
    NotThreeEdgeConnected,
    UnknownEdge,
)

logger = logging.getLogger('flowroots')


class Edge(NamedTuple):
    """Edge with endpoints stored as u <= v"""
    u: int
    v: int
    eid: int

    @property
    def is_loop(self) -> bool:
        return self.u == self.v

    def other(self, vertex: int) -> int:
        return self.v if vertex == self.u else self.u


@dataclass(frozen=True)
class Multigraph:
    """
    Vertices 0..n-1 and a multiset of edges identified by their ids.

    Ids survive every edit: deleting or contracting one edge never renumbers
    the others, so cutsets and decomposition traces can be reported against
    the input graph.
    """

    n: int
    edges: Tuple[Edge, ...] = ()

    def __post_init__(self):
        normalized = []
        seen = set()
        for u, v, eid in self.edges:
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise GraphError(f"edge {eid} has an endpoint outside 0..{self.n - 1}")
            if eid in seen:
                raise GraphError(f"duplicate edge id {eid}")
            seen.add(eid)
            normalized.append(Edge(min(u, v), max(u, v), eid))
        normalized.sort(key=lambda e: e.eid)
        object.__setattr__(self, 'edges', tuple(normalized))

    @classmethod
    def from_pairs(cls, n: int, pairs: Iterable[Tuple[int, int]]) -> 'Multigraph':
        """Build a graph whose edge ids follow the order of ``pairs``"""
        return cls(n, tuple(Edge(u, v, i) for i, (u, v) in enumerate(pairs)))

    # Basic counts

    @property
    def m(self) -> int:
        return len(self.edges)

    @cached_property
    def edge_ids(self) -> Tuple[int, ...]:
        return tuple(e.eid for e in self.edges)

    @cached_property
    def _by_id(self) -> Dict[int, Edge]:
        return {e.eid: e for e in self.edges}

    def edge(self, eid: int) -> Edge:
        try:
            return self._by_id[eid]
        except KeyError:
            raise UnknownEdge(eid)

    def has_edge(self, eid: int) -> bool:
        return eid in self._by_id

    @cached_property
    def loops(self) -> Tuple[Edge, ...]:
        return tuple(e for e in self.edges if e.is_loop)

    @cached_property
    def degrees(self) -> Tuple[int, ...]:
        deg = [0] * self.n
        for u, v, _ in self.edges:
            deg[u] += 1
            deg[v] += 1
        return tuple(deg)

    @cached_property
    def incidence(self) -> Tuple[Tuple[Edge, ...], ...]:
        """Edges at each vertex; a loop is listed once"""
        at: List[List[Edge]] = [[] for _ in range(self.n)]
        for e in self.edges:
            at[e.u].append(e)
            if not e.is_loop:
                at[e.v].append(e)
        return tuple(tuple(x) for x in at)

    @cached_property
    def multiplicities(self) -> Dict[Tuple[int, int], int]:
        counts: Dict[Tuple[int, int], int] = {}
        for u, v, _ in self.edges:
            counts[(u, v)] = counts.get((u, v), 0) + 1
        return counts

    def multiplicity(self, eid: int) -> int:
        e = self.edge(eid)
        return self.multiplicities[(e.u, e.v)]

    # Connectivity

    @cached_property
    def components(self) -> Tuple[Tuple[int, ...], ...]:
        """Vertex sets of the connected components, ordered by smallest vertex"""
        parent = list(range(self.n))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for u, v, _ in self.edges:
            ru, rv = find(u), find(v)
            if ru != rv:
                parent[max(ru, rv)] = min(ru, rv)
        groups: Dict[int, List[int]] = {}
        for x in range(self.n):
            groups.setdefault(find(x), []).append(x)
        return tuple(tuple(groups[root]) for root in sorted(groups))

    @property
    def num_components(self) -> int:
        return len(self.components)

    @property
    def is_connected(self) -> bool:
        return self.num_components <= 1

    @property
    def nullity(self) -> int:
        """|E| - |V| + c: rank of the cocycle matroid, degree of the flow polynomial"""
        return self.m - self.n + self.num_components

    @property
    def rank(self) -> int:
        """|V| - c: rank of the cycle matroid"""
        return self.n - self.num_components

    # Views

    def simple_networkx(self) -> nx.Graph:
        """Underlying simple graph: loops dropped, parallel classes collapsed"""
        graph = nx.Graph()
        graph.add_nodes_from(range(self.n))
        graph.add_edges_from((u, v) for u, v, _ in self.edges if u != v)
        return graph

    def simple(self) -> 'Multigraph':
        """Underlying simple graph; each parallel class keeps its smallest id"""
        kept = {}
        for e in self.edges:
            if not e.is_loop and (e.u, e.v) not in kept:
                kept[(e.u, e.v)] = e
        return Multigraph(self.n, tuple(kept.values()))

    def without_loops(self) -> 'Multigraph':
        return Multigraph(self.n, tuple(e for e in self.edges if not e.is_loop))

    def restrict_edges(self, eids: Iterable[int]) -> 'Multigraph':
        """Spanning subgraph on the given edge ids"""
        wanted = set(eids)
        return Multigraph(self.n, tuple(e for e in self.edges if e.eid in wanted))

    def relabel(self, mapping: Sequence[int]) -> 'Multigraph':
        """Rename vertex x to mapping[x]; mapping must be a permutation"""
        if sorted(mapping) != list(range(self.n)):
            raise GraphError("relabel mapping is not a permutation")
        return Multigraph(self.n, tuple(Edge(mapping[u], mapping[v], eid) for u, v, eid in self.edges))

    def is_simple(self) -> bool:
        return not self.loops and all(c == 1 for c in self.multiplicities.values())

    def __str__(self) -> str:
        body = " ".join(f"{u}-{v}" for u, v, _ in self.edges)
        return f"Multigraph(n={self.n}, m={self.m}: {body})"


# Parsing

class GraphFormat(Enum):
    GRAPH6 = "graph6"
    SPARSE6 = "sparse6"
    EDGELIST = "edgelist"


GRAPH6_HEADER = b">>graph6<<"
SPARSE6_HEADER = b">>sparse6<<"
_TOKEN = re.compile(rb"\S+")


def _read_size(data: bytes, pos: int, base: int) -> Tuple[int, int]:
    """Decode the N(n) field starting at data[pos]; returns (n, next position)"""
    if pos >= len(data):
        raise MalformedInput("missing vertex count", base + pos)
    if data[pos] < 126:
        return data[pos] - 63, pos + 1
    if pos + 1 < len(data) and data[pos + 1] == 126:
        width, start = 6, pos + 2
    else:
        width, start = 3, pos + 1
    if start + width > len(data):
        raise MalformedInput("truncated vertex count", base + len(data))
    n = 0
    for byte in data[start:start + width]:
        n = (n << 6) | (byte - 63)
    return n, start + width


def _check_printable(data: bytes, base: int, start: int = 0):
    for i in range(start, len(data)):
        if not 63 <= data[i] <= 126:
            raise MalformedInput(f"byte {data[i]!r} outside the printable range 63..126", base + i)


def _from_networkx(graph: nx.Graph) -> Multigraph:
    n = graph.number_of_nodes()
    pairs = sorted((min(u, v), max(u, v)) for u, v in graph.edges())
    return Multigraph.from_pairs(n, pairs)


def _parse_graph6(data: bytes, base: int = 0) -> Multigraph:
    start = len(GRAPH6_HEADER) if data.startswith(GRAPH6_HEADER) else 0
    _check_printable(data, base, start)
    n, pos = _read_size(data, start, base)
    needed = (n * (n - 1) // 2 + 5) // 6
    if len(data) - pos < needed:
        raise MalformedInput(f"graph6 body needs {needed} bytes for n={n}", base + len(data))
    if len(data) - pos > needed:
        raise MalformedInput("trailing bytes after graph6 body", base + pos + needed)
    try:
        return _from_networkx(nx.from_graph6_bytes(data[start:]))
    except (nx.NetworkXError, ValueError) as exc:
        raise MalformedInput(str(exc), base + start)


def _parse_sparse6(data: bytes, base: int = 0) -> Multigraph:
    start = len(SPARSE6_HEADER) if data.startswith(SPARSE6_HEADER) else 0
    if data[start:start + 1] != b":":
        raise MalformedInput("sparse6 record must start with ':'", base + start)
    _check_printable(data, base, start + 1)
    _read_size(data, start + 1, base)
    try:
        graph = nx.from_sparse6_bytes(data[start:])
    except (nx.NetworkXError, ValueError, IndexError) as exc:
        raise MalformedInput(str(exc), base + start)
    pairs = sorted((min(u, v), max(u, v)) for u, v, _ in graph.edges(keys=True))
    return Multigraph.from_pairs(graph.number_of_nodes(), pairs)


def _line_of(data: bytes, offset: int) -> int:
    return data.count(b"\n", 0, offset) + 1


def _parse_edgelists(data: bytes) -> List[Multigraph]:
    """Consecutive `n m` headers each followed by m `u v` pairs"""
    tokens = [(m.start(), m.group()) for m in _TOKEN.finditer(data)]
    values = []
    for offset, text in tokens:
        if not text.isdigit():
            raise MalformedInput(f"expected a non-negative integer, got {text!r}", offset, _line_of(data, offset))
        values.append((offset, int(text)))

    graphs = []
    i = 0
    while i < len(values):
        if i + 1 >= len(values):
            offset = values[i][0]
            raise MalformedInput("header needs both n and m", len(data), _line_of(data, offset))
        n, m = values[i][1], values[i + 1][1]
        i += 2
        if i + 2 * m > len(values):
            raise MalformedInput(f"expected {m} edges", len(data), _line_of(data, len(data)))
        pairs = []
        for _ in range(m):
            (ou, u), (ov, v) = values[i], values[i + 1]
            for offset, x in ((ou, u), (ov, v)):
                if x >= n:
                    raise MalformedInput(f"vertex {x} out of range for n={n}", offset, _line_of(data, offset))
            pairs.append((u, v))
            i += 2
        graphs.append(Multigraph.from_pairs(n, pairs))
    return graphs


def detect_format(data: bytes) -> GraphFormat:
    """Guess the format from the first non-blank line"""
    for line in data.splitlines():
        line = line.strip()
        if not line:
            continue
        if line.startswith(SPARSE6_HEADER) or line.startswith(b":"):
            return GraphFormat.SPARSE6
        if line.startswith(GRAPH6_HEADER) or all(63 <= b <= 126 for b in line):
            return GraphFormat.GRAPH6
        return GraphFormat.EDGELIST
    return GraphFormat.EDGELIST


def parse_stream(fmt: Optional[GraphFormat], data: bytes) -> List[Multigraph]:
    """
    Parse every graph in ``data``.

    graph6 and sparse6 carry one graph per line (blank lines skipped); the
    edge-list format is a sequence of header-plus-pairs records.

    Raises:
        MalformedInput: with the byte offset into ``data`` and the line number
    """
    fmt = fmt or detect_format(data)
    if fmt is GraphFormat.EDGELIST:
        return _parse_edgelists(data)

    decode = _parse_graph6 if fmt is GraphFormat.GRAPH6 else _parse_sparse6
    graphs = []
    base = 0
    for number, raw in enumerate(data.split(b"\n"), start=1):
        line = raw.rstrip(b"\r")
        stripped = line.strip()
        if stripped:
            lead = len(line) - len(line.lstrip())
            try:
                graphs.append(decode(stripped, base + lead))
            except MalformedInput as exc:
                raise MalformedInput(exc.reason, exc.offset, number)
        base += len(raw) + 1
    return graphs


def parse(fmt: GraphFormat, data: bytes) -> Multigraph:
    """
    Parse exactly one graph.

    Raises:
        MalformedInput: for malformed bytes, or when ``data`` holds no graph
            or more than one
    """
    graphs = parse_stream(fmt, data)
    if len(graphs) != 1:
        raise MalformedInput(f"expected one graph, found {len(graphs)}", len(data))
    return graphs[0]


# Edits

def delete_edge(g: Multigraph, eid: int) -> Multigraph:
    g.edge(eid)
    return Multigraph(g.n, tuple(e for e in g.edges if e.eid != eid))


def identify_vertices(g: Multigraph, vertices: Iterable[int], keep_internal: bool = True) -> Multigraph:
    """
    Merge ``vertices`` into one vertex and renumber the rest in order.

    Edges among the merged vertices become loops, or are dropped when
    ``keep_internal`` is false (contracting a connected side).
    """
    group = set(vertices)
    if not group:
        return g
    target = min(group)
    mapping = []
    next_label = 0
    for x in range(g.n):
        if x in group and x != target:
            mapping.append(None)
        else:
            mapping.append(next_label)
            next_label += 1
    for x in group:
        mapping[x] = mapping[target]

    edges = []
    for u, v, eid in g.edges:
        if u in group and v in group and not keep_internal:
            continue
        edges.append(Edge(mapping[u], mapping[v], eid))
    return Multigraph(next_label, tuple(edges))


def contract_edge(g: Multigraph, eid: int) -> Multigraph:
    """
    Identify the endpoints of ``eid`` and remove it.

    New loops and parallel edges are kept. Contracting a loop deletes it.
    """
    e = g.edge(eid)
    if e.is_loop:
        return delete_edge(g, eid)
    return identify_vertices(delete_edge(g, eid), (e.u, e.v))


def blocks(g: Multigraph) -> List[Multigraph]:
    """
    Split at cut vertices.

    Every 2-connected piece and every bridge becomes its own graph, relabelled
    to 0..k-1 with edge ids kept; each loop forms a one-vertex block.
    Isolated vertices contribute nothing.
    """
    pairs: Dict[Tuple[int, int], List[Edge]] = {}
    for e in g.edges:
        if not e.is_loop:
            pairs.setdefault((e.u, e.v), []).append(e)

    pieces = []
    for component in nx.biconnected_component_edges(g.simple_networkx()):
        members = []
        for u, v in component:
            members.extend(pairs[(min(u, v), max(u, v))])
        vertices = sorted({x for e in members for x in (e.u, e.v)})
        label = {x: i for i, x in enumerate(vertices)}
        pieces.append(Multigraph(len(vertices), tuple(Edge(label[e.u], label[e.v], e.eid) for e in members)))
    for e in g.loops:
        pieces.append(Multigraph(1, (Edge(0, 0, e.eid),)))
    pieces.sort(key=lambda b: min(b.edge_ids))
    return pieces


# Connectivity

class CutStructure(NamedTuple):
    bridges: FrozenSet[int]
    cut_vertices: FrozenSet[int]


def cut_structure(g: Multigraph, exclude: Iterable[int] = ()) -> CutStructure:
    """
    Cut edges and cut vertices of g with the ``exclude`` edges removed.

    One iterative low-point search over edge ids: the edge a vertex was
    reached by is skipped by id, so a parallel edge counts as a back edge.
    Loops never matter.
    """
    skip = frozenset(exclude)
    incidence = g.incidence
    depth = [-1] * g.n
    low = [0] * g.n
    found_bridges = set()
    found_cuts = set()
    for root in range(g.n):
        if depth[root] >= 0:
            continue
        depth[root] = 0
        root_children = 0
        stack = [(root, -1, iter(incidence[root]))]
        while stack:
            x, via, edges = stack[-1]
            for e in edges:
                if e.eid == via or e.u == e.v or e.eid in skip:
                    continue
                y = e.v if e.u == x else e.u
                if depth[y] < 0:
                    depth[y] = low[y] = depth[x] + 1
                    stack.append((y, e.eid, iter(incidence[y])))
                    break
                if depth[y] < low[x]:
                    low[x] = depth[y]
            else:
                stack.pop()
                if not stack:
                    continue
                parent = stack[-1][0]
                if low[x] < low[parent]:
                    low[parent] = low[x]
                if low[x] > depth[parent]:
                    found_bridges.add(via)
                if parent == root:
                    root_children += 1
                elif low[x] >= depth[parent]:
                    found_cuts.add(parent)
        if root_children > 1:
            found_cuts.add(root)
    return CutStructure(frozenset(found_bridges), frozenset(found_cuts))


def bridges(g: Multigraph, exclude: Iterable[int] = ()) -> FrozenSet[int]:
    """Ids of the cut edges of g minus ``exclude`` (a loop is never one)"""
    return cut_structure(g, exclude).bridges


def edge_connectivity(g: Multigraph) -> Optional[int]:
    """
    Minimum size of an edge cutset; None when g has fewer than two vertices.

    Raises:
        Disconnected: if g has more than one component
    """
    if not g.is_connected:
        raise Disconnected(f"graph has {g.num_components} components")
    if g.n < 2:
        return None
    weighted = nx.Graph()
    weighted.add_nodes_from(range(g.n))
    for (u, v), count in g.multiplicities.items():
        if u != v:
            weighted.add_edge(u, v, weight=count)
    cut_value, _ = nx.stoer_wagner(weighted)
    return int(cut_value)


def series_edge(g: Multigraph) -> Optional[int]:
    """
    Smallest id of a non-loop edge lying in a 2-edge cutset, or None.

    g must be bridgeless. A vertex of degree two is checked first.
    """
    for x in range(g.n):
        if g.degrees[x] == 2 and len(g.incidence[x]) == 2:
            return min(e.eid for e in g.incidence[x])
    # on three vertices every cut is a vertex star
    if g.n <= 3:
        stars = [[e.eid for e in g.incidence[x] if not e.is_loop] for x in range(g.n)]
        return min((min(star) for star in stars if len(star) == 2), default=None)
    for e in g.edges:
        if not e.is_loop and bridges(g, exclude=(e.eid,)):
            return e.eid
    return None


def series_reduce(g: Multigraph) -> Multigraph:
    """
    Contract series edges until no 2-edge cutset is left.

    Loops are kept, so a cycle ends as one vertex with one loop and the flow
    polynomial is unchanged. Callers wanting the loop-free minimal multigraph
    drop them afterwards with ``without_loops`` (as ``corpus.reduced`` and the
    structural recognizer do); each dropped loop is a factor x-1 of F.

    Raises:
        HasBridge: if g has a bridge
    """
    found = bridges(g)
    if found:
        raise HasBridge(f"bridges {sorted(found)}")
    steps = 0
    while True:
        eid = series_edge(g)
        if eid is None:
            break
        g = contract_edge(g, eid)
        steps += 1
    logger.debug(f"series reduction contracted {steps} edges")
    return g


@dataclass(frozen=True)
class ThreeCutset:
    """A minimal 3-edge cutset and the vertex sets on its two sides"""

    edges: Tuple[int, int, int]
    proper: bool
    side_a: Tuple[int, ...]
    side_b: Tuple[int, ...]


@dataclass(frozen=True)
class CutsetReport:
    cutsets: Tuple[ThreeCutset, ...]

    @property
    def proper(self) -> List[ThreeCutset]:
        return [c for c in self.cutsets if c.proper]

    @property
    def improper(self) -> List[ThreeCutset]:
        return [c for c in self.cutsets if not c.proper]

    def find(self, edges: Iterable[int]) -> Optional[ThreeCutset]:
        wanted = tuple(sorted(edges))
        return next((c for c in self.cutsets if c.edges == wanted), None)


def describe_cutset(g: Multigraph, edges: Iterable[int]) -> Optional[ThreeCutset]:
    """
    Sides of a 3-edge set if its removal leaves exactly two components.

    A side is proper when it keeps at least one edge of its own.
    """
    ids = tuple(sorted(edges))
    for eid in ids:
        g.edge(eid)
    rest = g.restrict_edges(set(g.edge_ids) - set(ids))
    if rest.num_components != 2 or len(ids) != 3:
        return None
    side_a, side_b = rest.components
    in_a = set(side_a)
    inner_a = any(e.u in in_a and e.v in in_a for e in rest.edges)
    inner_b = any(e.u not in in_a and e.v not in in_a for e in rest.edges)
    return ThreeCutset(edges=ids, proper=inner_a and inner_b, side_a=side_a, side_b=side_b)


def minimal_three_cutsets(g: Multigraph) -> CutsetReport:
    """
    Every minimal 3-edge cutset of a 3-edge-connected graph, tagged proper or improper.

    Raises:
        Disconnected: if g is disconnected
        NotThreeEdgeConnected: if some cutset has fewer than three edges
    """
    connectivity = edge_connectivity(g)
    if connectivity is None:
        return CutsetReport(())
    if connectivity < 3:
        raise NotThreeEdgeConnected(f"edge connectivity is {connectivity}")

    ids = [e.eid for e in g.edges if not e.is_loop]
    found = []
    for e, f in combinations(ids, 2):
        for h in bridges(g, exclude=(e, f)):
            if h > f:
                found.append(describe_cutset(g, (e, f, h)))
    found.sort(key=lambda c: c.edges)
    return CutsetReport(tuple(found))


def split_at_cutset(g: Multigraph, cutset: ThreeCutset) -> Tuple[Multigraph, Multigraph]:
    """(G1, G2): each side of the cutset contracted to a single vertex in turn"""
    g1 = identify_vertices(g, cutset.side_b, keep_internal=False)
    g2 = identify_vertices(g, cutset.side_a, keep_internal=False)
    return g1, g2


# Canonical form

def _ranks(values: Sequence) -> List[int]:
    order = {value: i for i, value in enumerate(sorted(set(values)))}
    return [order[value] for value in values]


def _refine(adjacency: List[Dict[int, int]], loops: List[int], colors: List[int]) -> List[int]:
    """Equitable refinement of an ordered vertex colouring"""
    colors = _ranks(colors)
    while True:
        signatures = [
            (colors[v], loops[v], tuple(sorted((colors[w], count) for w, count in adjacency[v].items())))
            for v in range(len(colors))
        ]
        refined = _ranks(signatures)
        if max(refined, default=-1) == max(colors, default=-1):
            return refined
        colors = refined


def canonical_key(g: Multigraph) -> bytes:
    """
    Isomorphism-invariant key over multiplicities and loops; ids are ignored.

    Colour refinement followed by exhaustive individualisation of the first
    smallest non-singleton cell. The key is the least adjacency encoding over
    all leaves. Vertices that are twins in the target cell are individualised
    once, since swapping them is an automorphism.
    """
    n = g.n
    adjacency: List[Dict[int, int]] = [dict() for _ in range(n)]
    loops = [0] * n
    for u, v, _ in g.edges:
        if u == v:
            loops[u] += 1
        else:
            adjacency[u][v] = adjacency[u].get(v, 0) + 1
            adjacency[v][u] = adjacency[v].get(u, 0) + 1

    def twins(a: int, b: int) -> bool:
        if loops[a] != loops[b]:
            return False
        na = {w: c for w, c in adjacency[a].items() if w != b}
        nb = {w: c for w, c in adjacency[b].items() if w != a}
        return na == nb

    best: List[Optional[Tuple[int, ...]]] = [None]

    def search(colors: List[int]):
        cells: Dict[int, List[int]] = {}
        for v, c in enumerate(colors):
            cells.setdefault(c, []).append(v)
        targets = [c for c in sorted(cells) if len(cells[c]) > 1]
        if not targets:
            order = sorted(range(n), key=lambda v: colors[v])
            code = tuple(
                loops[a] if i == j else adjacency[a].get(order[j], 0)
                for i, a in enumerate(order)
                for j in range(i, n)
            )
            if best[0] is None or code < best[0]:
                best[0] = code
            return
        cell = min(targets, key=lambda c: (len(cells[c]), c))
        representatives: List[int] = []
        for v in cells[cell]:
            if not any(twins(v, r) for r in representatives):
                representatives.append(v)
        for v in representatives:
            split = [2 * c for c in colors]
            split[v] -= 1
            search(_refine(adjacency, loops, split))

    search(_refine(adjacency, loops, [0] * n))
    code = best[0] or ()
    return f"n={n};".encode() + ",".join(map(str, code)).encode()


def is_isomorphic(g: Multigraph, h: Multigraph) -> bool:
    return canonical_key(g) == canonical_key(h)
