"""
Planar embeddings, duals, chordality and planar-chordal generators.

Contains:
- Embedding: rotation system over darts, with face tracing
- planarity_embed: embedding or a Kuratowski witness
- dual / dual_embedding
- is_chordal (with certificates), is_two_tree, is_series_parallel
- gen_chordal_planar: build-script and seeded random generators
- is_dual_of_planar_chordal: the structural recognizer
"""

import logging
import random
from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

import networkx as nx
from django.conf import settings

from .exceptions import DisconnectedInput, HasBridge, InvalidScript, PlanarError
from .graph import Edge, Multigraph, blocks, bridges, series_reduce
from .matroid import SupersolvabilityResult, cocycle_matroid, is_supersolvable

logger = logging.getLogger('flowroots')

# (edge id, side): side 0 leaves edge.u, side 1 leaves edge.v
Dart = Tuple[int, int]


def twin(dart: Dart) -> Dart:
    return dart[0], 1 - dart[1]


@dataclass(frozen=True)
class Embedding:
    """
    Rotation system: for each vertex the clockwise cyclic order of the darts
    leaving it. Faces are traced by following a dart to its head and taking
    the successor of its twin there.
    """

    graph: Multigraph
    rotation: Tuple[Tuple[Dart, ...], ...]

    def __post_init__(self):
        seen = set()
        for vertex, darts in enumerate(self.rotation):
            for dart in darts:
                if dart in seen:
                    raise PlanarError(f"dart {dart} appears twice in the rotation")
                seen.add(dart)
                if self.tail(dart) != vertex:
                    raise PlanarError(f"dart {dart} listed at vertex {vertex}, not at its tail")
        expected = {(e.eid, side) for e in self.graph.edges for side in (0, 1)}
        if seen != expected or len(self.rotation) != self.graph.n:
            raise PlanarError("rotation does not list every dart exactly once")

    def tail(self, dart: Dart) -> int:
        e = self.graph.edge(dart[0])
        return e.u if dart[1] == 0 else e.v

    def head(self, dart: Dart) -> int:
        return self.tail(twin(dart))

    def successor(self, dart: Dart) -> Dart:
        darts = self.rotation[self.tail(dart)]
        return darts[(darts.index(dart) + 1) % len(darts)]

    @cached_property
    def faces(self) -> Tuple[Tuple[Dart, ...], ...]:
        """Face walks, each starting at its smallest dart, in order of that dart"""
        faces = []
        visited = set()
        for start in sorted(d for darts in self.rotation for d in darts):
            if start in visited:
                continue
            walk = []
            dart = start
            while dart not in visited:
                visited.add(dart)
                walk.append(dart)
                dart = self.successor(twin(dart))
            faces.append(tuple(walk))
        return tuple(faces)

    @cached_property
    def face_of(self) -> Dict[Dart, int]:
        return {dart: i for i, face in enumerate(self.faces) for dart in face}

    def face_vertices(self, index: int) -> List[int]:
        return [self.tail(d) for d in self.faces[index]]

    @property
    def isolated(self) -> int:
        return sum(1 for darts in self.rotation if not darts)

    @property
    def euler_holds(self) -> bool:
        """V - E + F = 1 + c, with the traced outer faces of the components merged"""
        g = self.graph
        c = g.num_components
        traced = len(self.faces) + self.isolated
        return g.n - g.m + traced == 2 * c

    @property
    def face_count(self) -> int:
        return len(self.faces) + self.isolated - max(self.graph.num_components - 1, 0)


@dataclass(frozen=True)
class NonPlanar:
    """A subdivision of K5 or K3,3 found in the graph"""

    witness_edges: Tuple[int, ...]
    kind: str


def classify_kuratowski(witness: nx.Graph) -> str:
    """K5 or K3,3, read off the branch vertices of a subdivision"""
    branch = [d for _, d in witness.degree() if d >= 3]
    if len(branch) == 5 and all(d == 4 for d in branch):
        return "K5"
    if len(branch) == 6 and all(d == 3 for d in branch):
        return "K3,3"
    return "unknown"


def planarity_embed(g: Multigraph) -> Union[Embedding, NonPlanar]:
    """
    Embed the underlying simple graph, then put parallel edges and loops back.

    A parallel class sits in one block of consecutive slots, listed in id
    order at the smaller endpoint and in reverse at the larger, so that each
    adjacent pair bounds a 2-face. Loops go after the other darts of their
    vertex, each as two consecutive darts.
    """
    is_planar, certificate = nx.check_planarity(g.simple_networkx(), counterexample=True)
    classes: Dict[Tuple[int, int], List[int]] = {}
    for e in g.edges:
        classes.setdefault((e.u, e.v), []).append(e.eid)

    if not is_planar:
        witness = tuple(sorted(classes[(min(u, v), max(u, v))][0] for u, v in certificate.edges()))
        kind = classify_kuratowski(certificate)
        logger.debug(f"non-planar: {kind} subdivision on edges {witness}")
        return NonPlanar(witness, kind)

    rotation = []
    for x in range(g.n):
        darts: List[Dart] = []
        for y in certificate.neighbors_cw_order(x):
            if x < y:
                darts.extend((eid, 0) for eid in classes[(x, y)])
            else:
                darts.extend((eid, 1) for eid in reversed(classes[(y, x)]))
        for eid in classes.get((x, x), []):
            darts.extend(((eid, 0), (eid, 1)))
        rotation.append(tuple(darts))
    embedding = Embedding(g, tuple(rotation))
    if not embedding.euler_holds:
        raise PlanarError("embedding fails the Euler check")
    return embedding


def _require_connected(embedding: Embedding):
    if not embedding.graph.is_connected:
        raise DisconnectedInput(f"graph has {embedding.graph.num_components} components")


def dual(embedding: Embedding) -> Multigraph:
    """
    One vertex per face and one edge per primal edge, keeping edge ids.

    Raises:
        DisconnectedInput: if the embedded graph is disconnected
    """
    _require_connected(embedding)
    g = embedding.graph
    if g.m == 0:
        return Multigraph(1, ())
    face_of = embedding.face_of
    edges = tuple(Edge(face_of[(e.eid, 0)], face_of[(e.eid, 1)], e.eid) for e in g.edges)
    return Multigraph(len(embedding.faces), edges)


def dual_embedding(embedding: Embedding) -> Embedding:
    """The dual map: each dual vertex lists its darts in face-walk order"""
    h = dual(embedding)
    if embedding.graph.m == 0:
        return Embedding(h, ((),))
    rotation = []
    for index, face in enumerate(embedding.faces):
        darts = []
        for eid, side in face:
            e = h.edge(eid)
            if e.is_loop:
                darts.append((eid, side))
            else:
                darts.append((eid, 0 if e.u == index else 1))
        rotation.append(tuple(darts))
    return Embedding(h, tuple(rotation))


# Chordality

@dataclass(frozen=True)
class ChordalityResult:
    """Perfect elimination order when chordal, otherwise a chordless cycle"""

    chordal: bool
    elimination_order: Optional[Tuple[int, ...]] = None
    chordless_cycle: Optional[Tuple[int, ...]] = None


def _adjacency(g: Multigraph) -> List[set]:
    adjacent = [set() for _ in range(g.n)]
    for u, v, _ in g.edges:
        if u != v:
            adjacent[u].add(v)
            adjacent[v].add(u)
    return adjacent


def _chordless_cycle(adjacent: List[set], x: int, a: int, b: int) -> Optional[Tuple[int, ...]]:
    """Cycle x-a-...-b-x whose a..b part avoids every other neighbour of x"""
    blocked = (adjacent[x] | {x}) - {a, b}
    keep = [v for v in range(len(adjacent)) if v not in blocked]
    graph = nx.Graph()
    graph.add_nodes_from(keep)
    graph.add_edges_from((u, w) for u in keep for w in adjacent[u] if w not in blocked)
    try:
        path = nx.shortest_path(graph, a, b)
    except nx.NetworkXNoPath:
        return None
    return (x, *path)


def is_chordal(g: Multigraph) -> ChordalityResult:
    """
    Maximum cardinality search, then a perfect-elimination test of the
    reversed visiting order. Parallel edges and loops are ignored.
    """
    adjacent = _adjacency(g)
    n = g.n
    weight = [0] * n
    visited: List[int] = []
    numbered = [False] * n
    for _ in range(n):
        v = max((x for x in range(n) if not numbered[x]), key=lambda x: (weight[x], -x))
        numbered[v] = True
        visited.append(v)
        for w in adjacent[v]:
            if not numbered[w]:
                weight[w] += 1

    order = tuple(reversed(visited))
    position = {v: i for i, v in enumerate(order)}
    for v in order:
        later = [w for w in adjacent[v] if position[w] > position[v]]
        if not later:
            continue
        parent = min(later, key=position.__getitem__)
        for w in later:
            if w != parent and w not in adjacent[parent]:
                cycle = _chordless_cycle(adjacent, v, parent, w)
                if cycle is None:
                    cycle = _any_chordless_cycle(adjacent)
                return ChordalityResult(False, chordless_cycle=cycle)
    return ChordalityResult(True, elimination_order=order)


def _any_chordless_cycle(adjacent: List[set]) -> Optional[Tuple[int, ...]]:
    for x in range(len(adjacent)):
        for a in sorted(adjacent[x]):
            for b in sorted(adjacent[x]):
                if a < b and b not in adjacent[a]:
                    cycle = _chordless_cycle(adjacent, x, a, b)
                    if cycle is not None:
                        return cycle
    return None


def is_two_tree(g: Multigraph) -> bool:
    """Reduce to K3 by removing degree-2 vertices with adjacent neighbours"""
    adjacent = _adjacency(g)
    if g.n < 3 or not g.is_connected:
        return False
    alive = set(range(g.n))
    while len(alive) > 3:
        for v in sorted(alive):
            if len(adjacent[v]) == 2:
                a, b = adjacent[v]
                if b in adjacent[a]:
                    adjacent[a].discard(v)
                    adjacent[b].discard(v)
                    alive.discard(v)
                    break
        else:
            return False
    return all(len(adjacent[v]) == 2 for v in alive)


def is_series_parallel(g: Multigraph) -> bool:
    """No K4 minor: deleting vertices of degree <= 1 and suppressing degree 2 empties the graph"""
    graph = g.simple_networkx()
    while graph.number_of_nodes():
        for v in sorted(graph.nodes):
            degree = graph.degree(v)
            if degree <= 1:
                graph.remove_node(v)
                break
            if degree == 2:
                a, b = graph.neighbors(v)
                graph.remove_node(v)
                graph.add_edge(a, b)
                break
        else:
            return False
    return True


# Generators

class GeneratorMode(Enum):
    TWO_TREE = "2tree"
    CHORDAL_PLANAR = "chordal-planar"
    TRIANGULATION = "triangulation"


@dataclass(frozen=True)
class GeneratedGraph:
    graph: Multigraph
    embedding: Embedding
    script: Tuple[str, ...]


class _PlaneBuilder:
    """K3 grown by edge-joins and face insertions, tracking its faces"""

    def __init__(self):
        self.n = 3
        self.pairs: List[Tuple[int, int]] = [(0, 1), (1, 2), (0, 2)]
        self.edge_set = {(0, 1), (1, 2), (0, 2)}
        self.faces: List[Tuple[int, ...]] = [(0, 1, 2), (0, 2, 1)]
        self.script: List[str] = []

    def _add_vertex(self, neighbours: Iterable[int]) -> int:
        x = self.n
        self.n += 1
        for y in neighbours:
            self.pairs.append((y, x))
            self.edge_set.add((y, x))
        return x

    def join_edge(self, u: int, v: int, line: Optional[int] = None):
        key = (min(u, v), max(u, v))
        if key not in self.edge_set:
            raise InvalidScript(f"{u}-{v} is not an edge", line)
        for index, face in enumerate(self.faces):
            k = len(face)
            for i in range(k):
                if {face[i], face[(i + 1) % k]} == {u, v}:
                    a, b = face[i], face[(i + 1) % k]
                    x = self._add_vertex((u, v))
                    rotated = face[i + 1:] + face[:i + 1]
                    self.faces[index] = (x,) + rotated
                    self.faces.insert(index + 1, (a, b, x))
                    self.script.append(f"E {u} {v}")
                    return
        raise InvalidScript(f"edge {u}-{v} lies on no face", line)

    def insert_face(self, a: int, b: int, c: int, line: Optional[int] = None):
        for index, face in enumerate(self.faces):
            if len(face) == 3 and set(face) == {a, b, c}:
                p, q, r = face
                x = self._add_vertex((a, b, c))
                self.faces[index:index + 1] = [(p, q, x), (q, r, x), (r, p, x)]
                self.script.append(f"F {a} {b} {c}")
                return
        raise InvalidScript(f"{a} {b} {c} is not a triangular face", line)

    def triangular_faces(self) -> List[Tuple[int, ...]]:
        return [face for face in self.faces if len(face) == 3]

    def result(self) -> GeneratedGraph:
        graph = Multigraph.from_pairs(self.n, self.pairs)
        embedding = planarity_embed(graph)
        if not isinstance(embedding, Embedding):
            raise PlanarError("generator produced a non-planar graph")
        return GeneratedGraph(graph, embedding, tuple(self.script))


def _vertex(token: str, builder: _PlaneBuilder, line: int) -> int:
    if not token.isdigit() or int(token) >= builder.n:
        raise InvalidScript(f"unknown vertex {token!r}", line)
    return int(token)


def build_from_script(lines: Iterable[str]) -> GeneratedGraph:
    """
    Apply a build script to K3.

    Lines are ``E u v`` (new vertex joined to both ends of edge uv) or
    ``F a b c`` (new vertex inside triangular face abc); blank lines and
    ``#`` comments are skipped.

    Raises:
        InvalidScript: with the offending line number
    """
    builder = _PlaneBuilder()
    for number, raw in enumerate(lines, start=1):
        text = raw.split("#", 1)[0].strip()
        if not text:
            continue
        op, *args = text.split()
        if op == "E" and len(args) == 2:
            builder.join_edge(*(_vertex(t, builder, number) for t in args), line=number)
        elif op == "F" and len(args) == 3:
            builder.insert_face(*(_vertex(t, builder, number) for t in args), line=number)
        else:
            raise InvalidScript(f"cannot read {text!r}", number)
    return builder.result()


def gen_chordal_planar(mode: GeneratorMode, n: int, seed: Optional[int] = None) -> GeneratedGraph:
    """
    Grow K3 to ``n`` vertices with random steps.

    2tree uses edge-joins only, triangulation uses face insertions only, and
    chordal-planar picks either with equal odds. The returned script replays
    the build through ``build_from_script``.
    """
    if n < 3:
        raise PlanarError("size must be at least 3")
    rng = random.Random(settings.FLOWROOTS_SEED if seed is None else seed)
    builder = _PlaneBuilder()
    while builder.n < n:
        use_face = mode is GeneratorMode.TRIANGULATION or (
            mode is GeneratorMode.CHORDAL_PLANAR and rng.random() < 0.5
        )
        if use_face:
            builder.insert_face(*rng.choice(builder.triangular_faces()))
        else:
            builder.join_edge(*rng.choice(builder.pairs))
    logger.debug(f"generated {mode.value} graph on {n} vertices with seed {seed}")
    return builder.result()


# Structural recognizer

@dataclass(frozen=True)
class StructuralReport:
    """
    Whether g is the dual of a planar chordal graph.

    The verdict comes from supersolvability of the simplified cocycle matroid
    of every block of the series-reduced graph. When g is planar the report
    also carries the simplified dual H of its embedding and whether H is
    chordal.
    """

    dual_of_planar_chordal: bool
    blocks: Tuple[SupersolvabilityResult, ...]
    planar: bool
    certificate: Optional[Multigraph] = None
    certificate_chordal: Optional[bool] = None
    chordal_check: Optional[ChordalityResult] = None
    kuratowski: Optional[NonPlanar] = None
    embedding: Optional[Embedding] = None


def is_dual_of_planar_chordal(g: Multigraph, max_rank: Optional[int] = None) -> StructuralReport:
    """
    Raises:
        HasBridge: if g has a bridge
        BudgetExceeded: if a block's cocycle rank exceeds ``max_rank``
    """
    if bridges(g):
        raise HasBridge("the recognizer needs a bridgeless graph")
    reduced = series_reduce(g).without_loops()
    results = tuple(
        is_supersolvable(cocycle_matroid(block).simplify(), max_rank=max_rank)
        for block in blocks(reduced)
    )
    verdict = all(r.supersolvable for r in results)

    embedding = planarity_embed(g)
    if isinstance(embedding, NonPlanar):
        return StructuralReport(verdict, results, planar=False, kuratowski=embedding)

    certificate = None
    chordal = None
    check = None
    if g.is_connected:
        certificate = dual(embedding).simple()
        check = is_chordal(certificate)
        chordal = check.chordal
    return StructuralReport(verdict, results, planar=True, certificate=certificate,
                            certificate_chordal=chordal, chordal_check=check, embedding=embedding)
