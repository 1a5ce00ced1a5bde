"""
Named graphs used as fixtures and corpus entries.

Edge ids follow the order in which each constructor lists its pairs.
"""

from typing import Callable, Dict, List, Tuple

import networkx as nx

from .exceptions import GraphError
from .graph import Multigraph


def _from_networkx(graph: nx.Graph) -> Multigraph:
    graph = nx.convert_node_labels_to_integers(graph, ordering="sorted")
    return Multigraph.from_pairs(graph.number_of_nodes(), sorted(tuple(sorted(e)) for e in graph.edges()))


def complete(n: int) -> Multigraph:
    return Multigraph.from_pairs(n, [(u, v) for u in range(n) for v in range(u + 1, n)])


def cycle(n: int) -> Multigraph:
    if n < 1:
        raise GraphError("a cycle needs at least one vertex")
    if n == 1:
        return Multigraph.from_pairs(1, [(0, 0)])
    return Multigraph.from_pairs(n, [(i, (i + 1) % n) for i in range(n)])


def theta(k: int) -> Multigraph:
    """Two vertices joined by k parallel edges"""
    return Multigraph.from_pairs(2, [(0, 1)] * k)


def wheel(spokes: int) -> Multigraph:
    """Hub 0 joined to a rim cycle 1..spokes"""
    rim = [(i, i % spokes + 1) for i in range(1, spokes + 1)]
    return Multigraph.from_pairs(spokes + 1, [(0, i) for i in range(1, spokes + 1)] + rim)


def prism() -> Multigraph:
    return Multigraph.from_pairs(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (0, 3), (1, 4), (2, 5)])


def complete_bipartite(a: int, b: int) -> Multigraph:
    return Multigraph.from_pairs(a + b, [(u, a + v) for u in range(a) for v in range(b)])


def petersen() -> Multigraph:
    return _from_networkx(nx.petersen_graph())


def cube() -> Multigraph:
    return _from_networkx(nx.hypercube_graph(3))


def ten_vertex() -> Multigraph:
    """
    18-edge graph on ten vertices with one proper 3-cutset, edges (9, 11, 15),
    cutting off the triangle on vertices 2, 3, 6.
    """
    return Multigraph.from_pairs(10, [
        (1, 8), (8, 9), (9, 1), (4, 8), (4, 9), (0, 7), (7, 4), (5, 7), (0, 1),
        (1, 2), (2, 3), (3, 4), (4, 5), (5, 0), (2, 6), (6, 4), (3, 6), (1, 4),
    ])


TEN_VERTEX_CUTSET = (9, 11, 15)


def bipyramid() -> Multigraph:
    """Triangle 0,1,2 with apexes 3 and 4; planar, chordal, dual to the prism"""
    return Multigraph.from_pairs(5, [(0, 1), (1, 2), (0, 2), (0, 3), (1, 3), (2, 3), (0, 4), (1, 4), (2, 4)])


def fan_dual(r: int) -> Multigraph:
    """
    Dual of the fan 2-tree on r + 1 vertices: r - 1 cubic vertices on a path,
    each doubled to a hub of degree r + 1. Flow polynomial (x-1)(x-2)^(r-1).
    """
    if r < 2:
        raise GraphError("fan duals start at r = 2")
    if r == 2:
        return theta(3)
    hub = r - 1
    pairs: List[Tuple[int, int]] = [(0, hub), (0, hub), (r - 2, hub), (r - 2, hub)]
    pairs += [(i, i + 1) for i in range(r - 2)]
    pairs += [(i, hub) for i in range(1, r - 2)]
    return Multigraph.from_pairs(r, pairs)


NAMED: Dict[str, Callable[[], Multigraph]] = {
    "k4": lambda: complete(4),
    "k5": lambda: complete(5),
    "k33": lambda: complete_bipartite(3, 3),
    "prism": prism,
    "cube": cube,
    "petersen": petersen,
    "ten-vertex": ten_vertex,
    "bipyramid": bipyramid,
    "theta3": lambda: theta(3),
    "wheel5": lambda: wheel(5),
}


def named(name: str) -> Multigraph:
    try:
        return NAMED[name]()
    except KeyError:
        raise GraphError(f"unknown graph name {name!r}; known: {', '.join(sorted(NAMED))}")
