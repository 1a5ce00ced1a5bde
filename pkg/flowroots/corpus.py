"""
Corpus sources for verification runs.

Every source yields ``(graph id, Multigraph)`` pairs in a fixed order so that
reports are reproducible.
"""

import logging
from typing import Callable, Iterable, Iterator, Optional, Sequence, Tuple

import networkx as nx

from .exceptions import GraphError
from .families import named
from .graph import GraphFormat, Multigraph, bridges, canonical_key, edge_connectivity, parse_stream, series_reduce

logger = logging.getLogger('flowroots')

CorpusItem = Tuple[str, Multigraph]

ATLAS_MAX_VERTICES = 7


# Predicates

def is_bridgeless(g: Multigraph) -> bool:
    return g.m > 0 and g.is_connected and not bridges(g)


def is_three_edge_connected(g: Multigraph) -> bool:
    if not g.is_connected or g.n < 2:
        return False
    return edge_connectivity(g) >= 3


def is_cubic(g: Multigraph) -> bool:
    return g.n > 0 and all(d == 3 for d in g.degrees)


# Sources

def atlas(max_vertices: int = ATLAS_MAX_VERTICES, predicate: Optional[Callable[[Multigraph], bool]] = None) -> Iterator[CorpusItem]:
    """
    Graphs of the networkx atlas (every graph on at most seven vertices, up
    to isomorphism), keyed by atlas index.
    """
    if not 0 <= max_vertices <= ATLAS_MAX_VERTICES:
        raise GraphError(f"the atlas covers at most {ATLAS_MAX_VERTICES} vertices")
    for index, graph in enumerate(nx.graph_atlas_g()):
        if graph.number_of_nodes() > max_vertices:
            break
        g = Multigraph.from_pairs(graph.number_of_nodes(), sorted(tuple(sorted(e)) for e in graph.edges()))
        if predicate is None or predicate(g):
            yield f"atlas-{index}", g


def named_graphs(names: Sequence[str]) -> Iterator[CorpusItem]:
    for name in names:
        yield name, named(name)


def from_bytes(data: bytes, fmt: Optional[GraphFormat] = None, prefix: str = "graph") -> Iterator[CorpusItem]:
    """Records of a graph6/sparse6/edge-list stream, numbered from 1"""
    for number, g in enumerate(parse_stream(fmt, data), start=1):
        yield f"{prefix}-{number}", g


def reduced(items: Iterable[CorpusItem]) -> Iterator[CorpusItem]:
    """
    Series reductions of the bridgeless connected inputs, loops removed,
    without isomorphic repeats.
    """
    seen = set()
    for graph_id, g in items:
        if not is_bridgeless(g):
            continue
        minimal = series_reduce(g).without_loops()
        key = canonical_key(minimal)
        if key in seen:
            continue
        seen.add(key)
        yield f"{graph_id}-reduced", minimal
    logger.info(f"{len(seen)} distinct reduced multigraphs")
