"""
Flow and chromatic polynomial engines.

Contains:
- FlowMemo: get-or-insert memo over the ``flowcalc`` Django cache
- FlowEngine: reductions, 3-cutset product decomposition and
  deletion-contraction for F(G), plus deletion-contraction for P(G)
- flow_count_oracle: independent count of nowhere-zero Z_k flows
- flow_stats, product_formula_check, decomposition_tree
"""

import hashlib
import logging
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from typing import Dict, List, Optional, Tuple

import numpy as np
from django.conf import settings
from django.core.cache import caches
from django.core.cache.backends.locmem import LocMemCache

from .exceptions import (
    BudgetExceeded,
    Disconnected,
    HasBridge,
    InternalConsistencyError,
    NonDivisible,
    NotAProperCutset,
)
from .graph import (
    Multigraph,
    ThreeCutset,
    blocks,
    bridges,
    canonical_key,
    contract_edge,
    cut_structure,
    delete_edge,
    describe_cutset,
    edge_connectivity,
    series_edge,
    series_reduce,
    split_at_cutset,
)
from .polynomial import IntPoly, divide_exact, mul

logger = logging.getLogger('flowroots')

ONE = IntPoly.constant(1)
ZERO = IntPoly.zero()
X = IntPoly.monomial(1)
X_MINUS_1 = IntPoly.linear(1)
GLUE_FACTOR = IntPoly.from_roots([1, 2])


@lru_cache(maxsize=None)
def theta_flow(k: int) -> IntPoly:
    """F of two vertices joined by k parallel edges: ((x-1)^k + (-1)^k (x-1)) / x"""
    numerator = X_MINUS_1 ** k + (-1) ** k * X_MINUS_1
    # the constant term cancels
    return IntPoly(numerator.coeffs[1:])


class FlowMemo:
    """
    Memo table of polynomials keyed by canonical graph keys.

    Values live in a Django cache under a digest of the key; each entry also
    stores the full key, which is compared on every hit. A memo without a
    cache stores nothing.
    """

    def __init__(self, cache=None, namespace: str = "flow"):
        self.cache = cache
        self.namespace = namespace
        self.hits = 0
        self.misses = 0

    @classmethod
    def from_settings(cls, namespace: str = "flow") -> 'FlowMemo':
        if settings.FLOWROOTS_MEMO_CAP <= 0:
            return cls(None, namespace)
        return cls(caches['flowcalc'], namespace)

    @classmethod
    def with_capacity(cls, capacity: int, namespace: str = "flow") -> 'FlowMemo':
        """Private LRU table holding at most ``capacity`` entries; 0 disables"""
        if capacity <= 0:
            return cls(None, namespace)
        cache = LocMemCache(
            f"flowroots-memo-{capacity}",
            {"TIMEOUT": None, "OPTIONS": {"MAX_ENTRIES": capacity, "CULL_FREQUENCY": capacity}},
        )
        return cls(cache, namespace)

    @property
    def enabled(self) -> bool:
        return self.cache is not None

    def _digest(self, key: bytes) -> str:
        return f"{self.namespace}:{hashlib.sha256(key).hexdigest()}"

    def get(self, key: bytes) -> Optional[IntPoly]:
        if self.cache is None:
            return None
        stored = self.cache.get(self._digest(key))
        if stored is not None and stored[0] == key:
            self.hits += 1
            return IntPoly(stored[1])
        self.misses += 1
        return None

    def put(self, key: bytes, value: IntPoly):
        if self.cache is not None:
            self.cache.set(self._digest(key), (key, value.coeffs))


def find_proper_cutset(g: Multigraph) -> Optional[ThreeCutset]:
    """First proper minimal 3-cutset in edge-id order; g must be 3-edge-connected"""
    ids = [e.eid for e in g.edges if not e.is_loop]
    for e, f in combinations(ids, 2):
        for h in sorted(bridges(g, exclude=(e, f))):
            if h > f:
                cutset = describe_cutset(g, (e, f, h))
                if cutset is not None and cutset.proper:
                    return cutset
    return None


class FlowEngine:
    """
    Exact flow and chromatic polynomials.

    Flow reductions run in a fixed order: empty graph, loops, bridges and
    blocks (one low-point pass), two vertices in closed form, degree-two
    vertices, memo lookup, other series edges, proper 3-cutset split, and
    finally deletion-contraction on an edge of largest multiplicity
    (smallest id on ties).
    """

    def __init__(self, memo: Optional[FlowMemo] = None, decompose: bool = True,
                 chromatic_memo: Optional[FlowMemo] = None):
        self.memo = memo if memo is not None else FlowMemo.from_settings("flow" if decompose else "flow-dc")
        self.chromatic_memo = chromatic_memo if chromatic_memo is not None else FlowMemo(self.memo.cache, "chromatic")
        self.decompose = decompose
        self.splits = 0

    @classmethod
    def with_capacity(cls, capacity: int, decompose: bool = True) -> 'FlowEngine':
        memo = FlowMemo.with_capacity(capacity, "flow" if decompose else "flow-dc")
        return cls(memo, decompose, FlowMemo(memo.cache, "chromatic"))

    # Flow polynomial

    def flow_poly(self, g: Multigraph) -> IntPoly:
        result = self._flow(g)
        logger.debug(
            f"flow polynomial of n={g.n} m={g.m}: {result} "
            f"(memo hits {self.memo.hits}, misses {self.memo.misses}, splits {self.splits})"
        )
        return result

    def _flow(self, g: Multigraph) -> IntPoly:
        if g.m == 0:
            return ONE
        if g.loops:
            return mul(X_MINUS_1 ** len(g.loops), self._flow(g.without_loops()))

        structure = cut_structure(g)
        if structure.bridges:
            return ZERO
        if structure.cut_vertices or not g.is_connected:
            result = ONE
            for part in blocks(g):
                result = mul(result, self._flow(part))
                if result.is_zero:
                    break
            return result
        if g.n == 2:
            return theta_flow(g.m)

        for x in range(g.n):
            if g.degrees[x] == 2:
                return self._flow(contract_edge(g, g.incidence[x][0].eid))

        key = canonical_key(g) if self.memo.enabled else None
        if key is not None:
            cached = self.memo.get(key)
            if cached is not None:
                return cached

        eid = series_edge(g)
        if eid is not None:
            result = self._flow(contract_edge(g, eid))
        else:
            result = self._split(g) if self.decompose else None
            if result is None:
                result = self._delete_contract(g)
        if key is not None:
            self.memo.put(key, result)
        return result

    def _split(self, g: Multigraph) -> Optional[IntPoly]:
        # both sides of a proper cutset need two vertices
        if g.n < 4:
            return None
        cutset = find_proper_cutset(g)
        if cutset is None:
            return None
        self.splits += 1
        g1, g2 = split_at_cutset(g, cutset)
        product = mul(self._flow(g1), self._flow(g2))
        try:
            return divide_exact(product, GLUE_FACTOR)
        except NonDivisible as exc:
            logger.error(f"3-cutset {cutset.edges} product not divisible: remainder {exc.remainder}")
            raise InternalConsistencyError(
                f"F(G1)F(G2) is not divisible by (x-1)(x-2) at cutset {cutset.edges}"
            )

    def _delete_contract(self, g: Multigraph) -> IntPoly:
        pivot = min(g.edges, key=lambda e: (-g.multiplicities[(e.u, e.v)], e.eid))
        return self._flow(contract_edge(g, pivot.eid)) - self._flow(delete_edge(g, pivot.eid))

    # Chromatic polynomial

    def chromatic_poly(self, g: Multigraph) -> IntPoly:
        return self._chromatic(g)

    def _chromatic(self, g: Multigraph) -> IntPoly:
        if g.loops:
            return ZERO
        if not g.is_simple():
            g = g.simple()
        if g.m == 0:
            return X ** g.n
        c = g.num_components
        if g.m == g.n - c:
            return mul(X ** c, X_MINUS_1 ** (g.n - c))
        if 2 * g.m == g.n * (g.n - 1):
            return IntPoly.from_roots(range(g.n))

        key = canonical_key(g) if self.chromatic_memo.enabled else None
        if key is not None:
            cached = self.chromatic_memo.get(key)
            if cached is not None:
                return cached
        pivot = g.edges[0]
        result = self._chromatic(delete_edge(g, pivot.eid)) - self._chromatic(contract_edge(g, pivot.eid))
        if key is not None:
            self.chromatic_memo.put(key, result)
        return result


def default_engine(decompose: bool = True) -> FlowEngine:
    return FlowEngine(decompose=decompose)


def flow_poly(g: Multigraph, engine: Optional[FlowEngine] = None) -> IntPoly:
    return (engine or default_engine()).flow_poly(g)


def chromatic_poly(g: Multigraph, engine: Optional[FlowEngine] = None) -> IntPoly:
    return (engine or default_engine()).chromatic_poly(g)


# Brute-force oracle

def _tree_and_cotree(g: Multigraph) -> Tuple[List[int], List[int], np.ndarray]:
    """
    BFS spanning tree, cotree edge ids, and the tree-by-cotree matrix giving
    the value each tree edge must carry (edges oriented u -> v).
    """
    parent_edge: Dict[int, Tuple[int, int]] = {}
    depth = {0: 0}
    queue = [0]
    tree: List[int] = []
    for x in queue:
        for e in g.incidence[x]:
            y = e.other(x)
            if y not in depth:
                depth[y] = depth[x] + 1
                parent_edge[y] = (e.eid, x)
                tree.append(e.eid)
                queue.append(y)
    in_tree = set(tree)
    cotree = [e.eid for e in g.edges if e.eid not in in_tree]
    row = {eid: i for i, eid in enumerate(tree)}

    coefficients = np.zeros((len(tree), len(cotree)), dtype=np.int64)
    for j, eid in enumerate(cotree):
        e = g.edge(eid)
        # Return the cotree edge's value from v back to u through the tree.
        a, b = e.v, e.u
        while a != b:
            if depth[a] >= depth[b]:
                tid, up = parent_edge[a]
                t = g.edge(tid)
                coefficients[row[tid], j] += 1 if t.u == a else -1
                a = up
            else:
                tid, up = parent_edge[b]
                t = g.edge(tid)
                coefficients[row[tid], j] += 1 if t.v == b else -1
                b = up
    return tree, cotree, coefficients


def flow_count_oracle(g: Multigraph, k: int, budget: Optional[int] = None, chunk: int = 65536) -> int:
    """
    Count nowhere-zero Z_k flows by enumerating every cotree assignment.

    Each assignment extends uniquely to the spanning tree by conservation;
    the count keeps those where no edge carries 0.

    Raises:
        Disconnected: if g is disconnected
        HasBridge: if g has a bridge
        BudgetExceeded: if k ** nullity exceeds ``budget``
    """
    if k < 2:
        raise ValueError("group order must be at least 2")
    if not g.is_connected:
        raise Disconnected(f"graph has {g.num_components} components")
    if bridges(g):
        raise HasBridge("flows on a graph with a bridge are never nowhere-zero")
    budget = settings.FLOWROOTS_ORACLE_BUDGET if budget is None else budget
    if g.n == 0:
        return 1

    tree, cotree, coefficients = _tree_and_cotree(g)
    width = len(cotree)
    total = k ** width
    if total > budget:
        raise BudgetExceeded(f"{k}^{width} = {total} assignments exceed the budget of {budget}")
    if width == 0:
        return 1 if not tree else 0

    powers = k ** np.arange(width, dtype=np.int64)
    count = 0
    for start in range(0, total, chunk):
        index = np.arange(start, min(start + chunk, total), dtype=np.int64)
        values = (index[:, None] // powers) % k
        nonzero = np.all(values != 0, axis=1)
        if tree:
            carried = (values @ coefficients.T) % k
            nonzero &= np.all(carried != 0, axis=1)
        count += int(np.count_nonzero(nonzero))
    logger.debug(f"oracle counted {count} nowhere-zero Z_{k} flows over {total} assignments")
    return count


# Statistics

@dataclass(frozen=True)
class FlowStats:
    """Vertex and edge counts against the cocycle rank and the degree excess"""

    n: int
    m: int
    r: int
    delta: int
    degree_histogram: Dict[int, int]
    edge_connectivity: Optional[int]

    @property
    def handshake_holds(self) -> bool:
        return sum(i * v for i, v in self.degree_histogram.items()) == 2 * self.m

    @property
    def three_edge_connected(self) -> bool:
        return self.edge_connectivity is not None and self.edge_connectivity >= 3

    @property
    def vertex_identity_holds(self) -> bool:
        return self.n == 2 * self.r - 2 - self.delta

    @property
    def edge_identity_holds(self) -> bool:
        return self.m == 3 * self.r - 3 - self.delta

    @property
    def high_degree_count(self) -> int:
        """Number of vertices of degree at least 4"""
        return sum(v for i, v in self.degree_histogram.items() if i >= 4)


def flow_stats(g: Multigraph) -> FlowStats:
    """
    Raises:
        Disconnected: if g is disconnected
    """
    connectivity = edge_connectivity(g)
    histogram: Dict[int, int] = {}
    for d in g.degrees:
        histogram[d] = histogram.get(d, 0) + 1
    delta = sum((i - 3) * v for i, v in histogram.items() if i >= 3)
    return FlowStats(
        n=g.n,
        m=g.m,
        r=g.nullity,
        delta=delta,
        degree_histogram=dict(sorted(histogram.items())),
        edge_connectivity=connectivity,
    )


# Product formula

@dataclass(frozen=True)
class ProductFormulaCheck:
    cutset: ThreeCutset
    g1: Multigraph
    g2: Multigraph
    f_g: IntPoly
    f_g1: IntPoly
    f_g2: IntPoly

    @property
    def holds(self) -> bool:
        return mul(self.f_g, GLUE_FACTOR) == mul(self.f_g1, self.f_g2)


def product_formula_check(g: Multigraph, cutset_edges, engine: Optional[FlowEngine] = None) -> ProductFormulaCheck:
    """
    Compare F(G)(x-1)(x-2) with F(G1)F(G2) for a proper minimal 3-cutset.

    All three polynomials come from plain deletion-contraction, with the
    cutset decomposition switched off.

    Raises:
        NotAProperCutset: if the edges are not a proper minimal 3-cutset of g
    """
    edges = tuple(cutset_edges)
    cutset = describe_cutset(g, edges) if len(set(edges)) == 3 else None
    if cutset is None or not cutset.proper:
        raise NotAProperCutset(f"{sorted(edges)} is not a proper 3-cutset")
    side_a = set(cutset.side_a)
    for eid in edges:
        e = g.edge(eid)
        if (e.u in side_a) == (e.v in side_a):
            raise NotAProperCutset(f"edge {eid} does not cross the cut; the cutset is not minimal")

    if engine is None:
        engine = default_engine(decompose=False)
    elif engine.decompose:
        engine = FlowEngine(FlowMemo(engine.memo.cache, "flow-dc"), decompose=False,
                            chromatic_memo=engine.chromatic_memo)
    g1, g2 = split_at_cutset(g, cutset)
    check = ProductFormulaCheck(
        cutset=cutset, g1=g1, g2=g2,
        f_g=engine.flow_poly(g), f_g1=engine.flow_poly(g1), f_g2=engine.flow_poly(g2),
    )
    if not check.holds:
        logger.error(f"product formula fails at cutset {cutset.edges}")
    return check


# Decomposition tree

@dataclass(frozen=True)
class DecompositionNode:
    """One graph of the recursive 3-cutset decomposition"""

    graph: Multigraph
    polynomial: IntPoly
    cutset: Optional[ThreeCutset] = None
    children: Tuple['DecompositionNode', ...] = ()

    @property
    def leaves(self) -> List['DecompositionNode']:
        if not self.children:
            return [self]
        return [leaf for child in self.children for leaf in child.leaves]


def decomposition_tree(g: Multigraph, engine: Optional[FlowEngine] = None) -> DecompositionNode:
    """
    Split repeatedly at proper 3-cutsets.

    A connected bridgeless input is series-reduced first; a node whose graph
    has no proper 3-cutset is a leaf. Each node carries its flow polynomial,
    so F(node)(x-1)(x-2) = F(child1)F(child2) at every split.
    """
    engine = engine or default_engine()
    polynomial = engine.flow_poly(g)
    if g.m == 0 or not g.is_connected or bridges(g):
        return DecompositionNode(g, polynomial)

    reduced = series_reduce(g).without_loops()
    connectivity = edge_connectivity(reduced) if reduced.m else None
    if connectivity is None or connectivity < 3:
        return DecompositionNode(g, polynomial)
    cutset = find_proper_cutset(reduced)
    if cutset is None:
        return DecompositionNode(g, polynomial)

    g1, g2 = split_at_cutset(reduced, cutset)
    children = (decomposition_tree(g1, engine), decomposition_tree(g2, engine))
    return DecompositionNode(g, polynomial, cutset, children)
