"""
Matroids given by rank oracles, realized by graphs.

Contains:
- Matroid base class over a ground set of ids; GraphicMatroid (cycle and
  cocycle), UniformMatroid, Restriction
- FlatLattice: flats by rank with Moebius values; char_poly_mobius
- is_modular_flat (line criterion), is_modular_flat_by_rank
- is_supersolvable: top-down search for a maximal chain of modular flats
- parallel_connection of graph-realized matroids
- line_stats and three_circuit_bound_check

Subsets are handled internally as int bitmasks over the sorted ground set.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from math import comb
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

from django.conf import settings

from .exceptions import (
    BudgetExceeded,
    GlueNotModular,
    GlueNotPresent,
    HypothesisNotMet,
    NonDivisible,
    NotAFlat,
)
from .graph import Edge, Multigraph, bridges
from .polynomial import IntPoly, divide_exact, integer_roots

logger = logging.getLogger('flowroots')


class Matroid:
    """Ground set of ids with a rank function; subclasses supply ``rank_mask``"""

    def __init__(self, ground: Iterable[int]):
        self.elements: Tuple[int, ...] = tuple(sorted(ground))
        self.index: Dict[int, int] = {e: i for i, e in enumerate(self.elements)}
        self.full_mask = (1 << len(self.elements)) - 1

    # Subset plumbing

    @property
    def ground(self) -> FrozenSet[int]:
        return frozenset(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def mask(self, subset: Iterable[int]) -> int:
        result = 0
        for e in subset:
            result |= 1 << self.index[e]
        return result

    def members(self, mask: int) -> FrozenSet[int]:
        return frozenset(self.elements[i] for i in range(len(self.elements)) if mask >> i & 1)

    # Rank and closure

    def rank_mask(self, mask: int) -> int:
        raise NotImplementedError

    def rank(self, subset: Optional[Iterable[int]] = None) -> int:
        return self.rank_mask(self.full_mask if subset is None else self.mask(subset))

    @property
    def full_rank(self) -> int:
        return self.rank_mask(self.full_mask)

    def closure_mask(self, mask: int) -> int:
        r = self.rank_mask(mask)
        result = mask
        for i in range(len(self.elements)):
            bit = 1 << i
            if not mask & bit and self.rank_mask(mask | bit) == r:
                result |= bit
        return result

    def closure(self, subset: Iterable[int]) -> FrozenSet[int]:
        return self.members(self.closure_mask(self.mask(subset)))

    def is_flat(self, subset: Iterable[int]) -> bool:
        mask = self.mask(subset)
        return self.closure_mask(mask) == mask

    # Derived matroids

    def restrict(self, subset: Iterable[int]) -> 'Matroid':
        return Restriction(self, subset)

    def loops(self) -> FrozenSet[int]:
        return frozenset(e for e in self.elements if self.rank_mask(1 << self.index[e]) == 0)

    def parallel_classes(self) -> List[Tuple[int, ...]]:
        """Classes of non-loop elements of rank-1 pairs, each sorted, ordered by first id"""
        loops = self.loops()
        classes: List[List[int]] = []
        for e in self.elements:
            if e in loops:
                continue
            for group in classes:
                if self.rank([group[0], e]) == 1:
                    group.append(e)
                    break
            else:
                classes.append([e])
        return [tuple(group) for group in classes]

    def simplify(self) -> 'Matroid':
        """Drop loops and keep the smallest id of each parallel class"""
        return self.restrict(group[0] for group in self.parallel_classes())

    def is_simple(self) -> bool:
        return not self.loops() and all(len(group) == 1 for group in self.parallel_classes())

    def lines(self) -> List[FrozenSet[int]]:
        """Rank-2 flats of the simplification, as sets of its elements"""
        simple = self.simplify()
        found = set()
        elements = simple.elements
        for i, a in enumerate(elements):
            for b in elements[i + 1:]:
                found.add(simple.closure_mask(simple.mask((a, b))))
        return sorted((simple.members(mask) for mask in found), key=sorted)


class GraphicMatroid(Matroid):
    """Cycle matroid of a graph, or its dual (the cocycle matroid) when ``dual`` is set"""

    def __init__(self, graph: Multigraph, dual: bool = False):
        super().__init__(graph.edge_ids)
        self.graph = graph
        self.dual = dual
        self._endpoints = [(graph.edge(e).u, graph.edge(e).v) for e in self.elements]
        self._graph_rank = graph.rank

    def _cycle_rank(self, mask: int) -> int:
        parent = list(range(self.graph.n))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        rank = 0
        i = 0
        while mask:
            if mask & 1:
                u, v = self._endpoints[i]
                ru, rv = find(u), find(v)
                if ru != rv:
                    parent[ru] = rv
                    rank += 1
            mask >>= 1
            i += 1
        return rank

    def rank_mask(self, mask: int) -> int:
        if not self.dual:
            return self._cycle_rank(mask)
        # rank*(S) = |S| - (r(E) - r(E \ S))
        return bin(mask).count("1") - (self._graph_rank - self._cycle_rank(self.full_mask & ~mask))

    def closure_mask(self, mask: int) -> int:
        if self.dual:
            # e joins cl*(S) exactly when it is a bridge of G \ S
            inside = [e for i, e in enumerate(self.elements) if mask >> i & 1]
            return mask | self.mask(bridges(self.graph, exclude=inside))
        parent = list(range(self.graph.n))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for i, (u, v) in enumerate(self._endpoints):
            if mask >> i & 1:
                parent[find(u)] = find(v)
        result = mask
        for i, (u, v) in enumerate(self._endpoints):
            if find(u) == find(v):
                result |= 1 << i
        return result


class UniformMatroid(Matroid):
    """U(k, n) on the ids 0..n-1"""

    def __init__(self, k: int, n: int):
        super().__init__(range(n))
        self.k = k

    def rank_mask(self, mask: int) -> int:
        return min(bin(mask).count("1"), self.k)


class Restriction(Matroid):
    """M|S, keeping the ids of M"""

    def __init__(self, base: Matroid, subset: Iterable[int]):
        if isinstance(base, Restriction):
            base = base.base
        super().__init__(subset)
        self.base = base
        self._bits = [1 << base.index[e] for e in self.elements]

    def _lift(self, mask: int) -> int:
        translated = 0
        i = 0
        while mask:
            if mask & 1:
                translated |= self._bits[i]
            mask >>= 1
            i += 1
        return translated

    def rank_mask(self, mask: int) -> int:
        return self.base.rank_mask(self._lift(mask))

    def closure_mask(self, mask: int) -> int:
        """cl of M|T is cl of M cut down to T"""
        closed = self.base.closure_mask(self._lift(mask))
        return sum(1 << i for i, bit in enumerate(self._bits) if closed & bit)


def cycle_matroid(g: Multigraph) -> GraphicMatroid:
    return GraphicMatroid(g, dual=False)


def cocycle_matroid(g: Multigraph) -> GraphicMatroid:
    return GraphicMatroid(g, dual=True)


# Lattice of flats

class FlatLattice:
    """
    Every flat of a matroid, grouped by rank, with Moebius values mu(bottom, X).

    Flats of rank k+1 are the closures of a rank-k flat plus one element;
    elements already absorbed into a cover of the same flat are skipped.
    """

    def __init__(self, matroid: Matroid, budget: Optional[int] = None):
        self.matroid = matroid
        budget = settings.FLOWROOTS_FLAT_BUDGET if budget is None else budget
        bottom = matroid.closure_mask(0)
        layers: List[List[int]] = [[bottom]]
        seen = {bottom}
        size = len(matroid)
        while True:
            above = []
            for flat in layers[-1]:
                covered = flat
                for i in range(size):
                    bit = 1 << i
                    if covered & bit:
                        continue
                    cover = matroid.closure_mask(flat | bit)
                    covered |= cover
                    if cover not in seen:
                        seen.add(cover)
                        above.append(cover)
                        if len(seen) > budget:
                            raise BudgetExceeded(f"more than {budget} flats")
            if not above:
                break
            layers.append(sorted(above))
        self.layers: List[List[int]] = layers
        self.bottom = bottom
        self._mobius: Optional[Dict[int, int]] = None
        logger.debug(f"lattice of flats: {len(seen)} flats, rank {len(layers) - 1}")

    @property
    def rank(self) -> int:
        return len(self.layers) - 1

    def __len__(self) -> int:
        return sum(len(layer) for layer in self.layers)

    def flats(self, rank: Optional[int] = None) -> List[FrozenSet[int]]:
        layers = self.layers if rank is None else [self.layers[rank]] if rank < len(self.layers) else []
        return [self.matroid.members(mask) for layer in layers for mask in layer]

    @property
    def mobius(self) -> Dict[int, int]:
        """mu(bottom, Y) = -sum of mu(bottom, X) over flats X strictly below Y"""
        if self._mobius is None:
            mu = {self.bottom: 1}
            for k in range(1, len(self.layers)):
                for y in self.layers[k]:
                    mu[y] = -sum(mu[x] for j in range(k) for x in self.layers[j] if x & y == x)
            self._mobius = mu
        return self._mobius

    def characteristic_polynomial(self) -> IntPoly:
        if self.bottom:
            return IntPoly.zero()
        coeffs = [0] * (self.rank + 1)
        mu = self.mobius
        for k, layer in enumerate(self.layers):
            coeffs[self.rank - k] += sum(mu[y] for y in layer)
        return IntPoly(coeffs)


def char_poly_mobius(m: Matroid, budget: Optional[int] = None) -> IntPoly:
    """
    Characteristic polynomial by Moebius summation over the flats.

    Raises:
        BudgetExceeded: if the lattice has more flats than ``budget``
    """
    if m.loops():
        return IntPoly.zero()
    return FlatLattice(m, budget).characteristic_polynomial()


# Modularity

def _require_flat(m: Matroid, flat: Iterable[int]) -> int:
    mask = m.mask(flat)
    if m.closure_mask(mask) != mask:
        raise NotAFlat(f"{sorted(flat)} is not closed")
    return mask


def is_modular_flat(m: Matroid, flat: Iterable[int]) -> bool:
    """
    Every line L with rank(X v L) = rank(X) + 1 meets X.

    Raises:
        NotAFlat: if ``flat`` is not closed
    """
    flat = frozenset(flat)
    mask = _require_flat(m, flat)
    r = m.rank_mask(mask)
    for line in m.lines():
        if line & flat:
            continue
        if m.rank_mask(mask | m.mask(line)) == r + 1:
            return False
    return True


def is_modular_flat_by_rank(m: Matroid, flat: Iterable[int], lattice: Optional[FlatLattice] = None) -> bool:
    """rank(X) + rank(Y) = rank(X v Y) + rank(X ^ Y) for every flat Y"""
    mask = _require_flat(m, flat)
    lattice = lattice or FlatLattice(m)
    r = m.rank_mask(mask)
    for k, layer in enumerate(lattice.layers):
        for y in layer:
            if r + k != m.rank_mask(mask | y) + m.rank_mask(mask & y):
                return False
    return True


@dataclass(frozen=True)
class SupersolvabilityResult:
    """Chain X0 < X1 < ... < Xr of modular flats when one exists"""

    supersolvable: bool
    rank: int
    chain: Tuple[FrozenSet[int], ...] = ()
    roots: Tuple[int, ...] = ()


def is_supersolvable(m: Matroid, max_rank: Optional[int] = None, budget: Optional[int] = None) -> SupersolvabilityResult:
    """
    Search for a maximal chain of modular flats in the simplification.

    A flat is extended downwards through copoints of its restriction that
    meet every line inside it; results are memoized per flat. The chain's
    consecutive size differences are the characteristic roots.

    Raises:
        BudgetExceeded: if the rank exceeds ``max_rank`` or the lattice the budget
    """
    simple = m.simplify()
    max_rank = settings.FLOWROOTS_SUPERSOLVABLE_MAX_RANK if max_rank is None else max_rank
    rank = simple.full_rank
    if rank > max_rank:
        raise BudgetExceeded(f"rank {rank} exceeds the supersolvability limit {max_rank}")
    lattice = FlatLattice(simple, budget)
    lines = lattice.layers[2] if rank >= 2 else []
    memo: Dict[int, Optional[List[int]]] = {}

    def search(flat: int, k: int) -> Optional[List[int]]:
        if k == 0:
            return [flat]
        if k == 1:
            return [0, flat]
        if k == 2:
            point = next(p for p in lattice.layers[1] if p & flat == p)
            return [0, point, flat]
        if flat in memo:
            return memo[flat]
        inside = [line for line in lines if line & flat == line]
        memo[flat] = None
        for copoint in lattice.layers[k - 1]:
            if copoint & flat != copoint:
                continue
            if all(line & copoint for line in inside):
                below = search(copoint, k - 1)
                if below is not None:
                    memo[flat] = below + [flat]
                    break
        return memo[flat]

    chain = search(simple.full_mask, rank)
    if chain is None:
        return SupersolvabilityResult(False, rank)
    sizes = [bin(x).count("1") for x in chain]
    roots = tuple(b - a for a, b in zip(sizes, sizes[1:]))
    return SupersolvabilityResult(True, rank, tuple(simple.members(x) for x in chain), roots)


# Parallel connection

class GlueKind(Enum):
    EMPTY = "empty"
    POINT = "point"
    LINE = "line"


GLUE_POLYNOMIALS = {
    GlueKind.EMPTY: IntPoly.constant(1),
    GlueKind.POINT: IntPoly.from_roots([1]),
    GlueKind.LINE: IntPoly.from_roots([1, 2]),
}


@dataclass(frozen=True)
class Glue:
    """Edges of each operand to identify: none, one edge, or a triangle"""

    kind: GlueKind
    first: Tuple[int, ...] = ()
    second: Tuple[int, ...] = ()


@dataclass(frozen=True)
class ParallelConnection:
    """
    Glued graph whose cycle matroid is the parallel connection.

    Ids of the second operand are shifted by ``offset``; its glue edges are
    replaced by those of the first. ``k33_risk`` is set when the glued
    triangle ends up in three K4 subgraphs, which contain a K3,3.
    """

    graph: Multigraph
    glue_edges: Tuple[int, ...]
    offset: int
    k33_risk: bool
    modular_in: str

    @property
    def matroid(self) -> GraphicMatroid:
        return cycle_matroid(self.graph)


def _glue_vertices(g: Multigraph, edges: Tuple[int, ...], kind: GlueKind) -> List[int]:
    """Vertices to identify, ordered consistently with ``edges``"""
    if kind is GlueKind.EMPTY:
        if edges:
            raise GlueNotPresent("an empty glue takes no edges")
        if g.n == 0:
            raise GlueNotPresent("cannot glue an empty graph")
        return [0]
    wanted = 1 if kind is GlueKind.POINT else 3
    if len(edges) != wanted or len(set(edges)) != wanted:
        raise GlueNotPresent(f"{kind.value} glue needs {wanted} distinct edges")
    for eid in edges:
        if not g.has_edge(eid):
            raise GlueNotPresent(f"edge {eid} not in graph")
        if g.edge(eid).is_loop:
            raise GlueNotPresent(f"edge {eid} is a loop")
    if kind is GlueKind.POINT:
        e = g.edge(edges[0])
        return [e.u, e.v]
    triangle = [g.edge(eid) for eid in edges]
    vertices = {x for e in triangle for x in (e.u, e.v)}
    pairs = {(e.u, e.v) for e in triangle}
    if len(vertices) != 3 or len(pairs) != 3:
        raise GlueNotPresent(f"edges {edges} do not form a triangle")
    # the vertex opposite each glue edge, in glue order
    return [next(iter(vertices - {e.u, e.v})) for e in triangle]


def parallel_connection(g1: Multigraph, g2: Multigraph, glue: Glue) -> ParallelConnection:
    """
    Glue two graphs on a vertex, an edge or a triangle.

    Raises:
        GlueNotPresent: if the glue edges are missing or malformed
        GlueNotModular: if the glue line is modular in neither cycle matroid
    """
    anchors1 = _glue_vertices(g1, glue.first, glue.kind)
    anchors2 = _glue_vertices(g2, glue.second, glue.kind)

    modular_in = "both"
    if glue.kind is GlueKind.LINE:
        in_first = _glue_is_modular(g1, glue.first)
        in_second = _glue_is_modular(g2, glue.second)
        if not (in_first or in_second):
            raise GlueNotModular(f"line {glue.first} / {glue.second} is modular in neither operand")
        modular_in = "both" if in_first and in_second else "first" if in_first else "second"

    offset = max(g1.edge_ids, default=-1) + 1
    mapping = {}
    next_vertex = g1.n
    for x in range(g2.n):
        if x in anchors2:
            mapping[x] = anchors1[anchors2.index(x)]
        else:
            mapping[x] = next_vertex
            next_vertex += 1
    skipped = set(glue.second)
    edges = list(g1.edges)
    for e in g2.edges:
        if e.eid not in skipped:
            edges.append(Edge(mapping[e.u], mapping[e.v], e.eid + offset))
    graph = Multigraph(next_vertex, tuple(edges))

    k33_risk = False
    if glue.kind is GlueKind.LINE:
        adjacent = [set() for _ in range(graph.n)]
        for u, v, _ in graph.edges:
            if u != v:
                adjacent[u].add(v)
                adjacent[v].add(u)
        a, b, c = anchors1
        k33_risk = len(adjacent[a] & adjacent[b] & adjacent[c]) >= 3
        if k33_risk:
            logger.warning(f"three K4s share the glued line {glue.first}")
    return ParallelConnection(graph, tuple(glue.first), offset, k33_risk, modular_in)


def _glue_is_modular(g: Multigraph, triangle: Tuple[int, ...]) -> bool:
    m = cycle_matroid(g)
    return is_modular_flat(m, m.closure(triangle))


# Three-element circuits

@dataclass(frozen=True)
class LineStats:
    """gamma[i]: number of lines with i points in the simplification"""

    points: int
    rank: int
    gamma: Dict[int, int]

    @property
    def three_point_lines(self) -> int:
        return self.gamma.get(3, 0)

    @property
    def max_line_size(self) -> int:
        return max(self.gamma, default=0)

    @property
    def pairs_covered(self) -> bool:
        """Each pair of points lies on exactly one line"""
        return sum(comb(i, 2) * g for i, g in self.gamma.items()) == comb(self.points, 2)

    def weighted_sum(self) -> int:
        """sum over i >= 3 of C(i-1, 2) * gamma_i"""
        return sum(comb(i - 1, 2) * g for i, g in self.gamma.items() if i >= 3)


def line_stats(m: Matroid) -> LineStats:
    simple = m.simplify()
    gamma: Dict[int, int] = {}
    for line in simple.lines():
        gamma[len(line)] = gamma.get(len(line), 0) + 1
    return LineStats(points=len(simple), rank=simple.full_rank, gamma=dict(sorted(gamma.items())))


@dataclass(frozen=True)
class LemmaCheck:
    """
    One three-circuit lower bound: measured hypotheses, statistic against
    bound, and whether equality coincides with the forced polynomial.
    """

    name: str
    hypotheses: Dict[str, bool]
    statistic: int
    bound: int
    forced_form: IntPoly
    matches_forced_form: bool

    @property
    def unmet(self) -> Tuple[str, ...]:
        return tuple(name for name, ok in self.hypotheses.items() if not ok)

    @property
    def applies(self) -> bool:
        return not self.unmet

    @property
    def slack(self) -> int:
        return self.statistic - self.bound

    @property
    def equality(self) -> bool:
        return self.slack == 0

    @property
    def holds(self) -> bool:
        if not self.applies:
            return True
        return self.slack >= 0 and self.equality == self.matches_forced_form

    def require(self):
        if self.unmet:
            raise HypothesisNotMet(f"{self.name}: {', '.join(self.unmet)} not satisfied")


@dataclass(frozen=True)
class CircuitBoundReport:
    rank: int
    elements: int
    delta: int
    lines: LineStats
    chi: IntPoly
    chi_at_two: int
    connected: bool
    roots_integral: bool
    roots_real: bool
    checks: Tuple[LemmaCheck, ...] = field(default=())

    @property
    def holds(self) -> bool:
        return all(check.holds for check in self.checks)

    @property
    def applicable(self) -> List[LemmaCheck]:
        return [check for check in self.checks if check.applies]


def _is_connected_by_chi(chi: IntPoly) -> bool:
    """(x-1)^2 does not divide chi exactly when a loopless matroid is connected"""
    if chi.is_zero:
        return False
    try:
        divide_exact(chi, IntPoly.from_roots([1, 1]))
    except NonDivisible:
        return True
    return False


def three_circuit_bound_check(m: Matroid, chi: Optional[IntPoly] = None, budget: Optional[int] = None) -> CircuitBoundReport:
    """
    Evaluate every three-circuit lower bound against the simplification of m.

    Hypotheses are measured, never assumed; a bound whose hypotheses fail is
    reported with the failing names. ``chi`` may be supplied (the flow
    polynomial for a cocycle matroid) to skip the Moebius sum.
    """
    simple = m.simplify()
    r = simple.full_rank
    n_elements = len(simple)
    lines = line_stats(simple)
    chi = chi if chi is not None else char_poly_mobius(simple, budget)
    delta = 3 * r - 3 - n_elements

    integral = real = False
    if not chi.is_zero and chi.leading in (1, -1):
        report = integer_roots(chi)
        integral, real = report.all_roots_integral, report.all_roots_real
    chi_two = chi(2)
    connected = _is_connected_by_chi(chi)
    short_lines = lines.max_line_size <= 3
    x1, x2 = IntPoly.linear(1), IntPoly.linear(2)

    checks = []
    if r >= 2:
        forced = x1 * x2 * IntPoly.linear(3) ** (r - 2)
        checks.append(LemmaCheck(
            name="real_full_size",
            hypotheses={"size_3r_minus_3": delta == 0, "lines_at_most_3": short_lines,
                        "real_roots": real, "chi_two_zero": chi_two == 0},
            statistic=lines.three_point_lines,
            bound=3 * r - 5,
            forced_form=forced,
            matches_forced_form=chi == forced,
        ))
        in_range = 0 <= delta <= r - 2
        forced = x1 * x2 ** (delta + 1) * IntPoly.linear(3) ** (r - 2 - delta) if in_range else IntPoly.zero()
        checks.append(LemmaCheck(
            name="integer_deficit",
            hypotheses={"delta_in_range": in_range, "lines_at_most_3": short_lines,
                        "integer_roots": integral, "chi_two_zero": chi_two == 0},
            statistic=lines.three_point_lines,
            bound=3 * r - 5 - 2 * delta,
            forced_form=forced,
            matches_forced_form=chi == forced,
        ))
    if r >= 3 and (n_elements - 3) % (r - 2) == 0:
        c = (n_elements - 3) // (r - 2)
        forced = x1 * x2 * IntPoly.linear(c) ** (r - 2)
        checks.append(LemmaCheck(
            name="real_spread_two",
            hypotheses={"c_at_least_2": c >= 2, "connected": connected,
                        "real_roots": real, "chi_two_zero": chi_two == 0},
            statistic=lines.weighted_sum(),
            bound=comb(c, 2) * (r - 2) + 1,
            forced_form=forced,
            matches_forced_form=chi == forced,
        ))
    if r >= 2 and (n_elements - 1) % (r - 1) == 0:
        c = (n_elements - 1) // (r - 1)
        forced = x1 * IntPoly.linear(c) ** (r - 1)
        checks.append(LemmaCheck(
            name="real_spread_one",
            hypotheses={"c_at_least_2": c >= 2, "connected": connected, "real_roots": real},
            statistic=lines.weighted_sum(),
            bound=comb(c, 2) * (r - 1),
            forced_form=forced,
            matches_forced_form=chi == forced,
        ))

    for check in checks:
        if check.applies and not check.holds:
            logger.error(f"three-circuit bound {check.name} violated: {check.statistic} vs {check.bound}")
    return CircuitBoundReport(
        rank=r, elements=n_elements, delta=delta, lines=lines, chi=chi, chi_at_two=chi_two,
        connected=connected, roots_integral=integral, roots_real=real, checks=tuple(checks),
    )
