"""
Per-graph verification of the integral flow roots characterization.

The analytic side (flow polynomial and its roots) comes from flowcalc and
polynomial; the structural side (dual of a planar chordal graph) comes from
planar and matroid. Neither side consults the other. Lemma and proof-trace
diagnostics are attached to each report but never decide consistency.

Contains:
- TheoremReport, ProofTrace and check_graph
- CorpusSummary and verify_corpus (serial or multiprocessing, input order)
"""

import logging
from collections import Counter
from dataclasses import dataclass, field
from multiprocessing import Pool
from typing import Callable, Dict, Iterable, List, Optional, Tuple

import networkx as nx
from django.conf import settings

from .exceptions import BudgetExceeded, PreconditionViolated
from .flowcalc import FlowEngine, ProductFormulaCheck, default_engine, find_proper_cutset, product_formula_check
from .graph import CutsetReport, Multigraph, blocks, bridges, edge_connectivity, minimal_three_cutsets, series_reduce
from .matroid import CircuitBoundReport, cocycle_matroid, three_circuit_bound_check
from .planar import StructuralReport, is_dual_of_planar_chordal, is_two_tree
from .polynomial import BoundMode, BoundReport, IntPoly, check_coefficient_bound, factored_form, integer_roots

logger = logging.getLogger('flowroots')

# Plain deletion-contraction on larger graphs is too slow for a spot check.
SPOT_CHECK_MAX_EDGES = 24


@dataclass(frozen=True)
class ProofTrace:
    """Counts the inductive argument relies on, for one 3-edge-connected graph"""

    case: str
    proper_cutsets: int
    required: int
    holds: bool
    detail: str = ""


@dataclass(frozen=True)
class TheoremReport:
    """
    Both sides of the characterization for one graph, plus diagnostics.

    ``consistent`` is None when a budget was exceeded (``skipped`` says which)
    and for graphs with a bridge, whose flow polynomial is zero.
    """

    graph_id: str
    n: int
    m: int
    r: int
    delta: int
    degree_histogram: Dict[int, int]
    flow: IntPoly
    factored: str
    bridgeless: bool
    edge_connectivity: Optional[int]
    roots_integral: Optional[bool] = None
    roots_real: Optional[bool] = None
    planar: Optional[bool] = None
    supersolvable: Optional[bool] = None
    dual_of_planar_chordal: Optional[bool] = None
    certificate_chordal: Optional[bool] = None
    chain_roots: Optional[Tuple[int, ...]] = None
    cubic_real: Optional[bool] = None
    small_excess_real: Optional[bool] = None
    three_cutsets: Optional[int] = None
    proper_three_cutsets: Optional[int] = None
    three_circuit: Optional[CircuitBoundReport] = None
    coefficient_bound: Optional[BoundReport] = None
    product_formula: Optional[ProductFormulaCheck] = None
    proof_trace: Optional[ProofTrace] = None
    structure: Optional[StructuralReport] = None
    skipped: Optional[str] = None
    consistent: Optional[bool] = None

    @property
    def degenerate(self) -> bool:
        return not self.bridgeless

    @property
    def chain_roots_match(self) -> Optional[bool]:
        if self.chain_roots is None or not self.roots_integral:
            return None
        return sorted(self.chain_roots) == integer_roots(self.flow).roots()

    @property
    def circuits_match_cutsets(self) -> Optional[bool]:
        if self.three_circuit is None or self.three_cutsets is None:
            return None
        return self.three_circuit.lines.three_point_lines == self.three_cutsets

    @property
    def diagnostics_hold(self) -> bool:
        checks = [
            self.chain_roots_match,
            self.circuits_match_cutsets,
            self.small_excess_real,
            self.three_circuit.holds if self.three_circuit else None,
            self.coefficient_bound.holds if self.coefficient_bound else None,
            self.product_formula.holds if self.product_formula else None,
            self.proof_trace.holds if self.proof_trace else None,
        ]
        return all(check is not False for check in checks)


def _degree_histogram(g: Multigraph) -> Dict[int, int]:
    return dict(sorted(Counter(g.degrees).items()))


def _chain_roots(g: Multigraph, structural) -> Tuple[int, ...]:
    """Chain roots of every block, plus a root 1 for each loop left by series reduction"""
    loops = len(series_reduce(g).loops)
    roots = [1] * loops
    for block in structural.blocks:
        roots.extend(block.roots)
    return tuple(sorted(roots))


def _coefficient_bound(flow: IntPoly, integral: bool, real: bool) -> Optional[BoundReport]:
    modes = []
    if integral:
        modes.append(BoundMode.INTEGER)
    if real:
        modes.append(BoundMode.REAL)
    for mode in modes:
        try:
            return check_coefficient_bound(flow, mode)
        except PreconditionViolated as exc:
            logger.debug(f"coefficient bound ({mode.value}) not applicable: {exc}")
    return None


def _proof_trace(flow: IntPoly, r: int, delta: int, histogram: Dict[int, int],
                 cutsets: CutsetReport, certificate) -> Optional[ProofTrace]:
    proper = len(cutsets.proper)
    high = sum(v for i, v in histogram.items() if i >= 4)
    if r >= 4 and delta <= r - 3:
        required = r - 3 - delta + high
        return ProofTrace("excess_below_rank", proper, required, proper >= required)

    two_tree_form = IntPoly.linear(1) * IntPoly.linear(2) ** (r - 1)
    if r >= 2 and delta == r - 2 and flow == two_tree_form:
        holds = True
        detail = []
        if certificate is not None:
            dual_is_two_tree = is_two_tree(certificate)
            holds = holds and dual_is_two_tree
            detail.append(f"dual is a 2-tree: {dual_is_two_tree}")
        if not proper:
            expected = Counter({3: r - 1})
            expected[r + 1] += 1
            shape = Counter(histogram) == expected
            holds = holds and shape and len(cutsets.cutsets) == r - 1
            detail.append(f"degrees {dict(histogram)}")
        return ProofTrace("two_tree", proper, r - 1, holds, "; ".join(detail))
    return None


def check_graph(g: Multigraph, graph_id: str = "", engine: Optional[FlowEngine] = None,
                max_rank: Optional[int] = None, spot_check: bool = True) -> TheoremReport:
    """
    Compute both sides of the characterization for g and attach diagnostics.

    Args:
        g: any multigraph; bridged inputs are reported as degenerate
        graph_id: label carried into the report
        engine: flow engine (and memo) to use
        max_rank: supersolvability rank limit
        spot_check: run the cutset product formula when a proper 3-cutset exists

    Returns:
        TheoremReport
    """
    engine = engine or default_engine()
    histogram = _degree_histogram(g)
    delta = sum((i - 3) * v for i, v in histogram.items() if i >= 3)
    connectivity = edge_connectivity(g) if g.is_connected else None
    bridgeless = not bridges(g)

    # Analytic side
    flow = engine.flow_poly(g)
    base = dict(
        graph_id=graph_id, n=g.n, m=g.m, r=g.nullity, delta=delta, degree_histogram=histogram,
        flow=flow, factored=factored_form(flow), bridgeless=bridgeless, edge_connectivity=connectivity,
    )
    if not bridgeless:
        logger.debug(f"{graph_id}: bridge present, flow polynomial is zero")
        return TheoremReport(**base)

    roots = integer_roots(flow)
    integral, real = roots.all_roots_integral, roots.all_roots_real

    # Structural side
    try:
        structural = is_dual_of_planar_chordal(g, max_rank=max_rank)
    except BudgetExceeded as exc:
        logger.warning(f"{graph_id}: skipped ({exc})")
        return TheoremReport(**base, roots_integral=integral, roots_real=real, skipped=str(exc))
    supersolvable = all(block.supersolvable for block in structural.blocks)
    verdict = supersolvable and structural.planar

    consistent = integral == verdict and supersolvable == verdict
    if structural.certificate_chordal is not None:
        consistent = consistent and structural.certificate_chordal == supersolvable

    r = g.nullity
    simple_cubic = g.is_simple() and g.n >= 4 and set(histogram) == {3}
    cubic_real = None
    if simple_cubic and real and nx.node_connectivity(g.simple_networkx()) >= 3:
        certificate = structural.certificate
        triangulation = certificate is not None and certificate.m == 3 * certificate.n - 6
        cubic_real = verdict and triangulation
        consistent = consistent and cubic_real

    # Diagnostics on the simple cographic matroid
    three_connected = connectivity is not None and connectivity >= 3 and not g.loops
    cutsets = three_circuit = trace = None
    small_excess_real = None
    if three_connected:
        cutsets = minimal_three_cutsets(g)
        try:
            three_circuit = three_circuit_bound_check(cocycle_matroid(g), chi=flow)
        except BudgetExceeded as exc:
            logger.warning(f"{graph_id}: three-circuit bounds skipped ({exc})")
        if len(blocks(g)) == 1:
            if integral:
                trace = _proof_trace(flow, r, delta, histogram, cutsets, structural.certificate)
            if real and r >= 3 and 0 <= delta and delta * delta < 2 * (r - 2):
                small_excess_real = verdict

    product = None
    if spot_check and three_connected and g.m <= SPOT_CHECK_MAX_EDGES:
        cutset = find_proper_cutset(g)
        if cutset is not None:
            product = product_formula_check(g, cutset.edges, engine)

    report = TheoremReport(
        **base,
        roots_integral=integral,
        roots_real=real,
        planar=structural.planar,
        supersolvable=supersolvable,
        dual_of_planar_chordal=verdict,
        certificate_chordal=structural.certificate_chordal,
        chain_roots=_chain_roots(g, structural) if supersolvable else None,
        cubic_real=cubic_real,
        small_excess_real=small_excess_real,
        three_cutsets=len(cutsets.cutsets) if cutsets else None,
        proper_three_cutsets=len(cutsets.proper) if cutsets else None,
        three_circuit=three_circuit,
        coefficient_bound=_coefficient_bound(flow, integral, real),
        product_formula=product,
        proof_trace=trace,
        structure=structural,
        consistent=consistent,
    )
    if not consistent:
        logger.error(f"{graph_id}: counterexample, integral={integral} dual_of_planar_chordal={verdict}")
    elif not report.diagnostics_hold:
        logger.error(f"{graph_id}: a lemma diagnostic failed")
    return report


# Corpus runs

@dataclass
class CorpusSummary:
    total: int = 0
    consistent: int = 0
    integral: int = 0
    real: int = 0
    dual_chordal: int = 0
    degenerate: int = 0
    skipped: int = 0
    diagnostics_failed: int = 0
    integral_graphs: List[str] = field(default_factory=list)
    counterexample: Optional[TheoremReport] = None

    def add(self, report: TheoremReport):
        self.total += 1
        if report.degenerate:
            self.degenerate += 1
            return
        if report.skipped:
            self.skipped += 1
            return
        self.consistent += bool(report.consistent)
        self.real += bool(report.roots_real)
        self.dual_chordal += bool(report.dual_of_planar_chordal)
        if report.roots_integral:
            self.integral += 1
            self.integral_graphs.append(report.graph_id)
        if not report.diagnostics_hold:
            self.diagnostics_failed += 1
        if report.consistent is False and self.counterexample is None:
            self.counterexample = report


_worker_engine: Optional[FlowEngine] = None
_worker_max_rank: Optional[int] = None


def _init_worker(decompose: bool, memo_cap: Optional[int], max_rank: Optional[int]):
    global _worker_engine, _worker_max_rank
    if memo_cap is None:
        _worker_engine = default_engine(decompose)
    else:
        _worker_engine = FlowEngine.with_capacity(memo_cap, decompose)
    _worker_max_rank = max_rank


def _check_item(item: Tuple[str, Multigraph]) -> TheoremReport:
    graph_id, g = item
    return check_graph(g, graph_id, engine=_worker_engine, max_rank=_worker_max_rank)


def verify_corpus(items: Iterable[Tuple[str, Multigraph]], parallel: Optional[int] = None,
                  decompose: bool = True, memo_cap: Optional[int] = None, max_rank: Optional[int] = None,
                  on_report: Optional[Callable[[TheoremReport], None]] = None) -> CorpusSummary:
    """
    Run check_graph over a corpus, stopping at the first counterexample.

    Reports reach ``on_report`` in input order whatever the parallelism.

    Args:
        items: (graph id, graph) pairs
        parallel: worker processes; 1 runs in-process
        decompose: let the flow engine split at proper 3-cutsets
        memo_cap: private memo capacity per worker
        max_rank: supersolvability rank limit
        on_report: called with each report as it completes

    Returns:
        CorpusSummary with ``counterexample`` set if the run was aborted
    """
    parallel = settings.FLOWROOTS_PARALLELISM if parallel is None else parallel
    summary = CorpusSummary()
    initargs = (decompose, memo_cap, max_rank)

    def consume(reports: Iterable[TheoremReport]):
        for report in reports:
            summary.add(report)
            if on_report is not None:
                on_report(report)
            if summary.total % 1000 == 0:
                logger.info(f"checked {summary.total} graphs")
            if summary.counterexample is not None:
                logger.error(f"aborting corpus run at {report.graph_id}")
                return

    if parallel <= 1:
        _init_worker(*initargs)
        consume(_check_item(item) for item in items)
    else:
        with Pool(parallel, initializer=_init_worker, initargs=initargs) as pool:
            consume(pool.imap(_check_item, items, chunksize=8))
            pool.terminate()
    logger.info(
        f"corpus done: {summary.total} graphs, {summary.integral} integral, "
        f"{summary.skipped} skipped, {summary.degenerate} degenerate"
    )
    return summary
