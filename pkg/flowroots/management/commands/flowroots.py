"""
Django management command: the flowroots command-line front end.

Usage:
    python manage.py flowroots poly --kind flow --graph 'C~'
    python manage.py flowroots roots --named ten-vertex
    python manage.py flowroots verify --atlas 7 --filter 3ec --parallel 4 --output json
    python manage.py flowroots gen --family 2tree --n 8 --seed 3 --dual

Graphs come from a file argument (or stdin), ``--graph`` inline text,
``--named`` fixtures or ``--atlas N``. Human output goes through the command
styles; ``--output json`` writes one compact JSON object per line.

Exit status: 0 on success, 1 on usage or input errors, 2 when ``verify``
finds a counterexample.
"""

import logging
import sys

from django.core.management.base import BaseCommand, CommandError, CommandParser, handle_default_options

from flowroots import corpus
from flowroots.exceptions import FlowRootsError
from flowroots.flowcalc import FlowEngine, decomposition_tree, default_engine, flow_stats
from flowroots.graph import GraphFormat, minimal_three_cutsets, series_reduce
from flowroots.matroid import char_poly_mobius, cocycle_matroid, cycle_matroid
from flowroots.planar import (
    Embedding,
    GeneratorMode,
    build_from_script,
    dual,
    gen_chordal_planar,
    planarity_embed,
)
from flowroots.polynomial import count_real_roots, factored_form, integer_roots
from flowroots.serializers import (
    CliConfigSerializer,
    CorpusSummarySerializer,
    CutsetReportSerializer,
    DecompositionNodeSerializer,
    FlowStatsSerializer,
    GeneratedGraphSerializer,
    GraphSerializer,
    PolynomialSerializer,
    RootReportSerializer,
    TheoremReportSerializer,
    render_line,
)
from flowroots.theorem import check_graph, verify_corpus

logger = logging.getLogger('flowroots')

FILTERS = {
    'bridgeless': corpus.is_bridgeless,
    '3ec': corpus.is_three_edge_connected,
    'cubic': corpus.is_cubic,
}


def _add_input_arguments(parser):
    parser.add_argument('input', nargs='?', help="Graph file; '-' or omitted reads stdin")
    parser.add_argument('--format', choices=[f.value for f in GraphFormat],
                        help='Input format (detected from the first line when omitted)')
    parser.add_argument('--graph', help='Inline graph text instead of a file')
    parser.add_argument('--named', help='Comma-separated fixture names, e.g. k4,petersen,ten-vertex')
    parser.add_argument('--atlas', type=int, help='Every atlas graph on at most N vertices (N <= 7)')
    parser.add_argument('--filter', choices=sorted(FILTERS), help='Keep only graphs with this property')
    _add_output_arguments(parser)


def _add_output_arguments(parser):
    parser.add_argument('--output', choices=['human', 'json'], default='human', help='Output mode')
    parser.add_argument('--memo-cap', type=int, help='Flow memo capacity (default from settings)')
    parser.add_argument('--no-decompose', action='store_true',
                        help='Plain deletion-contraction, no 3-cutset splitting')


class Command(BaseCommand):
    help = 'Flow polynomials, integral flow roots and the planar chordal dual characterization'

    requires_system_checks = []

    def add_arguments(self, parser):
        # CommandParser subparsers raise CommandError instead of exiting 2
        subparsers = parser.add_subparsers(dest='subcommand', required=True, metavar='subcommand',
                                           parser_class=CommandParser)

        poly = subparsers.add_parser('poly', help='Flow, chromatic or matroid characteristic polynomial')
        poly.add_argument('--kind', choices=['flow', 'chromatic', 'charpoly'], default='flow')
        poly.add_argument('--matroid', choices=['cocycle', 'cycle'], default='cocycle',
                          help='Matroid used by --kind charpoly')
        _add_input_arguments(poly)

        roots = subparsers.add_parser('roots', help='Integer roots, real-root count and factored form')
        roots.add_argument('--kind', choices=['flow', 'chromatic', 'charpoly'], default='flow')
        roots.add_argument('--matroid', choices=['cocycle', 'cycle'], default='cocycle')
        _add_input_arguments(roots)

        for name, text in (
            ('stats', 'Vertex, edge, rank and degree-excess counts'),
            ('cutsets', 'Minimal 3-edge cutsets, proper or not'),
            ('reduce', 'Series reduction to edge connectivity >= 3'),
            ('check', 'Both sides of the characterization with lemma diagnostics'),
            ('decompose', 'Recursive 3-cutset decomposition tree'),
        ):
            _add_input_arguments(subparsers.add_parser(name, help=text))

        dual_parser = subparsers.add_parser('dual', help='Planar dual of an embedding')
        dual_parser.add_argument('--simple', action='store_true', help='Collapse parallel edges of the dual')
        _add_input_arguments(dual_parser)

        verify = subparsers.add_parser('verify', help='Check every graph of a corpus; exit 2 on a counterexample')
        verify.add_argument('--parallel', type=int, help='Worker processes')
        verify.add_argument('--reduced', action='store_true',
                            help='Also check the series-reduced multigraph of each bridgeless input')
        verify.add_argument('--reports', action='store_true', help='Print every report, not just the summary')
        _add_input_arguments(verify)

        gen = subparsers.add_parser('gen', help='Random planar chordal graph, or replay a build script')
        gen.add_argument('--family', choices=[mode.value for mode in GeneratorMode])
        gen.add_argument('--n', type=int, help='Number of vertices')
        gen.add_argument('--seed', type=int, help='Random seed (default from settings)')
        gen.add_argument('--script', help='Build script file with E/F lines')
        gen.add_argument('--dual', action='store_true', help='Emit the dual of the generated graph')
        _add_output_arguments(gen)

    def run_from_argv(self, argv):
        """Like BaseCommand.run_from_argv, with usage errors exiting 1"""
        self._called_from_command_line = False
        try:
            parser = self.create_parser(argv[0], argv[1])
            options = parser.parse_args(argv[2:])
            cmd_options = vars(options)
            args = cmd_options.pop('args', ())
            handle_default_options(options)
            self.execute(*args, **cmd_options)
        except CommandError as exc:
            self.stderr.write(f"{exc.__class__.__name__}: {exc}")
            sys.exit(exc.returncode)

    def handle(self, *args, **options):
        config = CliConfigSerializer(data={
            'output': options['output'],
            'format': options.get('format'),
            'memo_cap': options.get('memo_cap'),
            'parallel': options.get('parallel'),
            'seed': options.get('seed'),
            'n': options.get('n'),
            'family': options.get('family'),
            'atlas': options.get('atlas'),
        })
        if not config.is_valid():
            raise CommandError(f"invalid options: {dict(config.errors)}")
        self.json = config.validated_data['output'] == 'json'
        self.options = options
        subcommand = options['subcommand']
        logger.info(f"flowroots {subcommand} started")
        try:
            getattr(self, f"handle_{subcommand}")(options)
        except FlowRootsError as exc:
            logger.error(f"{subcommand} failed: {exc}")
            raise CommandError(str(exc))
        logger.info(f"flowroots {subcommand} finished")

    # Helpers

    def _engine(self) -> FlowEngine:
        decompose = not self.options.get('no_decompose')
        cap = self.options.get('memo_cap')
        if cap is None:
            return default_engine(decompose)
        return FlowEngine.with_capacity(cap, decompose)

    def _items(self, options):
        fmt = GraphFormat(options['format']) if options.get('format') else None
        if options.get('graph'):
            items = corpus.from_bytes(options['graph'].encode(), fmt, prefix='arg')
        elif options.get('named'):
            items = corpus.named_graphs([name.strip() for name in options['named'].split(',') if name.strip()])
        elif options.get('atlas') is not None:
            items = corpus.atlas(options['atlas'])
        else:
            path = options.get('input')
            if path in (None, '-'):
                data = sys.stdin.buffer.read()
            else:
                try:
                    with open(path, 'rb') as handle:
                        data = handle.read()
                except OSError as exc:
                    raise CommandError(f"cannot read {path}: {exc.strerror}")
            items = corpus.from_bytes(data, fmt)
        keep = FILTERS.get(options.get('filter'))
        # materialise so parse errors surface before any output
        return [(graph_id, g) for graph_id, g in items if keep is None or keep(g)]

    def _emit(self, data, human: str, style=None):
        if self.json:
            self.stdout.write(render_line(data))
        else:
            self.stdout.write(human, style_func=style)

    def _polynomial(self, g, options, engine):
        kind = options['kind']
        if kind == 'flow':
            return engine.flow_poly(g)
        if kind == 'chromatic':
            return engine.chromatic_poly(g)
        matroid = cocycle_matroid(g) if options['matroid'] == 'cocycle' else cycle_matroid(g)
        return char_poly_mobius(matroid)

    # Subcommands

    def handle_poly(self, options):
        engine = self._engine()
        for graph_id, g in self._items(options):
            p = self._polynomial(g, options, engine)
            self._emit(
                {'graph': graph_id, 'kind': options['kind'], 'polynomial': PolynomialSerializer(p).data},
                f"{graph_id}: {factored_form(p)}",
            )

    def handle_roots(self, options):
        engine = self._engine()
        for graph_id, g in self._items(options):
            p = self._polynomial(g, options, engine)
            if p.is_zero:
                self._emit({'graph': graph_id, 'kind': options['kind'], 'roots': None},
                           f"{graph_id}: zero polynomial")
                continue
            report = integer_roots(p)
            real_count = count_real_roots(p)
            data = {'graph': graph_id, 'kind': options['kind'], 'roots': RootReportSerializer(report).data,
                    'real_root_count': real_count}
            human = (
                f"{graph_id}: {factored_form(p)}\n"
                f"  integral: {'yes' if report.all_roots_integral else 'no'}, "
                f"real: {'yes' if report.all_roots_real else 'no'} "
                f"({real_count} distinct real of degree {p.degree})"
            )
            self._emit(data, human)

    def handle_stats(self, options):
        for graph_id, g in self._items(options):
            stats = flow_stats(g)
            histogram = ", ".join(f"{d}:{v}" for d, v in stats.degree_histogram.items())
            self._emit(
                {'graph': graph_id, 'stats': FlowStatsSerializer(stats).data},
                f"{graph_id}: n={stats.n} m={stats.m} r={stats.r} delta={stats.delta} "
                f"edge connectivity={stats.edge_connectivity} degrees {{{histogram}}}",
            )

    def handle_cutsets(self, options):
        for graph_id, g in self._items(options):
            report = minimal_three_cutsets(g)
            lines = [f"{graph_id}: {len(report.cutsets)} minimal 3-cutsets, {len(report.proper)} proper"]
            lines += [f"  {list(c.edges)} {'proper' if c.proper else 'vertex'}" for c in report.cutsets]
            self._emit({'graph': graph_id, 'cutsets': CutsetReportSerializer(report).data}, "\n".join(lines))

    def handle_reduce(self, options):
        for graph_id, g in self._items(options):
            reduced = series_reduce(g)
            self._emit({'graph': graph_id, 'reduced': GraphSerializer(reduced).data}, f"{graph_id}: {reduced}")

    def handle_dual(self, options):
        for graph_id, g in self._items(options):
            embedding = planarity_embed(g)
            if not isinstance(embedding, Embedding):
                raise CommandError(f"{graph_id} is not planar ({embedding.kind} on edges {list(embedding.witness_edges)})")
            result = dual(embedding)
            if options['simple']:
                result = result.simple()
            self._emit({'graph': graph_id, 'dual': GraphSerializer(result).data}, f"{graph_id}: {result}")

    def handle_decompose(self, options):
        engine = self._engine()
        for graph_id, g in self._items(options):
            tree = decomposition_tree(g, engine)
            leaves = ", ".join(f"{factored_form(leaf.polynomial)} (m={leaf.graph.m})" for leaf in tree.leaves)
            self._emit(
                {'graph': graph_id, 'tree': DecompositionNodeSerializer(tree).data},
                f"{graph_id}: {factored_form(tree.polynomial)}\n  leaves: {leaves}",
            )

    def handle_check(self, options):
        engine = self._engine()
        for graph_id, g in self._items(options):
            report = check_graph(g, graph_id, engine=engine)
            self._emit(TheoremReportSerializer(report).data, self._describe(report),
                       self.style.SUCCESS if report.consistent else None)

    def handle_verify(self, options):
        items = self._items(options)
        if options['reduced']:
            items = items + list(corpus.reduced(items))

        def on_report(report):
            if self.json or options['reports'] or report.consistent is False:
                self._emit(TheoremReportSerializer(report).data, self._describe(report))

        summary = verify_corpus(
            items,
            parallel=options.get('parallel'),
            decompose=not options['no_decompose'],
            memo_cap=options.get('memo_cap'),
            on_report=on_report,
        )
        data = CorpusSummarySerializer(summary).data
        self._emit(
            {'summary': data},
            f"{summary.total} graphs: {summary.consistent} consistent, {summary.integral} integral-rooted, "
            f"{summary.dual_chordal} dual-chordal, {summary.skipped} skipped, {summary.degenerate} with a bridge, "
            f"{summary.diagnostics_failed} failed diagnostics",
            self.style.SUCCESS if summary.counterexample is None else self.style.ERROR,
        )
        if summary.counterexample is not None:
            raise CommandError(f"counterexample: {summary.counterexample.graph_id}", returncode=2)

    def handle_gen(self, options):
        if options.get('script'):
            try:
                with open(options['script'], encoding='utf-8') as handle:
                    generated = build_from_script(handle.read().splitlines())
            except OSError as exc:
                raise CommandError(f"cannot read {options['script']}: {exc.strerror}")
        elif options.get('family') and options.get('n') is not None:
            generated = gen_chordal_planar(GeneratorMode(options['family']), options['n'], options.get('seed'))
        else:
            raise CommandError("gen needs --family with --n, or --script")

        if options['dual']:
            result = dual(generated.embedding)
            self._emit({'dual': GraphSerializer(result).data, 'script': list(generated.script)}, str(result))
        else:
            self._emit(GeneratedGraphSerializer(generated).data,
                       "\n".join([str(generated.graph)] + list(generated.script)))

    def _describe(self, report) -> str:
        if report.degenerate:
            return f"{report.graph_id}: has a bridge, flow polynomial is zero"
        if report.skipped:
            return f"{report.graph_id}: skipped ({report.skipped})"
        verdict = 'consistent' if report.consistent else 'COUNTEREXAMPLE'
        return (
            f"{report.graph_id}: {report.factored}\n"
            f"  integral roots: {report.roots_integral}, real roots: {report.roots_real}, "
            f"dual of planar chordal: {report.dual_of_planar_chordal} -> {verdict}"
        )
