"""
Django REST Framework serializers for the flowroots JSON-lines reports.

Polynomials are coefficient lists, lowest degree first; rationals are
strings such as "7/2"; flats and cutsets are sorted edge-id lists.
"""

from rest_framework import serializers
from rest_framework.renderers import JSONRenderer

from .planar import GeneratorMode
from .polynomial import factored_form


class IntPolyField(serializers.ReadOnlyField):
    """IntPoly as its coefficient list"""

    def to_representation(self, value):
        return value.to_list()


class FractionField(serializers.ReadOnlyField):
    def to_representation(self, value):
        return str(value)


class SortedListField(serializers.ReadOnlyField):
    """Any collection of ids, emitted as a sorted list"""

    def to_representation(self, value):
        return sorted(value)


class PolynomialSerializer(serializers.Serializer):
    """An IntPoly with its factored rendering"""

    coeffs = IntPolyField(source='*')
    degree = serializers.IntegerField()
    expanded = serializers.SerializerMethodField()
    factored = serializers.SerializerMethodField()

    def get_expanded(self, obj):
        return str(obj)

    def get_factored(self, obj):
        return factored_form(obj)


class GraphSerializer(serializers.Serializer):
    n = serializers.IntegerField()
    m = serializers.IntegerField()
    edges = serializers.SerializerMethodField()

    def get_edges(self, obj):
        return [[e.u, e.v, e.eid] for e in obj.edges]


class RootReportSerializer(serializers.Serializer):
    polynomial = PolynomialSerializer()
    integer_roots = serializers.SerializerMethodField()
    nonintegral_part = IntPolyField()
    all_roots_integral = serializers.BooleanField()
    all_roots_real = serializers.BooleanField()
    lambda_bar = FractionField(allow_null=True)
    delta_split = serializers.SerializerMethodField()

    def get_integer_roots(self, obj):
        return [[root, mult] for root, mult in obj.integer_roots]

    def get_delta_split(self, obj):
        if obj.delta_split is None:
            return None
        return obj.delta_split._asdict()


class BoundEntrySerializer(serializers.Serializer):
    m = serializers.IntegerField()
    coefficient = serializers.IntegerField()
    bound = FractionField()
    slack = FractionField()
    equality = serializers.BooleanField()


class BoundReportSerializer(serializers.Serializer):
    mode = serializers.CharField(source='mode.value')
    degree = serializers.IntegerField()
    lambda_bar = FractionField()
    entries = BoundEntrySerializer(many=True)
    extremal = IntPolyField(allow_null=True)
    equality_forced = serializers.BooleanField()
    holds = serializers.BooleanField()


class FlowStatsSerializer(serializers.Serializer):
    n = serializers.IntegerField()
    m = serializers.IntegerField()
    r = serializers.IntegerField()
    delta = serializers.IntegerField()
    degree_histogram = serializers.DictField(child=serializers.IntegerField())
    edge_connectivity = serializers.IntegerField(allow_null=True)
    three_edge_connected = serializers.BooleanField()
    vertex_identity_holds = serializers.BooleanField()
    edge_identity_holds = serializers.BooleanField()


class CutsetSerializer(serializers.Serializer):
    edges = SortedListField()
    proper = serializers.BooleanField()
    side_a = SortedListField()
    side_b = SortedListField()


class CutsetReportSerializer(serializers.Serializer):
    total = serializers.SerializerMethodField()
    proper = serializers.SerializerMethodField()
    cutsets = CutsetSerializer(many=True)

    def get_total(self, obj):
        return len(obj.cutsets)

    def get_proper(self, obj):
        return len(obj.proper)


class ProductFormulaSerializer(serializers.Serializer):
    cutset = SortedListField(source='cutset.edges')
    f_g = IntPolyField()
    f_g1 = IntPolyField()
    f_g2 = IntPolyField()
    holds = serializers.BooleanField()


class DecompositionNodeSerializer(serializers.Serializer):
    graph = GraphSerializer()
    polynomial = PolynomialSerializer()
    cutset = serializers.SerializerMethodField()
    children = serializers.SerializerMethodField()

    def get_cutset(self, obj):
        return sorted(obj.cutset.edges) if obj.cutset else None

    def get_children(self, obj):
        return DecompositionNodeSerializer(obj.children, many=True).data


class SupersolvabilitySerializer(serializers.Serializer):
    supersolvable = serializers.BooleanField()
    rank = serializers.IntegerField()
    chain = serializers.ListField(child=SortedListField())
    roots = serializers.ListField(child=serializers.IntegerField())


class EmbeddingSerializer(serializers.Serializer):
    """Rotation system as per-vertex lists of [edge id, side] darts"""

    rotation = serializers.SerializerMethodField()
    faces = serializers.IntegerField(source='face_count')

    def get_rotation(self, obj):
        return [[list(dart) for dart in darts] for darts in obj.rotation]


class StructuralReportSerializer(serializers.Serializer):
    dual_of_planar_chordal = serializers.BooleanField()
    planar = serializers.BooleanField()
    blocks = SupersolvabilitySerializer(many=True)
    certificate = GraphSerializer(allow_null=True)
    certificate_chordal = serializers.BooleanField(allow_null=True)
    kuratowski = serializers.CharField(source='kuratowski.kind', allow_null=True, default=None)
    embedding = EmbeddingSerializer(allow_null=True)


class LemmaCheckSerializer(serializers.Serializer):
    name = serializers.CharField()
    hypotheses = serializers.DictField(child=serializers.BooleanField())
    unmet = serializers.ListField(child=serializers.CharField())
    statistic = serializers.IntegerField()
    bound = serializers.IntegerField()
    slack = serializers.IntegerField()
    equality = serializers.BooleanField()
    forced_form = IntPolyField()
    matches_forced_form = serializers.BooleanField()
    holds = serializers.BooleanField()


class CircuitBoundReportSerializer(serializers.Serializer):
    rank = serializers.IntegerField()
    elements = serializers.IntegerField()
    delta = serializers.IntegerField()
    gamma = serializers.DictField(source='lines.gamma', child=serializers.IntegerField())
    chi_at_two = serializers.IntegerField()
    connected = serializers.BooleanField()
    checks = LemmaCheckSerializer(many=True)


class ProofTraceSerializer(serializers.Serializer):
    case = serializers.CharField()
    proper_cutsets = serializers.IntegerField()
    required = serializers.IntegerField()
    holds = serializers.BooleanField()
    detail = serializers.CharField()


class TheoremReportSerializer(serializers.Serializer):
    """One line of a check/verify run"""

    graph_id = serializers.CharField()
    n = serializers.IntegerField()
    m = serializers.IntegerField()
    r = serializers.IntegerField()
    delta = serializers.IntegerField()
    flow = PolynomialSerializer()
    roots = serializers.SerializerMethodField()
    structural = serializers.SerializerMethodField()
    lemmas = serializers.SerializerMethodField()
    skipped = serializers.CharField(allow_null=True)
    consistent = serializers.BooleanField(allow_null=True)

    def get_roots(self, obj):
        return {'integral': obj.roots_integral, 'real': obj.roots_real}

    def get_structural(self, obj):
        return {
            'bridgeless': obj.bridgeless,
            'edge_connectivity': obj.edge_connectivity,
            'planar': obj.planar,
            'dual_of_planar_chordal': obj.dual_of_planar_chordal,
            'supersolvable': obj.supersolvable,
            'certificate_chordal': obj.certificate_chordal,
            'chain_roots': list(obj.chain_roots) if obj.chain_roots is not None else None,
            'recognizer': StructuralReportSerializer(obj.structure).data if obj.structure else None,
        }

    def get_lemmas(self, obj):
        return {
            'three_cutsets': obj.three_cutsets,
            'proper_three_cutsets': obj.proper_three_cutsets,
            'three_circuit': CircuitBoundReportSerializer(obj.three_circuit).data if obj.three_circuit else None,
            'coefficient_bound': BoundReportSerializer(obj.coefficient_bound).data if obj.coefficient_bound else None,
            'product_formula': ProductFormulaSerializer(obj.product_formula).data if obj.product_formula else None,
            'proof_trace': ProofTraceSerializer(obj.proof_trace).data if obj.proof_trace else None,
            'cubic_real': obj.cubic_real,
            'small_excess_real': obj.small_excess_real,
            'holds': obj.diagnostics_hold,
        }


class CorpusSummarySerializer(serializers.Serializer):
    total = serializers.IntegerField()
    consistent = serializers.IntegerField()
    integral = serializers.IntegerField()
    real = serializers.IntegerField()
    dual_chordal = serializers.IntegerField()
    degenerate = serializers.IntegerField()
    skipped = serializers.IntegerField()
    diagnostics_failed = serializers.IntegerField()
    integral_graphs = serializers.ListField(child=serializers.CharField())
    counterexample = serializers.CharField(source='counterexample.graph_id', allow_null=True, default=None)


class GeneratedGraphSerializer(serializers.Serializer):
    graph = GraphSerializer()
    script = serializers.ListField(child=serializers.CharField())


class CliConfigSerializer(serializers.Serializer):
    """Validates the options shared by every subcommand"""

    output = serializers.ChoiceField(choices=['human', 'json'], default='human')
    format = serializers.ChoiceField(choices=['graph6', 'sparse6', 'edgelist'], required=False, allow_null=True)
    memo_cap = serializers.IntegerField(min_value=1, required=False, allow_null=True)
    parallel = serializers.IntegerField(min_value=1, max_value=256, required=False, allow_null=True)
    seed = serializers.IntegerField(min_value=0, required=False, allow_null=True)
    n = serializers.IntegerField(min_value=3, required=False, allow_null=True)
    family = serializers.ChoiceField(choices=[mode.value for mode in GeneratorMode], required=False, allow_null=True)
    atlas = serializers.IntegerField(min_value=0, max_value=7, required=False, allow_null=True)

    def validate(self, attrs):
        if attrs.get('family') and attrs.get('n') is None:
            raise serializers.ValidationError("--family needs --n")
        return attrs


def render_line(data) -> str:
    """Compact JSON for one report line"""
    return JSONRenderer().render(data).decode('utf-8')
