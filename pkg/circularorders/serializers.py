from fractions import Fraction

from rest_framework import serializers

from .models import KnownNegative, VerdictRecord
from .utils.graph import Edge, JsjTree, MalformedTreeError
from .utils.seifert import SeifertData

SCHEMA = "corda/1"


class KnownNegativeSerializer(serializers.ModelSerializer):
    class Meta:
        model = KnownNegative
        fields = "__all__"


class VerdictRecordSerializer(serializers.ModelSerializer):
    class Meta:
        model = VerdictRecord
        fields = "__all__"


class StrictSerializer(serializers.Serializer):
    """Rejects fields it does not declare instead of dropping them."""

    def to_internal_value(self, data):
        if isinstance(data, dict):
            unknown = sorted(set(data) - set(self.fields))
            if unknown:
                raise serializers.ValidationError(
                    {name: ["Unknown field."] for name in unknown}
                )
        return super().to_internal_value(data)


class RationalField(serializers.Field):
    """An exact rational written "a/b" (or an integer); never a float."""

    def to_internal_value(self, data):
        if isinstance(data, bool) or isinstance(data, float):
            raise serializers.ValidationError("Rationals are written as 'a/b' strings.")
        try:
            return Fraction(str(data))
        except (ValueError, ZeroDivisionError) as exc:
            raise serializers.ValidationError(f"Not a rational: {data!r}.") from exc

    def to_representation(self, value):
        return str(value)


def integer_list(length=None, **kwargs):
    return serializers.ListField(
        child=serializers.IntegerField(), min_length=length, max_length=length, **kwargs
    )


class QueryDocumentSerializer(StrictSerializer):
    schema = serializers.ChoiceField(choices=[SCHEMA])
    query = serializers.DictField()


class QuerySerializer(StrictSerializer):
    subcommand = serializers.CharField()
    params = serializers.DictField(required=False, default=dict)


# Parameters, one serializer per subcommand


class ConstructionSerializer(StrictSerializer):
    construction = serializers.CharField()
    modulus = serializers.IntegerField(min_value=1, required=False)
    k = serializers.IntegerField(required=False)
    p = serializers.IntegerField(min_value=1, required=False)
    z = serializers.IntegerField(min_value=1, required=False)
    r = RationalField(required=False)
    group = serializers.CharField(required=False)
    factors = integer_list(required=False)
    bound = serializers.IntegerField(min_value=0, required=False)


class RotSerializer(ConstructionSerializer):
    g = integer_list(required=False)
    nMax = serializers.IntegerField(min_value=1, required=False, source="n_max")


class FiniteCoSerializer(StrictSerializer):
    group = serializers.CharField()


class EulerOrderSerializer(StrictSerializer):
    group = serializers.CharField(required=False)
    modulus = serializers.IntegerField(min_value=1, required=False)
    k = serializers.IntegerField(required=False)

    def validate(self, attrs):
        if ("group" in attrs) == ("modulus" in attrs):
            raise serializers.ValidationError("Give either a catalog group or a modulus.")
        return attrs


class SeifertDataSerializer(StrictSerializer):
    orientable = serializers.BooleanField(default=True, source="total_orientable")
    baseOrientable = serializers.BooleanField(default=True, source="base_orientable")
    genus = serializers.IntegerField(min_value=0, default=0)
    boundaries = serializers.IntegerField(min_value=0, default=0)
    pairs = serializers.ListField(child=integer_list(2), default=list)
    b = serializers.IntegerField(default=0)

    def validate(self, attrs):
        try:
            return SeifertData(**{**attrs, "pairs": tuple(map(tuple, attrs["pairs"]))})
        except ValueError as exc:
            raise serializers.ValidationError(str(exc)) from exc


class SeifertQuerySerializer(SeifertDataSerializer):
    leftOrderable = serializers.BooleanField(required=False, allow_null=True, default=None)

    def validate(self, attrs):
        left_orderable = attrs.pop("leftOrderable", None)
        return {"seifert": super().validate(attrs), "left_orderable": left_orderable}


class EdgeSerializer(StrictSerializer):
    a = serializers.IntegerField(min_value=0)
    aBdry = serializers.IntegerField(min_value=0, source="a_boundary")
    b = serializers.IntegerField(min_value=0)
    bBdry = serializers.IntegerField(min_value=0, source="b_boundary")
    matrix = serializers.ListField(child=integer_list(2), min_length=2, max_length=2)


class JsjTreeSerializer(StrictSerializer):
    nodes = SeifertDataSerializer(many=True)
    edges = EdgeSerializer(many=True, default=list)

    def validate(self, attrs):
        try:
            edges = [Edge(**edge) for edge in attrs["edges"]]
            return JsjTree(attrs["nodes"], edges)
        except MalformedTreeError as exc:
            raise serializers.ValidationError(str(exc)) from exc


class GraphQuerySerializer(JsjTreeSerializer):
    assumeInfinite = integer_list(required=False, default=list, source="assume_infinite")

    def validate(self, attrs):
        assume = attrs.pop("assume_infinite", [])
        return {"tree": super().validate(attrs), "assume_infinite": assume}


class SlopeDetectSerializer(StrictSerializer):
    alpha = integer_list(2)
    peripheralWitness = serializers.ChoiceField(
        choices=["first", "second"], required=False, allow_null=True, default=None,
        source="peripheral_witness",
    )
    quotientWitness = serializers.BooleanField(default=False, source="quotient_witness")
    rotations = serializers.ListField(
        child=RationalField(), min_length=2, max_length=2, required=False, allow_null=True,
        default=None,
    )
    target = RationalField(required=False, allow_null=True, default=None)


class TwoPieceQuerySerializer(JsjTreeSerializer):
    slope = SlopeDetectSerializer(required=False, allow_null=True, default=None)

    def validate(self, attrs):
        slope = attrs.pop("slope", None)
        return {"tree": super().validate(attrs), "slope": slope}


class BranchedCoverSerializer(StrictSerializer):
    torus = integer_list(2, required=False)
    twoBridge = integer_list(2, required=False, source="two_bridge")
    knot = serializers.CharField(required=False)
    n = serializers.IntegerField(min_value=2, required=False)
    range = integer_list(2, required=False)
    knownInfinite = integer_list(required=False, source="known_infinite")
    prime = serializers.BooleanField(default=True)

    def validate(self, attrs):
        given = [key for key in ("torus", "two_bridge", "knot") if key in attrs]
        if len(given) != 1:
            raise serializers.ValidationError(
                "Give exactly one knot: torus, twoBridge or knot."
            )
        if ("n" in attrs) == ("range" in attrs):
            raise serializers.ValidationError("Give either a degree n or a range.")
        if "known_infinite" in attrs and "n" not in attrs:
            raise serializers.ValidationError("knownInfinite needs a single degree n.")
        return attrs


class SurgeryWindowSerializer(StrictSerializer):
    p = serializers.IntegerField(min_value=1, required=False)
    q = serializers.IntegerField(required=False)
    c = RationalField()
    asserted = serializers.BooleanField(default=False)
    pRange = integer_list(2, required=False, source="p_range")
    qRange = integer_list(2, required=False, source="q_range")

    def validate(self, attrs):
        single = "p" in attrs and "q" in attrs
        table = "p_range" in attrs and "q_range" in attrs
        if single == table:
            raise serializers.ValidationError("Give either p and q or pRange and qRange.")
        return attrs


class FibonacciSerializer(StrictSerializer):
    k = serializers.IntegerField(min_value=1)
    m = serializers.IntegerField(min_value=1)


class TakahashiSerializer(StrictSerializer):
    pairs = serializers.ListField(child=integer_list(4), min_length=1)
    n = serializers.IntegerField(min_value=1)
    prime = serializers.BooleanField(default=False)
