import numpy as np
from numpy.polynomial import Polynomial
from rest_framework import serializers

from fickjacobs.apps.curves.builtins import BUILTIN_CURVES
from fickjacobs.apps.curves.types import CurveSpec
from fickjacobs.apps.sections.builtins import BUILTIN_SECTIONS
from fickjacobs.apps.sections.types import ChannelSpec, SectionMap, TwistOffset
from fickjacobs.core.exceptions import ChannelError

CURVE_PARAMETERS = {"line": (), "circle": ("radius",), "helix": ("a", "b")}
SECTION_PARAMETERS = {"ellipse": ("r1", "r2"), "rectangle": ("d1", "d2"), "cardioid": ("r",)}


class StrictSerializer(serializers.Serializer):
    """Serializer that rejects keys it does not declare."""

    def to_internal_value(self, data):
        if isinstance(data, dict):
            unknown = sorted(set(data) - set(self.fields))
            if unknown:
                raise serializers.ValidationError({key: ["Unknown field."] for key in unknown}, code="unknown")
        return super().to_internal_value(data)


class OffsetField(serializers.Field):
    """A number or ``{"poly": [c0, c1, ...]}``, read as a polynomial in u."""

    default_error_messages = {
        "invalid": "Expected a number or an object {'poly': [c0, c1, ...]}.",
    }

    def to_internal_value(self, data) -> Polynomial:
        if isinstance(data, bool):
            self.fail("invalid")
        if isinstance(data, (int, float)):
            return Polynomial([float(data)])
        if isinstance(data, dict) and set(data) == {"poly"} and isinstance(data["poly"], list) and data["poly"]:
            if all(isinstance(value, (int, float)) and not isinstance(value, bool) for value in data["poly"]):
                return Polynomial([float(value) for value in data["poly"]])
        self.fail("invalid")

    def to_representation(self, value: Polynomial):
        coefficients = [float(c) for c in value.coef]
        return coefficients[0] if len(coefficients) == 1 else {"poly": coefficients}


class CurveSerializer(StrictSerializer):
    kind = serializers.ChoiceField(choices=sorted(CURVE_PARAMETERS))
    a = serializers.FloatField(required=False)
    b = serializers.FloatField(required=False)
    radius = serializers.FloatField(required=False)
    length = serializers.FloatField(required=False)
    start = serializers.FloatField(default=0.0)
    fallback_normal = serializers.ListField(
        child=serializers.FloatField(), min_length=3, max_length=3, required=False, allow_null=True
    )

    def validate(self, attrs):
        kind = attrs["kind"]
        missing = [name for name in CURVE_PARAMETERS[kind] if name not in attrs]
        if missing:
            raise serializers.ValidationError({name: [f"Required for a {kind}."] for name in missing})
        extra = [name for name in ("a", "b", "radius") if name in attrs and name not in CURVE_PARAMETERS[kind]]
        if extra:
            raise serializers.ValidationError({name: [f"Not a {kind} parameter."] for name in extra})
        return attrs

    def create(self, validated_data) -> CurveSpec:
        kind = validated_data["kind"]
        params = {name: validated_data[name] for name in CURVE_PARAMETERS[kind]}
        params["start"] = validated_data.get("start", 0.0)
        if "length" in validated_data:
            params["length"] = validated_data["length"]
        if kind == "line" and "fallback_normal" in validated_data:
            params["fallback_normal"] = validated_data["fallback_normal"]
        if kind == "helix":
            params["fallback_normal"] = validated_data.get("fallback_normal")
        return BUILTIN_CURVES[kind](**params)


class SectionSerializer(StrictSerializer):
    kind = serializers.ChoiceField(choices=sorted(SECTION_PARAMETERS))
    r1 = serializers.FloatField(required=False)
    r2 = serializers.FloatField(required=False)
    d1 = serializers.FloatField(required=False)
    d2 = serializers.FloatField(required=False)
    r = serializers.FloatField(required=False)
    auto_center = serializers.BooleanField(default=False)

    def validate(self, attrs):
        kind = attrs["kind"]
        expected = SECTION_PARAMETERS[kind]
        errors = {name: [f"Required for a {kind}."] for name in expected if name not in attrs}
        errors.update(
            {
                name: [f"Not a {kind} parameter."]
                for name in ("r1", "r2", "d1", "d2", "r")
                if name in attrs and name not in expected
            }
        )
        if errors:
            raise serializers.ValidationError(errors)
        return attrs

    def create(self, validated_data) -> SectionMap:
        kind = validated_data["kind"]
        return BUILTIN_SECTIONS[kind](*(validated_data[name] for name in SECTION_PARAMETERS[kind]))


class TwistSerializer(StrictSerializer):
    omega = serializers.FloatField(default=0.0)
    p = OffsetField(default=0.0)
    q = OffsetField(default=0.0)

    def to_internal_value(self, data):
        attrs = super().to_internal_value(data)
        for name in ("p", "q"):
            if not isinstance(attrs[name], Polynomial):
                attrs[name] = Polynomial([float(attrs[name])])
        return attrs


class GridSerializer(StrictSerializer):
    u_min = serializers.FloatField()
    u_max = serializers.FloatField()
    n = serializers.IntegerField(min_value=1)

    def validate(self, attrs):
        if attrs["n"] > 1 and not attrs["u_min"] < attrs["u_max"]:
            raise serializers.ValidationError({"u_max": ["Must exceed u_min."]})
        return attrs


class SolverSerializer(StrictSerializer):
    n_cells = serializers.IntegerField(min_value=4, default=256)
    dt = serializers.FloatField(default=1e-3)
    theta = serializers.FloatField(min_value=0.0, max_value=1.0, default=1.0)
    steps = serializers.IntegerField(min_value=0, default=1000)
    every = serializers.IntegerField(min_value=1, default=100)
    initial = serializers.CharField(default="equilibrium")
    bc_left = serializers.FloatField(allow_null=True, default=None)
    bc_right = serializers.FloatField(allow_null=True, default=None)
    method = serializers.CharField(default="quadrature")


class WalkSerializer(StrictSerializer):
    n_particles = serializers.IntegerField(min_value=1, default=1000)
    dt = serializers.FloatField(default=1e-4)
    t_final = serializers.FloatField(default=0.1)
    batches = serializers.IntegerField(min_value=1, required=False)
    record_every = serializers.IntegerField(min_value=1, default=10)
    start_u = serializers.FloatField(allow_null=True, default=None)


class ChannelConfigSerializer(StrictSerializer):
    curve = CurveSerializer()
    section = SectionSerializer()
    twist = TwistSerializer(required=False)
    bulk_D = serializers.FloatField(default=1.0)
    grid = GridSerializer(required=False)
    solver = SolverSerializer(required=False)
    walk = WalkSerializer(required=False)

    def validate_bulk_D(self, value):
        if not value > 0:
            raise serializers.ValidationError("bulk_D must be positive.")
        return value

    def create(self, validated_data) -> dict:
        """Build the channel; geometric errors from the builders surface as field errors."""
        try:
            curve = CurveSerializer().create(validated_data["curve"])
        except ChannelError as exc:
            raise serializers.ValidationError({"curve": [exc.message]})
        try:
            section = SectionSerializer().create(validated_data["section"])
        except ChannelError as exc:
            raise serializers.ValidationError({"section": [exc.message]})

        twist = validated_data.get("twist") or {"omega": 0.0, "p": Polynomial([0.0]), "q": Polynomial([0.0])}
        channel = ChannelSpec(
            curve=curve,
            section=section,
            transport=TwistOffset(omega=twist["omega"], p=twist["p"], q=twist["q"]),
            bulk_D=validated_data["bulk_D"],
        )
        grid = validated_data.get("grid")
        return {
            "channel": channel,
            "grid": None if grid is None else np.linspace(grid["u_min"], grid["u_max"], grid["n"]),
            "auto_center": validated_data["section"].get("auto_center", False),
            "solver": dict(validated_data.get("solver") or SolverSerializer().to_internal_value({})),
            "walk": dict(validated_data.get("walk") or WalkSerializer().to_internal_value({})),
        }
