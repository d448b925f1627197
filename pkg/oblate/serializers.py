import math

from rest_framework import serializers

from .core_types import PhysicalInputs


class StrictSerializer(serializers.Serializer):
    """Serializer that rejects keys it does not declare"""

    def validate(self, attrs):
        unknown = sorted(set(self.initial_data) - set(self.fields))
        if unknown:
            raise serializers.ValidationError({key: 'unknown key' for key in unknown})
        return attrs


class PhysicalInputsSerializer(StrictSerializer):
    """
    System config file contents

    Masses in kg, lengths in km, spin period in hours.
    """

    m1_kg = serializers.FloatField()
    m2_kg = serializers.FloatField()
    m3_kg = serializers.FloatField()
    d12_km = serializers.FloatField()
    radius_km = serializers.FloatField()
    c20 = serializers.FloatField()
    spin_hours = serializers.FloatField(required=False)

    def validate(self, attrs):
        attrs = super().validate(attrs)
        for key, value in attrs.items():
            if not math.isfinite(value):
                raise serializers.ValidationError({key: 'must be finite'})
        return attrs

    def to_physical_inputs(self) -> PhysicalInputs:
        data = self.validated_data
        return PhysicalInputs(
            mass_primary=data['m1_kg'],
            mass_secondary=data['m2_kg'],
            mass_tertiary=data['m3_kg'],
            distance_primary_secondary=data['d12_km'],
            equivalent_radius_tertiary=data['radius_km'],
            c20=data['c20'],
            spin_period_tertiary=data.get('spin_hours'),
        ).validate()


class SweepRangeSerializer(StrictSerializer):
    start = serializers.FloatField()
    stop = serializers.FloatField()
    count = serializers.IntegerField(min_value=2)
    spacing = serializers.ChoiceField(choices=['linear', 'log'], default='linear')

    def validate(self, attrs):
        attrs = super().validate(attrs)
        if attrs['start'] == attrs['stop']:
            raise serializers.ValidationError({'stop': 'must differ from start'})
        if attrs['spacing'] == 'log' and not attrs['start'] * attrs['stop'] > 0:
            raise serializers.ValidationError(
                {'spacing': 'log spacing needs non-zero endpoints of the same sign'}
            )
        return attrs


# Output rows

class HarmonicRowSerializer(serializers.Serializer):
    n = serializers.IntegerField()
    m = serializers.IntegerField()
    C_nm = serializers.FloatField()


class VertexRowSerializer(serializers.Serializer):
    body = serializers.IntegerField()
    x = serializers.FloatField()
    y = serializers.FloatField()


class EquilibriumRowSerializer(serializers.Serializer):
    axis = serializers.CharField()
    r_star = serializers.FloatField()
    x = serializers.FloatField()
    y = serializers.FloatField()
    z = serializers.FloatField()
    r_km = serializers.FloatField()
    residual = serializers.FloatField()


class EquilibriumReportSerializer(serializers.Serializer):
    """Completed stability report flattened to one row"""

    axis = serializers.CharField()
    r_star = serializers.FloatField()
    x = serializers.SerializerMethodField()
    y = serializers.SerializerMethodField()
    z = serializers.SerializerMethodField()
    Oxx = serializers.SerializerMethodField()
    Oyy = serializers.SerializerMethodField()
    Ozz = serializers.SerializerMethodField()
    A = serializers.SerializerMethodField()
    B = serializers.SerializerMethodField()
    D = serializers.SerializerMethodField()

    def get_x(self, report):
        return float(report.location[0])

    def get_y(self, report):
        return float(report.location[1])

    def get_z(self, report):
        return float(report.location[2])

    def get_Oxx(self, report):
        return report.hessian_diag[0]

    def get_Oyy(self, report):
        return report.hessian_diag[1]

    def get_Ozz(self, report):
        return report.hessian_diag[2]

    def get_A(self, report):
        return report.quartic_coeffs[0]

    def get_B(self, report):
        return report.quartic_coeffs[1]

    def get_D(self, report):
        return report.quartic_coeffs[2]

    def to_representation(self, report):
        row = super().to_representation(report)
        for index, value in enumerate(report.eigenvalues, start=1):
            row[f're{index}'] = float(value.real)
        for index, value in enumerate(report.eigenvalues, start=1):
            row[f'im{index}'] = float(value.imag)
        row['class'] = str(report.stability_class)
        return row

    @classmethod
    def columns(cls):
        return (list(cls().fields) + [f're{i}' for i in range(1, 7)]
                + [f'im{i}' for i in range(1, 7)] + ['class'])


class ForcesRowSerializer(serializers.Serializer):
    r_km = serializers.FloatField()
    log10_monopole = serializers.FloatField()
    log10_sun = serializers.FloatField()
    log10_jupiter = serializers.FloatField()
    log10_j2 = serializers.FloatField()
    log10_sun_tidal = serializers.FloatField(required=False)
    log10_jupiter_tidal = serializers.FloatField(required=False)
    moonlet = serializers.BooleanField()


class SweepZRowSerializer(serializers.Serializer):
    c20 = serializers.FloatField()
    c = serializers.FloatField()
    r_z_hill = serializers.FloatField()
    r_z_km = serializers.FloatField()
    r_hat_z_km = serializers.FloatField()


class KreinRowSerializer(serializers.Serializer):
    r_z = serializers.FloatField()
    c = serializers.FloatField()
    a = serializers.FloatField()
    abs_b = serializers.SerializerMethodField()
    imag_gap = serializers.FloatField()

    def get_abs_b(self, row):
        return abs(row.b)


class ClassificationRowSerializer(serializers.Serializer):
    mu = serializers.FloatField()
    r_star = serializers.FloatField()
    A = serializers.FloatField(source='a_coef')
    B = serializers.FloatField(source='b_coef')
    D = serializers.FloatField(source='d_coef')
    stability_class = serializers.CharField()
    pattern_holds = serializers.BooleanField()


class TrajectoryRowSerializer(serializers.Serializer):
    t = serializers.FloatField()
    x = serializers.FloatField()
    y = serializers.FloatField()
    z = serializers.FloatField()
    vx = serializers.FloatField()
    vy = serializers.FloatField()
    vz = serializers.FloatField()
    H = serializers.FloatField()


class CanonicalTrajectoryRowSerializer(serializers.Serializer):
    t = serializers.FloatField()
    x = serializers.FloatField()
    y = serializers.FloatField()
    z = serializers.FloatField()
    px = serializers.FloatField()
    py = serializers.FloatField()
    pz = serializers.FloatField()
    H = serializers.FloatField()
