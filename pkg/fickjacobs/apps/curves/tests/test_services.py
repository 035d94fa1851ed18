import numpy as np
import pytest
from django.test import SimpleTestCase

from fickjacobs.apps.curves.builtins import circle, helix
from fickjacobs.apps.curves.services import focal_distance, frame_at, frames, reparametrize_arclength, speed
from fickjacobs.apps.curves.tests.factory import CircleFactory, HelixFactory, LineFactory
from fickjacobs.apps.curves.types import CurveSpec
from fickjacobs.core.exceptions import DegenerateCurve, InfiniteFocalDistance, InvalidParameter, UndefinedNormal

A, B = 0.25, 1 / 6
C = np.hypot(A, B)


def raw_helix() -> CurveSpec:
    """The helix in its angle parameter, without analytic derivatives."""
    return CurveSpec(
        map=lambda t: np.stack(np.broadcast_arrays(A * np.cos(t), A * np.sin(t), B * np.asarray(t)), axis=-1),
        domain=(0.0, 2 * np.pi),
        name="helix",
    )


def numerical_speed(curve: CurveSpec, u: np.ndarray, h: float = 1e-5) -> np.ndarray:
    return np.linalg.norm(curve.position(u + h) - curve.position(u - h), axis=-1) / (2 * h)


class HelixFrameTest(SimpleTestCase):
    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        cls.curve = HelixFactory()
        cls.u = np.linspace(0.0, cls.curve.length, 41)
        cls.frame = frames(cls.curve, cls.u)

    def test_curvature_and_torsion(self):
        np.testing.assert_allclose(self.frame.kappa, A / C**2, rtol=1e-12)
        np.testing.assert_allclose(self.frame.tau, B / C**2, rtol=1e-12)
        self.assertAlmostEqual(float(self.frame.kappa[0]), 2.76923, places=5)
        self.assertAlmostEqual(float(self.frame.tau[0]), 1.84615, places=5)

    def test_frame_is_orthonormal(self):
        for first, second in [("T", "N"), ("N", "B"), ("T", "B")]:
            dots = np.einsum("ij,ij->i", getattr(self.frame, first), getattr(self.frame, second))
            np.testing.assert_allclose(dots, 0.0, atol=1e-10)
        for name in ("T", "N", "B"):
            np.testing.assert_allclose(np.linalg.norm(getattr(self.frame, name), axis=-1), 1.0, atol=1e-10)
        np.testing.assert_allclose(np.cross(self.frame.T, self.frame.N), self.frame.B, atol=1e-10)

    def test_normal_points_at_the_axis(self):
        t = self.u / C
        expected = np.stack([-np.cos(t), -np.sin(t), np.zeros_like(t)], axis=-1)
        np.testing.assert_allclose(self.frame.N, expected, atol=1e-12)

    def test_frenet_serret_relations(self):
        h = 1e-4
        ahead, behind = frames(self.curve, self.u + h), frames(self.curve, self.u - h)
        kappa, tau = self.frame.kappa[:, None], self.frame.tau[:, None]
        dT = (ahead.T - behind.T) / (2 * h)
        dN = (ahead.N - behind.N) / (2 * h)
        dB = (ahead.B - behind.B) / (2 * h)
        np.testing.assert_allclose(dT, kappa * self.frame.N, atol=1e-6)
        np.testing.assert_allclose(dN, -kappa * self.frame.T + tau * self.frame.B, atol=1e-6)
        np.testing.assert_allclose(dB, -tau * self.frame.N, atol=1e-6)


class ReparametrizeTest(SimpleTestCase):
    def test_helix_length_and_unit_speed(self):
        curve = reparametrize_arclength(raw_helix())
        self.assertTrue(curve.is_arclength)
        self.assertAlmostEqual(curve.length, 2 * np.pi * C, delta=1e-10 * curve.length)
        u = np.linspace(1e-3, curve.length - 1e-3, 1000)
        np.testing.assert_allclose(numerical_speed(curve, u), 1.0, atol=1e-8)

    def test_matches_the_builtin_arc_length_helix(self):
        curve = reparametrize_arclength(raw_helix())
        u = np.linspace(0.0, curve.length, 33)
        np.testing.assert_allclose(curve.position(u), HelixFactory().position(u), atol=1e-10)

    def test_frames_delegate_to_the_base_curve(self):
        frame = frames(reparametrize_arclength(raw_helix()), np.linspace(0.1, 1.5, 5))
        np.testing.assert_allclose(frame.kappa, A / C**2, rtol=1e-8)
        np.testing.assert_allclose(frame.tau, B / C**2, rtol=1e-6)

    def test_non_uniform_speed(self):
        ellipse = CurveSpec(
            map=lambda t: np.stack(np.broadcast_arrays(2 * np.cos(t), np.sin(t), 0 * np.asarray(t)), axis=-1),
            domain=(0.0, np.pi),
            fallback_normal=(0.0, 0.0, 1.0),
        )
        curve = reparametrize_arclength(ellipse)
        # half the perimeter of the ellipse with semi-axes 2 and 1
        self.assertAlmostEqual(curve.length, 9.688448220547675 / 2, delta=1e-9)
        u = np.linspace(0.05, curve.length - 0.05, 50)
        np.testing.assert_allclose(numerical_speed(curve, u), 1.0, atol=1e-7)

    def test_arc_length_curves_are_returned_unchanged(self):
        curve = HelixFactory()
        self.assertIs(reparametrize_arclength(curve), curve)

    def test_vanishing_speed(self):
        still = CurveSpec(map=lambda t: np.zeros(np.shape(t) + (3,)), domain=(0.0, 1.0))
        with self.assertRaises(DegenerateCurve):
            reparametrize_arclength(still)


class StraightCurveTest(SimpleTestCase):
    def test_fallback_normal(self):
        frame = frame_at(LineFactory(fallback_normal=(0.0, 1.0, 1.0)), 0.5)
        self.assertEqual(frame.kappa, 0.0)
        np.testing.assert_allclose(frame.N, [0.0, 1 / np.sqrt(2), 1 / np.sqrt(2)], atol=1e-15)
        np.testing.assert_allclose(frame.B, np.cross(frame.T, frame.N), atol=1e-15)

    def test_without_fallback_normal(self):
        with self.assertRaises(UndefinedNormal):
            frames(LineFactory(fallback_normal=None), np.linspace(0.0, 1.0, 3))

    def test_fallback_parallel_to_tangent(self):
        with self.assertRaises(UndefinedNormal):
            frame_at(LineFactory(fallback_normal=(1.0, 0.0, 0.0)), 0.5)

    def test_focal_distance_is_infinite(self):
        with self.assertRaises(InfiniteFocalDistance):
            focal_distance(frame_at(LineFactory(), 0.5), 0.1)


def test_focal_distance_on_a_circle():
    frame = frame_at(CircleFactory(radius=0.25), 0.3)
    assert frame.kappa == pytest.approx(4.0, rel=1e-12)
    assert focal_distance(frame, 0.1) == pytest.approx(0.15, rel=1e-12)


def test_zero_pitch_helix_is_the_circle():
    u = np.linspace(0.0, 2 * np.pi * 0.25, 101)
    np.testing.assert_allclose(helix(0.25, 0.0).position(u), circle(0.25).position(u), atol=1e-10)
    assert circle(0.25).periodic
    assert not HelixFactory().periodic


def test_builtin_speed_is_one():
    curve = HelixFactory(length=3.0, start=-1.0)
    np.testing.assert_allclose(speed(curve, np.linspace(-1.0, 2.0, 11)), 1.0, rtol=1e-14)


@pytest.mark.parametrize(
    "builder, kwargs",
    [
        (helix, {"a": 0.0, "b": 0.1}),
        (helix, {"a": 0.25, "b": -0.1}),
        (helix, {"a": 0.25, "b": 0.1, "length": 0.0}),
        (circle, {"radius": -1.0}),
    ],
)
def test_invalid_builtin_parameters(builder, kwargs):
    with pytest.raises(InvalidParameter):
        builder(**kwargs)


def test_domain_must_be_increasing():
    with pytest.raises(InvalidParameter):
        CurveSpec(map=lambda t: t, domain=(1.0, 0.0))


class DeclaredArcLengthTest(SimpleTestCase):
    def test_raw_helix_is_not_arc_length(self):
        with self.assertRaises(InvalidParameter) as raised:
            CurveSpec(map=raw_helix().map, domain=(0.0, 2 * np.pi), is_arclength=True)
        self.assertAlmostEqual(raised.exception.details["max_speed_error"], 1.0 - C, delta=1e-9)

    def test_wrong_analytic_derivative(self):
        def doubled(s):
            return 2.0 * np.broadcast_to([1.0, 0.0, 0.0], np.shape(s) + (3,))

        with self.assertRaises(InvalidParameter):
            CurveSpec(
                map=lambda s: 2.0 * np.asarray(s)[..., None] * np.array([1.0, 0.0, 0.0]),
                domain=(0.0, 1.0),
                is_arclength=True,
                derivatives=(doubled, doubled, doubled),
            )

    def test_unit_speed_map_without_derivatives(self):
        curve = CurveSpec(map=HelixFactory().map, domain=(0.0, 1.0), is_arclength=True)
        self.assertTrue(curve.is_arclength)

    def test_builtins_and_reparametrized_curves_pass(self):
        for curve in (LineFactory(length=3.0), CircleFactory(), HelixFactory(), reparametrize_arclength(raw_helix())):
            with self.subTest(name=curve.name):
                self.assertTrue(curve.is_arclength)
