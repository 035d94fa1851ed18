import logging

import numpy as np
import pytest
from django.test import SimpleTestCase
from numpy.polynomial import Polynomial

from fickjacobs.apps.curves.tests.factory import CircleFactory, HelixFactory, LineFactory
from fickjacobs.apps.diffusion.closed_forms import deff_ellipse_closed
from fickjacobs.apps.diffusion.services import (
    area_and_volume_density,
    deff_focal,
    deff_profile,
    deff_quadrature,
    deff_second_order,
    deff_series,
    deff_value,
    volume,
)
from fickjacobs.apps.diffusion.types import (
    ClosedFormEllipse,
    ClosedFormRectangle,
    Focal,
    Quadrature,
    SecondOrder,
    Series,
    parse_method,
)
from fickjacobs.apps.sections.tests.factory import (
    CardioidFactory,
    ChannelSpecFactory,
    EllipseFactory,
    RectangleFactory,
    TwistOffsetFactory,
)
from fickjacobs.core.exceptions import ConfigError, FocalContact, InvalidParameter

R1, R2 = 1 / 6, 0.1
KAPPA = 36 / 13


class SeriesTest(SimpleTestCase):
    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        cls.channel = ChannelSpecFactory()

    def test_partial_sums_increase_towards_the_exact_value(self):
        for u in (0.0, 0.2, np.pi / 8):
            with self.subTest(u=u):
                second, fourth = deff_series(self.channel, u, 2), deff_series(self.channel, u, 4)
                exact = deff_ellipse_closed(self.channel, u)
                self.assertLess(second, fourth)
                self.assertLess(fourth, exact)
                self.assertLess(exact - fourth, 0.02 * exact)

    def test_zeroth_order_is_the_bulk_value_for_a_centered_section(self):
        self.assertAlmostEqual(deff_series(self.channel, 0.4, 0), 1.0, delta=1e-10)

    def test_second_order_matches_the_two_term_series(self):
        for u in (0.0, 0.3, 1.2):
            with self.subTest(u=u):
                self.assertAlmostEqual(
                    deff_second_order(self.channel, u), deff_series(self.channel, u, 2), delta=1e-10
                )

    def test_second_order_value(self):
        u = 0.3
        spread = (R1**2 * np.cos(4 * u) ** 2 + R2**2 * np.sin(4 * u) ** 2) / 4
        self.assertAlmostEqual(deff_second_order(self.channel, u), 1.0 + KAPPA**2 * spread, delta=1e-10)

    def test_offset_section(self):
        channel = ChannelSpecFactory(transport=TwistOffsetFactory(p=0.01))
        exact = deff_quadrature(channel, 0.5)
        self.assertAlmostEqual(deff_series(channel, 0.5, 8), exact, delta=1e-3 * exact)
        self.assertAlmostEqual(deff_second_order(channel, 0.5), deff_series(channel, 0.5, 2), delta=1e-10)

    def test_negative_order(self):
        with self.assertRaises(InvalidParameter):
            deff_series(self.channel, 0.0, -1)


def test_series_warns_near_the_convergence_radius(caplog):
    channel = ChannelSpecFactory(
        curve=CircleFactory(), section=EllipseFactory(r1=0.23, r2=0.1), transport=TwistOffsetFactory(omega=0.0)
    )
    with caplog.at_level(logging.WARNING, logger="fickjacobs.apps.diffusion.services"):
        deff_series(channel, 0.1, 4)
    assert "kappa*max|eta|" in caplog.text


class FocalFormTest(SimpleTestCase):
    def test_matches_quadrature_for_centered_sections(self):
        for section in (EllipseFactory(), RectangleFactory(), CardioidFactory()):
            channel = ChannelSpecFactory(section=section)
            with self.subTest(kind=section.kind):
                expected = deff_quadrature(channel, 0.35)
                self.assertAlmostEqual(deff_focal(channel, 0.35), expected, delta=1e-9 * expected)

    def test_rejects_offset_sections(self):
        channel = ChannelSpecFactory(transport=TwistOffsetFactory(p=0.01))
        with self.assertRaises(InvalidParameter):
            deff_focal(channel, 0.35)


def random_straight_channel(seed: int):
    rng = np.random.default_rng(seed)
    kind = ("ellipse", "rectangle", "cardioid")[seed % 3]
    if kind == "ellipse":
        section = EllipseFactory(r1=rng.uniform(0.02, 0.3), r2=rng.uniform(0.02, 0.3))
    elif kind == "rectangle":
        section = RectangleFactory(d1=rng.uniform(0.02, 0.5), d2=rng.uniform(0.02, 0.5))
    else:
        section = CardioidFactory(r=rng.uniform(0.01, 0.1))
    transport = TwistOffsetFactory(
        omega=rng.uniform(-10.0, 10.0),
        p=Polynomial(rng.uniform(-0.05, 0.05, size=2)),
        q=Polynomial(rng.uniform(-0.05, 0.05, size=2)),
    )
    line = LineFactory(length=rng.uniform(0.5, 5.0), start=rng.uniform(-1.0, 1.0))
    channel = ChannelSpecFactory(curve=line, section=section, transport=transport, bulk_D=rng.uniform(0.1, 5.0))
    u = float(rng.uniform(*line.domain))
    return kind, channel, u


@pytest.mark.parametrize("seed", range(10))
def test_straight_channels_keep_the_bulk_coefficient(seed):
    kind, channel, u = random_straight_channel(seed)
    methods = [Quadrature(), Series(order=4), SecondOrder(), Focal()]
    methods += {"ellipse": [ClosedFormEllipse()], "rectangle": [ClosedFormRectangle()]}.get(kind, [])
    for method in methods:
        assert abs(deff_value(channel, u, method) - channel.bulk_D) <= 1e-12, method.label


def test_quadrature_scales_with_bulk_diffusivity():
    single = deff_quadrature(ChannelSpecFactory(), 0.5)
    double = deff_quadrature(ChannelSpecFactory(bulk_D=2.0), 0.5)
    assert double == pytest.approx(2.0 * single, rel=1e-13)


def test_quadrature_reports_focal_contact():
    channel = ChannelSpecFactory(curve=CircleFactory(), section=EllipseFactory(r1=0.2, r2=0.3))
    deff_quadrature(channel, 0.0)
    with pytest.raises(FocalContact) as raised:
        deff_quadrature(channel, np.pi / 8)
    assert raised.value.u == pytest.approx(np.pi / 8)


class CardioidProfileTest(SimpleTestCase):
    """The cusp makes the two quarter-turn minima unequal."""

    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        cls.channel = ChannelSpecFactory(curve=CircleFactory(), section=CardioidFactory(r=1 / 20))

    def deff(self, u):
        return deff_quadrature(self.channel, u)

    def test_minima_are_at_the_quarter_turns(self):
        for u in (np.pi / 8, 3 * np.pi / 8):
            with self.subTest(u=u):
                self.assertLess(self.deff(u), self.deff(u - 0.03))
                self.assertLess(self.deff(u), self.deff(u + 0.03))

    def test_cusp_facing_the_center_gives_the_deeper_minimum(self):
        self.assertLess(self.deff(3 * np.pi / 8), self.deff(np.pi / 8))

    def test_profile_is_symmetric_about_each_minimum(self):
        self.assertAlmostEqual(self.deff(np.pi / 8 - 0.05), self.deff(np.pi / 8 + 0.05), delta=1e-9)

    def test_reversed_twist_moves_the_deeper_minimum(self):
        channel = ChannelSpecFactory(
            curve=CircleFactory(), section=CardioidFactory(r=1 / 20), transport=TwistOffsetFactory(omega=-4.0)
        )
        self.assertLess(deff_quadrature(channel, np.pi / 8), deff_quadrature(channel, 3 * np.pi / 8))
        self.assertAlmostEqual(deff_quadrature(channel, np.pi / 8), self.deff(3 * np.pi / 8), delta=1e-9)


class VolumeTest(SimpleTestCase):
    def test_centered_section(self):
        channel = ChannelSpecFactory()
        area, omega = area_and_volume_density(channel, 0.4)
        self.assertAlmostEqual(area, np.pi * R1 * R2, delta=1e-11)
        self.assertAlmostEqual(omega, area, delta=1e-11)
        self.assertAlmostEqual(volume(channel, 1.0), np.pi * R1 * R2, delta=1e-9)
        self.assertEqual(volume(channel, 0.0), 0.0)

    def test_offset_section_compresses_the_inner_side(self):
        channel = ChannelSpecFactory(transport=TwistOffsetFactory(p=0.02))
        expected = np.pi * R1 * R2 * (1.0 - KAPPA * 0.02) * 1.5
        self.assertAlmostEqual(volume(channel, 1.5), expected, delta=1e-8 * expected)

    def test_outside_the_curve(self):
        with self.assertRaises(ConfigError):
            volume(ChannelSpecFactory(curve=HelixFactory(length=1.0)), 1.5)


class DeffProfileTest(SimpleTestCase):
    @classmethod
    def setUpClass(cls):
        super().setUpClass()
        cls.channel = ChannelSpecFactory()
        cls.u_grid = np.linspace(0.0, np.pi / 2, 9)

    def test_threads_do_not_change_the_result(self):
        serial = deff_profile(self.channel, self.u_grid, Quadrature(), threads=1)
        pooled = deff_profile(self.channel, self.u_grid, Quadrature(), threads=3)
        np.testing.assert_array_equal(serial.deff, pooled.deff)
        np.testing.assert_array_equal(serial.omega_vol, pooled.omega_vol)
        np.testing.assert_array_equal(serial.u_grid, self.u_grid)

    def test_rows(self):
        profile = deff_profile(self.channel, self.u_grid[:3], Series(order=4))
        rows = list(profile.rows())
        self.assertEqual(len(rows), 3)
        self.assertEqual(rows[0]["method"], "series4")
        self.assertEqual(set(rows[0]), {"u", "deff", "deff_over_D", "omega_vol", "area", "method"})

    def test_ratio_to_bulk(self):
        channel = ChannelSpecFactory(bulk_D=3.0)
        profile = deff_profile(channel, self.u_grid, ClosedFormEllipse())
        np.testing.assert_allclose(profile.deff_over_D * 3.0, profile.deff, rtol=1e-15)

    def test_failing_point_carries_its_arc_length(self):
        channel = ChannelSpecFactory(curve=CircleFactory(), section=EllipseFactory(r1=0.2, r2=0.3))
        with self.assertRaises(FocalContact) as raised:
            deff_profile(channel, [0.0, 0.02, np.pi / 8], ClosedFormEllipse(), threads=2)
        self.assertAlmostEqual(raised.exception.u, np.pi / 8)

    def test_grid_checks(self):
        with self.assertRaises(InvalidParameter):
            deff_profile(self.channel, [0.2, 0.1], Quadrature())
        with self.assertRaises(ConfigError):
            deff_profile(ChannelSpecFactory(curve=HelixFactory(length=1.0)), [0.5, 2.0], Quadrature())


@pytest.mark.parametrize(
    "text, expected",
    [
        ("quadrature", Quadrature()),
        ("series", Series(order=2)),
        ("series:4", Series(order=4)),
        (" Series:6 ", Series(order=6)),
        ("second_order", SecondOrder()),
        ("second-order", SecondOrder()),
        ("ellipse", ClosedFormEllipse()),
        ("rectangle", ClosedFormRectangle()),
        ("focal", Focal()),
    ],
)
def test_parse_method(text, expected):
    assert parse_method(text) == expected


@pytest.mark.parametrize("text", ["series:four", "series:-1", "spline", ""])
def test_parse_method_rejects(text):
    with pytest.raises(InvalidParameter):
        parse_method(text)


def test_method_labels():
    assert [method.label for method in (Quadrature(), Series(order=4), ClosedFormRectangle())] == [
        "quadrature",
        "series4",
        "rectangle",
    ]
    assert parse_method("quadrature", tol=1e-6).tol == 1e-6


@pytest.mark.parametrize("section_factory", [EllipseFactory, RectangleFactory, CardioidFactory])
def test_binormal_offset_leaves_the_profile_unchanged(section_factory):
    u_grid = np.linspace(0.05, 1.5, 6)
    plain = ChannelSpecFactory(section=section_factory())
    shifted = ChannelSpecFactory(section=section_factory(), transport=TwistOffsetFactory(q=0.02))
    np.testing.assert_allclose(
        deff_profile(shifted, u_grid, Quadrature()).deff, deff_profile(plain, u_grid, Quadrature()).deff, rtol=1e-9
    )
