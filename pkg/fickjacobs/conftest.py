import json

import pytest

from fickjacobs.apps.curves.tests.factory import LineFactory
from fickjacobs.apps.sections.tests.factory import ChannelSpecFactory, EllipseFactory, TwistOffsetFactory
from fickjacobs.apps.sections.types import ChannelSpec
from fickjacobs.core import quadrature


@pytest.fixture(autouse=True)
def quadrature_rule():
    yield
    quadrature.configure(order=quadrature.DEFAULT_ORDER, max_panels=quadrature.DEFAULT_MAX_PANELS)


@pytest.fixture
def helix_channel() -> ChannelSpec:
    """Helix a=1/4, b=1/6 with a twisted 1/6 x 1/10 ellipse."""
    return ChannelSpecFactory()


@pytest.fixture
def straight_tube() -> ChannelSpec:
    return ChannelSpecFactory(
        curve=LineFactory(length=20.0),
        section=EllipseFactory(r1=2.0, r2=2.0),
        transport=TwistOffsetFactory(omega=0.0),
    )


@pytest.fixture
def helix_document() -> dict:
    return {
        "curve": {"kind": "helix", "a": 0.25, "b": 1 / 6},
        "section": {"kind": "ellipse", "r1": 1 / 6, "r2": 0.1},
        "twist": {"omega": 4.0, "p": 0.0, "q": 0.0},
        "bulk_D": 1.0,
        "grid": {"u_min": 0.0, "u_max": 1.5, "n": 7},
    }


@pytest.fixture
def tube_document() -> dict:
    return {
        "curve": {"kind": "line", "length": 20.0},
        "section": {"kind": "ellipse", "r1": 2.0, "r2": 2.0},
        "bulk_D": 1.0,
        "grid": {"u_min": 5.0, "u_max": 15.0, "n": 5},
        "walk": {"n_particles": 64, "dt": 4e-4, "t_final": 0.02, "batches": 4, "record_every": 5, "start_u": 10.0},
    }


@pytest.fixture
def write_config(tmp_path):
    def write(document: dict, name: str = "channel.json") -> str:
        path = tmp_path / name
        path.write_text(json.dumps(document))
        return str(path)

    return write
