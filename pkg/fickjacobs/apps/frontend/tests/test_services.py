import copy
import io

import numpy as np
import pytest

from fickjacobs.apps.diffusion.services import deff_profile
from fickjacobs.apps.diffusion.types import ClosedFormEllipse, Quadrature
from fickjacobs.apps.frontend.figures import FIGURES
from fickjacobs.apps.frontend.output import format_value, read_csv, read_csv_header, write_csv, write_csv_file
from fickjacobs.apps.frontend.services import (
    build_config,
    canonical_json,
    load_config,
    parse_config_text,
    profile_header,
    profile_table,
)
from fickjacobs.apps.sections.tests.factory import ChannelSpecFactory
from fickjacobs.core.exceptions import ConfigError, FocalContact


class TestLoadConfig:
    def test_round_trip_through_a_file(self, helix_document, write_config):
        config = load_config(write_config(helix_document))
        assert config.document == helix_document
        assert config.channel.section.kind == "ellipse"

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigError):
            load_config(tmp_path / "absent.json")

    @pytest.mark.parametrize("text", ["{", "[1, 2]", "3"])
    def test_malformed_json(self, text):
        with pytest.raises(ConfigError):
            parse_config_text(text)

    def test_validation_can_be_skipped(self, helix_document):
        document = copy.deepcopy(helix_document)
        document["grid"] = {"u_min": 0.0, "u_max": 50.0, "n": 3}
        with pytest.raises(ConfigError):
            build_config(document)
        assert build_config(document, validate=False).u_grid()[-1] == 50.0

    def test_focal_contact_is_found_on_load(self):
        document = {
            "curve": {"kind": "circle", "radius": 0.25},
            "section": {"kind": "ellipse", "r1": 0.3, "r2": 0.1},
        }
        with pytest.raises(FocalContact):
            build_config(document)

    def test_auto_center_flag(self, helix_document):
        document = copy.deepcopy(helix_document)
        document["section"]["auto_center"] = True
        assert build_config(document).auto_center


def test_canonical_json_is_key_order_independent():
    assert canonical_json({"b": 1, "a": [1.5, None]}) == canonical_json({"a": [1.5, None], "b": 1})
    assert canonical_json({"b": 1, "a": 2}) == '{"a":2,"b":1}'


class TestProfileTable:
    @pytest.fixture
    def profiles(self):
        channel = ChannelSpecFactory()
        u_grid = np.linspace(0.0, 1.0, 5)
        return [deff_profile(channel, u_grid, method) for method in (ClosedFormEllipse(), Quadrature())]

    def test_single_profile(self, profiles):
        columns, rows = profile_table(profiles[:1])
        assert columns == ["u", "deff", "deff_over_D", "omega_vol", "area", "method"]
        assert [row["method"] for row in rows] == ["ellipse"] * 5

    def test_several_profiles(self, profiles):
        columns, rows = profile_table(profiles)
        assert columns == [
            "u",
            "omega_vol",
            "area",
            "deff_ellipse",
            "deff_over_D_ellipse",
            "deff_quadrature",
            "deff_over_D_quadrature",
        ]
        for row in rows:
            assert row["deff_ellipse"] == pytest.approx(row["deff_quadrature"], rel=1e-8)

    def test_header(self, profiles, helix_document):
        header = profile_header(helix_document, profiles, 1e-10)
        assert header["methods"] == "ellipse,quadrature"
        assert header["config"] == canonical_json(helix_document)


class TestCsv:
    def test_values_keep_all_digits(self):
        assert format_value(0.1) == "0.10000000000000001"
        assert format_value(np.float64(1 / 3)) == format_value(1 / 3)
        assert float(format_value(np.pi)) == np.pi
        assert format_value(np.int64(3)) == "3"
        assert format_value("series4") == "series4"

    def test_stream_round_trip(self):
        stream = io.StringIO()
        header = {"command": "deff", "config": '{"a":1}', "note": "two\nlines"}
        write_csv(stream, ["u", "deff"], [{"u": 0.5, "deff": 1.25}, {"u": 1.0, "deff": 1.5}], header)
        stream.seek(0)
        parsed_header, rows = read_csv(stream)
        assert parsed_header == {"command": "deff", "config": '{"a":1}', "note": "two lines"}
        assert rows == [{"u": "0.5", "deff": "1.25"}, {"u": "1", "deff": "1.5"}]

    def test_file_round_trip(self, tmp_path):
        path = write_csv_file(tmp_path / "nested" / "out.csv", ["t"], [{"t": 0.25}], {"seed": 7})
        assert read_csv_header(path) == {"seed": "7"}
        assert read_csv(path)[1] == [{"t": "0.25"}]


def test_every_figure_series_builds():
    for number, series_list in FIGURES.items():
        for series in series_list:
            config = build_config(series.document, validate=False)
            assert config.u_grid().size == 512, (number, series.name)
            assert config.channel.transport.omega == 4.0
