import io

import pytest
from django.core.management import CommandError, call_command

from fickjacobs.apps.frontend.output import read_csv, read_csv_header


def run(name: str, *args: str) -> tuple[str, str]:
    stdout, stderr = io.StringIO(), io.StringIO()
    call_command(name, *args, stdout=stdout, stderr=stderr)
    return stdout.getvalue(), stderr.getvalue()


def table(text: str):
    return read_csv(io.StringIO(text))


def exit_code(name: str, *args: str) -> int:
    with pytest.raises(CommandError) as raised:
        run(name, *args)
    return raised.value.returncode


class TestDeff:
    def test_two_methods_side_by_side(self, helix_document, write_config):
        path = write_config(helix_document)
        out, _ = run("deff", "--config", path, "--method", "ellipse", "--method", "quadrature")
        header, rows = table(out)
        assert header["command"] == "deff"
        assert header["methods"] == "ellipse,quadrature"
        assert len(rows) == 7
        for row in rows:
            assert float(row["deff_ellipse"]) == pytest.approx(float(row["deff_quadrature"]), rel=1e-8)

    def test_writes_to_a_file(self, helix_document, write_config, tmp_path):
        target = tmp_path / "out" / "deff.csv"
        out, _ = run("deff", "--config", write_config(helix_document), "--method", "series:4", "--out", str(target))
        assert out == ""
        header, rows = read_csv(target)
        assert header["methods"] == "series4"
        assert {row["method"] for row in rows} == {"series4"}

    def test_unknown_method(self, helix_document, write_config):
        assert exit_code("deff", "--config", write_config(helix_document), "--method", "spline") == 2


class TestMoments:
    def test_higher_moments(self, helix_document, write_config):
        out, _ = run("moments", "--config", write_config(helix_document), "--max-order", "6")
        header, rows = table(out)
        assert header["command"] == "moments"
        assert len(rows) == 7
        assert list(rows[0]) == [
            "u",
            "A",
            "eta_mean",
            "beta_mean",
            "eta2",
            "eta3",
            "eta4",
            "eta5",
            "eta6",
            "a",
            "b",
            "c",
            "s1",
            "s2",
            "theta",
        ]

    @pytest.mark.parametrize("order", ["1", "9"])
    def test_order_out_of_range(self, helix_document, write_config, order):
        assert exit_code("moments", "--config", write_config(helix_document), "--max-order", order) == 2


class TestSolve:
    def test_time_stepping(self, tube_document, write_config):
        path = write_config(tube_document)
        flags = ("--n-cells", "32", "--steps", "10", "--every", "5", "--initial", "gaussian(10,1)")
        out, _ = run("solve", "--config", path, *flags)
        header, rows = table(out)
        assert header["initial"] == "gaussian(10,1)"
        assert float(header["initial_mass"]) == pytest.approx(1.0, rel=1e-6)
        assert len(rows) == 96
        assert sorted({float(row["t"]) for row in rows}) == pytest.approx([0.0, 0.005, 0.01])

    def test_steady_state_between_fixed_densities(self, tube_document, write_config):
        path = write_config(tube_document)
        out, _ = run("solve", "--config", path, "--n-cells", "16", "--steady", "--bc-left", "1", "--bc-right", "0")
        header, rows = table(out)
        assert float(header["steady_flux"]) == pytest.approx(0.1, rel=1e-9)
        assert len(rows) == 16
        for row in rows:
            assert float(row["j"]) == pytest.approx(0.1, rel=1e-8)

    def test_closed_ends_have_no_steady_state(self, tube_document, write_config):
        assert exit_code("solve", "--config", write_config(tube_document), "--n-cells", "16", "--steady") == 4

    def test_unknown_initial_condition(self, tube_document, write_config):
        assert exit_code("solve", "--config", write_config(tube_document), "--initial", "spike") == 2


class TestMonteCarlo:
    def test_same_seed_same_bytes(self, tube_document, write_config):
        path = write_config(tube_document)
        first, err = run("mc", "--config", path, "--seed", "7")
        second, _ = run("mc", "--config", path, "--seed", "7")
        other, _ = run("mc", "--config", path, "--seed", "8")
        assert first == second
        assert first != other
        assert err.startswith("estimate ")
        header, rows = table(first)
        assert header["seed"] == "7"
        assert header["n_particles"] == "64"
        assert len(rows) == 11

    def test_trajectories(self, tube_document, write_config, tmp_path):
        target = tmp_path / "walk.csv"
        run("mc", "--config", write_config(tube_document), "--trajectories", str(target), "--check-inside")
        header, rows = read_csv(target)
        assert header["particles"] == "64"
        assert len(rows) == 11 * 64
        assert float(rows[0]["u"]) == pytest.approx(10.0)

    def test_flags_override_the_config(self, tube_document, write_config):
        out, _ = run("mc", "--config", write_config(tube_document), "--n-particles", "32", "--batches", "2")
        header, _ = table(out)
        assert header["n_particles"] == "32"
        assert header["batches"] == "2"

    def test_compare_with_the_reduced_model(self, tube_document, write_config):
        out, _ = run("mc", "--config", write_config(tube_document), "--compare", "quadrature")
        assert float(table(out)[0]["reduced_estimate"]) == pytest.approx(1.0, rel=1e-9)

    def test_step_too_large(self, tube_document, write_config):
        assert exit_code("mc", "--config", write_config(tube_document), "--dt", "0.5", "--t-final", "1") == 2


def test_figures_write_one_file_per_series(tmp_path):
    out, _ = run("figures", "3", "--out", str(tmp_path))
    target = tmp_path / "fig3_ellipse.csv"
    assert out.strip() == str(target)
    header = read_csv_header(target)
    assert header["figure"] == "3"
    assert header["series"] == "fig3_ellipse"
    assert header["methods"] == "ellipse,quadrature"
    assert len(read_csv(target)[1]) == 512


class TestValidate:
    def test_accepts_the_helix_channel(self, helix_document, write_config):
        out, _ = run("validate", "--config", write_config(helix_document))
        assert out.startswith("ok: ellipse section on a helix curve, 7 grid points")

    def test_focal_contact(self, write_config):
        document = {
            "curve": {"kind": "circle", "radius": 0.25},
            "section": {"kind": "ellipse", "r1": 0.3, "r2": 0.1},
        }
        with pytest.raises(CommandError) as raised:
            run("validate", "--config", write_config(document))
        assert raised.value.returncode == 3
        assert str(raised.value).startswith("error[3]")

    def test_schema_error(self, helix_document, write_config):
        document = {**helix_document, "curve": {"kind": "spiral"}}
        assert exit_code("validate", "--config", write_config(document)) == 2

    def test_missing_file(self, tmp_path):
        assert exit_code("validate", "--config", str(tmp_path / "absent.json")) == 2

    @pytest.mark.parametrize("flag", [("--threads", "0"), ("--tol", "0")])
    def test_bad_global_flags(self, helix_document, write_config, flag):
        assert exit_code("validate", "--config", write_config(helix_document), *flag) == 2
