"""
Tests for the command line interface
"""
import shutil
import tempfile
from pathlib import Path

import pytest
import yaml
from click.testing import CliRunner

from transducersim.cli import EXIT_CONFIG, EXIT_DIAGNOSTIC, main
from transducersim.explore import figure_spec, spec_hash
from transducersim.utils.io import read_provenance, read_table

CLEAN_ENV = {
    "TRANSDUCER_MATERIALS": None,
    "TRANSDUCER_JOBS": None,
    "TRANSDUCER_FORMAT": None,
    "LOG_LEVEL": "WARNING",
    "LOG_FILE": None,
}

LONG_DEVICE = {"geometry": {"L": "1mm"}}
COLLAPSED_BOUNDS = {"w": ["1um", "1um"], "L": ["1mm", "1mm"]}
NEGATIVE_LAW = {"kind": "power_law", "coefficient": -1.0, "exponent": 1.0}


class TestCLI:
    """Test cases for the transducer-sim command group"""

    def setup_method(self):
        """Setup test environment"""
        self.temp_dir = tempfile.mkdtemp()
        self.runner = CliRunner()

    def teardown_method(self):
        """Cleanup test environment"""
        shutil.rmtree(self.temp_dir)

    def invoke(self, *args):
        return self.runner.invoke(main, list(args), env=CLEAN_ENV)

    def write_yaml(self, name, document):
        path = Path(self.temp_dir, name)
        path.write_text(yaml.safe_dump(document))
        return str(path)

    def test_version(self):
        """Test the version option"""
        result = self.invoke("--version")
        assert result.exit_code == 0
        assert "0.1.0" in result.output

    def test_materials_list(self):
        """Test built-in materials are listed with their provenance"""
        result = self.invoke("materials", "list")
        assert result.exit_code == 0
        assert "LiNbO3\tbuiltin" in result.output
        assert "NbN\tbuiltin" in result.output

    def test_materials_show(self):
        """Test the merged LiNbO3 entry shows its electro-optic coefficient"""
        result = self.invoke("materials", "show", "LiNbO3")
        assert result.exit_code == 0
        assert "d33 = 27 pm/V" in result.output

    def test_materials_show_superconductor(self):
        """Test NbN shows its pair-breaking frequency"""
        result = self.invoke("materials", "show", "NbN")
        assert result.exit_code == 0
        assert "pair-breaking above 1.127 THz" in result.output

    def test_materials_show_unknown(self):
        """Test an unknown material aborts"""
        result = self.invoke("materials", "show", "Unobtainium")
        assert result.exit_code == 1
        assert "Error:" in result.output

    def test_materials_validate(self):
        """Test the built-in database validates"""
        result = self.invoke("materials", "validate")
        assert result.exit_code == 0
        assert "3 materials valid" in result.output

    def test_materials_validate_reports_problems(self):
        """Test a non-positive law fails validation"""
        path = self.write_yaml(
            "bad_law.yaml",
            {"materials": {"SiO2": {"thermal": {"g_th": NEGATIVE_LAW}}}},
        )
        result = self.invoke("--materials", path, "materials", "validate")
        assert result.exit_code == 1
        assert "SiO2" in result.output

    def test_corrupted_override(self):
        """Test a corrupted override document is a load error"""
        path = self.write_yaml("corrupt.yaml", {"materials": {"LiNbO3": {"density": -1.0}}})
        result = self.invoke("--materials", path, "materials", "list")
        assert result.exit_code == 1
        assert "LiNbO3" in result.output

    def test_point_missing_intermediate_frequency(self):
        """Test a two-step configuration without f_i aborts"""
        config = self.write_yaml("two_step.yaml", {"scheme": "two_step"})
        result = self.invoke("point", "--config", config)
        assert result.exit_code == 1
        assert "f_i" in result.output

    def test_point_formats(self):
        """Test CSV and JSON carry the same values"""
        config = self.write_yaml("long.yaml", LONG_DEVICE)
        csv_path = str(Path(self.temp_dir, "point.csv"))
        json_path = str(Path(self.temp_dir, "point.jsonl"))

        assert self.invoke("point", "-c", config, "-f", "csv", "-o", csv_path).exit_code == 0
        assert self.invoke("point", "-c", config, "-f", "json", "-o", json_path).exit_code == 0

        from_csv = read_table(csv_path)
        from_json = read_table(json_path)
        assert len(from_csv) == 1
        assert from_csv["eta_total"].iloc[0] == from_json["eta_total"].iloc[0]
        assert from_csv["n_total"].iloc[0] == from_json["n_total"].iloc[0]
        assert from_csv["eta_total"].iloc[0] > 0.5

    def test_point_provenance(self):
        """Test --out writes the provenance sidecar"""
        config = self.write_yaml("long.yaml", LONG_DEVICE)
        out = str(Path(self.temp_dir, "point.csv"))
        result = self.invoke("point", "-c", config, "-o", out)
        assert result.exit_code == 0
        provenance = read_provenance(out)
        assert provenance["command"] == "point"
        assert provenance["config"]["geometry"]["L_m"] == pytest.approx(1e-3)
        assert "geometry.w = 1um" in provenance["config"]["defaults_applied"]
        assert provenance["materials"]["LiNbO3"] == "builtin"

    def test_point_stdout(self):
        """Test the point table goes to stdout when no file is given"""
        config = self.write_yaml("long.yaml", LONG_DEVICE)
        result = self.invoke("point", "-c", config)
        assert result.exit_code == 0
        assert "eta_total" in result.output

    def test_point_runaway_exit_code(self):
        """Test the default short device reports runaway with a diagnostic exit code"""
        result = self.invoke("point")
        assert result.exit_code == EXIT_DIAGNOSTIC
        assert "runaway" in result.output

    def test_point_verbose_reports_both_branches(self):
        """Test verbose mode prints the occupancy of both bath weightings"""
        config = self.write_yaml("long.yaml", LONG_DEVICE)
        result = self.invoke("-v", "point", "-c", config)
        assert result.exit_code == 0
        assert "n_total physical = " in result.output
        assert "as_printed = " in result.output

    def test_point_occupancy_branch_option(self):
        """Test the branch option replaces the default in the recorded configuration"""
        config = self.write_yaml("long.yaml", LONG_DEVICE)
        out = str(Path(self.temp_dir, "point.csv"))
        result = self.invoke("point", "-c", config, "--occupancy-branch", "as_printed", "-o", out)
        assert result.exit_code == 0
        recorded = read_provenance(out)["config"]
        assert recorded["model"]["occupancy_branch"] == "as_printed"
        assert not any(d.startswith("model.occupancy") for d in recorded["defaults_applied"])
        table = read_table(out)
        assert table["n_total"].iloc[0] == table["n_total_as_printed"].iloc[0]

    def test_missing_config_file(self):
        """Test a missing configuration file is a configuration error"""
        missing = str(Path(self.temp_dir, "absent.yaml"))
        result = self.invoke("point", "-c", missing)
        assert result.exit_code == EXIT_CONFIG
        assert "absent.yaml" in result.output

    def test_missing_spec_file(self):
        """Test a missing sweep spec is a configuration error"""
        result = self.invoke("sweep", str(Path(self.temp_dir, "absent.yaml")))
        assert result.exit_code == EXIT_CONFIG

    def test_bad_option_value(self):
        """Test an unknown output format is a configuration error"""
        result = self.invoke("point", "-f", "xlsx")
        assert result.exit_code == EXIT_CONFIG

    def test_unwritable_output(self):
        """Test an output path that cannot be written aborts cleanly"""
        config = self.write_yaml("long.yaml", LONG_DEVICE)
        blocked = Path(self.temp_dir, "blocked.csv")
        blocked.mkdir()
        result = self.invoke("point", "-c", config, "-f", "csv", "-o", str(blocked))
        assert result.exit_code == EXIT_CONFIG
        assert "Error:" in result.output
        assert not isinstance(result.exception, OSError)

    def test_sweep(self):
        """Test a two-cell sweep written to a file"""
        axis = {"path": "geometry.L", "grid": "log", "min": "1mm", "max": "2mm", "count": 2}
        spec = self.write_yaml("sweep.yaml", {"axes": [axis]})
        out = str(Path(self.temp_dir, "sweep.csv"))
        result = self.invoke("sweep", spec, "-o", out)
        assert result.exit_code == 0
        table = read_table(out)
        assert len(table) == 2
        assert table.columns[0] == "geometry.L"
        assert read_provenance(out)["spec"]["axes"][0]["count"] == 2

    def test_sweep_bad_spec(self):
        """Test a zero-count axis aborts"""
        axis = {"path": "geometry.L", "min": "1mm", "max": "2mm", "count": 0}
        spec = self.write_yaml("sweep.yaml", {"axes": [axis]})
        result = self.invoke("sweep", spec)
        assert result.exit_code == 1

    def test_figure_preview(self):
        """Test a coarse figure dataset records the frozen spec hash"""
        out = str(Path(self.temp_dir, "fig1c.csv"))
        result = self.invoke("figure", "fig1c", "-r", "2", "-o", out)
        assert result.exit_code == 0
        assert list(read_table(out).columns) == ["w_m", "L_m", "eta1", "flags"]
        provenance = read_provenance(out)
        assert provenance["figure"] == "fig1c"
        assert provenance["resolution"] == 2
        assert provenance["frozen_spec_sha256"] == spec_hash(figure_spec("fig1c"))

    def test_figure_unknown(self):
        """Test unknown figure ids are configuration errors"""
        result = self.invoke("figure", "fig9z")
        assert result.exit_code == EXIT_CONFIG
        assert "fig9z" in result.output

    def test_optimize(self):
        """Test a collapsed search writes the best point and its trace"""
        spec = self.write_yaml(
            "optimize.yaml",
            {"scheme": "single", "bounds": COLLAPSED_BOUNDS},
        )
        out = str(Path(self.temp_dir, "best.csv"))
        trace = str(Path(self.temp_dir, "trace.csv"))
        result = self.invoke("optimize", spec, "-o", out, "--trace", trace)
        assert result.exit_code == 0
        assert len(read_table(out)) == 1
        assert len(read_table(trace)) == 1
        assert read_provenance(out)["feasible"] is True

    def test_optimize_infeasible(self):
        """Test an unreachable noise bound exits with the diagnostic code"""
        spec = self.write_yaml(
            "optimize.yaml",
            {"scheme": "single", "bounds": COLLAPSED_BOUNDS, "n_max": 1e-300},
        )
        result = self.invoke("optimize", spec)
        assert result.exit_code == EXIT_DIAGNOSTIC
        assert "no feasible point" in result.output

    def test_figure_byte_identical(self):
        """Test the same figure run twice writes identical bytes"""
        first = Path(self.temp_dir, "first.csv")
        second = Path(self.temp_dir, "second.csv")
        for out in (first, second):
            result = self.invoke("figure", "fig2c", "-r", "3", "-f", "csv", "-o", str(out))
            assert result.exit_code == 0
        assert first.read_bytes() == second.read_bytes()
        assert len(read_table(first)) == 9

    def test_figure_occupancy_branch_option(self):
        """Test the figure command accepts the bath weighting"""
        out = str(Path(self.temp_dir, "fig1d.csv"))
        branch = ("--occupancy-branch", "as_printed")
        result = self.invoke("figure", "fig1d", "-r", "2", *branch, "-o", out)
        assert result.exit_code == 0
        assert read_provenance(out)["config"]["model"]["occupancy_branch"] == "as_printed"
