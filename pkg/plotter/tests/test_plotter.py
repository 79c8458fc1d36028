"""Tests for the plotter package.

Everything here goes through the documented file interfaces: the sweep CSV
schema and the two branching JSON shapes. The fixtures under data/ were
produced by the simulation CLI (golden_sweep.csv) or written by hand from
the exact half-law pmf (dwass_half.json, sim_half.json).
"""

import json
import math
import subprocess
import sys
from pathlib import Path

import pytest

from squareperc_plotter import LAMBDA_C_DEFAULT, PlotSpec, SchemaError, render_phase, render_progeny

DATA = Path(__file__).parent / "data"
GOLDEN_SWEEP = DATA / "golden_sweep.csv"
DWASS_HALF = DATA / "dwass_half.json"
SIM_HALF = DATA / "sim_half.json"


def run_cli(*args):
    return subprocess.run(
        [sys.executable, "-m", "squareperc_plotter.cli", *args],
        capture_output=True, text=True,
    )


class TestPhase:
    def test_golden_sweep_renders_nonempty_svg(self, tmp_path):
        out = tmp_path / "phase.svg"
        info = render_phase(PlotSpec(str(GOLDEN_SWEEP), str(out), kind="phase"))
        assert out.exists()
        assert info["bytes"] > 0
        assert out.stat().st_size == info["bytes"]
        # 3 population sizes, 5 lambda values each
        assert info["curves"] == {100: 5, 150: 5, 200: 5}
        assert out.read_text().lstrip().startswith("<?xml")

    def test_lambda_c_default_matches_critical_value(self):
        assert LAMBDA_C_DEFAULT == pytest.approx(math.sqrt(math.sqrt(6.0) - 2.0), abs=0)

    def test_lambda_c_override_is_reported(self, tmp_path):
        out = tmp_path / "phase.svg"
        spec = PlotSpec(str(GOLDEN_SWEEP), str(out), kind="phase", lambda_c=0.9)
        assert render_phase(spec)["lambda_c"] == 0.9

    def test_render_is_deterministic(self, tmp_path):
        a, b = tmp_path / "a.svg", tmp_path / "b.svg"
        render_phase(PlotSpec(str(GOLDEN_SWEEP), str(a), kind="phase"))
        render_phase(PlotSpec(str(GOLDEN_SWEEP), str(b), kind="phase"))
        assert a.read_bytes() == b.read_bytes()

    def test_png_output(self, tmp_path):
        out = tmp_path / "phase.png"
        info = render_phase(PlotSpec(str(GOLDEN_SWEEP), str(out), kind="phase"))
        assert info["bytes"] > 0
        assert out.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"

    def test_single_row_csv(self, tmp_path):
        header = GOLDEN_SWEEP.read_text().splitlines()[0]
        row = GOLDEN_SWEEP.read_text().splitlines()[1]
        src = tmp_path / "one.csv"
        src.write_text(header + "\n" + row + "\n")
        info = render_phase(PlotSpec(str(src), str(tmp_path / "one.svg"), kind="phase"))
        assert info["curves"] == {100: 1}

    def test_missing_column_names_the_column(self, tmp_path):
        lines = GOLDEN_SWEEP.read_text().splitlines()
        cols = lines[0].split(",")
        drop = cols.index("wilson_ci_low")
        bad = tmp_path / "bad.csv"
        bad.write_text("\n".join(",".join(v for i, v in enumerate(l.split(",")) if i != drop) for l in lines) + "\n")
        with pytest.raises(SchemaError, match="missing columns: wilson_ci_low"):
            render_phase(PlotSpec(str(bad), str(tmp_path / "x.svg"), kind="phase"))

    def test_empty_file_rejected(self, tmp_path):
        empty = tmp_path / "empty.csv"
        empty.write_text("")
        with pytest.raises(SchemaError, match="empty file"):
            render_phase(PlotSpec(str(empty), str(tmp_path / "x.svg"), kind="phase"))

    def test_header_only_rejected(self, tmp_path):
        src = tmp_path / "hdr.csv"
        src.write_text(GOLDEN_SWEEP.read_text().splitlines()[0] + "\n")
        with pytest.raises(SchemaError, match="no data rows"):
            render_phase(PlotSpec(str(src), str(tmp_path / "x.svg"), kind="phase"))

    def test_unparseable_cell_reports_line_number(self, tmp_path):
        lines = GOLDEN_SWEEP.read_text().splitlines()
        cells = lines[2].split(",")
        cells[lines[0].split(",").index("frac_full_support")] = "not-a-number"
        broken = ",".join(cells)
        src = tmp_path / "broken.csv"
        src.write_text("\n".join([lines[0], lines[1], broken]) + "\n")
        with pytest.raises(SchemaError, match="line 3"):
            render_phase(PlotSpec(str(src), str(tmp_path / "x.svg"), kind="phase"))

    def test_missing_input_file_is_oserror(self, tmp_path):
        with pytest.raises(OSError):
            render_phase(PlotSpec(str(tmp_path / "nope.csv"), str(tmp_path / "x.svg"), kind="phase"))


class TestProgeny:
    def test_half_law_markers(self, tmp_path):
        out = tmp_path / "progeny.svg"
        spec = PlotSpec(str(DWASS_HALF), str(out), kind="progeny", sim_path=str(SIM_HALF))
        info = render_progeny(spec)
        assert info["bytes"] > 0
        markers = dict(info["markers"])
        # exact total-progeny law for offspring P(0)=P(2)=1/2
        assert markers[1] == 0.5
        assert markers[2] == 0.0
        assert markers[3] == 0.125
        assert markers[5] == 0.0625
        assert info["n_sim"] == 400

    def test_single_marker_fixture(self, tmp_path):
        dwass = tmp_path / "d.json"
        dwass.write_text(json.dumps({"k": [1], "pmf": [1.0]}))
        spec = PlotSpec(str(dwass), str(tmp_path / "p.svg"), kind="progeny", sim_path=str(SIM_HALF))
        assert render_progeny(spec)["markers"] == [(1, 1.0)]

    def test_progeny_needs_sim_path(self, tmp_path):
        spec = PlotSpec(str(DWASS_HALF), str(tmp_path / "p.svg"), kind="progeny")
        with pytest.raises(ValueError, match="sim_path"):
            render_progeny(spec)

    def test_missing_pmf_key_named(self, tmp_path):
        dwass = tmp_path / "d.json"
        dwass.write_text(json.dumps({"k": [1, 2]}))
        spec = PlotSpec(str(dwass), str(tmp_path / "p.svg"), kind="progeny", sim_path=str(SIM_HALF))
        with pytest.raises(SchemaError, match="missing keys: pmf"):
            render_progeny(spec)

    def test_misaligned_pmf_rejected(self, tmp_path):
        dwass = tmp_path / "d.json"
        dwass.write_text(json.dumps({"k": [1, 2], "pmf": [0.5]}))
        spec = PlotSpec(str(dwass), str(tmp_path / "p.svg"), kind="progeny", sim_path=str(SIM_HALF))
        with pytest.raises(SchemaError, match="aligned"):
            render_progeny(spec)

    def test_empty_totals_rejected(self, tmp_path):
        sim = tmp_path / "s.json"
        sim.write_text(json.dumps({"totals": []}))
        spec = PlotSpec(str(DWASS_HALF), str(tmp_path / "p.svg"), kind="progeny", sim_path=str(sim))
        with pytest.raises(SchemaError, match="totals is empty"):
            render_progeny(spec)

    def test_totals_key_required(self, tmp_path):
        sim = tmp_path / "s.json"
        sim.write_text(json.dumps({"runs": [1, 2]}))
        spec = PlotSpec(str(DWASS_HALF), str(tmp_path / "p.svg"), kind="progeny", sim_path=str(sim))
        with pytest.raises(SchemaError, match="missing keys: totals"):
            render_progeny(spec)

    def test_invalid_json_rejected(self, tmp_path):
        bad = tmp_path / "d.json"
        bad.write_text("{not json")
        spec = PlotSpec(str(bad), str(tmp_path / "p.svg"), kind="progeny", sim_path=str(SIM_HALF))
        with pytest.raises(SchemaError, match="not valid JSON"):
            render_progeny(spec)

    def test_json_array_rejected(self, tmp_path):
        bad = tmp_path / "d.json"
        bad.write_text("[1, 2, 3]")
        spec = PlotSpec(str(bad), str(tmp_path / "p.svg"), kind="progeny", sim_path=str(SIM_HALF))
        with pytest.raises(SchemaError, match="expected a JSON object"):
            render_progeny(spec)


class TestSpec:
    def test_kind_validated(self, tmp_path):
        with pytest.raises(ValueError, match="kind"):
            PlotSpec("a.csv", "b.svg", kind="scatter")

    def test_no_simulation_package_import(self):
        # The plotter consumes files only; importing it must not pull in
        # the simulation package even when that package is installed.
        code = (
            "import sys; import squareperc_plotter; "
            "sys.exit(1 if 'squareperc' in sys.modules else 0)"
        )
        proc = subprocess.run([sys.executable, "-c", code], capture_output=True)
        assert proc.returncode == 0


class TestCli:
    def test_phase_happy_path(self, tmp_path):
        out = tmp_path / "phase.svg"
        proc = run_cli("phase", "--in", str(GOLDEN_SWEEP), "--out", str(out))
        assert proc.returncode == 0
        assert "wrote" in proc.stdout and str(out) in proc.stdout
        assert out.stat().st_size > 0

    def test_progeny_happy_path(self, tmp_path):
        out = tmp_path / "progeny.svg"
        proc = run_cli("progeny", "--dwass", str(DWASS_HALF), "--sim", str(SIM_HALF), "--out", str(out))
        assert proc.returncode == 0
        assert out.stat().st_size > 0

    def test_schema_violation_exits_2_naming_column(self, tmp_path):
        lines = GOLDEN_SWEEP.read_text().splitlines()
        cols = lines[0].split(",")
        drop = cols.index("frac_full_support")
        bad = tmp_path / "bad.csv"
        bad.write_text("\n".join(",".join(v for i, v in enumerate(l.split(",")) if i != drop) for l in lines) + "\n")
        proc = run_cli("phase", "--in", str(bad), "--out", str(tmp_path / "x.svg"))
        assert proc.returncode == 2
        assert "frac_full_support" in proc.stderr

    def test_missing_file_exits_1(self, tmp_path):
        proc = run_cli("phase", "--in", str(tmp_path / "nope.csv"), "--out", str(tmp_path / "x.svg"))
        assert proc.returncode == 1

    def test_missing_required_arg_exits_2(self):
        proc = run_cli("phase", "--in", str(GOLDEN_SWEEP))
        assert proc.returncode == 2

    def test_unknown_subcommand_exits_2(self):
        proc = run_cli("scatter")
        assert proc.returncode == 2
