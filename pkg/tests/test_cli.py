import json
import math
from collections import defaultdict

import numpy as np
import pytest

from brownwave.cli import VERDICT, main, parse_quantity, UsageError
from brownwave.core import SI
from brownwave.datasets import (
    FIGURE_GRID,
    fig2_rows,
    fig3_rows,
    fig4_rows,
    fig5_rows,
    read_rows,
    rows_to_csv,
)
from brownwave.grid import trapezoid_weights


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def by_series(rows):
    groups = defaultdict(list)
    for series, t, x, v in rows:
        groups[(series, t)].append((x, v))
    return groups


class TestDatasets:
    def test_csv_round_trip(self):
        rows = fig4_rows(n_points=7)
        text = rows_to_csv(rows)
        assert text.splitlines()[0] == "series,t_or_param,x,value"
        back = read_rows(text)
        assert [r[3] for r in back] == [r[3] for r in rows]
        # 17 significant digits
        mantissa = text.splitlines()[1].split(",")[-1].split("e")[0]
        assert len(mantissa.replace(".", "").lstrip("-")) == 17

    def test_fig2(self):
        rows = read_rows(rows_to_csv(fig2_rows()))
        w = trapezoid_weights(FIGURE_GRID.n_points, FIGURE_GRID.dx)
        groups = by_series(rows)
        dens = [k for k in groups if k[0].startswith("density")]
        assert len(dens) == 8
        for key in dens:
            v = np.array([p for _, p in groups[key]])
            assert abs(w @ v - 1) < 1e-6
        for ratio in ("2", "4"):
            (_, var), = groups[(f"variance[x0/sigma0={ratio}]", 50.0)]
            assert var == pytest.approx(1.0, rel=1e-10)

    def test_fig5(self):
        rows = read_rows(rows_to_csv(fig5_rows()))
        w = trapezoid_weights(FIGURE_GRID.n_points, FIGURE_GRID.dx)
        groups = by_series(rows)
        dens = [k for k in groups if k[0].startswith("density")]
        assert len(dens) == 16
        for series, wt in dens:
            x0 = float(series.split("=")[1].rstrip("]"))
            xs, v = map(np.array, zip(*groups[(series, wt)]))
            assert abs(w @ v - 1) < 1e-6
            assert xs[np.argmax(v)] == pytest.approx(x0 * math.cos(wt), abs=FIGURE_GRID.dx / 2 + 1e-12)
        xs, v = map(np.array, zip(*groups[("density[x0/sigma=2]", math.pi)]))
        assert xs[np.argmax(v)] == pytest.approx(-2.0, abs=FIGURE_GRID.dx / 2)

    def test_fig3_decreasing(self):
        lam = [v for *_, v in fig3_rows()]
        assert all(b < a for a, b in zip(lam, lam[1:]))

    def test_fig4(self):
        rows = fig4_rows()
        for series in ("G[m/R=2e-15]", "G[m/R=3e-15]"):
            T, G = map(np.array, zip(*[(t, v) for s, t, _, v in rows if s == series]))
            ratio = G / T**2
            assert np.max(np.abs(ratio / ratio[0] - 1)) < 1e-10
        (g300,) = [v for s, t, _, v in rows if s == "G[m/R=3e-15]" and t == 300.0]
        assert g300 == pytest.approx(9.82e11, rel=1e-2)


class TestUnits:
    def test_parse(self):
        assert parse_quantity("720Da", "mass", "--mass") == 720 * SI.dalton
        assert parse_quantity("1.5e-24kg", "mass", "--mass") == 1.5e-24
        assert parse_quantity("0.35nm", "length", "--radius") == pytest.approx(3.5e-10, rel=1e-15)
        assert parse_quantity("300", "temperature", "--temperature") == 300
        assert parse_quantity("300K", "temperature", "--temperature") == 300
        assert parse_quantity("2", "mass", "--mass", natural=True) == 2

    @pytest.mark.parametrize("text,kind", [("-1Da", "mass"), ("0nm", "length"), ("12furlong", "length"),
                                           ("abc", "mass"), ("720", "mass")])
    def test_bad(self, text, kind):
        with pytest.raises(UsageError):
            parse_quantity(text, kind, "--x")


class TestDuality:
    def test_json(self, capsys):
        code, out, _ = run(capsys, "duality", "--mass", "720Da", "--radius", "0.35nm",
                           "--temperature", "300", "--format", "json")
        assert code == 0
        d = json.loads(out)
        assert d["sigma2"] == pytest.approx(5.614e-25, rel=1e-3)
        assert d["lambda"] == pytest.approx(4.71e-12, rel=5e-3)
        assert d["G"] == pytest.approx(1.12e12, rel=1e-2)

    def test_negative_mass(self, capsys):
        code, _, err = run(capsys, "duality", "--mass=-1Da", "--radius", "1nm", "--temperature", "300")
        assert code == 2 and "--mass" in err

    def test_bad_radius_unit(self, capsys):
        code, _, err = run(capsys, "duality", "--mass", "720Da", "--radius", "1mm", "--temperature", "300")
        assert code == 2 and "--radius" in err

    def test_catalog_matches_explicit(self, capsys):
        _, a, _ = run(capsys, "duality", "--catalog", "C60", "--temperature", "300", "--format", "csv")
        _, b, _ = run(capsys, "duality", "--mass", "720Da", "--radius", "0.35nm", "--temperature", "300",
                      "--format", "csv")
        assert a == b

    def test_natural_units(self, capsys):
        _, out, _ = run(capsys, "duality", "--natural-units", "--mass", "1", "--radius", "1",
                        "--temperature", "1", "--format", "json")
        assert json.loads(out)["sigma2"] == 0.25

    def test_manifest(self, capsys, tmp_path):
        out = tmp_path / "c60.json"
        code, _, _ = run(capsys, "duality", "--catalog", "C60", "--temperature", "300", "--format", "json",
                         "--out", str(out))
        assert code == 0
        manifest = json.loads((tmp_path / "c60.json.manifest.json").read_text())
        assert manifest["command"] == "duality"
        assert manifest["parameters"]["temperature"] == 300
        assert set(manifest["output_paths"]) == {str(out), str(out) + ".manifest.json"}


class TestNogo:
    def test_table(self, capsys):
        code, out, _ = run(capsys, "nogo", "--catalog", "C60", "--temperature", "300",
                           "--times", "1e-3,1,1e3", "--format", "json")
        assert code == 0
        d = json.loads(out)
        dt = [r["D_times_t"] for r in d["rows"]]
        assert all(v == pytest.approx(2.807e-25, rel=1e-3) for v in dt)
        assert max(dt) / min(dt) - 1 < 1e-12
        D = [r["D_required"] for r in d["rows"]]
        assert D[0] / D[1] == pytest.approx(1000, rel=1e-14)
        assert d["verdict"] == VERDICT

    def test_text_verdict(self, capsys):
        _, out, _ = run(capsys, "nogo", "--mass", "720Da", "--temperature", "300")
        assert out.strip().splitlines()[-1].endswith(VERDICT)

    @pytest.mark.parametrize("times", ["0,1", "-1", "1,abc"])
    def test_bad_times(self, capsys, times):
        code, _, err = run(capsys, "nogo", "--mass", "720Da", "--temperature", "300", "--times", times)
        assert code == 2 and "--times" in err


class TestFigures:
    @pytest.mark.parametrize("which", ["fig2", "fig3", "fig4", "fig5"])
    def test_deterministic(self, capsys, tmp_path, which):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        assert run(capsys, "figures", which, "--out", str(a))[0] == 0
        assert run(capsys, "figures", which, "--out", str(b))[0] == 0
        assert a.read_bytes() == b.read_bytes()
        assert (tmp_path / "a.csv.manifest.json").exists()

    def test_unknown(self):
        with pytest.raises(SystemExit) as exc:
            main(["figures", "fig9"])
        assert exc.value.code == 2


class TestEvolve:
    def test_analytic_matches_fig2(self, capsys, tmp_path):
        out = tmp_path / "ou.csv"
        code, _, _ = run(capsys, "evolve", "ou", "--engine", "analytic", "--x0-over-sigma0", "2",
                         "--times", "0.05,1,2,50", "--out", str(out))
        assert code == 0
        fig2 = rows_to_csv(fig2_rows()).splitlines()
        mine = [line for line in fig2[1:] if "x0/sigma0=2]" in line]
        assert out.read_text().splitlines()[1:] == mine
        moments = (tmp_path / "ou.moments.csv").read_text().splitlines()
        assert moments[0] == "t,mean,variance" and len(moments) == 5
        manifest = json.loads((tmp_path / "ou.csv.manifest.json").read_text())
        assert str(tmp_path / "ou.moments.csv") in manifest["output_paths"]

    def test_pde_matches_analytic(self, capsys, tmp_path):
        files = {}
        for engine in ("analytic", "pde"):
            files[engine] = tmp_path / f"{engine}.csv"
            assert run(capsys, "evolve", "ou", "--engine", engine, "--times", "0.5,1,2",
                       "--out", str(files[engine]))[0] == 0
        a = by_series(read_rows(files["analytic"].read_text()))
        b = by_series(read_rows(files["pde"].read_text()))
        w = trapezoid_weights(FIGURE_GRID.n_points, FIGURE_GRID.dx)
        for key in a:
            if key[0].startswith("density"):
                pa = np.array([v for _, v in a[key]])
                pb = np.array([v for _, v in b[key]])
                assert w @ np.abs(pa - pb) < 1e-3

    def test_ensemble_deterministic(self, capsys, tmp_path):
        paths = [tmp_path / "e1.csv", tmp_path / "e2.csv"]
        for p in paths:
            assert run(capsys, "evolve", "ou", "--engine", "ensemble", "--seed", "42", "--times", "0.5,1",
                       "--n-trajectories", "5000", "--out", str(p))[0] == 0
        assert paths[0].read_bytes() == paths[1].read_bytes()
        manifest = json.loads((tmp_path / "e1.csv.manifest.json").read_text())
        assert manifest["seed"] == 42

    def test_coherent_pde(self, capsys, tmp_path):
        out = tmp_path / "coh.csv"
        assert run(capsys, "evolve", "coherent", "--engine", "pde", "--times", "0,3.141592653589793",
                   "--out", str(out))[0] == 0
        moments = np.loadtxt(tmp_path / "coh.moments.csv", delimiter=",", skiprows=1)
        assert moments[1, 1] == pytest.approx(-2.0, rel=1e-6)
        assert moments[1, 2] == pytest.approx(1.0, rel=1e-6)

    def test_coherent_ensemble_rejected(self, capsys):
        code, _, err = run(capsys, "evolve", "coherent", "--engine", "ensemble")
        assert code == 2 and "--engine" in err

    def test_solver_failure_exit_code(self, capsys):
        code, _, err = run(capsys, "evolve", "ou", "--engine", "pde", "--times", "1", "--dt", "0.01")
        assert code == 3 and "solver" in err


def test_catalog_command(capsys):
    code, out, _ = run(capsys, "catalog", "--format", "json")
    assert code == 0
    entries = json.loads(out)
    assert [e["label"] for e in entries] == ["C60", "PFNS10", "TPPF152", "Gramicidin A"]
