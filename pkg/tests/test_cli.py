import io
import json
import time

import pytest
from hypothesis import given
from hypothesis import strategies as st

from copex import QuadratureConfig
from copex import cli
from copex.cli import OutputRecord, config_digest, main, read_csv, read_json
from copex.dependence import InequalityReport


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out=out)
    return code, out.getvalue()


def run_json(*argv):
    code, text = run(*argv, "--json")
    return code, read_json(text) if text else []


class TestOutputRecord:
    def test_rounds_to_twelve_digits(self):
        r = OutputRecord("measure", "fgm:0.5", {"v": 1 / 3, "n": 3, "ok": True, "s": "x", "none": None})
        assert r.results["v"] == 0.333333333333
        assert r.results["n"] == 3 and r.results["ok"] is True

    scalars = st.one_of(
        st.floats(allow_nan=False, allow_infinity=False),
        st.integers(-(10**9), 10**9),
        st.booleans(),
        st.none(),
        st.text(max_size=8),
    )

    @given(
        results=st.dictionaries(st.text(min_size=1, max_size=6), scalars, max_size=6),
        prov=st.lists(st.text(max_size=10), max_size=3),
    )
    def test_round_trips(self, results, prov):
        r = OutputRecord("check", "fgm:0.5", results, tuple(prov), "gl123")
        assert OutputRecord.from_json(r.to_json()) == r
        if results:
            assert OutputRecord.from_csv_rows(r.to_csv_rows()) == r

    def test_digest_tracks_config(self):
        assert config_digest(QuadratureConfig()) == config_digest(QuadratureConfig())
        assert config_digest(QuadratureConfig()) != config_digest(QuadratureConfig(abs_tol=1e-8))


class TestMeasure:
    def test_radial_symmetry(self):
        code, recs = run_json("measure", "fgm:0.5", "--ccex", "--scex")
        assert code == 0 and len(recs) == 2
        assert [r.results["measure"] for r in recs] == ["ccex", "scex"]
        assert abs(recs[0].results["value"] - recs[1].results["value"]) <= 1e-10

    def test_product_cex(self):
        code, [rec] = run_json("measure", "product", "--cex")
        assert code == 0 and rec.results["value"] == 0.25

    def test_cuadras_auge_ccex(self):
        # 0.04167 is the value of the branch u v^(1-alpha); the copula itself gives 1/30
        _, [branch] = run_json("measure", "cuadras-auge-section:0.5", "--ccex")
        _, [genuine] = run_json("measure", "cuadras-auge:0.5", "--ccex")
        assert branch.results["value"] == pytest.approx(0.04167, abs=5e-6)
        assert genuine.results["value"] == pytest.approx(1 / 30, abs=1e-10)
        assert genuine.results["verdict"] == "paper_table_suspect"
        assert genuine.results["closed_form"] == pytest.approx(0.04167, abs=5e-6)
        assert any(p.startswith("disputed") for p in genuine.provenance)

    def test_sweep_forms_agree(self):
        _, a = run_json("measure", "fgm:--sweep=-1:1:0.25")
        _, b = run_json("measure", "fgm", "--sweep=-1:1:0.25")
        _, c = run_json("measure", "fgm:0", "--sweep=-1:1:0.25")
        assert len(a) == 9 and a == b == c
        assert [r.descriptor for r in a][:2] == ["fgm:-1", "fgm:-0.75"]

    def test_sweep_with_fixed_second_parameter(self):
        _, recs = run_json("measure", "mo:--sweep=0.25:0.75:0.25,0.7")
        assert [r.descriptor for r in recs] == ["marshall-olkin:0.25,0.7", "marshall-olkin:0.5,0.7", "marshall-olkin:0.75,0.7"]

    def test_views_and_sections(self):
        _, [rec] = run_json("measure", "mo:0.3,0.7", "--view", "survival", "--horizontal", "0.4")
        assert rec.descriptor.startswith("survival") and rec.results["measure"] == "horizontal(0.4)"
        _, [rec] = run_json("measure", "fgm:0.5", "--transform", "dec,inc")
        assert rec.descriptor.startswith("transformed[decreasing,increasing]")

    @pytest.mark.parametrize("spec", ["clayton:1", "fgm:2", "fgm:x", "fgm", "product:--sweep=0:1:0.5", "fgm:--sweep=1:0:1"])
    def test_parse_failures_exit_2(self, spec, capsys):
        code, _ = run("measure", spec)
        assert code == 2
        assert "copex:" in capsys.readouterr().err

    def test_no_density_exit_1(self):
        assert run("measure", "mo:0.3,0.7", "--cex")[0] == 1

    def test_not_converged_exit_3(self, monkeypatch):
        tight = QuadratureConfig(abs_tol=1e-300, rel_tol=1e-300, max_panels=1)
        monkeypatch.setattr(cli, "_config", lambda args: tight)
        code, recs = run_json("measure", "mo:0.3,0.7")
        assert code == 3 and recs[0].results["converged"] is False

    def test_environment_tolerance(self, monkeypatch):
        monkeypatch.setenv("COPEX_QUAD_TOL", "1e-6")
        _, [loose] = run_json("measure", "fgm:0.5")
        monkeypatch.delenv("COPEX_QUAD_TOL")
        _, [default] = run_json("measure", "fgm:0.5")
        assert loose.config == config_digest(QuadratureConfig(abs_tol=1e-6)) != default.config
        monkeypatch.setenv("COPEX_QUAD_TOL", "tight")
        assert run("measure", "fgm:0.5")[0] == 2

    def test_csv_matches_json(self):
        _, text = run("measure", "fgm:0.5", "--ccex", "--scex", "--csv")
        _, recs = run_json("measure", "fgm:0.5", "--ccex", "--scex")
        assert read_csv(text) == recs

    def test_text_output(self):
        code, text = run("measure", "fgm:0.5")
        assert code == 0 and "fgm:0.5" in text and "verdict" in text


class TestEstimate:
    def test_builtin(self):
        code, [rec] = run_json("estimate", "--builtin", "surgery")
        r = rec.results
        assert code == 0 and r["n"] == 20 and r["pqd_evidence"] is True
        for key in ("ccex_population_riemann", "ccex_paper_constant", "scex_population_riemann", "scex_paper_constant",
                    "pearson_r", "kendall_tau_b", "spearman_rho"):
            assert key in r
        assert len(rec.provenance) == 2

    def test_tiny_file(self, tmp_path):
        p = tmp_path / "tiny.csv"
        p.write_text("x,y\n0.1,0.3\n0.4,0.2\n")
        code, [rec] = run_json("estimate", str(p))
        assert code == 0 and rec.results["n"] == 2

    @pytest.mark.parametrize("body", ["x,y\n1,2\n", "1,2\n3\n", "1,2\n\n3,4\n"])
    def test_bad_files_exit_2(self, tmp_path, body):
        p = tmp_path / "bad.csv"
        p.write_text(body)
        assert run("estimate", str(p))[0] == 2

    def test_missing_source(self):
        assert run("estimate")[0] == 2

    def test_missing_file(self, tmp_path):
        assert run("estimate", str(tmp_path / "nope.csv"))[0] == 1


class TestVerifyTables:
    def test_table_8(self):
        code, recs = run_json("verify-tables", "8")
        cells, summary = recs[:-1], recs[-1]
        assert code == 0 and len(cells) == 8
        assert all(c.results["verdict"] == "agree" for c in cells)
        assert summary.descriptor == "summary" and summary.results["agree"] == 8

    def test_table_5_typo(self):
        _, recs = run_json("verify-tables", "5")
        c = next(r for r in recs if r.descriptor == "alpha=0.7")
        assert c.results["verdict"] == "disputed"
        assert c.results["computed"] == pytest.approx(0.05208, abs=5e-6)

    def test_all_under_a_minute(self):
        start = time.perf_counter()
        code, recs = run_json("verify-tables", "--all")
        assert code == 0 and recs[-1].results["disagree"] == 0
        assert time.perf_counter() - start < 60

    def test_regression_exit_4(self, monkeypatch):
        from copex import tables

        monkeypatch.setitem(tables.TABLE_8, 0.1, 0.5)
        assert run("verify-tables", "8")[0] == 4


class TestCheck:
    def test_fgm_sweep(self):
        code, recs = run_json("check", "fgm:--sweep=-1:1:0.25")
        assert code == 0 and len(recs) == 9 and all(r.results["passed"] for r in recs)

    def test_shih_louis_negative(self):
        code, [rec] = run_json("check", "shih-louis:-0.5")
        assert code == 0 and rec.results["quadrant"] == "NQD"
        assert any(k.startswith("NQD") for k in rec.results)

    def test_blest_pair(self):
        code, [rec] = run_json("check", "cuadras-auge-section:0.5", "--blest")
        r = rec.results
        assert code == 0
        assert r["(eta + 2)/96"] == pytest.approx(0.02778, abs=5e-6)
        assert r["J_C - J^u_C"] == pytest.approx(1 / 96, abs=1e-10)

    def test_violation_exit_5(self, monkeypatch):
        def broken(surface, cfg=None):
            rep = InequalityReport(surface.descriptor, "PQD")
            rep.add("1 <= 0", 1.0, 0.0)
            return rep

        monkeypatch.setattr(cli, "check_inequalities", broken)
        code, [rec] = run_json("check", "fgm:0.5")
        assert code == 5 and rec.results["passed"] is False
        assert rec.provenance == ("failed: 1 <= 0",)

    def test_not_converged_exit_3(self, monkeypatch):
        tight = QuadratureConfig(abs_tol=1e-300, rel_tol=1e-300, max_panels=1)
        monkeypatch.setattr(cli, "_config", lambda args: tight)
        assert run("check", "mo:0.3,0.7")[0] == 3


def test_json_is_valid_json():
    _, text = run("check", "product", "--json")
    assert json.loads(text)[0]["command"] == "check"
