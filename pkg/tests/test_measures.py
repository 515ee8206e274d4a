import numpy as np
import pytest

from copex import (
    Family,
    FamilySpec,
    Measure,
    MeasureKind,
    NoDensity,
    empirical_copula,
    make_surface,
    measure,
    resub_ccex,
    survival_surface,
    transform_surface,
    verify_cocopula_identity,
    verify_dual_identity,
    verify_prop_2_1,
    verify_transform_theorems,
)
from copex.empirical import BivariateSample
from copex.registry import closed_form, closed_forms, corrected_form, entries
from oracles import COPULA_FAMILIES, dblquad, draws, fgm_sample


def mo_kink(alpha, beta):
    # MO switches branch on v = u^(alpha/beta), i.e. u = v^(beta/alpha)
    return lambda v: v ** (beta / alpha)


class TestMeasureKind:
    def test_sections_need_an_anchor(self):
        with pytest.raises(ValueError):
            MeasureKind(Measure.HORIZONTAL)
        with pytest.raises(ValueError):
            MeasureKind(Measure.VERTICAL, 1.5)

    def test_others_refuse_an_anchor(self):
        with pytest.raises(ValueError):
            MeasureKind(Measure.CCEX, 0.5)

    def test_str(self):
        assert str(MeasureKind(Measure.HORIZONTAL, 0.4)) == "horizontal(0.4)"
        assert str(MeasureKind(Measure.CCEX)) == "ccex"


class TestRegistry:
    def test_disputed_entries_explain_themselves(self):
        for e in entries():
            assert e.source
            if e.disputed:
                assert e.note

    def test_published_before_derived(self):
        forms = closed_forms(MeasureKind(Measure.CCEX), FamilySpec(Family.PRODUCT))
        assert [f.source for f in forms] == ["Table 2", "derived"]
        assert closed_form(MeasureKind(Measure.CCEX), FamilySpec(Family.PRODUCT)).value == 1 / 16
        assert corrected_form(MeasureKind(Measure.CCEX), FamilySpec(Family.PRODUCT)).value == 1 / 36

    def test_marshall_olkin_rows_only_for_equal_parameters(self):
        kind = MeasureKind(Measure.CCEX)
        assert [f.source for f in closed_forms(kind, FamilySpec(Family.MARSHALL_OLKIN, (0.3, 0.7)))] == ["derived"]
        assert len(closed_forms(kind, FamilySpec(Family.MARSHALL_OLKIN, (0.5, 0.5)))) == 2


class TestMeasureVerdicts:
    def test_agree(self, cfg):
        rep = measure(make_surface("fgm:0.5"), Measure.CCEX, cfg)
        assert rep.verdict == "agree"
        assert rep.value == pytest.approx(0.25 * (1 / 9 + 0.5 / 72 + 0.25 / 900), abs=1e-12)

    def test_disputed_product(self, cfg):
        rep = measure(make_surface("product"), "ccex", cfg)
        assert rep.verdict == "paper_table_suspect"
        assert rep.closed_form == 1 / 16
        assert rep.corrected == pytest.approx(1 / 36)
        assert rep.value == pytest.approx(1 / 36, abs=1e-12)

    def test_cuadras_auge_versus_its_branch(self, cfg):
        genuine = measure(make_surface("cuadras-auge:0.5"), "ccex", cfg)
        branch = measure(make_surface("cuadras-auge-section:0.5"), "ccex", cfg)
        assert genuine.value == pytest.approx(1 / 30, abs=1e-10)
        assert genuine.verdict == "paper_table_suspect" and genuine.closed_form == pytest.approx(1 / 24)
        assert branch.value == pytest.approx(0.04167, abs=5e-6) and branch.verdict == "agree"

    def test_transformed_surfaces_have_no_registry_lookup(self, cfg):
        rep = measure(survival_surface(make_surface("fgm:0.5")), "ccex", cfg)
        assert rep.verdict == "no_closed_form" and rep.closed_form is None

    @pytest.mark.parametrize("m", [Measure.CEX, Measure.ENTROPY])
    def test_density_required(self, cfg, m):
        with pytest.raises(NoDensity):
            measure(make_surface("mo:0.3,0.7"), m, cfg)

    def test_string_kind(self, cfg):
        assert measure(make_surface("product"), "diagonal", cfg).value == pytest.approx(1 / 20)


class TestAgainstScipy:
    """Values checked with nested scipy.quad, which shares no code with the engine."""

    @pytest.mark.parametrize(
        "m, integrand",
        [
            (Measure.CCEX, lambda C, u, v: 0.25 * C(u, v) ** 2),
            (Measure.SCEX, lambda C, u, v: 0.25 * (u + v - 1 + C(1 - u, 1 - v)) ** 2),
            (Measure.DUAL, lambda C, u, v: 0.25 * (u + v - C(u, v)) ** 2),
            (Measure.COCOPULA, lambda C, u, v: 0.25 * (1 - C(1 - u, 1 - v)) ** 2),
            (Measure.WEIGHTED_CCEX, lambda C, u, v: 0.25 * u * C(u, v) ** 2),
            (Measure.R, lambda C, u, v: (u + v) * C(u, v)),
        ],
        ids=lambda x: getattr(x, "value", ""),
    )
    def test_marshall_olkin(self, cfg, m, integrand):
        a, b = 0.3, 0.7
        C = make_surface(FamilySpec(Family.MARSHALL_OLKIN, (a, b)))
        kink = mo_kink(a, b) if m in (Measure.CCEX, Measure.DUAL, Measure.WEIGHTED_CCEX, Measure.R) else (
            lambda v: 1 - (1 - v) ** (b / a)
        )
        ref = dblquad(lambda u, v: float(integrand(C, u, v)), kink=kink)
        assert measure(C, m, cfg).value == pytest.approx(ref, abs=1e-8)

    def test_fgm_entropy(self, cfg):
        t = 0.7
        c = lambda u, v: 1 + t * (1 - 2 * u) * (1 - 2 * v)  # noqa: E731
        ref = dblquad(lambda u, v: -c(u, v) * np.log(c(u, v)))
        assert measure(make_surface(FamilySpec(Family.FGM, (t,))), Measure.ENTROPY, cfg).value == pytest.approx(
            ref, abs=1e-10
        )

    def test_product_survival_entropy(self, cfg):
        # -int uv log(uv) = -2 (1/2)(-1/4)
        assert measure(make_surface("product"), Measure.SURVIVAL_ENTROPY, cfg).value == pytest.approx(0.25)

    @pytest.mark.parametrize("a", [0.1, 0.4, 0.8])
    def test_horizontal_section(self, cfg, a):
        from scipy.integrate import quad

        C = make_surface("mo:0.3,0.7")
        kink = (a ** (0.7 / 0.3),)
        ref = quad(lambda u: 0.25 * float(C(u, a)) ** 2, 0, 1, points=kink)[0]
        rep = measure(C, MeasureKind(Measure.HORIZONTAL, a), cfg)
        assert rep.value == pytest.approx(ref, abs=1e-10)


class TestIdentities:
    @pytest.mark.parametrize("fam", COPULA_FAMILIES, ids=lambda f: f.value)
    def test_dual_and_cocopula(self, cfg, fam):
        for spec in draws(fam, 3, seed=11):
            C = make_surface(spec)
            assert verify_dual_identity(C, cfg) <= 1e-8
            assert verify_cocopula_identity(C, cfg) <= 1e-8

    @pytest.mark.parametrize(
        "spec", [s for fam in COPULA_FAMILIES for s in draws(fam, 2, seed=3) if make_surface(s).density_available],
        ids=str,
    )
    def test_entropy_bound(self, cfg, spec):
        bound = verify_prop_2_1(make_surface(spec), cfg)
        assert bound.holds and bound.lhs >= bound.rhs

    def test_entropy_bound_requires_density(self, cfg):
        with pytest.raises(NoDensity):
            verify_prop_2_1(make_surface("ca:0.5"), cfg)


class TestTransformTheorems:
    @pytest.mark.parametrize("text", ["fgm:0.5", "mo:0.3,0.7", "iterated-fgm:0.5,-0.3", "shih-louis:-0.4"])
    def test_expected_forms(self, cfg, text):
        for row in verify_transform_theorems(text, cfg):
            assert row.residual <= 1e-8, (row.directions, row.measure)

    def test_cex_omitted_without_density(self, cfg):
        rows = verify_transform_theorems("mo:0.3,0.7", cfg)
        assert {r.measure for r in rows} == {Measure.CCEX, Measure.SCEX}
        assert len(rows) == 8

    def test_typeset_form_differs_only_for_asymmetric_copulas(self, cfg):
        sym = [r for r in verify_transform_theorems("fgm:0.5", cfg) if r.printed is not None]
        asym = [r for r in verify_transform_theorems("mo:0.3,0.7", cfg) if r.printed is not None]
        assert sym and all(r.printed_residual <= 1e-10 for r in sym)
        assert max(r.printed_residual for r in asym) > 1e-4

    @pytest.mark.parametrize("dirs", [("decreasing", "increasing"), ("increasing", "decreasing")])
    def test_simulation_oracle(self, cfg, dirs):
        # the copula of (phi(X), psi(Y)) estimated from transformed draws
        rng = np.random.default_rng(2024)
        u, v = fgm_sample(0.9, 3000, rng)
        x = -u if dirs[0] == "decreasing" else u
        y = -np.exp(v) if dirs[1] == "decreasing" else v**3
        est = resub_ccex(empirical_copula(BivariateSample(x, y)))
        target = measure(transform_surface(make_surface("fgm:0.9"), *dirs), Measure.CCEX, cfg).value
        assert est == pytest.approx(target, abs=2e-3)
