import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from copex import (
    DomainError,
    Family,
    FamilySpec,
    SpecParseError,
    cocopula_surface,
    dual_surface,
    make_surface,
    parse_spec,
    section,
    survival_surface,
    transform_surface,
)
from copex.quadrature import Line
from oracles import COPULA_FAMILIES, draws, is_copula

unit = st.floats(0.0, 1.0)
interior = st.floats(0.01, 0.99)

def _near(kink, u, v, eps=1e-4) -> bool:
    if isinstance(kink, Line):
        return abs((u if kink.axis == "u" else v) - kink.at) < eps
    return abs(v - float(kink(u))) < eps


SAMPLE_SPECS = [spec for fam in COPULA_FAMILIES for spec in draws(fam, 3, seed=7)]
ids = [str(s) for s in SAMPLE_SPECS]


class TestParseSpec:
    @pytest.mark.parametrize(
        "text, family, params",
        [
            ("product", Family.PRODUCT, ()),
            ("fgm:0.5", Family.FGM, (0.5,)),
            ("FGM:-1", Family.FGM, (-1.0,)),
            ("marshall-olkin:0.3,0.7", Family.MARSHALL_OLKIN, (0.3, 0.7)),
            ("mo:0.3,0.7", Family.MARSHALL_OLKIN, (0.3, 0.7)),
            ("cuadras_auge:0.5", Family.CUADRAS_AUGE, (0.5,)),
            ("ca:0.5", Family.CUADRAS_AUGE, (0.5,)),
            ("extended-fgm:0.5,2", Family.EXTENDED_FGM, (0.5, 2.0)),
        ],
    )
    def test_valid(self, text, family, params):
        spec = parse_spec(text)
        assert spec.family is family and spec.params == params

    @pytest.mark.parametrize(
        "text, token",
        [
            ("clayton:1", "clayton"),
            ("fgm:abc", "abc"),
            ("fgm:2", "2"),
            ("fgm", "fgm"),
            ("mo:0.5", "0.5"),
            ("nelsen-polynomial:0.3", "0.3"),
        ],
    )
    def test_invalid_reports_token(self, text, token):
        with pytest.raises(SpecParseError) as err:
            parse_spec(text)
        assert err.value.token == token

    def test_domain_error_fields(self):
        with pytest.raises(DomainError) as err:
            FamilySpec(Family.FGM, (1.5,))
        e = err.value
        assert (e.family, e.parameter, e.value) == ("fgm", "theta", 1.5)
        assert isinstance(e, ValueError)

    def test_extended_fgm_exponent_is_open_at_zero(self):
        with pytest.raises(DomainError):
            FamilySpec(Family.EXTENDED_FGM, (0.5, 0.0))

    def test_str_round_trip(self):
        spec = FamilySpec(Family.MARSHALL_OLKIN, (0.25, 0.75))
        assert parse_spec(str(spec)) == spec


@pytest.mark.parametrize("spec", SAMPLE_SPECS, ids=ids)
class TestCopulaAxioms:
    @given(t=unit)
    @settings(max_examples=30, deadline=None)
    def test_boundary_conditions(self, spec, t):
        C = make_surface(spec)
        assert C(t, 0.0) == pytest.approx(0.0, abs=1e-14)
        assert C(0.0, t) == pytest.approx(0.0, abs=1e-14)
        assert C(t, 1.0) == pytest.approx(t, abs=1e-14)
        assert C(1.0, t) == pytest.approx(t, abs=1e-14)

    def test_two_increasing(self, spec):
        assert is_copula(spec)

    @given(u=unit, v=unit)
    @settings(max_examples=30, deadline=None)
    def test_frechet_bounds(self, spec, u, v):
        c = make_surface(spec)(u, v)
        assert max(u + v - 1.0, 0.0) - 1e-14 <= c <= min(u, v) + 1e-14

    @given(u=interior, v=interior)
    @settings(max_examples=30, deadline=None)
    def test_partials_match_finite_differences(self, spec, u, v):
        C = make_surface(spec)
        h = 1e-6
        if any(_near(k, u, v) for k in C.kink_curves):
            return
        cu, cv = C.partials(u, v)
        assert cu == pytest.approx((C(u + h, v) - C(u - h, v)) / (2 * h), abs=1e-6)
        assert cv == pytest.approx((C(u, v + h) - C(u, v - h)) / (2 * h), abs=1e-6)

    @given(u=interior, v=interior)
    @settings(max_examples=30, deadline=None)
    def test_related_surfaces(self, spec, u, v):
        C = make_surface(spec)
        assert survival_surface(C)(u, v) == pytest.approx(u + v - 1 + C(1 - u, 1 - v), abs=1e-14)
        assert dual_surface(C)(u, v) == pytest.approx(u + v - C(u, v), abs=1e-14)
        assert cocopula_surface(C)(u, v) == pytest.approx(1 - C(1 - u, 1 - v), abs=1e-14)


class TestDensity:
    @pytest.mark.parametrize(
        "spec", [s for s in SAMPLE_SPECS if make_surface(s).density_available], ids=str
    )
    def test_mixed_difference(self, spec):
        C = make_surface(spec)
        h = 1e-4
        for u, v in [(0.2, 0.3), (0.5, 0.5), (0.8, 0.1), (0.65, 0.9)]:
            fd = (C(u + h, v + h) - C(u + h, v - h) - C(u - h, v + h) + C(u - h, v - h)) / (4 * h * h)
            assert C.density(u, v) == pytest.approx(fd, abs=1e-5)

    @pytest.mark.parametrize("text", ["mo:0.3,0.7", "ca:0.5", "shih-louis:0.4", "linear-spearman:0.2"])
    def test_singular_families_have_none(self, text):
        assert not make_surface(text).density_available


class TestTransforms:
    def test_increasing_pair_is_identity(self):
        C = make_surface("mo:0.3,0.7")
        assert transform_surface(C, "increasing", "increasing") is C

    def test_decreasing_pair_is_survival(self):
        C = make_surface("mo:0.3,0.7")
        t = transform_surface(C, "decreasing", "decreasing")
        s = survival_surface(C)
        grid = np.linspace(0, 1, 11)
        U, V = np.meshgrid(grid, grid)
        np.testing.assert_allclose(t(U, V), s(U, V), atol=1e-15)

    @given(u=unit, v=unit)
    @settings(max_examples=40, deadline=None)
    def test_mixed_cases(self, u, v):
        C = make_surface("mo:0.3,0.7")
        assert transform_surface(C, "decreasing", "increasing")(u, v) == pytest.approx(v - C(1 - u, v), abs=1e-14)
        assert transform_surface(C, "increasing", "decreasing")(u, v) == pytest.approx(u - C(u, 1 - v), abs=1e-14)

    def test_survival_of_survival_is_base(self):
        C = make_surface("mo:0.3,0.7")
        back = survival_surface(survival_surface(C))
        assert back(0.3, 0.6) == pytest.approx(C(0.3, 0.6), abs=1e-15)

    def test_dual_is_not_a_copula(self):
        D = dual_surface(make_surface("fgm:0.5"))
        assert not D.is_copula
        with pytest.raises(ValueError):
            survival_surface(D)

    @pytest.mark.parametrize("theta", [-1.0, 0.3, 1.0])
    def test_fgm_radially_symmetric(self, theta):
        C = make_surface(FamilySpec(Family.FGM, (theta,)))
        S = survival_surface(C)
        grid = np.linspace(0, 1, 17)
        U, V = np.meshgrid(grid, grid)
        np.testing.assert_allclose(S(U, V), C(U, V), atol=1e-15)


class TestSections:
    def test_horizontal_and_vertical(self):
        C = make_surface("mo:0.3,0.7")
        h = section(C, "horizontal", 0.4)
        v = section(C, "vertical", 0.4)
        xs = np.linspace(0, 1, 9)
        np.testing.assert_allclose(h(xs), C(xs, 0.4))
        np.testing.assert_allclose(v(xs), C(0.4, xs))

    def test_diagonal_of_cuadras_auge(self):
        d = section(make_surface("ca:0.4"), "diagonal")
        xs = np.linspace(0, 1, 9)
        np.testing.assert_allclose(d(xs), xs ** 1.6)

    def test_kink_crossing_is_a_breakpoint(self):
        # the horizontal section at a crosses the diagonal at u = a
        h = section(make_surface("ca:0.5"), "horizontal", 0.3)
        assert any(abs(b - 0.3) < 1e-12 for b in h.breakpoints)


def test_surrogate_is_flagged():
    s = make_surface("cuadras-auge-section:0.5")
    assert not s.is_copula and not s.spec.is_copula
    assert s(0.5, 1.0) == pytest.approx(0.5)
    assert s(1.0, 0.25) == pytest.approx(0.5)  # margin is not uniform
