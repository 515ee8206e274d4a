"""Rank correlations, quadrant dependence and the extropy inequalities.

Spearman's rho, Kendall's tau and Blest's eta are copula functionals, so
they are evaluated by the same quadrature engine as the extropies.  The
inequality checker evaluates both sides of every bound and reports the slack.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .copulas import CopulaSurface, survival_surface
from .measures import measure, verify_cocopula_identity, verify_dual_identity, verify_prop_2_1
from .quadrature import QuadratureConfig, integrate_square
from .registry import Measure, MeasureKind

SLACK_TOL = 1e-8
GRID_TOL = 1e-12
DEFAULT_GRID = 257


def _integral(surface: CopulaSurface, f, cfg: QuadratureConfig | None) -> float:
    cfg = (cfg or QuadratureConfig()).with_hints(surface.kink_curves)
    return integrate_square(f, cfg).value


def spearman_rho(surface: CopulaSurface, cfg: QuadratureConfig | None = None) -> float:
    """``12 * int C - 3``."""
    return 12.0 * _integral(surface, surface.cdf, cfg) - 3.0


def blest_eta(surface: CopulaSurface, cfg: QuadratureConfig | None = None) -> float:
    """``24 * int (1 - u) C - 2``."""
    return 24.0 * _integral(surface, lambda u, v: (1.0 - u) * surface(u, v), cfg) - 2.0


def _tau_density(surface, cfg) -> float:
    return 4.0 * _integral(surface, lambda u, v: surface.density(u, v) * surface(u, v), cfg) - 1.0


def _tau_derivative(surface, cfg) -> float:
    def f(u, v):
        cu, cv = surface.partials(u, v)
        return cu * cv

    return 1.0 - 4.0 * _integral(surface, f, cfg)


def kendall_tau_with_method(
    surface: CopulaSurface, cfg: QuadratureConfig | None = None, form: str = "auto"
) -> tuple[float, str]:
    """Kendall's tau together with the form used to compute it.

    ``form`` is ``"density"`` (``4 int c C - 1``), ``"derivative"``
    (``1 - 4 int C_u C_v``, valid with singular components) or ``"auto"``,
    which picks the density form whenever a density exists.
    """
    if form not in ("auto", "density", "derivative"):
        raise ValueError(f"unknown form {form!r}")
    if form == "derivative" or (form == "auto" and not surface.density_available):
        return _tau_derivative(surface, cfg), "derivative_form"
    return _tau_density(surface, cfg), "quadrature"


def kendall_tau(surface: CopulaSurface, cfg: QuadratureConfig | None = None, form: str = "auto") -> float:
    return kendall_tau_with_method(surface, cfg, form)[0]


def daniels_slack(rho: float, tau: float) -> tuple[float, float]:
    """Slack of ``-1 <= 3 tau - 2 rho`` and of ``3 tau - 2 rho <= 1``."""
    d = 3.0 * tau - 2.0 * rho
    return d + 1.0, 1.0 - d


def durbin_slack(rho: float, tau: float) -> tuple[float, float]:
    """Slack of ``1 + rho >= (1 + tau)^2 / 2`` and ``1 - rho >= (1 - tau)^2 / 2``."""
    return 1.0 + rho - 0.5 * (1.0 + tau) ** 2, 1.0 - rho - 0.5 * (1.0 - tau) ** 2


@dataclass(frozen=True)
class DependenceSummary:
    """Spearman's rho, Kendall's tau and Blest's eta of one copula.

    Construction fails when the pair (rho, tau) breaks the universal bounds
    of Daniels or Durbin by more than 1e-9.
    """

    rho: float
    tau: float
    eta: float
    method: str

    def __post_init__(self):
        worst = min(*daniels_slack(self.rho, self.tau), *durbin_slack(self.rho, self.tau))
        if worst < -1e-9:
            raise ValueError(
                f"rho={self.rho!r}, tau={self.tau!r} violate the universal rho-tau bounds by {-worst:.3e}"
            )


def dependence_summary(surface: CopulaSurface, cfg: QuadratureConfig | None = None) -> DependenceSummary:
    tau, method = kendall_tau_with_method(surface, cfg)
    return DependenceSummary(spearman_rho(surface, cfg), tau, blest_eta(surface, cfg), method)


def survival_dependence(surface: CopulaSurface, cfg: QuadratureConfig | None = None) -> DependenceSummary:
    """Rank correlations written in terms of the survival copula.

    ``rho = 12 int Cbar - 3``, ``tau = 4 int cbar (Cbar - u - v + 1) - 1`` and
    ``eta = 24 int u Cbar - 4``.  Each equals its base-copula counterpart; the
    integrals are evaluated as written so that the equality can be checked.
    Without a density tau falls back to the derivative form on ``Cbar``.
    """
    s = survival_surface(surface)
    rho = 12.0 * _integral(s, s.cdf, cfg) - 3.0
    eta = 24.0 * _integral(s, lambda u, v: u * s(u, v), cfg) - 4.0
    if s.density_available:
        tau = 4.0 * _integral(s, lambda u, v: s.density(u, v) * (s(u, v) - u - v + 1.0), cfg) - 1.0
        method = "quadrature"
    else:
        tau, method = _tau_derivative(s, cfg), "derivative_form"
    return DependenceSummary(rho, tau, eta, method)


# -- grid predicates ------------------------------------------------------------


def _grid(n: int):
    if n < 2:
        raise ValueError("grid_n must be at least 2")
    x = np.linspace(0.0, 1.0, n)
    return np.meshgrid(x, x, indexing="ij")


@dataclass(frozen=True)
class QuadrantVerdict:
    """``label`` is PQD, NQD or neither; deviations are of ``C - uv``."""

    label: str
    max_above: float
    max_below: float
    grid_size: int

    @property
    def deviation(self) -> float:
        """Largest departure from independence in the direction of ``label``."""
        if self.label == "PQD":
            return self.max_above
        if self.label == "NQD":
            return self.max_below
        return max(self.max_above, self.max_below)


def pqd_classify(surface: CopulaSurface, grid_n: int = DEFAULT_GRID) -> QuadrantVerdict:
    """PQD when ``C >= uv`` on the grid, NQD when ``C <= uv``; PQD wins ties."""
    U, V = _grid(grid_n)
    d = surface(U, V) - U * V
    above = float(max(d.max(), 0.0))
    below = float(max(-d.min(), 0.0))
    if below <= GRID_TOL:
        label = "PQD"
    elif above <= GRID_TOL:
        label = "NQD"
    else:
        label = "neither"
    return QuadrantVerdict(label, above, below, grid_n * grid_n)


@dataclass(frozen=True)
class OrderingVerdict:
    """Pointwise comparison of two surfaces on a grid.

    ``max_above`` is the largest amount by which the first surface exceeds the
    second and ``max_below`` the reverse.  ``max_violation`` is the smaller of
    the two: zero (up to rounding) when the pair is ordered.
    """

    relation: str
    max_violation: float
    grid_size: int
    max_above: float = 0.0
    max_below: float = 0.0


def concordance_compare(
    s1: CopulaSurface, s2: CopulaSurface, grid_n: int = DEFAULT_GRID
) -> OrderingVerdict:
    """Concordance order between two copulas (or two survival copulas)."""
    if (s1.kind == "survival") != (s2.kind == "survival"):
        raise ValueError("compare two base copulas or two survival copulas")
    U, V = _grid(grid_n)
    d = s1(U, V) - s2(U, V)
    above = float(max(d.max(), 0.0))
    below = float(max(-d.min(), 0.0))
    if above <= GRID_TOL and below <= GRID_TOL:
        relation = "equal"
    elif above <= GRID_TOL:
        relation = "less"
    elif below <= GRID_TOL:
        relation = "greater"
    else:
        relation = "incomparable"
    return OrderingVerdict(relation, min(above, below), grid_n * grid_n, above, below)


# -- inequality suite -----------------------------------------------------------


@dataclass(frozen=True)
class InequalityCheck:
    """``lhs <= rhs`` with ``slack = rhs - lhs``; passes when slack >= -1e-8."""

    name: str
    lhs: float
    rhs: float

    @property
    def slack(self) -> float:
        return self.rhs - self.lhs

    @property
    def passed(self) -> bool:
        return self.slack >= -SLACK_TOL


@dataclass
class InequalityReport:
    surface: str
    quadrant: str | None
    checks: list[InequalityCheck] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def failures(self) -> list[InequalityCheck]:
        return [c for c in self.checks if not c.passed]

    def add(self, name: str, lhs: float, rhs: float) -> None:
        self.checks.append(InequalityCheck(name, float(lhs), float(rhs)))


def check_inequalities(
    surface: CopulaSurface,
    cfg: QuadratureConfig | None = None,
    grid_n: int = DEFAULT_GRID,
) -> InequalityReport:
    """Evaluate every applicable bound on ``surface``.

    Bounds that rest only on ``0 <= C <= 1`` (the rho bound on CCEx and the
    eta bound on the weighted difference) are checked on any surface; the
    rest need a genuine copula.
    """
    cfg = cfg or QuadratureConfig()

    def val(m, anchor=None):
        return measure(surface, MeasureKind(m, anchor), cfg).value

    copula = surface.is_copula
    quadrant = pqd_classify(surface, grid_n).label if copula else None
    rep = InequalityReport(surface.descriptor, quadrant)

    jc = val(Measure.CCEX)
    rho = spearman_rho(surface, cfg)
    eta = blest_eta(surface, cfg)
    rep.add("J_C <= (rho + 3)/48", jc, (rho + 3) / 48)
    rep.add("J_C - J^u_C <= (eta + 2)/96", jc - val(Measure.WEIGHTED_CCEX), (eta + 2) / 96)
    if not copula:
        return rep

    js = val(Measure.SCEX)
    tau = kendall_tau(surface, cfg)
    rep.add("1/48 <= J_C", 1 / 48, jc)
    rep.add("J_C <= 1/24", jc, 1 / 24)
    rep.add("1/48 <= J_Cbar", 1 / 48, js)
    rep.add("J_Cbar <= 1/24", js, 1 / 24)
    rep.add("J_D <= 1/12", val(Measure.DIAGONAL), 1 / 12)

    if surface.density_available:
        lhs, rhs, _ = verify_prop_2_1(surface, cfg)
        rep.add("(1 - S_c)/4 <= J_c", rhs, lhs)
        rep.add("1/4 <= J_c", 0.25, lhs)

    if quadrant == "PQD":
        rep.add("PQD: 1/36 <= J_C", 1 / 36, jc)
        rep.add("PQD: 1/36 <= J_Cbar", 1 / 36, js)
    elif quadrant == "NQD":
        rep.add("NQD: J_C <= 1/36", jc, 1 / 36)
        rep.add("NQD: J_Cbar <= 1/36", js, 1 / 36)

    rep.add("-1 <= 3 tau - 2 rho", -1.0, 3 * tau - 2 * rho)
    rep.add("3 tau - 2 rho <= 1", 3 * tau - 2 * rho, 1.0)
    rep.add("(1 + tau)^2/2 <= 1 + rho", 0.5 * (1 + tau) ** 2, 1 + rho)
    rep.add("(1 - tau)^2/2 <= 1 - rho", 0.5 * (1 - tau) ** 2, 1 - rho)

    rep.add("J_C <= (3 tau + 7)/96", jc, (3 * tau + 7) / 96)
    rep.add("J_C <= (8 - (1 - tau)^2)/96", jc, (8 - (1 - tau) ** 2) / 96)
    rep.add("(3 tau + 5)/96 <= (rho + 3)/48", (3 * tau + 5) / 96, (rho + 3) / 48)
    rep.add("(rho + 3)/48 <= (3 tau + 7)/96", (rho + 3) / 48, (3 * tau + 7) / 96)
    rep.add("(rho + 3)/48 <= (8 - (1 - tau)^2)/96", (rho + 3) / 48, (8 - (1 - tau) ** 2) / 96)

    # the same bounds written with the survival copula
    sd = survival_dependence(surface, cfg)
    rep.add("J_Cbar <= (rho_bar + 3)/48", js, (sd.rho + 3) / 48)
    rep.add("J_Cbar <= (3 tau_bar + 7)/96", js, (3 * sd.tau + 7) / 96)
    rep.add("J_Cbar <= (8 - (1 - tau_bar)^2)/96", js, (8 - (1 - sd.tau) ** 2) / 96)

    rep.add("dual identity residual", verify_dual_identity(surface, cfg), 0.0)
    rep.add("co-copula identity residual", verify_cocopula_identity(surface, cfg), 0.0)
    return rep
