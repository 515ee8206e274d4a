"""Extropy functionals of copula surfaces and the identities linking them.

Every functional is evaluated by the quadrature engine.  When the surface is a
base copula and the registry knows an expression for the pair, it is evaluated
too and the two are compared.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .copulas import (
    CopulaSurface,
    FamilySpec,
    cocopula_surface,
    dual_surface,
    make_surface,
    section,
    survival_surface,
    transform_surface,
)
from .errors import NoDensity
from .quadrature import IntegralResult, QuadratureConfig, integrate_interval, integrate_square
from .registry import ClosedForm, Measure, MeasureKind, closed_form, corrected_form

AGREE_TOL = 1e-6

_SQUARED = {
    Measure.CCEX: lambda s: s,
    Measure.SCEX: survival_surface,
    Measure.DUAL: dual_surface,
    Measure.COCOPULA: cocopula_surface,
}


@dataclass(frozen=True)
class MeasureReport:
    """Quadrature value of a functional, with the registry's expression if any.

    ``verdict`` is ``agree`` when the two are within ``AGREE_TOL``,
    ``paper_table_suspect`` when a disputed expression disagrees,
    ``disagree`` when an undisputed one does (a defect), and
    ``no_closed_form`` otherwise.
    """

    kind: MeasureKind
    surface: str
    closed_form: float | None
    quadrature: IntegralResult
    discrepancy: float | None
    verdict: str
    source: str | None = None
    corrected: float | None = None
    note: str = ""

    @property
    def value(self) -> float:
        return self.quadrature.value


def _xlogx(x):
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    pos = x > 0
    out[pos] = x[pos] * np.log(x[pos])
    return out


def _require_density(surface: CopulaSurface, what: str) -> None:
    if not surface.density_available:
        raise NoDensity(f"{what} needs a density; {surface.descriptor} has none")


def _integrate(surface: CopulaSurface, kind: MeasureKind, cfg: QuadratureConfig, strict: bool):
    m = kind.measure
    if m in (Measure.HORIZONTAL, Measure.VERTICAL, Measure.DIAGONAL):
        sec = section(surface, m.value, kind.anchor)
        return integrate_interval(lambda u: 0.25 * sec(u) ** 2, cfg, sec.breakpoints, strict)

    if m in _SQUARED:
        target = _SQUARED[m](surface)
        f = lambda u, v: 0.25 * target(u, v) ** 2  # noqa: E731
    elif m is Measure.CEX:
        _require_density(surface, "copula extropy")
        target = surface
        f = lambda u, v: 0.25 * surface.density(u, v) ** 2  # noqa: E731
    elif m is Measure.ENTROPY:
        _require_density(surface, "copula entropy")
        target = surface
        f = lambda u, v: -_xlogx(surface.density(u, v))  # noqa: E731
    elif m is Measure.SURVIVAL_ENTROPY:
        target = survival_surface(surface)
        f = lambda u, v: -_xlogx(target(u, v))  # noqa: E731
    elif m is Measure.WEIGHTED_CCEX:
        target = surface
        f = lambda u, v: 0.25 * u * surface(u, v) ** 2  # noqa: E731
    elif m is Measure.R:
        target = surface
        f = lambda u, v: (u + v) * surface(u, v)  # noqa: E731
    elif m is Measure.R_STAR:
        target = survival_surface(surface)
        f = lambda u, v: (u + v) * target(u, v)  # noqa: E731
    else:  # pragma: no cover
        raise AssertionError(m)
    return integrate_square(f, cfg.with_hints(target.kink_curves), strict)


def measure(
    surface: CopulaSurface,
    kind: MeasureKind | Measure | str,
    cfg: QuadratureConfig | None = None,
    *,
    strict: bool = True,
) -> MeasureReport:
    """Evaluate ``kind`` on ``surface`` and compare with the registry.

    Raises
    ------
    NoDensity
        For copula extropy or entropy on a surface without a density.
    NotConverged
        When ``strict`` and the engine misses its tolerance.
    """
    if not isinstance(kind, MeasureKind):
        kind = MeasureKind(Measure(kind))
    cfg = cfg or QuadratureConfig()
    result = _integrate(surface, kind, cfg, strict)

    cf: ClosedForm | None = closed_form(kind, surface.spec) if surface.kind == "base" else None
    if cf is None:
        return MeasureReport(kind, surface.descriptor, None, result, None, "no_closed_form")

    gap = abs(cf.value - result.value)
    if gap <= AGREE_TOL:
        verdict = "agree"
    else:
        verdict = "paper_table_suspect" if cf.disputed else "disagree"
    corrected = None
    if cf.disputed:
        fix = corrected_form(kind, surface.spec)
        corrected = fix.value if fix is not None else None
    return MeasureReport(
        kind, surface.descriptor, cf.value, result, gap, verdict, cf.source, corrected, cf.note
    )


def _value(surface, m, cfg, anchor=None) -> float:
    return measure(surface, MeasureKind(m, anchor), cfg).value


# -- identities ---------------------------------------------------------------


class EntropyBound(NamedTuple):
    lhs: float
    rhs: float
    holds: bool


def verify_prop_2_1(surface: CopulaSurface, cfg: QuadratureConfig | None = None) -> EntropyBound:
    """Check ``J_c >= (1 - S_c) / 4``, which follows from ``x log x <= x^2 - x``."""
    _require_density(surface, "the entropy bound")
    jc = _value(surface, Measure.CEX, cfg)
    sc = _value(surface, Measure.ENTROPY, cfg)
    rhs = 0.25 * (1.0 - sc)
    return EntropyBound(jc, rhs, jc >= rhs - 1e-9)


def verify_dual_identity(surface: CopulaSurface, cfg: QuadratureConfig | None = None) -> float:
    """Residual of ``J_C = J_C* + R/2 - 7/24``."""
    jc = _value(surface, Measure.CCEX, cfg)
    jd = _value(surface, Measure.DUAL, cfg)
    r = _value(surface, Measure.R, cfg)
    return abs(jc - jd - 0.5 * r + 7 / 24)


def verify_cocopula_identity(surface: CopulaSurface, cfg: QuadratureConfig | None = None) -> float:
    """Residual of ``J_Cbar = J_Cbar* + R*/2 - 7/24``."""
    js = _value(surface, Measure.SCEX, cfg)
    jco = _value(surface, Measure.COCOPULA, cfg)
    rs = _value(surface, Measure.R_STAR, cfg)
    return abs(js - jco - 0.5 * rs + 7 / 24)


# -- monotone transformations -------------------------------------------------

DIRECTION_CASES = (
    ("increasing", "increasing"),
    ("decreasing", "decreasing"),
    ("decreasing", "increasing"),
    ("increasing", "decreasing"),
)


@dataclass(frozen=True)
class TransformCase:
    """One row of the transformation table.

    ``value`` is the functional of the transformed copula.  ``expected`` is the
    right-hand side of the transformation rule, evaluated on the untransformed
    copula.  ``printed`` evaluates the form as it is usually typeset, which
    swaps the roles of ``u`` and ``v`` in the mixed cases; it is ``None`` where
    the two forms coincide by construction.
    """

    directions: tuple[str, str]
    measure: Measure
    value: float
    expected: float
    expected_form: str
    residual: float
    printed_form: str | None = None
    printed: float | None = None

    @property
    def printed_residual(self) -> float | None:
        return None if self.printed is None else abs(self.value - self.printed)


def _quarter_square(g, hints, cfg) -> float:
    return integrate_square(lambda u, v: 0.25 * g(u, v) ** 2, cfg.with_hints(hints)).value


def _mixed_forms(base: CopulaSurface, m: Measure):
    """Both candidate integrands of a mixed case, keyed by the free coordinate."""
    if m is Measure.CCEX:
        C = base
        hints = base.kink_curves
        return hints, {
            "u": ("(1/4) int [u - C(u,v)]^2", lambda u, v: u - C(u, v)),
            "v": ("(1/4) int [v - C(u,v)]^2", lambda u, v: v - C(u, v)),
        }
    S = survival_surface(base)
    hints = tuple(k.flipped(True, False) for k in S.kink_curves) + tuple(
        k.flipped(False, True) for k in S.kink_curves
    )
    return hints, {
        "u": ("(1/4) int [u - Cbar(u,1-v)]^2", lambda u, v: u - S(u, 1.0 - v)),
        "v": ("(1/4) int [v - Cbar(1-u,v)]^2", lambda u, v: v - S(1.0 - u, v)),
    }


def verify_transform_theorems(
    spec: FamilySpec | str, cfg: QuadratureConfig | None = None
) -> list[TransformCase]:
    """Evaluate the transformation rules for CEx, CCEx and SCEx in all four cases.

    CEx rows are omitted for families without a density.
    """
    cfg = cfg or QuadratureConfig()
    base = make_surface(spec)
    measures = [Measure.CCEX, Measure.SCEX]
    if base.density_available:
        measures.insert(0, Measure.CEX)
    base_vals = {m: _value(base, m, cfg) for m in measures}
    rows: list[TransformCase] = []
    for case in DIRECTION_CASES:
        t = transform_surface(base, *case)
        for m in measures:
            value = _value(t, m, cfg)
            printed_form = printed = None
            if m is Measure.CEX or case == ("increasing", "increasing"):
                expected, form = base_vals[m], f"{m.value} of the untransformed copula"
            elif case == ("decreasing", "decreasing"):
                other = Measure.SCEX if m is Measure.CCEX else Measure.CCEX
                expected, form = base_vals[other], f"{other.value} of the untransformed copula"
            else:
                hints, forms = _mixed_forms(base, m)
                # a decreasing phi alone leaves v as the free margin: v - C(1-u, v)
                free, swapped = ("v", "u") if case[0] == "decreasing" else ("u", "v")
                form, fn = forms[free]
                printed_form, p_fn = forms[swapped]
                expected = _quarter_square(fn, hints, cfg)
                printed = _quarter_square(p_fn, hints, cfg)
            rows.append(
                TransformCase(case, m, value, expected, form, abs(value - expected), printed_form, printed)
            )
    return rows
