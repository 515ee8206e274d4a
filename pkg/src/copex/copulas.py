"""Parametric copula families and the surfaces derived from them.

Every surface is evaluated through numpy and is safe to share between
threads: nothing is mutated after construction.

Derived surfaces
----------------
A copula surface is a base family ``C`` seen through reflections of its
arguments.  With ``U' = 1 - U`` when ``flip_u`` is set (and likewise for
``V``) the surface is the copula of ``(U', V')``::

    no flip      C(u, v)
    flip both    u + v - 1 + C(1 - u, 1 - v)        (survival copula)
    flip u       v - C(1 - u, v)
    flip v       u - C(u, 1 - v)

Reflections compose by exclusive-or, so strictly monotone transforms of the
margins reduce to toggling the two flags.  The dual ``u + v - K`` and the
co-copula ``1 - K(1 - u, 1 - v)`` wrap a copula surface ``K`` and are not
copulas themselves.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable

import numpy as np

from .errors import DomainError, NoDensity, SpecParseError
from .quadrature import ANTI_DIAGONAL, DIAGONAL, Line, PowerCurve, path_breakpoints


class Family(str, Enum):
    PRODUCT = "product"
    FGM = "fgm"
    ITERATED_FGM = "iterated-fgm"
    EXTENDED_FGM = "extended-fgm"
    NELSEN_POLYNOMIAL = "nelsen-polynomial"
    MARSHALL_OLKIN = "marshall-olkin"
    CUADRAS_AUGE = "cuadras-auge"
    SHIH_LOUIS = "shih-louis"
    LINEAR_SPEARMAN = "linear-spearman"
    # u * v**(1 - alpha): the Cuadras-Auge branch for u <= v used on the whole
    # square.  Not a copula (C(1, v) != v); kept because several published
    # Cuadras-Auge tables were computed from it.
    CUADRAS_AUGE_SECTION = "cuadras-auge-section"


@dataclass(frozen=True)
class _Param:
    name: str
    lo: float
    hi: float
    lo_open: bool = False

    def admits(self, x: float) -> bool:
        if math.isnan(x):
            return False
        above = x > self.lo if self.lo_open else x >= self.lo
        return above and x <= self.hi

    def describe(self) -> str:
        left = "(" if self.lo_open else "["
        right = ")" if math.isinf(self.hi) else "]"
        return f"{left}{self.lo:g}, {self.hi:g}{right}"


_UNIT = (0.0, 1.0)
_SIGNED = (-1.0, 1.0)

PARAMETERS: dict[Family, tuple[_Param, ...]] = {
    Family.PRODUCT: (),
    Family.FGM: (_Param("theta", *_SIGNED),),
    Family.ITERATED_FGM: (_Param("alpha", *_SIGNED), _Param("beta", *_SIGNED)),
    Family.EXTENDED_FGM: (_Param("theta", *_SIGNED), _Param("p", 0.0, math.inf, lo_open=True)),
    Family.NELSEN_POLYNOMIAL: (_Param("alpha", 0.0, 0.25),),
    Family.MARSHALL_OLKIN: (_Param("alpha", *_UNIT), _Param("beta", *_UNIT)),
    Family.CUADRAS_AUGE: (_Param("alpha", *_UNIT),),
    Family.SHIH_LOUIS: (_Param("rho", *_SIGNED),),
    Family.LINEAR_SPEARMAN: (_Param("alpha", *_UNIT),),
    Family.CUADRAS_AUGE_SECTION: (_Param("alpha", *_UNIT),),
}


@dataclass(frozen=True)
class FamilySpec:
    """A named family plus its parameter vector, validated on construction."""

    family: Family
    params: tuple[float, ...] = ()

    def __post_init__(self):
        family = Family(self.family)
        object.__setattr__(self, "family", family)
        params = tuple(float(p) for p in self.params)
        object.__setattr__(self, "params", params)
        expected = PARAMETERS[family]
        if len(params) != len(expected):
            names = ", ".join(p.name for p in expected)
            legal = f"{len(expected)} parameter(s) ({names})" if expected else "no parameters"
            raise DomainError(family.value, "arity", float(len(params)), legal)
        for spec, value in zip(expected, params):
            if not spec.admits(value):
                raise DomainError(family.value, spec.name, value, spec.describe())

    def __getitem__(self, name: str) -> float:
        for spec, value in zip(PARAMETERS[self.family], self.params):
            if spec.name == name:
                return value
        raise KeyError(name)

    def __str__(self) -> str:
        if not self.params:
            return self.family.value
        return f"{self.family.value}:" + ",".join(f"{p:g}" for p in self.params)

    def replace_first(self, value: float) -> "FamilySpec":
        return FamilySpec(self.family, (value, *self.params[1:]))

    @property
    def is_copula(self) -> bool:
        return self.family is not Family.CUADRAS_AUGE_SECTION


_ALIASES = {f.value: f for f in Family}
_ALIASES.update({f.value.replace("-", "_"): f for f in Family})
_ALIASES.update({f.name.lower(): f for f in Family})
_ALIASES.update({"mo": Family.MARSHALL_OLKIN, "ca": Family.CUADRAS_AUGE})


def parse_family(name: str, text: str | None = None) -> Family:
    """Resolve a family name or alias such as ``mo`` or ``cuadras_auge``."""
    key = name.strip().lower()
    if key not in _ALIASES:
        raise SpecParseError(text if text is not None else name, name, "unknown family")
    return _ALIASES[key]


def parse_spec(text: str) -> FamilySpec:
    """Parse ``family[:p1[,p2]]``, e.g. ``fgm:0.5`` or ``marshall-olkin:0.3,0.7``."""
    raw = text.strip()
    name, _, rest = raw.partition(":")
    family = parse_family(name, text)
    params = []
    if rest.strip():
        for token in rest.split(","):
            try:
                params.append(float(token))
            except ValueError:
                raise SpecParseError(text, token, "not a number") from None
    try:
        return FamilySpec(family, tuple(params))
    except DomainError as exc:
        raise SpecParseError(text, rest or name, str(exc)) from exc


# -- base family formulas ----------------------------------------------------


@dataclass(frozen=True)
class _Formula:
    cdf: Callable
    du: Callable
    dv: Callable
    density: Callable | None
    kinks: tuple = ()


def _product() -> _Formula:
    return _Formula(
        cdf=lambda u, v: u * v,
        du=lambda u, v: v + 0.0 * u,
        dv=lambda u, v: u + 0.0 * v,
        density=lambda u, v: np.ones(np.broadcast(u, v).shape),
    )


def _separable(alpha: float, a, da, beta: float = 0.0, b=None, db=None) -> _Formula:
    """``uv + alpha a(u)a(v) + beta b(u)b(v)``: the FGM-type families."""
    b = b or (lambda x: 0.0 * x)
    db = db or (lambda x: 0.0 * x)
    return _Formula(
        cdf=lambda u, v: u * v + alpha * a(u) * a(v) + beta * b(u) * b(v),
        du=lambda u, v: v + alpha * da(u) * a(v) + beta * db(u) * b(v),
        dv=lambda u, v: u + alpha * a(u) * da(v) + beta * b(u) * db(v),
        density=lambda u, v: 1.0 + alpha * da(u) * da(v) + beta * db(u) * db(v),
    )


def _nelsen(alpha: float) -> _Formula:
    def cdf(u, v):
        return u * v * (1.0 + 2.0 * alpha * (1 - u) * (1 - v) * (1 + u + v - 2 * u * v))

    def du(u, v):
        poly = 1 - v**2 - 6 * u * v + 6 * u * v**2 - 3 * u**2 + 9 * u**2 * v - 6 * u**2 * v**2
        return v * (1.0 + 2.0 * alpha * poly)

    def density(u, v):
        poly = (
            1 - 12 * u * v + 18 * u**2 * v + 18 * u * v**2
            - 18 * u**2 * v**2 - 3 * u**2 - 3 * v**2
        )
        return 1.0 + 2.0 * alpha * poly

    return _Formula(cdf=cdf, du=du, dv=lambda u, v: du(v, u), density=density)


def _marshall_olkin(alpha: float, beta: float) -> _Formula:
    if alpha == 0.0 or beta == 0.0:
        return _product()

    def lower(u, v):
        # True where C = u**(1-alpha) v, i.e. below the locus v = u**(alpha/beta)
        return u ** (1 - alpha) * v <= u * v ** (1 - beta)

    def du(u, v):
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.where(lower(u, v), (1 - alpha) * u ** (-alpha) * v, v ** (1 - beta))

    def dv(u, v):
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.where(lower(u, v), u ** (1 - alpha), (1 - beta) * u * v ** (-beta))

    locus = DIAGONAL if alpha == beta else PowerCurve(alpha / beta)
    return _Formula(
        cdf=lambda u, v: np.minimum(u ** (1 - alpha) * v, u * v ** (1 - beta)),
        du=du,
        dv=dv,
        density=None,
        kinks=(locus,),
    )


def _mix_with_min(weight: float) -> _Formula:
    """``(1 - w) uv + w min(u, v)``: linear Spearman and Shih-Louis for rho > 0."""
    if weight == 0.0:
        return _product()
    w = weight
    return _Formula(
        cdf=lambda u, v: (1 - w) * u * v + w * np.minimum(u, v),
        du=lambda u, v: (1 - w) * v + w * (u < v),
        dv=lambda u, v: (1 - w) * u + w * (v < u),
        density=None,
        kinks=(DIAGONAL,),
    )


def _shih_louis(rho: float) -> _Formula:
    if rho >= 0.0:
        return _mix_with_min(rho)

    def xi(a):
        return (a >= 0.0).astype(float)

    # (1 + rho) uv - rho (u + v - 1) xi(u + v - 1); the printed "+ rho" is
    # not a copula for rho < 0 (C(1, 1) would be 1 + 2 rho).
    return _Formula(
        cdf=lambda u, v: (1 + rho) * u * v - rho * (u + v - 1) * xi(u + v - 1),
        du=lambda u, v: (1 + rho) * v - rho * xi(u + v - 1),
        dv=lambda u, v: (1 + rho) * u - rho * xi(u + v - 1),
        density=None,
        kinks=(ANTI_DIAGONAL,),
    )


def _cuadras_auge_section(alpha: float) -> _Formula:
    with np.errstate(divide="ignore"):
        return _Formula(
            cdf=lambda u, v: u * v ** (1 - alpha),
            du=lambda u, v: v ** (1 - alpha) + 0.0 * u,
            dv=lambda u, v: (1 - alpha) * u * v ** (-alpha),
            density=None,
        )


def _formula(spec: FamilySpec) -> _Formula:
    f, p = spec.family, spec.params
    if f is Family.PRODUCT:
        return _product()
    if f is Family.FGM:
        return _separable(p[0], lambda x: x * (1 - x), lambda x: 1 - 2 * x)
    if f is Family.ITERATED_FGM:
        return _separable(
            p[0],
            lambda x: x * (1 - x),
            lambda x: 1 - 2 * x,
            p[1],
            lambda x: x * x * (1 - x),
            lambda x: 2 * x - 3 * x * x,
        )
    if f is Family.EXTENDED_FGM:
        k = p[1]
        with np.errstate(divide="ignore", invalid="ignore"):
            return _separable(
                p[0],
                lambda x: x * (1 - x) ** k,
                lambda x: (1 - x) ** (k - 1) * (1 - (k + 1) * x),
            )
    if f is Family.NELSEN_POLYNOMIAL:
        return _nelsen(p[0])
    if f is Family.MARSHALL_OLKIN:
        return _marshall_olkin(p[0], p[1])
    if f is Family.CUADRAS_AUGE:
        return _marshall_olkin(p[0], p[0])
    if f is Family.SHIH_LOUIS:
        return _shih_louis(p[0])
    if f is Family.LINEAR_SPEARMAN:
        return _mix_with_min(p[0])
    if f is Family.CUADRAS_AUGE_SECTION:
        return _cuadras_auge_section(p[0])
    raise AssertionError(f)  # pragma: no cover


# -- surfaces ----------------------------------------------------------------

_COPULA_KINDS = ("base", "survival", "transformed")


@dataclass(frozen=True)
class CopulaSurface:
    """An evaluatable function on the unit square.

    Build it with :func:`make_surface` and the derived-surface helpers rather
    than directly.
    """

    spec: FamilySpec
    kind: str = "base"
    flip_u: bool = False
    flip_v: bool = False
    _formula: _Formula = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        if self._formula is None:
            object.__setattr__(self, "_formula", _formula(self.spec))

    # structure

    @property
    def is_copula(self) -> bool:
        return self.kind in _COPULA_KINDS and self.spec.is_copula

    @property
    def density_available(self) -> bool:
        return self.is_copula and self._formula.density is not None

    @property
    def directions(self) -> tuple[str, str]:
        return (
            "decreasing" if self.flip_u else "increasing",
            "decreasing" if self.flip_v else "increasing",
        )

    @property
    def kink_curves(self) -> tuple:
        base = tuple(k.flipped(self.flip_u, self.flip_v) for k in self._formula.kinks)
        if self.kind == "cocopula":
            return tuple(k.flipped(True, True) for k in base)
        return base

    @property
    def descriptor(self) -> str:
        if self.kind == "base":
            return str(self.spec)
        if self.kind == "transformed":
            return f"transformed[{','.join(self.directions)}]({self.spec})"
        inner = "" if not (self.flip_u or self.flip_v) else "[" + ",".join(self.directions) + "]"
        return f"{self.kind}{inner}({self.spec})"

    def _copula_view(self) -> "CopulaSurface":
        kind = "base" if not (self.flip_u or self.flip_v) else "transformed"
        return CopulaSurface(self.spec, kind, self.flip_u, self.flip_v, self._formula)

    # evaluation

    def _k(self, u, v):
        C = self._formula.cdf
        fu, fv = self.flip_u, self.flip_v
        if fu and fv:
            return u + v - 1.0 + C(1.0 - u, 1.0 - v)
        if fu:
            return v - C(1.0 - u, v)
        if fv:
            return u - C(u, 1.0 - v)
        return C(u, v)

    def _k_partials(self, u, v):
        F = self._formula
        fu, fv = self.flip_u, self.flip_v
        a = 1.0 - u if fu else u
        b = 1.0 - v if fv else v
        cu, cv = F.du(a, b), F.dv(a, b)
        # reflection of one argument turns the matching partial into 1 - partial
        # exactly when the *other* argument is not reflected, and vice versa
        ku = (1.0 - cu) if fv else cu
        kv = (1.0 - cv) if fu else cv
        return ku, kv

    def cdf(self, u, v):
        u = np.asarray(u, dtype=float)
        v = np.asarray(v, dtype=float)
        if self.kind == "dual":
            return u + v - self._k(u, v)
        if self.kind == "cocopula":
            return 1.0 - self._k(1.0 - u, 1.0 - v)
        return self._k(u, v)

    __call__ = cdf

    def partials(self, u, v) -> tuple[np.ndarray, np.ndarray]:
        """First partial derivatives (d/du, d/dv), defined off the kink curves."""
        u = np.asarray(u, dtype=float)
        v = np.asarray(v, dtype=float)
        if self.kind == "dual":
            ku, kv = self._k_partials(u, v)
            return 1.0 - ku, 1.0 - kv
        if self.kind == "cocopula":
            return self._k_partials(1.0 - u, 1.0 - v)
        return self._k_partials(u, v)

    def density(self, u, v):
        if not self.density_available:
            raise NoDensity(f"{self.descriptor} has no density on the whole unit square")
        u = np.asarray(u, dtype=float)
        v = np.asarray(v, dtype=float)
        a = 1.0 - u if self.flip_u else u
        b = 1.0 - v if self.flip_v else v
        return self._formula.density(a, b)


def make_surface(spec: FamilySpec | str) -> CopulaSurface:
    if isinstance(spec, str):
        spec = parse_spec(spec)
    return CopulaSurface(spec)


def _require_copula(surface: CopulaSurface, what: str) -> None:
    if surface.kind not in _COPULA_KINDS:
        raise ValueError(f"{what} needs a copula surface, got kind {surface.kind!r}")


def transform_surface(surface: CopulaSurface, dir_x: str, dir_y: str) -> CopulaSurface:
    """Copula of ``(phi(X), psi(Y))`` for strictly monotone ``phi`` and ``psi``."""
    _require_copula(surface, "transform_surface")
    for d in (dir_x, dir_y):
        if d not in ("increasing", "decreasing"):
            raise ValueError(f"direction must be 'increasing' or 'decreasing', got {d!r}")
    fu = surface.flip_u ^ (dir_x == "decreasing")
    fv = surface.flip_v ^ (dir_y == "decreasing")
    if (dir_x, dir_y) == ("increasing", "increasing"):
        return surface
    kind = "base" if not (fu or fv) else "transformed"
    return CopulaSurface(surface.spec, kind, fu, fv, surface._formula)


def survival_surface(surface: CopulaSurface) -> CopulaSurface:
    _require_copula(surface, "survival_surface")
    fu, fv = not surface.flip_u, not surface.flip_v
    kind = "survival" if (fu and fv) else ("base" if not (fu or fv) else "transformed")
    return CopulaSurface(surface.spec, kind, fu, fv, surface._formula)


def dual_surface(surface: CopulaSurface) -> CopulaSurface:
    _require_copula(surface, "dual_surface")
    return CopulaSurface(surface.spec, "dual", surface.flip_u, surface.flip_v, surface._formula)


def cocopula_surface(surface: CopulaSurface) -> CopulaSurface:
    _require_copula(surface, "cocopula_surface")
    return CopulaSurface(surface.spec, "cocopula", surface.flip_u, surface.flip_v, surface._formula)


# -- sections ----------------------------------------------------------------


@dataclass(frozen=True)
class SectionFn:
    kind: str
    anchor: float | None
    evaluator: Callable = field(repr=False)
    breakpoints: tuple[float, ...] = ()

    def __call__(self, u):
        return self.evaluator(np.asarray(u, dtype=float))


def section(surface: CopulaSurface, kind: str, a: float | None = None) -> SectionFn:
    """Horizontal ``u -> C(u, a)``, vertical ``u -> C(a, u)`` or diagonal ``u -> C(u, u)``."""
    if kind == "diagonal":
        return SectionFn(
            "diagonal",
            None,
            lambda u: surface.cdf(u, u),
            tuple(path_breakpoints(surface.kink_curves, lambda s: (s, s))),
        )
    if kind not in ("horizontal", "vertical"):
        raise ValueError(f"unknown section kind {kind!r}")
    if a is None or not 0.0 <= a <= 1.0:
        raise ValueError(f"{kind} section needs an anchor in [0, 1], got {a!r}")
    a = float(a)
    if kind == "horizontal":
        path = lambda s: (s, a)  # noqa: E731
        fn = lambda u: surface.cdf(u, np.full_like(u, a))  # noqa: E731
    else:
        path = lambda s: (a, s)  # noqa: E731
        fn = lambda u: surface.cdf(np.full_like(u, a), u)  # noqa: E731
    return SectionFn(kind, a, fn, tuple(path_breakpoints(surface.kink_curves, path)))
