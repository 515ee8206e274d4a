"""Closed-form expressions for extropy functionals of specific families.

Entries come from two places.  ``source`` names the published table, example
or equation an entry was transcribed from; ``"derived"`` marks expressions
worked out here to correct or extend the published ones.  A published entry
whose value the quadrature oracle contradicts ships with ``disputed=True``
and a note saying what is wrong with it; the quadrature value is what the
library reports for such cases.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Callable

from .copulas import Family, FamilySpec


class Measure(str, Enum):
    CEX = "cex"
    CCEX = "ccex"
    SCEX = "scex"
    DUAL = "dual"
    COCOPULA = "cocopula"
    HORIZONTAL = "horizontal"
    VERTICAL = "vertical"
    DIAGONAL = "diagonal"
    WEIGHTED_CCEX = "weighted-ccex"
    R = "r"
    R_STAR = "r-star"
    ENTROPY = "entropy"
    SURVIVAL_ENTROPY = "survival-entropy"


SECTION_MEASURES = (Measure.HORIZONTAL, Measure.VERTICAL)


@dataclass(frozen=True)
class MeasureKind:
    measure: Measure
    anchor: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "measure", Measure(self.measure))
        if self.measure in SECTION_MEASURES:
            if self.anchor is None or not 0.0 <= self.anchor <= 1.0:
                raise ValueError(f"{self.measure.value} needs an anchor in [0, 1]")
            object.__setattr__(self, "anchor", float(self.anchor))
        elif self.anchor is not None:
            raise ValueError(f"{self.measure.value} takes no anchor")

    def __str__(self) -> str:
        if self.anchor is None:
            return self.measure.value
        return f"{self.measure.value}({self.anchor:g})"


@dataclass(frozen=True)
class Entry:
    measure: Measure
    family: Family
    formula: Callable[[tuple[float, ...], float | None], float | None]
    source: str
    disputed: bool = False
    note: str = ""


@dataclass(frozen=True)
class ClosedForm:
    value: float
    disputed: bool
    source: str
    note: str = ""


M, F = Measure, Family
_ENTRIES: list[Entry] = []


def _add(measure, family, source, disputed=False, note=""):
    def register(fn):
        _ENTRIES.append(Entry(measure, family, fn, source, disputed, note))
        return fn

    return register


def _equal_pair(p):
    """Marshall-Olkin table rows only define one value when alpha == beta."""
    return p[0] if p[0] == p[1] else None


# -- copula extropy -----------------------------------------------------------

_add(M.CEX, F.PRODUCT, "Table 1")(lambda p, a: 0.25)


@_add(M.CEX, F.ITERATED_FGM, "Table 1")
def _(p, a):
    al, be = p
    return 0.25 * (1 + al**2 / 9 + al * be / 18 + 4 * be**2 / 225)


_add(M.CEX, F.FGM, "Table 1 (iterated FGM with beta = 0)")(lambda p, a: 0.25 * (1 + p[0] ** 2 / 9))

_add(
    M.CEX, F.NELSEN_POLYNOMIAL, "Table 1", disputed=True,
    note="a linear term cannot appear: the density is 1 + alpha h with h integrating to 0",
)(lambda p, a: 0.25 * (1 - 8 * p[0] + 50938 / 1575 * p[0] ** 2))

_add(M.CEX, F.NELSEN_POLYNOMIAL, "derived")(lambda p, a: 0.25 * (1 + 26 * p[0] ** 2 / 25))


# -- cumulative copula extropy ------------------------------------------------

_add(
    M.CCEX, F.PRODUCT, "Table 2", disputed=True,
    note="(1/4) * integral of u^2 v^2 is 1/36",
)(lambda p, a: 1 / 16)
_add(M.CCEX, F.PRODUCT, "derived")(lambda p, a: 1 / 36)

_add(M.CCEX, F.FGM, "Example 5.4")(lambda p, a: 0.25 * (1 / 9 + p[0] / 72 + p[0] ** 2 / 900))


@_add(
    M.CCEX, F.EXTENDED_FGM, "Table 2", disputed=True,
    note="contradicts quadrature and the Example 5.1 expression for the same family",
)
def _(p, a):
    t, k = p
    return (
        1 / 36
        + t / (2 * (k + 2) ** 2 * (k + 3) ** 2)
        + t**2 / 4 * (
            k**2 / ((2 * k + 1) * (k + 1) ** 2)
            + 2 * (2 * k**2 + 6 * k + 1) / ((k + 1) * (2 * k + 1) * (2 * k + 3) ** 2)
        )
    )


@_add(M.CCEX, F.EXTENDED_FGM, "Example 5.1")
def _(p, a):
    t, k = p
    return 0.25 * (
        1 / 9
        + 8 * t * (1 / (2 + k) ** 2 - (k**2 + 4 * k + 2) / ((1 + k) ** 2 * (3 + k) ** 2))
        + t**2 * (1 / (1 + k) ** 2 - 8 * (2 * k**2 + 4 * k + 1) / ((1 + 2 * k) ** 2 * (3 + 2 * k) ** 2))
    )


@_add(
    M.CCEX, F.ITERATED_FGM, "Table 2", disputed=True,
    note="the alpha*beta coefficient is 1/1800, not 241/1800",
)
def _(p, a):
    al, be = p
    return 0.25 * (1 / 9 + al / 72 + be / 200 + al**2 / 900 + 241 * al * be / 1800 + be**2 / 11025)


@_add(M.CCEX, F.ITERATED_FGM, "derived")
def _(p, a):
    al, be = p
    return 0.25 * (1 / 9 + al / 72 + be / 200 + al**2 / 900 + al * be / 1800 + be**2 / 11025)


@_add(
    M.CCEX, F.MARSHALL_OLKIN, "Table 2", disputed=True,
    note="printed negative; the integral of a square is positive",
)
def _(p, a):
    al = _equal_pair(p)
    return None if al is None else -1 / (6 * (3 - 2 * al))


@_add(M.CCEX, F.MARSHALL_OLKIN, "derived")
def _(p, a):
    al, be = p
    if al == 0 or be == 0:
        return 1 / 36
    # split along v = u**(alpha/beta); each side is a monomial
    return (1 / 12) * (1 / (3 - 2 * al + 3 * al / be) + 1 / (3 - 2 * be + 3 * be / al))


_add(
    M.CCEX, F.CUADRAS_AUGE, "Example 3.1, Eq. 3.12", disputed=True,
    note="equals the extropy of u v^(1-alpha), not of the Cuadras-Auge copula",
)(lambda p, a: 1 / (12 * (3 - 2 * p[0])))
_add(M.CCEX, F.CUADRAS_AUGE, "derived")(lambda p, a: 1 / (12 * (3 - p[0])))

_add(M.CCEX, F.CUADRAS_AUGE_SECTION, "Example 3.1, Eq. 3.12")(lambda p, a: 1 / (12 * (3 - 2 * p[0])))
_add(
    M.CCEX, F.CUADRAS_AUGE_SECTION, "Example 5.5", disputed=True,
    note="equals (1/4) * integral of u C, not of C^2",
)(lambda p, a: 1 / (12 * (2 - p[0])))

_add(
    M.CCEX, F.NELSEN_POLYNOMIAL, "Example 5.3, Eq. 5.3*", disputed=True,
    note="coefficients do not match (1/4) * integral of C^2",
)(lambda p, a: 0.25 * (1 / 9 + 0.1389 * p[0] + 2.58 * p[0] ** 2))
_add(M.CCEX, F.NELSEN_POLYNOMIAL, "derived")(
    lambda p, a: 1 / 36 + 37 * p[0] / 3600 + 221 * p[0] ** 2 / 88200
)


def _linear_spearman_ccex(w: float) -> float:
    return (1 + 2 * w / 5 + w**2 / 10) / 36


def _shih_louis_negative(r: float) -> float:
    return (2 * r**2 + 7 * r + 20) / 720


_add(M.CCEX, F.LINEAR_SPEARMAN, "derived")(lambda p, a: _linear_spearman_ccex(p[0]))
_add(M.CCEX, F.SHIH_LOUIS, "derived")(
    lambda p, a: _linear_spearman_ccex(p[0]) if p[0] > 0 else _shih_louis_negative(p[0])
)


# -- survival copula extropy --------------------------------------------------

_add(
    M.SCEX, F.PRODUCT, "Table 6", disputed=True, note="the survival copula of uv is uv: 1/36",
)(lambda p, a: 1 / 16)
_add(M.SCEX, F.PRODUCT, "derived")(lambda p, a: 1 / 36)

_add(M.SCEX, F.FGM, "Table 6, Eq. 4.7")(lambda p, a: 0.25 * (1 / 9 + p[0] / 72 + p[0] ** 2 / 900))


def _eq_5_2(al: float) -> float:
    return (1 / 12) * (0.5 + (2 * al - 3) / ((2 - al) * (3 - al)) + 1 / (3 - 2 * al))


@_add(
    M.SCEX, F.MARSHALL_OLKIN, "Table 6", disputed=True,
    note="equals the survival extropy of u v^(1-alpha), not of the Marshall-Olkin copula",
)
def _(p, a):
    al = _equal_pair(p)
    return None if al is None else _eq_5_2(al)


_add(
    M.SCEX, F.CUADRAS_AUGE, "Example 5.2, Eq. 5.2", disputed=True,
    note="equals the survival extropy of u v^(1-alpha), not of the Cuadras-Auge copula",
)(lambda p, a: _eq_5_2(p[0]))
_add(M.SCEX, F.CUADRAS_AUGE_SECTION, "Example 5.2, Eq. 5.2")(lambda p, a: _eq_5_2(p[0]))


@_add(
    M.SCEX, F.SHIH_LOUIS, "Table 6", disputed=True,
    note="the family is radially symmetric, so its SCEx equals its CCEx",
)
def _(p, a):
    r = p[0]
    if r > 0:
        return (2 + 5 * r - 4 * r**2) / 36
    return (2 + 7 * r + 2 * r**2) / 72


@_add(
    M.SCEX, F.SHIH_LOUIS, "Table 6 (xi = 0 case)", disputed=True,
    note="xi is a step function of u + v - 1, not a constant; this case has no meaning on its own",
)
def _(p, a):
    r = p[0]
    return None if r > 0 else (4 - 22 * r - 5 * r**2) / 72


_add(M.SCEX, F.SHIH_LOUIS, "derived")(
    lambda p, a: _linear_spearman_ccex(p[0]) if p[0] > 0 else _shih_louis_negative(p[0])
)

_add(
    M.SCEX, F.LINEAR_SPEARMAN, "Example 4.2, Eq. 4.8", disputed=True,
    note="exceeds the upper bound 1/24 at alpha = 1",
)(lambda p, a: (p[0] ** 2 + p[0] + 1) / 36)
_add(M.SCEX, F.LINEAR_SPEARMAN, "derived")(lambda p, a: _linear_spearman_ccex(p[0]))


# -- dual and co-copula extropy ----------------------------------------------

_add(M.DUAL, F.PRODUCT, "Table 4")(lambda p, a: 11 / 72)


def _dual_eq_3_12(al: float, sign: float) -> float:
    return 0.25 * (7 / 6 - (12 - 5 * al) / (3 * (2 - al) * (3 - al)) + sign / (3 * (3 - 2 * al)))


@_add(
    M.DUAL, F.MARSHALL_OLKIN, "Table 4", disputed=True,
    note="sign of the last term differs from Eq. 3.12; neither matches the Marshall-Olkin copula",
)
def _(p, a):
    al = _equal_pair(p)
    return None if al is None else _dual_eq_3_12(al, -1.0)


_add(
    M.DUAL, F.CUADRAS_AUGE, "Example 3.1, Eq. 3.12", disputed=True,
    note="equals the dual extropy of u v^(1-alpha), not of the Cuadras-Auge copula",
)(lambda p, a: _dual_eq_3_12(p[0], 1.0))
_add(M.DUAL, F.CUADRAS_AUGE_SECTION, "Example 3.1, Eq. 3.12")(lambda p, a: _dual_eq_3_12(p[0], 1.0))

_add(M.COCOPULA, F.PRODUCT, "Table 7")(lambda p, a: 11 / 72)


def _table_7(al: float) -> float:
    return 0.25 * (1 - 1 / (2 - al) + 1 / (3 * (3 - 2 * al)))


@_add(
    M.COCOPULA, F.MARSHALL_OLKIN, "Table 7", disputed=True,
    note="equals the co-copula extropy of u v^(1-alpha), not of the Marshall-Olkin copula",
)
def _(p, a):
    al = _equal_pair(p)
    return None if al is None else _table_7(al)


_add(M.COCOPULA, F.CUADRAS_AUGE_SECTION, "Table 7 (Marshall-Olkin row)")(lambda p, a: _table_7(p[0]))


# -- sections -----------------------------------------------------------------

_add(M.HORIZONTAL, F.PRODUCT, "Table 3")(lambda p, a: a**2 / 12)
_add(M.VERTICAL, F.PRODUCT, "Table 3")(lambda p, a: a**2 / 12)
_add(M.DIAGONAL, F.PRODUCT, "Table 3")(lambda p, a: 1 / 20)

_add(
    M.HORIZONTAL, F.CUADRAS_AUGE, "Table 3 (first case)", disputed=True,
    note="each printed case integrates one branch over all of [0, 1]",
)(lambda p, a: a ** (2 - 2 * p[0]) / 12)
_add(
    M.VERTICAL, F.CUADRAS_AUGE, "Table 3 (first case)", disputed=True,
    note="each printed case integrates one branch over all of [0, 1]",
)(lambda p, a: a**2 / (4 * (3 - 2 * p[0])))


def _ca_section_extropy(al: float, a: float) -> float:
    # C(u, a) = u a^(1-alpha) for u <= a and u^(1-alpha) a for u >= a
    return 0.25 * (a ** (5 - 2 * al) / 3 + a**2 * (1 - a ** (3 - 2 * al)) / (3 - 2 * al))


_add(M.HORIZONTAL, F.CUADRAS_AUGE, "derived")(lambda p, a: _ca_section_extropy(p[0], a))
_add(M.VERTICAL, F.CUADRAS_AUGE, "derived")(lambda p, a: _ca_section_extropy(p[0], a))

_add(
    M.DIAGONAL, F.CUADRAS_AUGE, "Table 3", disputed=True,
    note="C(u, u) = u^(2-alpha) gives 1/(4(5-2alpha))",
)(lambda p, a: 1 / (4 * (3 - p[0])))
_add(M.DIAGONAL, F.CUADRAS_AUGE, "derived")(lambda p, a: 1 / (4 * (5 - 2 * p[0])))


# -- auxiliary functionals ----------------------------------------------------


def _eq_3_11(al: float) -> float:
    return (12 - 5 * al) / (6 * (2 - al) * (3 - al))


_add(
    M.R, F.CUADRAS_AUGE, "Example 3.1, Eq. 3.11", disputed=True,
    note="equals the functional of u v^(1-alpha), not of the Cuadras-Auge copula",
)(lambda p, a: _eq_3_11(p[0]))
_add(M.R, F.CUADRAS_AUGE_SECTION, "Example 3.1, Eq. 3.11")(lambda p, a: _eq_3_11(p[0]))
_add(M.R, F.PRODUCT, "derived")(lambda p, a: 1 / 3)
_add(M.R, F.FGM, "derived")(lambda p, a: (p[0] + 12) / 36)

_add(
    M.R_STAR, F.FGM, "Example 4.1, Eq. 4.6", disputed=True,
    note="the product copula alone contributes 12/36, so the constant is 12, not 5",
)(lambda p, a: (p[0] + 5) / 36)
_add(M.R_STAR, F.FGM, "derived")(lambda p, a: (p[0] + 12) / 36)
_add(M.R_STAR, F.PRODUCT, "derived")(lambda p, a: 1 / 3)

_add(
    M.WEIGHTED_CCEX, F.CUADRAS_AUGE_SECTION, "Example 5.5", disputed=True,
    note="(1/4) * integral of u C^2 for u v^(1-alpha) is 1/(16(3-2alpha))",
)(lambda p, a: 1 / (12 * (3 - p[0])))
_add(M.WEIGHTED_CCEX, F.CUADRAS_AUGE_SECTION, "derived")(lambda p, a: 1 / (16 * (3 - 2 * p[0])))

_add(M.ENTROPY, F.PRODUCT, "derived")(lambda p, a: 0.0)


# -- lookup -------------------------------------------------------------------


def entries() -> tuple[Entry, ...]:
    return tuple(_ENTRIES)


def closed_forms(kind: MeasureKind, spec: FamilySpec) -> list[ClosedForm]:
    """Every registered expression for ``kind`` on ``spec``, published ones first."""
    out = []
    for e in _ENTRIES:
        if e.measure is not kind.measure or e.family is not spec.family:
            continue
        value = e.formula(spec.params, kind.anchor)
        if value is not None:
            out.append(ClosedForm(float(value), e.disputed, e.source, e.note))
    out.sort(key=lambda c: c.source == "derived")
    return out


def closed_form(kind: MeasureKind, spec: FamilySpec) -> ClosedForm | None:
    """The published expression when there is one, else a derived one."""
    found = closed_forms(kind, spec)
    return found[0] if found else None


def corrected_form(kind: MeasureKind, spec: FamilySpec) -> ClosedForm | None:
    """First non-disputed expression, used to report alongside a disputed one."""
    for c in closed_forms(kind, spec):
        if not c.disputed:
            return c
    return None
