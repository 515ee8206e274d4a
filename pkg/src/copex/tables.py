"""Reproduction of the published tables.

Two kinds of table are covered.  Expression tables (1, 2, 3, 4, 6, 7) list
closed forms; each registry entry transcribed from one is evaluated on a small
parameter grid and compared with quadrature.  Value tables (5, 8, 9, 10) list
numbers; each cell is recomputed from its defining functional.

Tables 5, 9 and 10 were produced from ``u v^(1-alpha)``, one branch of the
Cuadras-Auge copula, used on the whole square.  Their cells are recomputed on
that surface; the value for the genuine Cuadras-Auge copula is attached.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .copulas import Family, FamilySpec, make_surface
from .dependence import blest_eta
from .measures import measure
from .quadrature import QuadratureConfig
from .registry import Measure, MeasureKind, entries

CELL_TOL = 1e-4
TABLE_IDS = tuple(range(1, 11))


@dataclass(frozen=True)
class TableCell:
    table: int
    row: str
    column: str
    surface: str
    paper: float
    computed: float
    verdict: str
    note: str = ""
    other_surface: str | None = None
    other_value: float | None = None

    @property
    def delta(self) -> float:
        return abs(self.paper - self.computed)


# -- value tables -----------------------------------------------------------------

_ALPHAS = tuple(round(0.1 * k, 1) for k in range(1, 10))
_THETAS = tuple(round(0.1 * k, 1) for k in range(1, 9))

TABLE_5 = dict(zip(_ALPHAS, (0.02976, 0.03205, 0.03472, 0.03789, 0.04167, 0.04630, 0.005208, 0.05952, 0.06944)))
TABLE_8 = dict(zip(_THETAS, (0.02813, 0.02848, 0.02884, 0.02921, 0.02958, 0.02996, 0.03034, 0.03073)))
TABLE_9 = dict(zip(_ALPHAS, (0.02908, 0.03073, 0.03281, 0.03547, 0.03889, 0.04332, 0.04916, 0.05699, 0.06782)))
TABLE_10_DIFF = dict(zip(_ALPHAS, (0.01512, 0.01653, 0.01815, 0.02003, 0.02222, 0.02480, 0.02787, 0.03157, 0.03608)))
TABLE_10_ETA = dict(zip(_ALPHAS, (0.02193, 0.02315, 0.02451, 0.02604, 0.02778, 0.02976, 0.03205, 0.03472, 0.03788)))

# cells known not to follow from their stated definition, with the reason
DISPUTED_CELLS = {
    (5, 0.7): "misplaced decimal point: 1/(12(3 - 1.4)) = 0.05208",
    **{
        (10, a): "printed row equals 1/(12(2-alpha)) - 1/(12(3-alpha)); "
        "(1/4) int (1-u) C^2 for u v^(1-alpha) is 1/(48(3-2alpha))"
        for a in _ALPHAS
    },
}


def _cell(table, row, column, surface, paper, computed, key=None, other=(None, None)) -> TableCell:
    gap = abs(paper - computed)
    note = DISPUTED_CELLS.get(key, "") if key is not None else ""
    if gap <= CELL_TOL:
        verdict = "agree"
    else:
        verdict = "disputed" if note else "disagree"
    return TableCell(table, row, column, surface, paper, computed, verdict, note, *other)


def _section_surface(alpha: float):
    return make_surface(FamilySpec(Family.CUADRAS_AUGE_SECTION, (alpha,)))


def _genuine_ca(alpha: float):
    return make_surface(FamilySpec(Family.CUADRAS_AUGE, (alpha,)))


def _table_5(cfg):
    for a, printed in TABLE_5.items():
        s = _section_surface(a)
        g = _genuine_ca(a)
        yield _cell(
            5, f"alpha={a}", "J_C", s.descriptor, printed,
            measure(s, Measure.CCEX, cfg).value, (5, a),
            (g.descriptor, measure(g, Measure.CCEX, cfg).value),
        )


def _table_8(cfg):
    for t, printed in TABLE_8.items():
        s = make_surface(FamilySpec(Family.FGM, (t,)))
        yield _cell(8, f"theta={t}", "J_Cbar", s.descriptor, printed, measure(s, Measure.SCEX, cfg).value)


def _table_9(cfg):
    for a, printed in TABLE_9.items():
        s = _section_surface(a)
        g = _genuine_ca(a)
        yield _cell(
            9, f"alpha={a}", "J_Cbar", s.descriptor, printed,
            measure(s, Measure.SCEX, cfg).value, (9, a),
            (g.descriptor, measure(g, Measure.SCEX, cfg).value),
        )


def _table_10(cfg):
    for a in _ALPHAS:
        s = _section_surface(a)
        diff = measure(s, Measure.CCEX, cfg).value - measure(s, Measure.WEIGHTED_CCEX, cfg).value
        yield _cell(10, f"alpha={a}", "J_C - J^u_C", s.descriptor, TABLE_10_DIFF[a], diff, (10, a))
    for a in _ALPHAS:
        s = _section_surface(a)
        yield _cell(
            10, f"alpha={a}", "(eta + 2)/96", s.descriptor, TABLE_10_ETA[a], (blest_eta(s, cfg) + 2) / 96
        )


# -- expression tables ------------------------------------------------------------

_PARAMETER_GRID = {
    Family.PRODUCT: [()],
    Family.FGM: [(-1.0,), (-0.5,), (0.5,), (1.0,)],
    Family.ITERATED_FGM: [(0.5, 0.5), (1.0, -1.0), (-0.5, 1.0)],
    Family.EXTENDED_FGM: [(0.5, 1.0), (1.0, 2.0), (-0.5, 3.0)],
    Family.NELSEN_POLYNOMIAL: [(0.1,), (0.25,)],
    Family.MARSHALL_OLKIN: [(0.25, 0.25), (0.5, 0.5), (0.75, 0.75)],
    Family.CUADRAS_AUGE: [(0.25,), (0.5,), (0.75,)],
    Family.CUADRAS_AUGE_SECTION: [(0.25,), (0.5,), (0.75,)],
    Family.SHIH_LOUIS: [(-0.5,), (0.5,)],
    Family.LINEAR_SPEARMAN: [(0.5,)],
}
_ANCHORS = (0.25, 0.75)
_TABLE_SOURCE = re.compile(r"^Table (\d+)\b")


def _expression_table(table: int, cfg):
    for e in entries():
        m = _TABLE_SOURCE.match(e.source)
        if not m or int(m.group(1)) != table:
            continue
        anchors = _ANCHORS if e.measure in (Measure.HORIZONTAL, Measure.VERTICAL) else (None,)
        for params in _PARAMETER_GRID[e.family]:
            spec = FamilySpec(e.family, params)
            for anchor in anchors:
                printed = e.formula(spec.params, anchor)
                if printed is None:
                    continue
                kind = MeasureKind(e.measure, anchor)
                surface = make_surface(spec)
                computed = measure(surface, kind, cfg).value
                gap = abs(printed - computed)
                if gap <= CELL_TOL:
                    verdict, note = "agree", ""
                else:
                    verdict = "disputed" if e.disputed else "disagree"
                    note = e.note
                other = (None, None)
                if e.family is Family.MARSHALL_OLKIN:
                    # the printed rows match the single branch u v^(1-alpha)
                    branch = _section_surface(params[0])
                    other = (branch.descriptor, measure(branch, kind, cfg).value)
                case = re.search(r"\((.*)\)", e.source)
                row = f"{spec} [{case.group(1)}]" if case else str(spec)
                yield TableCell(
                    table, row, str(kind), surface.descriptor, float(printed), computed, verdict, note, *other
                )


_VALUE_TABLES = {5: _table_5, 8: _table_8, 9: _table_9, 10: _table_10}


def verify_tables(ids=None, cfg: QuadratureConfig | None = None) -> list[TableCell]:
    """Recompute every reproducible cell of the requested tables, in table order."""
    ids = TABLE_IDS if ids is None else tuple(ids)
    for t in ids:
        if t not in TABLE_IDS:
            raise ValueError(f"no table {t}; tables are numbered 1 to 10")
    cfg = cfg or QuadratureConfig()
    cells: list[TableCell] = []
    for t in ids:
        producer = _VALUE_TABLES.get(t)
        cells.extend(producer(cfg) if producer else _expression_table(t, cfg))
    return cells


def summary(cells: list[TableCell]) -> dict[str, int]:
    out = {"agree": 0, "disputed": 0, "disagree": 0}
    for c in cells:
        out[c.verdict] += 1
    return out
