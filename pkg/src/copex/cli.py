"""Command-line front end: ``copex measure | estimate | verify-tables | check``.

Exit codes: 0 success, 1 other library error, 2 unparseable input,
3 quadrature did not converge, 4 a table cell disagrees, 5 an inequality fails.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import os
import sys
from dataclasses import dataclass, field

import numpy as np

from .copulas import (
    PARAMETERS,
    FamilySpec,
    cocopula_surface,
    dual_surface,
    make_surface,
    parse_family,
    parse_spec,
    survival_surface,
    transform_surface,
)
from .dependence import blest_eta, check_inequalities
from .empirical import load_builtin, load_sample, summarize
from .errors import CopexError, DomainError, NotConverged, ParseError, SpecParseError, TooFewRows
from .measures import measure
from .quadrature import QuadratureConfig
from .registry import Measure, MeasureKind
from .tables import TABLE_IDS, summary, verify_tables

EXIT_OK, EXIT_ERROR, EXIT_PARSE, EXIT_NOT_CONVERGED, EXIT_TABLE, EXIT_INEQUALITY = 0, 1, 2, 3, 4, 5
DIGITS = 12


def _round(x):
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, str) or x is None:
        return x
    if isinstance(x, (int, np.integer)):
        return int(x)
    return float(f"{float(x):.{DIGITS}g}")


def _scalar_text(x) -> str:
    if x is None:
        return ""
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, float):
        return f"{x:.{DIGITS}g}"
    return str(x)


def _scalar_type(x) -> str:
    if x is None:
        return "null"
    if isinstance(x, bool):
        return "bool"
    return {int: "int", float: "float"}.get(type(x), "str")


_PARSERS = {
    "null": lambda t: None,
    "bool": lambda t: t == "true",
    "int": int,
    "float": float,
    "str": str,
}


@dataclass(frozen=True)
class OutputRecord:
    """One result of a command, flat enough for a CSV row or a JSON object.

    Numbers are rounded to 12 significant digits on construction so that
    both serialisations reproduce the record exactly.
    """

    command: str
    descriptor: str
    results: dict = field(default_factory=dict)
    provenance: tuple[str, ...] = ()
    config: str = ""

    def __post_init__(self):
        object.__setattr__(self, "results", {str(k): _round(v) for k, v in self.results.items()})
        object.__setattr__(self, "provenance", tuple(self.provenance))

    def to_dict(self) -> dict:
        return {
            "command": self.command,
            "descriptor": self.descriptor,
            "results": dict(self.results),
            "provenance": list(self.provenance),
            "config": self.config,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=False)

    @classmethod
    def from_json(cls, text: str) -> "OutputRecord":
        d = json.loads(text)
        return cls(d["command"], d["descriptor"], d["results"], tuple(d["provenance"]), d["config"])

    CSV_FIELDS = ("record", "command", "descriptor", "config", "provenance", "key", "type", "value")

    def to_csv_rows(self, index: int = 0) -> list[dict]:
        base = {
            "record": index,
            "command": self.command,
            "descriptor": self.descriptor,
            "config": self.config,
            "provenance": json.dumps(list(self.provenance)),
        }
        return [
            {**base, "key": k, "type": _scalar_type(v), "value": _scalar_text(v)}
            for k, v in self.results.items()
        ]

    @classmethod
    def from_csv_rows(cls, rows: list[dict]) -> "OutputRecord":
        first = rows[0]
        prov = tuple(json.loads(first["provenance"]))
        results = {r["key"]: _PARSERS[r["type"]](r["value"]) for r in rows}
        return cls(first["command"], first["descriptor"], results, prov, first["config"])


def read_json(text: str) -> list[OutputRecord]:
    """Parse the output of ``--json``."""
    return [OutputRecord.from_json(json.dumps(d)) for d in json.loads(text)]


def read_csv(text: str) -> list[OutputRecord]:
    """Parse the output of ``--csv``; rows are grouped by their record index."""
    groups: dict[str, list[dict]] = {}
    for row in csv.DictReader(io.StringIO(text)):
        groups.setdefault(row["record"], []).append(row)
    return [OutputRecord.from_csv_rows(rows) for rows in groups.values()]


def config_digest(cfg: QuadratureConfig) -> str:
    text = f"{cfg.rule_order}|{cfg.max_depth}|{cfg.abs_tol!r}|{cfg.rel_tol!r}|{cfg.max_panels}"
    return "gl" + hashlib.sha256(text.encode()).hexdigest()[:10]


# -- rendering ---------------------------------------------------------------------


def _emit(records: list[OutputRecord], fmt: str, out) -> None:
    if fmt == "json":
        json.dump([r.to_dict() for r in records], out, indent=2)
        out.write("\n")
    elif fmt == "csv":
        w = csv.DictWriter(out, fieldnames=OutputRecord.CSV_FIELDS, lineterminator="\n")
        w.writeheader()
        for i, r in enumerate(records):
            w.writerows(r.to_csv_rows(i))
    else:
        for r in records:
            out.write(f"{r.command}  {r.descriptor}\n")
            width = max((len(k) for k in r.results), default=0)
            for k, v in r.results.items():
                out.write(f"  {k:<{width}}  {_scalar_text(v)}\n")
            for p in r.provenance:
                out.write(f"  note: {p}\n")


# -- argument helpers ----------------------------------------------------------------


def _sweep_values(text: str) -> list[float]:
    try:
        lo, hi, step = (float(t) for t in text.split(":"))
    except ValueError:
        raise SpecParseError(text, text, "sweep must be lo:hi:step") from None
    if step <= 0 or hi < lo:
        raise SpecParseError(text, text, "sweep needs lo <= hi and a positive step")
    count = int(np.floor((hi - lo) / step + 1e-9)) + 1
    return [float(f"{lo + k * step:.12g}") for k in range(count)]


def _specs(text: str, sweep: str | None) -> list[FamilySpec]:
    """Expand ``family[:params]`` plus an optional sweep of the first parameter.

    The sweep may be inline, ``family:--sweep=lo:hi:step``, with any fixed
    parameters after a comma: ``marshall-olkin:--sweep=0:1:0.5,0.7``.  When
    sweeping, the first parameter may be omitted from the spec.
    """
    if ":--sweep=" in text:
        head, _, tail = text.partition(":--sweep=")
        sweep, _, rest = tail.partition(",")
        text = f"{head}:{rest}" if rest else head
    if sweep is None:
        return [parse_spec(text)]
    name, _, rest = text.partition(":")
    family = parse_family(name, text)
    try:
        given = [float(t) for t in rest.split(",") if t.strip()]
    except ValueError:
        raise SpecParseError(text, rest, "not a number") from None
    arity = len(PARAMETERS[family])
    if arity == 0:
        raise SpecParseError(text, name, "family has no parameter to sweep")
    fixed = given[1:] if len(given) == arity else given
    out = []
    for v in _sweep_values(sweep):
        try:
            out.append(FamilySpec(family, (v, *fixed)))
        except DomainError as exc:
            raise SpecParseError(text, f"{v:g}", str(exc)) from exc
    return out


def _config(args) -> QuadratureConfig:
    tol = args.tol
    if tol is None and os.environ.get("COPEX_QUAD_TOL"):
        try:
            tol = float(os.environ["COPEX_QUAD_TOL"])
        except ValueError:
            raise SpecParseError(os.environ["COPEX_QUAD_TOL"], "COPEX_QUAD_TOL", "not a number") from None
    return QuadratureConfig() if tol is None else QuadratureConfig(abs_tol=tol)


# -- commands --------------------------------------------------------------------------

_MEASURE_FLAGS = {
    "cex": Measure.CEX,
    "ccex": Measure.CCEX,
    "scex": Measure.SCEX,
    "dual": Measure.DUAL,
    "cocopula": Measure.COCOPULA,
    "diagonal": Measure.DIAGONAL,
    "weighted": Measure.WEIGHTED_CCEX,
    "r": Measure.R,
    "r_star": Measure.R_STAR,
    "entropy": Measure.ENTROPY,
    "survival_entropy": Measure.SURVIVAL_ENTROPY,
}


def _measure_kinds(args) -> list[MeasureKind]:
    kinds = [MeasureKind(m) for flag, m in _MEASURE_FLAGS.items() if getattr(args, flag)]
    kinds += [MeasureKind(Measure.HORIZONTAL, a) for a in args.horizontal or ()]
    kinds += [MeasureKind(Measure.VERTICAL, a) for a in args.vertical or ()]
    return kinds or [MeasureKind(Measure.CCEX)]


def _view(surface, args):
    if args.transform:
        dx, _, dy = args.transform.partition(",")
        names = {"inc": "increasing", "dec": "decreasing"}
        surface = transform_surface(surface, names.get(dx, dx), names.get(dy, dy))
    if args.view == "survival":
        return survival_surface(surface)
    if args.view == "dual":
        return dual_surface(surface)
    if args.view == "cocopula":
        return cocopula_surface(surface)
    return surface


def cmd_measure(args) -> tuple[list[OutputRecord], int]:
    cfg = _config(args)
    digest = config_digest(cfg)
    records, code = [], EXIT_OK
    for spec in _specs(args.spec, args.sweep):
        surface = _view(make_surface(spec), args)
        for kind in _measure_kinds(args):
            rep = measure(surface, kind, cfg, strict=False)
            q = rep.quadrature
            results = {
                "measure": str(kind),
                "value": q.value,
                "error_estimate": q.error_estimate,
                "panels": q.panels_used,
                "converged": q.converged,
                "closed_form": rep.closed_form,
                "discrepancy": rep.discrepancy,
                "verdict": rep.verdict,
            }
            prov = ["quadrature"]
            if rep.closed_form is not None:
                prov.append(f"closed_form: {rep.source}")
            if rep.verdict == "paper_table_suspect":
                results["corrected"] = rep.corrected
                prov.append(f"disputed: {rep.note}")
            records.append(OutputRecord("measure", surface.descriptor, results, prov, digest))
            if not q.converged:
                code = EXIT_NOT_CONVERGED
    return records, code


def cmd_estimate(args) -> tuple[list[OutputRecord], int]:
    if args.builtin:
        sample, name = load_builtin(args.builtin), f"builtin:{args.builtin}"
    elif args.path:
        sample, name = load_sample(args.path), args.path
    else:
        raise SpecParseError("", "", "give a CSV path or --builtin NAME")
    prov = (
        "population_riemann: (1/(4 n^2)) sum C^2, the Riemann sum of the population functional",
        "paper_constant: (1/(670 n^2)) sum C^2, the published constant",
    )
    return [OutputRecord("estimate", name, summarize(sample), prov, "")], EXIT_OK


def cmd_verify_tables(args) -> tuple[list[OutputRecord], int]:
    ids = TABLE_IDS if args.all or not args.tables else tuple(args.tables)
    cfg = _config(args)
    digest = config_digest(cfg)
    cells = verify_tables(ids, cfg)
    records = []
    for c in cells:
        results = {
            "table": c.table,
            "column": c.column,
            "paper": c.paper,
            "computed": c.computed,
            "delta": c.delta,
            "verdict": c.verdict,
        }
        prov = [f"computed on {c.surface}"]
        if c.other_surface is not None:
            results["other_value"] = c.other_value
            prov.append(f"other_value computed on {c.other_surface}")
        if c.note:
            prov.append(f"disputed: {c.note}")
        records.append(OutputRecord("verify-tables", c.row, results, prov, digest))
    counts = summary(cells)
    records.append(OutputRecord("verify-tables", "summary", {**counts, "cells": len(cells)}, (), digest))
    return records, EXIT_TABLE if counts["disagree"] else EXIT_OK


def cmd_check(args) -> tuple[list[OutputRecord], int]:
    cfg = _config(args)
    digest = config_digest(cfg)
    records, code = [], EXIT_OK
    for spec in _specs(args.spec, args.sweep):
        surface = make_surface(spec)
        rep = check_inequalities(surface, cfg)
        results: dict = {"passed": rep.passed, "quadrant": rep.quadrant}
        for c in rep.checks:
            results[f"{c.name} :: slack"] = c.slack
        if args.blest:
            jc = measure(surface, Measure.CCEX, cfg).value
            ju = measure(surface, Measure.WEIGHTED_CCEX, cfg).value
            eta = blest_eta(surface, cfg)
            results.update(
                {"J_C": jc, "J^u_C": ju, "J_C - J^u_C": jc - ju, "eta": eta, "(eta + 2)/96": (eta + 2) / 96}
            )
        prov = [f"failed: {c.name}" for c in rep.failures]
        records.append(OutputRecord("check", surface.descriptor, results, prov, digest))
        if not rep.passed:
            code = EXIT_INEQUALITY
    return records, code


# -- parser ------------------------------------------------------------------------------


def _add_common(p: argparse.ArgumentParser) -> None:
    fmt = p.add_mutually_exclusive_group()
    fmt.add_argument("--json", dest="fmt", action="store_const", const="json", help="emit JSON")
    fmt.add_argument("--csv", dest="fmt", action="store_const", const="csv", help="emit CSV")
    p.add_argument("--tol", type=float, default=None, help="absolute quadrature tolerance")
    p.set_defaults(fmt="text")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="copex", description="Copula extropy toolkit.")
    sub = parser.add_subparsers(dest="command", required=True)

    m = sub.add_parser("measure", help="evaluate extropy functionals of a copula")
    m.add_argument("spec", help="family[:p1[,p2]], e.g. fgm:0.5")
    m.add_argument("--sweep", help="lo:hi:step over the first parameter")
    for flag in _MEASURE_FLAGS:
        m.add_argument(f"--{flag.replace('_', '-')}", dest=flag, action="store_true")
    m.add_argument("--horizontal", type=float, action="append", metavar="A")
    m.add_argument("--vertical", type=float, action="append", metavar="A")
    m.add_argument("--view", choices=("base", "survival", "dual", "cocopula"), default="base")
    m.add_argument("--transform", metavar="DX,DY", help="inc|dec for each margin, e.g. dec,inc")
    _add_common(m)
    m.set_defaults(handler=cmd_measure)

    e = sub.add_parser("estimate", help="plug-in estimators from a bivariate sample")
    e.add_argument("path", nargs="?", help="CSV file with two numeric columns")
    e.add_argument("--builtin", choices=("surgery",))
    _add_common(e)
    e.set_defaults(handler=cmd_estimate)

    t = sub.add_parser("verify-tables", help="recompute the published tables")
    t.add_argument("tables", nargs="*", type=int, metavar="ID")
    t.add_argument("--all", action="store_true")
    _add_common(t)
    t.set_defaults(handler=cmd_verify_tables)

    c = sub.add_parser("check", help="evaluate every applicable inequality")
    c.add_argument("spec")
    c.add_argument("--sweep", help="lo:hi:step over the first parameter")
    c.add_argument("--blest", action="store_true", help="also report the weighted-CCEx pair")
    _add_common(c)
    c.set_defaults(handler=cmd_check)
    return parser


def main(argv: list[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        records, code = args.handler(args)
    except (SpecParseError, ParseError, TooFewRows, DomainError) as exc:
        print(f"copex: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except NotConverged as exc:
        print(f"copex: {exc}", file=sys.stderr)
        return EXIT_NOT_CONVERGED
    except (CopexError, ValueError, OSError) as exc:
        print(f"copex: {exc}", file=sys.stderr)
        return EXIT_ERROR
    _emit(records, args.fmt, out)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
