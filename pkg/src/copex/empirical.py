"""Empirical copulas of bivariate samples and plug-in extropy estimators."""

from __future__ import annotations

import csv
import io
import os
from dataclasses import dataclass
from importlib import resources
from typing import IO, Iterable

import numpy as np
from scipy import stats

from .errors import DegenerateSample, ParseError, TooFewRows

NORMALIZATIONS = ("population_riemann", "paper_constant")
BUILTIN = {"surgery": "aortic_mitral_ejection.csv"}


@dataclass(frozen=True)
class BivariateSample:
    """Paired observations with their rank structure.

    ``min_rank_x[k]`` is one plus the number of observations strictly below
    ``x[k]``, so ``x[k] <= x_(i)`` exactly when ``min_rank_x[k] <= i``.  Tied
    values share the smallest rank of their block.
    """

    x: np.ndarray
    y: np.ndarray

    def __post_init__(self):
        x = np.array(self.x, dtype=float)
        y = np.array(self.y, dtype=float)
        if x.ndim != 1 or x.shape != y.shape:
            raise ValueError("x and y must be one-dimensional and of equal length")
        if x.size < 2:
            raise TooFewRows(f"need at least 2 pairs, got {x.size}")
        if not (np.isfinite(x).all() and np.isfinite(y).all()):
            raise ValueError("observations must be finite")
        x.setflags(write=False)
        y.setflags(write=False)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[float, float]]) -> "BivariateSample":
        arr = np.asarray(list(pairs), dtype=float).reshape(-1, 2)
        return cls(arr[:, 0], arr[:, 1])

    @property
    def n(self) -> int:
        return int(self.x.size)

    @property
    def pairs(self) -> list[tuple[float, float]]:
        return list(zip(self.x.tolist(), self.y.tolist()))

    @property
    def order_x(self) -> np.ndarray:
        return np.sort(self.x)

    @property
    def order_y(self) -> np.ndarray:
        return np.sort(self.y)

    @property
    def min_rank_x(self) -> np.ndarray:
        return stats.rankdata(self.x, method="min").astype(np.int64)

    @property
    def min_rank_y(self) -> np.ndarray:
        return stats.rankdata(self.y, method="min").astype(np.int64)


# -- ingestion -----------------------------------------------------------------


def _is_number(text: str) -> bool:
    try:
        float(text)
    except ValueError:
        return False
    return True


def _parse_rows(rows: Iterable[list[str]]) -> BivariateSample:
    xs: list[float] = []
    ys: list[float] = []
    for line, row in enumerate(rows, start=1):
        if not row or all(not c.strip() for c in row):
            raise ParseError(line, "blank line")
        if len(row) != 2:
            raise ParseError(line, f"expected 2 columns, found {len(row)}")
        a, b = (c.strip() for c in row)
        if line == 1 and not (_is_number(a) and _is_number(b)):
            continue  # header
        if not (_is_number(a) and _is_number(b)):
            raise ParseError(line, f"non-numeric value in {a!r}, {b!r}")
        xs.append(float(a))
        ys.append(float(b))
    if len(xs) < 2:
        raise TooFewRows(f"need at least 2 data rows, got {len(xs)}")
    return BivariateSample(np.array(xs), np.array(ys))


def load_sample(source: str | os.PathLike | IO, format: str = "csv") -> BivariateSample:
    """Read two numeric columns, with an optional header row.

    ``source`` is a path or an open text or binary stream.

    Raises
    ------
    ParseError
        For a blank, short, long or non-numeric row, with its 1-based line.
    TooFewRows
        For fewer than two data rows.
    """
    if format != "csv":
        raise ValueError(f"unsupported format {format!r}")
    if isinstance(source, (str, os.PathLike)):
        with open(source, newline="", encoding="utf-8") as fh:
            return _parse_rows(csv.reader(fh))
    data = source.read()
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    return _parse_rows(csv.reader(io.StringIO(data, newline="")))


def load_builtin(name: str) -> BivariateSample:
    try:
        filename = BUILTIN[name]
    except KeyError:
        raise ValueError(f"unknown builtin sample {name!r}; choose from {sorted(BUILTIN)}") from None
    with resources.files("copex").joinpath("data").joinpath(filename).open("rb") as fh:
        return load_sample(fh)


# -- grids -----------------------------------------------------------------------


@dataclass(frozen=True)
class EmpiricalGrid:
    """Pair counts on the lattice ``(i/n, j/n)``, ``i, j = 1..n``.

    ``counts[i-1, j-1]`` is the number of pairs below (``kind="cdf"``) or
    strictly above (``kind="survival"``) the ``i``-th and ``j``-th order
    statistics.  ``values`` is ``counts / n``.
    """

    n: int
    counts: np.ndarray
    kind: str

    @property
    def values(self) -> np.ndarray:
        return self.counts / self.n

    def __getitem__(self, ij: tuple[int, int]) -> float:
        """Grid value at 1-based lattice index ``(i, j)``."""
        i, j = ij
        return float(self.counts[i - 1, j - 1]) / self.n


def _rank_histogram(sample: BivariateSample) -> np.ndarray:
    n = sample.n
    h = np.zeros((n + 1, n + 1), dtype=np.int64)
    np.add.at(h, (sample.min_rank_x, sample.min_rank_y), 1)
    return h


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a)
    a.setflags(write=False)
    return a


def empirical_copula(sample: BivariateSample) -> EmpiricalGrid:
    """Counts of pairs with ``x <= x_(i)`` and ``y <= y_(j)``."""
    c = _rank_histogram(sample).cumsum(axis=0).cumsum(axis=1)
    return EmpiricalGrid(sample.n, _frozen(c[1:, 1:]), "cdf")


def empirical_survival_copula(sample: BivariateSample) -> EmpiricalGrid:
    """Counts of pairs with ``x > x_(i)`` and ``y > y_(j)``, counted directly."""
    h = _rank_histogram(sample)
    # tail[a, b] = number of pairs with rank_x >= a and rank_y >= b
    tail = h[::-1, ::-1].cumsum(axis=0).cumsum(axis=1)[::-1, ::-1]
    n = sample.n
    s = np.zeros((n, n), dtype=np.int64)
    s[: n - 1, : n - 1] = tail[2:, 2:]  # strictly above i means rank >= i + 1
    return EmpiricalGrid(n, _frozen(s), "survival")


# -- estimators ------------------------------------------------------------------


def _resub(grid: EmpiricalGrid, normalization: str) -> float:
    if normalization == "population_riemann":
        k = 4
    elif normalization == "paper_constant":
        k = 670
    else:
        raise ValueError(f"normalization must be one of {NORMALIZATIONS}, got {normalization!r}")
    c = grid.counts.astype(np.int64)
    total = int(np.sum(c * c))  # exact: at most n^4, well inside int64 for any sane n
    return total / (k * grid.n**4)


def resub_ccex(grid: EmpiricalGrid, normalization: str = "population_riemann") -> float:
    """Plug-in CCEx: ``sum C(i/n, j/n)^2`` over ``k n^2`` with ``k`` 4 or 670.

    ``population_riemann`` (``k = 4``) is the Riemann sum of the population
    functional; ``paper_constant`` (``k = 670``) keeps the published constant.
    """
    if grid.kind != "cdf":
        raise ValueError("resub_ccex needs an empirical copula grid")
    return _resub(grid, normalization)


def resub_scex(grid: EmpiricalGrid, normalization: str = "population_riemann") -> float:
    """Plug-in SCEx; see :func:`resub_ccex`."""
    if grid.kind != "survival":
        raise ValueError("resub_scex needs an empirical survival copula grid")
    return _resub(grid, normalization)


@dataclass(frozen=True)
class PQDEvidence:
    holds: bool
    worst_cell: tuple[int, int]
    margin: float


def pqd_evidence(grid: EmpiricalGrid) -> PQDEvidence:
    """Check ``C(i/n, j/n) >= (i/n)(j/n)`` for ``1 <= i, j < n``.

    Compared in exact integer arithmetic as ``n * count >= i * j``.  The worst
    cell is the 1-based index of the smallest margin, first in row order.
    """
    if grid.kind != "cdf":
        raise ValueError("pqd_evidence needs an empirical copula grid")
    n = grid.n
    idx = np.arange(1, n, dtype=np.int64)
    gap = n * grid.counts[: n - 1, : n - 1] - np.outer(idx, idx)
    flat = int(np.argmin(gap))
    i, j = divmod(flat, n - 1)
    return PQDEvidence(bool(gap.min() >= 0), (i + 1, j + 1), float(gap.min()) / n**2)


# -- sample statistics -------------------------------------------------------------


@dataclass(frozen=True)
class SampleDependence:
    pearson_r: float
    kendall_tau_b: float
    spearman_rho: float
    kendall_tau_a: float


def _tau_a(x: np.ndarray, y: np.ndarray, chunk: int = 1024) -> float:
    n = x.size
    s = 0
    for a in range(0, n, chunk):
        dx = np.sign(x[a : a + chunk, None] - x[None, :])
        dy = np.sign(y[a : a + chunk, None] - y[None, :])
        s += int(np.sum(dx * dy))
    return s / (n * (n - 1))


def sample_dependence(sample: BivariateSample) -> SampleDependence:
    """Pearson's r, tie-adjusted Kendall tau-b, Spearman's rho and tau-a.

    Raises
    ------
    DegenerateSample
        When either margin is constant.
    """
    x, y = sample.x, sample.y
    if np.ptp(x) == 0 or np.ptp(y) == 0:
        raise DegenerateSample("a margin has zero variance")
    r = stats.pearsonr(x, y)[0]
    tau_b = stats.kendalltau(x, y, variant="b")[0]
    rho = stats.spearmanr(x, y)[0]
    clip = lambda t: float(min(1.0, max(-1.0, t)))  # noqa: E731
    return SampleDependence(clip(r), clip(tau_b), clip(rho), clip(_tau_a(x, y)))


def summarize(sample: BivariateSample) -> dict:
    """Every estimate the ``estimate`` command reports, in a flat mapping."""
    cg = empirical_copula(sample)
    sg = empirical_survival_copula(sample)
    dep = sample_dependence(sample)
    ev = pqd_evidence(cg)
    out = {"n": sample.n}
    for mode in NORMALIZATIONS:
        out[f"ccex_{mode}"] = resub_ccex(cg, mode)
        out[f"scex_{mode}"] = resub_scex(sg, mode)
    out.update(
        pearson_r=dep.pearson_r,
        kendall_tau_b=dep.kendall_tau_b,
        kendall_tau_a=dep.kendall_tau_a,
        spearman_rho=dep.spearman_rho,
        pqd_evidence=ev.holds,
        pqd_worst_cell=f"{ev.worst_cell[0]},{ev.worst_cell[1]}",
        pqd_margin=ev.margin,
    )
    return out


__all__ = [
    "BivariateSample",
    "EmpiricalGrid",
    "PQDEvidence",
    "SampleDependence",
    "empirical_copula",
    "empirical_survival_copula",
    "load_builtin",
    "load_sample",
    "pqd_evidence",
    "resub_ccex",
    "resub_scex",
    "sample_dependence",
    "summarize",
]
