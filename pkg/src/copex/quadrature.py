"""Adaptive tensor Gauss-Legendre quadrature on [0, 1] and [0, 1]^2.

Integrands are vectorised callables: ``f(u, v)`` receives two numpy arrays of
equal shape and returns an array of that shape (a scalar is broadcast).

Non-smooth integrands are handled through *split hints*.  A hint is either an
axis-aligned :class:`Line` or a monotone :class:`PowerCurve` ``v = g(u)``
(which covers the diagonal, the anti-diagonal and Marshall-Olkin loci).  The
square is first cut into vertical strips at every point where two hints
cross, and every strip into curvilinear slabs bounded by consecutive hints.
Each slab is mapped onto a rectangle, so a tensor rule never straddles a kink.
Slabs are then refined by dyadic bisection driven by the difference between
a panel and the sum of its children.  A slab is halved along one axis when
only that axis changes the estimate, and quartered otherwise.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Iterable, Sequence

import numpy as np
from scipy.optimize import brentq

from .errors import NotConverged

Integrand2D = Callable[[np.ndarray, np.ndarray], "np.ndarray | float"]
Integrand1D = Callable[[np.ndarray], "np.ndarray | float"]


@dataclass(frozen=True)
class Line:
    """Axis-aligned line ``u = at`` (axis ``"u"``) or ``v = at`` (axis ``"v"``)."""

    axis: str
    at: float

    def __post_init__(self):
        if self.axis not in ("u", "v"):
            raise ValueError(f"axis must be 'u' or 'v', got {self.axis!r}")
        if not 0.0 <= self.at <= 1.0:
            raise ValueError(f"line position {self.at} outside [0, 1]")

    def __call__(self, u):
        if self.axis != "v":
            raise TypeError("a vertical line is not a function of u")
        return np.full_like(np.asarray(u, dtype=float), self.at)

    def flipped(self, flip_u: bool, flip_v: bool) -> "Line":
        flip = flip_u if self.axis == "u" else flip_v
        return Line(self.axis, 1.0 - self.at) if flip else self


@dataclass(frozen=True)
class PowerCurve:
    """The curve ``v = g(u)`` with ``g = R_v o (x -> x**exponent) o R_u``.

    ``R_u`` is ``u -> 1 - u`` when ``flip_u`` is set (identity otherwise) and
    likewise for ``R_v``.  ``PowerCurve(1.0)`` is the diagonal and
    ``PowerCurve(1.0, flip_v=True)`` the anti-diagonal ``u + v = 1``.
    """

    exponent: float
    flip_u: bool = False
    flip_v: bool = False

    def __post_init__(self):
        if not self.exponent > 0:
            raise ValueError("exponent must be positive")

    def __call__(self, u):
        x = np.asarray(u, dtype=float)
        if self.flip_u:
            x = 1.0 - x
        y = np.clip(x, 0.0, 1.0) ** self.exponent
        return 1.0 - y if self.flip_v else y

    def flipped(self, flip_u: bool, flip_v: bool) -> "PowerCurve":
        return PowerCurve(self.exponent, self.flip_u ^ flip_u, self.flip_v ^ flip_v)

    def swapped(self) -> "PowerCurve":
        """The same locus with the roles of u and v exchanged."""
        # v = Rv((Ru u)^k)  <=>  u = Ru((Rv v)^(1/k))
        return PowerCurve(1.0 / self.exponent, self.flip_v, self.flip_u)


DIAGONAL = PowerCurve(1.0)
ANTI_DIAGONAL = PowerCurve(1.0, flip_v=True)

SplitHint = "Line | PowerCurve"


@dataclass(frozen=True)
class QuadratureConfig:
    rule_order: int = 16
    max_depth: int = 30
    abs_tol: float = 1e-10
    rel_tol: float = 1e-9
    split_hints: tuple = ()
    max_panels: int = 20000

    def __post_init__(self):
        if self.rule_order < 2:
            raise ValueError("rule_order must be >= 2")
        if self.max_depth < 0:
            raise ValueError("max_depth must be >= 0")
        if not (self.abs_tol > 0 and self.rel_tol > 0):
            raise ValueError("tolerances must be positive")
        object.__setattr__(self, "split_hints", tuple(self.split_hints))

    def with_hints(self, hints: Iterable) -> "QuadratureConfig":
        merged = tuple(dict.fromkeys((*self.split_hints, *hints)))
        return QuadratureConfig(
            self.rule_order, self.max_depth, self.abs_tol, self.rel_tol, merged, self.max_panels
        )

    def tolerance_for(self, value: float) -> float:
        return max(self.abs_tol, self.rel_tol * abs(value))


@dataclass(frozen=True)
class IntegralResult:
    value: float
    error_estimate: float
    panels_used: int
    converged: bool


@lru_cache(maxsize=None)
def _unit_rule(n: int) -> tuple[np.ndarray, np.ndarray]:
    x, w = np.polynomial.legendre.leggauss(n)
    return 0.5 * (x + 1.0), 0.5 * w


def _eval(f, *args) -> np.ndarray:
    out = np.asarray(f(*args), dtype=float)
    if out.shape != args[0].shape:
        out = np.broadcast_to(out, args[0].shape)
    return out


# -- 2-D ---------------------------------------------------------------------


@dataclass
class _Slab:
    u0: float
    u1: float
    lo: Callable
    hi: Callable
    t0: float = 0.0
    t1: float = 1.0
    depth: int = 0

    def split(self, axis: str) -> list["_Slab"]:
        d = self.depth + 1
        if axis == "u":
            m = 0.5 * (self.u0 + self.u1)
            return [
                _Slab(self.u0, m, self.lo, self.hi, self.t0, self.t1, d),
                _Slab(m, self.u1, self.lo, self.hi, self.t0, self.t1, d),
            ]
        m = 0.5 * (self.t0 + self.t1)
        return [
            _Slab(self.u0, self.u1, self.lo, self.hi, self.t0, m, d),
            _Slab(self.u0, self.u1, self.lo, self.hi, m, self.t1, d),
        ]


_ANISO = 0.125


def _slab_value(f: Integrand2D, slab: _Slab, n: int) -> float:
    x, w = _unit_rule(n)
    du = slab.u1 - slab.u0
    dt = slab.t1 - slab.t0
    u = slab.u0 + du * x
    lo = np.asarray(slab.lo(u), dtype=float)
    width = np.asarray(slab.hi(u), dtype=float) - lo
    t = slab.t0 + dt * x
    U = np.repeat(u[:, None], n, axis=1)
    V = lo[:, None] + width[:, None] * t[None, :]
    vals = _eval(f, U, V)
    inner = vals @ w
    return float(du * dt * np.dot(w, inner * width))


def _crossings(g, h, samples: int = 513) -> list[float]:
    """Interior points of (0, 1) where two hint curves cross."""
    xs = np.linspace(0.0, 1.0, samples)
    d = np.asarray(g(xs), dtype=float) - np.asarray(h(xs), dtype=float)
    roots = [float(x) for x, y in zip(xs[1:-1], d[1:-1]) if y == 0.0]
    for i in range(samples - 1):
        if d[i] * d[i + 1] < 0:
            roots.append(
                brentq(lambda s: float(g(s) - h(s)), xs[i], xs[i + 1], xtol=1e-15, rtol=1e-15)
            )
    return roots


def _initial_slabs(hints: Sequence) -> list[_Slab]:
    floor = Line("v", 0.0)
    ceiling = Line("v", 1.0)
    curves: list = []
    cuts = {0.0, 1.0}
    for hint in hints:
        if isinstance(hint, Line) and hint.axis == "u":
            cuts.add(hint.at)
        elif isinstance(hint, Line) and hint.at in (0.0, 1.0):
            continue
        else:
            curves.append(hint)
    for i, g in enumerate(curves):
        for h in curves[i + 1:]:
            cuts.update(_crossings(g, h))
    edges = sorted(cuts)
    slabs = []
    for a, b in zip(edges[:-1], edges[1:]):
        if b - a <= 1e-15:
            continue
        mid = 0.5 * (a + b)
        inside = [c for c in curves if 0.0 < float(c(mid)) < 1.0]
        inside.sort(key=lambda c: float(c(mid)))
        bounds = [floor, *inside, ceiling]
        for lo, hi in zip(bounds[:-1], bounds[1:]):
            if float(hi(mid)) - float(lo(mid)) > 0.0:
                slabs.append(_Slab(a, b, lo, hi))
    return slabs


def _adapt(refine, leaves, cfg: QuadratureConfig) -> IntegralResult:
    """Greedy global refinement shared by the 1-D and 2-D drivers.

    ``refine(leaf, value)`` returns the children of a leaf with their values.
    Each leaf is refined once on entry so that its error estimate is the gap
    between its own value and the sum over its children.
    """
    heap: list = []
    frozen: list[tuple[int, float, float]] = []
    seq = 0
    run_value = 0.0
    run_err = 0.0
    panels = 0

    def push(leaf, leaf_value):
        nonlocal seq, run_value, run_err, panels
        kids, values = refine(leaf, leaf_value)
        value = math.fsum(values)
        err = abs(value - leaf_value)
        heapq.heappush(heap, (-err, seq, leaf, value, kids, values))
        seq += 1
        run_value += value
        run_err += err
        panels += len(kids)

    for leaf, value in leaves:
        push(leaf, value)

    # the running sums only steer refinement; the reported sums are exact
    while heap and run_err > cfg.tolerance_for(run_value):
        if panels > cfg.max_panels:
            break
        neg_err, s, leaf, v, kids, values = heapq.heappop(heap)
        if leaf.depth + 1 >= cfg.max_depth:
            frozen.append((s, v, -neg_err))
            continue
        run_value -= v
        run_err += neg_err
        panels -= len(kids)
        for kid, kv in zip(kids, values):
            push(kid, kv)

    items = sorted([(s, v, -e) for (e, s, _, v, _, _) in heap] + frozen)
    value = math.fsum(v for _, v, _ in items)
    err = math.fsum(e for _, _, e in items)
    return IntegralResult(
        value=value,
        error_estimate=err,
        panels_used=panels,
        converged=err <= cfg.tolerance_for(value),
    )


def _transpose_hint(h):
    if isinstance(h, Line):
        return Line("v" if h.axis == "u" else "u", h.at)
    return h.swapped()


def _prefers_transpose(hints) -> bool:
    steep = sum(1 for h in hints if isinstance(h, PowerCurve) and h.exponent < 1.0)
    flat = sum(1 for h in hints if isinstance(h, PowerCurve) and h.exponent > 1.0)
    return steep > flat


def integrate_square(
    f: Integrand2D, cfg: QuadratureConfig | None = None, strict: bool = True
) -> IntegralResult:
    """Integrate ``f`` over the unit square.

    Raises :class:`NotConverged` when ``strict`` and the tolerance was not met;
    otherwise the returned result carries ``converged=False``.
    """
    cfg = cfg or QuadratureConfig()
    hints = cfg.split_hints
    if _prefers_transpose(hints):
        # slab walls v = u**k with k < 1 have unbounded slope at an endpoint,
        # which the slab map turns into an endpoint singularity; as functions
        # of v the same curves are smooth enough
        g = f
        f = lambda u, v: g(v, u)  # noqa: E731
        hints = tuple(_transpose_hint(h) for h in hints)
    n = cfg.rule_order

    def refine(slab: _Slab, value: float):
        # halve along one axis when only that axis resolves anything, so that
        # singular edges are refined without splitting along them
        by_u = slab.split("u")
        by_t = slab.split("t")
        vu = [_slab_value(f, k, n) for k in by_u]
        vt = [_slab_value(f, k, n) for k in by_t]
        eu = abs(math.fsum(vu) - value)
        et = abs(math.fsum(vt) - value)
        if et <= _ANISO * eu:
            return by_u, vu
        if eu <= _ANISO * et:
            return by_t, vt
        kids = [q for half in by_u for q in half.split("t")]
        return kids, [_slab_value(f, k, n) for k in kids]

    slabs = _initial_slabs(hints)
    result = _adapt(refine, [(s, _slab_value(f, s, n)) for s in slabs], cfg)
    if strict and not result.converged:
        raise NotConverged(result)
    return result


# -- 1-D ---------------------------------------------------------------------


@dataclass
class _Segment:
    a: float
    b: float
    depth: int = 0

    def children(self) -> list["_Segment"]:
        m = 0.5 * (self.a + self.b)
        return [_Segment(self.a, m, self.depth + 1), _Segment(m, self.b, self.depth + 1)]


def _segment_value(f: Integrand1D, seg: _Segment, n: int) -> float:
    x, w = _unit_rule(n)
    h = seg.b - seg.a
    return float(h * np.dot(w, _eval(f, seg.a + h * x)))


def integrate_interval(
    f: Integrand1D,
    cfg: QuadratureConfig | None = None,
    points: Iterable[float] = (),
    strict: bool = True,
) -> IntegralResult:
    """Integrate ``f`` over [0, 1], splitting first at ``points``."""
    cfg = cfg or QuadratureConfig()
    edges = sorted({0.0, 1.0, *(float(p) for p in points if 0.0 < p < 1.0)})
    leaves = [_Segment(a, b) for a, b in zip(edges[:-1], edges[1:]) if b > a]
    n = cfg.rule_order

    def refine(seg: _Segment, value: float):
        kids = seg.children()
        return kids, [_segment_value(f, k, n) for k in kids]

    result = _adapt(refine, [(s, _segment_value(f, s, n)) for s in leaves], cfg)
    if strict and not result.converged:
        raise NotConverged(result)
    return result


def path_breakpoints(hints: Iterable, path: Callable[[float], tuple[float, float]]) -> list[float]:
    """Parameters s in (0, 1) where ``path(s) = (u, v)`` meets a hint.

    Used to split one-dimensional section integrals at the kinks of a
    two-dimensional surface.
    """
    out: list[float] = []
    for hint in hints:
        if isinstance(hint, Line):
            idx = 0 if hint.axis == "u" else 1
            g = lambda s, idx=idx, c=hint.at: path(s)[idx] - c  # noqa: E731
        else:
            g = lambda s, c=hint: path(s)[1] - float(c(path(s)[0]))  # noqa: E731
        xs = np.linspace(0.0, 1.0, 257)
        d = np.array([g(x) for x in xs])
        for i in range(len(xs) - 1):
            if d[i] == 0.0 and 0 < i:
                out.append(float(xs[i]))
            elif d[i] * d[i + 1] < 0:
                out.append(brentq(g, xs[i], xs[i + 1], xtol=1e-15, rtol=1e-15))
    return sorted(set(out))
