"""Web engine for circular 3-webs with a rational polar curve.

The trivariate web function W(u1,u2,u3) vanishes exactly when the plane
through the three curve points Gamma(u_i) is tangent to the unit sphere,
i.e. when the three parameters are first integrals of web circles through
a common point.  Built on top of it: root solving and classification of
plane points, the third-order hexagonality residual, Thomsen
hexagon-closure traversal, batch certification, and the Moebius
invariants separating the twisted-cubic orbits.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

import numpy as np
from numpy.polynomial import polynomial as npoly

from .minkgeom import (
    HomPoint,
    ImaginaryCircle,
    PlanarCircle,
    PlanarPoint,
    circle_from_polar,
    pair,
    stereo_lift,
)
from .polycurve import (
    INFINITY,
    CurveFamily,
    Poly1,
    RationalCurve,
    curve_tangent,
    eval_curve,
    family_curve,
    tangency_poly,
)


class WebError(Exception):
    """Base class for web-engine failures."""


class NoSheet(WebError):
    """No real solution u3 of W(u1,u2,u3)=0."""


class FoldPoint(WebError):
    """dW/du3 vanishes on every available sheet: implicit function fails."""


class SheetJump(WebError):
    """An implicit solve left the sheet it was continuing."""


class NoConvergence(WebError):
    """Implicit solve did not converge."""


class InsufficientSamples(WebError):
    """Fewer than half of the requested certification samples were usable."""


class DegenerateConfig(WebError):
    """A pairing in an invariant denominator is numerically zero."""


def _conv3(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Direct 3-D polynomial-coefficient convolution (exact, no FFT)."""
    out = np.zeros(tuple(sa + sb - 1 for sa, sb in zip(a.shape, b.shape)))
    for idx in np.ndindex(a.shape):
        v = a[idx]
        if v != 0.0:
            out[idx[0]: idx[0] + b.shape[0],
                idx[1]: idx[1] + b.shape[1],
                idx[2]: idx[2] + b.shape[2]] += v * b
    return out


def _outer3(a: np.ndarray, b: np.ndarray, c: np.ndarray) -> np.ndarray:
    return np.multiply.outer(np.multiply.outer(a, b), c)


_PERMS = (
    (1.0, (0, 1, 2)), (-1.0, (0, 2, 1)), (-1.0, (1, 0, 2)),
    (1.0, (1, 2, 0)), (1.0, (2, 0, 1)), (-1.0, (2, 1, 0)),
)


def _symmetrize(c: np.ndarray) -> np.ndarray:
    """Make the tensor exactly invariant under axis permutations."""
    out = np.empty_like(c)
    n = c.shape[0]
    for i in range(n):
        for j in range(i, n):
            for k in range(j, n):
                idx = (i, j, k)
                perms = {(idx[p[0]], idx[p[1]], idx[p[2]])
                         for p in [(0, 1, 2), (0, 2, 1), (1, 0, 2),
                                   (1, 2, 0), (2, 0, 1), (2, 1, 0)]}
                v = sum(c[q] for q in sorted(perms)) / len(perms)
                for q in perms:
                    out[q] = v
    return out


class WebFunction:
    """Dense coefficient tensor of W(u1,u2,u3), normalized to max |coeff| 1."""

    def __init__(self, coef: np.ndarray):
        coef = np.asarray(coef, dtype=float)
        if coef.ndim != 3:
            raise WebError("web function tensor must be 3-dimensional")
        m = float(np.max(np.abs(coef)))
        if m == 0.0:
            raise WebError("zero web function")
        c = coef / m
        c.flags.writeable = False
        self.coef = c
        self._dcache: dict[tuple[int, int, int], np.ndarray] = {(0, 0, 0): c}
        self._abs = np.abs(c)

    @property
    def degree(self) -> int:
        """Common per-variable degree bound."""
        return self.coef.shape[0] - 1

    def partial_tensor(self, orders: tuple[int, int, int]) -> np.ndarray:
        if orders not in self._dcache:
            c = self.coef
            for axis, k in enumerate(orders):
                if k:
                    c = npoly.polyder(c, k, axis=axis)
            self._dcache[orders] = c
        return self._dcache[orders]

    def value(self, u1: float, u2: float, u3: float,
              orders: tuple[int, int, int] = (0, 0, 0)) -> float:
        return float(npoly.polyval3d(u1, u2, u3, self.partial_tensor(orders)))

    def magnitude(self, u1: float, u2: float, u3: float,
                  orders: tuple[int, int, int] = (0, 0, 0)) -> float:
        """Sum of absolute monomial contributions of a partial derivative;
        the natural scale of that derivative near (u1,u2,u3)."""
        t = self._abs if orders == (0, 0, 0) else np.abs(self.partial_tensor(orders))
        return float(npoly.polyval3d(abs(u1), abs(u2), abs(u3), t))

    def slice_poly(self, axis: int, fixed: tuple[float, float]) -> Poly1:
        """Univariate polynomial in the variable on `axis`, the other two
        variables fixed (in increasing axis order)."""
        n = self.coef.shape[0]
        others = [a for a in range(3) if a != axis]
        p0 = np.power(fixed[0], np.arange(n))
        p1 = np.power(fixed[1], np.arange(n))
        letters = ["i", "j", "k"]
        spec = "ijk,{},{}->{}".format(letters[others[0]], letters[others[1]],
                                      letters[axis])
        return Poly1(tuple(np.einsum(spec, self.coef, p0, p1)))

    def gradient(self, u1: float, u2: float, u3: float) -> np.ndarray:
        return np.array([
            self.value(u1, u2, u3, (1, 0, 0)),
            self.value(u1, u2, u3, (0, 1, 0)),
            self.value(u1, u2, u3, (0, 0, 1)),
        ])


def web_function(c: RationalCurve) -> WebFunction:
    """Tangency-to-the-sphere condition of the plane through Gamma(u1),
    Gamma(u2), Gamma(u3), as an exact polynomial coefficient tensor.

    The plane coefficients (a,b,c,d) are the signed 3x3 minors of the
    stacked coordinate rows; W = a^2 + b^2 + c^2 - d^2 is the dual-quadric
    value of that plane.
    """
    table = c.coeff_table()
    cx, cy, cz, cu = (table[i] for i in range(4))

    def minor(p: np.ndarray, q: np.ndarray, r: np.ndarray) -> np.ndarray:
        cols = (p, q, r)
        acc = np.zeros((len(p),) * 3)
        for sign, perm in _PERMS:
            acc += sign * _outer3(cols[perm[0]], cols[perm[1]], cols[perm[2]])
        return acc

    a = minor(cy, cz, cu)
    b = -minor(cx, cz, cu)
    cc = minor(cx, cy, cu)
    d = -minor(cx, cy, cz)
    w = _conv3(a, a) + _conv3(b, b) + _conv3(cc, cc) - _conv3(d, d)
    return WebFunction(_symmetrize(w))


class PointClass(Enum):
    """Root structure of the tangency polynomial at a plane point."""

    REGULAR = "Regular"
    TANGENT_PAIR = "TangentPair"
    ROOT_AT_INFINITY = "RootAtInfinity"
    DEFICIENT = "Deficient"
    ON_CURVE = "OnCurve"


@dataclass(frozen=True)
class WebPoint:
    """Plane point with its three first-integral roots and foliation circles."""

    plane: PlanarPoint
    roots: tuple[float, float, float]  # sorted, math.inf last if present
    circles: tuple[PlanarCircle, PlanarCircle, PlanarCircle]

    @property
    def has_infinite_root(self) -> bool:
        return math.isinf(self.roots[-1])


@dataclass(frozen=True)
class RootStructure:
    """Polished real roots of the tangency polynomial at a point."""

    affine: tuple[float, ...]
    n_infinite: int
    poly: Poly1
    on_curve: bool
    clustered: bool


def _root_structure(c: RationalCurve, p: PlanarPoint,
                    cluster_tol: float = 1e-7) -> RootStructure:
    q = stereo_lift(p)
    poly = tangency_poly(c, q)
    nominal = c.max_degree
    trimmed = poly.trim(1e-9 * poly.max_abs())
    n_inf = nominal - trimmed.degree
    roots = trimmed.real_roots()
    clustered = False
    for i in range(len(roots) - 1):
        if abs(roots[i + 1] - roots[i]) < cluster_tol * (1.0 + abs(roots[i])):
            clustered = True
    if n_inf >= 2:
        clustered = True
    lift = q.lift()
    on_curve = False
    params: list[float] = list(roots)
    if n_inf == 1:
        params.append(INFINITY)
    for t in params:
        try:
            if eval_curve(c, t).proportional_to(lift, 1e-8):
                on_curve = True
        except Exception:
            pass
    return RootStructure(tuple(roots), min(n_inf, 2), trimmed, on_curve, clustered)


def classify_point(c: RationalCurve, p: PlanarPoint) -> PointClass:
    """Tag a plane point by the root structure of its tangency polynomial."""
    rs = _root_structure(c, p)
    if rs.on_curve:
        return PointClass.ON_CURVE
    if rs.clustered:
        return PointClass.TANGENT_PAIR
    total = len(rs.affine) + rs.n_infinite
    if total < 3:
        return PointClass.DEFICIENT
    if rs.n_infinite == 1:
        return PointClass.ROOT_AT_INFINITY
    return PointClass.REGULAR


def solve_web_point(c: RationalCurve, p: PlanarPoint):
    """WebPoint with roots and foliation circles, or the PointClass tag when
    the point does not carry three simple real roots."""
    rs = _root_structure(c, p)
    tag = classify_point(c, p)
    if tag not in (PointClass.REGULAR, PointClass.ROOT_AT_INFINITY):
        return tag
    roots: list[float] = list(rs.affine)
    if rs.n_infinite == 1:
        roots.append(INFINITY)
    circles = []
    for t in roots:
        try:
            circ = circle_from_polar(eval_curve(c, t)).normalized()
        except ImaginaryCircle:
            return PointClass.DEFICIENT
        resid = abs(circ.value(p)) / (1.0 + p.x ** 2 + p.y ** 2)
        if resid > 1e-8:
            raise WebError(f"foliation circle misses its web point by {resid:.2e}")
        circles.append(circ)
    return WebPoint(p, tuple(roots), tuple(circles))


def _sheet_root(w: WebFunction, u1: float, u2: float,
                reject_threshold: float = 1e-9):
    """Pick the real u3 sheet with the largest |dW/du3|.

    Candidate roots are polished to convergence; roots that keep a residual
    above 1e-10 of the local magnitude (near-discriminant double roots) are
    dropped.  Returns (u3, grad); raises NoSheet / FoldPoint.
    """
    poly = w.slice_poly(2, (u1, u2))
    poly = poly.trim(1e-13 * max(poly.max_abs(), 1.0))
    roots = poly.real_roots()
    if len(roots) == 0:
        raise NoSheet(f"no real u3 at ({u1:.4g}, {u2:.4g})")
    best = None
    for u3 in roots:
        x, _ = _newton_1d(poly, u3)
        if x is not None and abs(poly(x)) <= abs(poly(u3)):
            u3 = x
        if abs(poly(u3)) > 1e-10 * max(w.magnitude(u1, u2, u3), 1e-300):
            continue  # stalled near a double root
        g = w.gradient(u1, u2, u3)
        if best is None or abs(g[2]) > abs(best[1][2]):
            best = (u3, g)
    if best is None:
        raise FoldPoint(f"only multiple roots in u3 at ({u1:.4g}, {u2:.4g})")
    u3, g = best
    scale = w.magnitude(u1, u2, u3) / (1.0 + max(abs(u1), abs(u2), abs(u3)))
    if abs(g[2]) < reject_threshold * max(scale, 1e-300):
        raise FoldPoint(f"|dW/du3| = {abs(g[2]):.3e} below threshold")
    return u3, g


def hex_residual(c: RationalCurve, u1: float, u2: float,
                 w: Optional[WebFunction] = None,
                 fold_threshold: float = 1e-9) -> float:
    """Third-order hexagonality residual at (u1, u2).

    With u3 = F(u1,u2) implicit in W = 0 the web is hexagonal iff
    d2/du1du2 [ln(dF/du1 / dF/du2)] vanishes; all derivatives come from
    exact partials of the coefficient tensor.  The raw value is divided by
    (|W1|+|W2|+|W3|)^2 / magnitude(W) so curves of different coefficient
    scale report comparable residuals.
    """
    if w is None:
        w = web_function(c)
    u3, g = _sheet_root(w, u1, u2, fold_threshold)
    W1, W2, W3 = g

    def d(i: int, j: int, k: int) -> float:
        return w.value(u1, u2, u3, (i, j, k))

    W11, W12, W13 = d(2, 0, 0), d(1, 1, 0), d(1, 0, 1)
    W22, W23, W33 = d(0, 2, 0), d(0, 1, 1), d(0, 0, 2)
    Fu, Fv = -W1 / W3, -W2 / W3
    Fuv = -(W12 + W23 * Fu + W13 * Fv + W33 * Fu * Fv) / W3

    # A = W1 restricted to the sheet
    if W1 == 0.0 or W2 == 0.0:
        raise FoldPoint("a partial derivative vanishes at the sample")
    DvA = W12 + W13 * Fv
    DuA = W11 + W13 * Fu
    DuDvA = (d(2, 1, 0) + d(1, 1, 1) * Fu
             + (d(2, 0, 1) + d(1, 0, 2) * Fu) * Fv + W13 * Fuv)
    termA = (DuDvA * W1 - DvA * DuA) / (W1 * W1)

    # B = W2 restricted to the sheet
    DvB = W22 + W23 * Fv
    DuB = W12 + W23 * Fu
    DuDvB = (d(1, 2, 0) + d(0, 2, 1) * Fu
             + (d(1, 1, 1) + d(0, 1, 2) * Fu) * Fv + W23 * Fuv)
    termB = (DuDvB * W2 - DvB * DuB) / (W2 * W2)

    h = termA - termB
    gsum = abs(W1) + abs(W2) + abs(W3)
    mag = w.magnitude(u1, u2, u3)

    # forward error estimate: each derivative of W carries an absolute
    # rounding error ~ eps * (sum of |coefficient * monomial|); slope
    # errors feed back through the chain rule.  Points where the estimate
    # exceeds the floor sit too close to the singular locus to certify.
    eps = 1e-15
    e1 = eps * max(w.magnitude(u1, u2, u3, o)
                   for o in ((1, 0, 0), (0, 1, 0), (0, 0, 1)))
    e2 = eps * max(w.magnitude(u1, u2, u3, o)
                   for o in ((2, 0, 0), (1, 1, 0), (1, 0, 1),
                             (0, 2, 0), (0, 1, 1), (0, 0, 2)))
    e3 = eps * max(w.magnitude(u1, u2, u3, o)
                   for o in ((2, 1, 0), (1, 1, 1), (2, 0, 1), (1, 0, 2),
                             (1, 2, 0), (0, 2, 1), (0, 1, 2)))
    slope = max(abs(Fu), abs(Fv), 1.0)
    errF = (e1 * (1.0 + slope) / abs(W3))   # error in Fu, Fv
    m2 = max(abs(W11), abs(W12), abs(W13), abs(W22), abs(W23), abs(W33))
    d2 = e2 * (1.0 + slope) + m2 * errF     # error in DuA, DvA, ...
    d3 = (e3 * (1.0 + slope) ** 2 + m2 * (1.0 + slope) * errF
          + abs(Fuv) * e2 + m2 * (slope * errF * 3.0 + e2 * slope ** 2 / abs(W3)))
    errA = ((abs(W1) * d3 + abs(DuDvA) * e1
             + (abs(DvA) + abs(DuA)) * d2) / (W1 * W1)
            + 2.0 * abs(termA) * e1 / abs(W1))
    errB = ((abs(W2) * d3 + abs(DuDvB) * e1
             + (abs(DvB) + abs(DuB)) * d2) / (W2 * W2)
            + 2.0 * abs(termB) * e1 / abs(W2))
    noise = (errA + errB) * mag / (gsum * gsum)
    if noise > 1e-7:
        raise FoldPoint(f"noise floor {noise:.2e} too close to the singular locus")
    return h * mag / (gsum * gsum)


@dataclass(frozen=True)
class SampleSpec:
    """Batch sampling plan for certification."""

    count: int = 100
    seed: int = 0
    u1_window: tuple[float, float] = (-2.0, 2.0)
    u2_window: tuple[float, float] = (-2.0, 2.0)
    reject_threshold: float = 1e-6

    def __post_init__(self):
        if self.count < 1:
            raise WebError("sample count must be >= 1")


@dataclass(frozen=True)
class CertReport:
    """Batch hexagonality certification summary."""

    samples_requested: int
    samples_used: int
    rejected: dict
    max_residual: float
    median_residual: float

    def to_dict(self) -> dict:
        return {
            "samples_requested": self.samples_requested,
            "samples_used": self.samples_used,
            "rejected": dict(self.rejected),
            "max_residual": self.max_residual,
            "median_residual": self.median_residual,
        }


def hex_certify(c: RationalCurve, s: SampleSpec,
                w: Optional[WebFunction] = None) -> CertReport:
    """Sample (u1,u2) pairs, reject fold/no-sheet points, and report the
    max and median |hex residual| over the usable samples."""
    if w is None:
        w = web_function(c)
    rng = np.random.default_rng(s.seed)
    residuals = []
    rejected = {"no_sheet": 0, "fold": 0}
    for _ in range(s.count):
        u1 = rng.uniform(*s.u1_window)
        u2 = rng.uniform(*s.u2_window)
        try:
            residuals.append(abs(hex_residual(c, u1, u2, w, s.reject_threshold)))
        except NoSheet:
            rejected["no_sheet"] += 1
        except FoldPoint:
            rejected["fold"] += 1
    if len(residuals) < s.count / 2.0:
        raise InsufficientSamples(
            f"only {len(residuals)} of {s.count} samples usable")
    arr = np.array(residuals)
    return CertReport(s.count, len(residuals), rejected,
                      float(np.max(arr)), float(np.median(arr)))


def sample_bases(c: RationalCurve, s: SampleSpec,
                 w: Optional[WebFunction] = None) -> list[tuple[float, float]]:
    """Usable (u1,u2) bases drawn with the spec's seed; for closure tests."""
    if w is None:
        w = web_function(c)
    rng = np.random.default_rng(s.seed)
    out = []
    for _ in range(s.count * 10):
        if len(out) >= s.count:
            break
        u1 = rng.uniform(*s.u1_window)
        u2 = rng.uniform(*s.u2_window)
        try:
            _sheet_root(w, u1, u2, s.reject_threshold)
        except (NoSheet, FoldPoint):
            continue
        out.append((u1, u2))
    return out


def _newton_1d(poly: Poly1, guess: float, tol: float = 1e-12,
               max_iter: int = 100) -> tuple[Optional[float], int]:
    d = poly.deriv()
    x = guess
    for it in range(1, max_iter + 1):
        fx = poly(x)
        dx = d(x)
        if dx == 0.0:
            return None, it
        step = fx / dx
        x -= step
        if abs(step) <= tol * (1.0 + abs(x)):
            return x, it
    return None, max_iter


def _continue_root(poly: Poly1, guess: float, radius: float) -> tuple[float, int]:
    """Root of poly near guess: guarded Newton, all-roots fallback."""
    x, iters = _newton_1d(poly, guess)
    if x is not None and abs(x - guess) <= radius:
        return x, iters
    roots = poly.real_roots()
    if len(roots) == 0:
        raise NoConvergence("no real root in continuation")
    nearest = float(roots[np.argmin(np.abs(roots - guess))])
    if abs(nearest - guess) > radius:
        raise SheetJump(
            f"nearest root {nearest:.6g} is {abs(nearest - guess):.3g} from "
            f"the predicted continuation {guess:.6g}")
    return nearest, iters


@dataclass(frozen=True)
class ClosureReport:
    """Thomsen hexagon traversal result."""

    base: tuple[float, float]
    step: float
    defect: float
    iterations: int
    vertices: tuple[tuple[float, float], ...]

    def to_dict(self) -> dict:
        return {
            "base": list(self.base),
            "step": self.step,
            "defect": self.defect,
            "iterations": self.iterations,
            "vertices": [list(v) for v in self.vertices],
        }


def thomsen_closure(c: RationalCurve, base: tuple[float, float], eps: float,
                    w: Optional[WebFunction] = None) -> ClosureReport:
    """Traverse the Thomsen hexagon around `base` in the (u1,u2) chart.

    All six sides follow web leaves (one of u1, u2, u3 = F(u1,u2) held
    constant); for a hexagonal web the figure closes exactly and the
    returned defect is solver noise.
    """
    if w is None:
        w = web_function(c)
    a, b = base
    total_iters = 0
    substep = min(abs(eps), 0.02) or 0.02

    def slope(pt: tuple[float, float, float], num: int, den: int) -> float:
        g = w.gradient(*pt)
        if abs(g[den]) < 1e-12 * (abs(g[0]) + abs(g[1]) + abs(g[2])):
            raise FoldPoint("leaf direction degenerates during traversal")
        return -g[num] / g[den]

    def leg(pt, move: int, solve: int, target: float):
        """Continue the root of W along one hexagon side.

        The `move` coordinate runs from its current value to `target`, the
        third coordinate is held, and the `solve` coordinate follows its
        root branch in small steps with first-order prediction."""
        nonlocal total_iters
        cur = list(pt)
        span = target - cur[move]
        n = max(1, int(math.ceil(abs(span) / substep)))
        overall = cur[solve] + span * slope(tuple(cur), move, solve)
        branch_sign = math.copysign(1.0, w.gradient(*cur)[solve])
        for k in range(1, n + 1):
            nxt = cur[move] + span / n if k < n else target
            step = nxt - cur[move]
            sl = slope(tuple(cur), move, solve)
            pred = cur[solve] + step * sl
            cur[move] = nxt
            fixed = tuple(cur[i] for i in range(3) if i != solve)
            sl_poly = w.slice_poly(solve, fixed)
            x, it = _continue_root(sl_poly, pred, 2.0 * abs(step) * (1.0 + abs(sl)))
            total_iters += it
            cur[solve] = x
            # crossing a fold of the leaf projection swaps root branches
            # and flips the sign of dW/d(solved coordinate)
            if math.copysign(1.0, w.gradient(*cur)[solve]) != branch_sign:
                raise FoldPoint("leg crossed a fold of the leaf projection")
            # a second root close to the tracked one means the hexagon
            # straddles the singular locus; the chart cannot be trusted
            gaps = sorted(abs(r - x) for r in sl_poly.real_roots())
            if len(gaps) > 1 and gaps[1] < 3.0 * abs(eps):
                raise FoldPoint("another web sheet within reach of the hexagon")
        if abs(cur[solve] - overall) > 10.0 * abs(eps):
            raise SheetJump(
                f"leg landed {abs(cur[solve] - overall):.3g} from the "
                f"predicted continuation {overall:.6g}")
        return tuple(cur)

    w0, _ = _sheet_root(w, a, b)
    P0 = (a, b, w0)
    # along u2=b to u1=a+eps; u3 follows the sheet
    P1 = leg(P0, 0, 2, a + eps)
    # hold u3: back to the u1=a line, u2 follows
    P2 = leg(P1, 0, 1, a)
    # hold u2: return to the base sheet value u3=w0, u1 follows
    P3 = leg(P2, 2, 0, w0)
    # hold u1: back to u2=b, u3 follows
    P4 = leg(P3, 1, 2, b)
    # hold u3: to the u1=a line again
    P5 = leg(P4, 0, 1, a)
    # hold u2: to u3=w0
    P6 = leg(P5, 2, 0, w0)
    # the closing leg holds u1: the figure closes iff P6 has u1=a+eps
    defect = float(abs(P6[0] - (a + eps)))
    vertices = tuple((float(p[0]), float(p[1])) for p in (P1, P2, P3, P4, P5, P6))
    return ClosureReport((a, b), eps, defect, total_iters, vertices)


@dataclass(frozen=True)
class InvariantsReport:
    """Discrete and continuous Moebius invariants of a twisted-cubic web."""

    S: int
    Sbar: int
    I: float
    Ibar: float
    points: dict

    def to_dict(self) -> dict:
        return {
            "S": self.S,
            "Sbar": self.Sbar,
            "I": self.I,
            "Ibar": self.Ibar,
        }


def invariants_from_curve(c: RationalCurve) -> InvariantsReport:
    """Invariants from the anchor parameters t = 1, -1, infinity, 0.

    p0 = Gamma(inf) and pbar0 = Gamma(0) are the polar points of the two
    boundary circles; p0' and pbar0' are the second intersections of the
    tangent lines there with the polar planes of the points themselves.
    """
    c1 = eval_curve(c, 1.0).normalize()
    c2 = eval_curve(c, -1.0).normalize()
    p0 = eval_curve(c, INFINITY).normalize()
    pbar0 = eval_curve(c, 0.0).normalize()

    def second_point(pt: HomPoint, t) -> HomPoint:
        d = curve_tangent(c, t)
        # combination on the tangent line lying in the polar plane of pt
        v = pair(d, pt) * pt.vec - pair(pt, pt) * d.vec
        return HomPoint(tuple(v)).normalize()

    pprime = second_point(p0, INFINITY)
    pbarprime = second_point(pbar0, 0.0)

    for denom_name, a, bpt in (("(p0,pbar0')", p0, pbarprime),
                               ("(pbar0,p0')", pbar0, pprime)):
        if abs(pair(a, bpt)) < 1e-12:
            raise DegenerateConfig(f"pairing {denom_name} numerically zero")

    s_val = pair(c1, c2) * pair(c2, pprime) * pair(pprime, c1)
    sbar_val = pair(c1, c2) * pair(c2, pbarprime) * pair(pbarprime, c1)
    if s_val == 0.0 or sbar_val == 0.0:
        raise DegenerateConfig("sign product vanishes")
    inv_i = pair(p0, p0) * pair(pbarprime, pbarprime) / pair(p0, pbarprime) ** 2
    inv_ibar = pair(pbar0, pbar0) * pair(pprime, pprime) / pair(pbar0, pprime) ** 2
    points = {
        "c1": c1, "c2": c2, "p0": p0, "pbar0": pbar0,
        "pprime0": pprime, "pbarprime0": pbarprime,
    }
    return InvariantsReport(int(np.sign(s_val)), int(np.sign(sbar_val)),
                            float(inv_i), float(inv_ibar), points)


def invariants(f: CurveFamily) -> InvariantsReport:
    """Invariants S, Sbar, I, Ibar of a `cubic` family member."""
    if f.tag != "cubic":
        raise WebError("invariants are defined for the cubic family tag")
    return invariants_from_curve(family_curve(f))


def perturb_curve(c: RationalCurve, magnitude: float, seed: int) -> RationalCurve:
    """Seeded uniform relative noise on all non-leading coefficients."""
    if magnitude < 0.0:
        raise WebError("perturbation magnitude must be >= 0")
    rng = np.random.default_rng(seed)
    comps = []
    for p in c.components:
        coef = list(p.coef)
        scale = p.max_abs() or c.coeff_scale
        for i in range(len(coef) - 1):
            coef[i] += magnitude * scale * rng.uniform(-1.0, 1.0)
        comps.append(Poly1(tuple(coef)))
    return RationalCurve(tuple(comps))


def _cubic_discriminant(coef: np.ndarray) -> float:
    """Discriminant of a3 t^3 + a2 t^2 + a1 t + a0, coefficients ascending."""
    a0, a1, a2, a3 = coef
    return (18.0 * a3 * a2 * a1 * a0 - 4.0 * a2 ** 3 * a0 + a2 ** 2 * a1 ** 2
            - 4.0 * a3 * a1 ** 3 - 27.0 * a3 ** 2 * a0 ** 2)


def _sylvester_discriminant(coef: np.ndarray) -> float:
    n = len(coef) - 1
    p = coef[::-1]  # descending
    dp = np.array([(n - i) * p[i] for i in range(n)])
    m = 2 * n - 1
    syl = np.zeros((m, m))
    for i in range(n - 1):
        syl[i, i: i + n + 1] = p
    for i in range(n):
        syl[n - 1 + i, i: i + n] = dp
    res = float(np.linalg.det(syl))
    lead = p[0]
    if lead == 0.0:
        return 0.0
    return (-1.0) ** (n * (n - 1) // 2) * res / lead


def discriminant_sign(c: RationalCurve, p: PlanarPoint) -> float:
    """Discriminant of the degree-completed tangency polynomial at p.

    Positive for three distinct real roots, negative for one; a degree
    drop counts as a root at the infinite parameter.
    """
    q = stereo_lift(p)
    poly = tangency_poly(c, q)
    n = c.max_degree
    coef = poly.padded(n + 1)
    scale = max(float(np.max(np.abs(coef))), 1e-300)
    coef = coef / scale
    if n == 3:
        return _cubic_discriminant(coef)
    if n == 2:
        return float(coef[1] ** 2 - 4.0 * coef[2] * coef[0])
    return _sylvester_discriminant(coef)
