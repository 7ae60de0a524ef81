"""Polynomial algebra of rational polar curves.

A polar curve is four real polynomials [X(t):Y(t):Z(t):U(t)] in a
projective parameter.  This module evaluates curves (including at the
infinite parameter), takes tangent directions, builds the three named
twisted-cubic families, checks their quadratic ideal generators, pushes
curves forward by Moebius maps, and forms the tangency polynomial whose
roots are the web first integrals at a sphere point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np
from numpy.polynomial import polynomial as npoly

from .minkgeom import HomPoint, MoebiusMap, Plane, SpherePoint, tangent_plane

INFINITY = math.inf

MAX_CUSTOM_DEGREE = 4


class CurveError(Exception):
    """Base class for curve construction/evaluation failures."""


class BadParams(CurveError):
    """Family parameters violate the family's side conditions."""


class BasePointError(CurveError):
    """All four components vanish at the requested parameter."""


class SingularParam(CurveError):
    """Tangent direction degenerates at the requested parameter."""


class NotAvailable(CurveError):
    """Requested data exists only for the named families."""


class IdenticallyZero(CurveError):
    """Tangency polynomial vanishes identically."""


@dataclass(frozen=True)
class Poly1:
    """Univariate real polynomial, coefficients in ascending degree.

    Trailing (near-)zero coefficients are trimmed; the zero polynomial is
    the empty coefficient tuple.
    """

    coef: tuple[float, ...]

    def __post_init__(self):
        c = np.asarray(self.coef, dtype=float)
        if c.ndim != 1:
            raise CurveError("coefficients must be a 1-d sequence")
        n = len(c)
        while n > 0 and c[n - 1] == 0.0:
            n -= 1
        object.__setattr__(self, "coef", tuple(float(x) for x in c[:n]))

    @property
    def vec(self) -> np.ndarray:
        return np.asarray(self.coef, dtype=float)

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coef) - 1

    @property
    def is_zero(self) -> bool:
        return len(self.coef) == 0

    def __call__(self, t: float) -> float:
        if self.is_zero:
            return 0.0
        return float(npoly.polyval(t, self.vec))

    def __add__(self, other: "Poly1") -> "Poly1":
        return Poly1(tuple(npoly.polyadd(self.vec_or0, other.vec_or0)))

    def __sub__(self, other: "Poly1") -> "Poly1":
        return Poly1(tuple(npoly.polysub(self.vec_or0, other.vec_or0)))

    def __mul__(self, other) -> "Poly1":
        if isinstance(other, Poly1):
            if self.is_zero or other.is_zero:
                return Poly1(())
            return Poly1(tuple(npoly.polymul(self.vec, other.vec)))
        return Poly1(tuple(float(other) * self.vec_or0))

    __rmul__ = __mul__

    @property
    def vec_or0(self) -> np.ndarray:
        return self.vec if len(self.coef) else np.zeros(1)

    def deriv(self) -> "Poly1":
        if self.degree < 1:
            return Poly1(())
        return Poly1(tuple(npoly.polyder(self.vec)))

    def trim(self, tol: float) -> "Poly1":
        """Drop trailing coefficients at or below tol (absolute)."""
        c = list(self.coef)
        while c and abs(c[-1]) <= tol:
            c.pop()
        return Poly1(tuple(c))

    def max_abs(self) -> float:
        return float(np.max(np.abs(self.vec))) if self.coef else 0.0

    def padded(self, n: int) -> np.ndarray:
        out = np.zeros(n)
        out[: len(self.coef)] = self.vec_or0
        return out

    def real_roots(self, rel_tol: float = 1e-7) -> np.ndarray:
        """Real roots via companion-matrix eigenvalues plus one Newton polish."""
        if self.degree < 1:
            return np.array([])
        roots = npoly.polyroots(self.vec)
        d = self.deriv()
        out = []
        scale = self.max_abs()
        for r in roots:
            if abs(r.imag) > rel_tol * (1.0 + abs(r.real)):
                continue
            if abs(r.real) > 1e12:
                continue  # numerically meaningless near-infinite root
            x = r.real
            dv = d(x)
            if dv != 0.0:
                step = self(x) / dv
                if abs(step) < 1.0 + abs(x):
                    x = x - step
            if abs(self(x)) <= 1e-6 * max(scale, 1.0) * (1.0 + abs(x)) ** max(self.degree, 1):
                out.append(x)
        return np.sort(np.array(out))


def poly_gcd(a: Poly1, b: Poly1, cutoff: float = 1e-9) -> Poly1:
    """Approximate GCD via Euclidean remainders.

    Remainder coefficients below cutoff (relative to the input scale) are
    treated as zero; a constant result means no common nonconstant factor.
    """
    if a.is_zero:
        return b
    if b.is_zero:
        return a
    scale = max(a.max_abs(), b.max_abs(), 1.0)
    p, q = a, b
    if p.degree < q.degree:
        p, q = q, p
    while not q.is_zero and q.degree > 0:
        _, rem = npoly.polydiv(p.padded(p.degree + 1), q.vec)
        r = Poly1(tuple(rem)).trim(cutoff * scale)
        p, q = q, r
    if q.is_zero:
        return p
    return Poly1((1.0,))


@dataclass(frozen=True)
class RationalCurve:
    """Rational space curve t -> [X(t):Y(t):Z(t):U(t)]."""

    components: tuple[Poly1, Poly1, Poly1, Poly1]

    def __post_init__(self):
        comps = tuple(self.components)
        if len(comps) != 4:
            raise CurveError("a curve needs 4 component polynomials")
        degs = [p.degree for p in comps]
        if max(degs) < 1:
            raise CurveError("constant parametrization")
        if max(degs) > MAX_CUSTOM_DEGREE:
            raise CurveError(f"curve degree capped at {MAX_CUSTOM_DEGREE}")
        nonzero = [p for p in comps if not p.is_zero]
        g = nonzero[0]
        for p in nonzero[1:]:
            g = poly_gcd(g, p)
            if g.degree < 1:
                break
        if g.degree > 0:
            raise CurveError("components share a common nonconstant factor")
        object.__setattr__(self, "components", comps)

    @property
    def max_degree(self) -> int:
        return max(p.degree for p in self.components)

    @property
    def coeff_scale(self) -> float:
        return max(p.max_abs() for p in self.components)

    def coeff_table(self) -> np.ndarray:
        """4 x (max_degree+1) ascending coefficient table."""
        n = self.max_degree + 1
        return np.vstack([p.padded(n) for p in self.components])


def _as_proj_param(t) -> tuple[float, float]:
    """Accept affine floats, math.inf, or a projective pair [t0:t1]."""
    if isinstance(t, tuple):
        t0, t1 = float(t[0]), float(t[1])
    elif t is INFINITY or (isinstance(t, float) and math.isinf(t)):
        t0, t1 = 1.0, 0.0
    else:
        t0, t1 = float(t), 1.0
    n = math.hypot(t0, t1)
    if n == 0.0:
        raise CurveError("projective parameter (0,0)")
    return t0 / n, t1 / n


def _eval_homogenized(table: np.ndarray, t0: float, t1: float) -> np.ndarray:
    n = table.shape[1]
    monos = np.array([t0 ** k * t1 ** (n - 1 - k) for k in range(n)])
    return table @ monos


def eval_curve(c: RationalCurve, t) -> HomPoint:
    """Evaluate the curve at an affine or projective parameter.

    Each component of degree d is evaluated at common homogenization
    degree max_degree, so the infinite parameter returns the vector of
    leading coefficients.
    """
    t0, t1 = _as_proj_param(t)
    vals = _eval_homogenized(c.coeff_table(), t0, t1)
    if np.max(np.abs(vals)) <= 1e-12 * max(c.coeff_scale, 1.0):
        raise BasePointError(f"all components vanish at [{t0}:{t1}]")
    return HomPoint(tuple(vals)).normalize()


def curve_tangent(c: RationalCurve, t) -> HomPoint:
    """A second point spanning the projective tangent line at eval_curve(c, t).

    Uses the partial derivatives of the homogenized parametrization; the
    tangent line is span(eval_curve(c,t), curve_tangent(c,t)).
    """
    t0, t1 = _as_proj_param(t)
    table = c.coeff_table()
    n = table.shape[1]
    point = _eval_homogenized(table, t0, t1)
    if np.max(np.abs(point)) <= 1e-12 * max(c.coeff_scale, 1.0):
        raise BasePointError("base point of the parametrization")
    # d/dt0 and d/dt1 of sum_k a_k t0^k t1^(n-1-k)
    d0 = table @ np.array([k * t0 ** max(k - 1, 0) * t1 ** (n - 1 - k) for k in range(n)])
    d1 = table @ np.array(
        [(n - 1 - k) * t0 ** k * t1 ** max(n - 2 - k, 0) for k in range(n)]
    )
    pn = point / np.max(np.abs(point))
    for d in (d0, d1):
        nd = float(np.max(np.abs(d)))
        if nd <= 1e-12 * max(c.coeff_scale, 1.0):
            continue
        dn = d / nd
        # reject directions proportional to the point itself
        resid = dn - (dn @ pn) / (pn @ pn) * pn
        if np.max(np.abs(resid)) > 1e-10:
            return HomPoint(tuple(d)).normalize()
    raise SingularParam("derivative proportional to the curve point")


@dataclass(frozen=True)
class CurveFamily:
    """One of the named twisted-cubic families, or a custom coefficient table."""

    tag: str
    m: float = 0.0
    x0: float = 0.0
    y0: float = 0.0
    custom: Optional[tuple[tuple[float, ...], ...]] = None

    def __post_init__(self):
        if self.tag not in ("cubic", "cubic1", "cubic2", "custom"):
            raise BadParams(f"unknown family tag {self.tag!r}")
        if self.tag == "cubic":
            if not (self.m > 0.0 and self.x0 > 0.0):
                raise BadParams("cubic requires m > 0 and x0 > 0")
        elif self.tag in ("cubic1", "cubic2"):
            if not (self.m > 0.0 and self.x0 > 0.0 and self.y0 > 0.0):
                raise BadParams(f"{self.tag} requires m, x0, y0 > 0")
            if abs(self.x0 ** 2 + self.y0 ** 2 - 1.0) > 1e-12:
                raise BadParams(f"{self.tag} requires x0^2 + y0^2 = 1")
            if self.tag == "cubic1" and not self.x0 > self.y0:
                raise BadParams("cubic1 requires x0 > y0")
        else:
            if self.custom is None:
                raise BadParams("custom family needs a coefficient table")
            if len(self.custom) != 4:
                raise BadParams("custom table needs 4 rows")

    @property
    def label(self) -> str:
        return self.tag


def family_curve(f: CurveFamily) -> RationalCurve:
    """Coefficient-exact transcription of the family's parametrization."""
    m, x0, y0 = f.m, f.x0, f.y0
    if f.tag == "cubic":
        comps = (
            Poly1((-m, 0.0, m)),            # X = m(t^2-1)
            Poly1((0.0, -1.0, 0.0, 1.0)),   # Y = t(t^2-1)
            Poly1((0.0, m * x0)),           # Z = m*x0*t
            Poly1((0.0, 0.0, m * x0)),      # U = m*x0*t^2
        )
    elif f.tag == "cubic1":
        comps = (
            Poly1((m * y0 * (x0 ** 2 - y0 ** 2) / 4.0, 0.0, m * y0)),
            Poly1((-m * x0 * (y0 ** 2 - x0 ** 2) / 4.0, 0.0, -m * x0)),
            Poly1((0.0, -0.25, 0.0, 1.0)),  # Z = t^3 - t/4
            Poly1((0.0, -m * x0 * y0)),
        )
    elif f.tag == "cubic2":
        comps = (
            Poly1((0.0, x0 * m)),
            Poly1((m * (y0 ** 2 + 1.0) / (2.0 * y0), 0.0, -m * x0 ** 2 / (2.0 * y0))),
            Poly1((0.0, 0.125, 0.0, -0.125)),  # Z = (t - t^3)/8
            Poly1((m * (y0 ** 2 + 1.0) / 2.0, 0.0, m * x0 ** 2 / 2.0)),
        )
    else:
        comps = tuple(Poly1(tuple(row)) for row in f.custom)
    return RationalCurve(comps)


@dataclass(frozen=True)
class QuadraticForm:
    """Symmetric quadratic form on homogeneous coordinates (X,Y,Z,U)."""

    matrix: np.ndarray

    def __post_init__(self):
        mat = np.array(self.matrix, dtype=float)
        if mat.shape != (4, 4) or np.max(np.abs(mat - mat.T)) > 0.0:
            raise CurveError("quadratic form must be a symmetric 4x4 matrix")
        mat.flags.writeable = False
        object.__setattr__(self, "matrix", mat)

    def value(self, p: HomPoint) -> float:
        v = p.vec
        return float(v @ self.matrix @ v)

    def pushforward(self, Minv: np.ndarray) -> "QuadraticForm":
        """Form vanishing on M*Gamma when this form vanishes on Gamma."""
        g = Minv.T @ self.matrix @ Minv
        return QuadraticForm((g + g.T) / 2.0)


def _qform(entries: dict[tuple[int, int], float]) -> QuadraticForm:
    mat = np.zeros((4, 4))
    for (i, j), v in entries.items():
        if i == j:
            mat[i, i] += v
        else:
            mat[i, j] += v / 2.0
            mat[j, i] += v / 2.0
    return QuadraticForm(mat)


X, Y, Z, U = 0, 1, 2, 3


def ideal_generators(f: CurveFamily) -> list[QuadraticForm]:
    """The three quadratic generators of the family's homogeneous ideal."""
    m, x0, y0 = f.m, f.x0, f.y0
    if f.tag == "cubic":
        return [
            _qform({(Z, Z): 1.0, (U, U): -1.0, (X, U): x0}),
            _qform({(X, U): 1.0, (Y, Z): -m}),
            _qform({(X, Z): 1.0, (X, Y): m * x0, (Y, U): -m}),
        ]
    if f.tag == "cubic1":
        return [
            _qform({(X, X): 1.0 / y0 ** 2, (Y, Y): -1.0 / x0 ** 2,
                    (U, U): 1.0 / x0 ** 2 - 1.0 / y0 ** 2}),
            _qform({(X, Z): 2.0 * m / y0, (Y, Z): 2.0 * m / x0,
                    (X, U): -1.0 / x0, (Y, U): -1.0 / y0}),
            _qform({(X, X): 1.0 / y0 ** 2, (Y, Y): 1.0 / x0 ** 2,
                    (X, Y): -2.0 / (x0 * y0), (Z, U): 4.0 * m / (x0 * y0),
                    (U, U): -1.0 / (x0 ** 2 * y0 ** 2)}),
        ]
    if f.tag == "cubic2":
        return [
            _qform({(X, X): 1.0 + y0 ** 2, (Y, Y): y0 ** 2, (U, U): -1.0}),
            _qform({(X, U): 2.0 * y0 ** 2 / (m * x0 ** 3), (Z, U): 8.0,
                    (Y, Z): 8.0 * y0, (X, Y): -2.0 * y0 / (m * x0 ** 3)}),
            _qform({(X, X): x0 ** 2, (Y, Y): -y0 ** 2, (Y, U): 2.0 * y0,
                    (X, Z): -8.0 * m * x0 ** 3, (U, U): -1.0}),
        ]
    raise NotAvailable("ideal generators known only for the named families")


def compose_ideal(g: QuadraticForm, c: RationalCurve) -> Poly1:
    """Expand g(Gamma(t)) as a univariate polynomial."""
    comps = c.components
    acc = Poly1(())
    for i in range(4):
        for j in range(4):
            gij = g.matrix[i, j]
            if gij != 0.0:
                acc = acc + gij * (comps[i] * comps[j])
    return acc


def transform_curve(M: MoebiusMap, c: RationalCurve) -> RationalCurve:
    """Componentwise matrix action on the coefficient table."""
    table = M.m @ c.coeff_table()
    return RationalCurve(tuple(Poly1(tuple(row)) for row in table))


def tangency_poly(c: RationalCurve, q: SpherePoint) -> Poly1:
    """t -> <tangent_plane(q), Gamma(t)>, whose roots are the web first
    integrals of the foliation circles through q."""
    coeffs = tangent_plane(q).vec
    acc = np.zeros(c.max_degree + 1)
    table = c.coeff_table()
    for i in range(4):
        acc += coeffs[i] * table[i]
    poly = Poly1(tuple(acc))
    if poly.max_abs() <= 1e-12 * max(c.coeff_scale, 1.0):
        raise IdenticallyZero("tangent plane contains the whole curve")
    return poly
