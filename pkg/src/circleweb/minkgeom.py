"""Projective model of circle geometry on the unit sphere.

Circles on the unit sphere are encoded by their polar points with respect
to the sphere, homogeneous 4-vectors paired by the signature-(3,1) form
diag(1,1,1,-1).  This module provides that pairing, the stereographic maps
between the plane and the sphere, planes and their tangency test, the
plane circle attached to an exterior polar point, the six infinitesimal
generators of the Moebius group SO(3,1) and their exponentials, and
circle-circle intersection in the plane.

All values are immutable after construction and every operation is a pure
function.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Sequence

import numpy as np
import scipy.linalg

ETA = np.diag([1.0, 1.0, 1.0, -1.0])

TANGENCY_TOL = 1e-10


class GeometryError(Exception):
    """Base class for geometric failure modes in this module."""


class PoleError(GeometryError):
    """Stereographic projection requested at the projection center."""


class ImaginaryCircle(GeometryError):
    """Polar point on or inside the sphere: no real circle."""


class CoincidentCircles(GeometryError):
    """Intersection of two copies of the same circle locus."""


def _normalize4(v: np.ndarray) -> np.ndarray:
    """Divide by the coordinate of largest magnitude (kept sign-free: that
    coordinate becomes exactly 1)."""
    v = np.asarray(v, dtype=float)
    i = int(np.argmax(np.abs(v)))
    if v[i] == 0.0:
        raise GeometryError("zero homogeneous vector")
    return v / v[i]


@dataclass(frozen=True)
class HomPoint:
    """Projective point of 3-space, homogeneous coordinates [X:Y:Z:U]."""

    coords: tuple[float, float, float, float]

    def __post_init__(self):
        c = np.asarray(self.coords, dtype=float)
        if c.shape != (4,):
            raise GeometryError("HomPoint needs exactly 4 coordinates")
        if not np.any(c != 0.0):
            raise GeometryError("HomPoint coordinates all zero")
        object.__setattr__(self, "coords", tuple(float(x) for x in c))

    @property
    def vec(self) -> np.ndarray:
        return np.asarray(self.coords, dtype=float)

    def normalize(self) -> "HomPoint":
        return HomPoint(tuple(_normalize4(self.vec)))

    def proportional_to(self, other: "HomPoint", tol: float = 1e-8) -> bool:
        a = _normalize4(self.vec)
        b = _normalize4(other.vec)
        return bool(np.max(np.abs(a - b)) <= tol or np.max(np.abs(a + b)) <= tol)


@dataclass(frozen=True)
class Plane:
    """Plane aX+bY+cZ+dU = 0 (plain dot-product incidence)."""

    coeffs: tuple[float, float, float, float]

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=float)
        if c.shape != (4,) or not np.any(c != 0.0):
            raise GeometryError("Plane needs 4 coefficients, not all zero")
        object.__setattr__(self, "coeffs", tuple(float(x) for x in c))

    @property
    def vec(self) -> np.ndarray:
        return np.asarray(self.coeffs, dtype=float)

    def incidence(self, p: HomPoint) -> float:
        return float(self.vec @ p.vec)


@dataclass(frozen=True)
class SpherePoint:
    """Point (x,y,z) on the unit sphere."""

    x: float
    y: float
    z: float

    def __post_init__(self):
        r2 = self.x * self.x + self.y * self.y + self.z * self.z
        if abs(r2 - 1.0) > 1e-12:
            raise GeometryError(f"point not on unit sphere, |r^2-1|={abs(r2 - 1.0):.3e}")

    def lift(self) -> HomPoint:
        """Homogeneous lift [x:y:z:1]."""
        return HomPoint((self.x, self.y, self.z, 1.0))


@dataclass(frozen=True)
class PlanarPoint:
    """Cartesian point of the stereographic plane."""

    x: float
    y: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise GeometryError("PlanarPoint coordinates must be finite")


@dataclass(frozen=True)
class PlanarCircle:
    """Circle or line eps*(x^2+y^2) + A*x + B*y + C = 0, homogeneous quadruple."""

    eps: float
    A: float
    B: float
    C: float

    def __post_init__(self):
        q = np.array([self.eps, self.A, self.B, self.C])
        if not np.any(q != 0.0):
            raise GeometryError("PlanarCircle quadruple all zero")
        if self.eps != 0.0:
            if self.A ** 2 + self.B ** 2 - 4.0 * self.eps * self.C <= 0.0:
                raise ImaginaryCircle("empty real locus")
        elif self.A == 0.0 and self.B == 0.0:
            raise GeometryError("degenerate line: A=B=0")

    @property
    def quad(self) -> np.ndarray:
        return np.array([self.eps, self.A, self.B, self.C], dtype=float)

    @property
    def is_line(self) -> bool:
        return self.eps == 0.0

    @property
    def center(self) -> PlanarPoint:
        if self.is_line:
            raise GeometryError("a line has no center")
        return PlanarPoint(-self.A / (2.0 * self.eps), -self.B / (2.0 * self.eps))

    @property
    def radius(self) -> float:
        if self.is_line:
            raise GeometryError("a line has no radius")
        return math.sqrt(self.A ** 2 + self.B ** 2 - 4.0 * self.eps * self.C) / (
            2.0 * abs(self.eps)
        )

    def value(self, p: PlanarPoint) -> float:
        return (
            self.eps * (p.x * p.x + p.y * p.y) + self.A * p.x + self.B * p.y + self.C
        )

    def normalized(self) -> "PlanarCircle":
        q = _normalize4(self.quad)
        return PlanarCircle(q[0], q[1], q[2], q[3])


def pair(u: HomPoint, v: HomPoint) -> float:
    """Signature-(3,1) pairing X1X2 + Y1Y2 + Z1Z2 - U1U2."""
    a, b = u.vec, v.vec
    return float(a[0] * b[0] + a[1] * b[1] + a[2] * b[2] - a[3] * b[3])


def stereo_lift(p: PlanarPoint) -> SpherePoint:
    """Inverse stereographic projection, plane to sphere (pole at z=-1)."""
    r2 = p.x * p.x + p.y * p.y
    d = 1.0 + r2
    return SpherePoint(2.0 * p.x / d, 2.0 * p.y / d, (1.0 - r2) / d)


def stereo_project(q: SpherePoint) -> PlanarPoint:
    """Stereographic projection, sphere to plane."""
    if abs(q.z + 1.0) < 1e-12:
        raise PoleError("projection center z=-1")
    return PlanarPoint(q.x / (1.0 + q.z), q.y / (1.0 + q.z))


def tangent_plane(q: SpherePoint) -> Plane:
    """Plane tangent to the unit sphere at q, coefficients (x, y, z, -1)."""
    return Plane((q.x, q.y, q.z, -1.0))


def plane_tangency_residual(P: Plane) -> float:
    """(a^2+b^2+c^2-d^2) / (a^2+b^2+c^2+d^2); zero iff tangent to the sphere."""
    a, b, c, d = P.coeffs
    s = a * a + b * b + c * c
    return (s - d * d) / (s + d * d)


def circle_from_polar(p: HomPoint) -> PlanarCircle:
    """Stereographic circle of the sphere circle polar to the exterior point p.

    Inverts the tetracyclic coordinates [A:B:C-eps:-C-eps] of the polar
    point: A=X, B=Y, C=(Z-U)/2, eps=-(Z+U)/2.
    """
    v = _normalize4(p.vec)
    pp = v[0] ** 2 + v[1] ** 2 + v[2] ** 2 - v[3] ** 2
    if pp <= 1e-12 * float(v @ v):
        raise ImaginaryCircle("polar point on or inside the sphere")
    X, Y, Z, U = v
    eps = -(Z + U) / 2.0
    C = (Z - U) / 2.0
    q = _normalize4(np.array([eps, X, Y, C]))
    if abs(q[0]) <= 1e-12:
        q[0] = 0.0
    return PlanarCircle(q[0], q[1], q[2], q[3])


_GENERATORS: dict[str, np.ndarray] = {}


def _init_generators():
    Rx = np.zeros((4, 4))
    Rx[1, 2] = 1.0  # Y' = Z
    Rx[2, 1] = -1.0  # Z' = -Y
    Ry = np.zeros((4, 4))
    Ry[2, 0] = 1.0  # Z' = X
    Ry[0, 2] = -1.0  # X' = -Z
    Rz = np.zeros((4, 4))
    Rz[0, 1] = 1.0  # X' = Y
    Rz[1, 0] = -1.0  # Y' = -X
    Bx = np.zeros((4, 4))
    Bx[0, 3] = 1.0  # X' = U
    Bx[3, 0] = 1.0  # U' = X
    By = np.zeros((4, 4))
    By[1, 3] = 1.0
    By[3, 1] = 1.0
    Bz = np.zeros((4, 4))
    Bz[2, 3] = 1.0
    Bz[3, 2] = 1.0
    for name, g in [("Rx", Rx), ("Ry", Ry), ("Rz", Rz), ("Bx", Bx), ("By", By), ("Bz", Bz)]:
        g.flags.writeable = False
        _GENERATORS[name] = g


_init_generators()

GENERATOR_NAMES = ("Rx", "Ry", "Rz", "Bx", "By", "Bz")


def moebius_generator(which: str) -> np.ndarray:
    """Infinitesimal generator matrix of SO(3,1) acting on (X,Y,Z,U).

    Rotations R_x, R_y, R_z and boosts B_x, B_y, B_z; e.g. Rz encodes
    Y d/dX - X d/dY and Bz encodes U d/dZ + Z d/dU.
    """
    try:
        return _GENERATORS[which]
    except KeyError:
        raise GeometryError(f"unknown generator {which!r}") from None


@dataclass(frozen=True)
class MoebiusMap:
    """Projective transformation preserving the unit sphere: M^T eta M = lam*eta."""

    m: np.ndarray
    lam: float = field(init=False)

    def __post_init__(self):
        m = np.array(self.m, dtype=float)
        if m.shape != (4, 4):
            raise GeometryError("MoebiusMap needs a 4x4 matrix")
        g = m.T @ ETA @ m
        lam = float(np.trace(g @ ETA) / 4.0)
        if lam <= 0.0 or np.max(np.abs(g - lam * ETA)) > 1e-10 * max(1.0, abs(lam)):
            raise GeometryError("matrix does not preserve the (3,1) form")
        m.flags.writeable = False
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "lam", lam)

    def apply(self, p: HomPoint) -> HomPoint:
        return HomPoint(tuple(self.m @ p.vec)).normalize()

    def inverse(self) -> "MoebiusMap":
        return MoebiusMap(np.linalg.inv(self.m))

    def compose(self, other: "MoebiusMap") -> "MoebiusMap":
        return MoebiusMap(self.m @ other.m)


def _generator_coefficients(G: np.ndarray) -> np.ndarray:
    basis = [_GENERATORS[n] for n in GENERATOR_NAMES]
    return np.array([float(np.sum(G * b)) / 2.0 for b in basis])


def moebius_exp(G: np.ndarray, s: float = 1.0) -> MoebiusMap:
    """exp(s*G) for G in the span of the six generators.

    A pure rotation or pure boost gets its exact cos/sin or cosh/sinh
    block; mixed elements go through scaling-and-squaring (scipy expm).
    """
    G = np.asarray(G, dtype=float)
    if np.max(np.abs(G.T @ ETA + ETA @ G)) > 1e-12 * max(1.0, float(np.max(np.abs(G)))):
        raise GeometryError("G is not in so(3,1)")
    coefs = _generator_coefficients(G)
    nz = np.nonzero(np.abs(coefs) > 0.0)[0]
    if len(nz) == 1 and np.allclose(G, coefs[nz[0]] * _GENERATORS[GENERATOR_NAMES[nz[0]]], atol=0.0):
        name = GENERATOR_NAMES[nz[0]]
        a = s * coefs[nz[0]]
        M = np.eye(4)
        axes = {
            "Rx": (1, 2), "Ry": (2, 0), "Rz": (0, 1),
            "Bx": (0, 3), "By": (1, 3), "Bz": (2, 3),
        }[name]
        i, j = axes
        if name.startswith("R"):
            M[i, i] = M[j, j] = math.cos(a)
            M[i, j] = math.sin(a)
            M[j, i] = -math.sin(a)
        else:
            M[i, i] = M[j, j] = math.cosh(a)
            M[i, j] = M[j, i] = math.sinh(a)
        return MoebiusMap(M)
    return MoebiusMap(scipy.linalg.expm(s * G))


def random_moebius(rng: np.random.Generator, scale: float = 0.6) -> MoebiusMap:
    """Seeded random group element: exponential of a random algebra element."""
    coefs = rng.uniform(-scale, scale, size=6)
    G = sum(c * _GENERATORS[n] for c, n in zip(coefs, GENERATOR_NAMES))
    return moebius_exp(G, 1.0)


@dataclass(frozen=True)
class CircleIntersection:
    """Real intersection of two plane circle/line loci."""

    points: tuple[PlanarPoint, ...]
    tangent: bool = False


def _line_circle_points(a: float, b: float, c: float, circ: PlanarCircle,
                        tol: float) -> CircleIntersection:
    """Intersect line a*x+b*y+c=0 with a circle or line locus."""
    if circ.is_line:
        det = a * circ.B - b * circ.A
        norm = max(abs(a) + abs(b), abs(circ.A) + abs(circ.B))
        if abs(det) <= tol * norm ** 2:
            return CircleIntersection(())
        x = (b * circ.C - circ.B * c) / det
        y = (circ.A * c - a * circ.C) / det
        return CircleIntersection((PlanarPoint(x, y),))
    # parametrize the line by its closest point to the circle center
    n2 = a * a + b * b
    cx, cy = circ.center.x, circ.center.y
    r = circ.radius
    # signed distance from center to line
    d = (a * cx + b * cy + c) / math.sqrt(n2)
    fx = cx - a * d / math.sqrt(n2)
    fy = cy - b * d / math.sqrt(n2)
    disc = r * r - d * d
    scale = r * r + d * d
    if abs(disc) <= 1e-10 * max(scale, 1e-300):
        return CircleIntersection((PlanarPoint(fx, fy),), tangent=True)
    if disc < 0.0:
        return CircleIntersection(())
    h = math.sqrt(disc)
    tx, ty = -b / math.sqrt(n2), a / math.sqrt(n2)
    p1 = PlanarPoint(fx + h * tx, fy + h * ty)
    p2 = PlanarPoint(fx - h * tx, fy - h * ty)
    return CircleIntersection((p1, p2))


def circle_circle_intersect(c1: PlanarCircle, c2: PlanarCircle,
                            tol: float = 1e-10) -> CircleIntersection:
    """Real intersection points of two distinct circle/line loci.

    Works by radical-line reduction; a multiplicity-2 tangency comes back
    as a single point with the tangent flag set.
    """
    q1 = _normalize4(c1.quad)
    q2 = _normalize4(c2.quad)
    if np.max(np.abs(q1 - q2)) <= tol or np.max(np.abs(q1 + q2)) <= tol:
        raise CoincidentCircles("proportional quadruples")
    if c1.is_line and c2.is_line:
        return _line_circle_points(c1.A, c1.B, c1.C, c2, tol)
    if c1.is_line:
        return _line_circle_points(c1.A, c1.B, c1.C, c2, tol)
    if c2.is_line:
        return _line_circle_points(c2.A, c2.B, c2.C, c1, tol)
    # radical line of the two circles
    e1, e2 = c1.eps, c2.eps
    a = c1.A / e1 - c2.A / e2
    b = c1.B / e1 - c2.B / e2
    c = c1.C / e1 - c2.C / e2
    if abs(a) + abs(b) <= tol:
        return CircleIntersection(())  # concentric
    return _line_circle_points(a, b, c, c1, tol)
