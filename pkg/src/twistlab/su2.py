"""Unit quaternion model of SU(2).

A quaternion q = w + x i + y j + z k with w^2+x^2+y^2+z^2 = 1 corresponds to
the SU(2) matrix with trace 2w.  Every non-central element factors as
q = cos(pi*t) + sin(pi*t) * u with t in (0, 1) and u a unit imaginary
3-vector: ``theta`` returns t, ``axis_angle`` returns (u, pi*t).

The normalized angle t is the quantity the rest of the package cares about:
it is conjugation- and inversion-invariant, and powers/flow factors reduce
the angle exactly (see exact.mul_mod) so that q**n stays trustworthy for n
up to 1e9 and beyond.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .exact import mul_mod

_CENTRAL_SIN_TOL = 1e-12   # sin(angle) below this => treat as +-1, no axis
_AXIS_NORM_TOL = 1e-9


class CentralElementError(ValueError):
    """Axis requested for a central element +-1, where none exists."""


@dataclass(frozen=True)
class UnitQuaternion:
    w: float
    x: float
    y: float
    z: float

    def norm(self) -> float:
        return math.sqrt(self.w * self.w + self.x * self.x
                         + self.y * self.y + self.z * self.z)

    def trace(self) -> float:
        """Trace of the corresponding SU(2) matrix, in [-2, 2]."""
        return 2.0 * self.w

    def imag(self) -> tuple[float, float, float]:
        return (self.x, self.y, self.z)

    def to_list(self) -> list[float]:
        """JSON form: [w, x, y, z]."""
        return [self.w, self.x, self.y, self.z]

    @classmethod
    def from_list(cls, v) -> "UnitQuaternion":
        """Bit-exact inverse of to_list (no renormalization on load)."""
        if len(v) != 4:
            raise ValueError("quaternion JSON form is [w, x, y, z]")
        w, x, y, z = (float(c) for c in v)
        if abs(w * w + x * x + y * y + z * z - 1.0) > 1e-9:
            raise ValueError("not a unit quaternion")
        return cls(w, x, y, z)

    def __repr__(self):
        return (f"UnitQuaternion({self.w:+.12f}, {self.x:+.12f}, "
                f"{self.y:+.12f}, {self.z:+.12f})")


IDENTITY = UnitQuaternion(1.0, 0.0, 0.0, 0.0)
MINUS_ONE = UnitQuaternion(-1.0, 0.0, 0.0, 0.0)
QI = UnitQuaternion(0.0, 1.0, 0.0, 0.0)
QJ = UnitQuaternion(0.0, 0.0, 1.0, 0.0)
QK = UnitQuaternion(0.0, 0.0, 0.0, 1.0)


def _make(w: float, x: float, y: float, z: float) -> UnitQuaternion:
    """Build a unit quaternion, renormalizing to absorb rounding drift."""
    n2 = w * w + x * x + y * y + z * z
    if abs(n2 - 1.0) > 1e-6:
        raise ValueError(f"quaternion norm too far from 1: |q|^2 = {n2}")
    if n2 != 1.0:
        s = 1.0 / math.sqrt(n2)
        w, x, y, z = w * s, x * s, y * s, z * s
    return UnitQuaternion(w, x, y, z)


def mul(p: UnitQuaternion, q: UnitQuaternion) -> UnitQuaternion:
    """Hamilton product p*q (group law of SU(2)), renormalized."""
    w = p.w * q.w - p.x * q.x - p.y * q.y - p.z * q.z
    x = p.w * q.x + p.x * q.w + p.y * q.z - p.z * q.y
    y = p.w * q.y + p.y * q.w + p.z * q.x - p.x * q.z
    z = p.w * q.z + p.z * q.w + p.x * q.y - p.y * q.x
    return _make(w, x, y, z)


def inverse(q: UnitQuaternion) -> UnitQuaternion:
    return UnitQuaternion(q.w, -q.x, -q.y, -q.z)


def conj_by(g: UnitQuaternion, q: UnitQuaternion) -> UnitQuaternion:
    """g q g^-1."""
    return mul(mul(g, q), inverse(g))


def distance(p: UnitQuaternion, q: UnitQuaternion) -> float:
    """Euclidean distance of the two 4-vectors."""
    return math.sqrt((p.w - q.w) ** 2 + (p.x - q.x) ** 2
                     + (p.y - q.y) ** 2 + (p.z - q.z) ** 2)


def theta(q: UnitQuaternion) -> float:
    """Normalized rotation angle (1/pi) * arccos(tr/2), in [0, 1].

    Evaluated as atan2(|Im q|, w)/pi, which agrees with arccos(w)/pi on unit
    quaternions but stays fully conditioned near the central elements (no
    clamping needed: atan2 never leaves [0, pi]).  Invariant under
    conjugation and inversion.
    """
    s = math.sqrt(q.x * q.x + q.y * q.y + q.z * q.z)
    return math.atan2(s, q.w) / math.pi


@dataclass(frozen=True)
class AxisAngle:
    """Axis-angle form q = cos(angle) + sin(angle) * axis.

    For central q (+-1) no axis exists; ``central`` is True and axis is None.
    angle is in [0, pi].
    """
    axis: tuple[float, float, float] | None
    angle: float
    central: bool


def axis_angle(q: UnitQuaternion) -> AxisAngle:
    s = math.sqrt(q.x * q.x + q.y * q.y + q.z * q.z)
    ang = math.atan2(s, q.w)
    if s < _CENTRAL_SIN_TOL:
        return AxisAngle(None, 0.0 if q.w > 0 else math.pi, True)
    return AxisAngle((q.x / s, q.y / s, q.z / s), ang, False)


def axis_of(q: UnitQuaternion) -> tuple[float, float, float]:
    """Unit imaginary direction of q; raises on central elements."""
    aa = axis_angle(q)
    if aa.central:
        raise CentralElementError("central element +-1 has no axis")
    return aa.axis


def from_axis_angle(axis, angle: float) -> UnitQuaternion:
    """cos(angle) + sin(angle) * (axis . (i,j,k)); axis must be unit."""
    ux, uy, uz = float(axis[0]), float(axis[1]), float(axis[2])
    n = math.sqrt(ux * ux + uy * uy + uz * uz)
    if abs(n - 1.0) > _AXIS_NORM_TOL:
        raise ValueError(f"axis must be a unit vector, |axis| = {n}")
    c, s = math.cos(angle), math.sin(angle)
    return _make(c, s * ux, s * uy, s * uz)


def power(q: UnitQuaternion, n: int) -> UnitQuaternion:
    """q**n in closed form via exact mod-2 reduction of n*theta(q).

    Exact for central q.  For everything else the normalized angle t is
    reduced as n*t mod 2 with integer arithmetic on t's bit pattern, so the
    angle loses nothing even for |n| ~ 1e9.
    """
    n = int(n)
    if q.x == 0.0 and q.y == 0.0 and q.z == 0.0:
        return IDENTITY if (q.w > 0 or n % 2 == 0) else MINUS_ONE
    t = theta(q)
    s = math.sqrt(q.x * q.x + q.y * q.y + q.z * q.z)
    ux, uy, uz = q.x / s, q.y / s, q.z / s
    r = mul_mod(n, t, 2)          # n * t mod 2, exactly
    ang = math.pi * r
    c, sn = math.cos(ang), math.sin(ang)
    return _make(c, sn * ux, sn * uy, sn * uz)


def flow_factor(q: UnitQuaternion, t: float) -> UnitQuaternion:
    """exp(pi * t * u) where u is the axis of q.

    Satisfies flow_factor(q, theta(q)) = q and has exact period 2 in t.
    Raises CentralElementError when q = +-1 (no axis).
    """
    s = math.sqrt(q.x * q.x + q.y * q.y + q.z * q.z)
    if s < _CENTRAL_SIN_TOL:
        raise CentralElementError("flow factor undefined for central element")
    r = math.fmod(t, 2.0)
    ang = math.pi * r
    c, sn = math.cos(ang), math.sin(ang)
    return _make(c, sn * q.x / s, sn * q.y / s, sn * q.z / s)


def haar_sample(rng: np.random.Generator) -> UnitQuaternion:
    """Uniform (Haar) sample: four standard normals, normalized."""
    while True:
        v = rng.standard_normal(4)
        n = float(np.linalg.norm(v))
        if n > 1e-6:
            return UnitQuaternion(v[0] / n, v[1] / n, v[2] / n, v[3] / n)
