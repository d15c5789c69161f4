"""Twist flows along simple closed curves, and the maps built from them.

The time-t flow along a base curve multiplies the crossing generator image
by a rotation about the axis of the curve's image:

    along a_i:   B_i -> B_i * exp(-pi t u(A_i))
    along b_i:   A_i -> A_i * exp(+pi t u(B_i))

The signs are calibrated (once, here) so that the twist action of the
mapping-class module satisfies tau_gamma . [rho] = Phi_gamma^theta([rho])
with the conventions A(i): b_i -> b_i a_i and phi . [rho] = [rho o phi^-1].
With this normalization the flow has period exactly 2 on representations
and on characters: the time-1 map flips the sign of the crossing generator,
which changes traces.  All long-time flows therefore reduce their time
argument mod 2, exactly (integer arithmetic on the float's bit pattern),
so tau^n stays accurate for n ~ 1e9.

Any non-separating curve reachable as a mapping-class image of a base curve
is usable through a CurveHandle with a conjugator: the flow along phi(gamma)
is apply(phi) o Phi_gamma^t o apply(phi^-1).
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from . import su2
from .exact import mul_mod
from .mapping import MappingClass, TwistGen, act_on_curve, apply
from .surface import SurfaceRep, evaluate
from .words import Word, a, b

_SINGULAR_TOL = 1e-12


class FlowSingularError(ValueError):
    """Twist flow requested at a curve whose image is central (theta in {0,1})."""


@dataclass(frozen=True)
class CurveHandle:
    """A twistable curve: a base curve a_i or b_i, optionally pushed around
    by a mapping class (the curve is conjugator(base))."""
    kind: str               # 'a' or 'b'
    index: int
    conjugator: MappingClass | None = None

    def __post_init__(self):
        if self.kind not in ("a", "b"):
            raise ValueError("base curve must be a_i or b_i")
        if self.index < 1:
            raise ValueError("curve index must be >= 1")

    def base_letter(self) -> int:
        return a(self.index) if self.kind == "a" else b(self.index)

    def base_word(self) -> Word:
        return Word.of(self.base_letter())

    def curve_word(self) -> Word:
        """The curve as an element of the surface group (symbolic)."""
        if self.conjugator is None:
            return self.base_word()
        return act_on_curve(self.conjugator, self.base_word())

    def twist_class(self, genus: int | None = None) -> MappingClass:
        """tau_{phi(gamma)} = phi tau_gamma phi^-1 as a twist word."""
        if self.conjugator is not None:
            genus = self.conjugator.genus
        elif genus is None:
            genus = max(2, self.index)
        base = MappingClass.of(genus, TwistGen(self.kind, self.index))
        if self.conjugator is None:
            return base
        return self.conjugator * base * self.conjugator.inverse()

    def __str__(self):
        base = f"{self.kind}{self.index}"
        if self.conjugator is None:
            return base
        return f"{self.conjugator}({base})"

    @classmethod
    def parse(cls, s: str, genus: int) -> "CurveHandle":
        """Parse "a1", "b2", or "<twistword>(a1)"."""
        s = s.strip()
        m = re.fullmatch(r"(.+)\(\s*([abAB])(\d+)\s*\)", s)
        if m:
            conj = MappingClass.parse(genus, m.group(1))
            return cls(m.group(2).lower(), int(m.group(3)), conj)
        m = re.fullmatch(r"([abAB])(\d+)", s)
        if not m:
            raise ValueError(f"cannot parse curve handle {s!r}")
        return cls(m.group(1).lower(), int(m.group(2)), None)


def _base_images(c: CurveHandle, rep: SurfaceRep):
    """(curve image, crossing generator position) for a base curve."""
    i = c.index
    if 2 * i > 2 * rep.genus:
        raise ValueError(f"curve {c} out of range for genus {rep.genus}")
    if c.kind == "a":
        return rep.images[2 * i - 2], 2 * i - 1     # curve A_i, crossing b_i
    return rep.images[2 * i - 1], 2 * i - 2         # curve B_i, crossing a_i


def _check_not_singular(q, c: CurveHandle):
    s = (q.x * q.x + q.y * q.y + q.z * q.z) ** 0.5
    if s < _SINGULAR_TOL:
        raise FlowSingularError(
            f"curve {c} has central image (theta in {{0,1}}), flow undefined")


def _base_flow(c: CurveHandle, t: float, rep: SurfaceRep) -> SurfaceRep:
    curve_q, crossing_pos = _base_images(c, rep)
    _check_not_singular(curve_q, c)
    sgn = -1.0 if c.kind == "a" else 1.0
    factor = su2.flow_factor(curve_q, sgn * t)
    images = list(rep.images)
    images[crossing_pos] = su2.mul(images[crossing_pos], factor)
    return rep.with_images(images)


def _pull_back(c: CurveHandle, rep: SurfaceRep) -> SurfaceRep:
    return apply(c.conjugator.inverse(), rep) if c.conjugator else rep


def theta_of(c: CurveHandle, rep: SurfaceRep) -> float:
    """theta of the curve's image, theta_gamma([rho])."""
    if c.conjugator is None:
        q, _ = _base_images(c, rep)
        return su2.theta(q)
    return su2.theta(evaluate(c.curve_word(), rep))


def twist_flow(c: CurveHandle, t: float, rep: SurfaceRep) -> SurfaceRep:
    """Time-t twist flow along the curve; requires theta_c(rho) in (0,1)."""
    if c.conjugator is None:
        return _base_flow(c, t, rep)
    pulled = _pull_back(c, rep)
    return apply(c.conjugator, _base_flow(CurveHandle(c.kind, c.index), t, pulled))


def twist_power(c: CurveHandle, n: int, rep: SurfaceRep) -> SurfaceRep:
    """tau_c^n . [rho] in O(1) flow evaluations: the flow time n*theta is
    reduced mod 2 exactly, so this matches n-fold twist application for any
    n an int can hold."""
    if n == 0:
        return rep
    if c.conjugator is None:
        q, _ = _base_images(c, rep)
        _check_not_singular(q, c)
        return _base_flow(c, mul_mod(n, su2.theta(q), 2), rep)
    pulled = _pull_back(c, rep)
    base = CurveHandle(c.kind, c.index)
    q, _ = _base_images(base, pulled)
    _check_not_singular(q, c)
    out = _base_flow(base, mul_mod(n, su2.theta(q), 2), pulled)
    return apply(c.conjugator, out)


def f_function(gamma: CurveHandle, delta: CurveHandle,
               rep: SurfaceRep, t: float) -> float:
    """f(t) = theta_gamma(Phi_delta^-t([rho])); smooth near t = 0 when
    theta_gamma([rho]) is in (0,1)."""
    return theta_of(gamma, twist_flow(delta, -t, rep))


def F_map(gamma: CurveHandle, delta: CurveHandle, rep: SurfaceRep,
          t: float, s: float) -> SurfaceRep:
    """F(t, s) = Phi_gamma^s Phi_delta^-t ([rho])."""
    return twist_flow(gamma, s, twist_flow(delta, -t, rep))
