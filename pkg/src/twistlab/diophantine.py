"""Continued fractions, convergents, and the search for twist-power
sequences with simultaneously small approximation scores.

For a pair (alpha, beta) the search looks for increasing integers q with

    kh_score(q) = q * ||q alpha||        (Khinchin-type condition)
    hl_score(q) = ||q beta - beta||      (Hardy-Littlewood-type condition)

both below configured thresholds, where ||x|| is the distance of x to the
nearest integer.  Almost every pair admits q's driving both to zero, but any
finite search can only certify thresholds, so scores are reported, never
asymptotics.  All q*x residues are computed exactly (integer arithmetic on
the float's bit pattern), so scores are meaningful up to q ~ 1e12.

The trivial q = 1 is excluded from candidate sets and scans: its kh score
equals ||alpha|| <= 1/2 for every alpha and carries no information about
approximability (badly approximable numbers would otherwise "pass" at
lenient thresholds through q = 1 alone).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .exact import frac_dist_mult

MAX_DEPTH = 40          # double precision cannot support deeper expansions
MAX_EXHAUSTIVE = 10 ** 6
MAX_Q = 10 ** 12


def frac_dist(x: float) -> float:
    """Distance of x to the nearest integer, in [0, 1/2]."""
    f = x - math.floor(x)
    return min(f, 1.0 - f)


@dataclass(frozen=True)
class ContinuedFraction:
    value: float
    quotients: tuple[int, ...]
    convergents: tuple[tuple[int, int], ...]    # (p_n, q_n), q strictly increasing

    def denominators(self) -> tuple[int, ...]:
        return tuple(q for _, q in self.convergents)


def continued_fraction(x: float, depth: int = MAX_DEPTH) -> ContinuedFraction:
    """Expansion of x in (0,1) by the Gauss map, on the exact rational the
    float stores.  Stops at `depth` quotients, when the remainder drops
    below 1e-14, or at the double's information horizon (see below): past
    those points the quotients are float noise, not structure.

    Convergents come from the standard recurrence and start at p_1/q_1 =
    1/a_1; denominators are strictly increasing and each stored convergent
    is a true convergent of the exact expansion, so all the classical facts
    (best approximation, determinant identity, |q_n x - p_n| < 1/q_{n+1})
    hold.  One precision-boundary quirk is inherited from the input: the
    float nearest to a rational [a_1..a_k] can expand as [a_1..a_k-1, 1]
    (the canonical split of the last quotient) before the noise cut.
    """
    if not 0.0 < x < 1.0:
        raise ValueError("continued_fraction needs x in (0,1)")
    if not 1 <= depth <= MAX_DEPTH:
        raise ValueError(f"depth must be in [1, {MAX_DEPTH}]")
    num, den = x.as_integer_ratio()
    quotients: list[int] = []
    q_prev_, q_cur_ = 0, 1
    while len(quotients) < depth and num != 0:
        a = den // num
        # information horizon of a double: a convergent with
        # q_n * q_{n+1} >~ 2^49 resolves below the input's own rounding,
        # so such quotients are float noise, not structure
        if q_cur_ * (a * q_cur_ + q_prev_) > 2 ** 49:
            break
        num, den = den - a * num, num
        quotients.append(a)
        q_prev_, q_cur_ = q_cur_, a * q_cur_ + q_prev_
        if num != 0 and num / den < 1e-14:
            break
    convergents: list[tuple[int, int]] = []
    p_prev, p_cur = 1, 0       # (p_-1, q_-1) = (1, 0), (p_0, q_0) = (0, 1)
    q_prev, q_cur = 0, 1
    for a in quotients:
        p_prev, p_cur = p_cur, a * p_cur + p_prev
        q_prev, q_cur = q_cur, a * q_cur + q_prev
        convergents.append((p_cur, q_cur))
    return ContinuedFraction(x, tuple(quotients), tuple(convergents))


def from_quotients(quotients) -> float:
    """Value of the continued fraction [0; a_1, a_2, ...], exactly evaluated
    and rounded once to float."""
    qs = list(quotients)
    if not qs or len(qs) > MAX_DEPTH:
        raise ValueError(f"need 1..{MAX_DEPTH} quotients")
    if any(int(a) != a or a < 1 for a in qs):
        raise ValueError("quotients must be positive integers")
    val = Fraction(0)
    for a in reversed(qs):
        val = Fraction(1, 1) / (int(a) + val)
    return float(val)


@dataclass(frozen=True)
class ApproxSequence:
    alpha: float
    beta: float
    entries: tuple[tuple[int, float, float], ...]   # (q, kh_score, hl_score)
    kh_threshold: float
    hl_threshold: float
    kh_floor: float          # best score seen among all scanned candidates
    hl_floor: float
    candidates_scanned: int
    exhaustive: bool = False

    def qs(self) -> tuple[int, ...]:
        return tuple(q for q, _, _ in self.entries)

    def __len__(self):
        return len(self.entries)


def kh_score(q: int, alpha: float) -> float:
    return q * frac_dist_mult(q, alpha)


def hl_score(q: int, beta: float) -> float:
    # ||{q beta} - beta|| = ||(q-1) beta||
    return frac_dist_mult(q - 1, beta)


def candidate_qs(alpha: float, q_max: int, q_min: int = 2,
                 multiple_cap: int = 8, depth: int = MAX_DEPTH) -> list[int]:
    """Convergent denominators of alpha and their small multiples, the
    natural home of small kh scores; multiples help the beta condition and
    fix parity when the caller works mod 2."""
    cf = continued_fraction(alpha, depth)
    cands = {k * q for _, q in cf.convergents
             for k in range(1, multiple_cap + 1) if q_min <= k * q <= q_max}
    return sorted(cands)


def find_approx_sequence(alpha: float, beta: float, q_max: int,
                         kh_threshold: float, hl_threshold: float,
                         exhaustive: bool = False, q_min: int = 2,
                         multiple_cap: int = 8) -> ApproxSequence:
    """Increasing q's with both scores under their thresholds.

    Candidates are convergent denominators of alpha (plus multiples up to
    multiple_cap), or every q in [q_min, q_max] in exhaustive mode
    (q_max <= 1e6 there).  An empty result is a valid outcome; the achieved
    score floors are always reported.
    """
    if not (0.0 < alpha < 1.0 and 0.0 < beta < 1.0):
        raise ValueError("alpha and beta must lie in (0,1)")
    if not 1 <= q_max <= MAX_Q:
        raise ValueError(f"q_max must be in [1, {MAX_Q}]")
    entries = []
    kh_floor, hl_floor = math.inf, math.inf
    scanned = 0
    if exhaustive:
        if q_max > MAX_EXHAUSTIVE:
            raise ValueError(f"exhaustive scan capped at q_max = {MAX_EXHAUSTIVE}")
        ma, da = alpha.as_integer_ratio()
        mb, db = beta.as_integer_ratio()
        ra = (q_min * ma) % da
        rb = ((q_min - 1) * mb) % db
        for q in range(q_min, q_max + 1):
            kh = q * (min(ra, da - ra) / da)
            hl = min(rb, db - rb) / db
            scanned += 1
            kh_floor = min(kh_floor, kh)
            hl_floor = min(hl_floor, hl)
            if kh <= kh_threshold and hl <= hl_threshold:
                entries.append((q, kh, hl))
            ra += ma
            if ra >= da:
                ra -= da
            rb += mb
            if rb >= db:
                rb -= db
    else:
        for q in candidate_qs(alpha, q_max, q_min, multiple_cap):
            kh = kh_score(q, alpha)
            hl = hl_score(q, beta)
            scanned += 1
            kh_floor = min(kh_floor, kh)
            hl_floor = min(hl_floor, hl)
            if kh <= kh_threshold and hl <= hl_threshold:
                entries.append((q, kh, hl))
    return ApproxSequence(alpha, beta, tuple(entries), kh_threshold,
                          hl_threshold, kh_floor, hl_floor, scanned, exhaustive)


def min_kh_score(alpha: float, q_max: int, q_min: int = 2) -> tuple[float, int]:
    """Exhaustive (min over q of q*||q alpha||, argmin), exact residues."""
    if q_max > MAX_EXHAUSTIVE:
        raise ValueError(f"exhaustive scan capped at q_max = {MAX_EXHAUSTIVE}")
    ma, da = alpha.as_integer_ratio()
    ra = (q_min * ma) % da
    best, best_q = math.inf, q_min
    for q in range(q_min, q_max + 1):
        kh = q * (min(ra, da - ra) / da)
        if kh < best:
            best, best_q = kh, q
        ra += ma
        if ra >= da:
            ra -= da
    return best, best_q
