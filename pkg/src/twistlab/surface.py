"""Representations of the genus-g surface group into SU(2).

A SurfaceRep stores the images of the 2g standard generators, in the order
a1, b1, ..., ag, bg, and must satisfy the defining relation
[a1,b1]...[ag,bg] = 1 up to a small numerical defect.

Sampling draws Haar-random images for the first g-1 handles and closes the
relation with a constructive solution of the commutator equation [A,B] = C.
The sampling measure is the Haar pushforward on the relator variety (not the
symplectic volume); both are equivalent for "generic point" purposes.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from . import su2
from .exact import frac_dist_mult
from .su2 import UnitQuaternion, IDENTITY
from .words import Word, a, b, letter_name, relator

RELATOR_TOL = 1e-12


class CommutatorSolveError(ArithmeticError):
    """solve_commutator ran out of axis retries."""


class NormalizationError(ValueError):
    """gauge_normalize cannot fix the gauge for this representation."""


@dataclass(frozen=True)
class SurfaceRep:
    genus: int
    images: tuple[UnitQuaternion, ...]

    def __post_init__(self):
        if self.genus < 2:
            raise ValueError("genus must be >= 2")
        if len(self.images) != 2 * self.genus:
            raise ValueError("need 2*genus generator images")

    def image_of_letter(self, letter: int) -> UnitQuaternion:
        k = abs(letter)
        if not 1 <= k <= 2 * self.genus:
            raise ValueError(f"letter {letter} out of range for genus {self.genus}")
        q = self.images[k - 1]
        return q if letter > 0 else su2.inverse(q)

    def with_images(self, images) -> "SurfaceRep":
        return SurfaceRep(self.genus, tuple(images))

    def to_json(self) -> dict:
        return {"genus": self.genus,
                "generators": [q.to_list() for q in self.images]}

    @classmethod
    def from_json(cls, d: dict) -> "SurfaceRep":
        return cls(int(d["genus"]),
                   tuple(UnitQuaternion.from_list(v) for v in d["generators"]))


def evaluate(word: Word, rep: SurfaceRep) -> UnitQuaternion:
    """Image of a word under the representation.

    Runs of a repeated letter go through the closed-form power so long twist
    words like a1^n cost O(1) group operations per run.
    """
    out = IDENTITY
    letters = word.letters
    i = 0
    while i < len(letters):
        j = i
        while j < len(letters) and letters[j] == letters[i]:
            j += 1
        base = rep.image_of_letter(abs(letters[i]))
        n = (j - i) if letters[i] > 0 else -(j - i)
        out = su2.mul(out, base if n == 1 else su2.power(base, n))
        i = j
    return out


def relator_defect(rep: SurfaceRep) -> float:
    return su2.distance(evaluate(relator(rep.genus), rep), IDENTITY)


def _rotation_between(v1, v2) -> UnitQuaternion:
    """Unit quaternion whose conjugation maps unit vector v1 to v2."""
    d = float(np.dot(v1, v2))
    c = np.cross(v1, v2)
    if d < -1.0 + 1e-12:
        # antipodal: half-turn about any axis orthogonal to v1
        axis = np.cross(v1, [1.0, 0.0, 0.0])
        if np.linalg.norm(axis) < 1e-6:
            axis = np.cross(v1, [0.0, 1.0, 0.0])
        axis = axis / np.linalg.norm(axis)
        return su2.from_axis_angle(axis, math.pi / 2)
    n = math.sqrt((1.0 + d) ** 2 + float(np.dot(c, c)))
    return su2._make((1.0 + d) / n, c[0] / n, c[1] / n, c[2] / n)


def solve_commutator(C: UnitQuaternion, rng: np.random.Generator,
                     max_retries: int = 64) -> tuple[UnitQuaternion, UnitQuaternion]:
    """Find (A, B) with A B A^-1 B^-1 = C, for any C in SU(2).

    A gets a random axis u; its angle solves tr(A^-1 C) = tr(A^-1), which is
    the solvability condition for B.  B is then any rotation carrying
    Im(A^-1) onto Im(A^-1 C); the leftover circle of freedom (rotations about
    the axis of A) is sampled uniformly.
    """
    im_norm = math.sqrt(C.x * C.x + C.y * C.y + C.z * C.z)
    if im_norm < 1e-13:
        if C.w > 0:            # C ~ identity: any commuting pair works
            A = su2.haar_sample(rng)
            while su2.theta(A) < 1e-6 or su2.theta(A) > 1 - 1e-6:
                A = su2.haar_sample(rng)
            B = su2.flow_factor(A, rng.uniform(0.0, 2.0))
            return A, B
        # C ~ -1: conjugate the exact model pair (i, j)
        g = su2.haar_sample(rng)
        return su2.conj_by(g, su2.QI), su2.conj_by(g, su2.QJ)

    cvec = np.array([C.x, C.y, C.z])
    for _ in range(max_retries):
        u = rng.standard_normal(3)
        nu = float(np.linalg.norm(u))
        if nu < 1e-6:
            continue
        u = u / nu
        dot = float(np.dot(u, cvec))
        psi = math.atan2(1.0 - C.w, dot)
        if abs(math.sin(psi)) < 1e-9:
            continue                      # A would be central, no conjugator
        A = su2.from_axis_angle(u, psi)
        Ainv = su2.inverse(A)
        AinvC = su2.mul(Ainv, C)
        v1 = np.array(Ainv.imag())
        v2 = np.array(AinvC.imag())
        n1, n2 = np.linalg.norm(v1), np.linalg.norm(v2)
        if n1 < 1e-9 or n2 < 1e-9:
            continue
        B0 = _rotation_between(v1 / n1, v2 / n2)
        B = su2.mul(B0, su2.flow_factor(A, rng.uniform(0.0, 2.0)))
        defect = su2.distance(su2.mul(su2.mul(A, B), su2.mul(Ainv, su2.inverse(B))), C)
        if defect <= 1e-12:
            return A, B
    raise CommutatorSolveError(f"no commutator solution after {max_retries} retries")


def sample(genus: int, rng: np.random.Generator) -> SurfaceRep:
    """Haar-pushforward sample on the relator variety.

    A_i, B_i are Haar for i < g; the last handle closes the relation:
    (A_g, B_g) solves [A_g, B_g] = (prod_{i<g} [A_i, B_i])^-1.
    """
    if genus < 2:
        raise ValueError("genus must be >= 2")
    for _ in range(16):
        images: list[UnitQuaternion] = []
        prod = IDENTITY
        for _i in range(genus - 1):
            A = su2.haar_sample(rng)
            B = su2.haar_sample(rng)
            images += [A, B]
            comm = su2.mul(su2.mul(A, B), su2.mul(su2.inverse(A), su2.inverse(B)))
            prod = su2.mul(prod, comm)
        Ag, Bg = solve_commutator(su2.inverse(prod), rng)
        rep = SurfaceRep(genus, tuple(images + [Ag, Bg]))
        if relator_defect(rep) <= RELATOR_TOL:
            return rep
    raise CommutatorSolveError("sampler could not reach relator tolerance")


def sample_seeded(genus: int, seed: int) -> SurfaceRep:
    return sample(genus, np.random.default_rng(seed))


def is_irreducible(rep: SurfaceRep, tol: float = 1e-6) -> bool:
    """True iff some pair of generator images fails to commute (within tol)."""
    if tol <= 0:
        raise ValueError("tol must be positive")
    qs = rep.images
    for p, q in itertools.combinations(qs, 2):
        comm = su2.mul(su2.mul(p, q), su2.mul(su2.inverse(p), su2.inverse(q)))
        if su2.distance(comm, IDENTITY) > tol:
            return True
    return False


def _binary_dihedral_axis(rep: SurfaceRep, tol: float) -> bool:
    """Check for a unit vector u making the image lie in the normalizer of
    the u-axis circle: every generator is a rotation about +-u, or a
    half-turn (theta = 1/2) about an axis orthogonal to u."""
    axes = []
    for q in rep.images:
        aa = su2.axis_angle(q)
        if not aa.central:
            axes.append(np.array(aa.axis))
    if not axes:
        return True        # all central: certainly not dense
    candidates = list(axes)
    for v1, v2 in itertools.combinations(axes, 2):
        c = np.cross(v1, v2)
        n = np.linalg.norm(c)
        if n > 1e-8:
            candidates.append(c / n)
    for u in candidates:
        ok = True
        for q in rep.images:
            aa = su2.axis_angle(q)
            if aa.central:
                continue
            d = abs(float(np.dot(aa.axis, u)))
            parallel = d >= 1.0 - tol
            half_turn_perp = (abs(su2.theta(q) - 0.5) <= tol) and d <= tol
            if not (parallel or half_turn_perp):
                ok = False
                break
        if ok:
            return True
    return False


def random_reduced_word(genus: int, length: int, rng: np.random.Generator) -> Word:
    letters: list[int] = []
    n_gen = 2 * genus
    while len(letters) < length:
        ltr = int(rng.integers(1, n_gen + 1)) * (1 if rng.integers(2) else -1)
        if letters and letters[-1] == -ltr:
            continue
        letters.append(ltr)
    return Word(tuple(letters))


def has_dense_image(rep: SurfaceRep, samples: int = 32, tol: float = 1e-6,
                    rng: np.random.Generator | None = None) -> bool:
    """Heuristic Previte-Xia test: is the image (topologically) dense?

    False if reducible, or if the image sits in the normalizer of a circle
    (binary dihedral pattern), or if the normalized angles of `samples`
    random words all sit within tol of rationals with denominator <= 60
    (every finite subgroup of SU(2) has all its angles of that form).
    Otherwise True.  Deterministic given rng.
    """
    if not is_irreducible(rep, tol=max(tol, 1e-9)):
        return False
    if _binary_dihedral_axis(rep, tol):
        return False
    if rng is None:
        rng = np.random.default_rng(7)
    all_near_rational = True
    for _ in range(samples):
        w = random_reduced_word(rep.genus, 12, rng)
        th = su2.theta(evaluate(w, rep))
        near = any(frac_dist_mult(q, th) <= q * tol for q in range(1, 61))
        if not near:
            all_near_rational = False
            break
    return not all_near_rational


def conjugate_rep(g: UnitQuaternion, rep: SurfaceRep) -> SurfaceRep:
    return rep.with_images(su2.conj_by(g, q) for q in rep.images)


def gauge_normalize(rep: SurfaceRep) -> SurfaceRep:
    """Canonical representative of the conjugacy class [rho].

    Conjugates so the axis of rho(a1) is +z and the axis of the first
    generator not commuting with rho(a1) lies in the xz-plane with x > 0.
    Idempotent; fails (NormalizationError) when rho(a1) is central or
    everything commutes with it.
    """
    A1 = rep.images[0]
    aa = su2.axis_angle(A1)
    if aa.central:
        raise NormalizationError("rho(a1) is central, axis gauge undefined")
    partner = None
    for q in rep.images[1:]:
        comm = su2.mul(su2.mul(A1, q), su2.mul(su2.inverse(A1), su2.inverse(q)))
        if su2.distance(comm, IDENTITY) > 1e-8:
            partner = q
            break
    if partner is None:
        raise NormalizationError("every generator commutes with rho(a1)")
    g1 = _rotation_between(np.array(aa.axis), np.array([0.0, 0.0, 1.0]))
    v = np.array(su2.axis_of(su2.conj_by(g1, partner)))
    phi = math.atan2(v[1], v[0])
    # conjugation by exp(-phi/2 * k) rotates vectors by -phi about z
    g2 = su2._make(math.cos(phi / 2.0), 0.0, 0.0, -math.sin(phi / 2.0))
    return conjugate_rep(su2.mul(g2, g1), rep)


# ---------------------------------------------------------------------------
# trace fingerprints: numeric coordinates on the character variety
# ---------------------------------------------------------------------------

_WORDSET_CACHE: dict[int, tuple[tuple[str, ...], tuple[Word, ...]]] = {}


def fingerprint_words(genus: int) -> tuple[tuple[str, ...], tuple[Word, ...]]:
    """The fixed word set W: all single generators, all pairs x_i x_j with
    i < j, and all triples x_i x_j x_k with i < j < k among the first
    min(2g, 6) generators.  Traces over W separate generic irreducible
    characters (Fricke-style coordinates)."""
    if genus in _WORDSET_CACHE:
        return _WORDSET_CACHE[genus]
    n = 2 * genus
    names: list[str] = []
    ws: list[Word] = []
    for i in range(1, n + 1):
        names.append(letter_name(i))
        ws.append(Word.of(i))
    for i, j in itertools.combinations(range(1, n + 1), 2):
        names.append(f"{letter_name(i)}*{letter_name(j)}")
        ws.append(Word.of(i, j))
    m = min(n, 6)
    for i, j, k in itertools.combinations(range(1, m + 1), 3):
        names.append(f"{letter_name(i)}*{letter_name(j)}*{letter_name(k)}")
        ws.append(Word.of(i, j, k))
    _WORDSET_CACHE[genus] = (tuple(names), tuple(ws))
    return _WORDSET_CACHE[genus]


@dataclass(frozen=True)
class Fingerprint:
    genus: int
    names: tuple[str, ...]
    traces: np.ndarray

    def __post_init__(self):
        if np.max(np.abs(self.traces)) > 2.0 + 1e-9:
            raise ValueError("trace outside [-2, 2]")


def fingerprint(rep: SurfaceRep) -> Fingerprint:
    names, ws = fingerprint_words(rep.genus)
    traces = np.array([evaluate(w, rep).trace() for w in ws])
    return Fingerprint(rep.genus, names, traces)


def char_distance(rep1: SurfaceRep, rep2: SurfaceRep) -> float:
    """Max absolute trace difference over the fingerprint word set.
    Zero on conjugate pairs; a metric on generic irreducible characters."""
    if rep1.genus != rep2.genus:
        raise ValueError("character distance needs equal genus")
    f1, f2 = fingerprint(rep1), fingerprint(rep2)
    return float(np.max(np.abs(f1.traces - f2.traces)))


# ---------------------------------------------------------------------------
# degenerate representations, constructed on demand as negative controls
# ---------------------------------------------------------------------------

def make_abelian_rep(genus: int, fracs=None) -> SurfaceRep:
    """All generator images rotations about the x-axis: reducible, and the
    relator holds automatically.  Default angle fractions are eighths, so
    every image has finite order and twist orbits stay on a finite set."""
    if fracs is None:
        fracs = [((2 * k + 1) % 8) / 8 for k in range(2 * genus)]
    if len(fracs) != 2 * genus:
        raise ValueError("need 2*genus angle fractions")
    images = tuple(su2.from_axis_angle((1.0, 0.0, 0.0), math.pi * f) for f in fracs)
    return SurfaceRep(genus, images)


def make_binary_dihedral_rep(genus: int, frac: float = 1 / math.sqrt(5)) -> SurfaceRep:
    """Irreducible but non-dense: image in the normalizer of the x-axis
    circle.  a1, a2 are x-rotations by opposite angles, every b_i is the
    half-turn j; extra handles get trivial a_i."""
    x = (1.0, 0.0, 0.0)
    A1 = su2.from_axis_angle(x, math.pi * frac)
    A2 = su2.from_axis_angle(x, -math.pi * frac)
    images = [A1, su2.QJ, A2, su2.QJ]
    for _ in range(genus - 2):
        images += [IDENTITY, su2.QJ]
    return SurfaceRep(genus, tuple(images))
