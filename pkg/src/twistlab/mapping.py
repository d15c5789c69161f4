"""Mapping classes as words in standard Dehn twist generators.

Twist generators, for the presentation [a1,b1]...[ag,bg] = 1:

  A(i)  twist along the curve a_i:    b_i -> b_i a_i, all else fixed
  B(i)  twist along the curve b_i:    a_i -> a_i b_i^-1
  C(i)  twist along the chain curve encircling handles i and i+1
        (freely homotopic to a_i a_{i+1}; meets b_i and b_{i+1} once,
        disjoint from every a-curve)

The C(i) table is the unique exact-relator-preserving form of the insertion
pattern b_i -> (a_{i+1} a_i) b_i, b_{i+1} -> (a_i a_{i+1}) b_{i+1}: writing
u = a_i a_{i+1},

  a_i     -> u^-1 a_i u        (reduces to a_{i+1}^-1 a_i a_{i+1})
  b_i     -> u^-1 (a_{i+1} a_i b_i) u
  a_{i+1} -> u^-1 a_{i+1} u
  b_{i+1} -> b_{i+1} u

It fixes the relator of every genus exactly, fixes the word u, acts on
homology as the transvection along [a_i] + [a_{i+1}], satisfies the braid
relation with B(i) and B(i+1) and commutes with all A-twists (its inverse,
the opposite-handed twist, fails the braid test, which pins the handedness
to match A and B).  Adjacent chain curves C(i), C(i+1) intersect twice in
this model, so their twists do not commute.

Composition order: in a twist word the leftmost generator acts last.
A mapping class phi acts on conjugacy classes of representations by
phi . [rho] = [rho o phi^-1].
"""

from __future__ import annotations

import re
from dataclasses import dataclass

import numpy as np

from . import su2
from .surface import SurfaceRep, evaluate, relator_defect, sample
from .words import Word, a, b, free_reduce

_WORD_LENGTH_CAP = 200_000


@dataclass(frozen=True)
class TwistGen:
    kind: str          # 'a', 'b' or 'c'
    index: int
    sign: int = 1

    def __post_init__(self):
        if self.kind not in ("a", "b", "c"):
            raise ValueError(f"twist kind must be a, b or c, got {self.kind!r}")
        if self.index < 1:
            raise ValueError("twist index must be >= 1")
        if self.sign not in (1, -1):
            raise ValueError("twist sign must be +-1")

    def validate(self, genus: int):
        top = genus - 1 if self.kind == "c" else genus
        if self.index > top:
            raise ValueError(f"T{self.kind}{self.index} out of range for genus {genus}")

    def inverse(self) -> "TwistGen":
        return TwistGen(self.kind, self.index, -self.sign)

    def __str__(self):
        s = f"T{self.kind}{self.index}"
        return s if self.sign == 1 else s + "^-1"


def _chain_letters(i: int) -> tuple[int, int, int, int]:
    return a(i), b(i), a(i + 1), b(i + 1)


def _sparse_table(t: TwistGen) -> dict[int, tuple[int, ...]]:
    """Images of the generators moved by the twist, as letter tuples."""
    i, s = t.index, t.sign
    if t.kind == "a":
        ai, bi = a(i), b(i)
        return {bi: (bi, ai if s > 0 else -ai)}
    if t.kind == "b":
        ai, bi = a(i), b(i)
        return {ai: (ai, -bi if s > 0 else bi)}
    ai, bi, ci, di = _chain_letters(i)
    if s > 0:
        return {
            ai: (-ci, ai, ci),
            bi: (-ci, -ai, ci, ai, bi, ai, ci),
            ci: (-ci, -ai, ci, ai, ci),
            di: (di, ai, ci),
        }
    return {
        ai: (ai, ci, ai, -ci, -ai),
        bi: (ai, ci, -ai, -ci, bi, -ci, -ai),
        ci: (ai, ci, -ai),
        di: (di, -ci, -ai),
    }


def apply_table(table: dict[int, tuple[int, ...]], word: Word) -> Word:
    """Image of a word under a generator-image table, freely reduced."""
    out: list[int] = []
    for ltr in word.letters:
        img = table.get(abs(ltr), (abs(ltr),))
        if ltr < 0:
            img = tuple(-x for x in reversed(img))
        for x in img:
            if out and out[-1] == -x:
                out.pop()
            else:
                out.append(x)
        if len(out) > _WORD_LENGTH_CAP:
            raise RuntimeError("image word exceeds length cap; use the numeric "
                               "action for long twist words")
    return Word(tuple(out))


def automorphism(t: TwistGen, genus: int) -> tuple[Word, ...]:
    """Generator-image table of the twist, one Word per generator."""
    t.validate(genus)
    sparse = _sparse_table(t)
    return tuple(Word(sparse.get(k, (k,))) for k in range(1, 2 * genus + 1))


@dataclass(frozen=True)
class MappingClass:
    genus: int
    twists: tuple[TwistGen, ...] = ()

    def __post_init__(self):
        for t in self.twists:
            t.validate(self.genus)

    @classmethod
    def identity(cls, genus: int) -> "MappingClass":
        return cls(genus, ())

    @classmethod
    def of(cls, genus: int, *gens: TwistGen) -> "MappingClass":
        return cls(genus, tuple(gens))

    def __mul__(self, other: "MappingClass") -> "MappingClass":
        if self.genus != other.genus:
            raise ValueError("genus mismatch")
        return MappingClass(self.genus, self.twists + other.twists)

    def inverse(self) -> "MappingClass":
        return MappingClass(self.genus,
                            tuple(t.inverse() for t in reversed(self.twists)))

    def __pow__(self, n: int) -> "MappingClass":
        if n == 0:
            return MappingClass.identity(self.genus)
        base = self if n > 0 else self.inverse()
        return MappingClass(self.genus, base.twists * abs(n))

    def is_identity_word(self) -> bool:
        return not self.twists

    def __str__(self):
        if not self.twists:
            return "1"
        return "*".join(str(t) for t in self.twists)

    @classmethod
    def parse(cls, genus: int, s: str) -> "MappingClass":
        """Parse twist words like "Ta1*Tb1^-1*Tc1" (case-insensitive,
        ^k for powers, * for composition, leftmost acts last)."""
        s = s.strip()
        if s in ("", "1"):
            return cls.identity(genus)
        gens: list[TwistGen] = []
        for part in s.split("*"):
            m = re.fullmatch(r"[tT]([abcABC])(\d+)(?:\^(-?\d+))?", part.strip())
            if not m:
                raise ValueError(f"cannot parse twist generator {part!r}")
            kind, idx = m.group(1).lower(), int(m.group(2))
            e = int(m.group(3)) if m.group(3) is not None else 1
            if e == 0:
                continue
            gens.extend([TwistGen(kind, idx, 1 if e > 0 else -1)] * abs(e))
        return cls(genus, tuple(gens))


def act_on_curve(m: MappingClass, w: Word) -> Word:
    """Image of a word under the automorphism of m (symbolic, reduced).

    The rightmost twist acts first.  Intended for curve words and short
    twist words; images can grow like 3^(word length) in the worst case,
    so long mapping classes should act numerically via apply() instead.
    """
    out = w
    for t in reversed(m.twists):
        t.validate(m.genus)
        out = apply_table(_sparse_table(t), out)
    return out


def _apply_gen(t: TwistGen, rep: SurfaceRep) -> SurfaceRep:
    # action is rho o phi^-1, so evaluate the inverse twist's table
    table = _sparse_table(t.inverse())
    images = list(rep.images)
    for k, img in table.items():
        images[k - 1] = evaluate(Word(img), rep)
    return rep.with_images(images)


def apply(m: MappingClass, rep: SurfaceRep) -> SurfaceRep:
    """Action m . [rho] = [rho o phi_m^-1], computed generator by generator.

    Incremental and numeric: generator images are updated per twist, so the
    cost is O(len(twists)) group operations with no symbolic word growth.
    """
    if m.genus != rep.genus:
        raise ValueError("genus mismatch between mapping class and rep")
    out = rep
    for t in reversed(m.twists):
        out = _apply_gen(t, out)
    return out


def commutator_element(phi: MappingClass, gamma: TwistGen, n: int) -> MappingClass:
    """The twist-power commutator  tau_gamma^n phi tau_gamma^-n phi^-1.

    Lies in the normal closure of phi for every n >= 0 (it is a conjugate
    of phi times phi^-1); these are the walk generators used to simulate a
    normal subgroup from a single witness element.
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    g = MappingClass.of(phi.genus, gamma)
    return (g ** n) * phi * (g ** -n) * phi.inverse()


def check_relator(m: MappingClass, trials: int,
                  rng: np.random.Generator | None = None,
                  tol: float = 1e-9) -> bool:
    """Does the automorphism preserve the surface relation?

    For each sampled rep the relator is evaluated in the pulled-back rep
    rho o phi_m, which equals evaluating the image word of the relator in
    rho, without the symbolic blowup of long twist words.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if rng is None:
        rng = np.random.default_rng(0)
    minv = m.inverse()
    for _ in range(trials):
        rep = sample(m.genus, rng)
        if relator_defect(apply(minv, rep)) > tol:
            return False
    return True


def random_twist_word(genus: int, length: int,
                      rng: np.random.Generator) -> MappingClass:
    """Uniform random word in the signed twist generators."""
    kinds = [("a", genus), ("b", genus), ("c", genus - 1)]
    gens = []
    for _ in range(length):
        kind, top = kinds[int(rng.integers(0, len(kinds)))]
        gens.append(TwistGen(kind, int(rng.integers(1, top + 1)),
                             1 if rng.integers(2) else -1))
    return MappingClass(genus, tuple(gens))


def all_twist_gens(genus: int) -> list[TwistGen]:
    """The standard generator list: A(i), B(i) for i <= g, C(i) for i < g."""
    gens = []
    for i in range(1, genus + 1):
        gens += [TwistGen("a", i), TwistGen("b", i)]
    for i in range(1, genus):
        gens.append(TwistGen("c", i))
    return gens
