"""Words in the surface group generators a_1, b_1, ..., a_g, b_g.

Letters are signed integers: letter k > 0 is the k-th generator in the fixed
order a1, b1, a2, b2, ... (odd k -> a_{(k+1)/2}, even k -> b_{k/2}); -k is
its inverse.  Words are kept freely reduced at all times.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field


def a(i: int) -> int:
    """Letter index of a_i."""
    return 2 * i - 1


def b(i: int) -> int:
    """Letter index of b_i."""
    return 2 * i


def letter_name(letter: int) -> str:
    k = abs(letter)
    base = f"a{(k + 1) // 2}" if k % 2 == 1 else f"b{k // 2}"
    return base if letter > 0 else base + "^-1"


def free_reduce(letters) -> tuple[int, ...]:
    out: list[int] = []
    for ltr in letters:
        if ltr == 0:
            raise ValueError("0 is not a valid letter")
        if out and out[-1] == -ltr:
            out.pop()
        else:
            out.append(ltr)
    return tuple(out)


@dataclass(frozen=True)
class Word:
    letters: tuple[int, ...] = field(default_factory=tuple)

    @classmethod
    def of(cls, *letters) -> "Word":
        return cls(free_reduce(letters))

    @classmethod
    def from_letters(cls, letters) -> "Word":
        return cls(free_reduce(letters))

    def __mul__(self, other: "Word") -> "Word":
        return Word(free_reduce(self.letters + other.letters))

    def inverse(self) -> "Word":
        return Word(tuple(-l for l in reversed(self.letters)))

    def __len__(self) -> int:
        return len(self.letters)

    def max_index(self) -> int:
        return max((abs(l) for l in self.letters), default=0)

    def cyclic_reduce(self) -> "Word":
        ls = list(self.letters)
        while len(ls) >= 2 and ls[0] == -ls[-1]:
            ls = ls[1:-1]
        return Word(tuple(ls))

    def is_conjugate_to(self, other: "Word") -> bool:
        """Equality as cyclic words (conjugacy in the free group)."""
        u, v = self.cyclic_reduce().letters, other.cyclic_reduce().letters
        if len(u) != len(v):
            return False
        if not u:
            return True
        return any(v[i:] + v[:i] == u for i in range(len(v)))

    def __str__(self) -> str:
        if not self.letters:
            return "1"
        return "*".join(letter_name(l) for l in self.letters)

    @classmethod
    def parse(cls, s: str) -> "Word":
        """Parse strings like "a1*b2^-1" (case-insensitive, 1 for empty)."""
        s = s.strip()
        if s in ("", "1"):
            return cls()
        letters = []
        for part in s.split("*"):
            m = re.fullmatch(r"([abAB])(\d+)(?:\^(-?\d+))?", part.strip())
            if not m:
                raise ValueError(f"cannot parse word letter {part!r}")
            kind, idx, exp = m.group(1).lower(), int(m.group(2)), m.group(3)
            if idx < 1:
                raise ValueError(f"generator index must be >= 1 in {part!r}")
            k = a(idx) if kind == "a" else b(idx)
            e = int(exp) if exp is not None else 1
            letters.extend([k if e > 0 else -k] * abs(e))
        return cls(free_reduce(letters))


def commutator(u: Word, v: Word) -> Word:
    return u * v * u.inverse() * v.inverse()


def relator(genus: int) -> Word:
    """[a1,b1][a2,b2]...[ag,bg], the defining relation of pi_1 of the
    closed genus-g surface.  Freely reduced, length 4g."""
    if genus < 2:
        raise ValueError("genus must be >= 2")
    w = Word()
    for i in range(1, genus + 1):
        w = w * commutator(Word.of(a(i)), Word.of(b(i)))
    return w
