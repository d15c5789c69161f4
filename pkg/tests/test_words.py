import pytest

from twistlab.words import Word, a, b, commutator, letter_name, relator


def test_letter_indexing():
    assert (a(1), b(1), a(2), b(2)) == (1, 2, 3, 4)
    assert letter_name(1) == "a1"
    assert letter_name(-4) == "b2^-1"


def test_free_reduction():
    assert Word.of(1, -1).letters == ()
    assert Word.of(1, 2, -2, -1).letters == ()
    assert Word.of(1, 2, -2, 3).letters == (1, 3)


def test_multiplication_and_inverse():
    w = Word.parse("a1*b1")
    assert (w * w.inverse()).letters == ()
    assert w.inverse().letters == (-2, -1)


def test_relator():
    r2 = relator(2)
    assert str(r2) == "a1*b1*a1^-1*b1^-1*a2*b2*a2^-1*b2^-1"
    assert len(relator(3)) == 12
    with pytest.raises(ValueError):
        relator(1)


def test_parse_format_roundtrip():
    for s in ("a1", "b2^-1", "a1*b1*a2^-1", "a1^3", "1"):
        w = Word.parse(s)
        assert Word.parse(str(w)).letters == w.letters
    assert Word.parse("a1^3").letters == (1, 1, 1)
    assert Word.parse("A1*B2").letters == (1, 4)
    with pytest.raises(ValueError):
        Word.parse("x1")


def test_cyclic_conjugacy():
    u = Word.of(1, 2, 3)
    v = Word.of(3, 1, 2)
    assert u.is_conjugate_to(v)
    assert not u.is_conjugate_to(u.inverse())
    w = Word.of(2, 1, 2, -1, -2)
    assert w.cyclic_reduce().letters == (2,)
    assert w.is_conjugate_to(Word.of(2))
    # conjugation by an explicit element
    g = Word.of(4, -3)
    assert (g * u * g.inverse()).is_conjugate_to(u)


def test_commutator():
    c = commutator(Word.of(1), Word.of(2))
    assert c.letters == (1, 2, -1, -2)
