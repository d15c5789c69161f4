import numpy as np
import pytest

from twistlab import su2
from twistlab.mapping import (MappingClass, TwistGen, act_on_curve, apply,
                              apply_table, automorphism, check_relator,
                              commutator_element, random_twist_word)
from twistlab.surface import char_distance, evaluate, relator_defect, sample
from twistlab.words import Word, relator


def test_automorphism_tables_spec_conventions():
    table = automorphism(TwistGen("a", 1), 2)
    assert str(table[1]) == "b1*a1"           # b1 -> b1 a1
    assert str(table[0]) == "a1"
    assert str(table[2]) == "a2"              # disjoint support
    table = automorphism(TwistGen("b", 1), 2)
    assert str(table[0]) == "a1*b1^-1"        # a1 -> a1 b1^-1
    with pytest.raises(ValueError):
        automorphism(TwistGen("c", 2), 2)     # chain index out of range
    with pytest.raises(ValueError):
        automorphism(TwistGen("a", 3), 2)


def test_act_on_curve_examples():
    m = MappingClass.parse(2, "Ta1")
    assert str(act_on_curve(m, Word.parse("b1"))) == "b1*a1"
    assert str(act_on_curve(m, Word.parse("a2"))) == "a2"
    ident = MappingClass.identity(2)
    w = Word.parse("a1*b2^-1")
    assert act_on_curve(ident, w).letters == w.letters


def test_parse_format_roundtrip():
    for s in ("Ta1", "Tb1^-1", "Ta1*Tb1^-1*Tc1", "Tc1^3", "1"):
        m = MappingClass.parse(2, s)
        assert str(MappingClass.parse(2, str(m))) == str(m)
    assert len(MappingClass.parse(2, "Ta1^-2").twists) == 2
    assert MappingClass.parse(2, "tb2").twists[0] == TwistGen("b", 2, 1)
    with pytest.raises(ValueError):
        MappingClass.parse(2, "Td1")
    with pytest.raises(ValueError):
        MappingClass.parse(2, "Tc2")          # no chain curve C(2) at genus 2


def test_apply_single_twist():
    rng = np.random.default_rng(0)
    rep = sample(2, rng)
    out = apply(MappingClass.parse(2, "Ta1"), rep)
    # action is rho o phi^-1: only the b1 image changes, by rho(b1) rho(a1)^-1
    assert su2.distance(out.images[0], rep.images[0]) == 0.0
    expected = su2.mul(rep.images[1], su2.inverse(rep.images[0]))
    assert su2.distance(out.images[1], expected) < 1e-14
    assert su2.distance(out.images[2], rep.images[2]) == 0.0
    # theta along a1 is untouched by its own twist
    assert abs(su2.theta(out.images[0]) - su2.theta(rep.images[0])) == 0.0
    assert relator_defect(out) < 1e-10


def test_apply_identity_and_inverse_roundtrip():
    rng = np.random.default_rng(1)
    rep = sample(2, rng)
    assert char_distance(apply(MappingClass.identity(2), rep), rep) == 0.0
    for _ in range(10):
        m = random_twist_word(2, 12, rng)
        assert char_distance(apply(m.inverse(), apply(m, rep)), rep) <= 1e-10


def test_apply_is_group_action():
    rng = np.random.default_rng(2)
    rep = sample(3, rng)
    for _ in range(5):
        m1 = random_twist_word(3, 8, rng)
        m2 = random_twist_word(3, 8, rng)
        assert char_distance(apply(m1 * m2, rep),
                             apply(m1, apply(m2, rep))) <= 1e-10


def test_trace_identity_act_on_curve_vs_apply():
    rng = np.random.default_rng(3)
    for _ in range(10):
        rep = sample(2, rng)
        m = random_twist_word(2, 6, rng)
        for w in (Word.parse("a1"), Word.parse("b2"), Word.parse("a1*b1")):
            lhs = evaluate(act_on_curve(m, w), rep).trace()
            rhs = evaluate(w, apply(m.inverse(), rep)).trace()
            assert abs(lhs - rhs) <= 1e-10


def test_check_relator_generators_and_words():
    rng = np.random.default_rng(4)
    assert check_relator(MappingClass.identity(2), 3, rng)
    for g in (TwistGen("a", 1), TwistGen("b", 1), TwistGen("c", 1)):
        assert check_relator(MappingClass.of(2, g), 100, rng)
    m = random_twist_word(3, 20, rng)
    assert check_relator(m, 10, rng)


def test_check_relator_negative_control():
    # deliberately corrupted tables must evaluate the relator image away
    # from the identity on generic reps (note b1 -> b1 a1^k is NOT corrupt:
    # that is the legal action of tau_{a1}^k)
    rng = np.random.default_rng(5)
    for corrupt in ({2: (1, 2)},        # wrong side: b1 -> a1 b1
                    {2: (2, 3)}):       # wrong letter: b1 -> b1 a2
        worst = 0.0
        for _ in range(20):
            rep = sample(2, rng)
            img = apply_table(corrupt, relator(2))
            dev = su2.distance(evaluate(img, rep), su2.IDENTITY)
            worst = max(worst, dev)
        assert worst > 1e-3


def test_chain_twist_relator_exact_preservation():
    # the adopted chain formula fixes the relator word exactly, all genera
    for genus in (2, 3, 4):
        R = relator(genus)
        for i in range(1, genus):
            for sign in (1, -1):
                table = {k + 1: w.letters for k, w in
                         enumerate(automorphism(TwistGen("c", i, sign), genus))}
                assert apply_table(table, R).letters == R.letters


def test_chain_twist_inverse_is_exact_inverse():
    for genus in (2, 3):
        for i in range(1, genus):
            t = {k + 1: w.letters for k, w in
                 enumerate(automorphism(TwistGen("c", i, 1), genus))}
            ti = {k + 1: w.letters for k, w in
                  enumerate(automorphism(TwistGen("c", i, -1), genus))}
            for k in range(1, 2 * genus + 1):
                img = apply_table(t, Word(ti[k]))
                assert img.letters == (k,)


def test_chain_twist_homology_transvection():
    # on homology: b_i and b_{i+1} shift by [a_i] + [a_{i+1}], a's fixed
    genus = 3
    for i in (1, 2):
        table = automorphism(TwistGen("c", i, 1), genus)
        M = np.zeros((2 * genus, 2 * genus), dtype=int)
        for k, w in enumerate(table):
            for ltr in w.letters:
                M[abs(ltr) - 1, k] += 1 if ltr > 0 else -1
        expected = np.eye(2 * genus, dtype=int)
        u = np.zeros(2 * genus, dtype=int)
        u[2 * i - 2] = u[2 * i] = 1          # [a_i] + [a_{i+1}]
        expected[:, 2 * i - 1] += u
        expected[:, 2 * i + 1] += u
        assert np.array_equal(M, expected)


def test_commutator_element():
    rng = np.random.default_rng(6)
    phi = MappingClass.parse(2, "Tb1")
    gam = TwistGen("a", 1)
    assert commutator_element(phi, gam, 0).twists == phi.twists + phi.inverse().twists
    rep = sample(2, rng)
    assert char_distance(apply(commutator_element(phi, gam, 0), rep), rep) <= 1e-12
    # phi commuting with tau_gamma: the element acts trivially
    phi_far = MappingClass.parse(2, "Ta2")
    m = commutator_element(phi_far, gam, 3)
    assert char_distance(apply(m, rep), rep) <= 1e-10
    # composition oracle
    for n in (1, 2, 4):
        m = commutator_element(phi, gam, n)
        tg = MappingClass.of(2, gam)
        composed = apply(tg ** n, apply(phi, apply(tg ** -n,
                                                   apply(phi.inverse(), rep))))
        assert char_distance(apply(m, rep), composed) <= 1e-10
    with pytest.raises(ValueError):
        commutator_element(phi, gam, -1)


def test_braid_and_commutation_on_characters():
    rng = np.random.default_rng(7)
    reps = [sample(2, rng) for _ in range(25)]

    def braid(g1, g2):
        m1 = MappingClass.of(2, g1, g2, g1)
        m2 = MappingClass.of(2, g2, g1, g2)
        return max(char_distance(apply(m1, r), apply(m2, r)) for r in reps)

    assert braid(TwistGen("a", 1), TwistGen("b", 1)) <= 1e-9
    assert braid(TwistGen("c", 1), TwistGen("b", 1)) <= 1e-9
    assert braid(TwistGen("c", 1), TwistGen("b", 2)) <= 1e-9
    # commutation for disjoint supports
    def comm(g1, g2):
        m1 = MappingClass.of(2, g1, g2)
        m2 = MappingClass.of(2, g2, g1)
        return max(char_distance(apply(m1, r), apply(m2, r)) for r in reps)

    assert comm(TwistGen("a", 1), TwistGen("a", 2)) <= 1e-9
    assert comm(TwistGen("a", 1), TwistGen("b", 2)) <= 1e-9
    assert comm(TwistGen("c", 1), TwistGen("a", 1)) <= 1e-9


def test_mixed_handedness_fails_braid():
    # braid with an inverted twist must fail: pins the handedness convention
    rng = np.random.default_rng(8)
    reps = [sample(2, rng) for _ in range(10)]
    g1, g2 = TwistGen("a", 1, -1), TwistGen("b", 1, 1)
    m1 = MappingClass.of(2, g1, g2, g1)
    m2 = MappingClass.of(2, g2, g1, g2)
    assert max(char_distance(apply(m1, r), apply(m2, r)) for r in reps) > 1e-2
