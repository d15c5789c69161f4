import itertools
import json
import math

import numpy as np
import pytest

from twistlab import su2
from twistlab.su2 import IDENTITY, QI, QJ, distance, haar_sample, inverse, mul
from twistlab.surface import (CommutatorSolveError, NormalizationError,
                              SurfaceRep, char_distance, conjugate_rep,
                              evaluate, fingerprint, fingerprint_words,
                              gauge_normalize, has_dense_image, is_irreducible,
                              make_abelian_rep, make_binary_dihedral_rep,
                              relator_defect, sample, solve_commutator)
from twistlab.words import Word, relator


def commutator_q(A, B):
    return mul(mul(A, B), mul(inverse(A), inverse(B)))


def test_evaluate_basics():
    rng = np.random.default_rng(0)
    rep = sample(2, rng)
    assert distance(evaluate(Word(), rep), IDENTITY) == 0.0
    assert distance(evaluate(Word.of(1, -1), rep), IDENTITY) == 0.0
    assert relator_defect(rep) < 1e-10
    with pytest.raises(ValueError):
        evaluate(Word.of(5), rep)       # out of range for genus 2


def test_evaluate_runs_use_closed_form():
    rng = np.random.default_rng(1)
    rep = sample(2, rng)
    w = Word(tuple([1] * 57 + [2] * 3))
    direct = IDENTITY
    for ltr in w.letters:
        direct = mul(direct, rep.image_of_letter(ltr))
    assert distance(evaluate(w, rep), direct) < 1e-12


def test_solve_commutator_identity_and_minus_one():
    rng = np.random.default_rng(2)
    A, B = solve_commutator(IDENTITY, rng)
    assert distance(commutator_q(A, B), IDENTITY) < 1e-12
    minus = su2.MINUS_ONE
    A, B = solve_commutator(minus, rng)
    assert distance(commutator_q(A, B), minus) < 1e-12
    # the model pair: [i, j] = -1
    assert distance(commutator_q(QI, QJ), minus) < 1e-15


def test_solve_commutator_random_targets():
    rng = np.random.default_rng(3)
    worst = 0.0
    for _ in range(10_000):
        C = haar_sample(rng)
        A, B = solve_commutator(C, rng)
        worst = max(worst, distance(commutator_q(A, B), C))
    assert worst <= 1e-12


def test_sampler_postconditions():
    rep = sample(2, np.random.default_rng(42))
    assert relator_defect(rep) <= 1e-12
    rep3 = sample(3, np.random.default_rng(42))
    assert relator_defect(rep3) <= 1e-12
    assert len(rep3.images) == 6
    with pytest.raises(ValueError):
        sample(1, np.random.default_rng(0))


def test_sampler_determinism():
    r1 = sample(2, np.random.default_rng(7))
    r2 = sample(2, np.random.default_rng(7))
    assert r1.to_json() == r2.to_json()


def test_sampler_genericity():
    rng = np.random.default_rng(4)
    irr = 0
    for _ in range(500):
        rep = sample(2, rng)
        assert relator_defect(rep) <= 1e-11
        irr += is_irreducible(rep)
    assert irr == 500


def test_is_irreducible():
    assert not is_irreducible(make_abelian_rep(2), tol=1e-6)
    rep = SurfaceRep(2, (QI, QJ, QI, QJ))       # [i,j][i,j] = (-1)(-1) = 1
    assert relator_defect(rep) < 1e-15
    assert is_irreducible(rep, tol=1e-6)


def test_has_dense_image_controls():
    assert not has_dense_image(make_binary_dihedral_rep(2))
    assert not has_dense_image(make_abelian_rep(2))
    rng = np.random.default_rng(5)
    for _ in range(20):
        assert has_dense_image(sample(2, rng))
    # quaternion-group image: finite, all thetas rational -> not dense
    rep = SurfaceRep(2, (QI, QJ, QI, QJ))
    assert not has_dense_image(rep)


def test_gauge_normalize_postconditions():
    rng = np.random.default_rng(6)
    rep = sample(2, rng)
    norm = gauge_normalize(rep)
    ax = su2.axis_of(norm.images[0])
    assert abs(ax[0]) < 1e-12 and abs(ax[1]) < 1e-12 and ax[2] > 0
    # idempotent
    again = gauge_normalize(norm)
    assert max(distance(p, q) for p, q in zip(norm.images, again.images)) < 1e-12
    # gauge invariance
    g = haar_sample(rng)
    other = gauge_normalize(conjugate_rep(g, rep))
    assert max(distance(p, q) for p, q in zip(norm.images, other.images)) < 1e-10


def test_gauge_normalize_errors():
    rng = np.random.default_rng(7)
    abelian = make_abelian_rep(2)
    with pytest.raises(NormalizationError):
        gauge_normalize(abelian)        # everything commutes with rho(a1)
    central_a1 = SurfaceRep(2, (IDENTITY, QJ, QI,
                                su2.from_axis_angle((1, 0, 0), 0.4)))
    with pytest.raises(NormalizationError):
        gauge_normalize(central_a1)


def test_fingerprint_word_set():
    names, ws = fingerprint_words(2)
    assert len(names) == 4 + 6 + 4        # singles, pairs, triples
    assert "a1" in names and "a1*b1" in names and "a1*b1*a2" in names
    names3, _ = fingerprint_words(3)
    assert len(names3) == 6 + 15 + 20


def test_char_distance_conjugation_invariance():
    rng = np.random.default_rng(8)
    rep = sample(2, rng)
    g = haar_sample(rng)
    assert char_distance(rep, conjugate_rep(g, rep)) <= 1e-12
    assert char_distance(rep, rep) == 0.0
    with pytest.raises(ValueError):
        char_distance(rep, sample(3, rng))


def test_char_distance_detects_sign_flip():
    rng = np.random.default_rng(9)
    rep = sample(2, rng)
    images = list(rep.images)
    b1 = images[1]
    images[1] = su2.UnitQuaternion(-b1.w, -b1.x, -b1.y, -b1.z)
    flipped = rep.with_images(images)
    assert char_distance(rep, flipped) >= abs(b1.trace())


def test_char_distance_metric_properties():
    rng = np.random.default_rng(10)
    reps = [sample(2, rng) for _ in range(24)]
    fps = [fingerprint(r).traces for r in reps]

    def dist(i, j):
        return float(np.max(np.abs(fps[i] - fps[j])))

    count = 0
    for i, j, k in itertools.combinations(range(len(reps)), 3):
        assert abs(dist(i, j) - dist(j, i)) < 1e-15
        assert dist(i, k) <= dist(i, j) + dist(j, k) + 1e-12
        count += 1
        if count >= 1000:
            break
    assert count >= 1000


def test_rep_json_roundtrip():
    rep = sample(2, np.random.default_rng(11))
    blob = json.dumps(rep.to_json())
    back = SurfaceRep.from_json(json.loads(blob))
    assert back.genus == 2
    assert max(distance(p, q) for p, q in zip(rep.images, back.images)) == 0.0


def test_degenerate_constructors_satisfy_relator():
    for genus in (2, 3):
        assert relator_defect(make_abelian_rep(genus)) < 1e-14
        assert relator_defect(make_binary_dihedral_rep(genus)) < 1e-14
        assert is_irreducible(make_binary_dihedral_rep(genus))
