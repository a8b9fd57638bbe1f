import math

import numpy as np
import pytest

from segloss import (
    ParamOutOfRange,
    dice_loss,
    focal_tversky_loss,
    log_cosh_dice_loss,
    sens_spec_loss,
    soft_dice_coeff,
    tversky_index,
    tversky_loss,
)

from helpers import random_pair


def test_dice_perfect():
    y = np.array([[1, 0], [0, 1]], dtype=float)
    assert soft_dice_coeff(y, y, 1.0) == 1.0
    assert dice_loss(y, y) == 0.0


def test_dice_half_probability():
    p = np.full((2, 2), 0.5)
    y = np.array([[1, 0], [0, 0]], dtype=float)
    assert soft_dice_coeff(p, y, 1.0) == pytest.approx(0.5, abs=1e-15)
    assert dice_loss(p, y, 1.0) == pytest.approx(0.5, abs=1e-15)


def test_dice_empty_empty_is_perfect():
    assert soft_dice_coeff(np.zeros((2, 2)), np.zeros((2, 2)), 1.0) == 1.0


def test_dice_disjoint():
    assert dice_loss([1, 0], [0, 1], 1.0) == pytest.approx(2 / 3, abs=1e-15)


def test_dice_negative_smooth_rejected():
    with pytest.raises(ParamOutOfRange):
        dice_loss([0.5], [1], smooth=-1)


def test_tversky_hand_value():
    assert tversky_index([1, 0], [0, 1], 0.3, 0.7, 1.0) == pytest.approx(0.5, abs=1e-15)
    assert tversky_loss([1, 0], [0, 1], 0.3, 0.7, 1.0) == pytest.approx(0.5, abs=1e-15)


def test_tversky_perfect():
    y = np.array([[1, 0, 1]], dtype=float)
    assert tversky_index(y, y) == 1.0
    assert tversky_loss(y, y) == 0.0


def test_tversky_false_positive_pixel_lowers_index():
    y = np.array([[1.0, 0.0, 1.0]])
    p = np.array([[0.8, 0.2, 0.7]])
    q = p.copy()
    q[0, 1] = 0.6
    assert tversky_index(q, y) < tversky_index(p, y)


def test_tversky_half_half_is_dice_unsmoothed(rng):
    for _ in range(100):
        p, y = random_pair(rng)
        assert tversky_index(p, y, 0.5, 0.5, 0.0) == pytest.approx(soft_dice_coeff(p, y, 0.0), abs=1e-12)


def test_tversky_half_half_matches_dice_at_half_smooth(rng):
    # Tversky smoothing enters numerator and denominator once, Dice's twice over
    for _ in range(100):
        p, y = random_pair(rng)
        s = rng.uniform(0, 2)
        assert tversky_index(p, y, 0.5, 0.5, s / 2) == pytest.approx(soft_dice_coeff(p, y, s), abs=1e-12)


def test_tversky_half_half_differs_from_dice_at_same_smooth():
    p = np.full((2, 2), 0.5)
    y = np.array([[1, 0], [0, 0]], dtype=float)
    assert tversky_index(p, y, 0.5, 0.5, 1.0) == pytest.approx(1.5 / 2.5, abs=1e-15)
    assert soft_dice_coeff(p, y, 1.0) == pytest.approx(0.5, abs=1e-15)


def test_focal_tversky():
    assert focal_tversky_loss([1, 0], [0, 1], gamma=0.75) == pytest.approx(0.5**0.75, abs=1e-15)
    y = np.array([[1.0, 0.0]])
    assert focal_tversky_loss(y, y) == 0.0


def test_focal_tversky_gamma_one(rng):
    for _ in range(20):
        p, y = random_pair(rng)
        assert focal_tversky_loss(p, y, gamma=1.0) == pytest.approx(tversky_loss(p, y), abs=1e-12)


def test_log_cosh_dice():
    p = np.full((2, 2), 0.5)
    y = np.array([[1, 0], [0, 0]], dtype=float)
    assert log_cosh_dice_loss(p, y) == pytest.approx(math.log(math.cosh(0.5)), abs=1e-12)
    assert log_cosh_dice_loss(y, y) == 0.0


def test_log_cosh_below_dice(rng):
    for _ in range(50):
        p, y = random_pair(rng)
        assert log_cosh_dice_loss(p, y) <= dice_loss(p, y)


def test_sens_spec():
    assert sens_spec_loss([0.5, 0.5], [1, 0]) == pytest.approx(0.25 / (1 + 1e-6), abs=1e-12)
    y = np.array([[1.0, 0.0, 1.0]])
    assert sens_spec_loss(y, y) == 0.0


def test_sens_spec_pure_foreground_mse(rng):
    p = rng.random((3, 3))
    y = np.ones((3, 3))
    assert sens_spec_loss(p, y, w=1.0, smooth=0.0) == pytest.approx(np.mean((p - 1) ** 2), abs=1e-12)


def test_region_ranges(rng):
    for _ in range(50):
        p, y = random_pair(rng)
        assert 0 <= dice_loss(p, y) < 1
        assert 0 < tversky_index(p, y) <= 1
        assert 0 <= sens_spec_loss(p, y) <= 1


def test_permutation_invariance(rng):
    p, y = random_pair(rng)
    perm = rng.permutation(p.size)
    pp = p.ravel()[perm].reshape(p.shape)
    yp = y.ravel()[perm].reshape(y.shape)
    for loss in (dice_loss, tversky_loss, focal_tversky_loss, log_cosh_dice_loss, sens_spec_loss):
        assert loss(pp, yp) == pytest.approx(loss(p, y), abs=1e-12)
