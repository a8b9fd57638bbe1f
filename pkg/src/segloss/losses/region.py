"""Overlap losses on soft probabilities: Dice, Tversky and relatives.

Region statistics are per image and use the unclipped probabilities, so a
crisp perfect prediction scores exactly zero loss.
"""

from __future__ import annotations

import math

import numpy as np

from ..fields import check_pair
from ._base import (
    NONNEG,
    POSITIVE,
    UNIT,
    loss_value,
    param,
    register,
    resolve_params,
    soft_dice_parts,
    tversky_parts,
)

SMOOTH = param(1.0, NONNEG)
TVERSKY_PARAMS = {"alpha": param(0.3, NONNEG), "beta": param(0.7, NONNEG), "smooth": SMOOTH}


@register("dice", "region", {"smooth": SMOOTH})
def _dice(p, y, frozen, smooth):
    dsc, ddsc = soft_dice_parts(p, y, smooth)
    return 1.0 - dsc, -ddsc, ()


@register("tversky", "region", TVERSKY_PARAMS)
def _tversky(p, y, frozen, alpha, beta, smooth):
    ti, dti = tversky_parts(p, y, alpha, beta, smooth)
    return 1.0 - ti, -dti, ()


@register("focal_tversky", "region", {**TVERSKY_PARAMS, "gamma": param(0.75, POSITIVE)})
def _focal_tversky(p, y, frozen, alpha, beta, smooth, gamma):
    ti, dti = tversky_parts(p, y, alpha, beta, smooth)
    base = max(1.0 - ti, 0.0)
    if base == 0.0:
        # exact minimum; the derivative is singular there for gamma < 1
        return 0.0, np.zeros_like(p), ()
    return base**gamma, -gamma * base ** (gamma - 1.0) * dti, ()


@register("log_cosh_dice", "region", {"smooth": SMOOTH})
def _log_cosh_dice(p, y, frozen, smooth):
    dsc, ddsc = soft_dice_parts(p, y, smooth)
    d = 1.0 - dsc
    return math.log(math.cosh(d)), -math.tanh(d) * ddsc, ()


@register("sens_spec", "region", {"w": param(0.5, UNIT), "smooth": param(1e-6, NONNEG)})
def _sens_spec(p, y, frozen, w, smooth):
    sq = (p - y) ** 2
    fg_den = float(np.sum(y)) + smooth
    bg_den = float(np.sum(1.0 - y)) + smooth
    # a zero denominator means the class is absent, so its numerator is zero too
    fg_scale = 1.0 / fg_den if fg_den > 0 else 0.0
    bg_scale = 1.0 / bg_den if bg_den > 0 else 0.0
    sens = float(np.sum(sq * y)) * fg_scale
    spec = float(np.sum(sq * (1.0 - y))) * bg_scale
    grad = 2.0 * (p - y) * (w * y * fg_scale + (1.0 - w) * (1.0 - y) * bg_scale)
    return w * sens + (1.0 - w) * spec, grad, ()


def soft_dice_coeff(p, y, smooth=1.0):
    """``(2 sum(p y) + s) / (sum(p) + sum(y) + s)`` on soft probabilities."""
    smooth = resolve_params("dice", {"smooth": smooth})["smooth"]
    p, y = check_pair(p, y)
    return soft_dice_parts(p.values, y.values, smooth)[0]


def dice_loss(p, y, smooth=1.0):
    return loss_value("dice", p, y, smooth=smooth)


def tversky_index(p, y, alpha=0.3, beta=0.7, smooth=1.0):
    """Tversky index; ``alpha`` weights false positives, ``beta`` false negatives."""
    kw = resolve_params("tversky", {"alpha": alpha, "beta": beta, "smooth": smooth})
    p, y = check_pair(p, y)
    return tversky_parts(p.values, y.values, kw["alpha"], kw["beta"], kw["smooth"])[0]


def tversky_loss(p, y, alpha=0.3, beta=0.7, smooth=1.0):
    return loss_value("tversky", p, y, alpha=alpha, beta=beta, smooth=smooth)


def focal_tversky_loss(p, y, alpha=0.3, beta=0.7, smooth=1.0, gamma=0.75):
    """``(1 - TI) ** gamma``.

    ``gamma`` is applied directly as the exponent. Formulations written with
    ``1 / gamma`` in the exponent map onto this one by inverting gamma.
    """
    return loss_value("focal_tversky", p, y, alpha=alpha, beta=beta, smooth=smooth, gamma=gamma)


def log_cosh_dice_loss(p, y, smooth=1.0):
    return loss_value("log_cosh_dice", p, y, smooth=smooth)


def sens_spec_loss(p, y, w=0.5, smooth=1e-6):
    """Weighted sum of squared-error sensitivity and specificity terms.

    Each term is the squared error over one class normalised by that class's
    pixel count (plus ``smooth``); ``w`` weights the foreground term.
    """
    return loss_value("sens_spec", p, y, w=w, smooth=smooth)
