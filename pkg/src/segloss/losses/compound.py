"""Losses combining a cross-entropy term with a Dice term."""

from __future__ import annotations

import math

import numpy as np

from ._base import (
    NONNEG,
    OPEN_UNIT,
    POSITIVE,
    UNIT,
    clipped,
    loss_value,
    param,
    register,
    soft_dice_parts,
    weighted_ce_terms,
)

DSC_FLOOR = 1e-7


@register(
    "combo",
    "compound",
    {"alpha": param(0.5, UNIT), "ce_beta": param(0.5, OPEN_UNIT), "smooth": param(1.0, NONNEG)},
)
def _combo(p, y, frozen, alpha, ce_beta, smooth):
    terms, dterms = weighted_ce_terms(p, y, ce_beta, 1.0 - ce_beta)
    dsc, ddsc = soft_dice_parts(p, y, smooth)
    value = alpha * float(np.mean(terms)) - (1.0 - alpha) * dsc
    return value, alpha * dterms / p.size - (1.0 - alpha) * ddsc, ()


def label_weights(y):
    """``sqrt(N / n_label)`` per pixel; uniform 1 when only one label occurs."""
    n = y.size
    n_fg = float(np.sum(y))
    n_bg = n - n_fg
    if n_fg == 0.0 or n_bg == 0.0:
        return np.ones_like(y), ("exp_log:single_label",)
    return np.where(y == 1.0, math.sqrt(n / n_fg), math.sqrt(n / n_bg)), ()


@register(
    "exp_log",
    "compound",
    {
        "w_dice": param(0.8, NONNEG),
        "w_ce": param(0.2, NONNEG),
        "gamma_dice": param(0.3, POSITIVE),
        "gamma_ce": param(0.3, POSITIVE),
        "smooth": param(1.0, NONNEG),
    },
)
def _exp_log(p, y, frozen, w_dice, w_ce, gamma_dice, gamma_ce, smooth):
    dsc, ddsc = soft_dice_parts(p, y, smooth)
    neg_log_dsc = max(-math.log(max(dsc, DSC_FLOOR)), 0.0)
    l_dice = neg_log_dsc**gamma_dice
    if dsc < DSC_FLOOR or neg_log_dsc == 0.0:
        g_dice = np.zeros_like(p)
    else:
        g_dice = gamma_dice * neg_log_dsc ** (gamma_dice - 1.0) * (-ddsc / dsc)

    weights, flags = label_weights(y)
    pc, live = clipped(p)
    pt = y * pc + (1.0 - y) * (1.0 - pc)
    u = -np.log(pt)
    l_ce = float(np.mean(weights * u**gamma_ce))
    g_ce = weights * gamma_ce * u ** (gamma_ce - 1.0) * (-1.0 / pt) * (2.0 * y - 1.0) * live / p.size

    return w_dice * l_dice + w_ce * l_ce, w_dice * g_dice + w_ce * g_ce, flags


def combo_loss(p, y, alpha=0.5, ce_beta=0.5, smooth=1.0):
    """``alpha * mCE - (1 - alpha) * DSC``; negative values are expected.

    ``mCE`` is cross-entropy with the foreground term weighted by ``ce_beta``
    and the background term by ``1 - ce_beta``.
    """
    return loss_value("combo", p, y, alpha=alpha, ce_beta=ce_beta, smooth=smooth)


def exp_log_loss(p, y, w_dice=0.8, w_ce=0.2, gamma_dice=0.3, gamma_ce=0.3, smooth=1.0):
    """``w_dice * (-ln DSC)^gamma_dice + w_ce * mean(w_l (-ln p_t)^gamma_ce)``.

    The label weight is ``sqrt(N / n_label)`` from per-image label counts;
    single-label images fall back to weight 1 and are flagged.
    """
    return loss_value(
        "exp_log",
        p,
        y,
        w_dice=w_dice,
        w_ce=w_ce,
        gamma_dice=gamma_dice,
        gamma_ce=gamma_ce,
        smooth=smooth,
    )
