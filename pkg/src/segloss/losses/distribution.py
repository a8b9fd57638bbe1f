"""Pixel-wise cross-entropy family: BCE, weighted, balanced and focal.

All four take the mean over pixels of a per-pixel term computed on
probabilities clipped to ``[1e-7, 1 - 1e-7]``.
"""

from __future__ import annotations

import numpy as np

from ._base import FOCAL_ALPHA, NONNEG, POSITIVE, clipped, loss_value, param, register, weighted_ce_terms


@register("bce", "distribution")
def _bce(p, y, frozen):
    terms, dterms = weighted_ce_terms(p, y, 1.0, 1.0)
    return float(np.mean(terms)), dterms / p.size, ()


@register("wce", "distribution", {"beta": param(1.0, POSITIVE)})
def _wce(p, y, frozen, beta):
    terms, dterms = weighted_ce_terms(p, y, beta, 1.0)
    return float(np.mean(terms)), dterms / p.size, ()


@register("balanced_ce", "distribution")
def _balanced_ce(p, y, frozen):
    n = p.size
    beta = (n - float(np.sum(y))) / n
    terms, dterms = weighted_ce_terms(p, y, beta, 1.0 - beta)
    flags = ("balanced_ce:single_class",) if beta in (0.0, 1.0) else ()
    return float(np.mean(terms)), dterms / n, flags


@register("focal", "distribution", {"alpha": param(0.25, FOCAL_ALPHA), "gamma": param(2.0, NONNEG)})
def _focal(p, y, frozen, alpha, gamma):
    pc, live = clipped(p)
    pt = y * pc + (1.0 - y) * (1.0 - pc)
    at = np.ones_like(p) if alpha == 1.0 else y * alpha + (1.0 - y) * (1.0 - alpha)
    q = 1.0 - pt
    log_pt = np.log(pt)
    mod = q**gamma
    terms = -at * mod * log_pt
    if gamma == 0.0:
        dmod = np.zeros_like(p)
    else:
        dmod = -gamma * q ** (gamma - 1.0)
    # d/dp_t of -a (1-p_t)^g ln p_t, then dp_t/dp = 2y - 1
    dpt = -at * (dmod * log_pt + mod / pt)
    grad = dpt * (2.0 * y - 1.0) * live / p.size
    return float(np.mean(terms)), grad, ()


def bce(p, y):
    """Mean binary cross-entropy."""
    return loss_value("bce", p, y)


def weighted_ce(p, y, beta=1.0):
    """Cross-entropy with the foreground term scaled by ``beta`` (> 0)."""
    return loss_value("wce", p, y, beta=beta)


def balanced_ce(p, y):
    """Cross-entropy weighting foreground by the per-image background fraction.

    With ``beta = (N - sum(y)) / N`` the foreground term is scaled by ``beta``
    and the background term by ``1 - beta``. Single-class images make one of
    the weights zero; the result is then flagged ``balanced_ce:single_class``.
    """
    return loss_value("balanced_ce", p, y)


def focal(p, y, alpha=0.25, gamma=2.0):
    """Focal loss ``-a_t (1 - p_t)^gamma ln p_t`` averaged over pixels.

    ``alpha`` weights foreground pixels and ``1 - alpha`` background ones;
    ``alpha = 1`` switches the balancing off entirely.
    """
    return loss_value("focal", p, y, alpha=alpha, gamma=gamma)
