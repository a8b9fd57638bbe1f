"""Distance-map weighted losses: Hausdorff surrogate, shape-aware, and the
distance-map cross-entropy penalty.

Distance maps and thresholded masks are computed in ``prepare`` and held
fixed when differentiating with respect to ``p``. Empty masks never raise:
the affected map is taken as zero and the result carries a flag.
"""

from __future__ import annotations

import numpy as np

from ..geometry import edt_exact, extract_boundary
from ._base import NONNEG, OPEN_UNIT, loss_value, param, register, weighted_ce_terms

THRESHOLD = param(0.5, OPEN_UNIT)


def _edt_or_none(mask):
    return edt_exact(mask).values if mask.any() else None


def _prepare_hausdorff(p, y, alpha_exp, threshold):
    flags = []
    weight = np.zeros_like(p)
    d_truth = _edt_or_none(y)
    d_pred = _edt_or_none(p >= threshold)
    if d_truth is None:
        flags.append("hausdorff_dt:empty_truth")
    else:
        weight += d_truth**alpha_exp
    if d_pred is None:
        flags.append("hausdorff_dt:empty_prediction")
    else:
        weight += d_pred**alpha_exp
    return weight, tuple(flags)


@register(
    "hausdorff_dt",
    "boundary",
    {"alpha_exp": param(2.0, NONNEG), "threshold": THRESHOLD},
    prepare=_prepare_hausdorff,
)
def _hausdorff_dt(p, y, frozen, alpha_exp, threshold):
    weight, flags = frozen
    diff = p - y
    return float(np.mean(diff * diff * weight)), 2.0 * diff * weight / p.size, flags


def _truth_boundary_distance(y, name):
    gt_boundary = extract_boundary(y).values
    if not gt_boundary.any():
        return np.zeros_like(y), (f"{name}:empty_truth_boundary",)
    return edt_exact(gt_boundary).values, ()


def _prepare_shape_aware(p, y, threshold):
    dist, flags = _truth_boundary_distance(y, "shape_aware")
    pred_boundary = extract_boundary(p >= threshold).values
    return dist * pred_boundary, flags


def _prepare_penalty(p, y):
    dist, flags = _truth_boundary_distance(y, "dist_map_penalty")
    peak = float(dist.max())
    if peak == 0.0:
        if not flags:
            flags = ("dist_map_penalty:zero_distance_map",)
        return np.zeros_like(y), flags
    return dist / peak, flags


def _ce_weighted_kernel(p, y, frozen, **_params):
    extra, flags = frozen
    terms, dterms = weighted_ce_terms(p, y, 1.0, 1.0)
    scale = 1.0 + extra
    return float(np.mean(scale * terms)), scale * dterms / p.size, flags


register("shape_aware", "boundary", {"threshold": THRESHOLD}, prepare=_prepare_shape_aware)(
    _ce_weighted_kernel
)
register("dist_map_penalty", "boundary", prepare=_prepare_penalty)(_ce_weighted_kernel)


def hausdorff_dt_loss(p, y, alpha_exp=2.0, threshold=0.5):
    """Mean of ``(p - y)^2 (d_truth^a + d_pred^a)``.

    ``d_truth`` is the distance to the ground-truth foreground and ``d_pred``
    the distance to the foreground of ``p >= threshold``. If either foreground
    is empty its map is zero and the result is flagged.
    """
    return loss_value("hausdorff_dt", p, y, alpha_exp=alpha_exp, threshold=threshold)


def shape_aware_loss(p, y, threshold=0.5):
    """Cross-entropy with pixels on the predicted boundary up-weighted by
    ``1 + E``, where ``E`` is their distance to the ground-truth boundary."""
    return loss_value("shape_aware", p, y, threshold=threshold)


def distance_map_penalty_loss(p, y):
    """Cross-entropy weighted by ``1 + phi``, with ``phi`` the distance to the
    ground-truth boundary scaled to a maximum of 1."""
    return loss_value("dist_map_penalty", p, y)
