"""The loss catalogue. Importing this package registers all 14 losses."""

from ._base import REGISTRY, LossResult, LossSpec, LossValue, evaluate, get_loss, parse_loss_spec
from .boundary import distance_map_penalty_loss, hausdorff_dt_loss, shape_aware_loss
from .compound import combo_loss, exp_log_loss
from .distribution import balanced_ce, bce, focal, weighted_ce
from .region import (
    dice_loss,
    focal_tversky_loss,
    log_cosh_dice_loss,
    sens_spec_loss,
    soft_dice_coeff,
    tversky_index,
    tversky_loss,
)

LOSS_NAMES = (
    "bce",
    "wce",
    "balanced_ce",
    "focal",
    "dice",
    "tversky",
    "focal_tversky",
    "log_cosh_dice",
    "sens_spec",
    "hausdorff_dt",
    "shape_aware",
    "dist_map_penalty",
    "combo",
    "exp_log",
)

__all__ = [
    "LOSS_NAMES",
    "REGISTRY",
    "LossResult",
    "LossSpec",
    "LossValue",
    "balanced_ce",
    "bce",
    "combo_loss",
    "dice_loss",
    "distance_map_penalty_loss",
    "evaluate",
    "exp_log_loss",
    "focal",
    "focal_tversky_loss",
    "get_loss",
    "hausdorff_dt_loss",
    "log_cosh_dice_loss",
    "parse_loss_spec",
    "sens_spec_loss",
    "shape_aware_loss",
    "soft_dice_coeff",
    "tversky_index",
    "tversky_loss",
    "weighted_ce",
]
