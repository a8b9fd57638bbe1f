"""Semantic-segmentation losses over binary probability fields.

Fourteen losses with analytic gradients, hard evaluation metrics, exact
Euclidean distance transforms and deterministic file formats.
"""

from .errors import (
    DimensionMismatch,
    EmptySource,
    InvalidEpsilon,
    InvalidThreshold,
    IoError,
    MalformedHeader,
    NotADirectory,
    ParamOutOfRange,
    RaggedRows,
    SegLossError,
    ShapeMismatch,
    UnexpectedEof,
    UnknownLoss,
    UnknownParam,
    UnsupportedMaxval,
    ValueOutOfRange,
)
from .fields import (
    EPS_CLIP,
    MaskField,
    ProbField,
    as_mask_field,
    as_prob_field,
    clip_probabilities,
    make_mask_field,
    make_prob_field,
)
from .geometry import DistanceField, binarize, edt_bruteforce, edt_exact, extract_boundary
from .gradients import FitResult, GradField, fd_grad, fit_logits, gradcheck, loss_and_grad
from .losses import (
    LOSS_NAMES,
    LossSpec,
    LossValue,
    balanced_ce,
    bce,
    combo_loss,
    dice_loss,
    distance_map_penalty_loss,
    evaluate,
    exp_log_loss,
    focal,
    focal_tversky_loss,
    hausdorff_dt_loss,
    log_cosh_dice_loss,
    parse_loss_spec,
    sens_spec_loss,
    shape_aware_loss,
    soft_dice_coeff,
    tversky_index,
    tversky_loss,
    weighted_ce,
)
from .metrics import ConfusionCounts, MetricReport, confusion, metric_report

__version__ = "0.1.0"
