"""Loss registry, parameter specs and the shared evaluation path.

Every loss is a *kernel* ``kernel(p, y, frozen, **params) -> (value, grad,
flags)`` on raw float64 arrays, plus an optional ``prepare(p, y, **params)``
that computes the quantities treated as constants of ``p`` (distance maps,
boundaries, thresholded masks). The public loss functions, the analytic
gradient and the finite-difference oracle all go through the same kernel.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, NamedTuple

import numpy as np

from ..errors import ParamOutOfRange, UnknownLoss, UnknownParam
from ..fields import EPS_CLIP, check_pair


@dataclass(frozen=True)
class Param:
    default: float
    check: Callable[[float], bool]
    legal: str


def _ge0(x):
    return x >= 0.0


def _gt0(x):
    return x > 0.0


def _unit(x):
    return 0.0 <= x <= 1.0


def _open_unit(x):
    return 0.0 < x < 1.0


def _alpha_focal(x):
    return 0.0 < x <= 1.0


NONNEG = ("nonneg", _ge0, ">= 0")
POSITIVE = ("positive", _gt0, "> 0")
UNIT = ("unit", _unit, "in [0, 1]")
OPEN_UNIT = ("open_unit", _open_unit, "in (0, 1)")
FOCAL_ALPHA = ("focal_alpha", _alpha_focal, "in (0, 1]")


def param(default, kind):
    return Param(float(default), kind[1], kind[2])


@dataclass(frozen=True)
class LossDef:
    name: str
    kernel: Callable
    params: dict[str, Param] = field(default_factory=dict)
    prepare: Callable | None = None
    family: str = ""


REGISTRY: dict[str, LossDef] = {}


def register(name, family, params=None, prepare=None):
    def deco(kernel):
        REGISTRY[name] = LossDef(name, kernel, dict(params or {}), prepare, family)
        return kernel

    return deco


def get_loss(name) -> LossDef:
    try:
        return REGISTRY[name]
    except KeyError:
        raise UnknownLoss(f"unknown loss {name!r}; known: {', '.join(REGISTRY)}") from None


def resolve_params(name, params=None) -> dict[str, float]:
    """Fill defaults and validate ranges for loss ``name``."""
    ldef = get_loss(name)
    out = {k: p.default for k, p in ldef.params.items()}
    for key, value in (params or {}).items():
        if key not in ldef.params:
            valid = ", ".join(ldef.params) or "none"
            raise UnknownParam(f"{name!r} has no parameter {key!r} (valid: {valid})")
        try:
            value = float(value)
        except (TypeError, ValueError):
            raise ParamOutOfRange(f"{name}.{key} must be a number, got {value!r}") from None
        if math.isnan(value) or not ldef.params[key].check(value):
            raise ParamOutOfRange(f"{name}.{key} must be {ldef.params[key].legal}, got {value!r}")
        out[key] = value
    return out


@dataclass(frozen=True)
class LossSpec:
    """A loss identifier plus fully resolved parameters."""

    name: str
    params: dict[str, float] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "params", resolve_params(self.name, self.params))

    @property
    def label(self) -> str:
        """``name`` alone, or ``name:k=v,...`` listing non-default params."""
        defaults = get_loss(self.name).params
        extra = [
            f"{k}={_fmt(v)}" for k, v in sorted(self.params.items()) if v != defaults[k].default
        ]
        return self.name + (":" + ",".join(extra) if extra else "")

    def __str__(self):
        body = ",".join(f"{k}={_fmt(v)}" for k, v in sorted(self.params.items()))
        return self.name + (":" + body if body else "")


def _fmt(v):
    return repr(float(v)).removesuffix(".0") if float(v).is_integer() else repr(float(v))


def parse_loss_spec(text: str) -> LossSpec:
    """Parse ``"name"`` or ``"name:key=val,key=val"``."""
    text = text.strip()
    name, _, rest = text.partition(":")
    name = name.strip()
    get_loss(name)
    params = {}
    if rest.strip():
        for item in rest.split(","):
            key, eq, value = item.partition("=")
            key = key.strip()
            if not eq or not key:
                raise UnknownParam(f"malformed parameter {item!r} in {text!r}")
            if key in params:
                raise UnknownParam(f"parameter {key!r} given twice in {text!r}")
            if key not in REGISTRY[name].params:
                resolve_params(name, {key: 0.0})
            try:
                params[key] = float(value)
            except ValueError:
                raise ParamOutOfRange(f"{name}.{key}: not a number: {value.strip()!r}") from None
    return LossSpec(name, params)


class LossValue(float):
    """A float carrying the degenerate-case flags raised while computing it."""

    flags: tuple[str, ...]

    def __new__(cls, value, flags=()):
        obj = super().__new__(cls, value)
        obj.flags = tuple(flags)
        return obj

    @property
    def degenerate(self) -> bool:
        return bool(self.flags)


class LossResult(NamedTuple):
    value: LossValue
    grad: np.ndarray


def as_spec(spec, params=None) -> LossSpec:
    if isinstance(spec, LossSpec):
        if params:
            return LossSpec(spec.name, {**spec.params, **params})
        return spec
    if params is None and ":" in spec:
        return parse_loss_spec(spec)
    return LossSpec(spec, params or {})


def prepare(spec: LossSpec, p: np.ndarray, y: np.ndarray):
    ldef = get_loss(spec.name)
    return ldef.prepare(p, y, **spec.params) if ldef.prepare else None


def run_kernel(spec: LossSpec, p: np.ndarray, y: np.ndarray, frozen) -> LossResult:
    value, grad, flags = get_loss(spec.name).kernel(p, y, frozen, **spec.params)
    return LossResult(LossValue(value, flags), grad)


def evaluate(spec, p, y, params=None) -> LossResult:
    """Validate inputs, then compute value and analytic gradient."""
    spec = as_spec(spec, params)
    p, y = check_pair(p, y)
    pv, yv = p.values, y.values
    return run_kernel(spec, pv, yv, prepare(spec, pv, yv))


def loss_value(name, p, y, **params) -> LossValue:
    return evaluate(LossSpec(name, params), p, y).value


# shared pieces of the cross-entropy family


def clipped(p):
    """Clipped probabilities and a mask of pixels where the clip is inactive."""
    pc = np.clip(p, EPS_CLIP, 1.0 - EPS_CLIP)
    live = (p >= EPS_CLIP) & (p <= 1.0 - EPS_CLIP)
    return pc, live


def weighted_ce_terms(p, y, w_fg, w_bg):
    """Per-pixel ``-(w_fg y ln p + w_bg (1-y) ln(1-p))`` and its derivative."""
    pc, live = clipped(p)
    terms = -(w_fg * y * np.log(pc) + w_bg * (1.0 - y) * np.log1p(-pc))
    dterms = (-w_fg * y / pc + w_bg * (1.0 - y) / (1.0 - pc)) * live
    return terms, dterms


def soft_dice_parts(p, y, smooth):
    """Soft Dice coefficient and its gradient with respect to ``p``."""
    inter = float(np.sum(p * y))
    denom = float(np.sum(p)) + float(np.sum(y)) + smooth
    num = 2.0 * inter + smooth
    if denom == 0.0:
        # only reachable with smooth = 0 and both fields empty
        return 1.0, np.zeros_like(p)
    dsc = num / denom
    grad = (2.0 * y * denom - num) / (denom * denom)
    return dsc, grad


def tversky_parts(p, y, alpha, beta, smooth):
    inter = float(np.sum(p * y))
    fp = float(np.sum((1.0 - y) * p))
    fn = float(np.sum(y * (1.0 - p)))
    num = inter + smooth
    denom = inter + alpha * fp + beta * fn + smooth
    if denom == 0.0:
        return 1.0, np.zeros_like(p)
    ti = num / denom
    ddenom = y + alpha * (1.0 - y) - beta * y
    grad = (y * denom - num * ddenom) / (denom * denom)
    return ti, grad
