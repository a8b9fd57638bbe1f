"""Analytic gradients, a central-difference oracle and a logit-space
gradient-descent harness."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import expit

from .errors import ParamOutOfRange
from .fields import ProbField, _Field, _frozen, as_mask_field, check_pair
from .losses._base import LossValue, as_spec, prepare, run_kernel


class GradField(_Field):
    """Per-pixel derivative of a loss with respect to ``p``."""


@dataclass(frozen=True)
class FitResult:
    steps_taken: int
    loss_trace: list[float]
    final_p: ProbField


def loss_and_grad(spec, p, y) -> tuple[LossValue, GradField]:
    """Loss value and analytic dL/dp.

    Pixels where the probability clip is active get zero gradient, and any
    distance map, boundary or thresholded mask is a constant of ``p``.
    """
    spec = as_spec(spec)
    p, y = check_pair(p, y)
    frozen = prepare(spec, p.values, y.values)
    value, grad = run_kernel(spec, p.values, y.values, frozen)
    return value, GradField(_frozen(grad))


def fd_grad(spec, p, y, h: float = 1e-5) -> GradField:
    """Central differences with every non-smooth quantity frozen at ``p``.

    Keep ``p`` inside ``[2h, 1 - 2h]`` so no probe crosses the clip.
    """
    if not h > 0.0:
        raise ParamOutOfRange(f"step h must be > 0, got {h!r}")
    spec = as_spec(spec)
    p, y = check_pair(p, y)
    base, yv = p.values, y.values
    frozen = prepare(spec, base, yv)
    work = base.copy()
    grad = np.empty_like(base)
    for idx in np.ndindex(base.shape):
        x = base[idx]
        work[idx] = x + h
        up = run_kernel(spec, work, yv, frozen).value
        work[idx] = x - h
        down = run_kernel(spec, work, yv, frozen).value
        work[idx] = x
        grad[idx] = (up - down) / (2.0 * h)
    return GradField(_frozen(grad))


def max_relative_error(analytic, reference, floor: float = 1e-8) -> float:
    a = np.asarray(getattr(analytic, "values", analytic))
    r = np.asarray(getattr(reference, "values", reference))
    return float(np.max(np.abs(a - r) / np.maximum(np.abs(r), floor)))


def random_pair(rng, shape=(8, 8), low=0.05, high=0.95):
    """Interior probabilities and a mask holding both labels."""
    p = rng.uniform(low, high, size=shape)
    y = (rng.random(shape) < 0.5).astype(np.float64)
    y.flat[0], y.flat[-1] = 1.0, 0.0
    return p, y


def gradcheck(spec, seeds: int = 20, shape=(8, 8), h: float = 1e-5) -> float:
    """Worst analytic-vs-FD relative error over ``seeds`` random pairs."""
    spec = as_spec(spec)
    worst = 0.0
    for seed in range(seeds):
        p, y = random_pair(np.random.default_rng(seed), shape)
        _, analytic = loss_and_grad(spec, p, y)
        worst = max(worst, max_relative_error(analytic, fd_grad(spec, p, y, h)))
    return worst


def fit_logits(y, spec, steps: int = 500, lr: float = 1.0, seed: int = 7, callback=None) -> FitResult:
    """Plain gradient descent on logits ``z`` with ``p = sigmoid(z)``.

    ``z`` starts as uniform noise in [-0.1, 0.1] drawn from ``seed``; each
    step records the loss, then applies ``z -= lr * N * dL/dp * p * (1 - p)``.

    ``lr`` is a per-pixel step size: losses are pixel means, so the raw
    gradient shrinks as 1/N and is rescaled by the pixel count ``N``.
    ``callback(step, p, loss)``, if given, sees each iterate before its update.
    """
    if int(steps) != steps or steps < 1:
        raise ParamOutOfRange(f"steps must be a positive integer, got {steps!r}")
    if not lr > 0.0:
        raise ParamOutOfRange(f"lr must be > 0, got {lr!r}")
    spec = as_spec(spec)
    y = as_mask_field(y).values
    rng = np.random.default_rng(seed)
    z = rng.uniform(-0.1, 0.1, size=y.shape)
    scale = lr * y.size
    trace = []
    for step in range(int(steps)):
        p = expit(z)
        value, grad = run_kernel(spec, p, y, prepare(spec, p, y))
        trace.append(float(value))
        if callback is not None:
            callback(step, p, float(value))
        z = z - scale * grad * p * (1.0 - p)
    return FitResult(int(steps), trace, ProbField(_frozen(expit(z))))
