"""Dense 2-D probability and label fields.

Fields are immutable wrappers around read-only ``float64`` arrays in
row-major (C) order, so pixel ``i`` is ``row * width + col``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, InvalidEpsilon, ShapeMismatch, ValueOutOfRange

EPS_CLIP = 1e-7
SNAP_TOL = 1e-12


def _frozen(arr):
    arr = np.array(arr, dtype=np.float64, order="C", copy=True)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class _Field:
    values: np.ndarray

    @property
    def height(self) -> int:
        return self.values.shape[0]

    @property
    def width(self) -> int:
        return self.values.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.values.shape

    @property
    def size(self) -> int:
        return self.values.size

    def flat(self) -> list[float]:
        return self.values.ravel().tolist()

    def __eq__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        return self.shape == other.shape and bool(np.array_equal(self.values, other.values))

    __hash__ = None


class ProbField(_Field):
    """Per-pixel foreground probabilities in [0, 1]."""


class MaskField(_Field):
    """Per-pixel ground-truth labels, each exactly 0 or 1."""


def _reshape(height, width, values):
    if int(height) != height or int(width) != width or height < 1 or width < 1:
        raise DimensionMismatch(f"height and width must be positive integers, got {height}x{width}")
    flat = np.asarray(values, dtype=np.float64).ravel()
    if flat.size != height * width:
        raise DimensionMismatch(
            f"expected {height}*{width}={height * width} values, got {flat.size}"
        )
    return flat.reshape(int(height), int(width))


def make_prob_field(height: int, width: int, values) -> ProbField:
    """Validate ``values`` as an ``height x width`` probability field.

    Values within 1e-12 outside [0, 1] are snapped to the boundary; anything
    further out (or non-finite) raises :class:`ValueOutOfRange`.
    """
    arr = _reshape(height, width, values)
    flat = arr.ravel()
    bad = ~np.isfinite(flat) | (flat < -SNAP_TOL) | (flat > 1.0 + SNAP_TOL)
    if bad.any():
        i = int(np.flatnonzero(bad)[0])
        raise ValueOutOfRange(i, float(flat[i]))
    return ProbField(_frozen(np.clip(arr, 0.0, 1.0)))


def make_mask_field(height: int, width: int, values) -> MaskField:
    arr = _reshape(height, width, values)
    flat = arr.ravel()
    bad = (flat != 0.0) & (flat != 1.0)
    if bad.any():
        i = int(np.flatnonzero(bad)[0])
        raise ValueOutOfRange(i, float(flat[i]), f"label {flat[i]!r} at index {i} is not 0 or 1")
    return MaskField(_frozen(arr))


def _as_2d(x):
    arr = np.asarray(x, dtype=np.float64)
    if arr.ndim == 1:
        arr = arr[None, :]
    if arr.ndim != 2:
        raise DimensionMismatch(f"expected a 2-D field, got {arr.ndim} dimensions")
    return arr


def as_prob_field(p) -> ProbField:
    """Coerce a ProbField or array-like (1-D is read as a single row)."""
    if isinstance(p, ProbField):
        return p
    if isinstance(p, MaskField):
        return ProbField(p.values)
    arr = _as_2d(p)
    return make_prob_field(arr.shape[0], arr.shape[1], arr)


def as_mask_field(y) -> MaskField:
    if isinstance(y, MaskField):
        return y
    arr = _as_2d(y)
    return make_mask_field(arr.shape[0], arr.shape[1], arr)


def check_pair(p, y) -> tuple[ProbField, MaskField]:
    p = as_prob_field(p)
    y = as_mask_field(y)
    if p.shape != y.shape:
        raise ShapeMismatch(f"prediction is {p.height}x{p.width}, truth is {y.height}x{y.width}")
    return p, y


def clip_probabilities(p, eps_clip: float = EPS_CLIP) -> ProbField:
    if not 0.0 < eps_clip < 0.5:
        raise InvalidEpsilon(f"eps_clip must lie in (0, 0.5), got {eps_clip!r}")
    p = as_prob_field(p)
    return ProbField(_frozen(np.clip(p.values, eps_clip, 1.0 - eps_clip)))
