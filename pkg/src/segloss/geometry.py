"""Binarization, boundary extraction and exact Euclidean distance transforms."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import EmptySource, InvalidThreshold
from .fields import MaskField, _Field, _frozen, as_mask_field, as_prob_field


@dataclass(frozen=True, eq=False)
class DistanceField(_Field):
    """Euclidean distances in pixel units.

    ``squared`` carries the exact integer squared distances when the field
    came from a transform.
    """

    squared: np.ndarray | None = None


def check_threshold(threshold):
    if not 0.0 < threshold < 1.0:
        raise InvalidThreshold(f"threshold must lie in (0, 1), got {threshold!r}")


def binarize(p, threshold: float = 0.5) -> MaskField:
    """Foreground wherever ``p >= threshold`` (ties go to foreground)."""
    check_threshold(threshold)
    p = as_prob_field(p)
    return MaskField(_frozen(p.values >= threshold))


def extract_boundary(mask) -> MaskField:
    """Foreground pixels with at least one background 4-neighbour.

    Pixels outside the image count as background, so foreground touching the
    border is always boundary.
    """
    m = as_mask_field(mask).values.astype(bool)
    padded = np.pad(m, 1, constant_values=False)
    interior = (
        padded[:-2, 1:-1] & padded[2:, 1:-1] & padded[1:-1, :-2] & padded[1:-1, 2:]
    )
    return MaskField(_frozen(m & ~interior))


def _lower_envelope(f):
    """1-D squared distance transform of sampled function ``f``.

    ``None`` marks +inf. Breakpoints are kept as exact fractions (num, den)
    with den > 0, so integer inputs give integer outputs without rounding.
    """
    n = len(f)
    sites = [q for q in range(n) if f[q] is not None]
    if not sites:
        return [None] * n
    v = [sites[0]]
    z = [None]  # z[k] is the left end of parabola v[k]'s segment; None = -inf
    for q in sites[1:]:
        fq = f[q] + q * q
        while True:
            r = v[-1]
            num = fq - (f[r] + r * r)
            den = 2 * (q - r)
            left = z[-1]
            # pop parabola r if the new one overtakes it before r's segment starts
            if left is not None and num * left[1] <= left[0] * den:
                v.pop()
                z.pop()
                continue
            v.append(q)
            z.append((num, den))
            break
    out = [0] * n
    k = 0
    for q in range(n):
        while k + 1 < len(v) and z[k + 1][0] < q * z[k + 1][1]:
            k += 1
        r = v[k]
        out[q] = (q - r) * (q - r) + f[r]
    return out


def squared_edt(source) -> np.ndarray:
    """Exact squared distances to the nearest foreground pixel, as int64.

    Column pass first, then row pass, each a 1-D lower-envelope transform.
    """
    m = as_mask_field(source).values.astype(bool)
    if not m.any():
        raise EmptySource("distance transform needs at least one foreground pixel")
    h, w = m.shape
    cols = []
    for c in range(w):
        cols.append(_lower_envelope([0 if m[r, c] else None for r in range(h)]))
    out = np.empty((h, w), dtype=np.int64)
    for r in range(h):
        out[r] = _lower_envelope([cols[c][r] for c in range(w)])
    return out


def edt_exact(source) -> DistanceField:
    sq = squared_edt(source)
    sq.setflags(write=False)
    return DistanceField(_frozen(np.sqrt(sq)), sq)


def edt_bruteforce(source) -> DistanceField:
    """All-pairs O(N^2) distance transform. Test oracle only."""
    m = as_mask_field(source).values.astype(bool)
    if not m.any():
        raise EmptySource("distance transform needs at least one foreground pixel")
    h, w = m.shape
    src = np.argwhere(m).astype(np.int64)
    rows, cols = np.indices((h, w), dtype=np.int64)
    dr = rows.reshape(h, w, 1) - src[:, 0]
    dc = cols.reshape(h, w, 1) - src[:, 1]
    sq = (dr * dr + dc * dc).min(axis=2)
    sq.setflags(write=False)
    return DistanceField(_frozen(np.sqrt(sq)), sq)
