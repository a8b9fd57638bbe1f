"""
Distance maps behind the boundary losses
========================================

The boundary-based losses weight pixels by exact Euclidean distances.
"""

import numpy as np

from segloss import (
    binarize,
    distance_map_penalty_loss,
    edt_bruteforce,
    edt_exact,
    extract_boundary,
    hausdorff_dt_loss,
    shape_aware_loss,
)

mask = np.zeros((7, 9))
mask[2:5, 2:7] = 1

boundary = extract_boundary(mask)
print(boundary.values.astype(int))

# distance to the foreground region, and to its boundary ring
print(np.round(edt_exact(mask).values, 2))
print(np.round(edt_exact(boundary).values, 2))

# squared distances are exact integers; the brute-force oracle agrees
print(np.array_equal(edt_exact(mask).squared, edt_bruteforce(mask).squared))

# a prediction shifted by two columns
pred = np.roll(mask, 2, axis=1) * 0.9 + 0.05
print(binarize(pred).values.astype(int))
for loss in (hausdorff_dt_loss, shape_aware_loss, distance_map_penalty_loss):
    print(loss.__name__, float(loss(pred, mask)))

# empty truth: no error, a flagged fallback instead
v = hausdorff_dt_loss(pred, np.zeros_like(mask))
print(float(v), v.flags)
