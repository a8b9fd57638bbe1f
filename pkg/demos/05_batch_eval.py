"""
Batch evaluation and the JSON report
====================================

Write a few prediction/truth pairs to disk, evaluate them all, and read
the aggregate back. The same report comes out of ``segloss eval``.
"""

import json
import tempfile
from pathlib import Path

import numpy as np

from segloss import make_mask_field, parse_loss_spec
from segloss.evaluation import evaluate_manifest
from segloss.formats import build_manifest, report_json, write_float_grid, write_pgm

rng = np.random.default_rng(3)
root = Path(tempfile.mkdtemp())
(root / "pred").mkdir()
(root / "truth").mkdir()

for i in range(3):
    truth = (rng.random((16, 16)) < 0.3).astype(float)
    pred = np.clip(truth * 0.7 + rng.uniform(0, 0.4, truth.shape), 0, 1)
    write_pgm(make_mask_field(16, 16, truth), root / "truth" / f"case{i}.pgm")
    write_float_grid(pred, root / "pred" / f"case{i}.slf")

# a blank image: precision, recall and dice are undefined, not zero
write_pgm(make_mask_field(16, 16, np.zeros((16, 16))), root / "truth" / "blank.pgm")
write_float_grid(np.zeros((16, 16)), root / "pred" / "blank.csv")

manifest = build_manifest(root / "pred", root / "truth")
specs = [parse_loss_spec(s) for s in ("dice", "focal:gamma=1", "hausdorff_dt")]
report = evaluate_manifest(manifest, specs, threshold=0.5)

data = json.loads(report_json(report))
print(json.dumps(data["aggregate"], indent=2))
print(data["pairs"][0]["flags"], data["pairs"][0]["metrics"])

# equivalent command line:
print(f"segloss eval --pred {root / 'pred'} --truth {root / 'truth'} --losses dice focal:gamma=1 hausdorff_dt")
