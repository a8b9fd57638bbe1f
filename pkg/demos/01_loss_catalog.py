"""
The loss catalogue on one prediction
====================================

Evaluate all fourteen losses on a single synthetic prediction and see how
they react when the prediction gets worse.
"""

import numpy as np

from segloss import LOSS_NAMES, evaluate

# a 24x24 square of foreground, and a slightly blurry, shifted prediction
truth = np.zeros((24, 24))
truth[6:18, 6:18] = 1

rng = np.random.default_rng(0)
good = np.clip(np.roll(truth, 1, axis=1) * 0.85 + rng.uniform(0, 0.15, truth.shape), 0, 1)
bad = np.clip(np.roll(truth, 5, axis=1) * 0.6 + rng.uniform(0, 0.4, truth.shape), 0, 1)

print(f"{'loss':<18}{'good':>12}{'bad':>12}  flags")
for name in LOSS_NAMES:
    g = evaluate(name, good, truth).value
    b = evaluate(name, bad, truth).value
    print(f"{name:<18}{g:>12.5f}{b:>12.5f}  {', '.join(g.flags + b.flags)}")

# parameters are passed as a dict or with the "name:key=value" syntax
print(evaluate("tversky:alpha=0.7,beta=0.3", bad, truth).value)
print(evaluate("tversky", bad, truth, {"alpha": 0.3, "beta": 0.7}).value)

# combo loss is allowed to go negative: its optimum is -(1 - alpha)
print("combo on a perfect prediction:", float(evaluate("combo", truth, truth).value))
