"""
Unbounded diagonal operators
============================

``{xi_n} -> {alpha_n xi_n}`` on l^2. Truncations are exact compressions, so
boundedness questions reduce to watching suprema over growing ``N``.
"""

import numpy as np

from formkit import (
    SequenceSymbol,
    canonical_perturbation,
    criteria_sweep,
    natural_metric,
    second_rep_sweep,
)

for expr in ("n", "(-1)^n * n^2", "n * exp(i*n)", "0"):
    alpha = SequenceSymbol.closed_form(expr)
    beta = canonical_perturbation(alpha)
    gap = np.abs(alpha.values(10**5) + beta.values(10**5)).min()
    rep = criteria_sweep(alpha, beta, natural_metric(alpha))
    print(f"{expr:>14}: min|alpha+beta| = {gap}, hyper-solvable = {rep.hyper_solvable}")
    for c in rep.criteria:
        print(f"{'':>16}{c.name:<22}{c.verdict:<13}{np.round(c.sweep, 4)}")

###############################################################################
# ``Y_N`` peaks at ``n = 2``: ``h_2^2 / alpha_2 = 3/2``.

alpha = SequenceSymbol.closed_form("n")
rep = criteria_sweep(alpha, canonical_perturbation(alpha), natural_metric(alpha))
print("X sweep:", rep.x_sweep)
print("Y sweep:", rep.y_sweep)

###############################################################################
# With a metric that ignores ``alpha``, ``Q = alpha / h^2`` is unbounded and
# the instance is outside the hypotheses; the report flags this.

rep = criteria_sweep(alpha, canonical_perturbation(alpha), SequenceSymbol.closed_form("1"))
print("hypotheses violated:", rep.hypotheses_violated,
      [c.verdict for c in rep.criteria])

###############################################################################
# Truncated second representation against dense polar factors.

trunc = second_rep_sweep(SequenceSymbol.closed_form("n * exp(i*n)"), dims=(8, 32, 128))
for name, values in trunc.residuals.items():
    print(f"{name:<16}", ["%.1e" % v for v in values])
