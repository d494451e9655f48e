"""
Forms relative to a metric operator
===================================

A form ``f(xi, eta) = <A xi, eta>`` can be rewritten against a positive
metric ``H`` as ``<Q H xi, H eta>``. Whether a bounded perturbation ``B``
makes the form solvable is then decided twice: once through ``Q`` and once
through the associated operator ``T = HQH``.
"""

import numpy as np

from formkit import (
    FiniteForm,
    MetricOperator,
    associated_operator,
    heinz_constants,
    rn_extract,
    semibounded_gamma,
    solvability_check,
)

rng = np.random.default_rng(1)
n = 4
a = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
q, _ = np.linalg.qr(rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n)))
h = (q * np.geomspace(1, 50, n)) @ q.conj().T

rep = rn_extract(FiniteForm(a), MetricOperator(h))
print("cond(H) =", rep.metric.condition_number)
print("||HQH - A|| =", np.linalg.norm(associated_operator(rep) - a, 2))

###############################################################################
# A singular form made solvable: ``diag(1, 0)`` with ``B = diag(0, 1)``.

rep = rn_extract(FiniteForm(np.diag([1.0, 0.0])), MetricOperator(np.eye(2)))
for b in (np.zeros((2, 2)), np.diag([0.0, 1.0])):
    v = solvability_check(rep, b)
    print("B =", np.diag(b).real, "solvable:", v.solvable,
          "sigma_min:", v.bijection.sigma_min, v.resolvent_zero.sigma_min)

###############################################################################
# For a symmetric form the best lower bound is the smallest eigenvalue.

herm = a + a.conj().T
print("gamma =", semibounded_gamma(FiniteForm(herm)))

###############################################################################
# Graph norms of ``|T|^(1/2)`` and ``|T+B|^(1/2)`` are equivalent; the
# constants are the extreme eigenvalues of a generalized pencil.

b = 0.5 * (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n)))
print("c_low, c_high =", heinz_constants(a, b))
print("B = 0:", heinz_constants(a, np.zeros((n, n))))
