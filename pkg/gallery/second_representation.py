"""
The second representation and its inverse
=========================================

Every form is ``<U|T|^(1/2) xi, |T*|^(1/2) eta>``. When ``T`` is invertible
there is a bijection ``W`` with ``f = <W|T|^(1/2)., |T|^(1/2).>``; otherwise a
perturbation ``B`` with ``T + B`` invertible gives ``V`` in the same role.
Conversely, ``form_from_operator`` rebuilds the form from ``T`` and ``B``.
"""

import numpy as np

from formkit import (
    FiniteForm,
    form_from_operator,
    modulus_half,
    operator_norm,
    sampled_second_rep_residual,
    second_rep_check,
    second_rep_v,
    second_rep_w,
)

rng = np.random.default_rng(2)
t = rng.standard_normal((6, 6)) + 1j * rng.standard_normal((6, 6))
f = FiniteForm(t)

res = second_rep_check(f)
print("r1 =", res.r1, " r2 =", res.r2)
print("sampled identity gap:", sampled_second_rep_residual(f, rng, samples=100))

###############################################################################
# ``W`` is similar to the unitary ``U``, so its eigenvalues sit on the circle.

w = second_rep_w(t)
root = modulus_half(t)
print("|eig(W)| =", np.round(np.abs(np.linalg.eigvals(w)), 12))
print("||T^1/2 W T^1/2 - T|| =", operator_norm(root @ w @ root - t))

###############################################################################
# A singular ``T`` needs a perturbation.

t0 = np.diag([1.0, 0.0])
b = np.diag([0.0, 1.0])
print("V =", second_rep_v(t0, b).real.tolist())

###############################################################################
# Round trip: the form rebuilt from ``(T, B)`` has Gram matrix ``T``, and a
# self-adjoint ``T`` with ``B = iI`` gives a symmetric form.

g = form_from_operator(t, rng.standard_normal((6, 6))).gram
print("||gram - T|| =", operator_norm(g - t))
herm = t + t.conj().T
g = form_from_operator(herm, 1j * np.eye(6)).gram
print("||G - G*|| =", operator_norm(g - g.conj().T))
