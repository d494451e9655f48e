"""
Polar decomposition of a singular matrix
========================================

``T = U|T|`` with ``U`` a partial isometry that vanishes on the kernel of
``|T|``. The same ``U`` also satisfies ``T = |T*|U``, and it intertwines the
square roots of the two moduli.
"""

import numpy as np

from formkit import intertwine_check, operator_norm, polar

rng = np.random.default_rng(0)

# a rank-3 operator on C^5
t = (rng.standard_normal((5, 3)) + 1j * rng.standard_normal((5, 3))) @ (
    rng.standard_normal((3, 5)) + 1j * rng.standard_normal((3, 5))
)
parts = polar(t)
u, p = parts.isometry, parts.modulus
print("numerical rank:", parts.rank)

###############################################################################
# ``U*U`` is the projection onto the range of ``|T|``, so it is idempotent.

proj = u.conj().T @ u
print("||(U*U)^2 - U*U|| =", operator_norm(proj @ proj - proj))
print("||U|T| - T||      =", operator_norm(u @ p - t))

###############################################################################
# ``|T*|`` comes from an independent decomposition of ``T*``.

p_star = polar(t.conj().T).modulus
print("||  |T*| U - T || =", operator_norm(p_star @ u - t))
print("intertwining gap  =", intertwine_check(t))

###############################################################################
# The nilpotent shift is the smallest case where ``|T|`` and ``|T*|`` differ.

shift = np.array([[0, 1], [0, 0]])
s = polar(shift)
print(s.isometry.real, s.modulus.real, sep="\n")
