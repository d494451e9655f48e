"""
Multiplication operators on a grid
==================================

Multiplication by ``r(z)`` sampled at the cell centres of a grid over
``[-2, 2]^2``. On ``Z = {|r| <= 1}`` the perturbation ``1 - r`` lifts the
symbol to 1, so ``r + B`` never comes near zero, and its phase is the
unitary factor ``U_B``.
"""

import numpy as np

from formkit import (
    GridMultiplication,
    diagonal_polar,
    grid_perturbation,
    grid_to_diagonal,
    multiplication_u_b,
)

for r in ("z", "abs(z)^2", "0.5"):
    g = GridMultiplication(r, -2, 2, -2, 2, 20, 20)
    alpha, area = grid_to_diagonal(g)
    beta = grid_perturbation(g)
    direct = multiplication_u_b(g).values(400)
    via_polar = diagonal_polar(alpha + beta)[0].values(400)
    inside = np.mean(np.abs(g.sample()) <= 1)
    print(f"r = {r:<9} cells in Z: {inside:.2f}  cell area: {area:.3f}  "
          f"U_B gap: {np.abs(direct - via_polar).max():.1e}  "
          f"min|r+B|: {np.abs(alpha.values(400) + beta.values(400)).min():.3f}")
