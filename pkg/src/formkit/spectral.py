"""
Dense complex linear algebra kernels.

Every operator in formkit is a square ``complex128`` ndarray. The routines
here (Hermitian eigendecomposition, SVD, polar decomposition, PSD square
roots, invertibility verdicts) are thin, validated wrappers around LAPACK
via :mod:`numpy.linalg`; all tolerances come from one :class:`ToleranceConfig`.
"""

from dataclasses import dataclass
import math

import numpy as np

from .errors import DimensionMismatch, NonFinite, NotHermitian, NotPSD

__all__ = [
    "ToleranceConfig",
    "PolarParts",
    "InvertibilityVerdict",
    "as_matrix",
    "hermitian_eig",
    "svd",
    "polar",
    "sqrt_psd",
    "modulus_half",
    "is_invertible",
    "intertwine_check",
    "operator_norm",
]


@dataclass(frozen=True)
class ToleranceConfig:
    """Tolerances used by every numeric verdict.

    Parameters
    ----------
    rel_tol : float
        Relative residual tolerance for identities such as ``U P = T``.
    rank_cutoff : float
        Singular values ``<= rank_cutoff * sigma_max`` count as zero.
    cond_guard : float
        Largest admissible ``cond(H)**2`` for representation extraction.
    """

    rel_tol: float = 1e-10
    rank_cutoff: float = 1e-12
    cond_guard: float = 1e8

    def __post_init__(self):
        if not 0 < self.rel_tol < 1:
            raise ValueError(f"rel_tol must lie in (0, 1), got {self.rel_tol}")
        if not 0 < self.rank_cutoff < 1:
            raise ValueError(f"rank_cutoff must lie in (0, 1), got {self.rank_cutoff}")
        if not self.cond_guard > 1:
            raise ValueError(f"cond_guard must exceed 1, got {self.cond_guard}")


DEFAULT_TOL = ToleranceConfig()


@dataclass(frozen=True)
class PolarParts:
    """``T = isometry @ modulus`` with ``modulus = |T|``."""

    isometry: np.ndarray
    modulus: np.ndarray
    rank: int
    tol_used: float


@dataclass(frozen=True)
class InvertibilityVerdict:
    invertible: bool
    sigma_min: float
    sigma_max: float
    condition_number: float
    scale: float = math.nan


def as_matrix(a, square=True, name="matrix"):
    """Return `a` as a finite complex128 2-D array, validating shape."""
    m = np.asarray(a, dtype=np.complex128)
    if m.ndim != 2 or m.size == 0:
        raise DimensionMismatch(f"{name} must be a nonempty 2-D array, got shape {m.shape}")
    if square and m.shape[0] != m.shape[1]:
        raise DimensionMismatch(f"{name} must be square, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise NonFinite(f"{name} has NaN or infinite entries")
    return m


def _dagger(a):
    return a.conj().T


def operator_norm(t):
    """Largest singular value of `t`.

    >>> operator_norm(np.diag([2.0, -5.0]))
    5.0
    """
    t = as_matrix(t, square=False)
    return float(np.linalg.svd(t, compute_uv=False)[0])


def hermitian_eig(a, tol=DEFAULT_TOL):
    """Eigendecomposition of a Hermitian matrix.

    Returns
    -------
    eigenvalues : (n,) ndarray
        Real, ascending.
    eigenvectors : (n, n) ndarray
        Unitary; column ``k`` belongs to ``eigenvalues[k]``.
    """
    a = as_matrix(a)
    scale = operator_norm(a)
    asym = operator_norm(a - _dagger(a))
    if asym > tol.rel_tol * scale:
        raise NotHermitian(f"||A - A*|| = {asym:.3e} exceeds {tol.rel_tol:.1e} * ||A||")
    # eigh reads one triangle only; symmetrize so both triangles count
    w, v = np.linalg.eigh(0.5 * (a + _dagger(a)))
    return w, v


def svd(t):
    """Full SVD ``t = left @ diag(singulars) @ right.conj().T``.

    Unlike :func:`numpy.linalg.svd` the third factor is ``V`` itself, not
    ``V*``. Singular values are descending.
    """
    t = as_matrix(t, square=False)
    w, s, vh = np.linalg.svd(t)
    return w, s, _dagger(vh)


def _numerical_rank(s, tol):
    if s.size == 0 or s[0] == 0.0:
        return 0
    return int(np.count_nonzero(s > tol.rank_cutoff * s[0]))


def polar(t, tol=DEFAULT_TOL):
    """Polar decomposition ``T = U |T|`` of a square matrix.

    ``|T| = V diag(s) V*`` and ``U = W_r V_r*``, where only the singular
    directions above ``rank_cutoff * sigma_max`` are kept, so `U` is a
    partial isometry vanishing on the (numerical) kernel of ``|T|``.
    For invertible `T` this is the unitary polar factor.
    """
    t = as_matrix(t)
    w, s, v = svd(t)
    r = _numerical_rank(s, tol)
    u = w[:, :r] @ _dagger(v[:, :r])
    p = (v * s) @ _dagger(v)
    p = 0.5 * (p + _dagger(p))
    return PolarParts(isometry=u, modulus=p, rank=r, tol_used=tol.rel_tol)


def sqrt_psd(p, tol=DEFAULT_TOL):
    """Principal square root of a positive semidefinite Hermitian matrix.

    Eigenvalues in ``[-rel_tol * ||P||, 0)`` are rounding noise and are
    clamped to zero; anything more negative raises :class:`NotPSD`.
    """
    w, v = hermitian_eig(p, tol)
    scale = float(np.max(np.abs(w))) if w.size else 0.0
    if w[0] < -tol.rel_tol * scale:
        raise NotPSD(f"eigenvalue {w[0]:.3e} below -{tol.rel_tol:.1e} * ||P||")
    root = np.sqrt(np.clip(w, 0.0, None))
    r = (v * root) @ _dagger(v)
    return 0.5 * (r + _dagger(r))


def modulus_half(t, tol=DEFAULT_TOL):
    """``|T|^(1/2)``, the square root of the polar modulus."""
    return sqrt_psd(polar(t, tol).modulus, tol)


def is_invertible(t, tol=DEFAULT_TOL, scale=None):
    """Invertibility verdict from the singular values of `t`.

    `t` is declared invertible iff ``sigma_min > rank_cutoff * scale``.
    `scale` defaults to ``sigma_max``; callers that assembled `t` as a sum
    pass the summands' norms instead, since cancellation leaves absolute
    rounding error proportional to those.
    """
    t = as_matrix(t)
    s = np.linalg.svd(t, compute_uv=False)
    smax, smin = float(s[0]), float(s[-1])
    scale = smax if scale is None else float(scale)
    invertible = smin > tol.rank_cutoff * scale
    cond = smax / smin if smin > 0 else math.inf
    return InvertibilityVerdict(invertible, smin, smax, cond, scale)


def intertwine_check(t, tol=DEFAULT_TOL):
    """Residual ``|| |T*|^(1/2) U - U |T|^(1/2) ||``.

    ``|T*|`` is taken from an independent polar decomposition of ``T*``
    rather than from the factors of ``T``.
    """
    t = as_matrix(t)
    parts = polar(t, tol)
    half = sqrt_psd(parts.modulus, tol)
    half_star = sqrt_psd(polar(_dagger(t), tol).modulus, tol)
    u = parts.isometry
    return operator_norm(half_star @ u - u @ half)
