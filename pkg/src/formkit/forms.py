"""
Sesquilinear forms on finite-dimensional complex Hilbert spaces.

A form is stored by its Gram matrix ``A`` in the standard basis, with the
second slot conjugated::

    form(xi, eta) = <A xi, eta> = eta^* A xi

In finite dimension the domain is the whole space, every form is bounded
with respect to any metric, and the associated operator *is* the Gram
matrix. Everything below (Radon-Nikodym-like representations ``<Q H xi, H eta>``,
solvability through a bounded perturbation ``B``, the second representation
through the polar factors, and the inverse construction from an operator)
is therefore an exact matrix identity that can be checked numerically.
"""

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .errors import (
    ConditionGuard,
    DimensionMismatch,
    InternalInconsistency,
    MetricSingular,
    NotHermitian,
    NotInvertible,
    NotSymmetric,
)
from .spectral import (
    DEFAULT_TOL,
    InvertibilityVerdict,
    ToleranceConfig,
    as_matrix,
    hermitian_eig,
    is_invertible,
    modulus_half,
    operator_norm,
    polar,
    sqrt_psd,
)

__all__ = [
    "FiniteForm",
    "MetricOperator",
    "RNRepresentation",
    "SolvabilityVerdict",
    "SecondRepResiduals",
    "eval_form",
    "adjoint_form",
    "rn_extract",
    "associated_operator",
    "associated_operator_two_metrics",
    "solvability_check",
    "semibounded_gamma",
    "second_rep_factors",
    "second_rep_check",
    "sampled_second_rep_residual",
    "second_rep_w",
    "second_rep_v",
    "form_from_operator",
    "adjoint_rep",
    "heinz_constants",
]


def _dagger(a):
    return a.conj().T


@dataclass(frozen=True, eq=False)
class FiniteForm:
    """Form ``(xi, eta) -> <gram @ xi, eta>`` on ``C^dim``."""

    gram: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "gram", as_matrix(self.gram, name="gram"))

    @property
    def dim(self):
        return self.gram.shape[0]

    def __call__(self, xi, eta):
        return eval_form(self, xi, eta)

    def __eq__(self, other):
        return isinstance(other, FiniteForm) and np.array_equal(self.gram, other.gram)

    __hash__ = None


@dataclass(frozen=True, eq=False)
class MetricOperator:
    """Positive definite Hermitian ``H`` defining the inner product ``<H., H.>``.

    Construction fails with :class:`MetricSingular` unless
    ``lambda_min(H) > rank_cutoff * lambda_max(H)``, i.e. ``0`` lies in the
    resolvent set of ``H``.
    """

    h: np.ndarray
    tol: ToleranceConfig = field(default=DEFAULT_TOL, repr=False)

    def __post_init__(self):
        h = as_matrix(self.h, name="metric")
        try:
            w, _ = hermitian_eig(h, self.tol)
        except NotHermitian as exc:
            raise MetricSingular(f"metric is not Hermitian: {exc}") from None
        if not w[0] > self.tol.rank_cutoff * abs(w[-1]):
            raise MetricSingular(
                f"metric is not positive definite: lambda_min = {w[0]:.3e}, "
                f"lambda_max = {w[-1]:.3e}"
            )
        object.__setattr__(self, "h", 0.5 * (h + _dagger(h)))
        object.__setattr__(self, "_eigs", w)
        object.__setattr__(self, "_chol", scipy.linalg.cho_factor(self.h, lower=True))

    @property
    def dim(self):
        return self.h.shape[0]

    @property
    def condition_number(self):
        return float(self._eigs[-1] / self._eigs[0])

    def sandwich_inverse(self, a):
        """``H^-1 a H^-1`` via two Cholesky solves."""
        x = scipy.linalg.cho_solve(self._chol, a)
        return _dagger(scipy.linalg.cho_solve(self._chol, _dagger(x)))

    @property
    def norm(self):
        return float(self._eigs[-1])


@dataclass(frozen=True, eq=False)
class RNRepresentation:
    """Pair ``(Q, H)`` with ``form(xi, eta) = <Q H xi, H eta>``."""

    q: np.ndarray
    metric: MetricOperator

    def __post_init__(self):
        q = as_matrix(self.q, name="Q")
        if q.shape != self.metric.h.shape:
            raise DimensionMismatch(f"Q has shape {q.shape}, metric {self.metric.h.shape}")
        object.__setattr__(self, "q", q)

    def residual(self, gram):
        """``||H Q H - gram||``."""
        return operator_norm(associated_operator(self) - gram)


@dataclass(frozen=True)
class SolvabilityVerdict:
    q_b: np.ndarray
    bijection: InvertibilityVerdict
    t_plus_b: np.ndarray
    resolvent_zero: InvertibilityVerdict
    agree: bool

    @property
    def solvable(self):
        return self.agree and self.bijection.invertible


@dataclass(frozen=True)
class SecondRepResiduals:
    r1: float
    r2: float
    normal_gap: float


def _check_dims(*mats):
    shapes = {m.shape for m in mats}
    if len(shapes) != 1:
        raise DimensionMismatch(f"incompatible shapes {sorted(shapes)}")


def eval_form(f, xi, eta):
    """``<A xi, eta>``; linear in `xi`, conjugate-linear in `eta`."""
    xi = np.asarray(xi, dtype=np.complex128)
    eta = np.asarray(eta, dtype=np.complex128)
    if xi.shape != (f.dim,) or eta.shape != (f.dim,):
        raise DimensionMismatch(
            f"vectors of shape {xi.shape}, {eta.shape} for a form of dim {f.dim}"
        )
    return complex(np.vdot(eta, f.gram @ xi))


def adjoint_form(f):
    """Adjoint form ``(xi, eta) -> conj(f(eta, xi))``; its Gram matrix is ``A*``."""
    return FiniteForm(_dagger(f.gram))


def rn_extract(f, metric, tol=DEFAULT_TOL):
    """Radon-Nikodym-like representation of `f` with respect to `metric`.

    Returns the unique ``Q = H^-1 A H^-1`` such that ``f(xi, eta) = <Q H xi, H eta>``.

    Raises
    ------
    ConditionGuard
        If ``cond(H)**2 > tol.cond_guard``: the two solves lose about
        ``2 log10 cond(H)`` digits and the result cannot be certified.
    """
    _check_dims(f.gram, metric.h)
    kappa = metric.condition_number
    if kappa**2 > tol.cond_guard:
        raise ConditionGuard(
            f"cond(H)^2 = {kappa**2:.3e} exceeds guard {tol.cond_guard:.1e}", kappa
        )
    return RNRepresentation(metric.sandwich_inverse(f.gram), metric)


def associated_operator(rep):
    """``T = H Q H``."""
    h = rep.metric.h
    return h @ rep.q @ h


def associated_operator_two_metrics(q, m1, m2):
    """Operator ``H2 Q H1`` associated with ``(xi, eta) -> <Q H1 xi, H2 eta>``."""
    q = as_matrix(q, name="Q")
    _check_dims(q, m1.h, m2.h)
    return m2.h @ q @ m1.h


def solvability_check(rep, b, tol=DEFAULT_TOL):
    """Decide whether the bounded perturbation `b` makes the form solvable.

    Two equivalent criteria are evaluated independently: bijectivity of
    ``Q_B = Q + H^-1 B H^-1`` and invertibility of ``T + B`` with
    ``T = H Q H``. Each sum is judged against the norms of its summands,
    which bound the rounding error left by cancellation.

    Raises
    ------
    InternalInconsistency
        If the two verdicts disagree; this can only be a conditioning
        problem and both smallest singular values are attached.
    """
    b = as_matrix(b, name="B")
    _check_dims(rep.q, b)
    h_term = rep.metric.sandwich_inverse(b)
    q_b = rep.q + h_term
    bijection = is_invertible(
        q_b, tol, scale=operator_norm(rep.q) + operator_norm(h_term)
    )
    t = associated_operator(rep)
    t_plus_b = t + b
    resolvent_zero = is_invertible(
        t_plus_b, tol, scale=rep.metric.norm**2 * operator_norm(rep.q) + operator_norm(b)
    )
    if bijection.invertible != resolvent_zero.invertible:
        raise InternalInconsistency(
            "bijectivity of Q + H^-1 B H^-1 and invertibility of T + B disagree "
            f"(sigma_min {bijection.sigma_min:.3e} vs {resolvent_zero.sigma_min:.3e})",
            bijection.sigma_min,
            resolvent_zero.sigma_min,
        )
    return SolvabilityVerdict(q_b, bijection, t_plus_b, resolvent_zero, True)


def semibounded_gamma(f, tol=DEFAULT_TOL):
    """Largest ``gamma`` with ``f(xi, xi) >= gamma ||xi||^2``, i.e. ``lambda_min``."""
    try:
        w, _ = hermitian_eig(f.gram, tol)
    except NotHermitian as exc:
        raise NotSymmetric(f"form is not symmetric: {exc}") from None
    return float(w[0])


def second_rep_factors(t, tol=DEFAULT_TOL):
    """``(U, |T|^(1/2), |T*|^(1/2))`` from two independent polar decompositions."""
    t = as_matrix(t)
    parts = polar(t, tol)
    half = sqrt_psd(parts.modulus, tol)
    modulus_star = polar(_dagger(t), tol).modulus
    half_star = sqrt_psd(modulus_star, tol)
    return parts.isometry, half, half_star, parts.modulus, modulus_star


def second_rep_check(f, tol=DEFAULT_TOL):
    """Residuals of the two factorizations of the associated operator.

    ``r1 = || |T*|^(1/2) U |T|^(1/2) - T ||`` and
    ``r2 = || |T*|^(1/2) (|T*|^(1/2) U) - T ||``, plus
    ``normal_gap = || |T*| - |T| ||`` which vanishes for normal ``T``.
    """
    t = f.gram
    u, half, half_star, modulus, modulus_star = second_rep_factors(t, tol)
    r1 = operator_norm(half_star @ (u @ half) - t)
    r2 = operator_norm(half_star @ (half_star @ u) - t)
    return SecondRepResiduals(r1, r2, operator_norm(modulus_star - modulus))


def sampled_second_rep_residual(f, rng, samples=100, tol=DEFAULT_TOL):
    """Worst normalized gap ``|f(xi, eta) - <U|T|^(1/2) xi, |T*|^(1/2) eta>|``.

    Normalized by ``||T|| ||xi|| ||eta||``; pairs are complex Gaussian.
    """
    u, half, half_star, _, _ = second_rep_factors(f.gram, tol)
    norm_t = operator_norm(f.gram) or 1.0
    n = f.dim
    worst = 0.0
    for _ in range(samples):
        xi = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        eta = rng.standard_normal(n) + 1j * rng.standard_normal(n)
        lhs = eval_form(f, xi, eta)
        rhs = np.vdot(half_star @ eta, u @ (half @ xi))
        gap = abs(lhs - rhs) / (norm_t * np.linalg.norm(xi) * np.linalg.norm(eta))
        worst = max(worst, gap)
    return float(worst)


def _require_invertible(m, what, tol):
    verdict = is_invertible(m, tol)
    if not verdict.invertible:
        raise NotInvertible(
            f"{what} is not invertible (sigma_min = {verdict.sigma_min:.3e})",
            verdict.sigma_min,
        )
    return verdict


def second_rep_w(t, tol=DEFAULT_TOL):
    """The bijection ``W = |T|^(-1/2) T |T|^(-1/2)`` for invertible `t`."""
    t = as_matrix(t)
    _require_invertible(t, "T", tol)
    half = MetricOperator(modulus_half(t, tol), tol)
    return half.sandwich_inverse(t)


def second_rep_v(t, b, tol=DEFAULT_TOL):
    """``V = |T+B|^(-1/2) T |T+B|^(-1/2)`` for `b` with ``T + B`` invertible."""
    t = as_matrix(t)
    b = as_matrix(b, name="B")
    _check_dims(t, b)
    _require_invertible(t + b, "T + B", tol)
    half = MetricOperator(modulus_half(t + b, tol), tol)
    return half.sandwich_inverse(t)


def form_from_operator(t, b, tol=DEFAULT_TOL):
    """The unique form whose associated operator is `t`.

    With ``T + B = U_B |T+B|`` the form ``<U_B |T+B|^(1/2) xi, |T*+B*|^(1/2) eta>``
    has associated operator ``T + B``; subtracting ``<B xi, eta>`` leaves `t`.
    """
    t = as_matrix(t)
    b = as_matrix(b, name="B")
    _check_dims(t, b)
    s = t + b
    _require_invertible(s, "T + B", tol)
    u_b, half, half_star, _, _ = second_rep_factors(s, tol)
    gram_b = half_star @ u_b @ half
    return FiniteForm(gram_b - b)


def adjoint_rep(rep):
    """Representation ``(Q*, H)`` of the adjoint form."""
    return RNRepresentation(_dagger(rep.q), rep.metric)


def heinz_constants(t, b, tol=DEFAULT_TOL):
    """Equivalence constants of the graph norms of ``|T|^(1/2)`` and ``|T+B|^(1/2)``.

    Returns the extreme eigenvalues of the pencil ``(I + |T+B|, I + |T|)``,
    so that ``c_low <= (|xi|^2 + ||T+B|^(1/2) xi|^2) / (|xi|^2 + ||T|^(1/2) xi|^2) <= c_high``.
    """
    t = as_matrix(t)
    b = as_matrix(b, name="B")
    _check_dims(t, b)
    eye = np.eye(t.shape[0])
    num = eye + polar(t + b, tol).modulus
    den = eye + polar(t, tol).modulus
    w = scipy.linalg.eigh(num, den, eigvals_only=True)
    return float(w[0]), float(w[-1])
