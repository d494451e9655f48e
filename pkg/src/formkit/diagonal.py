"""
Diagonal operators on l^2 and discretized multiplication operators on L^2(C).

A diagonal operator ``{xi_n} -> {alpha_n xi_n}`` is determined by its symbol
``alpha``; its compression to the first ``N`` coordinates is exactly
``diag(alpha_1, ..., alpha_N)``, so every identity checked on a truncation
is an exact statement about the operator restricted to that subspace.

Multiplication by ``r(z)`` sampled at the cell centres of a rectangular grid
is diagonal in the cell-indicator basis and reuses the same machinery.

Boundedness of the operators appearing in the hyper-solvability criteria is
a statement about suprema over all ``n``. From finite data it can only be
judged by trend: a sweep is *bounded* when its last three values agree to 1%,
*growing* when every step increases it by more than 10%, and *inconclusive*
otherwise.
"""

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .errors import DomainError, EvalError, ResolventViolation, SpecError
from .expr import Expr, Literal, evaluate, evaluate_array, parse
from .forms import second_rep_factors
from .spectral import DEFAULT_TOL, polar

__all__ = [
    "GrowthClass",
    "SequenceSymbol",
    "GridMultiplication",
    "CriterionRecord",
    "CriteriaReport",
    "TruncationReport",
    "Membership",
    "DEFAULT_DIMS",
    "DEFAULT_HORIZON",
    "trend_verdict",
    "canonical_perturbation",
    "diagonal_polar",
    "grid_to_diagonal",
    "grid_perturbation",
    "multiplication_u_b",
    "natural_metric",
    "criteria_sweep",
    "second_rep_sweep",
    "domain_membership",
]

DEFAULT_DIMS = (8, 32, 128, 512)
DEFAULT_HORIZON = 10**5
TAIL_RULES = ("zero", "last-value", "error")


@dataclass(frozen=True)
class GrowthClass:
    """Declared asymptotics ``|a_n| ~ n**degree * exp(rate * n)``."""

    degree: float = 0.0
    rate: float = 0.0


@dataclass(frozen=True, eq=False)
class SequenceSymbol:
    """A complex sequence ``n -> a_n`` (``n >= 1``) defining a diagonal operator.

    Use :meth:`closed_form`, :meth:`tabulated` or :meth:`derived` to build one.
    """

    kind: str
    label: str
    ast: Optional[Expr] = None
    table: Optional[np.ndarray] = None
    tail: str = "error"
    growth: Optional[GrowthClass] = None
    fn: Optional[Callable] = field(default=None, repr=False)

    @classmethod
    def closed_form(cls, expr, label=None, growth=None):
        ast = parse(expr, "sequence") if isinstance(expr, str) else expr
        text = expr if isinstance(expr, str) else None
        return cls("closed_form", label or text or "closed form", ast=ast, growth=growth)

    @classmethod
    def tabulated(cls, values, tail="zero", label="table", growth=None):
        table = np.asarray(values, dtype=np.complex128).ravel()
        if table.size == 0:
            raise SpecError("tabulated symbol must be nonempty")
        if tail not in TAIL_RULES:
            raise SpecError(f"tail rule must be one of {TAIL_RULES}, got {tail!r}")
        if not np.all(np.isfinite(table)):
            raise EvalError(f"tabulated symbol {label!r} has non-finite entries")
        return cls("tabulated", label, table=table, tail=tail, growth=growth)

    @classmethod
    def derived(cls, fn, label, growth=None):
        """Symbol whose first ``N`` values are ``fn(N)``."""
        return cls("derived", label, fn=fn, growth=growth)

    def values(self, n_max):
        """``(a_1, ..., a_N)`` as a complex array."""
        n_max = int(n_max)
        if n_max < 1:
            raise ValueError("n_max must be positive")
        if self.kind == "closed_form":
            n = np.arange(1, n_max + 1, dtype=np.float64)
            try:
                out = np.broadcast_to(evaluate_array(self.ast, {"n": n}), n.shape).copy()
            except DomainError:
                bad = self._first_failure(n_max)
                raise EvalError(f"symbol {self.label!r} undefined at n = {bad}") from None
        elif self.kind == "tabulated":
            out = self._extend(n_max)
        else:
            out = np.asarray(self.fn(n_max), dtype=np.complex128)
        if not np.all(np.isfinite(out)):
            bad = int(np.flatnonzero(~np.isfinite(out))[0]) + 1
            raise EvalError(f"symbol {self.label!r} is not finite at n = {bad}")
        return out

    def _first_failure(self, n_max):
        for k in range(1, n_max + 1):
            try:
                evaluate(self.ast, {"n": k})
            except DomainError:
                return k
        return None

    def _extend(self, n_max):
        t = self.table
        if n_max <= t.size:
            return t[:n_max].copy()
        if self.tail == "error":
            raise EvalError(
                f"tabulated symbol {self.label!r} has {t.size} entries, {n_max} requested"
            )
        fill = 0.0 if self.tail == "zero" else t[-1]
        return np.concatenate([t, np.full(n_max - t.size, fill, dtype=np.complex128)])

    def __call__(self, n):
        return complex(self.values(n)[-1])

    def __add__(self, other):
        return SequenceSymbol.derived(
            lambda n: self.values(n) + other.values(n), f"({self.label}) + ({other.label})"
        )

    @property
    def finitely_supported(self):
        """True when all but finitely many terms are known to vanish."""
        if self.kind == "closed_form":
            return self.ast == Literal(0j)
        if self.kind == "tabulated":
            return self.tail == "zero" or (self.tail == "last-value" and self.table[-1] == 0)
        return False


@dataclass(frozen=True)
class GridMultiplication:
    """Multiplication by ``r(z)`` on cells of ``[x_min, x_max] x [y_min, y_max]``."""

    r: Expr
    x_min: float
    x_max: float
    y_min: float
    y_max: float
    nx: int
    ny: int
    label: str = "r"

    def __post_init__(self):
        if isinstance(self.r, str):
            object.__setattr__(self, "label", self.r)
            object.__setattr__(self, "r", parse(self.r, "plane"))
        if self.nx < 1 or self.ny < 1:
            raise SpecError("grid needs nx, ny >= 1")
        if not (self.x_max > self.x_min and self.y_max > self.y_min):
            raise SpecError("grid bounds must satisfy x_min < x_max and y_min < y_max")

    @property
    def cell_area(self):
        return (self.x_max - self.x_min) / self.nx * (self.y_max - self.y_min) / self.ny

    def centres(self):
        """Cell-centre coordinates ``(x, y)`` in row-major order (``y`` outer)."""
        dx = (self.x_max - self.x_min) / self.nx
        dy = (self.y_max - self.y_min) / self.ny
        xs = self.x_min + (np.arange(self.nx) + 0.5) * dx
        ys = self.y_min + (np.arange(self.ny) + 0.5) * dy
        y, x = np.meshgrid(ys, xs, indexing="ij")
        return x.ravel(), y.ravel()

    def sample(self):
        x, y = self.centres()
        try:
            r = np.broadcast_to(evaluate_array(self.r, {"x": x, "y": y}), x.shape).copy()
        except DomainError as exc:
            for xk, yk in zip(x, y):
                try:
                    evaluate(self.r, {"x": xk, "y": yk})
                except DomainError:
                    raise EvalError(f"r undefined at z = {xk} + {yk}i: {exc}") from None
            raise
        bad = ~np.isfinite(r)
        if np.any(bad):
            k = int(np.flatnonzero(bad)[0])
            raise EvalError(f"r is not finite at z = {x[k]} + {y[k]}i")
        return r


@dataclass(frozen=True)
class CriterionRecord:
    name: str
    verdict: str  # bounded | growing | inconclusive
    witness: float
    sweep: tuple
    trend: Optional[str]


@dataclass(frozen=True)
class CriteriaReport:
    dims: tuple
    criteria: tuple
    q_bound: CriterionRecord
    x_sweep: tuple
    y_sweep: tuple
    agreement: bool
    hypotheses_violated: bool

    @property
    def hyper_solvable(self):
        return (
            not self.hypotheses_violated
            and self.agreement
            and self.criteria[0].verdict == "bounded"
        )

    def criterion(self, name):
        return next(c for c in self.criteria if c.name == name)


@dataclass(frozen=True)
class TruncationReport:
    dims: tuple
    residuals: dict
    suprema: dict

    def max_residual(self, name=None):
        names = [name] if name else list(self.residuals)
        return max(max(self.residuals[k]) for k in names)


@dataclass(frozen=True)
class Membership:
    verdict: str  # member | non_member | inconclusive
    partial_sums: dict
    reason: str


def trend_verdict(values):
    """Classify a sweep of suprema as bounded, growing or inconclusive.

    Returns ``(verdict, trend)`` where `trend` is ``"stabilizing"``,
    ``"growing"`` or None.
    """
    v = np.asarray(values, dtype=float)
    if v.size >= 2 and np.all(v[1:] > 1.1 * v[:-1]):
        return "growing", "growing"
    if v.size >= 3:
        last = v[-3:]
        top = np.max(np.abs(last))
        if top == 0 or (np.max(last) - np.min(last)) < 0.01 * top:
            return "bounded", "stabilizing"
    return "inconclusive", None


def canonical_perturbation(alpha):
    """``beta_n = 2 - alpha_n`` where ``|alpha_n| <= 1``, else 0.

    Then ``|alpha_n + beta_n| >= 1`` for every ``n``.
    """

    def fn(n):
        a = alpha.values(n)
        return np.where(np.abs(a) <= 1.0, 2.0 - a, 0.0)

    return SequenceSymbol.derived(fn, f"canonical({alpha.label})")


def _phase(a):
    mag = np.abs(a)
    return np.where(mag == 0, 0.0, a / np.where(mag == 0, 1.0, mag))


def diagonal_polar(alpha):
    """Polar factors ``(u, p)``: ``u_n = alpha_n / |alpha_n|`` (0 if ``alpha_n = 0``), ``p_n = |alpha_n|``."""
    u = SequenceSymbol.derived(lambda n: _phase(alpha.values(n)), f"phase({alpha.label})")
    p = SequenceSymbol.derived(
        lambda n: np.abs(alpha.values(n)).astype(np.complex128),
        f"abs({alpha.label})",
        growth=alpha.growth,
    )
    return u, p


def grid_to_diagonal(g):
    """Sample ``r`` at cell centres; returns ``(symbol, cell_area)``."""
    table = g.sample()
    return SequenceSymbol.tabulated(table, tail="error", label=f"grid({g.label})"), g.cell_area


def grid_perturbation(g):
    """Sampled ``B = (1 - r) * chi_Z`` with ``Z = {|r| <= 1}``."""
    r = g.sample()
    beta = np.where(np.abs(r) <= 1.0, 1.0 - r, 0.0)
    return SequenceSymbol.tabulated(beta, tail="error", label=f"perturbation({g.label})")


def multiplication_u_b(g):
    """Unitary polar factor of ``M_r + B`` sampled on the grid.

    Computed directly from ``r``: 1 on ``Z`` and ``r / |r|`` off it.
    """
    r = g.sample()
    inside = np.abs(r) <= 1.0
    w = np.where(inside, 0.0, r) + inside
    return SequenceSymbol.tabulated(w / np.abs(w), tail="error", label=f"U_B({g.label})")


def natural_metric(alpha):
    """``h_n = sqrt(1 + |alpha_n|)``, the diagonal form of the weight ``1 + |r|``."""
    return SequenceSymbol.derived(
        lambda n: np.sqrt(1.0 + np.abs(alpha.values(n))).astype(np.complex128),
        f"metric({alpha.label})",
    )


def _record(name, sweep):
    verdict, trend = trend_verdict(sweep)
    return CriterionRecord(name, verdict, float(sweep[-1]), tuple(float(s) for s in sweep), trend)


def criteria_sweep(alpha, beta, h, dims=DEFAULT_DIMS, tol=DEFAULT_TOL):
    """Evaluate the four equivalent hyper-solvability conditions on truncations.

    For each ``N`` in `dims` everything is diagonal, so operator norms are
    coordinate maxima over ``n <= N`` of

    * ``(1 + |alpha_n|) / h_n^2`` and its reciprocal (domain equality),
    * ``|alpha_n + beta_n| / h_n^2`` and ``h_n^2 / |alpha_n + beta_n|`` (X, Y),
    * ``|h_n u_n / h_n|`` with ``u = phase(alpha + beta)`` (K1 and K2),

    and ``U_B`` preserves the domain iff ``|u_n| = 1``.

    The hypothesis that ``Q = alpha / h^2`` is bounded is tracked separately;
    when its sweep is growing the instance lies outside the hypotheses and
    disagreement is not a counterexample.

    Raises
    ------
    ResolventViolation
        If some ``|alpha_n + beta_n|`` is numerically zero.
    """
    dims = tuple(int(d) for d in dims)
    if not dims or any(d < 1 for d in dims) or list(dims) != sorted(set(dims)):
        raise SpecError(f"dims must be strictly ascending positive integers, got {dims}")
    dom, x, y, k, q, unit_gap = [], [], [], [], [], []
    for n_max in dims:
        a = alpha.values(n_max)
        s = a + beta.values(n_max)
        hv = h.values(n_max)
        if np.any(hv.imag != 0) or np.any(hv.real <= 0):
            raise SpecError(f"metric symbol {h.label!r} must be real and positive")
        w = hv.real**2
        mag = np.abs(s)
        small = mag <= tol.rank_cutoff * mag.max()
        if np.any(small):
            n_bad = int(np.flatnonzero(small)[0]) + 1
            raise ResolventViolation(
                f"|alpha_n + beta_n| = {mag[n_bad - 1]:.3e} at n = {n_bad}: "
                "T + B is not boundedly invertible",
                n_bad,
            )
        ratio = (1.0 + np.abs(a)) / w
        dom.append(max(ratio.max(), (1.0 / ratio).max()))
        x.append((mag / w).max())
        y.append((w / mag).max())
        u = s / mag
        k.append(np.abs(hv * u / hv).max())
        q.append((np.abs(a) / w).max())
        unit_gap.append(np.abs(np.abs(u) - 1.0).max())

    records = (
        _record("hyper_solvable", dom),
        _record("x_y_bounded", np.maximum(x, y)),
        _record("k1_k2_bounded", k),
    )
    preserved = max(unit_gap) <= tol.rel_tol
    records += (
        CriterionRecord(
            "u_b_preserves_domain",
            "bounded" if preserved else "inconclusive",
            float(max(unit_gap)),
            tuple(float(g) for g in unit_gap),
            "stabilizing" if preserved else None,
        ),
    )
    q_bound = _record("q_bounded", q)
    decided = {r.verdict for r in records if r.verdict != "inconclusive"}
    return CriteriaReport(
        dims=dims,
        criteria=records,
        q_bound=q_bound,
        x_sweep=tuple(float(v) for v in x),
        y_sweep=tuple(float(v) for v in y),
        agreement=len(decided) <= 1,
        hypotheses_violated=q_bound.verdict == "growing",
    )


def second_rep_sweep(alpha, dims=DEFAULT_DIMS, samples=20, seed=0, tol=DEFAULT_TOL):
    """Check the second representation on truncations of ``diag(alpha)``.

    For random pairs supported on the first ``N`` coordinates, the direct sum
    ``sum alpha_n xi_n conj(eta_n)`` is compared with
    ``<u |alpha|^(1/2) xi, |alpha|^(1/2) eta>`` from :func:`diagonal_polar`
    and with ``<U |T|^(1/2) xi, |T*|^(1/2) eta>`` from a dense polar
    decomposition. Residuals are normalized by ``max|alpha_n| |xi| |eta|``;
    the dense and diagonal polar factors are compared as matrices too.
    """
    rng = np.random.default_rng(seed)
    u_sym, p_sym = diagonal_polar(alpha)
    names = ("diagonal", "dense", "polar_isometry", "polar_modulus")
    residuals = {k: [] for k in names}
    suprema = {"max_abs_alpha": []}
    for n_max in dims:
        a = alpha.values(n_max)
        u = u_sym.values(n_max)
        root = np.sqrt(p_sym.values(n_max).real)
        scale = float(np.abs(a).max()) or 1.0
        t = np.diag(a)
        iso, half, half_star, _, _ = second_rep_factors(t, tol)
        parts = polar(t, tol)
        worst_diag = worst_dense = 0.0
        for _ in range(samples):
            xi = rng.standard_normal(n_max) + 1j * rng.standard_normal(n_max)
            eta = rng.standard_normal(n_max) + 1j * rng.standard_normal(n_max)
            norm = scale * np.linalg.norm(xi) * np.linalg.norm(eta)
            direct = np.sum(a * xi * np.conj(eta))
            via_diag = np.sum(u * root * xi * np.conj(root * eta))
            via_dense = np.vdot(half_star @ eta, iso @ (half @ xi))
            worst_diag = max(worst_diag, abs(direct - via_diag) / norm)
            worst_dense = max(worst_dense, abs(direct - via_dense) / norm)
        residuals["diagonal"].append(float(worst_diag))
        residuals["dense"].append(float(worst_dense))
        residuals["polar_isometry"].append(float(np.abs(np.diag(u) - parts.isometry).max()))
        residuals["polar_modulus"].append(
            float(np.abs(np.diag(np.abs(a)) - parts.modulus).max() / scale)
        )
        suprema["max_abs_alpha"].append(scale)
    return TruncationReport(tuple(int(d) for d in dims), residuals, suprema)


def domain_membership(xi, alpha, horizon=DEFAULT_HORIZON):
    """Decide whether ``sum |alpha_n| |xi_n|^2`` converges.

    Partial sums at ``horizon/4``, ``horizon/2`` and ``horizon`` are always
    reported, but a verdict other than ``"inconclusive"`` needs either a
    finitely supported symbol or declared growth classes for both, which
    settle convergence by comparison with ``n**p exp(c n)``.
    """
    horizon = int(horizon)
    if horizon < 4:
        raise ValueError("horizon must be at least 4")
    terms = np.abs(alpha.values(horizon)) * np.abs(xi.values(horizon)) ** 2
    cums = np.cumsum(terms)
    sums = {n: float(cums[n - 1]) for n in (horizon // 4, horizon // 2, horizon)}
    if xi.finitely_supported or alpha.finitely_supported:
        return Membership("member", sums, "finitely supported")
    if xi.growth is None or alpha.growth is None:
        return Membership("inconclusive", sums, "no declared growth class")
    rate = alpha.growth.rate + 2 * xi.growth.rate
    degree = alpha.growth.degree + 2 * xi.growth.degree
    if rate < 0:
        return Membership("member", sums, f"terms decay like exp({rate} n)")
    if rate > 0:
        return Membership("non_member", sums, f"terms grow like exp({rate} n)")
    if degree < -1:
        return Membership("member", sums, f"p-series with exponent {-degree} > 1")
    return Membership("non_member", sums, f"p-series with exponent {-degree} <= 1")
