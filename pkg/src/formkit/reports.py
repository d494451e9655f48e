"""
Problem specs in, verification reports out.

Specs and reports are JSON documents tagged ``"schema": "formkit/1"``.
Complex numbers are ``[re, im]`` pairs (a bare number is read as real) and
matrices are row-major nested lists of them. Instead of an explicit matrix
a spec may give ``{"identity": n, "scale": [re, im]}`` or
``{"random": {"dim": n, ...}}``; random matrices are drawn from the spec's
``seed`` so a spec file always denotes the same problem.

Every command returns a plain ``dict`` report. A check record carries its
name, the result it verifies (``anchor``), a verdict (``pass``, ``fail`` or
``inconclusive``), the measured value and the tolerance it was held to.
"""

from dataclasses import dataclass, field, replace
from datetime import datetime, timezone
import json
import math
import os
from pathlib import Path

import numpy as np

from . import __version__
from .diagonal import (
    DEFAULT_DIMS,
    DEFAULT_HORIZON,
    GridMultiplication,
    GrowthClass,
    SequenceSymbol,
    canonical_perturbation,
    criteria_sweep,
    diagonal_polar,
    grid_perturbation,
    grid_to_diagonal,
    multiplication_u_b,
    natural_metric,
    second_rep_sweep,
)
from .errors import ConditionGuard, FormkitError, InternalInconsistency, SpecError
from .forms import (
    FiniteForm,
    MetricOperator,
    adjoint_rep,
    associated_operator,
    form_from_operator,
    rn_extract,
    sampled_second_rep_residual,
    second_rep_check,
    second_rep_v,
    second_rep_w,
    semibounded_gamma,
    solvability_check,
)
from .spectral import (
    ToleranceConfig,
    hermitian_eig,
    intertwine_check,
    is_invertible,
    modulus_half,
    operator_norm,
    polar,
    sqrt_psd,
)

__all__ = [
    "SCHEMA",
    "ProblemSpec",
    "load_spec",
    "parse_spec",
    "decode_matrix",
    "encode_matrix",
    "run_command",
    "run_polar",
    "run_analyze",
    "run_second_rep",
    "run_from_operator",
    "run_diagonal",
    "run_verify",
    "default_corpus",
    "dumps",
    "to_text",
]

SCHEMA = "formkit/1"
KINDS = ("matrix_form", "diagonal", "grid")
MATRIX_FIELDS = ("gram", "metric", "perturbation")


@dataclass
class ProblemSpec:
    kind: str
    payload: dict
    tolerances: ToleranceConfig = field(default_factory=ToleranceConfig)
    sweep: tuple = None
    seed: int = 0
    samples: int = 100
    raw: dict = field(default_factory=dict)


# -- spec decoding -----------------------------------------------------------


def _decode_scalar(v, where):
    if isinstance(v, bool):
        raise SpecError(f"{where}: expected a number or [re, im], got {v!r}")
    if isinstance(v, (int, float)):
        return complex(v)
    if isinstance(v, list) and len(v) == 2 and all(
        isinstance(p, (int, float)) and not isinstance(p, bool) for p in v
    ):
        return complex(v[0], v[1])
    raise SpecError(f"{where}: expected a number or [re, im], got {v!r}")


def _random_matrix(opts, rng, where):
    try:
        n = int(opts["dim"])
    except (KeyError, TypeError, ValueError):
        raise SpecError(f"{where}: random matrix needs an integer 'dim'") from None
    if n < 1:
        raise SpecError(f"{where}: dim must be positive")

    def gauss(rows, cols):
        return rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))

    if opts.get("positive"):
        cond = float(opts.get("cond", 10.0))
        q, _ = np.linalg.qr(gauss(n, n))
        return (q * np.geomspace(1.0, cond, n)) @ q.conj().T
    rank = int(opts.get("rank", n))
    if not 0 <= rank <= n:
        raise SpecError(f"{where}: rank must lie in [0, {n}]")
    m = gauss(n, rank) @ gauss(rank, n) if rank < n else gauss(n, n)
    if opts.get("hermitian"):
        m = 0.5 * (m + m.conj().T)
    return m * float(opts.get("scale", 1.0))


def decode_matrix(obj, rng=None, where="matrix"):
    """Decode the JSON encoding of a square complex matrix."""
    if isinstance(obj, dict):
        if "identity" in obj:
            n = int(obj["identity"])
            scale = _decode_scalar(obj.get("scale", 1.0), where)
            return scale * np.eye(n, dtype=np.complex128)
        if "diag" in obj:
            return np.diag([_decode_scalar(v, where) for v in obj["diag"]])
        if "random" in obj:
            if rng is None:
                raise SpecError(f"{where}: random matrix needs a seed")
            return _random_matrix(obj["random"], rng, where)
        raise SpecError(f"{where}: unknown matrix encoding {sorted(obj)}")
    if not isinstance(obj, list) or not obj or not all(isinstance(r, list) for r in obj):
        raise SpecError(f"{where}: expected a nested list of rows")
    n = len(obj)
    if any(len(r) != n for r in obj):
        raise SpecError(f"{where}: matrix must be square")
    return np.array(
        [[_decode_scalar(v, f"{where}[{i}][{j}]") for j, v in enumerate(r)] for i, r in enumerate(obj)],
        dtype=np.complex128,
    )


def encode_matrix(m):
    return [[[float(v.real), float(v.imag)] for v in row] for row in np.asarray(m)]


def _encode_vector(v):
    return [[float(z.real), float(z.imag)] for z in np.asarray(v)]


def _decode_symbol(obj, where, growth=None):
    if isinstance(obj, str):
        return SequenceSymbol.closed_form(obj, growth=growth)
    if isinstance(obj, dict) and "table" in obj:
        values = [_decode_scalar(v, where) for v in obj["table"]]
        return SequenceSymbol.tabulated(
            values, tail=obj.get("tail", "zero"), label=obj.get("label", where), growth=growth
        )
    raise SpecError(f"{where}: expected an expression string or {{'table': [...]}}")


def _decode_growth(obj):
    if obj is None:
        return None
    if not isinstance(obj, dict):
        raise SpecError("growth must be an object with 'degree' and/or 'rate'")
    return GrowthClass(float(obj.get("degree", 0.0)), float(obj.get("rate", 0.0)))


def parse_spec(doc):
    """Validate a decoded JSON spec and build a :class:`ProblemSpec`."""
    if not isinstance(doc, dict):
        raise SpecError("spec must be a JSON object")
    if doc.get("schema", SCHEMA) != SCHEMA:
        raise SpecError(f"unsupported schema {doc.get('schema')!r}, expected {SCHEMA!r}")
    kind = doc.get("kind")
    if kind not in KINDS:
        raise SpecError(f"kind must be one of {KINDS}, got {kind!r}")
    seed = doc.get("seed", 0)
    if not isinstance(seed, int) or isinstance(seed, bool):
        raise SpecError("seed must be an integer")
    try:
        tol = ToleranceConfig(**doc.get("tolerances", {}))
    except (TypeError, ValueError) as exc:
        raise SpecError(f"tolerances: {exc}") from None
    sweep = doc.get("sweep")
    if sweep is not None:
        if (
            not isinstance(sweep, list)
            or not sweep
            or not all(isinstance(d, int) and d > 0 for d in sweep)
            or sweep != sorted(set(sweep))
        ):
            raise SpecError("sweep must be a strictly ascending list of positive integers")
        sweep = tuple(sweep)

    payload = {}
    if kind == "matrix_form":
        if "gram" not in doc:
            raise SpecError("matrix_form spec needs 'gram'")
        for k, name in enumerate(MATRIX_FIELDS):
            if name in doc:
                rng = np.random.default_rng([seed, k])
                payload[name] = decode_matrix(doc[name], rng, name)
        shapes = {m.shape for m in payload.values()}
        if len(shapes) != 1:
            raise SpecError(f"matrix dimensions disagree: {sorted(shapes)}")
    elif kind == "diagonal":
        if "alpha" not in doc:
            raise SpecError("diagonal spec needs 'alpha'")
        payload["alpha"] = _decode_symbol(doc["alpha"], "alpha", _decode_growth(doc.get("growth")))
        if "beta" in doc:
            payload["beta"] = _decode_symbol(doc["beta"], "beta")
        if "metric" in doc:
            payload["metric"] = _decode_symbol(doc["metric"], "metric")
        payload["horizon"] = int(doc.get("horizon", DEFAULT_HORIZON))
    else:
        grid = doc.get("grid")
        if "r" not in doc or not isinstance(grid, dict):
            raise SpecError("grid spec needs 'r' and a 'grid' object")
        try:
            payload["grid"] = GridMultiplication(
                doc["r"],
                float(grid["x_min"]),
                float(grid["x_max"]),
                float(grid["y_min"]),
                float(grid["y_max"]),
                int(grid["nx"]),
                int(grid["ny"]),
            )
        except KeyError as exc:
            raise SpecError(f"grid is missing {exc}") from None
    commands = doc.get("commands")
    if commands is not None:
        payload["commands"] = list(commands)
    return ProblemSpec(
        kind, payload, tol, sweep, seed, int(doc.get("samples", 100)), raw=doc
    )


def load_spec(path):
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as exc:
        raise SpecError(f"{path}: invalid JSON: {exc}") from None
    except OSError as exc:
        raise SpecError(f"{path}: {exc.strerror}") from None
    return parse_spec(doc)


# -- report assembly ---------------------------------------------------------


class _Report:
    def __init__(self, command, spec, seed):
        self.command = command
        self.spec = spec
        self.seed = seed
        self.checks = []
        self.outputs = {}

    def check(self, name, anchor, value, tolerance, passed=None, verdict=None, detail=None):
        if verdict is None:
            verdict = "pass" if passed else "fail"
        rec = {
            "name": name,
            "anchor": anchor,
            "verdict": verdict,
            "value": _jsonable(value),
            "tolerance": _jsonable(tolerance),
        }
        if detail:
            rec["detail"] = detail
        self.checks.append(rec)

    def leq(self, name, anchor, value, tolerance):
        self.check(name, anchor, value, tolerance, passed=value <= tolerance)

    def to_dict(self):
        return {
            "schema": SCHEMA,
            "command": self.command,
            "tool_version": __version__,
            "seed": self.seed,
            "spec": self.spec.raw,
            "checks": self.checks,
            "outputs": self.outputs,
            "overall": _overall(self.checks),
        }


def _jsonable(v):
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (int, np.integer)):
        return int(v)
    if isinstance(v, (float, np.floating)):
        v = float(v)
        return v if math.isfinite(v) else repr(v)
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    return v


def _overall(checks):
    verdicts = {c["verdict"] for c in checks}
    if "fail" in verdicts:
        return "fail"
    if "inconclusive" in verdicts:
        return "inconclusive"
    return "pass"


def _matrix_spec(spec, command):
    if spec.kind != "matrix_form":
        raise SpecError(f"{command} needs a matrix_form spec, got {spec.kind!r}")
    return spec.payload["gram"]


# -- commands ----------------------------------------------------------------


def run_polar(spec, seed=None):
    """Polar decomposition with reconstruction and intertwining residuals."""
    tol = spec.tolerances
    t = _matrix_spec(spec, "polar")
    rep = _Report("polar", spec, spec.seed if seed is None else seed)
    norm_t = operator_norm(t)
    parts = polar(t, tol)
    u, p = parts.isometry, parts.modulus
    modulus_star = polar(t.conj().T, tol).modulus
    proj = u.conj().T @ u
    rep.leq("polar_right", "polar decomposition T = U|T|",
            operator_norm(u @ p - t), tol.rel_tol * norm_t)
    rep.leq("polar_left", "polar decomposition T = |T*|U",
            operator_norm(modulus_star @ u - t), tol.rel_tol * norm_t)
    rep.leq("partial_isometry", "U*U is an orthogonal projection",
            operator_norm(proj @ proj - proj), tol.rel_tol)
    rep.leq("isometry_kernel", "U vanishes on ker|T|",
            operator_norm(proj @ p - p), tol.rel_tol * norm_t)
    lam_min = float(hermitian_eig(p, tol)[0][0])
    rep.check("modulus_psd", "|T| is positive", lam_min, -tol.rel_tol * norm_t,
              passed=lam_min >= -tol.rel_tol * norm_t)
    rep.leq("intertwining", "|T*|^1/2 U = U |T|^1/2",
            intertwine_check(t, tol), tol.rel_tol * (1.0 + norm_t))
    rep.outputs.update(isometry=encode_matrix(u), modulus=encode_matrix(p), rank=parts.rank)
    return rep.to_dict()


def run_analyze(spec, seed=None):
    """Radon-Nikodym-like representation, solvability and semiboundedness."""
    tol = spec.tolerances
    a = _matrix_spec(spec, "analyze")
    if "metric" not in spec.payload:
        raise SpecError("analyze needs a 'metric'")
    seed = spec.seed if seed is None else seed
    rep = _Report("analyze", spec, seed)
    f = FiniteForm(a)
    b = spec.payload.get("perturbation", np.zeros_like(a))
    metric = MetricOperator(spec.payload["metric"], tol)
    kappa = metric.condition_number
    rep.outputs["metric_condition"] = kappa
    try:
        rn = rn_extract(f, metric, tol)
    except ConditionGuard as exc:
        rep.check("rn_representation", "Radon-Nikodym-like representation <QH., H.>",
                  kappa**2, tol.cond_guard, verdict="inconclusive", detail=str(exc))
        return rep.to_dict()
    bound = tol.rel_tol * kappa**2 * operator_norm(a)
    rep.leq("rn_reconstruction", "Radon-Nikodym-like representation <QH., H.>",
            rn.residual(a), bound)
    rep.leq("associated_operator", "associated operator T = HQH",
            operator_norm(associated_operator(rn) - f.gram), bound)
    rep.leq("adjoint_representation", "adjoint form has representation <Q*H., H.>",
            operator_norm(associated_operator(adjoint_rep(rn)) - a.conj().T), bound)
    try:
        verdict = solvability_check(rn, b, tol)
        rep.check("solvability_agreement",
                  "Q + H^-1 B H^-1 bijective iff 0 in resolvent set of T + B",
                  [verdict.bijection.sigma_min, verdict.resolvent_zero.sigma_min],
                  tol.rank_cutoff, passed=True)
        rep.outputs["solvable"] = verdict.solvable
        rep.outputs["q_b"] = encode_matrix(verdict.q_b)
    except InternalInconsistency as exc:
        rep.check("solvability_agreement",
                  "Q + H^-1 B H^-1 bijective iff 0 in resolvent set of T + B",
                  [exc.sigma_min_bijection, exc.sigma_min_resolvent],
                  tol.rank_cutoff, passed=False, detail=str(exc))
    rep.outputs["q"] = encode_matrix(rn.q)
    herm = operator_norm(a - a.conj().T) <= tol.rel_tol * operator_norm(a)
    if herm:
        gamma = semibounded_gamma(f, tol)
        rng = np.random.default_rng(seed)
        n = f.dim
        xs = rng.standard_normal((n, 1000)) + 1j * rng.standard_normal((n, 1000))
        xs /= np.linalg.norm(xs, axis=0)
        sampled = float(np.min(np.einsum("ik,ij,jk->k", xs.conj(), a, xs).real))
        rep.check("semibounded", "form(xi, xi) >= gamma |xi|^2", sampled - gamma,
                  -tol.rel_tol * max(1.0, operator_norm(a)),
                  passed=sampled - gamma >= -tol.rel_tol * max(1.0, operator_norm(a)))
        rep.outputs["gamma"] = gamma
    return rep.to_dict()


def run_second_rep(spec, seed=None):
    """Second representation residuals, plus W and V when they exist."""
    tol = spec.tolerances
    t = _matrix_spec(spec, "second-rep")
    seed = spec.seed if seed is None else seed
    rep = _Report("second-rep", spec, seed)
    f = FiniteForm(t)
    norm_t = operator_norm(t)
    res = second_rep_check(f, tol)
    anchor = "form(xi, eta) = <U|T|^1/2 xi, |T*|^1/2 eta>"
    rep.leq("factorization_r1", anchor, res.r1, tol.rel_tol * norm_t)
    rep.leq("factorization_r2", "form(xi, eta) = <|T*|^1/2 U xi, |T*|^1/2 eta>",
            res.r2, tol.rel_tol * norm_t)
    sampled = sampled_second_rep_residual(f, np.random.default_rng(seed), spec.samples, tol)
    rep.leq("sampled_identity", anchor, sampled, tol.rel_tol)
    normal = operator_norm(t @ t.conj().T - t.conj().T @ t) <= tol.rel_tol * max(norm_t**2, 1e-300)
    if normal:
        rep.leq("normal_specialization", "normal T: |T*| = |T|", res.normal_gap, tol.rel_tol * norm_t)
        rep.outputs["note"] = "normal operator: |T*| = |T|, representation <U|T|^1/2., |T|^1/2.>"
    if is_invertible(t, tol).invertible:
        w = second_rep_w(t, tol)
        half = polar(t, tol).modulus
        root = sqrt_psd(half, tol)
        rep.leq("w_representation", "form = <W|T|^1/2., |T|^1/2.>",
                operator_norm(root @ w @ root - t), tol.rel_tol * norm_t)
        w_verdict = is_invertible(w, tol)
        rep.check("w_bijection", "W is a bijection", w_verdict.sigma_min,
                  tol.rank_cutoff, passed=w_verdict.invertible)
        rep.outputs["w"] = encode_matrix(w)
    if "perturbation" in spec.payload:
        b = spec.payload["perturbation"]
        if is_invertible(t + b, tol).invertible:
            v = second_rep_v(t, b, tol)
            root = modulus_half(t + b, tol)
            rep.leq("v_representation", "form = <V|T+B|^1/2., |T+B|^1/2.>",
                    operator_norm(root @ v @ root - t), tol.rel_tol * max(norm_t, operator_norm(b)))
            rep.outputs["v"] = encode_matrix(v)
        else:
            rep.check("v_representation", "form = <V|T+B|^1/2., |T+B|^1/2.>",
                      is_invertible(t + b, tol).sigma_min, tol.rank_cutoff,
                      verdict="inconclusive", detail="T + B is not invertible")
    return rep.to_dict()


def run_from_operator(spec, seed=None):
    """Build the form of an operator and check it maps back to the operator."""
    tol = spec.tolerances
    t = _matrix_spec(spec, "from-operator")
    if "perturbation" not in spec.payload:
        raise SpecError("from-operator needs a 'perturbation'")
    b = spec.payload["perturbation"]
    rep = _Report("from-operator", spec, spec.seed if seed is None else seed)
    f = form_from_operator(t, b, tol)
    scale = operator_norm(t) + operator_norm(b)
    rep.leq("round_trip", "unique hyper-solvable form with associated operator T",
            operator_norm(f.gram - t), tol.rel_tol * scale)
    if operator_norm(t - t.conj().T) <= tol.rel_tol * operator_norm(t):
        rep.leq("symmetric_form", "self-adjoint T gives a symmetric form",
                operator_norm(f.gram - f.gram.conj().T), tol.rel_tol * max(1.0, scale))
    rep.outputs["gram"] = encode_matrix(f.gram)
    return rep.to_dict()


def _sweep_dims(spec, dims, limit=None):
    d = tuple(dims or spec.sweep or DEFAULT_DIMS)
    if limit is not None:
        d = tuple(x for x in d if x < limit) + (limit,)
    return d


def run_diagonal(spec, seed=None, dims=None, samples=None):
    """Example families: canonical perturbation, polar factors, criteria sweep."""
    tol = spec.tolerances
    seed = spec.seed if seed is None else seed
    samples = samples or min(spec.samples, 20)
    rep = _Report("diagonal", spec, seed)
    if spec.kind == "grid":
        g = spec.payload["grid"]
        alpha, area = grid_to_diagonal(g)
        beta = grid_perturbation(g)
        size = g.nx * g.ny
        u_direct = multiplication_u_b(g).values(size)
        u_polar = diagonal_polar(alpha + beta)[0].values(size)
        rep.leq("u_b_coherence", "U_B is the phase of r + (1 - r) chi_Z",
                float(np.abs(u_direct - u_polar).max()), tol.rank_cutoff)
        sweep_dims = _sweep_dims(spec, dims, size)
        horizon = size
        canonical = True
        rep.outputs["cell_area"] = area
    elif spec.kind == "diagonal":
        alpha = spec.payload["alpha"]
        canonical = "beta" not in spec.payload
        beta = canonical_perturbation(alpha) if canonical else spec.payload["beta"]
        sweep_dims = _sweep_dims(spec, dims)
        horizon = spec.payload["horizon"]
    else:
        raise SpecError(f"diagonal needs a diagonal or grid spec, got {spec.kind!r}")
    h = spec.payload.get("metric") or natural_metric(alpha)

    if canonical:
        s = alpha.values(horizon) + beta.values(horizon)
        rep.check("perturbation_gap", "0 not in closure of {alpha_n + beta_n}",
                  float(np.abs(s).min()), 1.0, passed=np.abs(s).min() >= 1.0)

    n_polar = [n for n in (4, 16, 64) if n <= horizon]
    u_sym, p_sym = diagonal_polar(alpha)
    gap_u = gap_p = 0.0
    for n in n_polar:
        parts = polar(np.diag(alpha.values(n)), tol)
        scale = float(np.abs(alpha.values(n)).max()) or 1.0
        gap_u = max(gap_u, float(np.abs(np.diag(u_sym.values(n)) - parts.isometry).max()))
        gap_p = max(gap_p, float(np.abs(np.diag(p_sym.values(n)) - parts.modulus).max()) / scale)
    rep.leq("diagonal_polar_isometry", "polar factor U {xi_n} = {alpha_n/|alpha_n| xi_n}",
            gap_u, tol.rel_tol)
    rep.leq("diagonal_polar_modulus", "|M| {xi_n} = {|alpha_n| xi_n}", gap_p, tol.rel_tol)

    report = criteria_sweep(alpha, beta, h, sweep_dims, tol)
    anchor = "hyper-solvable iff X, Y bounded iff K1, K2 bounded iff U_B D = D"
    verdicts = {c.name: c.verdict for c in report.criteria}
    if report.hypotheses_violated:
        rep.check("criteria_agreement", anchor, report.q_bound.witness, None,
                  verdict="inconclusive",
                  detail="Q = alpha/h^2 grows along the sweep: the form is not "
                         "solvable with respect to this metric")
    else:
        rep.check("criteria_agreement", anchor, verdicts, None, passed=report.agreement)
    rep.outputs["criteria"] = [
        {"name": c.name, "verdict": c.verdict, "witness": c.witness,
         "sweep": list(c.sweep), "trend": c.trend}
        for c in report.criteria
    ]
    rep.outputs["q_bounded"] = report.q_bound.verdict
    rep.outputs["x_sweep"] = list(report.x_sweep)
    rep.outputs["y_sweep"] = list(report.y_sweep)
    rep.outputs["hyper_solvable"] = report.hyper_solvable
    rep.outputs["dims"] = list(sweep_dims)

    trunc = second_rep_sweep(alpha, sweep_dims, samples, seed, tol)
    for name, values in trunc.residuals.items():
        rep.leq(f"truncation_{name}", "<U|M|^1/2 xi, |M|^1/2 eta> on truncations",
                max(values), tol.rel_tol)
    rep.outputs["truncation"] = {k: list(v) for k, v in trunc.residuals.items()}
    return rep.to_dict()


COMMANDS = {
    "polar": run_polar,
    "analyze": run_analyze,
    "second-rep": run_second_rep,
    "from-operator": run_from_operator,
    "diagonal": run_diagonal,
}


def run_command(name, spec, seed=None, dims=None, samples=None):
    fn = COMMANDS[name]
    if name == "diagonal":
        return fn(spec, seed=seed, dims=dims, samples=samples)
    if samples is not None:
        spec = replace(spec, samples=samples)
    return fn(spec, seed=seed)


def commands_for(spec):
    if "commands" in spec.payload:
        return spec.payload["commands"]
    if spec.kind != "matrix_form":
        return ["diagonal"]
    names = ["polar", "second-rep"]
    if "metric" in spec.payload:
        names.append("analyze")
    if "perturbation" in spec.payload:
        names.append("from-operator")
    return names


def default_corpus():
    env = os.environ.get("FORMKIT_CORPUS")
    return Path(env) if env else Path(__file__).with_name("corpus")


def _verify_file(path, seed, dims, samples, tol_override):
    entry = {"file": path.name, "reports": [], "errors": []}
    try:
        spec = load_spec(path)
        if tol_override is not None:
            spec = replace(spec, tolerances=replace(spec.tolerances, rel_tol=tol_override))
        for name in commands_for(spec):
            if name not in COMMANDS:
                raise SpecError(f"unknown command {name!r}")
            entry["reports"].append(run_command(name, spec, seed, dims, samples))
    except FormkitError as exc:
        entry["errors"].append({"type": type(exc).__name__, "message": str(exc)})
    verdicts = [r["overall"] for r in entry["reports"]]
    if entry["errors"] or "fail" in verdicts:
        entry["overall"] = "fail"
    elif "inconclusive" in verdicts:
        entry["overall"] = "inconclusive"
    else:
        entry["overall"] = "pass"
    return entry


def run_verify(corpus=None, seed=None, dims=None, samples=None, tol_override=None, jobs=1):
    """Run every applicable command on every ``*.json`` spec in `corpus`.

    Per-file errors are recorded as failures, never raised. Entries are
    ordered by file name whatever the number of worker threads.
    """
    corpus = Path(corpus) if corpus else default_corpus()
    if not corpus.is_dir():
        raise SpecError(f"corpus directory {corpus} does not exist")
    files = sorted(corpus.glob("*.json"))
    args = (seed, dims, samples, tol_override)
    if jobs > 1 and len(files) > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=jobs) as pool:
            entries = list(pool.map(lambda p: _verify_file(p, *args), files))
    else:
        entries = [_verify_file(p, *args) for p in files]
    n_checks = sum(len(r["checks"]) for e in entries for r in e["reports"])
    verdicts = {e["overall"] for e in entries}
    overall = "fail" if "fail" in verdicts else "inconclusive" if "inconclusive" in verdicts else "pass"
    return {
        "schema": SCHEMA,
        "command": "verify",
        "tool_version": __version__,
        "seed": seed,
        "corpus": corpus.name,
        "files": entries,
        "n_checks": n_checks,
        "overall": overall,
    }


def stamp(report):
    report["timestamp"] = datetime.now(timezone.utc).isoformat(timespec="seconds")
    return report


def dumps(report):
    return json.dumps(report, indent=2, sort_keys=False) + "\n"


def to_text(report):
    """Human-readable summary; JSON stays the contract."""
    lines = []

    def emit(r, indent=""):
        lines.append(f"{indent}{r['command']}: {r['overall'].upper()}")
        for c in r["checks"]:
            lines.append(
                f"{indent}  [{c['verdict'].upper():>12}] {c['name']}: {c['value']} "
                f"(tol {c['tolerance']}) -- {c['anchor']}"
            )

    if report["command"] == "verify":
        lines.append(f"verify {report['corpus']}: {report['overall'].upper()} "
                     f"({report['n_checks']} checks)")
        for e in report["files"]:
            lines.append(f"  {e['file']}: {e['overall'].upper()}")
            for err in e["errors"]:
                lines.append(f"    error {err['type']}: {err['message']}")
            for r in e["reports"]:
                emit(r, "    ")
    else:
        emit(report)
    return "\n".join(lines) + "\n"
