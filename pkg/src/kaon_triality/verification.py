"""Proper-time scans and pass/fail checks of the complementarity claims."""
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import linalg
from . import measures as ms
from . import model as km

NOISE_FLOOR = 1e-12
MONOTONE_TOL = 1e-14
FD_REL_TOL = 1e-5
FD_TAU_MIN = 0.01
AGREEMENT_TOL = 1e-10
CHANNEL_SAMPLES = 50


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class ScanConfig:
    params: km.ModelParams = field(default_factory=km.ModelParams)
    tau_min: float = 0.0
    tau_max: float = km.TAU_0
    steps: int = 1000
    fd_step: float = 1e-6
    entropy_base: float = None
    workers: int = 1
    backend: str = None

    def __post_init__(self):
        if not (math.isfinite(self.tau_min) and math.isfinite(self.tau_max)):
            raise ConfigError("tau bounds must be finite")
        if self.tau_min < 0:
            raise ConfigError("tau_min must be >= 0")
        if not self.tau_min < self.tau_max:
            raise ConfigError("tau_min must be < tau_max")
        if int(self.steps) != self.steps or self.steps < 2:
            raise ConfigError("steps must be an integer >= 2")
        if not self.fd_step > 0:
            raise ConfigError("fd_step must be positive")
        if int(self.workers) != self.workers or self.workers < 1:
            raise ConfigError("workers must be a positive integer")

    def grid(self):
        return np.linspace(self.tau_min, self.tau_max, int(self.steps))


@dataclass(frozen=True)
class ScanRecord:
    bundle: ms.MeasureBundle
    slack_triality: float
    slack_fvg: float
    ratio_appendix: float

    @property
    def tau(self):
        return self.bundle.tau


def appendix_ratio(p, tau):
    """``(dV0/dtau) / (dV/dtau)`` in closed form.

    The bracket ``1 - (G_S e_S + G_L e_L) / (Gamma (e_S + e_L))`` is evaluated
    as ``(G_S - G_L)(e_L - e_S) / (2 Gamma (e_S + e_L))`` so that it is exactly
    zero at ``tau = 0``.

    Raises:
        DegenerateWidthError: ``gamma_s == gamma_l``.
    """
    p.require_distinct_widths()
    tau = np.asarray(tau, dtype=np.float64)
    es, el = np.exp(-p.gamma_s * tau), np.exp(-p.gamma_l * tau)
    gap = np.expm1(-p.gamma_l * tau) - np.expm1(-p.gamma_s * tau)
    bracket = (p.gamma_s - p.gamma_l) * gap / (2.0 * p.gamma * (es + el))
    return 2.0 / (es + el) * bracket


def appendix_bound(p, tau):
    """Left side of ``(G_S e_S + G_L e_L) / (Gamma (e_S + e_L)) <= 1``."""
    tau = np.asarray(tau, dtype=np.float64)
    es, el = np.exp(-p.gamma_s * tau), np.exp(-p.gamma_l * tau)
    return (p.gamma_s * es + p.gamma_l * el) / (p.gamma * (es + el))


def appendix_ratio_fd(p, tau, h=1e-6):
    """Central-difference estimate of the same derivative ratio."""
    tau = np.asarray(tau, dtype=np.float64)
    dv0 = ms.strangeness_visibility(p, tau + h) - ms.strangeness_visibility(p, tau - h)
    dv = ms.visibility(p, tau + h) - ms.visibility(p, tau - h)
    return dv0 / dv


def _records(bundles, p):
    ratio = appendix_ratio(p, np.array([b.tau for b in bundles])).tolist()
    return [
        ScanRecord(
            b,
            1.0 - b.triality_sum,
            math.sqrt(max(0.0, 1.0 - b.disting_D ** 2)) - b.visibility_V,
            r,
        )
        for b, r in zip(bundles, ratio)
    ]


def scan(cfg, *, path="closed"):
    """Evaluate every measure on the uniform grid of ``cfg``.

    ``path="matrix"`` builds each point from the explicit composite state;
    with ``cfg.workers > 1`` points are evaluated on a thread pool, results
    keep grid order.
    """
    p = cfg.params
    p.require_distinct_widths()
    taus = cfg.grid()
    base = cfg.entropy_base
    if path == "closed":
        bundles = ms.closed_bundles(p, taus, base=base)
    elif path == "matrix":
        def one(t):
            return ms.matrix_bundle(p, t, base=base, backend=cfg.backend)
        if cfg.workers > 1:
            with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
                bundles = list(pool.map(one, taus))
        else:
            bundles = [one(t) for t in taus]
    else:
        raise ValueError(f"unknown path {path!r}")
    return _records(bundles, p)


@dataclass(frozen=True)
class CheckResult:
    """``margin`` is the signed distance to failure at the worst grid point."""

    name: str
    passed: bool
    margin: float
    tau: float
    detail: str = ""


def check_monotone(series, direction, *, taus=None, name=None, tol=MONOTONE_TOL):
    """Strict monotonicity, relaxed to non-strict for the first step.

    The margin is the smallest signed step after the first, located at the
    start of that step. Fails with the first violating index in ``detail``.
    """
    series = np.asarray(series, dtype=np.float64)
    if series.size < 2:
        raise ValueError("monotonicity needs at least two points")
    if direction not in ("increasing", "decreasing"):
        raise ValueError(f"direction must be increasing or decreasing, got {direction!r}")
    diffs = np.diff(series)
    if direction == "decreasing":
        diffs = -diffs
    ok = diffs > tol
    ok[0] = diffs[0] >= -tol
    worst = int(np.argmin(diffs[1:]) + 1) if diffs.size > 1 else 0
    taus = np.arange(series.size, dtype=np.float64) if taus is None else np.asarray(taus)
    if ok.all():
        detail = ""
    else:
        first = int(np.argmin(ok)) + 1
        detail = f"first violation at index {first}"
    return CheckResult(
        name=name or f"monotone_{direction}",
        passed=bool(ok.all()),
        margin=float(diffs[worst]),
        tau=float(taus[worst]),
        detail=detail,
    )


def _worst(name, values, taus, limit, *, above=False, detail=""):
    """Check ``values <= limit`` (or ``>= limit`` when ``above``)."""
    values = np.asarray(values, dtype=np.float64)
    margins = values - limit if above else limit - values
    i = int(np.argmin(margins))
    return CheckResult(name, bool(margins[i] >= 0), float(margins[i]), float(taus[i]), detail)


@dataclass
class VerificationReport:
    checks: list

    @property
    def passed(self):
        return all(c.passed for c in self.checks)

    def to_text(self):
        lines = []
        for c in self.checks:
            status = "PASS" if c.passed else "FAIL"
            line = f"{status}  {c.name:<28} margin={c.margin:+.6e}  tau={c.tau:.6f}"
            if c.detail:
                line += f"  ({c.detail})"
            lines.append(line)
        lines.append(f"overall: {'PASS' if self.passed else 'FAIL'}")
        return "\n".join(lines) + "\n"

    def to_keyvalue(self):
        lines = []
        for c in self.checks:
            lines.append(f"{c.name}.passed={'true' if c.passed else 'false'}")
            lines.append(f"{c.name}.margin={c.margin:.12e}")
            lines.append(f"{c.name}.tau={c.tau:.12e}")
        lines.append(f"overall.passed={'true' if self.passed else 'false'}")
        return "\n".join(lines) + "\n"


def _sample(taus, k):
    idx = np.unique(np.linspace(0, len(taus) - 1, min(k, len(taus))).round().astype(int))
    return taus[idx]


def run_all(cfg):
    """Run every check on the grid of ``cfg`` and collect a report."""
    p = cfg.params
    p.require_distinct_widths()
    closed = scan(cfg, path="closed")
    matrix = scan(cfg, path="matrix")
    taus = np.array([r.tau for r in closed])
    pos = taus > 0
    col = lambda recs, attr: np.array([getattr(r.bundle, attr) for r in recs])
    checks = []

    # triality: slack above the noise floor everywhere, strictly positive for tau > 0
    slack = np.array([r.slack_triality for r in closed])
    res = _worst("triality", slack, taus, -NOISE_FLOOR, above=True)
    if pos.any():
        strict = _worst("triality", slack[pos], taus[pos], 0.0, above=True)
        if strict.margin <= 0:
            res = CheckResult("triality", False, strict.margin, strict.tau, "V^2 + D^2 + S^2 >= 1 at some tau > 0")
        elif res.passed:
            res = CheckResult("triality", True, strict.margin, strict.tau)
    checks.append(res)

    fvg = np.array([r.slack_fvg for r in matrix])
    checks.append(_worst("fuchs_van_de_graaf", fvg, taus, -NOISE_FLOOR, above=True))

    for attr, label, direction in (
        ("entropy_S", "S_increasing", "increasing"),
        ("disting_D", "D_increasing", "increasing"),
        ("visibility_V", "V_decreasing", "decreasing"),
        ("strangeness_V0", "V0_decreasing", "decreasing"),
    ):
        checks.append(check_monotone(col(closed, attr), direction, taus=taus, name=label))

    ratio = np.array([r.ratio_appendix for r in closed])
    if pos.any():
        rpos = _worst("appendix_ratio_positive", ratio[pos], taus[pos], 0.0, above=True)
        rpos = CheckResult(rpos.name, rpos.margin > 0 and bool((ratio[~pos] >= 0).all()),
                           rpos.margin, rpos.tau)
    else:
        rpos = _worst("appendix_ratio_positive", ratio, taus, 0.0, above=True)
    checks.append(rpos)
    checks.append(_worst("appendix_bound", appendix_bound(p, taus), taus, 1.0))

    fd_taus = taus[taus >= FD_TAU_MIN]
    if fd_taus.size:
        exact = appendix_ratio(p, fd_taus)
        approx = appendix_ratio_fd(p, fd_taus, cfg.fd_step)
        rel = np.abs(approx - exact) / np.abs(exact)
        checks.append(_worst("appendix_ratio_fd", rel, fd_taus, FD_REL_TOL))

    sampled = _sample(taus, CHANNEL_SAMPLES)
    completeness, choi_min, choi_tp, iso = [], [], [], []
    for t in sampled:
        kraus = km.kraus_operators(p, t)
        completeness.append(km.completeness_residual(kraus))
        choi = km.choi_matrix(kraus)
        choi_min.append(linalg.hermitian_eigen(choi, backend=cfg.backend).eigenvalues[0])
        choi_tp.append(np.max(np.abs(linalg.partial_trace(choi, 3, 3, keep="A") - np.eye(3))))
        v = km.evolution_isometry(p, t)
        iso.append(np.max(np.abs(v.conj().T @ v - np.eye(3))))
    checks.append(_worst("kraus_completeness", completeness, sampled, NOISE_FLOOR))
    checks.append(_worst("choi_positivity", choi_min, sampled, -1e-10, above=True))
    checks.append(_worst("choi_trace_preserving", choi_tp, sampled, NOISE_FLOOR))
    checks.append(_worst("isometry_residual", iso, sampled, NOISE_FLOOR))

    # x and S closed forms assume the |K0> start; D and V do not
    attrs = ["disting_D", "visibility_V"]
    if p.is_kzero_start:
        attrs += ["x", "entropy_S", "strangeness_V0", "triality_sum", "antikaon_prob"]
    diff = np.max([np.abs(col(matrix, a) - col(closed, a)) for a in attrs], axis=0)
    checks.append(_worst("matrix_closed_agreement", diff, taus, AGREEMENT_TOL))

    vd = col(closed, "visibility_V") ** 2 + col(closed, "disting_D") ** 2
    checks.append(_worst("vd_identity", np.abs(vd - col(closed, "x") ** 2), taus, NOISE_FLOOR))

    if p.is_kzero_start:
        pk = np.abs(col(matrix, "antikaon_prob") - col(closed, "antikaon_prob"))
        checks.append(_worst("strangeness_identity", pk, taus, NOISE_FLOOR))

    checks.sort(key=lambda c: c.name)
    return VerificationReport(checks)
