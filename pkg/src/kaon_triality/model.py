"""Neutral kaon plus decay products as a bipartite pure state.

The composite space is quanton (x) pion, both three dimensional:

* quanton: 0 = vacuum ``|0_K>``, 1 = ``|K_S>``, 2 = ``|K_L>``
* pion: 0 = ``|0_pi>``, 1 = ``|pi pi>`` (two pions), 2 = one or three pions

Composite index is ``3 * quanton + pion``. Proper time is measured in units of
the K_S lifetime, so ``gamma_s`` defaults to 1.
"""
import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from . import linalg

DIM_Q = 3
DIM_P = 3
VAC, KS, KL = 0, 1, 2
PI0, PIPI, PITILDE = 0, 1, 2

GAMMA_RATIO = 579.0
DEFAULT_DELTA_M = 0.47
TAU_0 = 4.79
NORM_TOL = 1e-12


class ModelError(ValueError):
    pass


class DegenerateAmplitudeError(ModelError):
    """A conditional state was requested for a mode with zero initial weight."""


class DegenerateWidthError(ModelError):
    """Gamma_S == Gamma_L where a strict width ordering is required."""


def composite_index(q, p):
    return DIM_P * q + p


@dataclass(frozen=True)
class ModelParams:
    """Decay widths, mass phases and initial amplitudes (tau_S units)."""

    gamma_s: float = 1.0
    gamma_l: float = 1.0 / GAMMA_RATIO
    m_s: float = 0.0
    m_l: float = DEFAULT_DELTA_M
    alpha: complex = field(default=1 / math.sqrt(2))
    beta: complex = field(default=1 / math.sqrt(2))
    tau_max: float = TAU_0

    def __post_init__(self):
        object.__setattr__(self, "alpha", complex(self.alpha))
        object.__setattr__(self, "beta", complex(self.beta))
        for name in ("gamma_s", "gamma_l", "m_s", "m_l", "tau_max"):
            if not math.isfinite(getattr(self, name)):
                raise ModelError(f"{name} must be finite")
        if not (cmath.isfinite(self.alpha) and cmath.isfinite(self.beta)):
            raise ModelError("amplitudes must be finite")
        if self.gamma_s <= 0 or self.gamma_l <= 0:
            raise ModelError("decay widths must be positive")
        if self.gamma_s < self.gamma_l:
            raise ModelError("gamma_s must be >= gamma_l")
        norm = abs(self.alpha) ** 2 + abs(self.beta) ** 2
        if abs(norm - 1.0) > NORM_TOL:
            raise ModelError(f"|alpha|^2 + |beta|^2 = {norm!r}, expected 1")
        if self.tau_max <= 0:
            raise ModelError("tau_max must be positive")

    @classmethod
    def with_delta_m(cls, delta_m=DEFAULT_DELTA_M, **kwargs):
        return cls(m_s=0.0, m_l=delta_m, **kwargs)

    @property
    def delta_m(self):
        return self.m_l - self.m_s

    @property
    def gamma(self):
        return 0.5 * (self.gamma_s + self.gamma_l)

    @property
    def is_kzero_start(self):
        """True for the pure |K0> start, alpha = beta = 1/sqrt(2)."""
        h = 1 / math.sqrt(2)
        return abs(self.alpha - h) <= NORM_TOL and abs(self.beta - h) <= NORM_TOL

    def require_distinct_widths(self):
        if not self.gamma_s > self.gamma_l:
            raise DegenerateWidthError(
                f"requires gamma_s > gamma_l, got {self.gamma_s} and {self.gamma_l}"
            )


def check_tau(tau):
    tau = float(tau)
    if not math.isfinite(tau) or tau < 0:
        raise ModelError(f"proper time must be finite and non-negative, got {tau!r}")
    return tau


# strangeness eigenstates in the quanton basis
KZERO = np.array([0, 1, 1], dtype=np.complex128) / math.sqrt(2)
KZERO_BAR = np.array([0, 1, -1], dtype=np.complex128) / math.sqrt(2)


def _mode_factors(gamma, mass, tau):
    survive = math.exp(-0.5 * gamma * tau) * cmath.exp(-1j * mass * tau)
    decay = math.sqrt(-math.expm1(-gamma * tau))
    return survive, decay


def evolution_isometry(p, tau):
    """9x3 matrix of the map on ``|0_K 0_pi>, |K_S 0_pi>, |K_L 0_pi>``."""
    tau = check_tau(tau)
    v = np.zeros((DIM_Q * DIM_P, 3), dtype=np.complex128)
    v[composite_index(VAC, PI0), 0] = 1.0
    surv_s, dec_s = _mode_factors(p.gamma_s, p.m_s, tau)
    surv_l, dec_l = _mode_factors(p.gamma_l, p.m_l, tau)
    v[composite_index(KS, PI0), 1] = surv_s
    v[composite_index(VAC, PIPI), 1] = dec_s
    v[composite_index(KL, PI0), 2] = surv_l
    v[composite_index(VAC, PITILDE), 2] = dec_l
    return v


def initial_state(p):
    psi = np.zeros(DIM_Q * DIM_P, dtype=np.complex128)
    psi[composite_index(KS, PI0)] = p.alpha
    psi[composite_index(KL, PI0)] = p.beta
    return psi


def evolve_pure(p, tau):
    """Composite pure state at proper time ``tau``."""
    return evolution_isometry(p, tau) @ np.array([0.0, p.alpha, p.beta], dtype=np.complex128)


def density(psi):
    psi = np.asarray(psi, dtype=np.complex128)
    return np.outer(psi, psi.conj())


def reduced_kaon(psi):
    return linalg.partial_trace(density(psi), DIM_Q, DIM_P, keep="A")


def reduced_pion(psi):
    return linalg.partial_trace(density(psi), DIM_Q, DIM_P, keep="B")


def reduced_kaon_closed(p, tau):
    """Reduced kaon state written out from the exponentials directly."""
    tau = check_tau(tau)
    wa, wb = abs(p.alpha) ** 2, abs(p.beta) ** 2
    es, el = math.exp(-p.gamma_s * tau), math.exp(-p.gamma_l * tau)
    rho = np.zeros((3, 3), dtype=np.complex128)
    rho[VAC, VAC] = wa * -math.expm1(-p.gamma_s * tau) + wb * -math.expm1(-p.gamma_l * tau)
    rho[KS, KS] = wa * es
    rho[KL, KL] = wb * el
    rho[KS, KL] = (
        p.alpha * p.beta.conjugate() * math.exp(-p.gamma * tau) * cmath.exp(1j * p.delta_m * tau)
    )
    rho[KL, KS] = rho[KS, KL].conjugate()
    return rho


def reduced_pion_closed(p, tau):
    """Reduced decay-product state written out from the exponentials directly."""
    tau = check_tau(tau)
    wa, wb = abs(p.alpha) ** 2, abs(p.beta) ** 2
    ps, pl = -math.expm1(-p.gamma_s * tau), -math.expm1(-p.gamma_l * tau)
    rho = np.zeros((3, 3), dtype=np.complex128)
    rho[PI0, PI0] = wa * math.exp(-p.gamma_s * tau) + wb * math.exp(-p.gamma_l * tau)
    rho[PIPI, PIPI] = wa * ps
    rho[PITILDE, PITILDE] = wb * pl
    rho[PIPI, PITILDE] = p.alpha * p.beta.conjugate() * math.sqrt(ps) * math.sqrt(pl)
    rho[PITILDE, PIPI] = rho[PIPI, PITILDE].conjugate()
    return rho


def conditional_pion_states(p, tau):
    """Pion states given K_S or K_L propagation, ``<K_i|rho|K_i> / |amp_i|^2``.

    The weights make both states unit-trace at ``tau = 0``; for
    ``alpha = beta = 1/sqrt(2)`` this is the factor 2.
    """
    for name, amp in (("alpha", p.alpha), ("beta", p.beta)):
        if abs(amp) == 0.0:
            raise DegenerateAmplitudeError(f"{name} = 0: conditional state undefined")
    rho = density(evolve_pure(p, tau)).reshape(DIM_Q, DIM_P, DIM_Q, DIM_P)
    rho_s = rho[KS, :, KS, :] / abs(p.alpha) ** 2
    rho_l = rho[KL, :, KL, :] / abs(p.beta) ** 2
    return rho_s.copy(), rho_l.copy()


def kraus_operators(p, tau):
    """Operator-sum form of the reduced kaon channel at ``tau``."""
    tau = check_tau(tau)
    surv_s, dec_s = _mode_factors(p.gamma_s, p.m_s, tau)
    surv_l, dec_l = _mode_factors(p.gamma_l, p.m_l, tau)
    k0 = np.diag([1.0, surv_s, surv_l]).astype(np.complex128)
    k1 = np.zeros((3, 3), dtype=np.complex128)
    k1[VAC, KS] = dec_s
    k2 = np.zeros((3, 3), dtype=np.complex128)
    k2[VAC, KL] = dec_l
    return [k0, k1, k2]


def apply_kraus(kraus, rho):
    rho = linalg.as_matrix(rho)
    return sum(k @ rho @ k.conj().T for k in kraus)


def completeness_residual(kraus):
    n = kraus[0].shape[1]
    total = sum(k.conj().T @ k for k in kraus)
    return float(np.max(np.abs(total - np.eye(n))))


def choi_matrix(kraus):
    """``sum_ij |i><j| (x) Phi(|i><j|)``, input factor as the slow index."""
    n = kraus[0].shape[1]
    m = kraus[0].shape[0]
    choi = np.zeros((n * m, n * m), dtype=np.complex128)
    for i in range(n):
        for j in range(n):
            unit = np.zeros((n, n), dtype=np.complex128)
            unit[i, j] = 1.0
            choi[i * m:(i + 1) * m, j * m:(j + 1) * m] = apply_kraus(kraus, unit)
    return choi
