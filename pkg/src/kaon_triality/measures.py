"""Complementarity quantifiers for the kaon model.

Each quantity has a closed form (scalar exponentials, vectorised over numpy
arrays of proper times) and a matrix path built from the explicit composite
state. Entropies are in nats unless ``base`` is given.
"""
import math
from dataclasses import astuple, dataclass, fields

import numpy as np

from . import linalg
from . import model as km


@dataclass(frozen=True)
class MeasureBundle:
    tau: float
    x: float
    entropy_S: float
    disting_D: float
    visibility_V: float
    strangeness_V0: float
    antikaon_prob: float
    triality_sum: float

    @classmethod
    def field_names(cls):
        return [f.name for f in fields(cls)]

    def values(self):
        return astuple(self)


def _exps(p, tau):
    tau = np.asarray(tau, dtype=np.float64)
    return np.exp(-p.gamma_s * tau), np.exp(-p.gamma_l * tau)


def x_of_tau(p, tau):
    """Mean survival ``(e^{-G_S t} + e^{-G_L t}) / 2``."""
    es, el = _exps(p, tau)
    return 0.5 * (es + el)


def one_minus_x(p, tau):
    tau = np.asarray(tau, dtype=np.float64)
    return -0.5 * (np.expm1(-p.gamma_s * tau) + np.expm1(-p.gamma_l * tau))


def _xlogx(v):
    v = np.asarray(v, dtype=np.float64)
    safe = np.where(v > 0, v, 1.0)
    return np.where(v > 0, v * np.log(safe), 0.0)


def entropy(rho, *, base=None, backend=None):
    """Von Neumann entropy of a density matrix (eigenvalue path)."""
    return linalg.von_neumann_entropy(rho, base=base, backend=backend)


def entropy_closed(p, tau, *, base=None):
    """Binary entropy of ``x(tau)``, the entanglement of the pure composite state."""
    s = -(_xlogx(x_of_tau(p, tau)) + _xlogx(one_minus_x(p, tau)))
    if base is not None:
        s = s / math.log(base)
    return s + 0.0


def distinguishability(p, tau):
    es, el = _exps(p, tau)
    return 0.5 * np.abs(es - el)


def visibility(p, tau):
    """Fidelity between the conditional pion states, ``e^{-Gamma tau}``."""
    tau = np.asarray(tau, dtype=np.float64)
    return np.exp(-p.gamma * tau)


def strangeness_visibility(p, tau):
    """Visibility of K0/K0bar oscillations, equal to ``V / x``."""
    es, el = _exps(p, tau)
    return 2.0 * visibility(p, tau) / (es + el)


def _require_kzero(p):
    if not p.is_kzero_start:
        raise km.ModelError("antikaon probability is defined for alpha = beta = 1/sqrt(2)")


def antikaon_probability(p, tau):
    """``2 <K0bar| rho_Q |K0bar>`` from ``x (1 - V0 cos(dm tau))``."""
    _require_kzero(p)
    tau = np.asarray(tau, dtype=np.float64)
    return x_of_tau(p, tau) * (1.0 - strangeness_visibility(p, tau) * np.cos(p.delta_m * tau))


def triality_sum(p, tau, *, base=None):
    v = visibility(p, tau)
    d = distinguishability(p, tau)
    s = entropy_closed(p, tau, base=base)
    return v * v + d * d + s * s


def closed_bundle(p, tau, *, base=None):
    tau = km.check_tau(tau)
    pk = antikaon_probability(p, tau) if p.is_kzero_start else math.nan
    return MeasureBundle(
        tau=tau,
        x=float(x_of_tau(p, tau)),
        entropy_S=float(entropy_closed(p, tau, base=base)),
        disting_D=float(distinguishability(p, tau)),
        visibility_V=float(visibility(p, tau)),
        strangeness_V0=float(strangeness_visibility(p, tau)),
        antikaon_prob=float(pk),
        triality_sum=float(triality_sum(p, tau, base=base)),
    )


def closed_bundles(p, taus, *, base=None):
    """``closed_bundle`` over a whole grid, vectorised."""
    taus = np.asarray(taus, dtype=np.float64)
    for t in (taus.min(initial=0.0), taus.max(initial=0.0)):
        km.check_tau(t)
    cols = [
        taus,
        x_of_tau(p, taus),
        entropy_closed(p, taus, base=base),
        distinguishability(p, taus),
        visibility(p, taus),
        strangeness_visibility(p, taus),
        antikaon_probability(p, taus) if p.is_kzero_start else np.full_like(taus, math.nan),
        triality_sum(p, taus, base=base),
    ]
    return [MeasureBundle(*map(float, row)) for row in zip(*cols)]


# matrix paths


def x_matrix(psi, *, backend=None):
    """Eigenvalue of the reduced pion state carried by ``|0_pi>``."""
    w, vecs = linalg.hermitian_eigen(km.reduced_pion(psi), backend=backend)
    return float(w[np.argmax(np.abs(vecs[km.PI0, :]))])


def distinguishability_matrix(p, tau, *, backend=None):
    rho_s, rho_l = km.conditional_pion_states(p, tau)
    return linalg.trace_distance(rho_s, rho_l, backend=backend)


def visibility_matrix(p, tau, *, backend=None):
    rho_s, rho_l = km.conditional_pion_states(p, tau)
    return linalg.fidelity(rho_s, rho_l, backend=backend)


def antikaon_probability_matrix(p, tau):
    rho_q = km.reduced_kaon(km.evolve_pure(p, tau))
    return float(2.0 * np.real(km.KZERO_BAR.conj() @ rho_q @ km.KZERO_BAR))


def matrix_bundle(p, tau, *, base=None, backend=None):
    """All measures from the explicit 9-dimensional state."""
    tau = km.check_tau(tau)
    psi = km.evolve_pure(p, tau)
    rho_p = km.reduced_pion(psi)
    x = x_matrix(psi, backend=backend)
    s = entropy(rho_p, base=base, backend=backend)
    rho_s, rho_l = km.conditional_pion_states(p, tau)
    d = linalg.trace_distance(rho_s, rho_l, backend=backend)
    v = linalg.fidelity(rho_s, rho_l, backend=backend)
    pk = antikaon_probability_matrix(p, tau) if p.is_kzero_start else math.nan
    return MeasureBundle(
        tau=tau,
        x=x,
        entropy_S=s,
        disting_D=d,
        visibility_V=v,
        strangeness_V0=v / x,
        antikaon_prob=pk,
        triality_sum=v * v + d * d + s * s,
    )
