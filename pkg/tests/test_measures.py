import math

import numpy as np
import pytest

from kaon_triality import measures as ms
from kaon_triality import model as km
from kaon_triality.model import ModelParams
from conftest import random_unitary
from oracle import measures as oracle

GRID = np.linspace(0.0, km.TAU_0, 1000)

# frozen from tests/oracle.py (40-digit mpmath)
FROZEN = {
    1.0: dict(x=0.683076908030, S=0.624528379844, D=0.315197466859, V=0.606007111485,
              V0=0.887172592662, pKbar=0.142780185010, sum=0.856629759515),
    4.79: dict(x=0.500036849617, S=0.693147177844, D=0.491724392235, V=0.090796327326,
               V0=0.181579272399, pKbar=0.557164499307, sum=0.730489861128),
}


@pytest.mark.parametrize("tau", sorted(FROZEN))
def test_frozen_values_match_oracle(tau):
    ref = oracle(tau)
    for key, value in FROZEN[tau].items():
        assert float(ref[key]) == pytest.approx(value, abs=1e-12)


@pytest.mark.parametrize("tau", sorted(FROZEN))
def test_closed_forms_against_frozen(params, tau):
    f = FROZEN[tau]
    assert ms.x_of_tau(params, tau) == pytest.approx(f["x"], abs=1e-12)
    assert ms.entropy_closed(params, tau) == pytest.approx(f["S"], abs=1e-12)
    assert ms.distinguishability(params, tau) == pytest.approx(f["D"], abs=1e-12)
    assert ms.visibility(params, tau) == pytest.approx(f["V"], abs=1e-12)
    assert ms.strangeness_visibility(params, tau) == pytest.approx(f["V0"], abs=1e-12)
    assert ms.antikaon_probability(params, tau) == pytest.approx(f["pKbar"], abs=1e-12)
    assert ms.triality_sum(params, tau) == pytest.approx(f["sum"], abs=1e-12)


def test_six_digit_values(params):
    # rounded reference values at tau = 1 and tau0 = 4.79
    assert ms.x_of_tau(params, 0.0) == 1.0
    assert ms.x_of_tau(params, 1.0) == pytest.approx(0.683077, abs=5e-7)
    assert ms.x_of_tau(params, 4.79) == pytest.approx(0.500037, abs=5e-7)
    assert ms.entropy_closed(params, 1.0) == pytest.approx(0.624528, abs=5e-7)
    assert 0 < math.log(2) - ms.entropy_closed(params, 4.79) < 1e-5
    assert ms.distinguishability(params, 1.0) == pytest.approx(0.315197, abs=5e-7)
    assert ms.distinguishability(params, 4.79) == pytest.approx(0.491724, abs=5e-7)
    assert ms.visibility(params, 1.0) == pytest.approx(0.606007, abs=5e-7)
    assert ms.visibility(params, 4.79) == pytest.approx(0.090796, abs=5e-7)
    assert ms.strangeness_visibility(params, 1.0) == pytest.approx(0.887173, abs=5e-7)
    assert ms.triality_sum(params, 1.0) == pytest.approx(0.856630, abs=5e-7)
    assert ms.triality_sum(params, 4.79) == pytest.approx(0.730490, abs=5e-7)


def test_boundary_values(params):
    b = ms.closed_bundle(params, 0.0)
    assert (b.x, b.entropy_S, b.disting_D, b.visibility_V, b.strangeness_V0) == (1, 0, 0, 1, 1)
    assert b.antikaon_prob == 0.0
    assert b.triality_sum == 1.0
    m = ms.matrix_bundle(params, 0.0)
    assert 0.0 <= m.entropy_S <= 1e-15
    assert m.triality_sum == pytest.approx(1.0, abs=1e-15)


def test_entropy_matrix_path(params):
    assert ms.entropy(km.reduced_pion(km.evolve_pure(params, 0.0))) == pytest.approx(0.0, abs=1e-15)
    s = ms.entropy(km.reduced_pion(km.evolve_pure(params, 1.0)))
    assert s == pytest.approx(0.624528, abs=5e-7)


def test_entropy_unitary_invariance(params, rng):
    for tau in (0.5, 1.0, 3.0):
        rho = km.reduced_pion(km.evolve_pure(params, tau))
        u = random_unitary(rng, 3)
        assert abs(ms.entropy(u @ rho @ u.conj().T) - ms.entropy(rho)) <= 1e-10


def test_entropy_base2_option(params):
    s2 = ms.entropy_closed(params, 4.79, base=2)
    assert s2 == pytest.approx(1.0, abs=1e-8)
    assert ms.triality_sum(params, 4.79, base=2) > 1.0


def test_matrix_paths_agree_with_closed_forms(params):
    for tau in GRID[::5]:
        a = ms.matrix_bundle(params, tau)
        b = ms.closed_bundle(params, tau)
        np.testing.assert_allclose(a.values(), b.values(), rtol=0, atol=1e-10)
        assert ms.distinguishability_matrix(params, tau) == pytest.approx(b.disting_D, abs=1e-12)
        assert ms.visibility_matrix(params, tau) == pytest.approx(b.visibility_V, abs=1e-10)


def test_vd_identity(params):
    x = ms.x_of_tau(params, GRID)
    vd = ms.visibility(params, GRID) ** 2 + ms.distinguishability(params, GRID) ** 2
    assert np.max(np.abs(vd - x ** 2)) <= 1e-12
    for tau in GRID[::50]:
        m = ms.matrix_bundle(params, tau)
        assert abs(m.visibility_V ** 2 + m.disting_D ** 2 - m.x ** 2) <= 1e-10


def test_v0_is_v_over_x(params):
    np.testing.assert_allclose(
        ms.strangeness_visibility(params, GRID),
        ms.visibility(params, GRID) / ms.x_of_tau(params, GRID),
        rtol=1e-14,
    )


@pytest.mark.parametrize("delta_m", [0.0, 0.47, 5.0])
def test_antikaon_identity(delta_m):
    p = ModelParams.with_delta_m(delta_m)
    for tau in GRID[::10]:
        assert abs(ms.antikaon_probability_matrix(p, tau) - ms.antikaon_probability(p, tau)) <= 1e-12
        assert ms.antikaon_probability(p, tau) == pytest.approx(float(oracle(tau, str(delta_m))["pKbar"]), abs=1e-12)
    if delta_m == 0.0:
        assert np.all(ms.antikaon_probability(p, GRID) >= 0)


def test_antikaon_requires_kzero_start():
    p = ModelParams(alpha=0.6, beta=0.8)
    with pytest.raises(km.ModelError):
        ms.antikaon_probability(p, 1.0)
    assert math.isnan(ms.closed_bundle(p, 1.0).antikaon_prob)


def test_fuchs_van_de_graaf_matrix_path(params):
    for tau in GRID[::5]:
        v = ms.visibility_matrix(params, tau)
        d = ms.distinguishability_matrix(params, tau)
        assert v <= math.sqrt(1 - d * d) + 1e-12


def test_triality_bound_and_monotonicity(params):
    s = ms.triality_sum(params, GRID)
    assert s[0] == 1.0
    assert np.all(s[1:] < 1.0)
    assert np.all(np.diff(ms.entropy_closed(params, GRID)) > 0)
    assert np.all(np.diff(ms.distinguishability(params, GRID)) > 0)
    assert np.all(np.diff(ms.visibility(params, GRID)) < 0)
    assert np.all(np.diff(ms.strangeness_visibility(params, GRID)) < 0)


def test_d2_plus_s2_at_tau0(params):
    # "towards (nearly) 1" is qualitative; with nats the value is about 0.722
    d2s2 = ms.distinguishability(params, 4.79) ** 2 + ms.entropy_closed(params, 4.79) ** 2
    assert d2s2 == pytest.approx(float(oracle(4.79)["D2S2"]), abs=1e-12)
    assert d2s2 == pytest.approx(0.722253, abs=1e-4)


def test_general_amplitudes_d_and_v_unchanged(rng):
    a = rng.normal(size=2) + 1j * rng.normal(size=2)
    a /= np.linalg.norm(a)
    p = ModelParams(alpha=complex(a[0]), beta=complex(a[1]))
    for tau in (0.2, 1.0, 4.0):
        assert ms.distinguishability_matrix(p, tau) == pytest.approx(ms.distinguishability(p, tau), abs=1e-12)
        assert ms.visibility_matrix(p, tau) == pytest.approx(ms.visibility(p, tau), abs=1e-10)


def test_bundle_field_names():
    assert ms.MeasureBundle.field_names() == [
        "tau", "x", "entropy_S", "disting_D", "visibility_V",
        "strangeness_V0", "antikaon_prob", "triality_sum",
    ]


def test_vectorised_bundles_match_scalar(params):
    taus = np.linspace(0.0, 4.79, 37)
    for a, t in zip(ms.closed_bundles(params, taus), taus):
        assert a == ms.closed_bundle(params, t)
    with pytest.raises(km.ModelError):
        ms.closed_bundles(params, [0.0, -1.0])
