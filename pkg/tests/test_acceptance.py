"""Exit criteria of the build, one test per criterion.

A PASS/FAIL line per criterion is printed in the terminal summary.
"""
import math
import time

import numpy as np
import pytest

from kaon_triality import cli, linalg
from kaon_triality import measures as ms
from kaon_triality import model as km
from kaon_triality import verification as vf
from kaon_triality.model import ModelParams

criterion = pytest.mark.criterion
FINE = vf.ScanConfig(steps=10_000)


@criterion(1, "triality sum <= 1 on a 1e4 grid, = 1 only at tau = 0, < 1 s")
def test_triality_inequality():
    start = time.perf_counter()
    recs = vf.scan(FINE)
    elapsed = time.perf_counter() - start
    sums = np.array([r.bundle.triality_sum for r in recs])
    slack = np.array([r.slack_triality for r in recs])
    assert recs[0].tau == 0.0 and sums[0] == 1.0
    assert sums.max() == 1.0
    assert np.all(sums[1:] < 1.0)
    assert slack.min() >= -1e-12
    assert elapsed < 1.0, f"scan took {elapsed:.3f} s"


@criterion(2, "golden values at tau = 1 to 1e-5")
def test_golden_tau_one():
    p = ModelParams()
    b = ms.closed_bundle(p, 1.0)
    expected = dict(x=0.683077, entropy_S=0.624528, disting_D=0.315197, visibility_V=0.606007,
                    strangeness_V0=0.887174, triality_sum=0.856629)
    for name, value in expected.items():
        assert getattr(b, name) == pytest.approx(value, abs=1e-5), name


@criterion(3, "golden values at tau0 = 4.79")
def test_golden_tau_zero():
    p = ModelParams()
    b = ms.closed_bundle(p, 4.79)
    assert b.disting_D == pytest.approx(0.491724, abs=1e-5)
    delta = 0.693147 - b.entropy_S
    assert delta < 1e-5
    assert b.visibility_V == pytest.approx(0.090796, abs=1e-5)
    assert b.disting_D ** 2 + b.entropy_S ** 2 == pytest.approx(0.722253, abs=1e-4)


@criterion(4, "matrix paths equal closed forms to 1e-10 at 100 random tau")
def test_matrix_closed_equivalence():
    p = ModelParams()
    taus = np.random.default_rng(4).uniform(0.0, 4.79, 100)
    for tau in taus:
        a = ms.matrix_bundle(p, tau)
        b = ms.closed_bundle(p, tau)
        assert np.max(np.abs(np.subtract(a.values(), b.values()))) <= 1e-10, tau


@criterion(5, "Kraus completeness, Choi positivity, Kraus = partial-trace evolution")
def test_channel_certification():
    p = ModelParams()
    for tau in np.linspace(0.0, 4.79, 50):
        kraus = km.kraus_operators(p, tau)
        assert km.completeness_residual(kraus) < 1e-12
        assert linalg.hermitian_eigen(km.choi_matrix(kraus)).eigenvalues[0] > -1e-10
    rng = np.random.default_rng(5)
    for _ in range(20):
        amp = rng.normal(size=2) + 1j * rng.normal(size=2)
        amp /= np.linalg.norm(amp)
        q = ModelParams(alpha=complex(amp[0]), beta=complex(amp[1]))
        psi0 = np.array([0.0, q.alpha, q.beta])
        rho0 = np.outer(psi0, psi0.conj())
        for tau in rng.uniform(0.0, 4.79, 5):
            via_kraus = km.apply_kraus(km.kraus_operators(q, tau), rho0)
            via_trace = km.reduced_kaon(km.evolve_pure(q, tau))
            assert np.max(np.abs(via_kraus - via_trace)) <= 1e-12


@criterion(6, "Fuchs-van de Graaf V <= sqrt(1 - D^2) on the grid, matrix paths")
def test_fuchs_van_de_graaf():
    p = ModelParams()
    for tau in FINE.grid():
        rho_s, rho_l = km.conditional_pion_states(p, tau)
        v = linalg.fidelity(rho_s, rho_l)
        d = linalg.trace_distance(rho_s, rho_l)
        assert v <= math.sqrt(1.0 - d * d) + 1e-12, tau


@criterion(7, "monotonicity of S, D, V, V0 and appendix ratio sign / finite differences")
def test_monotonicity_suite():
    p = ModelParams()
    taus = FINE.grid()
    pos = taus[taus > 0]
    for series, direction in (
        (ms.entropy_closed(p, pos), "increasing"),
        (ms.distinguishability(p, pos), "increasing"),
        (ms.visibility(p, pos), "decreasing"),
        (ms.strangeness_visibility(p, pos), "decreasing"),
    ):
        diffs = np.diff(series)
        assert np.all(diffs > 0) if direction == "increasing" else np.all(diffs < 0)
        assert vf.check_monotone(series, direction).passed
    ratio = vf.appendix_ratio(p, taus)
    assert ratio[0] >= 0
    assert np.all(ratio[1:] > 0)
    fd_taus = taus[taus >= 0.01]
    exact = vf.appendix_ratio(p, fd_taus)
    approx = vf.appendix_ratio_fd(p, fd_taus, 1e-6)
    assert np.max(np.abs(approx - exact) / np.abs(exact)) <= 1e-5


@criterion(8, "2<K0bar|rho_Q|K0bar> = x (1 - V0 cos(dm tau)) to 1e-12")
def test_strangeness_identity():
    for delta_m in (0.0, 0.47, 5.0):
        p = ModelParams.with_delta_m(delta_m)
        for tau in np.linspace(0.0, 4.79, 1000):
            rho_q = km.reduced_kaon(km.evolve_pure(p, tau))
            lhs = 2.0 * np.real(km.KZERO_BAR.conj() @ rho_q @ km.KZERO_BAR)
            x = ms.x_of_tau(p, tau)
            rhs = x * (1.0 - ms.strangeness_visibility(p, tau) * math.cos(delta_m * tau))
            assert abs(lhs - rhs) <= 1e-12, (delta_m, tau)


@criterion(9, "base-2 entropy negative control fails triality and verify exits 1")
def test_negative_control(capsys):
    p = ModelParams()
    taus = vf.ScanConfig().grid()
    assert np.any(ms.triality_sum(p, taus[taus > 0], base=2) > 1.0)
    code = cli.main(["verify", "--debug-entropy-base2"])
    out = capsys.readouterr().out
    assert code == 1
    assert "FAIL  triality" in out


@criterion(10, "scan output byte-identical across runs and between serial / parallel")
def test_determinism(capsys):
    outputs = []
    for argv in (["scan"], ["scan"],
                 ["scan", "--path", "matrix"], ["scan", "--path", "matrix", "--workers", "4"]):
        assert cli.main(argv) == 0
        outputs.append(capsys.readouterr().out.encode())
    assert outputs[0] == outputs[1]
    assert outputs[2] == outputs[3]
