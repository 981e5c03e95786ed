import math

import numpy as np
import pytest

import paralab


def grid(n, d=2):
    axes = np.meshgrid(*([np.arange(n) * 2 * np.pi / n] * d), indexing="ij")
    return axes


def test_bony_sums_to_product():
    x, y = grid(32)
    f = np.cos(x) + 0.3 * np.sin(3 * y)
    g = np.sin(2 * x + y) + 0.1 * np.cos(5 * x)
    lt, res, gt = paralab.bony(f, g)
    assert np.max(np.abs(lt + res + gt - paralab.product(f, g))) < 1e-12
    assert np.max(np.abs(paralab.product(f, g) - f * g)) < 1e-12


def test_roundtrip_and_norms():
    x, y = grid(16)
    f = np.cos(x + y)
    assert np.allclose(paralab.roundtrip(f), f, atol=1e-14)
    assert paralab.holder_norm(f, 0.5) > 0
    assert len(paralab.block_norms(f, 2.0)) >= 2


def test_bad_grid_raises():
    with pytest.raises(ValueError):
        paralab.product(np.zeros((8, 4)), np.zeros((8, 4)))


def test_white_noise_is_deterministic():
    a = paralab.white_noise(3, 2, 16, "bump", 0.25)
    b = paralab.white_noise(3, 2, 16, "bump", 0.25)
    assert a.shape == (16, 16)
    assert np.array_equal(a, b)
    assert abs(a.mean()) < 1e-12


def test_cole_hopf_through_python():
    xi = paralab.white_noise(1, 2, 32, "bump", 0.25)
    k = paralab.renorm_constants("bump", 0.25, 2, 32, 0.5)
    assert k["c"] == pytest.approx(2 * k["c12"] + 8 * k["c124"])
    v = paralab.solve_pam(xi, k["c"], 0.05, 40, 4)
    kpz = paralab.solve_kpz(xi, k["c12"], k["c124"], 0.5, 0.05, 40)
    assert kpz["T_star"] == pytest.approx(0.05)
    assert np.max(np.abs(np.exp(kpz["h"][-1]) - v[-1])) < 1e-4 * np.max(v[-1])


def test_polymer_flat_potential():
    xi = np.full((16, 16), 0.7)
    e = paralab.sample_polymer(xi, 0.2, 0.5, [1.0, 2.0], 200, 0.01, seed=4)
    assert e["endpoints"].shape == (200, 2)
    assert e["Z"] == pytest.approx(math.exp(0.25), rel=1e-12)
    assert e["ess"] == pytest.approx(200)


def test_ks_and_suites():
    rng = np.random.default_rng(0)
    x, y = rng.normal(size=500), rng.normal(size=500)
    D, p = paralab.ks_two_sample(x, np.ones(500), y, np.ones(500))
    assert 0 <= D <= 1 and p > 1e-3
    assert "bony" in paralab.suites


def test_acceptance_report():
    r = paralab.acceptance(1)
    assert r["id"] == "acceptance.1"
    assert r["pass"] is True
