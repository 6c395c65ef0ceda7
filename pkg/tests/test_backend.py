import os
import subprocess
import sys

import pytest

from outreg import _kernel_py
from outreg.internal_model import hurwitz_pair
from outreg.linalg import determinant
from outreg.mapping import MappingConfig, chi, estimate_coeffs, hankel
from outreg.scenario import ScenarioConfig

_kernel = pytest.importorskip("outreg._kernel")


def _args(cfg, y0, n_steps, stride, mode=0):
    return (y0, cfg.h, n_steps, stride, cfg.c1, cfg.c2, cfg.c3, cfg.sigma,
            cfg.m1, cfg.m2, cfg.epsilon, cfg.mask1, cfg.mask2,
            cfg.rho.coeffs, cfg.k.coeffs, cfg.k0, mode,
            cfg.disturbance_amp, cfg.disturbance_freq)


def _assert_identical(a, b):
    ra, da, ya = a
    rb, db, yb = b
    assert da == db
    assert len(ra) == len(rb)
    for x, y in zip(ra, rb):
        assert tuple(x) == tuple(y)
    assert list(ya) == list(yb)


STEADY_Y0 = [1.0, 0.5, 1.0, 1.0,
             0.06747511312217194, 0.00448868778280543,
             -0.016868778280542986, -0.0011221719457013574,
             0.38639929937691186, -0.6123391256240911,
             -0.10734107266496068, 0.2836164691585286,
             0.05100307576288878, -0.36460041473277044,
             -0.06712833603318155, 0.7519667729302537, 0.0]


def test_twins_bit_identical_steady():
    cfg = ScenarioConfig()
    args = _args(cfg, STEADY_Y0, 2000, 10)
    _assert_identical(_kernel_py.run_closed_loop(*args),
                      _kernel.run_closed_loop(*args))


def test_twins_bit_identical_divergent():
    cfg = ScenarioConfig()
    y0 = [1.0, -1.0, 1.0, 1.0] + [0.0] * 13
    args = _args(cfg, y0, 100000, 10)
    a = _kernel_py.run_closed_loop(*args)
    b = _kernel.run_closed_loop(*args)
    _assert_identical(a, b)
    assert a[1] == pytest.approx(0.117, abs=1e-12)


def test_twins_bit_identical_all_modes():
    cfg = ScenarioConfig()
    for mode in (0, 1, 2):
        args = _args(cfg, STEADY_Y0, 1500, 7, mode=mode)
        _assert_identical(_kernel_py.run_closed_loop(*args),
                          _kernel.run_closed_loop(*args))


def test_twins_bit_identical_with_disturbance():
    cfg = ScenarioConfig()
    args = _args(cfg, STEADY_Y0, 1500, 10)
    args = args[:17] + (0.05, 7.0)
    _assert_identical(_kernel_py.run_closed_loop(*args),
                      _kernel.run_closed_loop(*args))


def test_kernel_input_validation():
    cfg = ScenarioConfig()
    for kern in (_kernel_py, _kernel):
        with pytest.raises(ValueError):
            kern.run_closed_loop(*_args(cfg, [0.0] * 16, 10, 1))
        with pytest.raises(ValueError):
            kern.run_closed_loop(*_args(cfg, [0.0] * 17, 10, 0))
        with pytest.raises(ValueError):
            kern.run_closed_loop(*(_args(cfg, [0.0] * 17, 10, 1) + (-1.0,)))
        bad = _args(cfg, [0.0] * 17, 10, 1)
        bad = bad[:8] + ((1.0, 2.0),) + bad[9:]  # m1 too short
        with pytest.raises(ValueError):
            kern.run_closed_loop(*bad)


def test_kernel_aux_matches_module_path():
    # the record's auxiliaries must agree with the module-level operations
    # (different summation orders, so relative tolerance, not bit equality)
    from outreg.controller import GainConfig, control_nonadaptive, zeta

    cfg = ScenarioConfig()
    cfg1 = MappingConfig(n=2, m=cfg.m1, epsilon=cfg.epsilon, zero_mask=cfg.mask1)
    cfg2 = MappingConfig(n=4, m=cfg.m2, epsilon=cfg.epsilon, zero_mask=cfg.mask2)
    gains = GainConfig(rho=cfg.rho, k=cfg.k, k0=cfg.k0)
    y0 = list(STEADY_Y0)
    y0[5] += 0.31  # knock the filters off the invariant set
    y0[10] -= 0.17
    records, _, _ = _kernel.run_closed_loop(*_args(ScenarioConfig(), y0, 1, 1))
    t, x1, x2, e, zv, u, a11, a21, a23, det1, det2, khat = records[0]
    eta1 = y0[4:8]
    eta2 = y0[8:16]
    assert e == y0[0] - y0[2]
    est1 = estimate_coeffs(eta1, cfg1)
    est2 = estimate_coeffs(eta2, cfg2)
    assert a11 == pytest.approx(est1.a[0], rel=1e-10)
    assert a21 == pytest.approx(est2.a[0], rel=1e-10)
    assert a23 == pytest.approx(est2.a[2], rel=1e-10)
    assert det1 == pytest.approx(determinant(hankel(eta1)), rel=1e-10)
    assert det2 == pytest.approx(determinant(hankel(eta2)), rel=1e-10)
    zm = zeta(y0[1], eta1, e, gains, cfg1)
    assert zv == pytest.approx(zm, rel=1e-10)
    assert u == pytest.approx(control_nonadaptive(zm, eta2, gains, cfg2), rel=1e-10)


def test_backend_env_override():
    code = "import outreg.backend as b; print(b.BACKEND)"
    for forced in ("python", "compiled"):
        env = dict(os.environ, OUTREG_BACKEND=forced)
        out = subprocess.run([sys.executable, "-c", code], env=env,
                             capture_output=True, text=True)
        assert out.returncode == 0, out.stderr
        assert out.stdout.strip() == forced
    env = dict(os.environ, OUTREG_BACKEND="fortran")
    out = subprocess.run([sys.executable, "-c", code], env=env,
                         capture_output=True, text=True)
    assert out.returncode != 0


def test_twins_identical_on_overflowing_step():
    # a state big enough that an RK4 stage overflows to inf and the Hankel
    # determinant becomes nan mid-step; C division quietly produces nan/inf
    # and the python twin must do the same instead of raising
    pytest.importorskip("outreg._kernel")
    from outreg import _kernel

    cfg = ScenarioConfig()
    y0 = [1e9, 0.0, 1.0, 1.0] + [0.0] * 12 + [0.0]
    out_c = _kernel.run_closed_loop(*_args(cfg, y0, 5, 1))
    out_p = _kernel_py.run_closed_loop(*_args(cfg, y0, 5, 1))
    rc, dc, yc = out_c
    rp, dp, yp = out_p
    assert dc == dp == pytest.approx(cfg.h)
    assert len(rc) == len(rp)
    for a, b in zip(rc, rp):
        assert tuple(a) == tuple(b)
    for a, b in zip(yc, yp):
        assert a == b or (a != a and b != b)  # nan-aware exact match
