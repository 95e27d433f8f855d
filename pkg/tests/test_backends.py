import numpy as np
import pytest

from opradius import active_backend, set_backend, w_Ne
from opradius import _kernels_numpy as knp
from opradius.sampling import SamplerSpec, sample, sample_pair

try:
    from opradius import _kernels_numba as knb

    HAS_NUMBA = True
except ImportError:
    HAS_NUMBA = False

needs_numba = pytest.mark.skipif(not HAS_NUMBA, reason="numba unavailable")

PS = np.array([3.0])


def _pairs():
    for n in (1, 2, 3, 4):
        yield sample_pair("ginibre", n, 2000 + n)


@needs_numba
def test_jacobi_batch_agreement():
    rng = np.random.default_rng(47)
    Hs = []
    for _ in range(50):
        G = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        Hs.append((G + G.conj().T) / 2)
    Hs = np.array(Hs)
    e1, ok1, _ = knb.jacobi_eigvals_batch(Hs)
    e2, ok2, _ = knp.jacobi_eigvals_batch(Hs)
    ref = np.linalg.eigvalsh(Hs)
    assert ok1 and ok2
    assert np.abs(e1 - ref).max() < 1e-12
    assert np.abs(e2 - ref).max() < 1e-12


@needs_numba
def test_theta_scan_agreement():
    for B, _ in _pairs():
        v1, i1 = knb.theta_scan(B, 32, PS)
        v2, i2 = knp.theta_scan(B, 32, PS)
        assert np.abs(v1 - v2).max() <= 1e-12 * max(1.0, np.abs(v1).max())
        assert np.array_equal(i1, i2)


@needs_numba
@pytest.mark.parametrize("route", ["direct", "ab"])
def test_sphere_scan_agreement(route):
    for B, C in _pairs():
        fn_nb = knb.sphere_scan if route == "direct" else knb.sphere_scan_ab
        fn_np = knp.sphere_scan if route == "direct" else knp.sphere_scan_ab
        v1, i1, s1 = fn_nb(B, C, 9, 8, 16, PS)
        v2, i2, s2 = fn_np(B, C, 9, 8, 16, PS)
        assert np.abs(v1 - v2).max() <= 1e-12 * max(1.0, np.abs(v1).max())
        assert np.array_equal(i1, i2)
        assert np.abs(s1[0] - s2[0]).max() <= 1e-12 * max(1.0, np.abs(s1[0]).max())


@needs_numba
def test_point_eval_agreement():
    B, C = sample_pair("ginibre", 3, 2100)
    for code, p in ((0, 0.0), (1, 0.0), (2, 0.0), (3, 3.0)):
        for t, phi, theta in ((0.3, 1.1, 0.7), (1.2, 4.0, 2.9)):
            a = knb.eval_pair(B, C, t, phi, theta, code, p)
            b = knp.eval_pair(B, C, t, phi, theta, code, p)
            assert a == pytest.approx(b, rel=1e-12)
            a = knb.eval_pair_ab(B, C, t, phi, theta, code, p)
            b = knp.eval_pair_ab(B, C, t, phi, theta, code, p)
            assert a == pytest.approx(b, rel=1e-12)
    a = knb.eval_single(B, 0.4, 0, 0.0)
    b = knp.eval_single(B, 0.4, 0, 0.0)
    assert a == pytest.approx(b, rel=1e-12)


@needs_numba
def test_oracle_values_agreement():
    B, C = sample_pair("ginibre", 3, 2200)
    rng = np.random.default_rng(53)
    X = rng.normal(size=(100, 3)) + 1j * rng.normal(size=(100, 3))
    X /= np.linalg.norm(X, axis=1)[:, None]
    a = knb.oracle_values(B, C, X)
    b = knp.oracle_values(B, C, X)
    assert np.abs(a - b).max() < 1e-13


@needs_numba
def test_hs_scan_agreement():
    B, C = sample_pair("ginibre", 3, 2300)
    args = (
        complex(np.trace(B @ B)),
        complex(np.trace(C @ C)),
        complex(np.trace(B @ C)),
        float(np.linalg.norm(B)) ** 2,
        float(np.linalg.norm(C)) ** 2,
        complex(np.trace(B.conj().T @ C)),
    )
    v1 = knb.hs_sphere_scan(*args, 17, 16)
    v2 = knp.hs_sphere_scan(*args, 17, 16)
    assert v1[0] == pytest.approx(v2[0], rel=1e-13)
    assert v1[1:] == v2[1:]


def test_numpy_backend_end_to_end(each_backend, jordan, small_opts):
    value = w_Ne(jordan, jordan.conj().T, "hs", small_opts).value
    assert value == pytest.approx(1.0, abs=1e-7)


def test_set_backend_roundtrip():
    current = active_backend()
    previous = set_backend("numpy")
    assert previous == current
    assert active_backend() == "numpy"
    set_backend(previous)
    assert active_backend() == previous
    with pytest.raises(ValueError):
        set_backend("fortran")


def test_unitary_sample_used_by_backends():
    U = sample(SamplerSpec("unitary", 4, 77))
    assert np.linalg.norm(U.conj().T @ U - np.eye(4)) < 1e-10
