import numpy as np
import pytest

from opradius import RadiusOptions, active_backend, set_backend, w_e_vector_oracle, w_N, w_Ne


@pytest.fixture(scope="session", autouse=True)
def _warm_kernels():
    # force JIT compilation up front so timed acceptance sections stay honest
    opts = RadiusOptions(theta_grid=8, t_grid=8, phi_grid=8)
    J = np.array([[0, 1], [0, 0]], dtype=complex)
    for n in (2, 3, 4):
        T = np.eye(n, dtype=complex)
        T[0, -1] = 1j
        w_N(T, "op", opts)
        w_Ne(T, T.conj().T, "schatten:3", opts)
    w_e_vector_oracle(J, J.conj().T, samples=16, seed=0, polish_iters=2)


@pytest.fixture
def jordan():
    return np.array([[0, 1], [0, 0]], dtype=complex)


@pytest.fixture
def small_opts():
    return RadiusOptions(theta_grid=64, t_grid=17, phi_grid=32)


@pytest.fixture(params=["numba", "numpy"])
def each_backend(request):
    name = request.param
    if name == "numba":
        try:
            import numba  # noqa: F401
        except ImportError:
            pytest.skip("numba unavailable")
    previous = active_backend()
    set_backend(name)
    yield name
    set_backend(previous)
