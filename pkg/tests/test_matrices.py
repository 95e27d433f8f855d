import json

import numpy as np
import pytest

from opradius import (
    ConvergenceError,
    add,
    adjoint,
    as_matrix,
    cartesian_parts,
    frobenius_norm,
    hermitian_eigenvalues,
    hermitian_eigensystem,
    load_matrix,
    matrix_from_json,
    matrix_to_json,
    mul,
    save_matrix,
    singular_values,
    trace,
)
from opradius.sampling import SamplerSpec, sample


def test_adjoint_of_jordan(jordan):
    assert np.array_equal(adjoint(jordan), np.array([[0, 0], [1, 0]], dtype=complex))
    assert np.array_equal(adjoint(adjoint(jordan)), jordan)


def test_add_and_mul_jordan(jordan):
    assert np.array_equal(add(jordan, adjoint(jordan)), np.array([[0, 1], [1, 0]], dtype=complex))
    assert np.abs(mul(jordan, jordan)).max() == 0.0


def test_cartesian_parts_examples(jordan):
    re, im = cartesian_parts(jordan)
    assert np.allclose(re, [[0, 0.5], [0.5, 0]])
    assert np.allclose(im, [[0, -0.5j], [0.5j, 0]])
    H = np.array([[1, 2j], [-2j, 3]], dtype=complex)
    re, im = cartesian_parts(H)
    assert np.allclose(re, H) and np.abs(im).max() < 1e-15
    re, im = cartesian_parts(1j * H)
    assert np.abs(re).max() < 1e-15 and np.allclose(im, H)


def test_cartesian_parts_random_property():
    rng = np.random.default_rng(3)
    for _ in range(1000):
        n = int(rng.integers(1, 7))
        T = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
        re, im = cartesian_parts(T)
        assert np.allclose(re, re.conj().T, atol=1e-14)
        assert np.allclose(im, im.conj().T, atol=1e-14)
        assert np.allclose(re + 1j * im, T, atol=1e-14)


def test_hermitian_eigenvalues_examples():
    assert np.allclose(hermitian_eigenvalues([[0, 1], [1, 0]]), [-1, 1])
    assert np.allclose(hermitian_eigenvalues(np.diag([3.0, -2.0, 5.0])), [-2, 3, 5])
    assert np.allclose(hermitian_eigenvalues([[2, 1j], [-1j, 2]]), [1, 3])


def test_jacobi_matches_reference_solver():
    rng = np.random.default_rng(11)
    for _ in range(60):
        n = int(rng.integers(2, 9))
        G = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
        H = (G + G.conj().T) / 2
        ours = hermitian_eigenvalues(H)
        ref = np.linalg.eigvalsh(H)
        scale = max(1.0, np.abs(ref).max())
        assert np.abs(ours - ref).max() <= 1e-12 * scale


def test_eigensystem_reconstruction():
    rng = np.random.default_rng(5)
    for _ in range(50):
        n = int(rng.integers(2, 9))
        G = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
        H = (G + G.conj().T) / 2
        evals, V = hermitian_eigensystem(H)
        R = V @ np.diag(evals) @ V.conj().T
        assert np.linalg.norm(R - H) <= 1e-9 * np.linalg.norm(H)
        assert np.all(np.diff(evals) >= -1e-12)


def test_eigenvalue_sum_matches_trace():
    rng = np.random.default_rng(7)
    for _ in range(100):
        n = int(rng.integers(1, 9))
        G = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
        H = (G + G.conj().T) / 2
        evals = hermitian_eigenvalues(H)
        scale = max(1.0, np.abs(evals).max())
        assert abs(evals.sum() - trace(H).real) <= 1e-10 * scale


def test_singular_value_examples(jordan):
    assert np.allclose(singular_values(jordan), [1, 0])
    assert frobenius_norm(np.eye(2)) == pytest.approx(np.sqrt(2))
    assert trace(mul(jordan, adjoint(jordan))) == pytest.approx(1)


def test_singular_values_unitarily_invariant():
    rng = np.random.default_rng(13)
    for i in range(40):
        n = int(rng.integers(2, 7))
        A = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
        U = sample(SamplerSpec("unitary", n, 100 + i))
        V = sample(SamplerSpec("unitary", n, 200 + i))
        sv = singular_values(A)
        sv2 = singular_values(U @ A @ V)
        assert np.abs(sv - sv2).max() <= 1e-9 * max(1.0, sv[0])


def test_frobenius_matches_gram_trace():
    rng = np.random.default_rng(17)
    for _ in range(100):
        n = int(rng.integers(1, 9))
        A = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
        g = trace(adjoint(A) @ A)
        fro = frobenius_norm(A)
        assert abs(fro**2 - g.real) <= 1e-10 * max(1.0, g.real)
        assert abs(g.imag) <= 1e-12 * max(1.0, g.real)


def test_validation_errors(jordan):
    with pytest.raises(ValueError):
        as_matrix(np.zeros((2, 3)))
    with pytest.raises(ValueError):
        as_matrix(np.array([[np.inf, 0], [0, 0]], dtype=complex))
    with pytest.raises(ValueError):
        as_matrix(np.zeros((65, 65), dtype=complex))
    with pytest.raises(ValueError):
        add(jordan, np.zeros((3, 3), dtype=complex))
    with pytest.raises(ValueError):
        mul(jordan, np.zeros((3, 3), dtype=complex))
    with pytest.raises(ValueError):
        hermitian_eigenvalues(jordan)  # visibly non-hermitian


def test_convergence_error_type():
    assert issubclass(ConvergenceError, RuntimeError)


def test_json_round_trip(tmp_path):
    rng = np.random.default_rng(23)
    A = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    path = tmp_path / "m.json"
    save_matrix(path, A)
    back = load_matrix(path)
    assert np.array_equal(back, A)  # bit-identical through decimal text
    obj = matrix_to_json(A)
    assert obj["n"] == 3 and len(obj["data"]) == 9
    assert np.array_equal(matrix_from_json(json.loads(json.dumps(obj))), A)


def test_json_validation(tmp_path):
    with pytest.raises(ValueError):
        matrix_from_json({"n": 2, "data": [[0.0, 0.0]]})
    with pytest.raises(ValueError):
        matrix_from_json({"n": "2", "data": []})
    with pytest.raises(ValueError):
        matrix_from_json([1, 2, 3])
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(json.JSONDecodeError):
        load_matrix(bad)
