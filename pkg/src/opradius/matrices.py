"""Dense complex matrix core: validation, arithmetic, spectral kernels, JSON.

Matrices are plain numpy ``complex128`` arrays.  Every entry point validates
shape, finiteness and the desk-scale dimension cap; the Hermitian eigensolver
is the hand-rolled cyclic Jacobi from the kernel backends, so no external
eigenvalue routine enters any computation path.
"""

from __future__ import annotations

import json

import numpy as np

from . import backend

N_MAX = 64
HERMITIAN_REL_TOL = 1e-12
SV_CLAMP_REL = 1e-12


class ConvergenceError(RuntimeError):
    """Eigensolver failed to converge; carries the relative residual."""

    def __init__(self, message: str, residual: float):
        super().__init__(f"{message} (relative residual {residual:.3e})")
        self.residual = residual


def as_matrix(data) -> np.ndarray:
    """Validate and coerce to a square complex128 matrix, n in [1, 64]."""
    A = np.asarray(data, dtype=np.complex128)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError(f"matrix must be square, got shape {A.shape}")
    n = A.shape[0]
    if n < 1:
        raise ValueError("matrix must have dimension at least 1")
    if n > N_MAX:
        raise ValueError(f"dimension {n} exceeds the cap {N_MAX}")
    if not (np.isfinite(A.real).all() and np.isfinite(A.imag).all()):
        raise ValueError("matrix contains non-finite entries")
    return A


def _same_dim(A: np.ndarray, B: np.ndarray):
    if A.shape != B.shape:
        raise ValueError(f"dimension mismatch: {A.shape} vs {B.shape}")


def add(A, B) -> np.ndarray:
    A, B = as_matrix(A), as_matrix(B)
    _same_dim(A, B)
    return A + B


def scale(c, A) -> np.ndarray:
    return complex(c) * as_matrix(A)


def mul(A, B) -> np.ndarray:
    A, B = as_matrix(A), as_matrix(B)
    _same_dim(A, B)
    return A @ B


def adjoint(A) -> np.ndarray:
    return as_matrix(A).conj().T.copy()


def cartesian_parts(T):
    """Hermitian pair (Re, Im) with T = Re + i Im."""
    T = as_matrix(T)
    Ts = T.conj().T
    return (T + Ts) / 2.0, (T - Ts) / 2.0j


def trace(A) -> complex:
    return complex(np.trace(as_matrix(A)))


def frobenius_norm(A) -> float:
    return float(np.linalg.norm(as_matrix(A)))


def hermitian_eigenvalues(H) -> np.ndarray:
    """Ascending eigenvalues of a Hermitian matrix via cyclic complex Jacobi.

    The input must be Hermitian within 1e-12 of its frobenius norm; it is
    symmetrized as (H + H*)/2 before solving so callers' round-off never
    reaches the rotation loop.
    """
    H = as_matrix(H)
    scale_ = float(np.linalg.norm(H))
    asym = float(np.linalg.norm(H - H.conj().T))
    if asym > HERMITIAN_REL_TOL * scale_:
        raise ValueError(
            f"matrix is not Hermitian: asymmetry {asym:.3e} exceeds "
            f"{HERMITIAN_REL_TOL:g} * {scale_:.3e}"
        )
    Hs = (H + H.conj().T) / 2.0
    evals, converged, residual = backend.kernels().jacobi_eigvals(Hs)
    if not converged:
        raise ConvergenceError("jacobi eigensolver did not converge", residual)
    return evals


def hermitian_eigensystem(H):
    """Eigenvalues (ascending) and eigenvectors from the Jacobi rotations."""
    H = as_matrix(H)
    scale_ = float(np.linalg.norm(H))
    asym = float(np.linalg.norm(H - H.conj().T))
    if asym > HERMITIAN_REL_TOL * scale_:
        raise ValueError("matrix is not Hermitian within tolerance")
    Hs = (H + H.conj().T) / 2.0
    return backend.kernels().jacobi_eigensystem(Hs)


def singular_values(A) -> np.ndarray:
    """Descending singular values: sqrt of the eigenvalues of A* A."""
    A = as_matrix(A)
    G = A.conj().T @ A
    evals = hermitian_eigenvalues(G)
    scale_ = float(np.linalg.norm(G))
    floor = -SV_CLAMP_REL * scale_
    if evals[0] < floor:
        raise ConvergenceError("gram matrix produced negative spectrum", float(-evals[0]))
    return np.sqrt(np.clip(evals, 0.0, None))[::-1].copy()


# ---------------------------------------------------------------------------
# JSON wire format: {"n": 2, "data": [[re, im], ...]} row-major, length n^2


def matrix_to_json(A) -> dict:
    A = as_matrix(A)
    flat = A.reshape(-1)
    return {"n": int(A.shape[0]), "data": [[float(z.real), float(z.imag)] for z in flat]}


def matrix_from_json(obj) -> np.ndarray:
    if not isinstance(obj, dict) or "n" not in obj or "data" not in obj:
        raise ValueError('matrix JSON must be {"n": ..., "data": [[re, im], ...]}')
    n = obj["n"]
    if not isinstance(n, int) or n < 1:
        raise ValueError(f"bad dimension field {n!r}")
    if n > N_MAX:
        raise ValueError(f"dimension {n} exceeds the cap {N_MAX}")
    data = obj["data"]
    if len(data) != n * n:
        raise ValueError(f"data length {len(data)} does not match n^2 = {n * n}")
    flat = np.empty(n * n, dtype=np.complex128)
    for i, entry in enumerate(data):
        if len(entry) != 2:
            raise ValueError(f"entry {i} is not an [re, im] pair")
        flat[i] = complex(float(entry[0]), float(entry[1]))
    return as_matrix(flat.reshape(n, n))


def save_matrix(path, A):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(matrix_to_json(A), fh)
        fh.write("\n")


def load_matrix(path) -> np.ndarray:
    with open(path, "r", encoding="utf-8") as fh:
        return matrix_from_json(json.load(fh))
