"""Symmetric-matrix kernels: cyclic Jacobi eigensolver, matrix functions,
and the two vectorizations of symmetric matrices used across the package.

Two vector layouts coexist on purpose:

* ``sym_chart`` is the plain row-wise upper-triangle parameterization
  (a11, a12, ..., a1p, a22, ..., app) <-> symmetric matrix.  It is the
  parameterization used by the Gaussian feature chart.
* ``frob_vec``/``frob_unvec`` scale off-diagonal entries by sqrt(2) so the
  Euclidean norm of the vector equals the Frobenius norm of the matrix.
  The spd manifold represents points and tangents this way, which is what
  makes the radial-isometry identity d(A, Exp_A(V)) = |v| hold in plain
  Euclidean norm on the tangent coordinates.
"""
from __future__ import annotations

import math
from typing import Tuple

import numpy as np

from ..errors import DomainError, NumericError, ValidationError

__all__ = [
    "jacobi_eigh",
    "check_symmetric",
    "check_spd",
    "sym_dim",
    "order_from_sym_dim",
    "sym_chart_encode",
    "sym_chart_decode",
    "sym_chart",
    "frob_vec",
    "frob_unvec",
    "sym_matrix_function",
    "spd_sqrt",
    "spd_invsqrt",
    "spd_log",
    "sym_exp",
]

_SQRT2 = math.sqrt(2.0)


def check_symmetric(A: np.ndarray, tol: float = 1e-12) -> np.ndarray:
    """Validate symmetry up to ``tol`` relative skew and return the exact
    symmetrization (A + A^T)/2."""
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValidationError(f"expected a square matrix, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise ValidationError("matrix entries must be finite")
    skew = np.max(np.abs(A - A.T))
    scale = max(1.0, float(np.max(np.abs(A))))
    if skew > tol * scale:
        raise ValidationError(f"matrix is not symmetric: max skew {skew:.3e}")
    return 0.5 * (A + A.T)


def jacobi_eigh(A: np.ndarray, tol: float = 1e-12,
                max_sweeps: int = 30) -> Tuple[np.ndarray, np.ndarray]:
    """Eigendecomposition of a symmetric matrix by cyclic Jacobi rotations.

    Returns eigenvalues ascending and the matching orthonormal eigenvector
    columns.  Terminates when the off-diagonal Frobenius norm drops below
    ``tol`` times the matrix norm; raises after ``max_sweeps`` sweeps.
    """
    A = check_symmetric(A)
    n = A.shape[0]
    V = np.eye(n)
    if n == 1:
        return A.diagonal().copy(), V
    norm = max(float(np.linalg.norm(A)), np.finfo(float).tiny)
    upper = np.triu_indices(n, k=1)
    for _ in range(max_sweeps):
        off = math.sqrt(2.0) * float(np.linalg.norm(A[upper]))
        if off <= tol * norm:
            w = A.diagonal().copy()
            order = np.argsort(w, kind="stable")
            return w[order], V[:, order]
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                if abs(apq) <= 0.25 * tol * norm / (n * n):
                    continue
                tau = (A[q, q] - A[p, p]) / (2.0 * apq)
                t = math.copysign(1.0, tau) / (abs(tau) + math.hypot(1.0, tau))
                c = 1.0 / math.hypot(1.0, t)
                s = t * c
                # A <- J^T A J with the (p,q)-plane rotation J = [[c,s],[-s,c]]
                J = np.array([[c, s], [-s, c]])
                A[[p, q], :] = J.T @ A[[p, q], :]
                A[:, [p, q]] = A[:, [p, q]] @ J
                # re-symmetrize the rotated pair against roundoff drift
                A[p, q] = A[q, p] = 0.5 * (A[p, q] + A[q, p])
                V[:, [p, q]] = V[:, [p, q]] @ J
    raise NumericError(f"Jacobi failed to converge in {max_sweeps} sweeps")


def check_spd(A: np.ndarray, tol: float = 1e-12) -> np.ndarray:
    """Validate symmetry and strict positive-definiteness (via jacobi_eigh)."""
    A = check_symmetric(A, tol)
    w, _ = jacobi_eigh(A)
    if w[0] <= 0.0:
        raise DomainError(f"matrix is not SPD: smallest eigenvalue {w[0]:.6e}")
    return A


def sym_dim(n: int) -> int:
    return n * (n + 1) // 2


def order_from_sym_dim(d: int) -> int:
    n = int((math.isqrt(8 * d + 1) - 1) // 2)
    if sym_dim(n) != d:
        raise ValidationError(f"length {d} is not of the form n(n+1)/2")
    return n


def _triu_indices(n: int) -> Tuple[np.ndarray, np.ndarray]:
    return np.triu_indices(n)


def sym_chart_decode(v: np.ndarray) -> np.ndarray:
    """Row-wise upper-triangle vector -> symmetric matrix."""
    v = np.asarray(v, dtype=float).ravel()
    n = order_from_sym_dim(v.size)
    A = np.zeros((n, n))
    iu, ju = _triu_indices(n)
    A[iu, ju] = v
    A[ju, iu] = v
    return A


def sym_chart_encode(A: np.ndarray) -> np.ndarray:
    """Symmetric matrix -> row-wise upper-triangle vector (exact inverse of
    ``sym_chart_decode`` on symmetric matrices)."""
    A = check_symmetric(A)
    iu, ju = _triu_indices(A.shape[0])
    return A[iu, ju].copy()


def sym_chart(direction: str, arg):
    """Dispatching form of the symmetrization chart.

    ``direction="encode"`` expects a vector of length p(p+1)/2 and returns
    the symmetric matrix; ``"decode"`` inverts it.
    """
    if direction == "encode":
        return sym_chart_decode(arg)
    if direction == "decode":
        return sym_chart_encode(arg)
    raise ValidationError(f"direction must be 'encode' or 'decode', got {direction!r}")


def frob_unvec(v: np.ndarray) -> np.ndarray:
    """Frobenius-isometric vector -> symmetric matrix (off-diagonals /sqrt2)."""
    v = np.asarray(v, dtype=float).ravel()
    n = order_from_sym_dim(v.size)
    A = np.zeros((n, n))
    iu, ju = _triu_indices(n)
    vals = v.copy()
    vals[iu != ju] /= _SQRT2
    A[iu, ju] = vals
    A[ju, iu] = vals
    return A


def frob_vec(A: np.ndarray) -> np.ndarray:
    """Symmetric matrix -> Frobenius-isometric vector (off-diagonals *sqrt2),
    so that ||frob_vec(A)||_2 == ||A||_F."""
    A = check_symmetric(A)
    iu, ju = _triu_indices(A.shape[0])
    vals = A[iu, ju].copy()
    vals[iu != ju] *= _SQRT2
    return vals


_FUNCS = {
    "sqrt": (math.sqrt, True),
    "invsqrt": (lambda t: 1.0 / math.sqrt(t), True),
    "log": (math.log, True),
    "exp": (math.exp, False),
}


def sym_matrix_function(fn: str, A: np.ndarray) -> np.ndarray:
    """Apply sqrt / invsqrt / log / exp to a symmetric matrix spectrally.

    sqrt, invsqrt and log require strict positive definiteness; exp accepts
    any symmetric matrix.
    """
    if fn not in _FUNCS:
        raise ValidationError(f"unknown matrix function {fn!r}; expected one of {sorted(_FUNCS)}")
    func, needs_spd = _FUNCS[fn]
    w, V = jacobi_eigh(A)
    if needs_spd and w[0] <= 0.0:
        raise DomainError(
            f"matrix function {fn!r} requires SPD input: smallest eigenvalue {w[0]:.6e}"
        )
    fw = np.array([func(t) for t in w])
    M = (V * fw) @ V.T
    return 0.5 * (M + M.T)


def spd_sqrt(A: np.ndarray) -> np.ndarray:
    return sym_matrix_function("sqrt", A)


def spd_invsqrt(A: np.ndarray) -> np.ndarray:
    return sym_matrix_function("invsqrt", A)


def spd_log(A: np.ndarray) -> np.ndarray:
    return sym_matrix_function("log", A)


def sym_exp(A: np.ndarray) -> np.ndarray:
    return sym_matrix_function("exp", A)
