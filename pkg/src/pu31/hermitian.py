"""Complex 4-vectors and 4x4 matrices under a signature (3,1) Hermitian form.

Vectors and matrices are plain numpy arrays of dtype complex128 with shapes
(4,) and (4, 4).  The helpers `as_vector` and `as_matrix` coerce and validate.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceFailure, ZeroVector

NULL_TOL = 1e-9
CLUSTER_TOL = 1e-7
RANK_TOL = 1e-7

_SIEGEL = np.array(
    [[0, 0, 0, 1], [0, 1, 0, 0], [0, 0, 1, 0], [1, 0, 0, 0]], dtype=complex
)
_BALL = np.diag([1, 1, 1, -1]).astype(complex)
_SIEGEL.setflags(write=False)
_BALL.setflags(write=False)


class HermitianForm(enum.Enum):
    SIEGEL = "siegel"
    BALL = "ball"

    @property
    def matrix(self) -> np.ndarray:
        return _SIEGEL if self is HermitianForm.SIEGEL else _BALL


SIEGEL = HermitianForm.SIEGEL
BALL = HermitianForm.BALL


def as_vector(z) -> np.ndarray:
    v = np.asarray(z, dtype=complex)
    if v.shape != (4,):
        raise ValueError(f"expected a 4-vector, got shape {v.shape}")
    if not np.all(np.isfinite(v)):
        raise ValueError("vector has non-finite entries")
    return v


def as_matrix(m) -> np.ndarray:
    a = np.asarray(m, dtype=complex)
    if a.shape != (4, 4):
        raise ValueError(f"expected a 4x4 matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix has non-finite entries")
    return a


def herm_inner(z, w, form: HermitianForm = SIEGEL) -> complex:
    """<z, w> = w* H z."""
    return complex(np.conj(w) @ form.matrix @ z)


def herm_gram(P: np.ndarray, Q: np.ndarray, form: HermitianForm = SIEGEL) -> np.ndarray:
    """Table of <P[i], Q[j]> for stacks of row vectors."""
    return P @ form.matrix.T @ np.conj(Q).T


class Sign(enum.Enum):
    NEGATIVE = -1
    NULL = 0
    POSITIVE = 1


@dataclass(frozen=True)
class VectorSign:
    value: Sign
    magnitude: float


def vector_sign(z, form: HermitianForm = SIEGEL, tol: float = NULL_TOL) -> VectorSign:
    z = as_vector(z)
    scale = float(np.vdot(z, z).real)
    if scale == 0.0:
        raise ZeroVector("the zero vector has no sign")
    q = herm_inner(z, z, form).real
    if abs(q) <= tol * scale:
        return VectorSign(Sign.NULL, q)
    return VectorSign(Sign.POSITIVE if q > 0 else Sign.NEGATIVE, q)


def unitarity_defect(M, form: HermitianForm = SIEGEL) -> float:
    """max |M* H M - H|, zero exactly when M preserves the form."""
    M = np.asarray(M, dtype=complex)
    H = form.matrix
    return float(np.abs(np.conj(M.T) @ H @ M - H).max())


def normalize_det(M) -> np.ndarray:
    """Scale M by the principal fourth root of 1/det(M)."""
    M = np.asarray(M, dtype=complex)
    d = np.linalg.det(M)
    if d == 0:
        raise ValueError("singular matrix")
    return M * d ** (-0.25)


@dataclass(frozen=True)
class EigenPair:
    value: complex
    vector: np.ndarray
    multiplicity: int
    # orthonormal basis of the numerical eigenspace, one column per direction
    basis: np.ndarray

    @property
    def geometric(self) -> int:
        return self.basis.shape[1]


@dataclass(frozen=True)
class EigenDecomposition:
    pairs: tuple
    diagonalizable: bool

    @property
    def values(self) -> list:
        return [p.value for p in self.pairs]

    def max_residual(self, M) -> float:
        M = np.asarray(M, dtype=complex)
        return max(
            float(np.linalg.norm(M @ p.basis - p.value * p.basis, axis=0).max())
            for p in self.pairs
        )


def _cluster(values: np.ndarray, tol: float) -> list:
    # single linkage on the relative distance
    n = len(values)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            scale = max(abs(values[i]), abs(values[j]), 1e-300)
            if abs(values[i] - values[j]) <= tol * scale:
                parent[find(i)] = find(j)
    groups = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return sorted(groups.values(), key=lambda g: g[0])


def eigen4(M, cluster_tol: float = CLUSTER_TOL, rank_tol: float = RANK_TOL) -> EigenDecomposition:
    """Eigenvalues with multiplicities and eigenspaces of a 4x4 complex matrix.

    Eigenvalues closer than `cluster_tol` (relative) are merged and replaced by
    their mean.  The geometric multiplicity of each cluster is the number of
    singular values of M - lambda I below `rank_tol * ||M||`.
    """
    M = as_matrix(M)
    try:
        raw = np.linalg.eigvals(M)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceFailure(f"eigenvalue iteration failed: {exc}") from exc
    if not np.all(np.isfinite(raw)):
        raise ConvergenceFailure("eigenvalue iteration produced non-finite values")
    norm = float(np.linalg.norm(M, 2)) or 1.0
    pairs = []
    diagonalizable = True
    for group in _cluster(raw, cluster_tol):
        lam = complex(np.mean(raw[group]))
        _, s, vh = np.linalg.svd(M - lam * np.eye(4))
        g = max(1, int(np.sum(s <= rank_tol * norm)))
        g = min(g, len(group))
        basis = np.conj(vh[4 - g:][::-1]).T
        resid = float(s[-1])
        if resid > max(1e-6 * norm, 1e-12):
            raise ConvergenceFailure(
                f"eigenvector residual {resid:.3e} too large", residual=resid
            )
        if g < len(group):
            diagonalizable = False
        pairs.append(EigenPair(lam, basis[:, 0].copy(), len(group), basis))
    return EigenDecomposition(tuple(pairs), diagonalizable)
