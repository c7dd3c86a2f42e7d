"""Finite-dimensional Lie algebras with inner products.

Structure constants are stored densely as ``c[i, j, k]`` with
``[e_i, e_j] = sum_k c[i, j, k] e_k`` (0-based internally).  Vectors are plain
1-d numpy arrays of coordinates in the algebra's basis; a list of vectors is a
2-d array whose *rows* are the vectors.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .errors import InputError

DEFAULT_TOL = 1e-9


def _frozen(a) -> np.ndarray:
    arr = np.array(a, dtype=float)
    arr.setflags(write=False)
    return arr


def as_vector(v, dim: int) -> np.ndarray:
    """Coerce ``v`` to a float coordinate vector of length ``dim``."""
    arr = np.asarray(v, dtype=float)
    if arr.shape != (dim,):
        raise InputError(f"expected a vector with {dim} coordinates, got shape {arr.shape}")
    return arr


@dataclass(frozen=True)
class LieAlgebraSpec:
    """A Lie algebra given by its structure constants in a fixed basis.

    Construction validates shape, antisymmetry and the Jacobi identity
    against ``tol`` (relative to the largest structure constant).
    """

    structure: np.ndarray
    labels: tuple = ()
    tol: float = DEFAULT_TOL
    dim: int = field(init=False)

    def __post_init__(self):
        c = _frozen(self.structure)
        if c.ndim != 3 or not (c.shape[0] == c.shape[1] == c.shape[2]) or c.shape[0] < 1:
            raise InputError(f"structure constants must have shape (n, n, n), got {c.shape}")
        n = c.shape[0]
        object.__setattr__(self, "structure", c)
        object.__setattr__(self, "dim", n)
        labels = tuple(self.labels) if self.labels else tuple(f"e{i + 1}" for i in range(n))
        if len(labels) != n:
            raise InputError(f"expected {n} basis labels, got {len(labels)}")
        object.__setattr__(self, "labels", labels)

        scale = self.scale
        asym = float(np.abs(c + c.transpose(1, 0, 2)).max())
        if asym > self.tol * scale:
            raise InputError(f"antisymmetry violated: max |c_ijk + c_jik| = {asym:.3e}")
        res = self.jacobi_residual()
        if res > self.tol * scale**2:
            raise InputError(f"Jacobi identity violated: residual {res:.3e}")

    @classmethod
    def from_brackets(cls, dim: int, brackets, labels=(), tol: float = DEFAULT_TOL):
        """Build from sparse ``(i, j, k, value)`` triples, 0-based, i < j.

        Antisymmetric completion is implicit; repeated triples accumulate.
        """
        c = np.zeros((dim, dim, dim))
        for i, j, k, value in brackets:
            if not (0 <= i < dim and 0 <= j < dim and 0 <= k < dim):
                raise InputError(f"bracket index out of range: ({i}, {j}, {k})")
            if i >= j:
                raise InputError(f"bracket entries need i < j, got ({i}, {j})")
            c[i, j, k] += value
            c[j, i, k] -= value
        return cls(c, labels, tol)

    @property
    def scale(self) -> float:
        m = float(np.abs(self.structure).max())
        return m if m > 0 else 1.0

    @property
    def is_abelian(self) -> bool:
        return not np.any(self.structure)

    def jacobi_residual(self) -> float:
        """Largest absolute entry of the cyclic Jacobi sum over basis triples."""
        c = self.structure
        jac = (
            np.einsum("ijl,lkm->ijkm", c, c)
            + np.einsum("jkl,lim->ijkm", c, c)
            + np.einsum("kil,ljm->ijkm", c, c)
        )
        return float(np.abs(jac).max())

    def sparse_brackets(self):
        """Nonzero ``(i, j, k, value)`` triples with i < j (0-based)."""
        n = self.dim
        return [
            (i, j, k, float(self.structure[i, j, k]))
            for i in range(n)
            for j in range(i + 1, n)
            for k in range(n)
            if self.structure[i, j, k] != 0.0
        ]


@dataclass(frozen=True)
class MetricTensor:
    """Symmetric positive-definite bilinear form, as a Gram matrix in a basis."""

    g: np.ndarray
    tol: float = DEFAULT_TOL
    dim: int = field(init=False)

    def __post_init__(self):
        g = _frozen(self.g)
        if g.ndim != 2 or g.shape[0] != g.shape[1]:
            raise InputError(f"metric must be a square matrix, got shape {g.shape}")
        if not np.array_equal(g, g.T):
            raise InputError("metric is not symmetric")
        evals = np.linalg.eigvalsh(g)
        top = max(float(np.abs(evals).max()), np.finfo(float).tiny)
        if evals[0] <= self.tol * top:
            raise InputError(
                f"metric is not positive definite: smallest eigenvalue {evals[0]:.3e}"
            )
        object.__setattr__(self, "g", g)
        object.__setattr__(self, "dim", g.shape[0])

    @classmethod
    def identity(cls, dim: int, tol: float = DEFAULT_TOL) -> "MetricTensor":
        return cls(np.eye(dim), tol)

    @classmethod
    def symmetrized(cls, m, tol: float = DEFAULT_TOL):
        """Return ``(metric, max_asymmetry)`` for a nearly symmetric matrix."""
        m = np.asarray(m, dtype=float)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise InputError(f"metric must be a square matrix, got shape {m.shape}")
        asym = float(np.abs(m - m.T).max()) if m.size else 0.0
        return cls(0.5 * (m + m.T), tol), asym

    @property
    def inverse(self) -> np.ndarray:
        return np.linalg.inv(self.g)

    def inner(self, u, v) -> float:
        return float(np.asarray(u) @ self.g @ np.asarray(v))

    def norm(self, u) -> float:
        return float(np.sqrt(max(self.inner(u, u), 0.0)))

    def gram(self, rows) -> np.ndarray:
        """Gram matrix of the vectors stored as rows of ``rows``."""
        rows = np.asarray(rows, dtype=float)
        return rows @ self.g @ rows.T


def _check_dims(alg: LieAlgebraSpec, *vectors):
    return [as_vector(v, alg.dim) for v in vectors]


def _check_metric(alg: LieAlgebraSpec, g: MetricTensor):
    if g.dim != alg.dim:
        raise InputError(f"metric dimension {g.dim} does not match algebra dimension {alg.dim}")


def bracket(a, b, alg: LieAlgebraSpec) -> np.ndarray:
    a, b = _check_dims(alg, a, b)
    return np.einsum("i,j,ijk->k", a, b, alg.structure)


def ad_matrix(v, alg: LieAlgebraSpec) -> np.ndarray:
    """Matrix of ``ad_v = [v, .]`` acting on coordinate columns."""
    (v,) = _check_dims(alg, v)
    return np.einsum("i,ijk->kj", v, alg.structure)


def ad_transpose(v, alg: LieAlgebraSpec, g: MetricTensor) -> np.ndarray:
    """The ``g``-transpose of ``ad_v``: ``g(M y, z) = g(y, [v, z])``."""
    _check_metric(alg, g)
    a = ad_matrix(v, alg)
    return np.linalg.solve(g.g, a.T @ g.g)


def gram_schmidt(vectors, g: MetricTensor, tol: float = DEFAULT_TOL, return_indices=False):
    """Orthonormalize ``vectors`` (rows) with respect to ``g``.

    Modified Gram-Schmidt with one re-orthogonalization pass. A vector whose
    residual after projection falls below ``tol`` times its original length
    is dropped, so the output spans the same space but may have fewer rows.
    With ``return_indices`` the input positions of the kept rows are returned
    as well.
    """
    vectors = np.atleast_2d(np.asarray(vectors, dtype=float))
    out, kept = [], []
    for idx, v in enumerate(vectors):
        before = g.norm(v)
        if before == 0.0:
            continue
        w = v.copy()
        for _ in range(2):
            for q in out:
                w = w - g.inner(q, w) * q
        after = g.norm(w)
        if after < tol * before:
            continue
        out.append(w / after)
        kept.append(idx)
    result = np.array(out).reshape(len(out), g.dim)
    return (result, kept) if return_indices else result


def derived_subalgebra_span(
    alg: LieAlgebraSpec, g: Optional[MetricTensor] = None, tol: Optional[float] = None
) -> np.ndarray:
    """Orthonormal basis (rows) of ``[g, g]``; empty ``(0, n)`` if abelian."""
    n = alg.dim
    tol = alg.tol if tol is None else tol
    g = MetricTensor.identity(n) if g is None else g
    _check_metric(alg, g)
    images = alg.structure.reshape(n * n, n)
    if not np.any(images):
        return np.zeros((0, n))
    _, s, vt = np.linalg.svd(images, full_matrices=False)
    rank = int(np.sum(s > tol * s[0]))
    return gram_schmidt(vt[:rank], g, tol)


def change_basis(alg: LieAlgebraSpec, basis, labels: Sequence[str] = ()) -> LieAlgebraSpec:
    """Re-express ``alg`` in the basis whose vectors are the rows of ``basis``."""
    b = np.asarray(basis, dtype=float)
    binv = np.linalg.inv(b)
    c = np.einsum("ai,bj,ijk,km->abm", b, b, alg.structure, binv)
    return LieAlgebraSpec(c, tuple(labels), alg.tol)


def structure_norm(alg: LieAlgebraSpec, g: MetricTensor) -> float:
    """Frobenius norm of the structure constants in any ``g``-orthonormal basis.

    Independent of which orthonormal basis is used; bounds the operator norm
    of the bracket, so it serves as the natural unit for bracket residuals.
    """
    _check_metric(alg, g)
    # g = L L^T, so the rows of L^-1 are g-orthonormal
    frame = np.linalg.inv(np.linalg.cholesky(g.g))
    return float(np.linalg.norm(change_basis(alg, frame).structure))
