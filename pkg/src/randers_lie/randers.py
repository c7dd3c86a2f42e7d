"""Deformation of a left-invariant metric by a vector field, and Randers norms.

Given an inner product ``h`` on the algebra and a vector ``X`` with
``0 < |X| < 1``, the Randers norm is ``F(y) = |y| + h(X, y)``. Its fundamental
tensor at ``X`` is the inner product

    g_X(v, z) = (h(v, z) + h(X, v) h(X, z) / |X|) (1 + |X|),

and when ``|X| (1 + |X|) < 1`` the pair ``(g_X, X)`` defines a second Randers
norm ``F~(y) = sqrt(g_X(y, y)) + g_X(X, y)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .algebra import (
    DEFAULT_TOL,
    LieAlgebraSpec,
    MetricTensor,
    as_vector,
    change_basis,
    gram_schmidt,
)
from .errors import DegenerateFieldError, InputError, ValidityError


@dataclass(frozen=True)
class DeformationField:
    """Left-invariant vector field ``X`` together with its ``h``-norm."""

    X: np.ndarray
    norm_h: float

    @classmethod
    def create(cls, X, h: MetricTensor, tol: float = DEFAULT_TOL) -> "DeformationField":
        x = as_vector(X, h.dim).copy()
        x.setflags(write=False)
        norm = h.norm(x)
        if norm <= tol:
            raise DegenerateFieldError(f"deforming field is degenerate: |X| = {norm:.3e}")
        if norm >= 1.0:
            raise ValidityError(f"Randers bound violated: |X| = {norm:.12g} must be < 1")
        return cls(x, norm)

    @property
    def dim(self) -> int:
        return self.X.shape[0]

    @property
    def gx_norm(self) -> float:
        """``sqrt(g_X(X, X))``, which equals ``|X| (1 + |X|)``."""
        return self.norm_h * (1.0 + self.norm_h)

    def check_tilde_bound(self):
        """Raise unless ``sqrt(g_X(X, X)) < 1``, the condition for ``F~``."""
        if self.gx_norm >= 1.0:
            raise ValidityError(
                "g_X bound violated: sqrt(g_X(X, X)) = |X|(1+|X|) = "
                f"{self.gx_norm:.12g} must be < 1"
            )


def _check(h: MetricTensor, X: DeformationField):
    if X.dim != h.dim:
        raise InputError(f"field dimension {X.dim} does not match metric dimension {h.dim}")
    if X.norm_h <= 0.0:
        raise DegenerateFieldError("deforming field is degenerate")


def phi_map(h: MetricTensor, X: DeformationField) -> np.ndarray:
    """Matrix of the ``h``-self-adjoint map with ``g_X(v, z) = h(v, phi z)``."""
    _check(h, X)
    a = X.norm_h
    hx = h.g @ X.X
    return (1.0 + a) * (np.eye(h.dim) + np.outer(X.X, hx) / a)


def deformed_metric(h: MetricTensor, X: DeformationField) -> MetricTensor:
    _check(h, X)
    a = X.norm_h
    hx = h.g @ X.X
    g = (h.g + np.outer(hx, hx) / a) * (1.0 + a)
    return MetricTensor(0.5 * (g + g.T), h.tol)


@dataclass(frozen=True)
class AdaptedFrame:
    """``h``-orthonormal eigenframe of ``phi`` with ``X/|X|`` in the last slot.

    ``basis`` holds the frame vectors as rows, in input-basis coordinates.
    ``structure`` is the algebra re-expressed in this frame.
    """

    basis: np.ndarray
    eigenvalues: np.ndarray
    i0: int
    structure: LieAlgebraSpec
    x_norm: float

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    @property
    def labels(self) -> tuple:
        return self.structure.labels

    @property
    def alpha(self) -> np.ndarray:
        return self.structure.structure

    @property
    def X_coords(self) -> np.ndarray:
        """Coordinates of ``X`` in the frame."""
        x = np.zeros(self.dim)
        x[self.i0] = self.x_norm
        return x

    def to_input(self, coords) -> np.ndarray:
        """Frame coordinates -> input-basis coordinates."""
        return np.asarray(coords, dtype=float) @ self.basis

    def from_input(self, v) -> np.ndarray:
        return np.linalg.solve(self.basis.T, np.asarray(v, dtype=float))

    def metric_to_input(self, gram) -> np.ndarray:
        """Re-express a bilinear form given by its frame Gram matrix."""
        binv = np.linalg.inv(self.basis)
        return binv @ np.asarray(gram) @ binv.T


def adapted_frame(
    alg: LieAlgebraSpec, h: MetricTensor, X: DeformationField, tol: float | None = None
) -> AdaptedFrame:
    """Build the adapted eigenframe of ``phi``.

    The complement of ``X`` is obtained by Gram-Schmidt over the input basis
    vectors in order, after ``X`` itself; the ``X`` direction is placed last.
    A frame vector parallel to an input basis vector inherits its label.
    """
    _check(h, X)
    if alg.dim != h.dim:
        raise InputError("algebra and metric dimensions differ")
    tol = alg.tol if tol is None else tol
    n = alg.dim
    candidates = np.vstack([X.X[None, :], np.eye(n)])
    ortho, kept = gram_schmidt(candidates, h, tol, return_indices=True)
    if len(ortho) != n or kept[0] != 0:
        raise InputError("could not complete an orthonormal frame around X")
    basis = np.vstack([ortho[1:], ortho[:1]])

    def label_for(vec, fallback):
        for k in range(n):
            e = np.eye(n)[k]
            if abs(abs(h.inner(vec, e)) - h.norm(e)) <= tol * h.norm(e):
                return alg.labels[k]
        return fallback

    labels = [label_for(basis[a], f"f{a + 1}") for a in range(n - 1)]
    labels.append(label_for(basis[-1], "X"))

    phi = phi_map(h, X)
    eig = np.einsum("ai,ij,jk,ak->a", basis, h.g, phi, basis)
    frame_alg = change_basis(alg, basis, labels)
    basis = basis.copy()
    basis.setflags(write=False)
    eig.setflags(write=False)
    return AdaptedFrame(basis, eig, n - 1, frame_alg, X.norm_h)


def evaluate_F(h: MetricTensor, X: DeformationField, y) -> float:
    _check(h, X)
    if X.norm_h >= 1.0:
        raise ValidityError(f"Randers bound violated: |X| = {X.norm_h:.12g} must be < 1")
    y = as_vector(y, h.dim)
    return h.norm(y) + h.inner(X.X, y)


def make_F_tilde(h: MetricTensor, X: DeformationField) -> Callable[[np.ndarray], float]:
    """Return the norm ``y -> sqrt(g_X(y, y)) + g_X(X, y)``.

    The ``g_X`` validity bound is enforced here, once, rather than when the
    field is created, so ``F`` stays usable whenever only ``|X| < 1`` holds.
    """
    _check(h, X)
    X.check_tilde_bound()
    gx = deformed_metric(h, X)
    gxX = gx.g @ X.X

    def F_tilde(y) -> float:
        y = as_vector(y, h.dim)
        return gx.norm(y) + float(gxX @ y)

    return F_tilde


def evaluate_F_tilde(h: MetricTensor, X: DeformationField, y) -> float:
    return make_F_tilde(h, X)(y)


def evaluate_F_tilde_closed_form(h: MetricTensor, X: DeformationField, y) -> float:
    """``F~`` written in terms of ``h`` only; an independent route to the same value."""
    _check(h, X)
    X.check_tilde_bound()
    y = as_vector(y, h.dim)
    a = X.norm_h
    hxy = h.inner(X.X, y)
    return float(
        np.sqrt((h.inner(y, y) + hxy**2 / a) * (1.0 + a)) + hxy * (1.0 + a) ** 2
    )
