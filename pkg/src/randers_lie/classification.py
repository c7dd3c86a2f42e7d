"""Douglas/Berwald type of left-invariant Randers metrics, and geodesic/Killing tests.

All conditions are bilinear, so quantifiers over the whole algebra are
checked on basis vectors. Each condition is reported twice: as a raw residual
(max absolute value over basis entries) and normalized by the natural bound
``|X| |e_i| |e_j| |[.,.]|``, where ``|[.,.]|`` is :func:`structure_norm`. The
verdicts compare the normalized residual with the tolerance, which makes them
independent of how ``X`` or the basis vectors are scaled.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import (
    LieAlgebraSpec,
    MetricTensor,
    ad_transpose,
    as_vector,
    structure_norm,
)
from .errors import InputError
from .randers import DeformationField, deformed_metric


@dataclass(frozen=True)
class ClassificationReport:
    douglas: bool
    berwald: bool
    douglas_residual: float
    berwald_residual: float
    douglas_normalized: float
    berwald_normalized: float
    tolerance: float

    @property
    def verdicts(self):
        return (self.douglas, self.berwald)


def _safe_ratio(num: np.ndarray, den: np.ndarray) -> np.ndarray:
    out = np.zeros_like(num)
    mask = den > 0
    out[mask] = num[mask] / den[mask]
    return out


def _conditions(alg: LieAlgebraSpec, g: MetricTensor, x: np.ndarray, x_norm: float, tol: float):
    if g.dim != alg.dim or x.shape != (alg.dim,):
        raise InputError("algebra, metric and field dimensions differ")
    c = alg.structure
    gx = g.g @ x
    # <X, [e_i, e_j]>
    dou = np.einsum("ijk,k->ij", c, gx)
    # <[e_i, X], e_j>
    skew = np.einsum("imk,m,kj->ij", c, x, g.g)
    ber = skew + skew.T

    scale = structure_norm(alg, g)
    lengths = np.sqrt(np.diag(g.g))
    unit = x_norm * scale * np.outer(lengths, lengths)
    dou_n = float(_safe_ratio(np.abs(dou), unit).max())
    ber_n = float(_safe_ratio(np.abs(ber), 2.0 * unit).max())
    douglas = dou_n <= tol
    return ClassificationReport(
        douglas=douglas,
        berwald=douglas and ber_n <= tol,
        douglas_residual=float(np.abs(dou).max()),
        berwald_residual=float(np.abs(ber).max()),
        douglas_normalized=dou_n,
        berwald_normalized=ber_n,
        tolerance=tol,
    )


def classify(
    alg: LieAlgebraSpec, h: MetricTensor, X: DeformationField, tol: float | None = None
) -> ClassificationReport:
    """Douglas and Berwald type of ``F(y) = |y|_h + h(X, y)``.

    Douglas iff ``h(X, [g, g]) = 0``; Berwald iff additionally ``ad_X`` is
    ``h``-skew, i.e. ``h([y, X], z) + h([z, X], y) = 0`` for all ``y, z``.
    """
    tol = alg.tol if tol is None else tol
    return _conditions(alg, h, X.X, X.norm_h, tol)


def classify_tilde(
    alg: LieAlgebraSpec, h: MetricTensor, X: DeformationField, tol: float | None = None
) -> ClassificationReport:
    """The same two conditions for ``F~``, i.e. with ``g_X`` in place of ``h``."""
    X.check_tilde_bound()
    tol = alg.tol if tol is None else tol
    return _conditions(alg, deformed_metric(h, X), X.X, X.gx_norm, tol)


def _vector_units(alg, g, v):
    scale = structure_norm(alg, g)
    lengths = np.sqrt(np.diag(g.g))
    return scale, lengths, g.norm(v)


def is_geodesic_vector(v, alg: LieAlgebraSpec, g: MetricTensor, tol: float | None = None):
    """Whether ``g(v, [v, y]) = 0`` for all ``y``; returns ``(verdict, residual)``."""
    tol = alg.tol if tol is None else tol
    v = as_vector(v, alg.dim)
    vals = np.einsum("i,ijk,k->j", v, alg.structure, g.g @ v)
    scale, lengths, vn = _vector_units(alg, g, v)
    normalized = _safe_ratio(np.abs(vals), vn**2 * scale * lengths)
    return bool(normalized.max() <= tol), float(np.abs(vals).max())


def is_killing_vector(v, alg: LieAlgebraSpec, g: MetricTensor, tol: float | None = None):
    """Whether ``ad_v`` is ``g``-skew; returns ``(verdict, residual)``."""
    tol = alg.tol if tol is None else tol
    v = as_vector(v, alg.dim)
    # g([v, e_y], e_z)
    m = np.einsum("i,iyk,kz->yz", v, alg.structure, g.g)
    vals = m + m.T
    scale, lengths, vn = _vector_units(alg, g, v)
    normalized = _safe_ratio(np.abs(vals), 2.0 * vn * scale * np.outer(lengths, lengths))
    return bool(normalized.max() <= tol), float(np.abs(vals).max())


@dataclass(frozen=True)
class TransferReport:
    geodesic_transfer: bool
    killing_transfer: bool
    ad_star_norm: float
    x_dot_v: float
    # the weaker condition <X, v> <X, [v, y]> = 0 for all y
    product_condition: bool
    product_residual: float


def transfer_conditions(
    v, alg: LieAlgebraSpec, h: MetricTensor, X: DeformationField, tol: float | None = None
) -> TransferReport:
    """Conditions under which a geodesic (Killing) vector of ``h`` stays one for ``g_X``.

    ``geodesic_transfer`` is ``ad*_v X = 0 or <X, v> = 0`` and
    ``killing_transfer`` is ``ad*_v X = 0``, transposes taken with ``h``.
    """
    tol = alg.tol if tol is None else tol
    v = as_vector(v, alg.dim)
    scale, lengths, vn = _vector_units(alg, h, v)
    a = X.norm_h

    ad_star_x = ad_transpose(v, alg, h) @ X.X
    ad_norm = h.norm(ad_star_x)
    xv = h.inner(X.X, v)
    ad_unit = vn * a * scale
    ad_zero = ad_norm == 0.0 or (ad_unit > 0 and ad_norm / ad_unit <= tol)
    xv_zero = vn == 0.0 or abs(xv) / (a * vn) <= tol

    prod = xv * np.einsum("i,ijk,k->j", v, alg.structure, h.g @ X.X)
    prod_n = _safe_ratio(np.abs(prod), a**2 * vn**2 * scale * lengths)
    return TransferReport(
        geodesic_transfer=bool(ad_zero or xv_zero),
        killing_transfer=bool(ad_zero),
        ad_star_norm=ad_norm,
        x_dot_v=xv,
        product_condition=bool(prod_n.max() <= tol),
        product_residual=float(np.abs(prod).max()),
    )
