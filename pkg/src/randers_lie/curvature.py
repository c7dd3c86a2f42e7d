"""Levi-Civita connections and curvature of left-invariant metrics.

Everything is expressed in a left-invariant frame (normally an
:class:`~randers_lie.randers.AdaptedFrame`): ``gamma[i, j, k]`` is the
coefficient of ``X_k`` in ``nabla_{X_i} X_j`` and ``r[i, j, k, h]`` the
coefficient of ``X_h`` in ``R(X_i, X_j) X_k`` with

    R(X, Y) Z = nabla_X nabla_Y Z - nabla_Y nabla_X Z - nabla_[X,Y] Z.

The general Koszul pipeline (:func:`koszul_connection`, :func:`riemann_tensor`,
:func:`sectional_curvature`) is the reference; the closed forms valid for
``g_X`` in its adapted frame are implemented separately so that the two can be
compared.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Tuple

import numpy as np

from .algebra import MetricTensor
from .classification import classify
from .errors import InputError, PreconditionError
from .randers import AdaptedFrame, DeformationField, deformed_metric, evaluate_F, make_F_tilde


@dataclass(frozen=True)
class ConnectionTable:
    gamma: np.ndarray
    gram: np.ndarray
    alpha: np.ndarray
    labels: tuple = ()

    def torsion_residual(self) -> float:
        """max |Gamma^k_ij - Gamma^k_ji - alpha_ijk|."""
        t = self.gamma - self.gamma.transpose(1, 0, 2) - self.alpha
        return float(np.abs(t).max())

    def metric_residual(self) -> float:
        """max |g(nabla_i X_j, X_k) + g(X_j, nabla_i X_k)|."""
        low = np.einsum("ijm,mk->ijk", self.gamma, self.gram)
        return float(np.abs(low + low.transpose(0, 2, 1)).max())

    def in_input_basis(self, frame: AdaptedFrame) -> np.ndarray:
        """Coefficients of ``nabla_{e_i} e_j`` along ``e_k`` for the input basis."""
        b = frame.basis
        binv = np.linalg.inv(b)
        return np.einsum("ia,jb,abc,ck->ijk", binv, binv, self.gamma, b)


@dataclass(frozen=True)
class CurvatureTensor:
    r: np.ndarray
    gram: np.ndarray

    @property
    def lowered(self) -> np.ndarray:
        """``g(R(X_i, X_j) X_k, X_l)``."""
        return np.einsum("ijkh,hl->ijkl", self.r, self.gram)

    def antisymmetry_residual(self) -> float:
        return float(np.abs(self.r + self.r.transpose(1, 0, 2, 3)).max())

    def bianchi_residual(self) -> float:
        r = self.r
        cyc = r + r.transpose(1, 2, 0, 3) + r.transpose(2, 0, 1, 3)
        return float(np.abs(cyc).max())

    def pair_symmetry_residual(self) -> float:
        low = self.lowered
        return float(np.abs(low - low.transpose(2, 3, 0, 1)).max())


@dataclass(frozen=True)
class SectionalReport:
    """Sectional curvatures of the planes spanned by pairs of frame vectors."""

    entries: Dict[Tuple[int, int], float]
    labels: tuple = ()

    def __getitem__(self, pair) -> float:
        i, j = pair
        if i == j:
            raise KeyError(pair)
        return self.entries[(min(i, j), max(i, j))]

    def as_matrix(self, n: int) -> np.ndarray:
        m = np.zeros((n, n))
        for (i, j), k in self.entries.items():
            m[i, j] = m[j, i] = k
        return m

    def max_abs_diff(self, other: "SectionalReport") -> float:
        if not self.entries:
            return 0.0
        return max(abs(v - other.entries[p]) for p, v in self.entries.items())

    def max_abs(self) -> float:
        return max((abs(v) for v in self.entries.values()), default=0.0)


@dataclass(frozen=True)
class FlagReport:
    """Flag curvatures keyed by ``(pole j, plane partner i)``."""

    entries: Dict[Tuple[int, int], float]
    which: str
    labels: tuple = field(default=())


def _frame_gram(frame: AdaptedFrame, g: MetricTensor) -> np.ndarray:
    if g.dim != frame.dim:
        raise InputError("metric and frame dimensions differ")
    return g.gram(frame.basis)


def koszul_connection(frame: AdaptedFrame, g: MetricTensor) -> ConnectionTable:
    """Levi-Civita connection of ``g`` from the Koszul formula.

    For left-invariant fields,
    ``2 g(nabla_i X_j, X_k) = g(X_i, [X_k, X_j]) - g(X_j, [X_i, X_k]) - g(X_k, [X_j, X_i])``,
    solved for ``Gamma`` with the frame Gram matrix of ``g`` (which need not be
    diagonal).
    """
    gram = _frame_gram(frame, g)
    a = frame.alpha
    low = 0.5 * (
        np.einsum("kjm,im->ijk", a, gram)
        - np.einsum("ikm,jm->ijk", a, gram)
        - np.einsum("jim,km->ijk", a, gram)
    )
    gamma = np.einsum("ijl,lk->ijk", low, np.linalg.inv(gram))
    return ConnectionTable(gamma, gram, a, frame.labels)


def connection_gX_closed_form(frame: AdaptedFrame) -> ConnectionTable:
    """Connection of ``g_X`` from the eigenvalues of ``phi`` alone.

    ``Gamma^k_ij = ((lam_i / lam_k) a_kji - (lam_j / lam_k) a_ikj - a_jik) / 2``
    where ``a`` are the structure constants in the adapted frame.
    """
    lam = np.asarray(frame.eigenvalues)
    a = frame.alpha
    ratio_i = lam[:, None, None] / lam[None, None, :]  # lam_i / lam_k
    ratio_j = lam[None, :, None] / lam[None, None, :]  # lam_j / lam_k
    gamma = 0.5 * (
        ratio_i * a.transpose(2, 1, 0)
        - ratio_j * a.transpose(0, 2, 1)
        - a.transpose(1, 0, 2)
    )
    return ConnectionTable(gamma, np.diag(lam), a, frame.labels)


def riemann_tensor(conn: ConnectionTable, frame: AdaptedFrame | None = None) -> CurvatureTensor:
    g, a = conn.gamma, conn.alpha
    if frame is not None and frame.alpha.shape != a.shape:
        raise InputError("connection and frame dimensions differ")
    r = (
        np.einsum("jkl,ilh->ijkh", g, g)
        - np.einsum("ikl,jlh->ijkh", g, g)
        - np.einsum("ijl,lkh->ijkh", a, g)
    )
    return CurvatureTensor(r, conn.gram)


def sectional_curvature(rt: CurvatureTensor, g: MetricTensor, frame: AdaptedFrame) -> SectionalReport:
    """``K(X_i, X_j) = g(R(X_i, X_j) X_j, X_i) / (g_ii g_jj - g_ij^2)``.

    In an ``h``-orthonormal frame where ``g`` is ``diag(lam)`` this reduces to
    ``h(R(X_i, X_j) X_j, X_i) / lam_j``.
    """
    gram = _frame_gram(frame, g)
    low = np.einsum("ijkh,hl->ijkl", rt.r, gram)
    n = frame.dim
    entries = {}
    for i in range(n):
        for j in range(i + 1, n):
            den = gram[i, i] * gram[j, j] - gram[i, j] ** 2
            entries[(i, j)] = float(low[i, j, j, i] / den)
    return SectionalReport(entries, frame.labels)


def sectional_curvature_plane(rt: CurvatureTensor, gram, u, v, tol: float = 1e-12) -> float:
    """Sectional curvature of ``span{u, v}`` (frame coordinates)."""
    gram = np.asarray(gram)
    u, v = np.asarray(u, dtype=float), np.asarray(v, dtype=float)
    guu, gvv, guv = u @ gram @ u, v @ gram @ v, u @ gram @ v
    den = guu * gvv - guv**2
    if den <= tol * guu * gvv:
        raise InputError("degenerate plane: u and v are linearly dependent")
    low = np.einsum("ijkh,hl->ijkl", rt.r, gram)
    return float(np.einsum("ijkl,i,j,k,l->", low, u, v, v, u) / den)


def sectional_curvature_closed_form(frame: AdaptedFrame) -> SectionalReport:
    """Single-sum formula for the sectional curvature of ``g_X`` in its adapted frame."""
    lam = np.asarray(frame.eigenvalues)
    inv = 1.0 / lam
    a = frame.alpha
    n = frame.dim
    li, lj = lam[:, None], lam[None, :]
    t = (
        -4.0 * np.einsum("ljj,lii,l->ij", a, a, inv)
        - 2.0 * np.einsum("lji,ilj,l->ij", a, a, inv)
        + 2.0 / lj * np.einsum("ijl,jli->ij", a, a)
        + 2.0 / li * np.einsum("ilj,jil->ij", a, a)
        - 3.0 / (li * lj) * np.einsum("ijl,l->ij", a**2, lam)
        + lj / li * np.einsum("ilj,l->ij", a**2, inv)
        + li / lj * np.einsum("lji,l->ij", a**2, inv)
    )
    k = 0.25 * t
    entries = {(i, j): float(k[i, j]) for i in range(n) for j in range(i + 1, n)}
    return SectionalReport(entries, frame.labels)


# -- Douglas / Berwald specializations -------------------------------------


def _frame_classification(frame: AdaptedFrame):
    ident = MetricTensor.identity(frame.dim)
    x = DeformationField(frame.X_coords, frame.x_norm)
    return classify(frame.structure, ident, x)


def _require(frame: AdaptedFrame, kind: str):
    rep = _frame_classification(frame)
    if kind == "douglas" and not rep.douglas:
        raise PreconditionError(
            f"Douglas condition <X, [g, g]> = 0 fails (residual {rep.douglas_residual:.3e})"
        )
    if kind == "berwald" and not rep.berwald:
        if not rep.douglas:
            raise PreconditionError(
                f"Berwald requires the Douglas condition <X, [g, g]> = 0 "
                f"(residual {rep.douglas_residual:.3e})"
            )
        raise PreconditionError(
            "Berwald condition <[y, X], z> + <[z, X], y> = 0 fails "
            f"(residual {rep.berwald_residual:.3e})"
        )
    return rep


def metric_pipelines(frame: AdaptedFrame, h: MetricTensor, gx: MetricTensor):
    """``(nabla, nabla_bar, K, K_bar)`` from the general pipeline for ``g_X`` and ``h``."""
    nab = koszul_connection(frame, gx)
    nab_bar = koszul_connection(frame, h)
    k = sectional_curvature(riemann_tensor(nab), gx, frame)
    k_bar = sectional_curvature(riemann_tensor(nab_bar), h, frame)
    return nab, nab_bar, k, k_bar


def _x_pairing(frame: AdaptedFrame) -> np.ndarray:
    """``P[i, j] = <[X_i, X], X_j>`` in the ``h``-orthonormal adapted frame."""
    return frame.x_norm * frame.alpha[:, frame.i0, :]


@dataclass(frozen=True)
class DouglasRelation:
    nabla: ConnectionTable
    nabla_bar: ConnectionTable
    predicted: np.ndarray
    residual: float
    uniform_form_residual: float


def connection_relation_douglas(
    frame: AdaptedFrame, h: MetricTensor, X: DeformationField
) -> DouglasRelation:
    """Check ``nabla = nabla_bar + (P_ij + P_ji) X / (2 |X| (1 + |X|))`` for Douglas type.

    Also checks the uniform form ``Gamma^k_ij = (1+|X|)/(2 lam_k) (a_kji - a_ikj - a_jik)``.
    """
    _require(frame, "douglas")
    a = frame.x_norm
    nab = koszul_connection(frame, deformed_metric(h, X))
    nab_bar = koszul_connection(frame, h)
    p = _x_pairing(frame)
    coef = (p + p.T) / (2.0 * a * (1.0 + a))
    predicted = nab_bar.gamma + coef[:, :, None] * frame.X_coords[None, None, :]

    al = frame.alpha
    lam = np.asarray(frame.eigenvalues)
    uniform = (1.0 + a) / (2.0 * lam[None, None, :]) * (
        al.transpose(2, 1, 0) - al.transpose(0, 2, 1) - al.transpose(1, 0, 2)
    )
    return DouglasRelation(
        nabla=nab,
        nabla_bar=nab_bar,
        predicted=predicted,
        residual=float(np.abs(nab.gamma - predicted).max()),
        uniform_form_residual=float(np.abs(nab.gamma - uniform).max()),
    )


@dataclass(frozen=True)
class BerwaldRatio:
    K: SectionalReport
    K_bar: SectionalReport
    ratio_residual: float
    i0_residual: float


def sectional_ratio_berwald(frame: AdaptedFrame, h: MetricTensor, X: DeformationField) -> BerwaldRatio:
    """Check ``K (1 + |X|) = K_bar`` on frame planes, and ``K(X_i0, .) = K_bar(X_i0, .) = 0``."""
    _require(frame, "berwald")
    _, _, k, k_bar = metric_pipelines(frame, h, deformed_metric(h, X))
    a = frame.x_norm
    ratio = max((abs(k.entries[p] * (1.0 + a) - k_bar.entries[p]) for p in k.entries), default=0.0)
    i0 = frame.i0
    at_i0 = [
        max(abs(k[(i0, j)]), abs(k_bar[(i0, j)])) for j in range(frame.dim) if j != i0
    ]
    return BerwaldRatio(k, k_bar, ratio, max(at_i0, default=0.0))


def sectional_douglas_closed_form(
    frame: AdaptedFrame, h: MetricTensor, X: DeformationField
) -> SectionalReport:
    """Douglas-case expression for ``K`` in terms of ``K_bar`` and ``<[X_i, X], X_j>``.

    Evaluated as stated with the overall factor ``1 / (1 + |X|)``. This agrees
    with the general pipeline on planes not containing ``X`` but not on planes
    through ``X_i0``; callers compare rather than trust it.
    """
    _require(frame, "douglas")
    nab_bar = koszul_connection(frame, h)
    k_bar = sectional_curvature(riemann_tensor(nab_bar), h, frame)
    a = frame.x_norm
    p = _x_pairing(frame)
    entries = {}
    for (i, j), kb in k_bar.entries.items():
        extra = p[i, i] * p[j, j] - 0.25 * (p[i, j] + p[j, i]) ** 2
        entries[(i, j)] = float((kb + extra / (a * (1.0 + a))) / (1.0 + a))
    return SectionalReport(entries, frame.labels)


def flag_ratio(frame: AdaptedFrame, j: int) -> float:
    """Predicted ``K^F~(X_j, P) / K^F(X_j, P)`` for Berwald type."""
    lam = frame.eigenvalues[j]
    xj = frame.X_coords[j]
    return float((1.0 + xj) ** 2 / (lam * (1.0 + np.sqrt(lam) * xj) ** 2))


def flag_curvature(
    frame: AdaptedFrame, h: MetricTensor, X: DeformationField, which: str = "F"
) -> FlagReport:
    """Flag curvature with pole ``X_j`` and flag ``span{X_i, X_j}``, Berwald type only.

    ``which="F"``:  ``h(X_j, X_j) / F(X_j)^2 * K_bar(X_i, X_j)``
    ``which="F~"``: ``g_X(X_j, X_j) / F~(X_j)^2 * K(X_i, X_j)``
    """
    if which not in ("F", "F~"):
        raise InputError(f"which must be 'F' or 'F~', got {which!r}")
    _require(frame, "berwald")
    gx = deformed_metric(h, X)
    n = frame.dim
    if which == "F":
        metric, norm = h, (lambda y: evaluate_F(h, X, y))
        k = sectional_curvature(riemann_tensor(koszul_connection(frame, h)), h, frame)
    else:
        metric, norm = gx, make_F_tilde(h, X)
        k = sectional_curvature(riemann_tensor(koszul_connection(frame, gx)), gx, frame)
    entries = {}
    for j in range(n):
        xj = frame.basis[j]
        weight = metric.inner(xj, xj) / norm(xj) ** 2
        for i in range(n):
            if i != j:
                entries[(j, i)] = float(weight * k[(i, j)])
    return FlagReport(entries, which, frame.labels)
