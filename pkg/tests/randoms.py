"""Random valid (algebra, metric, field) instances for property tests.

Algebras come from templates that satisfy the Jacobi identity by construction
(almost abelian, 2-step nilpotent, solvable with commuting diagonalizable
derivations, R x_skew R^m), optionally with an abelian summand. A random
well-conditioned change of basis is applied at the end to the algebra, the
metric and the field together, so no template structure is axis-aligned.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from randers_lie import DeformationField, LieAlgebraSpec, MetricTensor, change_basis

TEMPLATES = ("almost_abelian", "nilpotent", "solvable", "skew", "abelian_sum")


@dataclass
class Instance:
    alg: LieAlgebraSpec
    h: MetricTensor
    X: DeformationField
    template: str
    mode: str  # generic | douglas | berwald (what the field was drawn as)


def _almost_abelian(rng, n):
    c = np.zeros((n, n, n))
    a = rng.normal(size=(n - 1, n - 1))
    c[0, 1:, 1:] = a.T  # [b, u_j] = sum_k a[k, j] u_k
    c[1:, 0, 1:] = -a.T
    return c


def _nilpotent(rng, n):
    if n < 3:
        return _almost_abelian(rng, n)
    q = int(rng.integers(1, n - 1))  # center dimension
    p = n - q
    c = np.zeros((n, n, n))
    for i in range(p):
        for j in range(i + 1, p):
            vals = rng.normal(size=q)
            c[i, j, p:] = vals
            c[j, i, p:] = -vals
    return c


def _solvable(rng, n):
    if n < 3:
        return _almost_abelian(rng, n)
    k = int(rng.integers(1, n - 1))  # number of derivations
    m = n - k
    p = rng.normal(size=(m, m)) + 2 * np.eye(m)
    pinv = np.linalg.inv(p)
    c = np.zeros((n, n, n))
    for a in range(k):
        d = p @ np.diag(rng.normal(size=m)) @ pinv
        c[a, k:, k:] = d.T
        c[k:, a, k:] = -d.T
    return c


def _skew(rng, n):
    c = np.zeros((n, n, n))
    s = rng.normal(size=(n - 1, n - 1))
    a = s - s.T
    c[0, 1:, 1:] = a.T
    c[1:, 0, 1:] = -a.T
    return c


def _template(rng, name, n):
    if name == "abelian_sum":
        inner = str(rng.choice(["almost_abelian", "nilpotent", "solvable", "skew"]))
        if n < 3:
            return np.zeros((n, n, n))
        c = np.zeros((n, n, n))
        c[: n - 1, : n - 1, : n - 1] = _template(rng, inner, n - 1)
        return c
    return {"almost_abelian": _almost_abelian, "nilpotent": _nilpotent,
            "solvable": _solvable, "skew": _skew}[name](rng, n)


def _null_space(m, tol=1e-10):
    if m.size == 0:
        return np.eye(m.shape[1])
    _, s, vt = np.linalg.svd(m)
    top = s[0] if s.size and s[0] > 0 else 1.0
    rank = int(np.sum(s > tol * top))
    return vt[rank:]


def random_spd(rng, n):
    m = rng.normal(size=(n, n))
    g = m @ m.T / n + 0.5 * np.eye(n)
    return 0.5 * (g + g.T)


def random_basis(rng, n):
    q1, _ = np.linalg.qr(rng.normal(size=(n, n)))
    q2, _ = np.linalg.qr(rng.normal(size=(n, n)))
    return q1 @ np.diag(rng.uniform(0.6, 1.6, size=n)) @ q2


def random_instance(rng, n=None, mode=None, template=None, x_range=(0.05, 0.45),
                    change=True) -> Instance:
    n = int(rng.integers(2, 6)) if n is None else n
    template = str(rng.choice(TEMPLATES)) if template is None else template
    mode = str(rng.choice(["generic", "douglas", "berwald"], p=[0.4, 0.35, 0.25])) if mode is None else mode
    c = _template(rng, template, n)
    alg = LieAlgebraSpec(c)

    if template == "skew" and mode == "berwald":
        h = np.eye(n)
    else:
        h = random_spd(rng, n)

    derived = alg.structure.reshape(n * n, n)
    perp = _null_space(derived @ h) if np.any(derived) else np.eye(n)
    drawn = "generic"
    x = rng.normal(size=n)
    if mode == "douglas" and len(perp):
        x = rng.normal(size=len(perp)) @ perp
        drawn = "douglas"
    elif mode == "berwald":
        if template == "skew":
            x = np.eye(n)[0]
            drawn = "berwald"
        else:
            both = _null_space(np.vstack([derived @ h, alg.structure.reshape(n, n * n).T]))
            if len(both):
                x = rng.normal(size=len(both)) @ both
                drawn = "berwald"

    norm = np.sqrt(x @ h @ x)
    x = x * rng.uniform(*x_range) / norm

    if change:
        p = random_basis(rng, n)
        alg = change_basis(alg, p)
        h = p @ h @ p.T
        x = x @ np.linalg.inv(p)
    hm = MetricTensor(0.5 * (h + h.T))
    return Instance(alg, hm, DeformationField.create(x, hm), template, drawn)


def instances(seed, count, **kw):
    rng = np.random.default_rng(seed)
    return [random_instance(rng, **kw) for _ in range(count)]
