"""Ready-made (algebra, metric, field) triples with hand-derived golden values.

Golden connections are given in the *input* basis, keyed by label pairs
``(a, b) -> coefficients of nabla_a b``; golden sectional curvatures are keyed
by unordered label pairs. Eigenvalues are sorted ascending.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Dict

import numpy as np

from .algebra import LieAlgebraSpec, MetricTensor
from .errors import ParameterError
from .randers import DeformationField


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    parameters: Dict[str, float]
    algebra: LieAlgebraSpec
    metric: MetricTensor
    field: DeformationField
    expected: dict = field(default_factory=dict)

    @property
    def triple(self):
        return self.algebra, self.metric, self.field


def _conn(labels, entries):
    """Dense golden connection from sparse ``{(a, b): {c: value}}``."""
    n = len(labels)
    idx = {lab: k for k, lab in enumerate(labels)}
    out = {}
    for a in labels:
        for b in labels:
            vec = np.zeros(n)
            for c, value in entries.get((a, b), {}).items():
                vec[idx[c]] = value
            out[(a, b)] = vec
    return out


def heisenberg(lam: float = 1.0, c: float = 0.3) -> CatalogEntry:
    """Heisenberg algebra, ``[x, y] = z``, with ``h = diag(lam, lam, 1)`` and ``X = c z``."""
    if not lam > 0:
        raise ParameterError(f"heisenberg needs lambda > 0, got {lam}")
    if not 0 < abs(c) < 0.5:
        raise ParameterError(f"heisenberg needs 0 < |c| < 1/2, got {c}")
    labels = ("x", "y", "z")
    alg = LieAlgebraSpec.from_brackets(3, [(0, 1, 2, 1.0)], labels)
    h = MetricTensor(np.diag([lam, lam, 1.0]))
    X = DeformationField.create([0.0, 0.0, c], h)
    a = abs(c)
    mu = (1 + a) / (2 * lam)
    expected = {
        "eigenvalues": [1 + a, 1 + a, (1 + a) ** 2],
        "connection": _conn(
            labels,
            {
                ("x", "y"): {"z": 0.5},
                ("x", "z"): {"y": -mu},
                ("y", "z"): {"x": mu},
                ("y", "x"): {"z": -0.5},
                ("z", "x"): {"y": -mu},
                ("z", "y"): {"x": mu},
            },
        ),
        "sectional": {
            ("x", "y"): -3 / (4 * lam**2),
            ("x", "z"): 1 / (4 * lam**2),
            ("y", "z"): 1 / (4 * lam**2),
        },
        "gx_diagonal": [lam * (1 + a), lam * (1 + a), (1 + a) ** 2],
        "classification": {"douglas": False, "berwald": False},
    }
    return CatalogEntry("heisenberg", {"lambda": lam, "c": c}, alg, h, X, expected)


def almost_abelian(n: int = 3, xi: float = 0.4) -> CatalogEntry:
    """``[b, u_i] = u_i`` on an orthonormal basis ``{b, u_2, ..., u_n}``, ``X = xi b``."""
    if int(n) != n or n < 2:
        raise ParameterError(f"almost_abelian needs an integer n >= 2, got {n}")
    if not 0 < xi < 0.5:
        raise ParameterError(f"almost_abelian needs 0 < xi < 1/2, got {xi}")
    n = int(n)
    labels = ("b",) + tuple(f"u{i}" for i in range(2, n + 1))
    alg = LieAlgebraSpec.from_brackets(n, [(0, i, i, 1.0) for i in range(1, n)], labels)
    h = MetricTensor.identity(n)
    X = DeformationField.create([xi] + [0.0] * (n - 1), h)
    conn = {}
    for u in labels[1:]:
        conn[(u, "b")] = {u: -1.0}
        conn[(u, u)] = {"b": 1.0 / (1 + xi)}
    k = -1.0 / (1 + xi) ** 2
    expected = {
        "eigenvalues": [1 + xi] * (n - 1) + [(1 + xi) ** 2],
        "connection": _conn(labels, conn),
        "sectional": {
            (labels[i], labels[j]): k for i in range(n) for j in range(i + 1, n)
        },
        "classification": {"douglas": True, "berwald": False},
    }
    return CatalogEntry("almost_abelian", {"n": n, "xi": xi}, alg, h, X, expected)


def abelian(n: int = 3, X=(0.2, 0.0, 0.0)) -> CatalogEntry:
    if int(n) != n or n < 1:
        raise ParameterError(f"abelian needs an integer n >= 1, got {n}")
    n = int(n)
    x = np.asarray(X, dtype=float)
    if x.shape != (n,):
        raise ParameterError(f"abelian needs {n} coordinates for X, got {x.shape}")
    norm = float(np.linalg.norm(x))
    if not 0 < norm < 0.5:
        raise ParameterError(f"abelian needs 0 < |X| < 1/2, got {norm}")
    alg = LieAlgebraSpec(np.zeros((n, n, n)))
    h = MetricTensor.identity(n)
    field_ = DeformationField.create(x, h)
    expected = {
        "eigenvalues": [1 + norm] * (n - 1) + [(1 + norm) ** 2],
        "connection": _conn(alg.labels, {}),
        "sectional": {
            (alg.labels[i], alg.labels[j]): 0.0 for i in range(n) for j in range(i + 1, n)
        },
        "classification": {"douglas": True, "berwald": True},
    }
    return CatalogEntry("abelian", {"n": n, "X": [float(v) for v in x]}, alg, h, field_, expected)


def su2_plus_line(c: float = 0.3) -> CatalogEntry:
    """``su(2) + R`` with the bi-invariant metric and ``X = c e4`` central."""
    if not 0 < c < 0.5:
        raise ParameterError(f"su2_plus_line needs 0 < c < 1/2, got {c}")
    labels = ("e1", "e2", "e3", "e4")
    alg = LieAlgebraSpec.from_brackets(
        4, [(0, 1, 2, 1.0), (1, 2, 0, 1.0), (0, 2, 1, -1.0)], labels
    )
    h = MetricTensor.identity(4)
    X = DeformationField.create([0.0, 0.0, 0.0, c], h)
    # bi-invariant metric: nabla_a b = [a, b] / 2 for both h and g_X
    half = {
        ("e1", "e2"): {"e3": 0.5},
        ("e2", "e1"): {"e3": -0.5},
        ("e2", "e3"): {"e1": 0.5},
        ("e3", "e2"): {"e1": -0.5},
        ("e3", "e1"): {"e2": 0.5},
        ("e1", "e3"): {"e2": -0.5},
    }
    k_bar = {
        (labels[i], labels[j]): (0.25 if j < 3 else 0.0) for i in range(4) for j in range(i + 1, 4)
    }
    expected = {
        "eigenvalues": [1 + c] * 3 + [(1 + c) ** 2],
        "connection": _conn(labels, half),
        "sectional": {p: v / (1 + c) for p, v in k_bar.items()},
        "sectional_h": k_bar,
        "classification": {"douglas": True, "berwald": True},
        # pole e1, flag span{e1, e2}
        "flag": {"F": 0.25, "F~": 0.25 / (1 + c)},
    }
    return CatalogEntry("su2_plus_line", {"c": c}, alg, h, X, expected)


CATALOG: Dict[str, Callable[..., CatalogEntry]] = {
    "heisenberg": heisenberg,
    "almost_abelian": almost_abelian,
    "abelian": abelian,
    "su2_plus_line": su2_plus_line,
}

# CLI parameter names -> constructor keywords, with their parsers
PARAMETERS = {
    "heisenberg": {"lambda": ("lam", float), "c": ("c", float)},
    "almost_abelian": {"n": ("n", int), "xi": ("xi", float)},
    "abelian": {
        "n": ("n", int),
        "X": ("X", lambda s: [float(t) for t in s.split(",")]),
    },
    "su2_plus_line": {"c": ("c", float)},
}


def build(name: str, **params) -> CatalogEntry:
    try:
        ctor = CATALOG[name]
    except KeyError:
        raise ParameterError(
            f"unknown catalog entry {name!r}; choose from {', '.join(sorted(CATALOG))}"
        ) from None
    return ctor(**params)
