"""JSON spec files describing an (algebra, metric, field) triple.

Example::

    {
      "dim": 3,
      "labels": ["x", "y", "z"],
      "brackets": [{"i": 1, "j": 2, "k": 3, "value": 1.0}],
      "metric": "identity",
      "X": [0.0, 0.0, 0.3],
      "tolerance": 1e-9
    }

Indices are 1-based and every bracket entry must have ``i < j``; the
antisymmetric completion is implicit. ``metric`` is either ``"identity"`` or
a list of ``dim`` rows; a slightly asymmetric matrix is symmetrized and the
asymmetry recorded.

Loading happens in two stages. :func:`parse_spec` checks only the format and
raises :class:`SpecParseError`. :func:`validate_spec` evaluates the
mathematical invariants in a fixed order without raising, and
:func:`build_spec` turns a valid spec into library objects.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from numbers import Real
from pathlib import Path
from typing import List, Optional, Tuple

import numpy as np

from .algebra import DEFAULT_TOL, LieAlgebraSpec, MetricTensor
from .catalog import CatalogEntry
from .errors import GeometryError
from .randers import DeformationField

FIELDS = ("dim", "labels", "brackets", "metric", "X", "tolerance")


class SpecParseError(GeometryError):
    """The file is not a well-formed spec."""


@dataclass(frozen=True)
class RawSpec:
    dim: int
    labels: Tuple[str, ...]
    brackets: Tuple[Tuple[int, int, int, float], ...]  # 0-based
    metric: np.ndarray
    X: np.ndarray
    tolerance: float
    metric_is_identity: bool

    @property
    def structure(self) -> np.ndarray:
        c = np.zeros((self.dim,) * 3)
        for i, j, k, v in self.brackets:
            c[i, j, k] += v
            c[j, i, k] -= v
        return c


def _number(value, what) -> float:
    if isinstance(value, bool) or not isinstance(value, Real):
        raise SpecParseError(f"{what} must be a number, got {value!r}")
    out = float(value)
    if not np.isfinite(out):
        raise SpecParseError(f"{what} must be finite")
    return out


def parse_spec(text: str) -> RawSpec:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SpecParseError(f"invalid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise SpecParseError("top level must be an object")
    unknown = sorted(set(doc) - set(FIELDS))
    if unknown:
        raise SpecParseError(f"unknown field(s): {', '.join(unknown)}")
    for key in ("dim", "brackets", "metric", "X"):
        if key not in doc:
            raise SpecParseError(f"missing required field {key!r}")

    dim = doc["dim"]
    if isinstance(dim, bool) or not isinstance(dim, int) or dim < 1:
        raise SpecParseError(f"dim must be a positive integer, got {dim!r}")

    labels = doc.get("labels")
    if labels is None:
        labels = [f"e{i + 1}" for i in range(dim)]
    if not isinstance(labels, list) or len(labels) != dim or not all(isinstance(s, str) for s in labels):
        raise SpecParseError(f"labels must be a list of {dim} strings")
    if len(set(labels)) != dim:
        raise SpecParseError("labels must be distinct")

    if not isinstance(doc["brackets"], list):
        raise SpecParseError("brackets must be a list")
    brackets = []
    for n, entry in enumerate(doc["brackets"]):
        if not isinstance(entry, dict) or set(entry) != {"i", "j", "k", "value"}:
            raise SpecParseError(f"bracket #{n + 1} must have exactly the keys i, j, k, value")
        idx = []
        for key in ("i", "j", "k"):
            v = entry[key]
            if isinstance(v, bool) or not isinstance(v, int) or not 1 <= v <= dim:
                raise SpecParseError(f"bracket #{n + 1}: index {key}={v!r} outside 1..{dim}")
            idx.append(v - 1)
        if idx[0] >= idx[1]:
            raise SpecParseError(f"bracket #{n + 1}: need i < j, got i={idx[0] + 1}, j={idx[1] + 1}")
        brackets.append((idx[0], idx[1], idx[2], _number(entry["value"], f"bracket #{n + 1} value")))

    metric = doc["metric"]
    identity = metric == "identity"
    if identity:
        m = np.eye(dim)
    else:
        if (
            not isinstance(metric, list)
            or len(metric) != dim
            or not all(isinstance(row, list) and len(row) == dim for row in metric)
        ):
            raise SpecParseError(f'metric must be "identity" or a {dim}x{dim} list of rows')
        m = np.array([[_number(v, "metric entry") for v in row] for row in metric])

    x = doc["X"]
    if not isinstance(x, list) or len(x) != dim:
        raise SpecParseError(f"X must be a list of {dim} numbers")
    x = np.array([_number(v, "X entry") for v in x])

    tol = doc.get("tolerance", DEFAULT_TOL)
    tol = _number(tol, "tolerance")
    if not tol > 0:
        raise SpecParseError("tolerance must be positive")

    return RawSpec(dim, tuple(labels), tuple(brackets), m, x, tol, identity)


def load_spec(path) -> RawSpec:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise SpecParseError(f"cannot read {path}: {exc.strerror}") from None
    return parse_spec(text)


@dataclass(frozen=True)
class Check:
    name: str
    value: float
    ok: bool
    detail: str


def validate_spec(raw: RawSpec, require_tilde: bool = False, tol: Optional[float] = None) -> List[Check]:
    """Evaluate every invariant in a fixed order; the first failing one is the culprit."""
    tol = raw.tolerance if tol is None else tol
    checks = []
    c = raw.structure
    scale = float(np.abs(c).max()) or 1.0
    jac = (
        np.einsum("ijl,lkm->ijkm", c, c)
        + np.einsum("jkl,lim->ijkm", c, c)
        + np.einsum("kil,ljm->ijkm", c, c)
    )
    jres = float(np.abs(jac).max())
    checks.append(Check("Jacobi", jres, jres <= tol * scale**2, f"Jacobi identity residual {jres:.6g}"))

    m = raw.metric
    asym = float(np.abs(m - m.T).max())
    sym = 0.5 * (m + m.T)
    checks.append(Check("metric symmetry", asym, True, f"metric asymmetry {asym:.6g} (symmetrized)"))
    evals = np.linalg.eigvalsh(sym)
    top = float(np.abs(evals).max()) or 1.0
    checks.append(
        Check("SPD", float(evals[0]), bool(evals[0] > tol * top),
              f"metric smallest eigenvalue {evals[0]:.6g}")
    )
    if checks[-1].ok:
        norm = float(np.sqrt(max(raw.X @ sym @ raw.X, 0.0)))
    else:
        norm = float("nan")
    checks.append(Check("X nonzero", norm, bool(norm > tol), f"|X| = {norm:.12g}"))
    checks.append(Check("Randers bound", norm, bool(norm < 1.0), f"|X| = {norm:.12g} must be < 1"))
    gxn = norm * (1.0 + norm)
    checks.append(
        Check(
            "g_X bound",
            gxn,
            bool(gxn < 1.0) or not require_tilde,
            f"g_X bound: sqrt(g_X(X, X)) = |X|(1+|X|) = {gxn:.12g} must be < 1",
        )
    )
    return checks


def first_failure(checks: List[Check]) -> Optional[Check]:
    return next((ch for ch in checks if not ch.ok), None)


def build_spec(raw: RawSpec, tol: Optional[float] = None):
    """``(algebra, metric, field)`` from a spec that passed :func:`validate_spec`."""
    tol = raw.tolerance if tol is None else tol
    alg = LieAlgebraSpec(raw.structure, raw.labels, tol)
    h, _ = MetricTensor.symmetrized(raw.metric, tol)
    X = DeformationField.create(raw.X, h, tol)
    return alg, h, X


def spec_document(alg: LieAlgebraSpec, h: MetricTensor, X: DeformationField,
                  tolerance: Optional[float] = None) -> dict:
    n = alg.dim
    if np.array_equal(h.g, np.eye(n)):
        metric = "identity"
    else:
        metric = [[float(v) for v in row] for row in h.g]
    return {
        "dim": n,
        "labels": list(alg.labels),
        "brackets": [
            {"i": i + 1, "j": j + 1, "k": k + 1, "value": v} for i, j, k, v in alg.sparse_brackets()
        ],
        "metric": metric,
        "X": [float(v) for v in X.X],
        "tolerance": alg.tol if tolerance is None else tolerance,
    }


def dump_spec(entry: CatalogEntry) -> str:
    """Serialize a catalog entry as spec-file text (deterministic)."""
    return json.dumps(spec_document(*entry.triple), indent=2) + "\n"

