"""Assemble the full report for one (algebra, metric, field) triple.

The report is a plain JSON-compatible dict; :func:`to_json` and
:func:`to_table` are two renderings of the same value. Every float is rounded
to 12 significant digits before rendering, so output is byte-stable.
"""
from __future__ import annotations

import json
from typing import Iterable

import numpy as np

from . import curvature as cv
from .algebra import LieAlgebraSpec, MetricTensor
from .classification import classify, classify_tilde
from .errors import PreconditionError
from .randers import (
    DeformationField,
    adapted_frame,
    deformed_metric,
    evaluate_F_tilde_closed_form,
    make_F_tilde,
)
from .specfile import spec_document

SIG_DIGITS = 12


def _num(x) -> float:
    v = float(f"{float(x):.{SIG_DIGITS}g}")
    return 0.0 if v == 0 else v


def clean(obj):
    """Round floats and convert numpy scalars/arrays, recursively."""
    if isinstance(obj, dict):
        return {str(k): clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [clean(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return clean(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return None if np.isnan(obj) else _num(obj)
    return obj


def _classification(rep):
    return {
        "douglas": rep.douglas,
        "berwald": rep.berwald,
        "douglas_residual": rep.douglas_residual,
        "berwald_residual": rep.berwald_residual,
        "douglas_normalized": rep.douglas_normalized,
        "berwald_normalized": rep.berwald_normalized,
    }


def _connection(gamma: np.ndarray, labels) -> list:
    n = len(labels)
    return [
        {"i": labels[i], "j": labels[j], "coefficients": gamma[i, j]}
        for i in range(n)
        for j in range(n)
    ]


def _sectional(rep: cv.SectionalReport, labels) -> list:
    return [{"i": labels[i], "j": labels[j], "K": k} for (i, j), k in sorted(rep.entries.items())]


def build_report(
    alg: LieAlgebraSpec,
    h: MetricTensor,
    X: DeformationField,
    metric: str = "both",
    flag: bool = False,
    metric_asymmetry: float = 0.0,
) -> dict:
    """Compute everything and return the report as a JSON-ready dict.

    ``metric`` selects which connection/sectional tables appear (``h``,
    ``gx`` or ``both``). With ``flag=True`` a non-Berwald input raises
    :class:`PreconditionError`; otherwise the flag block simply appears
    whenever the metric is Berwald.
    """
    if metric not in ("h", "gx", "both"):
        raise ValueError(f"metric must be h, gx or both, got {metric!r}")
    X.check_tilde_bound()
    gx = deformed_metric(h, X)
    frame = adapted_frame(alg, h, X)
    fl = list(frame.labels)
    il = list(alg.labels)

    cls_f = classify(alg, h, X)
    cls_t = classify_tilde(alg, h, X)
    if flag and not cls_f.berwald:
        raise PreconditionError(
            "flag curvature requires Berwald type: "
            f"douglas={cls_f.douglas} (residual {cls_f.douglas_residual:.6g}), "
            f"berwald residual {cls_f.berwald_residual:.6g}"
        )

    nab, nab_bar, k, k_bar = cv.metric_pipelines(frame, h, gx)
    closed_conn = cv.connection_gX_closed_form(frame)
    closed_k = cv.sectional_curvature_closed_form(frame)
    rt = cv.riemann_tensor(nab)
    rt_bar = cv.riemann_tensor(nab_bar)

    doc = {
        "input": spec_document(alg, h, X),
        "validation": {
            "jacobi_residual": alg.jacobi_residual(),
            "metric_asymmetry": metric_asymmetry,
            "metric_min_eigenvalue": float(np.linalg.eigvalsh(h.g)[0]),
            "x_norm": X.norm_h,
            "gx_norm": X.gx_norm,
            "randers_bound": X.norm_h < 1.0,
            "gx_bound": X.gx_norm < 1.0,
        },
        "frame": {
            "labels": fl,
            "i0": fl[frame.i0],
            "eigenvalues": frame.eigenvalues,
            "vectors": frame.basis,
        },
        "classification": {"F": _classification(cls_f), "F_tilde": _classification(cls_t)},
    }

    conn, sect = {}, {}
    if metric in ("h", "both"):
        conn["h"] = {
            "frame": _connection(nab_bar.gamma, fl),
            "input_basis": _connection(nab_bar.in_input_basis(frame), il),
        }
        sect["h"] = _sectional(k_bar, fl)
    if metric in ("gx", "both"):
        conn["g_X"] = {
            "frame": _connection(nab.gamma, fl),
            "input_basis": _connection(nab.in_input_basis(frame), il),
        }
        sect["g_X"] = _sectional(k, fl)
    doc["connection"] = conn
    doc["sectional"] = sect

    if cls_f.berwald:
        kf = cv.flag_curvature(frame, h, X, "F")
        kt = cv.flag_curvature(frame, h, X, "F~")
        doc["flag"] = [
            {
                "pole": fl[j],
                "partner": fl[i],
                "F": kf.entries[(j, i)],
                "F_tilde": kt.entries[(j, i)],
                "predicted_ratio": cv.flag_ratio(frame, j),
            }
            for (j, i) in sorted(kf.entries)
        ]

    doc["cross_checks"] = _cross_checks(alg, h, X, frame, cls_f, cls_t, nab, nab_bar,
                                        closed_conn, k, closed_k, rt, rt_bar)
    return clean(doc)


def _cross_checks(alg, h, X, frame, cls_f, cls_t, nab, nab_bar, closed_conn, k, closed_k, rt, rt_bar):
    ft = make_F_tilde(h, X)
    probes = np.vstack([np.eye(alg.dim), frame.basis, -frame.basis])
    two_path = max(
        abs(ft(y) - evaluate_F_tilde_closed_form(h, X, y)) / max(abs(ft(y)), 1e-300) for y in probes
    )
    checks = {
        "connection_closed_form_vs_koszul": float(np.abs(closed_conn.gamma - nab.gamma).max()),
        "sectional_closed_form_vs_pipeline": closed_k.max_abs_diff(k),
        "F_tilde_two_path_relative": two_path,
        "classification_match": cls_f.verdicts == cls_t.verdicts,
        "torsion_residual": max(nab.torsion_residual(), nab_bar.torsion_residual()),
        "metric_compatibility_residual": max(nab.metric_residual(), nab_bar.metric_residual()),
        "curvature_antisymmetry_residual": max(rt.antisymmetry_residual(), rt_bar.antisymmetry_residual()),
        "bianchi_residual": max(rt.bianchi_residual(), rt_bar.bianchi_residual()),
        "pair_symmetry_residual": max(rt.pair_symmetry_residual(), rt_bar.pair_symmetry_residual()),
        "douglas_connection_relation": None,
        "douglas_sectional_closed_form": None,
        "berwald_sectional_ratio": None,
        "berwald_i0_curvature": None,
        "flag_ratio_residual": None,
    }
    if cls_f.douglas:
        rel = cv.connection_relation_douglas(frame, h, X)
        checks["douglas_connection_relation"] = rel.residual
        dk = cv.sectional_douglas_closed_form(frame, h, X)
        fl = frame.labels
        checks["douglas_sectional_closed_form"] = [
            {"i": fl[i], "j": fl[j], "closed_form": v, "pipeline": k.entries[(i, j)],
             "deviation": v - k.entries[(i, j)]}
            for (i, j), v in sorted(dk.entries.items())
        ]
    if cls_f.berwald:
        br = cv.sectional_ratio_berwald(frame, h, X)
        checks["berwald_sectional_ratio"] = br.ratio_residual
        checks["berwald_i0_curvature"] = br.i0_residual
        kf = cv.flag_curvature(frame, h, X, "F")
        kt = cv.flag_curvature(frame, h, X, "F~")
        checks["flag_ratio_residual"] = max(
            (abs(kt.entries[p] - cv.flag_ratio(frame, p[0]) * kf.entries[p]) for p in kf.entries),
            default=0.0,
        )
    return checks


def to_json(doc: dict) -> str:
    return json.dumps(doc, indent=2) + "\n"


def _fmt(v) -> str:
    if v is None:
        return "-"
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return f"{v:.{SIG_DIGITS}g}"
    return str(v)


def _rows(header: Iterable[str], rows, widths) -> list:
    lines = ["  " + "".join(f"{h:<{w}}" for h, w in zip(header, widths)).rstrip()]
    for row in rows:
        lines.append("  " + "".join(f"{_fmt(c):<{w}}" for c, w in zip(row, widths)).rstrip())
    return lines


def to_table(doc: dict) -> str:
    """Fixed-width human rendering of a report dict."""
    labels = doc["frame"]["labels"] + doc["input"]["labels"]
    lw = max(8, max(len(s) for s in labels) + 2)
    nw = 22
    out = []

    out.append("== validation ==")
    out += _rows(("check", "value"), doc["validation"].items(), (24, nw))

    out.append("== adapted frame ==")
    fr = doc["frame"]
    out += _rows(
        ("index", "label", "eigenvalue"),
        [(i + 1, lab + (" (X)" if lab == fr["i0"] and i == len(fr["labels"]) - 1 else ""), ev)
         for i, (lab, ev) in enumerate(zip(fr["labels"], fr["eigenvalues"]))],
        (8, lw + 4, nw),
    )

    out.append("== classification ==")
    cl = doc["classification"]
    out += _rows(
        ("metric", "douglas", "berwald", "douglas_residual", "berwald_residual"),
        [(name, c["douglas"], c["berwald"], c["douglas_residual"], c["berwald_residual"])
         for name, c in cl.items()],
        (10, 10, 10, nw, nw),
    )

    for metric, tables in doc["connection"].items():
        for basis, entries in tables.items():
            out.append(f"== connection {metric} ({basis.replace('_', ' ')}) ==")
            names = fr["labels"] if basis == "frame" else doc["input"]["labels"]
            out += _rows(
                ["i", "j"] + [f"[{n}]" for n in names],
                [[e["i"], e["j"]] + e["coefficients"] for e in entries],
                [lw, lw] + [nw] * len(names),
            )

    for metric, entries in doc["sectional"].items():
        out.append(f"== sectional curvature {metric} ==")
        out += _rows(("i", "j", "K"), [(e["i"], e["j"], e["K"]) for e in entries], (lw, lw, nw))

    if "flag" in doc:
        out.append("== flag curvature (pole, flag span{pole, partner}) ==")
        out += _rows(
            ("pole", "partner", "K^F", "K^F~", "predicted ratio"),
            [(e["pole"], e["partner"], e["F"], e["F_tilde"], e["predicted_ratio"]) for e in doc["flag"]],
            (lw, lw, nw, nw, nw),
        )

    out.append("== cross checks ==")
    simple = [(k, v) for k, v in doc["cross_checks"].items() if not isinstance(v, list)]
    out += _rows(("check", "value"), simple, (36, nw))
    dk = doc["cross_checks"].get("douglas_sectional_closed_form")
    if dk:
        out.append("== douglas closed-form sectional curvature vs pipeline ==")
        out += _rows(
            ("i", "j", "closed form", "pipeline", "deviation"),
            [(e["i"], e["j"], e["closed_form"], e["pipeline"], e["deviation"]) for e in dk],
            (lw, lw, nw, nw, nw),
        )
    return "\n".join(out) + "\n"
