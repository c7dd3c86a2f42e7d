import numpy as np
import pytest

from randers_lie import ParameterError, adapted_frame, classify
from randers_lie import catalog
from randers_lie.report import build_report, to_json
from randers_lie.specfile import build_spec, dump_spec, parse_spec, validate_spec


def test_heisenberg_goldens():
    assert catalog.heisenberg(1, 0.3).expected["sectional"][("x", "y")] == pytest.approx(-0.75)
    assert catalog.heisenberg(2, 0.1).expected["sectional"][("x", "y")] == pytest.approx(-0.1875)
    neg = catalog.heisenberg(1, -0.25)
    assert neg.field.norm_h == pytest.approx(0.25)
    assert neg.expected["eigenvalues"] == pytest.approx([1.25, 1.25, 1.5625])
    assert not classify(*catalog.heisenberg(1, 0.3).triple).douglas


def test_almost_abelian_goldens():
    e = catalog.almost_abelian(3, 0.4)
    assert e.expected["sectional"][("u2", "u3")] == pytest.approx(-0.510204, abs=1e-6)
    assert np.allclose(e.expected["connection"][("u2", "b")], [0, -1, 0])
    assert classify(*e.triple).verdicts == (True, False)


def test_abelian_goldens():
    e = catalog.abelian(3, (0.2, 0, 0))
    assert sorted(adapted_frame(*e.triple).eigenvalues) == pytest.approx([1.2, 1.2, 1.44])
    assert classify(*catalog.abelian(2, (0.1, 0.1)).triple).verdicts == (True, True)


@pytest.mark.parametrize(
    "name, params",
    [
        ("heisenberg", {"lam": 0.0}),
        ("heisenberg", {"c": 0.5}),
        ("heisenberg", {"c": 0.0}),
        ("almost_abelian", {"xi": 0.6}),
        ("almost_abelian", {"n": 1}),
        ("abelian", {"n": 2, "X": (0.0, 0.0)}),
        ("abelian", {"n": 2, "X": (0.1, 0.1, 0.1)}),
        ("su2_plus_line", {"c": -0.1}),
    ],
)
def test_parameter_errors(name, params):
    with pytest.raises(ParameterError):
        catalog.build(name, **params)


def test_unknown_entry():
    with pytest.raises(ParameterError, match="unknown catalog entry"):
        catalog.build("sl2")


@pytest.mark.parametrize("name", sorted(catalog.CATALOG))
def test_entries_validate_and_round_trip(name):
    entry = catalog.build(name)
    raw = parse_spec(dump_spec(entry))
    assert all(ch.ok for ch in validate_spec(raw, require_tilde=True))
    alg, h, X = build_spec(raw)
    assert np.array_equal(alg.structure, entry.algebra.structure)
    assert np.array_equal(h.g, entry.metric.g)
    assert np.array_equal(X.X, entry.field.X)
    assert to_json(build_report(alg, h, X)) == to_json(build_report(*entry.triple))
