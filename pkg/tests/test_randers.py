import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from randers_lie import (
    AdaptedFrame,
    DeformationField,
    DegenerateFieldError,
    LieAlgebraSpec,
    MetricTensor,
    ValidityError,
    adapted_frame,
    change_basis,
    deformed_metric,
    evaluate_F,
    evaluate_F_tilde,
    evaluate_F_tilde_closed_form,
    koszul_connection,
    phi_map,
)
from randers_lie import catalog
from randers_lie.randers import make_F_tilde
from randoms import instances, random_instance


@pytest.fixture
def heis():
    return catalog.heisenberg(1.0, 0.3)


def test_phi_heisenberg(heis):
    assert np.allclose(phi_map(heis.metric, heis.field), np.diag([1.3, 1.3, 1.69]))


def test_phi_almost_abelian():
    e = catalog.almost_abelian(3, 0.4)
    assert np.allclose(phi_map(e.metric, e.field), np.diag([1.96, 1.4, 1.4]))


def test_phi_perpendicular_and_self_adjoint():
    for inst in instances(21, 30):
        h, X = inst.h, inst.X
        phi = phi_map(h, X)
        a = X.norm_h
        # any z perpendicular to X is scaled by 1 + |X|
        z = np.random.default_rng(0).normal(size=h.dim)
        z -= h.inner(z, X.X) / a**2 * X.X
        assert np.allclose(phi @ z, (1 + a) * z)
        assert np.allclose(h.g @ phi, (h.g @ phi).T, atol=1e-12)


def test_eigenvalue_law_1000():
    rng = np.random.default_rng(22)
    worst = 0.0
    for _ in range(1000):
        inst = random_instance(rng)
        a = inst.X.norm_h
        n = inst.alg.dim
        # phi is h-self-adjoint; its spectrum is that of a similar symmetric matrix
        L = np.linalg.cholesky(inst.h.g)
        sym = L.T @ phi_map(inst.h, inst.X) @ np.linalg.inv(L.T)
        ev = np.sort(np.linalg.eigvalsh(0.5 * (sym + sym.T)))
        want = np.sort([1 + a] * (n - 1) + [(1 + a) ** 2])
        worst = max(worst, np.abs(ev - want).max())
    assert worst < 1e-9


def test_degenerate_and_invalid_fields():
    h = MetricTensor.identity(3)
    with pytest.raises(DegenerateFieldError):
        DeformationField.create([0, 0, 0], h)
    with pytest.raises(ValidityError):
        DeformationField.create([1.0, 0, 0], h)
    X = DeformationField.create([0.9, 0, 0], h)
    assert evaluate_F(h, X, [0, 1, 0]) == pytest.approx(1.0)
    with pytest.raises(ValidityError, match="g_X bound"):
        make_F_tilde(h, X)


def test_gx_heisenberg(heis):
    gx = deformed_metric(heis.metric, heis.field)
    assert np.allclose(gx.g, np.diag([1.3, 1.3, 1.69]))
    g2 = deformed_metric(*catalog.heisenberg(2.0, 0.1).triple[1:])
    assert np.allclose(g2.g, np.diag(catalog.heisenberg(2.0, 0.1).expected["gx_diagonal"]))


def test_gx_matches_phi_and_definition():
    for inst in instances(23, 100):
        gx = deformed_metric(inst.h, inst.X)
        assert np.allclose(gx.g, inst.h.g @ phi_map(inst.h, inst.X), atol=1e-10)
        assert np.allclose(gx.g, oracles.gx_matrix(inst.h.g, inst.X.X), atol=1e-10)


def test_gx_perpendicular_scaling():
    h = MetricTensor.identity(3)
    X = DeformationField.create([0.2, 0.0, 0.0], h)
    gx = deformed_metric(h, X)
    assert gx.inner([0, 1, 0.5], [0, 2, -1]) == pytest.approx(1.2 * 1.5)


def test_frame_heisenberg(heis):
    fr = adapted_frame(*heis.triple)
    assert fr.labels == ("x", "y", "z")
    assert fr.i0 == 2
    assert np.allclose(fr.basis, np.eye(3))
    assert np.allclose(fr.eigenvalues, [1.3, 1.3, 1.69])


def test_frame_reorders_when_x_is_first():
    e = catalog.almost_abelian(3, 0.4)
    fr = adapted_frame(*e.triple)
    assert fr.labels == ("u2", "u3", "b")
    assert np.allclose(fr.eigenvalues, [1.4, 1.4, 1.96])


def test_frame_generic_example_eigenvectors():
    alg = LieAlgebraSpec(np.zeros((3, 3, 3)))
    h = MetricTensor.identity(3)
    X = DeformationField.create([0.2, 0.2, 0.1], h)
    fr = adapted_frame(alg, h, X)
    phi = phi_map(h, X)
    assert np.allclose(fr.basis @ fr.basis.T, np.eye(3), atol=1e-12)
    for vec, lam in zip(fr.basis, fr.eigenvalues):
        assert np.allclose(phi @ vec, lam * vec, atol=1e-12)
    assert fr.eigenvalues[-1] == pytest.approx(1.3**2)
    # dense eigensolver agrees on the spectrum
    assert np.allclose(np.sort(np.linalg.eigvalsh(phi)), np.sort(fr.eigenvalues))


def test_frame_invariants_random():
    for inst in instances(24, 200):
        fr = adapted_frame(inst.alg, inst.h, inst.X)
        a = inst.X.norm_h
        gx = deformed_metric(inst.h, inst.X)
        assert np.allclose(inst.h.gram(fr.basis), np.eye(fr.dim), atol=1e-9)
        assert np.allclose(gx.gram(fr.basis), np.diag(fr.eigenvalues), atol=1e-9)
        assert fr.eigenvalues[fr.i0] == pytest.approx((1 + a) ** 2, abs=1e-9)
        assert np.allclose(np.delete(fr.eigenvalues, fr.i0), 1 + a, atol=1e-9)
        assert np.allclose(fr.basis[fr.i0], inst.X.X / a, atol=1e-9)
        # frame structure constants reproduce the brackets
        c = inst.alg.structure
        for i in range(fr.dim):
            for j in range(fr.dim):
                lhs = oracles.bracket(c, fr.basis[i], fr.basis[j])
                assert np.allclose(lhs, fr.alpha[i, j] @ fr.basis, atol=1e-9 * max(1, inst.alg.scale))


def test_frame_choice_independence():
    rng = np.random.default_rng(25)
    for inst in instances(26, 50):
        fr = adapted_frame(inst.alg, inst.h, inst.X)
        n = fr.dim
        q, _ = np.linalg.qr(rng.normal(size=(n - 1, n - 1)))
        basis2 = fr.basis.copy()
        basis2[: n - 1] = q @ fr.basis[: n - 1]
        fr2 = AdaptedFrame(basis2, fr.eigenvalues, fr.i0, change_basis(inst.alg, basis2), fr.x_norm)
        gx = deformed_metric(inst.h, inst.X)
        g1 = fr.metric_to_input(gx.gram(fr.basis))
        g2 = fr2.metric_to_input(gx.gram(fr2.basis))
        assert np.allclose(g1, g2, atol=1e-9)
        assert np.allclose(fr.metric_to_input(np.diag(fr.eigenvalues)), gx.g, atol=1e-9)
        c1 = koszul_connection(fr, gx).in_input_basis(fr)
        c2 = koszul_connection(fr2, gx).in_input_basis(fr2)
        assert np.allclose(c1, c2, atol=1e-9 * max(1, inst.alg.scale))


def test_F_examples(heis):
    assert evaluate_F(heis.metric, heis.field, [0, 0, 1]) == pytest.approx(1.3)
    h = MetricTensor.identity(3)
    X = DeformationField.create([0.3, 0, 0], h)
    assert evaluate_F(h, X, [-0.3, 0, 0]) == pytest.approx(0.21)
    assert evaluate_F(h, X, [0, 3, 4]) == pytest.approx(5.0)


def test_F_tilde_examples(heis):
    h, X = heis.metric, heis.field
    for f in (evaluate_F_tilde, evaluate_F_tilde_closed_form):
        assert f(h, X, [1, 0, 0]) == pytest.approx(np.sqrt(1.3), abs=1e-12)
        assert f(h, X, [0, 0, 1]) == pytest.approx(1.807, abs=1e-12)
    assert evaluate_F_tilde(h, X, [0, 3, 4]) != pytest.approx(5.0)
    assert evaluate_F_tilde(h, X, [3, 4, 0]) == pytest.approx(np.sqrt(1.3) * 5)


def test_F_tilde_two_path_random():
    rng = np.random.default_rng(27)
    for inst in instances(28, 100):
        ft = make_F_tilde(inst.h, inst.X)
        for y in rng.normal(size=(10, inst.alg.dim)):
            a, b = ft(y), evaluate_F_tilde_closed_form(inst.h, inst.X, y)
            assert abs(a - b) <= 1e-9 * abs(a)
            assert a == pytest.approx(oracles.randers_F_tilde(inst.h.g, inst.X.X, y), rel=1e-12)
            assert a > 0


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 2**31))
def test_F_tilde_triangle_and_homogeneity(seed):
    rng = np.random.default_rng(seed)
    inst = random_instance(rng)
    ft = make_F_tilde(inst.h, inst.X)
    y1, y2 = rng.normal(size=(2, inst.alg.dim))
    assert ft(y1 + y2) <= ft(y1) + ft(y2) + 1e-9
    t = rng.uniform(0.1, 10)
    assert ft(t * y1) == pytest.approx(t * ft(y1), rel=1e-12)
    assert evaluate_F(inst.h, inst.X, t * y1) == pytest.approx(t * evaluate_F(inst.h, inst.X, y1))
