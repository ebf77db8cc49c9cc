import math

import numpy as np
import pytest
from hypothesis import given

from pu31.errors import ZeroVector
from pu31.hermitian import (
    BALL,
    SIEGEL,
    Sign,
    eigen4,
    herm_gram,
    herm_inner,
    normalize_det,
    unitarity_defect,
    vector_sign,
)
from pu31.modular import M0, ModuliPoint, build_generators
from strategies import nonzero_scalars, vectors

E = np.eye(4, dtype=complex)


class TestHermInner:
    def test_first_last_pairing(self):
        assert herm_inner(E[0], E[3], SIEGEL) == 1

    def test_identity_block(self):
        assert herm_inner(E[1], E[1], SIEGEL) == 1

    def test_horospherical_lift(self):
        q = np.array([-1, 0, 0, 1], dtype=complex)
        assert herm_inner(q, q, SIEGEL) == pytest.approx(-2)

    def test_ball_form_last_coordinate_negative(self):
        assert herm_inner(E[3], E[3], BALL) == -1

    def test_linear_in_first_antilinear_in_second(self):
        z, w = E[0] + E[3], E[0]
        assert herm_inner(2j * z, w) == pytest.approx(2j * herm_inner(z, w))
        assert herm_inner(z, 2j * w) == pytest.approx(-2j * herm_inner(z, w))

    @given(vectors, vectors)
    def test_conjugate_symmetry(self, z, w):
        for form in (SIEGEL, BALL):
            lhs = herm_inner(w, z, form)
            rhs = np.conj(herm_inner(z, w, form))
            assert abs(lhs - rhs) <= 1e-13 * max(1.0, abs(lhs))

    def test_gram_table_matches_pairwise(self, rng):
        P = rng.normal(size=(3, 4)) + 1j * rng.normal(size=(3, 4))
        Q = rng.normal(size=(5, 4)) + 1j * rng.normal(size=(5, 4))
        G = herm_gram(P, Q)
        for i in range(3):
            for j in range(5):
                assert G[i, j] == pytest.approx(herm_inner(P[i], Q[j]), abs=1e-12)


class TestVectorSign:
    def test_origin_lift_is_null(self):
        assert vector_sign(E[3]).value is Sign.NULL

    def test_positive(self):
        assert vector_sign(E[1]).value is Sign.POSITIVE

    def test_negative(self):
        s = vector_sign(np.array([-1, 0, 0, 1]))
        assert s.value is Sign.NEGATIVE
        assert s.magnitude == pytest.approx(-2)

    def test_zero_vector_rejected(self):
        with pytest.raises(ZeroVector):
            vector_sign(np.zeros(4))

    def test_null_band_is_relative(self):
        v = np.array([1e-12, 0, 0, 1])
        assert vector_sign(v, tol=1e-9).value is Sign.NULL
        assert vector_sign(v, tol=1e-13).value is Sign.POSITIVE

    @given(vectors, nonzero_scalars)
    def test_sign_invariant_under_scaling(self, z, c):
        if np.linalg.norm(z) < 1e-3:
            return
        a, b = vector_sign(z), vector_sign(c * z)
        if abs(a.magnitude) > 1e-6 * np.vdot(z, z).real:
            assert a.value is b.value
            assert b.magnitude == pytest.approx(abs(c) ** 2 * a.magnitude, rel=1e-9)


class TestUnitarityDefect:
    def test_first_inversion_matrix(self):
        assert unitarity_defect(M0) <= 1e-14

    def test_order_two_generator(self):
        gen = build_generators(ModuliPoint("012", 0.7, 0.3))
        assert unitarity_defect(gen.A2) <= 1e-14

    def test_perturbation_detected(self):
        m = M0.copy()
        m[1, 2] += 1e-3
        assert unitarity_defect(m) >= 1e-4

    def test_form_preservation_on_random_points(self, rng):
        for _ in range(100):
            a, b = rng.uniform(0, math.pi / 2, 2)
            for fam in ("012", "122"):
                g = build_generators(ModuliPoint(fam, a, b))
                for m in (g.A0, g.A1, g.A2, g.M2):
                    assert unitarity_defect(m) <= 1e-10


class TestNormalizeDet:
    def test_unit_determinant(self, rng):
        m = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        assert abs(np.linalg.det(normalize_det(m)) - 1) <= 1e-12

    def test_singular_rejected(self):
        with pytest.raises(ValueError):
            normalize_det(np.zeros((4, 4)))


class TestEigen4:
    def test_four_simple_eigenvalues(self):
        ed = eigen4(np.diag([2, 1j, -1j, 0.5]))
        assert ed.diagonalizable
        assert len(ed.pairs) == 4
        assert all(p.multiplicity == 1 for p in ed.pairs)
        assert sorted(ed.values, key=lambda z: (z.real, z.imag)) == pytest.approx(
            sorted([2, 1j, -1j, 0.5], key=lambda z: (z.real, z.imag))
        )

    def test_minus_order_three_generator_at_corner(self):
        gen = build_generators(ModuliPoint("012", math.pi / 2, 0.0))
        M = -gen.A1
        ed = eigen4(M)
        expected = {
            (-1 + math.sqrt(3) * 1j) / 2: 1,
            (-1 - math.sqrt(3) * 1j) / 2: 1,
            1: 2,
        }
        got = {}
        for p in ed.pairs:
            key = min(expected, key=lambda e: abs(e - p.value))
            assert abs(key - p.value) <= 1e-12
            got[key] = p.multiplicity
        assert got == expected
        vectors_ = [
            np.array([(math.sqrt(3) + 1j) / 2, 0, 0, 1]),
            np.array([0, 1, 0, 0]),
            np.array([(-math.sqrt(3) + 1j) / 2, 0, 0, 1]),
            np.array([0, 0, 1, 0]),
        ]
        values = [(-1 + math.sqrt(3) * 1j) / 2, (-1 - math.sqrt(3) * 1j) / 2, 1, 1]
        # each displayed eigenvector is an eigenvector of -A1 for some listed eigenvalue
        for v in vectors_:
            w = M @ v
            assert min(np.linalg.norm(w - lam * v) for lam in values) <= 1e-12

    def test_similarity_invariance(self, rng):
        d = np.array([2.0, 1j, -1j, 0.5])
        for _ in range(20):
            Q = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
            M = Q @ np.diag(d) @ np.linalg.inv(Q)
            vals = eigen4(M).values
            for lam in d:
                assert min(abs(lam - v) for v in vals) <= 1e-9

    def test_jordan_block_not_diagonalizable(self):
        J = np.eye(4, dtype=complex)
        J[0, 1] = 1
        ed = eigen4(J)
        assert not ed.diagonalizable
        assert len(ed.pairs) == 1 and ed.pairs[0].multiplicity == 4
        assert ed.pairs[0].geometric == 3

    def test_repeated_semisimple_eigenvalue(self):
        ed = eigen4(np.diag([1, 1, 1j, -1j]))
        assert ed.diagonalizable
        one = next(p for p in ed.pairs if abs(p.value - 1) < 1e-12)
        assert one.multiplicity == 2 and one.geometric == 2

    def test_residuals_on_generators(self, rng):
        for _ in range(30):
            a, b = rng.uniform(0, math.pi / 2, 2)
            g = build_generators(ModuliPoint("012", a, b))
            for m in (g.A1, g.P, g.Q):
                ed = eigen4(m)
                assert sum(p.multiplicity for p in ed.pairs) == 4
                assert ed.max_residual(m) <= 1e-9 * np.linalg.norm(m, 2)
