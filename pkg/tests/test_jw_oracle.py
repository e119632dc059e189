import math
from itertools import combinations

import numpy as np
import pytest

from qfdisc import (
    ValidationError,
    build_ops,
    dense_error_probs,
    dense_state,
    functional_check,
    number_operator,
    type1_log_error,
    type2_log_error,
)
from qfdisc.verification import random_hermitian_unit_spectrum


def random_unitary(rng, d):
    a = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    q, r = np.linalg.qr(a)
    return q * (np.diag(r) / np.abs(np.diag(r)))


class TestBuildOps:
    def test_single_mode_creation_matrix(self):
        ops = build_ops(1)
        np.testing.assert_array_equal(
            ops.creation_ops[0], np.array([[0.0, 0.0], [1.0, 0.0]])
        )

    def test_mode_count_guard(self):
        with pytest.raises(ValidationError):
            build_ops(0)
        with pytest.raises(ValidationError):
            build_ops(13)

    @pytest.mark.parametrize("d", range(1, 9))
    def test_car_relations_full_sweep(self, d):
        ops = build_ops(d)
        annihilators = [c.conj().T for c in ops.creation_ops]
        eye = np.eye(2**d)
        worst = 0.0
        for i, j in combinations(range(d), 2):
            ai, aj = annihilators[i], annihilators[j]
            worst = max(worst, np.linalg.norm(ai @ aj + aj @ ai, 2))
        for i in range(d):
            for j in range(d):
                anti = annihilators[i] @ ops.creation_ops[j] + ops.creation_ops[j] @ annihilators[i]
                target = eye if i == j else np.zeros_like(eye)
                worst = max(worst, np.linalg.norm(anti - target, 2))
        assert worst <= 1e-12

    def test_number_operator_spectrum_d3(self):
        n = number_operator(build_ops(3))
        ev = np.sort(np.linalg.eigvalsh(n))
        np.testing.assert_allclose(ev, [0, 1, 1, 1, 2, 2, 2, 3], atol=1e-13)

    @pytest.mark.parametrize("d", [2, 5])
    def test_number_operator_multiplicities(self, d):
        n = number_operator(build_ops(d))
        ev = np.sort(np.linalg.eigvalsh(n))
        expected = np.repeat(np.arange(d + 1), [math.comb(d, k) for k in range(d + 1)])
        np.testing.assert_allclose(ev, expected, atol=1e-12)


class TestDenseState:
    def test_single_mode(self):
        state = dense_state(np.array([[0.3]]))
        np.testing.assert_allclose(state.density, np.diag([0.7, 0.3]), atol=1e-15)

    def test_two_mode_diagonal_symbol(self):
        state = dense_state(np.diag([0.2, 0.7]))
        ev = np.sort(np.linalg.eigvalsh(state.density))
        expected = sorted(
            p1 * p2 for p1 in (0.8, 0.2) for p2 in (0.3, 0.7)
        )
        np.testing.assert_allclose(ev, expected, atol=1e-14)

    def test_density_invariants(self, rng):
        for d in (1, 3, 5):
            state = dense_state(random_hermitian_unit_spectrum(rng, d))
            rho = state.density
            assert abs(np.trace(rho).real - 1.0) < 1e-12
            assert np.abs(rho - rho.conj().T).max() < 1e-12
            assert np.linalg.eigvalsh(rho).min() > -(2**d) * np.finfo(float).eps

    def test_two_point_function_convention(self, rng):
        # Tr(rho a_i^dag a_j) must equal Q[j, i]
        for d in (2, 4, 6):
            q = random_hermitian_unit_spectrum(rng, d)
            state = dense_state(q)
            ops = build_ops(d)
            worst = 0.0
            for i in range(d):
                for j in range(d):
                    got = np.trace(
                        state.density @ ops.creation_ops[i] @ ops.creation_ops[j].conj().T
                    )
                    worst = max(worst, abs(got - q[j, i]))
            assert worst < 1e-10

    def test_plain_and_blocked_agree(self, rng):
        for d in (2, 4, 6, 8):
            q = random_hermitian_unit_spectrum(rng, d)
            plain = dense_state(q, method="plain").density
            blocked = dense_state(q, method="blocked").density
            np.testing.assert_allclose(plain, blocked, atol=1e-13)

    def test_spectrum_guard(self):
        with pytest.raises(Exception):
            dense_state(np.diag([1.4, 0.2]))


class TestFunctionalCheck:
    def test_one_point_diagonal(self):
        state = dense_state(np.diag([0.3, 0.6]))
        e1 = np.eye(2)[0]
        assert functional_check(state, [e1], [e1]) < 1e-12

    def test_mismatched_lengths_vanish(self, rng):
        state = dense_state(random_hermitian_unit_spectrum(rng, 3))
        e1 = np.eye(3)[0]
        e2 = np.eye(3)[1]
        assert functional_check(state, [e1], []) < 1e-10
        assert functional_check(state, [e1, e2], [e1]) < 1e-10

    def test_two_point_tuples_random(self, rng):
        q = random_hermitian_unit_spectrum(rng, 4)
        state = dense_state(q)
        u = random_unitary(rng, 4)
        worst = 0.0
        for _ in range(5):
            phis = [u[:, 0], u[:, 1]]
            psis = [u[:, 2], u[:, 3]]
            worst = max(worst, functional_check(state, phis, psis))
            u = random_unitary(rng, 4)
        assert worst < 1e-10

    def test_three_point_tuples(self, rng):
        state = dense_state(random_hermitian_unit_spectrum(rng, 5))
        for _ in range(3):
            phis = [v / np.linalg.norm(v) for v in rng.normal(size=(3, 5)) + 1j * rng.normal(size=(3, 5))]
            psis = [v / np.linalg.norm(v) for v in rng.normal(size=(3, 5)) + 1j * rng.normal(size=(3, 5))]
            assert functional_check(state, phis, psis) < 1e-10


class TestDenseErrorProbs:
    def test_empty_null_state(self):
        sq = dense_state(np.zeros((3, 3)))
        sr = dense_state(np.diag([0.5, 0.5, 0.5]))
        alpha, _ = dense_error_probs(sq, sr)
        assert alpha == pytest.approx(0.0, abs=1e-15)

    def test_fair_binomial(self):
        s = dense_state(np.diag([0.5, 0.5]))
        alpha, beta = dense_error_probs(s, s)
        assert alpha == pytest.approx(0.25, abs=1e-13)
        assert beta == pytest.approx(0.75, abs=1e-13)

    def test_dimension_mismatch(self):
        with pytest.raises(ValidationError):
            dense_error_probs(dense_state(np.diag([0.5])), dense_state(np.diag([0.5, 0.5])))

    def test_fast_path_equivalence_sample(self, rng):
        worst = 0.0
        for d in range(1, 7):
            for _ in range(10):
                sq = dense_state(random_hermitian_unit_spectrum(rng, d))
                sr = dense_state(random_hermitian_unit_spectrum(rng, d))
                alpha, beta = dense_error_probs(sq, sr)
                worst = max(
                    worst,
                    abs(alpha - math.exp(type1_log_error(sq.occupations))),
                    abs(beta - math.exp(type2_log_error(sr.occupations))),
                )
        assert worst < 1e-10

    def test_basis_independence(self, rng):
        for d in (2, 4):
            q = random_hermitian_unit_spectrum(rng, d)
            r = random_hermitian_unit_spectrum(rng, d)
            u = random_unitary(rng, d)
            base = dense_error_probs(dense_state(q), dense_state(r))
            rotated = dense_error_probs(
                dense_state(u @ q @ u.conj().T), dense_state(u @ r @ u.conj().T)
            )
            assert base[0] == pytest.approx(rotated[0], abs=1e-10)
            assert base[1] == pytest.approx(rotated[1], abs=1e-10)
