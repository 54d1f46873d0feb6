"""Tests for exact Diophantine sequences, window escape, the decaying
product, and the Erdos-Kahane prediction/counting apparatus.

Oracles: high-precision mpmath recomputation of t*theta^k (independent of
the exact ring arithmetic under test), integer recurrences for nearest
integers (Lucas numbers for the golden ratio), and numpy for matrix norms.
"""

from __future__ import annotations

import math
from fractions import Fraction

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from subspectral.algebraic import (
    AlgebraicInteger,
    ZThetaElement,
    zt_mul_theta,
    zt_value_interval,
)
from subspectral.diophantine import (
    EKConstants,
    companion_matrix,
    ek_constants,
    ek_dimension_bound,
    ek_frequency,
    ek_step_predict,
    pisot_sequence,
    prop_alg_product,
    window_escape_check,
)
from subspectral.errors import (
    PrecisionExhausted,
    RepeatedEigenvalue,
    WrongClass,
    ZeroEigenvalue,
)

RUNNING = (1, -1, -3)  # x^2 - x - 3, dominant root (1 + sqrt 13)/2
GOLDEN = (1, -1, -1)  # x^2 - x - 1, golden ratio
CUBIC = (1, 0, -1, -2)  # x^3 - x - 2, complex pair of modulus > 1
QUARTIC = (1, 0, 0, -1, -3)  # x^4 - x - 3, all conjugates outside


@pytest.fixture(scope="module")
def running() -> AlgebraicInteger:
    return AlgebraicInteger.from_poly(RUNNING)


@pytest.fixture(scope="module")
def golden() -> AlgebraicInteger:
    return AlgebraicInteger.from_poly(GOLDEN)


def _theta_oracle(poly, bits=300):
    """Dominant real root via plain mpmath polyroots (independent route)."""
    with mp.workprec(bits):
        roots = mp.polyroots([mp.mpf(c) for c in poly], maxsteps=200,
                             extraprec=200)
        real = [mp.re(r) for r in roots if abs(mp.im(r)) < mp.mpf(2) ** -100]
        return max(real)


def _frac_dist_oracle(x):
    """|x - nearest integer| for an mpf at its working precision."""
    return abs(x - mp.nint(x))


class TestCompanionMatrix:
    def test_running_example(self, running):
        assert companion_matrix(running) == ((0, 1), (3, 1))
        assert companion_matrix(RUNNING) == ((0, 1), (3, 1))

    def test_cubic(self):
        # x^3 - 2x^2 + 5: b1 = 2, b2 = 0, b3 = -5
        assert companion_matrix([1, -2, 0, 5]) == (
            (0, 1, 0),
            (0, 0, 1),
            (-5, 0, 2),
        )

    @given(
        a=st.integers(-50, 50),
        b=st.integers(-50, 50),
    )
    @settings(max_examples=50, deadline=None)
    def test_row_action_is_multiplication_by_theta(self, a, b):
        # row vector of coordinates times the companion matrix equals the
        # coordinates of theta * x
        ai = AlgebraicInteger.from_poly(RUNNING)
        C = companion_matrix(ai)
        x = ZThetaElement((a, b))
        prod = tuple(
            sum(x.coords[i] * C[i][j] for i in range(2)) for j in range(2)
        )
        assert prod == zt_mul_theta(x, ai).coords


class TestPisotSequence:
    def test_running_first_values(self, running):
        seq = pisot_sequence(running, 1, 5)
        assert seq.K == (1, 2, 5, 12, 28)
        assert seq.eps[0] == 0
        # theta - 2 and theta^2 - 5 are both theta - 2 = 0.3027756...
        with mp.workprec(200):
            theta = _theta_oracle(RUNNING)
            expected = float(theta - 2)
        for k in (1, 2):
            assert abs(float(seq.eps[k]) - expected) < 1e-10

    def test_running_against_oracle(self, running):
        N = 40
        seq = pisot_sequence(running, 1, N, err=Fraction(1, 2**80))
        with mp.workprec(400):
            theta = _theta_oracle(RUNNING, bits=400)
            x = mp.mpf(1)
            for k in range(N):
                K_o = int(mp.nint(x))
                assert seq.K[k] == K_o
                eps_o = x - K_o
                assert abs(mp.mpf(float(seq.eps[k])) - eps_o) < mp.mpf(1e-12)
                x *= theta

    def test_golden_lucas_numbers(self, golden):
        # phi^k = L_k - (-1/phi)^k with Lucas numbers L; the correction is
        # below 1/2 for k >= 2, so K_k = L_k there
        N = 30
        seq = pisot_sequence(golden, 1, N)
        lucas = [2, 1]
        while len(lucas) < N:
            lucas.append(lucas[-1] + lucas[-2])
        assert seq.K[0] == 1  # t itself
        assert seq.K[1] == 2  # phi = 1.618 rounds up, L_1 + 1
        for k in range(2, N):
            assert seq.K[k] == lucas[k]
        assert seq.K[10] == 123
        # eps_k = (-1)^(k+1) phi^(-k) for k >= 2
        with mp.workprec(200):
            phi = (1 + mp.sqrt(5)) / 2
            for k in range(2, N):
                expected = (-1) ** (k + 1) * phi ** (-k)
                assert abs(mp.mpf(float(seq.eps[k])) - expected) < 1e-12

    def test_golden_tenth_power_distance(self, golden):
        seq = pisot_sequence(golden, 1, 11)
        with mp.workprec(200):
            phi = (1 + mp.sqrt(5)) / 2
            expected = float(_frac_dist_oracle(phi**10))
        assert abs(abs(float(seq.eps[10])) - expected) < 1e-10
        assert abs(expected - 0.0081306188) < 1e-9

    def test_integer_t_starts_exact(self, running):
        seq = pisot_sequence(running, 7, 3)
        assert seq.K[0] == 7
        assert seq.eps[0] == 0
        assert seq.denom == 1

    def test_rational_t(self, running):
        seq = pisot_sequence(running, Fraction(1, 3), 12)
        assert seq.denom == 3
        with mp.workprec(300):
            theta = _theta_oracle(RUNNING)
            x = mp.mpf(1) / 3
            for k in range(12):
                assert seq.K[k] == int(mp.nint(x))
                assert abs(mp.mpf(float(seq.eps[k])) - (x - seq.K[k])) < 1e-10
                x *= theta

    def test_float_and_mpf_t_are_exact_binary(self, running):
        for t in (0.75, mp.mpf("0.75")):
            seq = pisot_sequence(running, t, 6)
            assert seq.denom == 4
            assert seq.K[0] == 1  # 0.75 rounds to 1
            assert seq.eps[0] == Fraction(-1, 4)

    def test_ring_element_t_shifts_by_one(self, running):
        base = pisot_sequence(running, 1, 11)
        shifted = pisot_sequence(running, ZThetaElement((0, 1)), 10)
        assert shifted.K == base.K[1:]
        assert shifted.eps == base.eps[1:]

    def test_tie_rounds_half_up(self, running):
        seq = pisot_sequence(running, Fraction(1, 2), 4)
        assert seq.K[0] == 1
        assert seq.eps[0] == Fraction(-1, 2)

    def test_eps_range_and_exact_coordinates(self, running):
        seq = pisot_sequence(running, Fraction(5, 7), 15)
        x = ZThetaElement.from_int(5, 2)
        for k in range(15):
            assert Fraction(-1, 2) <= seq.eps[k] < Fraction(1, 2)
            # exact residue coordinates: x_k - K_k * q in the ring
            expect = (x.coords[0] - seq.K[k] * 7,) + x.coords[1:]
            assert seq.eps_num[k].coords == expect
            x = zt_mul_theta(x, running)

    def test_eps_num_value_matches_eps(self, running):
        seq = pisot_sequence(running, 1, 20, err=Fraction(1, 2**60))
        for k in range(20):
            lo, hi = zt_value_interval(seq.eps_num[k], running, 200)
            assert lo - seq.err <= seq.eps[k] <= hi + seq.err

    def test_err_is_honored(self, golden):
        err = Fraction(1, 2**80)
        seq = pisot_sequence(golden, 1, 25, err=err)
        with mp.workprec(400):
            phi = (1 + mp.sqrt(5)) / 2
            x = mp.mpf(1)
            for k in range(25):
                true_eps = x - mp.nint(x)
                approx = mp.mpf(seq.eps[k].numerator) / seq.eps[k].denominator
                assert abs(approx - true_eps) <= mp.mpf(
                    err.numerator
                ) / err.denominator * (1 + mp.mpf(2) ** -40)
                x *= phi

    def test_length_and_validation(self, running):
        assert len(pisot_sequence(running, 1, 7)) == 7
        with pytest.raises(ValueError):
            pisot_sequence(running, 1, 0)
        with pytest.raises(ValueError):
            pisot_sequence(running, 1, 10**5 + 1)
        with pytest.raises(ValueError):
            pisot_sequence(running, 1, 5, err=Fraction(0))
        with pytest.raises(ValueError):
            pisot_sequence(running, float("inf"), 5)
        with pytest.raises(TypeError):
            pisot_sequence(running, "3", 5)
        with pytest.raises(ValueError):
            pisot_sequence(running, ZThetaElement((1, 2, 3)), 5)

    @given(t=st.integers(1, 40))
    @settings(max_examples=25, deadline=None)
    def test_integer_t_recurrence_identity(self, t):
        # K_{k+2} - K_{k+1} - 3 K_k must absorb the fractional parts: the
        # same combination of eps values is its exact negative
        ai = AlgebraicInteger.from_poly(RUNNING)
        seq = pisot_sequence(ai, t, 8)
        for k in range(6):
            lhs = seq.K[k + 2] - seq.K[k + 1] - 3 * seq.K[k]
            comb = tuple(
                seq.eps_num[k + 2].coords[i]
                - seq.eps_num[k + 1].coords[i]
                - 3 * seq.eps_num[k].coords[i]
                for i in range(2)
            )
            assert comb == (-lhs, 0)


class TestWindowEscape:
    def test_running_t1_all_windows_pass(self, running):
        rep = window_escape_check(running, 1, k_max=50)
        assert rep.beta == 8
        assert rep.delta1 == Fraction(1, 7)
        assert rep.k0 == 1
        assert rep.k0_empirical
        assert not rep.hypothesis_violated
        assert rep.first_violation is None
        assert len(rep.verdicts) == 50
        for v in rep.verdicts:
            assert v.passed
            assert v.k <= v.argmax < 8 * v.k
            assert v.max_eps >= 1 / 7

    @pytest.mark.parametrize("t", [1, 2, 3, 4, 5, 6, 7, 8, 9, 10])
    def test_running_many_integer_t(self, running, t):
        rep = window_escape_check(running, t, k_max=20)
        assert rep.first_violation is None
        assert all(v.passed for v in rep.verdicts)

    @pytest.mark.parametrize(
        "poly,k_max",
        [(CUBIC, 12), (QUARTIC, 15)],
    )
    def test_higher_degree_windows_pass(self, poly, k_max):
        ai = AlgebraicInteger.from_poly(poly)
        rep = window_escape_check(ai, 1, k_max=k_max)
        assert rep.first_violation is None
        assert all(v.passed for v in rep.verdicts)

    def test_rational_t(self, running):
        rep = window_escape_check(running, Fraction(3, 2), k_max=15)
        assert rep.first_violation is None

    def test_wrong_class_refused(self, golden):
        with pytest.raises(WrongClass):
            window_escape_check(golden, 1, k_max=10)
        salem = AlgebraicInteger.from_poly((1, -1, -1, -1, 1))
        with pytest.raises(WrongClass):
            window_escape_check(salem, 1, k_max=5)

    def test_golden_diagnostic_fails_windows(self, golden):
        rep = window_escape_check(
            golden, 1, k0=5, k_max=20, diagnostic=True, beta_override=3
        )
        assert rep.hypothesis_violated
        assert rep.beta == 3
        assert rep.first_violation == 5
        assert not any(v.passed for v in rep.verdicts)
        # ||phi^k|| -> 0 geometrically, so window maxima collapse
        assert rep.verdicts[-1].max_eps < 1e-3

    def test_empirical_k0_skips_failures(self, golden):
        rep = window_escape_check(
            golden, 1, k_max=10, diagnostic=True, beta_override=2
        )
        assert rep.k0_empirical
        failing_scan = [
            v.k for v in window_escape_check(
                golden, 1, k0=1, k_max=10, diagnostic=True, beta_override=2
            ).verdicts if not v.passed
        ]
        if failing_scan:
            assert rep.k0 == max(failing_scan) + 6

    def test_pinned_k0_beyond_range(self, running):
        rep = window_escape_check(running, 1, k0=60, k_max=50)
        assert rep.verdicts == ()
        assert not rep.k0_empirical

    def test_validation(self, running, golden):
        with pytest.raises(ValueError):
            window_escape_check(running, 1, k_max=0)
        with pytest.raises(ValueError):
            window_escape_check(
                golden, 1, diagnostic=True, beta_override=1, k_max=5
            )

    def test_deterministic(self, running):
        a = window_escape_check(running, 1, k_max=12)
        b = window_escape_check(running, 1, k_max=12)
        assert a == b


class TestPropAlgProduct:
    def test_running_value_against_oracle(self, running):
        N = 100
        rep = prop_alg_product(running, 1, N)
        with mp.workprec(400):
            theta = _theta_oracle(RUNNING, bits=400)
            x = mp.mpf(1)
            total = mp.mpf(0)
            for _ in range(N):
                total += _frac_dist_oracle(x) ** 2
                x *= theta
            expected = mp.exp(-total)
            assert abs(mp.mpf(float(rep.value)) - expected) < mp.mpf(1e-12)
        assert not rep.hypothesis_violated
        assert float(rep.alpha) == pytest.approx(
            (1 / 49) / math.log(8), rel=1e-12
        )

    def test_values_monotone_and_consistent(self, running):
        rep = prop_alg_product(running, 1, 150)
        assert len(rep.values) == 150
        for a, b in zip(rep.values, rep.values[1:]):
            assert b <= a * (1 + 1e-15)
        assert rep.values[-1] == pytest.approx(float(rep.value), rel=1e-12)
        assert float(rep.value) == pytest.approx(
            math.exp(float(rep.log_value)), rel=1e-10
        )

    def test_power_law_bound_out_of_sample(self, running):
        rep = prop_alg_product(running, 1, 300)
        assert rep.bound_ok
        assert rep.fitted_exponent < 0
        assert float(rep.fitted_C) > 0

    def test_branch_t_at_least_one(self, running):
        rep = prop_alg_product(running, 3, 60)
        assert rep.branch == "t>=1"
        assert rep.branch_min_n == 1
        with mp.workprec(120):
            expected = float(mp.log(4) ** (1 / mp.log(8)))
        assert float(rep.t_factor) == pytest.approx(expected, rel=1e-10)

    def test_small_t_branch_threshold(self, running):
        rep = prop_alg_product(running, Fraction(1, 10), 80)
        assert rep.branch == "small-t"
        assert float(rep.t_factor) == 1.0
        with mp.workprec(200):
            theta = _theta_oracle(RUNNING)
            j = int(mp.ceil(mp.log(10) / mp.log(theta)))
        assert rep.branch_min_n == 2 * j

    def test_small_t_just_below_one(self, running):
        rep = prop_alg_product(running, Fraction(99, 100), 40)
        assert rep.branch == "small-t"
        assert rep.branch_min_n == 2  # t * theta >= 1 already at j = 1

    def test_wrong_class_and_diagnostic(self, golden):
        with pytest.raises(WrongClass):
            prop_alg_product(golden, 1, 50)
        rep = prop_alg_product(golden, 1, 500, diagnostic=True)
        assert rep.hypothesis_violated
        assert rep.alpha is None and rep.bound_ok is None
        # ||phi^k||^2 is summable: the product stays bounded below
        with mp.workprec(600):
            phi = (1 + mp.sqrt(5)) / 2
            x = mp.mpf(1)
            total = mp.mpf(0)
            for _ in range(500):
                total += _frac_dist_oracle(x) ** 2
                x *= phi
            expected = float(mp.exp(-total))
        assert float(rep.value) == pytest.approx(expected, rel=1e-10)
        assert float(rep.value) > 0.6

    def test_validation(self, running):
        with pytest.raises(ValueError):
            prop_alg_product(running, -2, 50)


def _vandermonde_oracle(zs):
    """Infinity norms of the Vandermonde matrix and its inverse via numpy."""
    m = len(zs)
    V = np.array([[complex(z) ** i for z in zs] for i in range(m)])
    Vinv = np.linalg.inv(V)
    return (
        np.linalg.norm(V, np.inf),
        np.linalg.norm(Vinv, np.inf),
    )


class TestEKConstants:
    def test_integer_pair_exact(self):
        ek = ek_constants((2, 1))
        assert ek.L == 20
        assert float(ek.L_exact) == 20
        assert float(ek.vandermonde_norm) == 3
        assert float(ek.vandermonde_inv_norm) == pytest.approx(3, abs=1e-30)
        assert float(ek.rho) == pytest.approx(1 / 38, abs=1e-18)
        assert float(ek.theta1) == 2

    def test_running_pair_against_numpy(self):
        with mp.workprec(120):
            th1 = float((1 + mp.sqrt(13)) / 2)
            th2 = float((1 - mp.sqrt(13)) / 2)
        ek = ek_constants((th1, th2))
        n_o, i_o = _vandermonde_oracle((th1, th2))
        assert float(ek.vandermonde_norm) == pytest.approx(n_o, rel=1e-12)
        assert float(ek.vandermonde_inv_norm) == pytest.approx(i_o, rel=1e-12)
        assert float(ek.theta1) == pytest.approx(th1, rel=1e-15)
        expect_L = math.ceil(th1 * n_o * i_o + 2 - 1e-12)
        assert ek.L == expect_L
        assert float(ek.rho) == pytest.approx(
            1 / (2 * (1 + th1 * n_o * i_o)), rel=1e-10
        )

    def test_complex_triple_against_numpy(self):
        zs = (2, 1 + 1j, 1 - 1j)
        ek = ek_constants(zs)
        n_o, i_o = _vandermonde_oracle(zs)
        assert float(ek.vandermonde_norm) == pytest.approx(n_o, rel=1e-10)
        assert float(ek.vandermonde_inv_norm) == pytest.approx(i_o, rel=1e-10)
        assert 0 < float(ek.rho) < 0.5
        assert ek.L >= 3

    def test_degenerate_inputs(self):
        with pytest.raises(RepeatedEigenvalue):
            ek_constants((2, 2))
        with pytest.raises(ZeroEigenvalue):
            ek_constants((2, 0))
        with pytest.raises(ValueError):
            ek_constants(())

    def test_dimension_bound(self):
        v = ek_dimension_bound(20, 2, 5, 2.0)
        assert v == pytest.approx(
            math.log(2 * 20**3 * 5) / (5 * math.log(2)), rel=1e-12
        )
        assert ek_dimension_bound(20, 2, 50, 2.0) < v
        with pytest.raises(ValueError):
            ek_dimension_bound(20, 2, 0, 2.0)
        with pytest.raises(ValueError):
            ek_dimension_bound(20, 2, 5, 1.0)


class TestEKStepPredict:
    def test_exact_integer_sequences(self):
        # K_n = A 2^n + B satisfies K_{n+2} = 3 K_{n+1} - 2 K_n exactly;
        # every window has eps = 0, so predictions must all be unique hits
        ek = ek_constants((2, 1))
        checked = 0
        for A in range(1, 6):
            for B in range(-5, 6):
                K = [A * 2**n + B for n in range(12)]
                for i in range(10):
                    pred = ek_step_predict(K[i : i + 2], ek)
                    assert len(pred.candidates) <= ek.L
                    assert K[i + 2] in pred.candidates
                    assert pred.best == K[i + 2]
                    assert pred.unique
                    checked += 1
        assert checked == 550

    def test_golden_ratio_windows(self, golden):
        # K_k = nearest integer to phi^k; fractional parts decay below rho,
        # after which unique predictions must reproduce the Lucas recurrence
        with mp.workprec(200):
            phi = (1 + mp.sqrt(5)) / 2
            phi2 = (1 - mp.sqrt(5)) / 2
            ek = ek_constants((phi, phi2))
        seq = pisot_sequence(golden, 1, 30)
        rho = float(ek.rho)
        hits = 0
        for i in range(28):
            if max(abs(float(seq.eps[i])), abs(float(seq.eps[i + 1]))) < rho:
                pred = ek_step_predict(list(seq.K[i : i + 2]), ek)
                assert len(pred.candidates) <= ek.L
                assert seq.K[i + 2] in pred.candidates
                if pred.unique:
                    assert pred.best == seq.K[i + 2]
                    hits += 1
        assert hits > 10

    def test_zero_window(self):
        ek = ek_constants((2, 1))
        pred = ek_step_predict([0, 0], ek)
        assert pred.best == 0
        assert 0 in pred.candidates
        assert len(pred.candidates) <= ek.L

    def test_window_length_validation(self):
        ek = ek_constants((2, 1))
        with pytest.raises(ValueError):
            ek_step_predict([1, 2, 3], ek)


class TestEKFrequency:
    def test_engineered_integer_orbit(self):
        # omega * 4^n is an integer for omega = 1/4: every distance is 0
        rep = ek_frequency((4, 2), (1, 0), Fraction(1, 4), 50, Fraction(1, 10))
        assert rep.count == 0
        assert rep.fraction == 0
        assert all(d == 0 for d in rep.distances)

    def test_engineered_constant_distance(self):
        # 4^n / 3 always has fractional part 1/3: every n counts for rho = 1/4
        rep = ek_frequency((4, 2), (1, 0), Fraction(1, 3), 40, Fraction(1, 4))
        assert rep.count == 40
        assert rep.fraction == 1.0
        for d in rep.distances:
            assert d == pytest.approx(1 / 3, abs=1e-12)

    def test_rho_half_is_unreachable(self):
        rep = ek_frequency((4, 2), (1, 0), 0.3, 100, Fraction(1, 2))
        assert rep.count == 0

    def test_golden_distances_decay(self):
        # ||phi^n|| >= 0.3 only for n = 1, 2
        with mp.workprec(120):
            phi = (1 + mp.sqrt(5)) / 2
            phi2 = (1 - mp.sqrt(5)) / 2
        rep = ek_frequency((phi, phi2), (1, 0), 1, 30, Fraction(3, 10))
        assert rep.count == 2
        with mp.workprec(300):
            p = (1 + mp.sqrt(5)) / 2
            for n in range(1, 31):
                assert rep.distances[n - 1] == pytest.approx(
                    float(_frac_dist_oracle(p**n)), abs=1e-9
                )

    def test_generic_pair_counts(self):
        with mp.workprec(120):
            th1 = float((1 + mp.sqrt(13)) / 2)
            th2 = float((1 - mp.sqrt(13)) / 2)
        rep = ek_frequency((th1, th2), (1, 0.2), 0.3, 100, Fraction(1, 10))
        assert 0 < rep.count <= 100
        assert rep.fraction == rep.count / 100
        assert len(rep.distances) == 100

    def test_complex_conjugate_symmetry_enforced(self):
        zs = (2, 1 + 1j, 1 - 1j)
        # asymmetric coefficients rejected
        with pytest.raises(ValueError):
            ek_frequency(zs, (1, 1j, 1j), 0.3, 10, Fraction(1, 10))
        # symmetric ones accepted (the sums are then real)
        rep = ek_frequency(zs, (1, 1j, -1j), 0.3, 20, Fraction(1, 10))
        assert len(rep.distances) == 20

    def test_validation(self):
        with pytest.raises(ValueError):
            ek_frequency((2, 1), (2, 0), 0.3, 10, Fraction(1, 10))
        with pytest.raises(ValueError):
            ek_frequency((2, 1), (1,), 0.3, 10, Fraction(1, 10))
        with pytest.raises(ValueError):
            ek_frequency((2, 1), (1, 0), 0.3, 0, Fraction(1, 10))
        with pytest.raises(ValueError):
            ek_frequency((2, 1), (1, 0), 0.3, 10, Fraction(2, 3))
        with pytest.raises(ValueError):
            ek_frequency((2, 1), (1, 0), 0.3, 10, 0)

    def test_deterministic(self):
        # rho = 1/7 cannot be hit exactly by the dyadic orbit values, so
        # every comparison is decidable
        a = ek_frequency((4, 2), (1, 0.5), 0.37, 60, Fraction(1, 7))
        b = ek_frequency((4, 2), (1, 0.5), 0.37, 60, Fraction(1, 7))
        assert a == b

    def test_exact_boundary_hit_is_refused(self):
        # omega * 4^1 = 1/2 sits exactly on rho = 1/2: no finite precision
        # can separate them, and the function must say so rather than guess
        with pytest.raises(PrecisionExhausted):
            ek_frequency((4, 2), (1, 0), Fraction(1, 8), 5, Fraction(1, 2))
