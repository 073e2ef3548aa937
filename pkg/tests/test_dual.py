from fractions import Fraction
from itertools import product

import pytest

from qfock import (
    FORMAL_Q,
    Deformation,
    DualOperator,
    FockSpace,
    FockVector,
    QPoly,
    TruncationError,
    commutator_residual,
    conjugate_series,
    dual_partition,
    dual_recursive,
    fisher_info,
    magnitude,
    q_factorial,
    q_falling,
)

Q = FORMAL_Q
e = FockVector.basis


def poly(*coeffs):
    return QPoly([Fraction(c) for c in coeffs])


def one_variable_closed_form(n, q):
    """Alternating falling-product expansion of the dual operator on the
    one-letter level-n vector."""
    acc = {}
    for k in range(1, (n + 1) // 2 + 1):
        coeff = (-1) ** (k - 1) * q ** (k * (k - 1) // 2) * q_falling(n - k, k - 1, q)
        acc[(1,) * (n - 2 * k + 1)] = coeff
    return FockVector(acc)


def xi_closed_form(source_length, q):
    acc = {}
    for m in range(1, source_length + 2):
        coeff = (
            (-1) ** (m - 1)
            * q ** (m * (m - 1) // 2)
            * q_factorial(m - 1, q)
            / q_factorial(2 * m - 1, q)
        )
        acc[(1,) * (2 * m - 1)] = coeff
    return FockVector(acc)


class TestExamples:
    def test_two_letter_word(self, sym2):
        for j1 in (1, 2):
            for j2 in (1, 2):
                for i in (1, 2):
                    got = dual_recursive(sym2, i, (j2, j1))
                    want = e((j2,)) if i == j1 else FockVector.zero()
                    assert got == want

    def test_one_variable_list(self, sym1):
        # degree 2..6 expansion; the degree-6 line's middle coefficient is
        # -q[4]_q, forced identically by the recursion, the diagram sum and
        # the closed form
        want = {
            2: FockVector({(1,): 1}),
            3: FockVector({(1, 1): 1, (): poly(0, -1)}),
            4: FockVector({(1,) * 3: 1, (1,): poly(0, -1, -1)}),
            5: FockVector(
                {(1,) * 4: 1, (1, 1): poly(0, -1, -1, -1), (): poly(0, 0, 0, 1, 1)}
            ),
            6: FockVector(
                {
                    (1,) * 5: 1,
                    (1,) * 3: poly(0, -1, -1, -1, -1),
                    (1,): poly(0, 0, 0, 1, 2, 2, 1),
                }
            ),
        }
        for n, expected in want.items():
            assert dual_recursive(sym1, 1, (1,) * n) == expected
            assert dual_partition(sym1, 1, (1,) * n) == expected

    def test_vacuum_killed(self, sym2):
        assert dual_recursive(sym2, 1, ()).is_zero()
        assert dual_partition(sym2, 1, ()).is_zero()


class TestStrategyAgreement:
    def test_two_letters_symbolic(self, sym2):
        for n in range(8):
            for w in product((1, 2), repeat=n):
                for i in (1, 2):
                    assert dual_partition(sym2, i, w) == dual_recursive(sym2, i, w)

    def test_one_letter_symbolic(self, sym1):
        for n in range(8):
            w = (1,) * n
            assert dual_partition(sym1, 1, w) == dual_recursive(sym1, 1, w)

    def test_operator_wrapper(self, sym2):
        v = FockVector({(1, 2): 1, (2, 1): Q})
        a = DualOperator(sym2, 1, "partition").apply(v)
        b = DualOperator(sym2, 1, "recursive").apply(v)
        assert a == b
        with pytest.raises(ValueError):
            DualOperator(sym2, 1, "nope")


class TestCommutator:
    def test_exact_rational(self):
        sp = FockSpace.with_scalar_q(2, Fraction(1, 2), level=6)
        for i in (1, 2):
            for j in (1, 2):
                assert commutator_residual(sp, i, j, 5) == 0

    def test_symbolic_one_variable(self, sym1):
        assert commutator_residual(sym1, 1, 1, 6) == 0

    def test_mixed_matrix(self):
        defm = Deformation(
            [[Fraction(1, 3), Fraction(1, 5)], [Fraction(1, 5), Fraction(-1, 4)]]
        )
        sp = FockSpace(defm, level=6)
        for i in (1, 2):
            for j in (1, 2):
                assert commutator_residual(sp, i, j, 4) == 0
                assert commutator_residual(sp, i, j, 4, strategy="recursive") == 0

    def test_level_guard(self, sym1):
        with pytest.raises(ValueError):
            commutator_residual(sym1, 1, 1, sym1.level)


class TestConjugateSeries:
    def test_free_case_is_the_letter(self):
        sp = FockSpace.with_scalar_q(2, Fraction(0), level=7)
        for i in (1, 2):
            for m in range(4):
                assert conjugate_series(sp, i, m) == e((i,))

    def test_one_variable_first_terms(self, sym1):
        xi = conjugate_series(sym1, 1, 1)
        assert xi.coeff((1,)) == 1
        assert xi.coeff((1, 1, 1)) == -Q / (poly(1, 1) * poly(1, 1, 1))

    @pytest.mark.parametrize("source_length", range(4))
    def test_matches_closed_form_symbolic(self, sym1, source_length):
        assert conjugate_series(sym1, 1, source_length) == xi_closed_form(
            source_length, Q
        )

    @pytest.mark.parametrize("q0", [Fraction(1, 2), Fraction(-1, 3), Fraction(9, 10)])
    def test_matches_closed_form_rational_m4(self, q0):
        sp = FockSpace.with_scalar_q(1, q0, level=9)
        assert conjugate_series(sp, 1, 4) == xi_closed_form(4, q0)

    def test_truncation_guard(self, sym1):
        with pytest.raises(TruncationError):
            conjugate_series(sym1, 1, sym1.level)


class TestFisher:
    def test_free_case_counts_letters(self):
        sp = FockSpace.with_scalar_q(2, Fraction(0), level=7)
        rep = fisher_info(sp, 3)
        assert rep.value == 2
        assert rep.tail_bound == 0.0

    def test_one_variable_series(self):
        q0 = Fraction(1, 2)
        sp = FockSpace.with_scalar_q(1, q0, level=9)
        rep = fisher_info(sp, 4)
        series = sum(
            (
                abs(q0) ** (m * (m - 1))
                * q_factorial(m - 1, q0) ** 2
                / q_factorial(2 * m - 1, q0)
                for m in range(1, 6)
            ),
            Fraction(0),
        )
        assert rep.value == series
        assert rep.tail_bound > 0.0

    def test_negative_q_computed_as_stated(self):
        # no sign symmetry is asserted; the partial sum simply evaluates the
        # series at the signed parameter
        q0 = Fraction(-1, 2)
        sp = FockSpace.with_scalar_q(1, q0, level=9)
        rep = fisher_info(sp, 4)
        series = sum(
            (
                abs(q0) ** (m * (m - 1))
                * q_factorial(m - 1, q0) ** 2
                / q_factorial(2 * m - 1, q0)
                for m in range(1, 6)
            ),
            Fraction(0),
        )
        assert rep.value == series

    def test_positive_terms_for_positive_q(self):
        q0 = Fraction(1, 2)
        for m in range(1, 6):
            term = (
                abs(q0) ** (m * (m - 1))
                * q_factorial(m - 1, q0) ** 2
                / q_factorial(2 * m - 1, q0)
            )
            assert term > 0

    def test_symbolic_mode_rejected(self, sym1):
        with pytest.raises(ValueError):
            fisher_info(sym1, 1)


class TestDualityPairing:
    def test_proof_pairing_formula(self, half2):
        # tau(A^u xi_i) must equal the alternating splitting sum
        # sum_k delta(i, u_k) tau(left) tau(right) for short monomials
        for n in range(5):
            for u in product((1, 2), repeat=n):
                for i in (1, 2):
                    xi = conjugate_series(half2, i, 2)
                    v = half2.vacuum()
                    for letter in u:
                        v = half2.gaussian(letter, v)
                    lhs = half2.inner(xi, v)
                    rhs = 0
                    for k, letter in enumerate(u):
                        if letter == i:
                            left = half2.gaussian_word(u[:k], half2.vacuum())
                            right = half2.gaussian_word(u[k + 1 :], half2.vacuum())
                            rhs = rhs + half2.trace(left) * half2.trace(right)
                    assert lhs == rhs, (i, u)
