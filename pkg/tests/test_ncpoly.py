import random
from fractions import Fraction
from itertools import product

import pytest

from qfock import (
    FORMAL_Q,
    FockSpace,
    FockVector,
    NCPoly,
    NCTensorPoly,
    conjugate_series,
    cyclic_derivative,
    diff_partition,
    diff_quotient,
    duality_residual,
    gibbs_gradient_residuals,
    gibbs_potential,
    hermite,
    poly_apply,
    vector_to_poly,
    wick_partition,
    wick_recursive,
)

Q = FORMAL_Q
e = FockVector.basis


class TestWick:
    def test_unit_and_letters(self, sym2):
        assert wick_recursive(sym2, ()) == NCPoly.one()
        assert wick_recursive(sym2, (1,)) == NCPoly.letter(1)
        assert wick_partition(sym2, ()) == NCPoly.one()

    def test_two_letters(self, sym2):
        for j2 in (1, 2):
            for j1 in (1, 2):
                want = NCPoly({(j2, j1): 1})
                if j2 == j1:
                    want = want + NCPoly({(): -1})
                assert wick_recursive(sym2, (j2, j1)) == want

    def test_three_letters(self, sym2):
        for j3 in (1, 2):
            for j2 in (1, 2):
                for j1 in (1, 2):
                    want = NCPoly({(j3, j2, j1): 1})
                    if j2 == j1:
                        want = want - NCPoly.letter(j3)
                    if j3 == j2:
                        want = want - NCPoly.letter(j1)
                    if j3 == j1:
                        want = want - NCPoly.letter(j2).scaled(Q)
                    assert wick_recursive(sym2, (j3, j2, j1)) == want

    def test_strategies_agree_symbolic(self, sym2):
        for n in range(7):
            for w in product((1, 2), repeat=n):
                assert wick_partition(sym2, w) == wick_recursive(sym2, w)

    def test_one_variable_is_hermite(self, sym1):
        for n in range(9):
            h = hermite(n, Q)
            want = NCPoly({(1,) * k: c for k, c in enumerate(h.coeffs) if c})
            assert wick_recursive(sym1, (1,) * n) == want

    def test_free_case_degree_four(self):
        sp = FockSpace.with_scalar_q(2, Fraction(0), level=5)
        got = wick_partition(sp, (1, 1, 1, 1))
        assert got == NCPoly({(1,) * 4: 1, (1, 1): -3, (): 1})

    def test_vacuum_evaluation_inverts(self, sym2):
        for n in range(5):
            for w in product((1, 2), repeat=n):
                assert poly_apply(sym2, wick_recursive(sym2, w), sym2.vacuum()) == e(w)


class TestVectorToPoly:
    def test_single_letter(self, sym2):
        assert vector_to_poly(sym2, e((2,))) == NCPoly.letter(2)

    def test_round_trip_random(self, half2):
        rng = random.Random(11)
        words = [w for n in range(5) for w in half2.words(n)]
        for _ in range(6):
            p = NCPoly(
                {
                    w: Fraction(rng.randint(-4, 4), rng.randint(1, 3))
                    for w in rng.sample(words, 8)
                }
            )
            v = poly_apply(half2, p, half2.vacuum())
            assert vector_to_poly(half2, v) == p

    def test_one_variable_hermite(self, sym1):
        for n in range(9):
            h = hermite(n, Q)
            want = NCPoly({(1,) * k: c for k, c in enumerate(h.coeffs) if c})
            assert vector_to_poly(sym1, e((1,) * n)) == want


class TestDiffQuotient:
    def test_letter(self):
        assert diff_quotient(1, NCPoly.letter(1)) == NCTensorPoly({((), ()): 1})
        assert diff_quotient(1, NCPoly.letter(2)).is_zero()

    def test_leibniz_single_match(self):
        got = diff_quotient(1, NCPoly({(2, 1): 1}))
        assert got == NCTensorPoly({(((2,), ())): 1})

    def test_leibniz_two_matches(self):
        got = diff_quotient(1, NCPoly({(1, 1): 1}))
        assert got == NCTensorPoly({((), (1,)): 1, ((1,), ()): 1})

    def test_printed_three_letter_formula(self, sym2):
        for i in (1, 2):
            for j3 in (1, 2):
                for j2 in (1, 2):
                    for j1 in (1, 2):
                        want = NCTensorPoly()
                        if i == j3:
                            for u, c in wick_recursive(sym2, (j2, j1)).items():
                                want = want + NCTensorPoly({((), u): c})
                        if i == j2:
                            want = want + NCTensorPoly({((j3,), (j1,)): 1})
                        if i == j1:
                            for u, c in wick_recursive(sym2, (j3, j2)).items():
                                want = want + NCTensorPoly({(u, ()): c})
                        if i == j2 and j3 == j1:
                            want = want + NCTensorPoly({((), ()): -Q})
                        assert diff_partition(sym2, i, (j3, j2, j1)) == want

    def test_strategies_agree_symbolic(self, sym2):
        for n in range(7):
            for w in product((1, 2), repeat=n):
                for i in (1, 2):
                    lhs = diff_partition(sym2, i, w)
                    rhs = diff_quotient(i, wick_recursive(sym2, w))
                    assert lhs == rhs, (i, w)

    def test_free_case_matches_leibniz(self):
        sp = FockSpace.with_scalar_q(2, Fraction(0), level=4)
        for w in product((1, 2), repeat=2):
            for i in (1, 2):
                assert diff_partition(sp, i, w) == diff_quotient(
                    i, wick_recursive(sp, w)
                )


class TestCyclicDerivative:
    def test_square(self):
        assert cyclic_derivative(1, NCPoly({(1, 1): 1})) == NCPoly({(1,): 2})

    def test_mixed_product(self):
        assert cyclic_derivative(1, NCPoly({(1, 2): 1})) == NCPoly.letter(2)

    def test_rotation(self):
        got = cyclic_derivative(2, NCPoly({(1, 2, 1): 1}))
        assert got == NCPoly({(1, 1): 1})


class TestDuality:
    def test_empty_word(self, half2):
        assert duality_residual(half2, (), 1, 2) == 0

    def test_single_letter_pairs_to_one(self, half2):
        xi = conjugate_series(half2, 1, 2)
        v = half2.gaussian(1, half2.vacuum())
        assert half2.inner(xi, v) == 1
        assert duality_residual(half2, (1,), 1, 2) == 0

    def test_all_short_monomials(self, half2):
        for n in range(5):
            for u in product((1, 2), repeat=n):
                for i in (1, 2):
                    assert duality_residual(half2, u, i, 3) == 0, (i, u)


class TestGibbs:
    def test_free_case_quadratic(self):
        sp = FockSpace.with_scalar_q(2, Fraction(0), level=7)
        V = gibbs_potential(sp, 2)
        assert V == NCPoly({(1, 1): Fraction(1, 2), (2, 2): Fraction(1, 2)})

    def test_gradient_matches_one_variable(self):
        sp = FockSpace.with_scalar_q(1, Fraction(1, 2), level=9)
        residuals = gibbs_gradient_residuals(sp, 2)
        assert set(residuals) == set(range(5))
        assert all(v == 0 for v in residuals.values())

    def test_gradient_matches_two_variables(self, half2):
        residuals = gibbs_gradient_residuals(half2, 2)
        assert all(v == 0 for v in residuals.values())

    def test_degree_grading(self, half2):
        xi_degrees = set()
        for i in (1, 2):
            p = vector_to_poly(half2, conjugate_series(half2, i, 2))
            assert p.coeff(()) == 0  # no constant term ever appears
            xi_degrees |= {len(w) for w, _ in p.items()}
        V = gibbs_potential(half2, 2)
        v_degrees = {len(w) for w, _ in V.items()}
        assert v_degrees == {k + 1 for k in xi_degrees}


class TestAlgebra:
    def test_ncpoly_product_concatenates(self):
        a = NCPoly({(1,): 1, (): 2})
        b = NCPoly({(2,): 1})
        assert a * b == NCPoly({(1, 2): 1, (2,): 2})

    def test_tensor_flip(self):
        t = NCTensorPoly({((1,), (2,)): 1})
        assert t.flip() == NCTensorPoly({((2,), (1,)): 1})
        assert t.flip_multiply() == NCPoly({(2, 1): 1})

    def test_canonical_prunes_zeros(self):
        assert NCPoly({(1,): 0}).is_zero()
        assert NCTensorPoly({((), ()): 0}).is_zero()
