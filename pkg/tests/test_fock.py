import random
from fractions import Fraction
from itertools import product

import numpy as np
import pytest

from qfock import (
    FORMAL_Q,
    Deformation,
    FockSpace,
    FockVector,
    GramSingularError,
    QPoly,
    TruncationError,
    float_gram_matrix,
    q_factorial,
    q_int,
)

Q = FORMAL_Q
e = FockVector.basis


def pair_partition_moment(k, q):
    """Vacuum moment of the field operator as a crossing-weighted sum over
    all pair partitions of 2k points (independent of the operator code)."""

    def pairings(points):
        if not points:
            yield []
            return
        a, rest = points[0], points[1:]
        for idx, b in enumerate(rest):
            for tail in pairings(rest[:idx] + rest[idx + 1 :]):
                yield [(a, b)] + tail

    total = 0
    for pairing in pairings(list(range(2 * k))):
        cross = 0
        for x, (a1, b1) in enumerate(pairing):
            for a2, b2 in pairing[x + 1 :]:
                if a1 < a2 < b1 < b2 or a2 < a1 < b2 < b1:
                    cross += 1
        total = total + q**cross
    return total


class TestOperators:
    def test_annihilate_two_letter(self, sym2):
        assert sym2.annihilate(1, e((2, 1))) == FockVector({(2,): Q})

    def test_annihilate_vacuum(self, sym2):
        assert sym2.annihilate(1, e(())).is_zero()

    def test_annihilate_free_case(self):
        sp = FockSpace.with_scalar_q(2, Fraction(0), level=4)
        assert sp.annihilate(1, e((1, 2, 1))) == e((2, 1))

    def test_create_prepends(self, sym2):
        assert sym2.create(1, e(())) == e((1,))

    def test_gaussian_vacuum(self, sym2):
        assert sym2.gaussian(1, e(())) == e((1,))

    def test_gaussian_one_variable(self, sym1):
        for n in range(1, 6):
            got = sym1.gaussian(1, e((1,) * n))
            want = FockVector({(1,) * (n + 1): 1, (1,) * (n - 1): q_int(n, Q)})
            assert got == want

    def test_create_overflow_is_hard_error(self):
        sp = FockSpace.with_scalar_q(1, Q, level=2)
        with pytest.raises(TruncationError):
            sp.create(1, e((1, 1)))

    def test_right_annihilate(self, sym2):
        assert sym2.right_annihilate(1, e((2, 1))) == e((2,))
        assert sym2.right_annihilate(2, e((2, 1))).is_zero()
        assert sym2.right_annihilate(1, e(())).is_zero()

    def test_trace(self, sym1):
        assert sym1.trace(e(())) == 1
        assert sym1.trace(e((1, 1))) == 0

    def test_fourth_moment_matches_pairing_sum(self, sym1):
        v = e(())
        for _ in range(4):
            v = sym1.gaussian(1, v)
        expected = pair_partition_moment(2, Q)
        assert sym1.trace(v) == expected == QPoly([2, 1])

    def test_sixth_moment_matches_pairing_sum(self, sym1):
        v = e(())
        for _ in range(6):
            v = sym1.gaussian(1, v)
        assert sym1.trace(v) == pair_partition_moment(3, Q)


class TestInnerProduct:
    def test_one_variable_factorial(self, sym1):
        for n in range(7):
            assert sym1.inner(e((1,) * n), e((1,) * n)) == q_factorial(n, Q)

    def test_transposition_weight(self, sym2):
        assert sym2.inner(e((1, 2)), e((2, 1))) == Q

    def test_free_case_orthonormal(self):
        sp = FockSpace.with_scalar_q(2, Fraction(0), level=4)
        for n in range(4):
            for u in sp.words(n):
                for v in sp.words(n):
                    assert sp.inner(e(u), e(v)) == (1 if u == v else 0)

    def test_levels_orthogonal_by_grading(self, sym2):
        assert sym2.inner(e((1,)), e((1, 1))) == 0

    def test_creation_adjoint_to_annihilation(self, half2):
        rng = random.Random(7)
        words3 = half2.words(3)
        words4 = half2.words(4)
        for _ in range(5):
            u = FockVector({w: Fraction(rng.randint(-3, 3), rng.randint(1, 4)) for w in words3})
            v = FockVector({w: Fraction(rng.randint(-3, 3), rng.randint(1, 4)) for w in words4})
            for i in (1, 2):
                assert half2.inner(half2.create(i, u), v) == half2.inner(
                    u, half2.annihilate(i, v)
                )

    def test_recursive_matches_permutation_sum(self, half2):
        for n in range(7):
            for u in half2.words(n):
                eu = e(u)
                for v in half2.words(n):
                    assert half2.inner_recursive(eu, e(v)) == half2.inner(eu, e(v))

    def test_mixed_gram_symmetric(self):
        defm = Deformation([[Fraction(1, 3), Fraction(1, 5)], [Fraction(1, 5), Fraction(-1, 4)]])
        sp = FockSpace(defm, level=5)
        for n in range(5):
            g = sp.gram(n)
            for a in range(len(g)):
                for b in range(len(g)):
                    assert g[a][b] == g[b][a]


class TestCommutationRelation:
    def check(self, space, levels):
        d = space.d
        q = space.deformation.q
        for n in range(levels + 1):
            for w in space.words(n):
                v = e(w)
                for i in range(1, d + 1):
                    for j in range(1, d + 1):
                        lhs = space.annihilate(i, space.create(j, v)) - space.create(
                            j, space.annihilate(i, v)
                        ).scaled(q(i, j))
                        want = v if i == j else FockVector.zero()
                        assert lhs == want, (i, j, w)

    def test_scalar_symbolic(self, sym2):
        self.check(sym2, 4)

    def test_mixed_matrix(self):
        defm = Deformation([[Fraction(1, 3), Fraction(1, 5)], [Fraction(1, 5), Fraction(-1, 4)]])
        self.check(FockSpace(defm, level=5), 4)


class TestRightAdjoint:
    def test_one_variable_closed_form(self, sym1):
        for m in range(5):
            got = sym1.right_annihilate_adjoint(1, e((1,) * m))
            assert len(got) == 1
            assert got.coeff((1,) * (m + 1)) == 1 / q_int(m + 1, Q)

    def test_free_case_right_creation(self):
        sp = FockSpace.with_scalar_q(2, Fraction(0), level=4)
        for n in range(3):
            for w in sp.words(n):
                for i in (1, 2):
                    assert sp.right_annihilate_adjoint(i, e(w)) == e(w + (i,))

    def test_adjoint_identity(self, half2):
        for n in range(3):
            for w in half2.words(n):
                for i in (1, 2):
                    up = half2.right_annihilate_adjoint(i, e(w))
                    for x in half2.words(n + 1):
                        lhs = half2.inner(up, e(x))
                        rhs = half2.inner(e(w), half2.right_annihilate(i, e(x)))
                        assert lhs == rhs

    def test_overflow(self):
        sp = FockSpace.with_scalar_q(1, Fraction(1, 2), level=2)
        with pytest.raises(TruncationError):
            sp.right_annihilate_adjoint(1, e((1, 1)))

    def test_singular_gram_detected(self):
        sp = FockSpace.with_scalar_q(2, 1.0, level=3)
        with pytest.raises(GramSingularError):
            sp.right_annihilate_adjoint(1, e((1,)))


class TestFloatGram:
    @pytest.mark.parametrize("q0", [0.9, -0.9])
    def test_positive_definite_inside_disk(self, q0):
        for n in range(7):
            np.linalg.cholesky(float_gram_matrix(n, 2, q0))

    def test_matches_exact_at_rational_point(self, half2):
        g = half2.gram(3)
        f = float_gram_matrix(3, 2, 0.5)
        for a in range(8):
            for b in range(8):
                assert abs(float(g[a][b]) - f[a, b]) < 1e-12
