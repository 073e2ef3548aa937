"""Truncated deformed Fock space with exact Gram data.

Basis vectors are indexed by words over the alphabet {1..d}. A word is a
tuple whose first entry is the leftmost tensor factor, so creation with
letter i prepends i, and annihilation scans the word from the left while
accumulating one deformation factor per letter it passes:

    annihilate(i): e_w  ->  sum over positions t with w[t] = i of
                            (prod_{s<t} q(i, w[s])) e_{w without t}

With a constant deformation the accumulated factor is q^t, the familiar
single-parameter rule. The level-n inner product twists the plain tensor
inner product by the operator that sends e_w to the sum over all
permutations pi of q^{inversions(pi)} e_{pi(w)}; for non-constant
deformations the inner product is instead defined by peeling created
letters against annihilation, which coincides with the permutation sum in
the constant case (and is tested to).

Everything is exact when the deformation entries are exact; plain floats
flow through the same code paths for numerical work. The truncation level
is explicit and overflowing it is a hard error, never a silent projection.
"""

from __future__ import annotations

import threading
from fractions import Fraction
from functools import lru_cache
from itertools import islice, permutations, product

import numpy as np

from .scalars import Deformation, QPoly, QRat, magnitude

__all__ = [
    "FockVector",
    "FockSpace",
    "TruncationError",
    "GramSingularError",
    "float_gram_matrix",
]


class TruncationError(RuntimeError):
    """An operator tried to leave the truncated space."""


class GramSingularError(RuntimeError):
    """A level Gram matrix could not be factorized."""


def _div(a, b):
    """Division that keeps int/int exact instead of decaying to float."""
    if isinstance(a, int) and isinstance(b, int):
        return Fraction(a, b)
    return a / b


def _add_to(acc, word, value):
    if not value:
        return
    cur = acc.get(word)
    if cur is None:
        acc[word] = value
    else:
        cur = cur + value
        if cur:
            acc[word] = cur
        else:
            del acc[word]


class FockVector:
    """Finitely supported map word -> coefficient, graded by word length."""

    __slots__ = ("_c",)

    def __init__(self, coeffs=None):
        data = {}
        if coeffs:
            for w, c in coeffs.items():
                if c:
                    data[tuple(w)] = c
        object.__setattr__(self, "_c", data)

    def __setattr__(self, name, value):
        raise AttributeError("FockVector is immutable")

    @classmethod
    def basis(cls, word):
        return cls({tuple(word): 1})

    @classmethod
    def zero(cls):
        return cls()

    def items(self):
        return self._c.items()

    def support(self):
        return sorted(self._c, key=lambda w: (len(w), w))

    def coeff(self, word):
        return self._c.get(tuple(word), 0)

    def is_zero(self):
        return not self._c

    def __bool__(self):
        return bool(self._c)

    def __len__(self):
        return len(self._c)

    def levels(self):
        return sorted({len(w) for w in self._c})

    def max_level(self):
        return max((len(w) for w in self._c), default=-1)

    def level(self, n):
        return FockVector({w: c for w, c in self._c.items() if len(w) == n})

    def __add__(self, other):
        if not isinstance(other, FockVector):
            return NotImplemented
        acc = dict(self._c)
        for w, c in other._c.items():
            _add_to(acc, w, c)
        out = FockVector()
        object.__setattr__(out, "_c", acc)
        return out

    def __sub__(self, other):
        if not isinstance(other, FockVector):
            return NotImplemented
        return self + (-other)

    def __neg__(self):
        return FockVector({w: -c for w, c in self._c.items()})

    def scaled(self, s):
        if not s:
            return FockVector()
        return FockVector({w: c * s for w, c in self._c.items()})

    def __eq__(self, other):
        if not isinstance(other, FockVector):
            return NotImplemented
        return self._c == other._c

    def __hash__(self):
        return hash(frozenset(self._c.items()))

    def max_coeff_magnitude(self):
        """Largest coefficient magnitude; zero exactly for the zero vector."""
        best = Fraction(0)
        for c in self._c.values():
            m = magnitude(c)
            if m > best:
                best = m
        return best

    def __repr__(self):
        if not self._c:
            return "FockVector(0)"
        bits = [f"e{''.join(map(str, w)) or '0'}: {c!r}" for w, c in sorted(self._c.items(), key=lambda t: (len(t[0]), t[0]))]
        return "FockVector(" + ", ".join(bits) + ")"


# ---------------------------------------------------------------------------
# permutation bookkeeping for the level Gram operators
# ---------------------------------------------------------------------------

_CHUNK = 32768


@lru_cache(maxsize=None)
def _count_matrices(n, d):
    """For each inversion number k, the integer matrix N_k with

        N_k[target, source] = #{permutations pi with inversions(pi) = k
                                and pi(word_source) = word_target}

    over the lexicographic level-n word basis. The level Gram operator is
    then sum_k q^k N_k for any value (or formal power) of q.
    """
    w_count = d**n
    if n == 0:
        return {0: np.ones((1, 1), dtype=np.int64)}
    words_arr = np.array(list(product(range(d), repeat=n)), dtype=np.int64)
    powers = d ** np.arange(n - 1, -1, -1, dtype=np.int64)
    counts = {}
    src = np.arange(w_count, dtype=np.int64)
    perm_iter = permutations(range(n))
    while True:
        chunk = list(islice(perm_iter, _CHUNK))
        if not chunk:
            break
        perms = np.array(chunk, dtype=np.int64)
        inv = np.zeros(len(chunk), dtype=np.int64)
        for a in range(n):
            for b in range(a + 1, n):
                inv += perms[:, a] > perms[:, b]
        # permuted[p, t, w] = letter at position perms[p, t] of word w
        permuted = words_arr.T[perms]
        targets = np.einsum("ptw,t->pw", permuted, powers)
        for k in np.unique(inv):
            mat = counts.get(int(k))
            if mat is None:
                mat = np.zeros((w_count, w_count), dtype=np.int64)
                counts[int(k)] = mat
            sel = targets[inv == k]
            np.add.at(mat, (sel.ravel(), np.tile(src, sel.shape[0])), 1)
    return counts


def float_gram_matrix(n, d, q0):
    """Level-n Gram matrix as a dense float array, for numerical estimates."""
    counts = _count_matrices(n, d)
    w_count = d**n
    out = np.zeros((w_count, w_count), dtype=float)
    for k, mat in counts.items():
        out += float(q0) ** k * mat
    return out


# ---------------------------------------------------------------------------
# the space
# ---------------------------------------------------------------------------


class FockSpace:
    """Fock space over d letters, truncated at an explicit word length.

    All operator applications are pure; the per-level Gram data and the
    solver factorizations are write-once caches guarded by a lock, so a
    space can be shared freely between threads.
    """

    def __init__(self, deformation: Deformation, level: int):
        if level < 0:
            raise ValueError("truncation level must be nonnegative")
        self.deformation = deformation
        self.d = deformation.d
        self.level = level
        self._lock = threading.Lock()
        self._words = {}
        self._word_index = {}
        self._gram = {}
        self._gram_lu = {}
        self._ip_memo = {}
        self._dual_memo = {}
        self._wick_memo = {}

    @classmethod
    def with_scalar_q(cls, d, q, level):
        return cls(Deformation.constant(d, q), level)

    # -- basis -------------------------------------------------------------

    def words(self, n):
        if n > self.level:
            raise TruncationError(f"level {n} beyond truncation {self.level}")
        with self._lock:
            got = self._words.get(n)
            if got is None:
                got = [tuple(w) for w in product(range(1, self.d + 1), repeat=n)]
                self._words[n] = got
                self._word_index[n] = {w: k for k, w in enumerate(got)}
            return got

    def word_index(self, n):
        self.words(n)
        return self._word_index[n]

    def vacuum(self):
        return FockVector.basis(())

    # -- the basic operators ------------------------------------------------

    def create(self, i, v: FockVector) -> FockVector:
        """Left creation: prepend letter i. Overflow is a hard error."""
        self._check_letter(i)
        acc = {}
        for w, c in v.items():
            if len(w) + 1 > self.level:
                raise TruncationError(
                    f"create on a level-{len(w)} component exceeds level {self.level}"
                )
            _add_to(acc, (i,) + w, c)
        return FockVector(acc)

    def annihilate(self, i, v: FockVector) -> FockVector:
        """Left annihilation with cumulative deformation weights."""
        self._check_letter(i)
        q = self.deformation.q
        acc = {}
        for w, cv in v.items():
            c = 1
            for t, letter in enumerate(w):
                if letter == i:
                    _add_to(acc, w[:t] + w[t + 1 :], cv * c)
                c = c * q(i, letter)
        return FockVector(acc)

    def gaussian(self, i, v: FockVector) -> FockVector:
        """The field operator: creation plus annihilation."""
        return self.create(i, v) + self.annihilate(i, v)

    def gaussian_word(self, word, v: FockVector) -> FockVector:
        """Apply the product of field operators indexed by the word.

        The word reads left to right as operator factors, so the rightmost
        letter acts first.
        """
        for letter in reversed(tuple(word)):
            v = self.gaussian(letter, v)
        return v

    def right_annihilate(self, i, v: FockVector) -> FockVector:
        """Strip the rightmost letter when it equals i; kill the vacuum."""
        self._check_letter(i)
        acc = {}
        for w, c in v.items():
            if w and w[-1] == i:
                _add_to(acc, w[:-1], c)
        return FockVector(acc)

    def right_annihilate_adjoint(self, i, v: FockVector) -> FockVector:
        """Adjoint of right annihilation with respect to the twisted product.

        There is no closed letter-level formula for general deformation, so
        each level solves the next level's Gram system:
        <adjoint(x), y> = <x, right_annihilate(y)> for all level-(n+1) y.
        """
        self._check_letter(i)
        acc = {}
        for n in v.levels():
            if n + 1 > self.level:
                raise TruncationError(
                    f"adjoint on a level-{n} component exceeds level {self.level}"
                )
            comp = {w: c for w, c in v.items() if len(w) == n}
            words_up = self.words(n + 1)
            rhs = []
            for x in words_up:
                if x[-1] == i:
                    rhs.append(self._pair_with_basis(comp, n, x[:-1]))
                else:
                    rhs.append(0)
            coeffs = self._gram_solve(n + 1, rhs)
            for word, c in zip(words_up, coeffs):
                _add_to(acc, word, c)
        return FockVector(acc)

    def trace(self, v: FockVector):
        """Vacuum expectation of the operator whose vacuum vector is v."""
        return v.coeff(())

    def _check_letter(self, i):
        if not 1 <= i <= self.d:
            raise ValueError(f"letter {i} outside 1..{self.d}")

    # -- inner product -------------------------------------------------------

    def inner(self, u: FockVector, v: FockVector):
        """Twisted inner product; levels are orthogonal by construction."""
        if self.deformation.is_constant:
            total = 0
            for n in set(u.levels()) & set(v.levels()):
                idx = self.word_index(n)
                g = self.gram(n)
                for a, ca in u.level(n).items():
                    row = g[idx[a]]
                    for b, cb in v.level(n).items():
                        total = total + ca * cb * row[idx[b]]
            return total
        return self.inner_recursive(u, v)

    def inner_recursive(self, u: FockVector, v: FockVector):
        """Inner product by peeling created letters against annihilation.

        Works for any deformation matrix; coincides with the permutation-sum
        product when the matrix is constant.
        """
        total = 0
        for n in set(u.levels()) & set(v.levels()):
            for a, ca in u.level(n).items():
                for b, cb in v.level(n).items():
                    total = total + ca * cb * self._ip_basis(a, b)
        return total

    def _ip_basis(self, u, v):
        if len(u) != len(v):
            return 0
        if not u:
            return 1
        key = (u, v)
        with self._lock:
            got = self._ip_memo.get(key)
        if got is not None:
            return got
        i = u[0]
        q = self.deformation.q
        total = 0
        c = 1
        for t, letter in enumerate(v):
            if letter == i:
                total = total + c * self._ip_basis(u[1:], v[:t] + v[t + 1 :])
            c = c * q(i, letter)
        with self._lock:
            self._ip_memo[key] = total
        return total

    def _pair_with_basis(self, comp, n, y):
        """<component, e_y> for a level-n coefficient dict."""
        if self.deformation.is_constant:
            idx = self.word_index(n)
            g = self.gram(n)
            col = idx[y]
            total = 0
            for a, ca in comp.items():
                total = total + ca * g[idx[a]][col]
            return total
        total = 0
        for a, ca in comp.items():
            total = total + ca * self._ip_basis(a, y)
        return total

    # -- Gram data ------------------------------------------------------------

    def gram(self, n):
        """Level-n Gram matrix (list of rows) in the lexicographic basis.

        Constant deformation: assembled from the permutation sum, grouped by
        inversion count. Otherwise: the peeling recursion entry by entry.
        """
        with self._lock:
            got = self._gram.get(n)
        if got is not None:
            return got
        words = self.words(n)
        if self.deformation.is_constant:
            q = self.deformation.constant_value
            counts = _count_matrices(n, self.d)
            size = len(words)
            mat = [[0] * size for _ in range(size)]
            power = {}
            acc = 1
            for k in range(max(counts) + 1):
                power[k] = acc
                acc = acc * q
            for k, cmat in counts.items():
                qk = power[k]
                rows, cols = np.nonzero(cmat)
                for r, c, cnt in zip(rows.tolist(), cols.tolist(), cmat[rows, cols].tolist()):
                    mat[r][c] = mat[r][c] + qk * cnt
        else:
            mat = [[self._ip_basis(a, b) for b in words] for a in words]
        with self._lock:
            self._gram.setdefault(n, mat)
        return self._gram[n]

    def _lu(self, n):
        with self._lock:
            got = self._gram_lu.get(n)
        if got is not None:
            return got
        mat = self.gram(n)
        size = len(mat)
        lu = [list(row) for row in mat]
        perm = list(range(size))
        numeric = any(
            isinstance(v, float) for row in self.deformation.entries for v in row
        )
        for col in range(size):
            pivot_row = None
            if numeric:
                best = -1.0
                for r in range(col, size):
                    mag = abs(lu[r][col])
                    if mag > best:
                        best, pivot_row = mag, r
                if best == 0.0:
                    pivot_row = None
            else:
                for r in range(col, size):
                    if lu[r][col]:
                        pivot_row = r
                        break
            if pivot_row is None:
                raise GramSingularError(f"level-{n} Gram is singular")
            if pivot_row != col:
                lu[col], lu[pivot_row] = lu[pivot_row], lu[col]
                perm[col], perm[pivot_row] = perm[pivot_row], perm[col]
            piv = lu[col][col]
            for r in range(col + 1, size):
                f = _div(lu[r][col], piv)
                lu[r][col] = f
                if f:
                    row_r, row_c = lu[r], lu[col]
                    for c in range(col + 1, size):
                        row_r[c] = row_r[c] - f * row_c[c]
        with self._lock:
            self._gram_lu.setdefault(n, (perm, lu))
        return self._gram_lu[n]

    def _gram_solve(self, n, rhs):
        perm, lu = self._lu(n)
        size = len(lu)
        y = [rhs[p] for p in perm]
        for r in range(size):
            row = lu[r]
            acc = y[r]
            for c in range(r):
                if row[c] and y[c]:
                    acc = acc - row[c] * y[c]
            y[r] = acc
        for r in range(size - 1, -1, -1):
            row = lu[r]
            acc = y[r]
            for c in range(r + 1, size):
                if row[c] and y[c]:
                    acc = acc - row[c] * y[c]
            y[r] = _div(acc, row[r])
        return y
