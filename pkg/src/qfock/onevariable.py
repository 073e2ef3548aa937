"""One-variable structure: deformed Hermite and Chebyshev polynomials.

With a single letter the Wick transform of the level-n basis vector is the
degree-n deformed Hermite polynomial H_n, generated by

    H_0 = 1,  H_1 = x,  H_{n+1} = x H_n - [n]_q H_{n-1}.

Chebyshev polynomials of the second kind follow the same recurrence with
[n]_q replaced by 1, and the first kind is reduced to the second by
C_1 = U_1 and C_n = U_n - U_{n-2} for n >= 2.

Three classical identities tie the two families together after rescaling
the variable by sqrt(1-q); the square root is handled numerically only,
except where even powers make everything exact (the moment identities).
"""

from __future__ import annotations

import math
from typing import NamedTuple

from .fock import FockSpace
from .scalars import FORMAL_Q, q_binom, q_factorial, q_int

__all__ = [
    "Poly1",
    "hermite",
    "cheb",
    "moments",
    "trace_cheb",
    "trace_cheb_odd",
    "rescale_identity_residual",
    "IdentityCheck",
    "q_identity_residual",
    "conjugate_cheb_series",
]


class Poly1:
    """Dense one-variable polynomial over any scalar mode, canonical form."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        coeffs = list(coeffs)
        while coeffs and not coeffs[-1]:
            coeffs.pop()
        object.__setattr__(self, "coeffs", tuple(coeffs))

    def __setattr__(self, name, value):
        raise AttributeError("Poly1 is immutable")

    @property
    def degree(self):
        return len(self.coeffs) - 1

    def coeff(self, k):
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else 0

    def __add__(self, other):
        if not isinstance(other, Poly1):
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for k, c in enumerate(b):
            out[k] = out[k] + c
        return Poly1(out)

    def __sub__(self, other):
        if not isinstance(other, Poly1):
            return NotImplemented
        return self + other.scaled(-1)

    def scaled(self, s):
        return Poly1(tuple(c * s for c in self.coeffs))

    def shifted(self):
        """Multiply by the variable."""
        if not self.coeffs:
            return self
        return Poly1((0,) + self.coeffs)

    def eval_at(self, x):
        acc = 0 if not isinstance(x, float) else 0.0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __eq__(self, other):
        if not isinstance(other, Poly1):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __repr__(self):
        return f"Poly1({list(self.coeffs)!r})"


def hermite(n, q=FORMAL_Q) -> Poly1:
    """Deformed Hermite polynomial of degree n at the given q scalar."""
    if n < 0:
        raise ValueError("degree must be nonnegative")
    prev, cur = Poly1((1,)), Poly1((0, 1))
    if n == 0:
        return prev
    for m in range(1, n):
        prev, cur = cur, cur.shifted() + prev.scaled(-q_int(m, q))
    return cur


def cheb(kind, n) -> Poly1:
    """Chebyshev polynomial: kind 'U' (second) or 'C' (first, via U)."""
    if n < 0:
        raise ValueError("degree must be nonnegative")
    if kind == "U":
        prev, cur = Poly1((1,)), Poly1((0, 1))
        if n == 0:
            return prev
        for _ in range(1, n):
            prev, cur = cur, cur.shifted() + prev.scaled(-1)
        return cur
    if kind == "C":
        if n == 0:
            raise ValueError("first-kind reduction starts at degree 1")
        if n == 1:
            return cheb("U", 1)
        return cheb("U", n) - cheb("U", n - 2)
    raise ValueError(f"unknown kind {kind!r}")


def moments(top, q=FORMAL_Q):
    """Vacuum moments of the one-variable field operator up to degree top."""
    space = FockSpace.with_scalar_q(1, q, level=top)
    out = [1]
    v = space.vacuum()
    for _ in range(top):
        v = space.gaussian(1, v)
        out.append(space.trace(v))
    return out


def trace_cheb(n, q=FORMAL_Q):
    """Vacuum trace of U_{2n} evaluated in the sqrt(1-q)-rescaled operator.

    Only integer powers of (1-q) appear, so the value is exact; it must
    equal (-1)^n q^{n(n+1)/2} and a mismatch raises.
    """
    u = cheb("U", 2 * n)
    m = moments(2 * n, q)
    one_minus_q = 1 - q
    value = 0
    for t in range(n + 1):
        c = u.coeff(2 * t)
        if c:
            value = value + c * one_minus_q**t * m[2 * t]
    expected = (-1) ** n * q ** (n * (n + 1) // 2)
    if not value == expected:
        raise ArithmeticError(f"even rescaled trace mismatch at n={n}")
    return value


def trace_cheb_odd(n, q=FORMAL_Q):
    """Vacuum trace of U_{2n-1} in the rescaled operator: exactly zero.

    Every term carries an odd moment of the field operator, and those
    vanish identically, so the stray half-power of (1-q) never matters.
    """
    if n < 1:
        raise ValueError("odd index must be positive")
    m = moments(2 * n - 1, q)
    for t in range(n):
        if m[2 * t + 1]:
            raise ArithmeticError("odd vacuum moment is nonzero")
    return 0


def rescale_identity_residual(n, q0):
    """Max coefficient residual of expanding U_n(x sqrt(1-q)) against the
    alternating Gaussian-binomial combination of rescaled Hermites."""
    if not -1 < q0 < 1:
        raise ValueError("needs |q0| < 1")
    q0 = float(q0)
    s = math.sqrt(1.0 - q0)
    u = cheb("U", n)
    lhs = [float(u.coeff(k)) * s**k for k in range(n + 1)]
    rhs = [0.0] * (n + 1)
    for k in range(n // 2 + 1):
        factor = (
            (-1.0) ** k
            * q0 ** (k * (k + 1) // 2)
            * float(q_binom(n - k, k, q0))
            * s ** (n - 2 * k)
        )
        h = hermite(n - 2 * k, q0)
        for t in range(n - 2 * k + 1):
            rhs[t] += factor * float(h.coeff(t))
    return max(abs(a - b) for a, b in zip(lhs, rhs))


class IdentityCheck(NamedTuple):
    residual: float
    tail_bound: float
    noise_bound: float


def _summation_tail(m, q0, N):
    """Geometric bound on the dropped terms of the binomial summation
    (1-q)^{m+1} sum_{n>N} q^{(n+1)(n-m)} (1+q^{n+1}) binom(n+m+1, n-m)_q."""
    x = abs(q0)
    if x == 0.0:
        return 0.0
    pref = abs(1.0 - q0) ** (m + 1) * 2.0
    gap = 1.0 - x

    def term_bound(n):
        # Gaussian binomial at |q| is at most (1-|q|)^-(n-m)
        return pref * (x ** (n + 1) / gap) ** (n - m)

    ratio = x ** (2 * N + 4 - m) / gap
    if ratio >= 0.5:
        raise ValueError("truncation too small for a geometric tail bound")
    return term_bound(N + 1) / (1.0 - ratio)


def q_identity_residual(m, q0, N) -> IdentityCheck:
    """Residual of the binomial summation identity against the ratio of
    deformed factorials, truncated at n = N.

    Reports the residual together with a geometric bound on the dropped
    terms and a forward-error bound on the float summation itself: at large
    N the truncation tail underflows while rounding noise does not, so both
    components matter when judging the residual.
    """
    if not -1 < q0 < 1:
        raise ValueError("needs |q0| < 1")
    if N < m:
        raise ValueError("truncation must reach the first term")
    q0 = float(q0)
    total = 0.0
    total_abs = 0.0
    for n in range(m, N + 1):
        term = (
            q0 ** ((n + 1) * (n - m))
            * (1.0 + q0 ** (n + 1))
            * float(q_binom(n + m + 1, n - m, q0))
        )
        total += term
        total_abs += abs(term)
    pref = (1.0 - q0) ** (m + 1)
    lhs = pref * total
    rhs = float(q_factorial(m, q0)) / float(q_factorial(2 * m + 1, q0))
    eps = 2.0**-52
    noise = (N - m + 4) * eps * (abs(pref) * total_abs + abs(rhs))
    return IdentityCheck(abs(lhs - rhs), _summation_tail(m, q0, N), noise)


def conjugate_cheb_series(M, q0) -> Poly1:
    """Partial sum of the first-kind Chebyshev expansion of the conjugate
    variable: sqrt(1-q) sum_{n<=M} (-1)^n q^{n(n+1)/2} C_{2n+1}(x sqrt(1-q)),
    returned as a float polynomial in the unrescaled variable."""
    if not -1 < q0 < 1:
        raise ValueError("needs |q0| < 1")
    q0 = float(q0)
    s = math.sqrt(1.0 - q0)
    out = [0.0] * (2 * M + 2)
    for n in range(M + 1):
        factor = (-1.0) ** n * q0 ** (n * (n + 1) // 2)
        c = cheb("C", 2 * n + 1)
        for k in range(2 * n + 2):
            ck = c.coeff(k)
            if ck:
                out[k] += factor * float(ck) * s ** (k + 1)
    return Poly1(out)
