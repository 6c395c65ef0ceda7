"""Companion-form generator and internal-model matrix data.

Coefficient convention used throughout the package: a coefficient vector
a = (a_1, ..., a_n) stands for the monic polynomial

    s^n + a_n s^(n-1) + ... + a_2 s + a_1

i.e. ``a[0]`` is the CONSTANT term and ``a[j]`` multiplies s^j.  This is
unconventional (most libraries put the constant last) but every closed-form
expression downstream depends on it, so it is enforced by tests rather than
hidden behind a conversion layer.

The steady-state generator matrix Phi(a) is the companion matrix carrying
that polynomial; the internal-model filter is the Hurwitz pair (M, N) with M
a 2n x 2n companion built the same way from m = (m_1, ..., m_2n), N the last
basis column, and Gamma the first basis row.  Xi(a) and Q tie the two
together; q_matrix satisfies the Sylvester identity M Q = Q Phi(a) - N Gamma,
which sylvester_residual evaluates.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .linalg import (
    Matrix,
    ShapeError,
    frobenius_norm,
    identity,
    mat_mul,
    mat_pow,
    solve_linear,
    sub,
)

# admissibility gates: roots on the imaginary axis, pairwise distinct
_ADMISSIBLE_RE_TOL = 1e-8
_ADMISSIBLE_SEP_TOL = 1e-6

# Hurwitz gate: strictly inside the left half-plane with a safety margin
_HURWITZ_MARGIN = -1e-6


class NotHurwitzError(ValueError):
    """The candidate filter polynomial has a non-decaying mode."""

    def __init__(self, message, eigenvalue=None):
        super().__init__(message)
        self.eigenvalue = eigenvalue


@dataclass(frozen=True)
class CoeffVector:
    """Coefficients (a_1, ..., a_n) of s^n + a_n s^(n-1) + ... + a_1."""

    a: tuple

    def __init__(self, a: Sequence[float]):
        vals = tuple(float(x) for x in a)
        if not vals:
            raise ValueError("coefficient vector must be nonempty")
        for x in vals:
            if not np.isfinite(x):
                raise ValueError("non-finite coefficient %r" % x)
        object.__setattr__(self, "a", vals)

    @property
    def n(self) -> int:
        return len(self.a)

    def roots(self) -> np.ndarray:
        # descending-order coefficients for np.roots: s^n + a_n s^(n-1) + ... + a_1
        return np.roots([1.0] + [self.a[j] for j in range(self.n - 1, -1, -1)])

    def is_admissible(self) -> bool:
        """Distinct roots, all on the imaginary axis (numerical check)."""
        r = self.roots()
        if r.size and np.max(np.abs(r.real)) > _ADMISSIBLE_RE_TOL:
            return False
        for i in range(len(r)):
            for j in range(i + 1, len(r)):
                if abs(r[i] - r[j]) < _ADMISSIBLE_SEP_TOL:
                    return False
        return True

    def require_admissible(self):
        if not self.is_admissible():
            raise ValueError(
                "coefficients %r do not give distinct roots on the imaginary axis" % (self.a,)
            )
        return self


def _coeffs(a) -> tuple:
    if isinstance(a, CoeffVector):
        return a.a
    return CoeffVector(a).a


def admissible_from_frequencies(freqs: Sequence[float]) -> CoeffVector:
    """Coefficients of prod_j (s^2 + w_j^2) for distinct positive frequencies.

    Convenience constructor for admissible vectors: the roots are +-i w_j.
    """
    poly = np.array([1.0])
    for w in freqs:
        w = float(w)
        if w <= 0:
            raise ValueError("frequencies must be positive, got %r" % w)
        poly = np.convolve(poly, np.array([1.0, 0.0, w * w]))
    # poly is descending (s^2k ... const); convert to constant-first
    return CoeffVector(poly[::-1][:-1])


def companion_matrix(a) -> Matrix:
    """Companion matrix with ones on the superdiagonal and bottom row -a.

    Its characteristic polynomial is s^n + a_n s^(n-1) + ... + a_2 s + a_1.
    """
    coeffs = _coeffs(a)
    n = len(coeffs)
    rows = [[0.0] * n for _ in range(n)]
    for i in range(n - 1):
        rows[i][i + 1] = 1.0
    for j in range(n):
        rows[n - 1][j] = -coeffs[j]
    return Matrix(rows)


@dataclass(frozen=True)
class InternalModelSpec:
    """Filter data (M, N, Gamma) for one internal-model component.

    n is the generator dimension; m holds the 2n filter coefficients, M is
    the 2n x 2n companion of m (verified Hurwitz at construction), N is the
    last basis column and Gamma the first basis row.
    """

    n: int
    m: tuple
    M: Matrix
    N: Matrix
    Gamma: Matrix


def hurwitz_pair(m: Sequence[float]) -> InternalModelSpec:
    """Build the filter pair (M, N) from 2n coefficients, rejecting non-Hurwitz m."""
    coeffs = tuple(float(x) for x in m)
    if len(coeffs) % 2 != 0 or not coeffs:
        raise ValueError("need an even number of coefficients (2n), got %d" % len(coeffs))
    n = len(coeffs) // 2
    M = companion_matrix(coeffs)
    eigs = np.linalg.eigvals(np.array(M.to_lists()))
    worst = eigs[int(np.argmax(eigs.real))]
    if worst.real > _HURWITZ_MARGIN:
        raise NotHurwitzError(
            "filter polynomial is not Hurwitz: eigenvalue %g%+gj has real part >= %g"
            % (worst.real, worst.imag, _HURWITZ_MARGIN),
            eigenvalue=complex(worst),
        )
    N = Matrix([[0.0]] * (2 * n - 1) + [[1.0]])
    Gamma = Matrix([[1.0] + [0.0] * (n - 1)])
    return InternalModelSpec(n=n, m=coeffs, M=M, N=N, Gamma=Gamma)


def xi_matrix(a, m: Sequence[float]) -> Matrix:
    """Xi(a) = Phi(a)^(2n) + sum_j m_j Phi(a)^(j-1), an n x n matrix.

    The leading power is formed by repeated squaring (mat_pow); the sum
    accumulates sequential powers since every one of them is needed.
    """
    coeffs = _coeffs(a)
    n = len(coeffs)
    mm = tuple(float(x) for x in m)
    if len(mm) != 2 * n:
        raise ShapeError("m has %d entries, expected 2n = %d" % (len(mm), 2 * n))
    phi = companion_matrix(coeffs)
    acc = mat_pow(phi, 2 * n).to_lists()
    p = identity(n)
    for j in range(1, 2 * n + 1):
        mj = mm[j - 1]
        for r in range(n):
            prow = p.row(r)
            for c in range(n):
                acc[r][c] += mj * prow[c]
        if j < 2 * n:
            p = mat_mul(p, phi)
    return Matrix(acc)


def is_xi_singular(a, m, tol: float = 1e-12) -> bool:
    """Flag (not fail) a numerically singular Xi; callers decide what to do."""
    from .linalg import determinant

    return abs(determinant(xi_matrix(a, m))) < tol


def q_matrix(a, m: Sequence[float]) -> Matrix:
    """Q, the 2n x n matrix whose j-th row is Gamma Xi(a)^-1 Phi(a)^(j-1).

    Its top n x n block is exactly Xi(a)^-1.  Raises SingularMatrixError when
    Xi is numerically singular.
    """
    coeffs = _coeffs(a)
    n = len(coeffs)
    xi = xi_matrix(coeffs, m)
    # first row of Xi^-1 == solution of Xi^T y = e_1
    xi_t = Matrix([[xi.at(r, c) for r in range(n)] for c in range(n)])
    row = solve_linear(xi_t, [1.0] + [0.0] * (n - 1))
    phi = companion_matrix(coeffs)
    rows = []
    for _ in range(2 * n):
        rows.append(list(row))
        row = [sum(row[k] * phi.at(k, c) for k in range(n)) for c in range(n)]
    return Matrix(rows)


def sylvester_residual(spec: InternalModelSpec, Q: Matrix, a) -> float:
    """Frobenius norm of M Q - Q Phi(a) + N Gamma."""
    coeffs = _coeffs(a)
    n = len(coeffs)
    if spec.n != n:
        raise ShapeError("spec dimension %d does not match coefficient count %d" % (spec.n, n))
    if Q.rows != 2 * n or Q.cols != n:
        raise ShapeError("Q is %dx%d, expected %dx%d" % (Q.rows, Q.cols, 2 * n, n))
    phi = companion_matrix(coeffs)
    residual = sub(mat_mul(spec.M, Q), sub(mat_mul(Q, phi), mat_mul(spec.N, spec.Gamma)))
    return frobenius_norm(residual)
