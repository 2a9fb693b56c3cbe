"""Independent spectral ground truth.

Three ways of counting eigenvalues outside [0, 4]:

* roots of the Jost polynomial in (0, 1) and (-1, 0) (exact Sturm chains),
* inertia of finite sections of the operator (LDL^T pivot signs),
* the component classification in :mod:`jacobi_threshold.classifier`.

plus the perturbation determinant, threshold virtual states, and a direct
linear-system solve for the Jost function.  Everything touching ``sqrt(2)``
lives here and runs in floating point.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .core import (
    DomainError,
    Potential,
    ThetaPolynomial,
    is_exact,
    jost_coeffs,
    theta_of_z,
    z_of_theta,
)
from .sturm import isolate_roots, sturm_count

SQRT2 = math.sqrt(2.0)

DEFAULT_N = 3000
DEFAULT_DELTA = 1e-8
DEFAULT_RESIDUAL_TOL = 1e-10


class PoleError(ZeroDivisionError):
    """Perturbation determinant evaluated at a genuine threshold pole."""


class SingularSystemError(np.linalg.LinAlgError):
    pass


# -- Jost-root counting ------------------------------------------------------

def count_bound_states_jost(pot: Potential) -> tuple[int, int]:
    """``(k, l)``: eigenvalues below 0 and above 4, as Jost roots in
    (0, 1) and (-1, 0) respectively."""
    p = jost_coeffs(pot.as_exact())
    return sturm_count(p, 0, 1), sturm_count(p, -1, 0)


def bound_state_energies(pot: Potential, width: float = 1e-12) -> tuple[list, list]:
    """Eigenvalues below 0 and above 4, located through isolated Jost roots."""
    p = jost_coeffs(pot.as_exact())
    below = sorted(float(z_of_theta(t)) for t in isolate_roots(p, 0, 1, width))
    above = sorted(float(z_of_theta(t)) for t in isolate_roots(p, -1, 0, width))
    return below, above


# -- finite sections ---------------------------------------------------------

@dataclass(frozen=True)
class TruncatedOperator:
    """Leading ``N x N`` block of ``J + V``."""

    diag: np.ndarray
    offdiag: np.ndarray

    @classmethod
    def from_potential(cls, pot: Potential, N: int = DEFAULT_N) -> "TruncatedOperator":
        if N < pot.n + 2:
            raise ValueError(f"truncation N={N} too small for n={pot.n}")
        diag = np.full(N, 2.0)
        for k in range(1, pot.n + 1):
            diag[k - 1] += float(pot.v(k))
        off = np.full(N - 1, -1.0)
        off[0] = -SQRT2
        diag.setflags(write=False)
        off.setflags(write=False)
        return cls(diag, off)

    @property
    def N(self) -> int:
        return len(self.diag)

    def dense(self) -> np.ndarray:
        return np.diag(self.diag) + np.diag(self.offdiag, 1) + np.diag(self.offdiag, -1)

    def gershgorin(self) -> tuple[float, float]:
        rad = np.zeros(self.N)
        rad[:-1] += np.abs(self.offdiag)
        rad[1:] += np.abs(self.offdiag)
        return float(np.min(self.diag - rad)), float(np.max(self.diag + rad))


def _negative_pivots(d: Sequence[float], e2: Sequence[float], x: float) -> int | None:
    count = 0
    piv = d[0] - x
    if piv == 0.0:
        return None
    if piv < 0.0:
        count += 1
    for k in range(1, len(d)):
        piv = d[k] - x - e2[k - 1] / piv
        if piv == 0.0:
            return None
        if piv < 0.0:
            count += 1
    return count


def tridiag_inertia(op: TruncatedOperator, x: float, retries: int = 3) -> int:
    """Number of eigenvalues of ``op`` strictly below ``x``.

    Counts negative pivots of ``op - x`` via ``d_k = a_k - x - b_{k-1}^2/d_{k-1}``.
    An exactly zero pivot means ``x`` hit an eigenvalue of a leading block;
    ``x`` is then nudged by a few ulps and the count retried.
    """
    d = op.diag.tolist()
    e2 = (op.offdiag ** 2).tolist()
    xx = float(x)
    for attempt in range(retries + 1):
        count = _negative_pivots(d, e2, xx)
        if count is not None:
            return count
        xx = xx + 4 * np.spacing(max(1.0, abs(xx))) * (attempt + 1)
    raise ArithmeticError(f"pivot breakdown at x={x} after {retries} retries")


def count_bound_states_matrix(pot: Potential, N: int = DEFAULT_N,
                              delta: float = DEFAULT_DELTA) -> tuple[int, int]:
    """Counts below ``-delta`` and above ``4 + delta`` for the ``N x N`` section."""
    if N < max(pot.n + 2, 500):
        raise ValueError("N must be at least max(n + 2, 500)")
    if delta <= 0:
        raise ValueError("delta must be positive")
    op = TruncatedOperator.from_potential(pot, N)
    k = tridiag_inertia(op, -delta)
    l = N - tridiag_inertia(op, 4.0 + delta)
    return k, l


def locate_eigenvalues(op: TruncatedOperator, lo: float, hi: float,
                       tol: float = 1e-10) -> list[float]:
    """All eigenvalues of ``op`` in ``[lo, hi)`` by bisection on the inertia count."""
    c_lo, c_hi = tridiag_inertia(op, lo), tridiag_inertia(op, hi)
    out = []

    def rec(a, b, ca, cb):
        if cb == ca:
            return
        if b - a <= tol:
            out.extend([(a + b) / 2] * (cb - ca))
            return
        m = (a + b) / 2
        cm = tridiag_inertia(op, m)
        rec(a, m, ca, cm)
        rec(m, b, cm, cb)

    rec(lo, hi, c_lo, c_hi)
    return out


@dataclass
class SpectralReport:
    eigenvalues_below: list
    eigenvalues_above: list
    method: str
    residuals: dict = field(default_factory=dict)

    @property
    def counts(self) -> tuple[int, int]:
        return len(self.eigenvalues_below), len(self.eigenvalues_above)

    def as_dict(self) -> dict:
        k, l = self.counts
        return {
            "method": self.method,
            "k": k,
            "l": l,
            "eigenvalues_below": self.eigenvalues_below,
            "eigenvalues_above": self.eigenvalues_above,
            "residuals": self.residuals,
        }


def spectrum_sturm(pot: Potential) -> SpectralReport:
    below, above = bound_state_energies(pot)
    return SpectralReport(below, above, "sturm")


def spectrum_inertia(pot: Potential, N: int = DEFAULT_N,
                     delta: float = DEFAULT_DELTA) -> SpectralReport:
    op = TruncatedOperator.from_potential(pot, max(N, pot.n + 2))
    g_lo, g_hi = op.gershgorin()
    below = locate_eigenvalues(op, g_lo - 1.0, -delta) if g_lo < -delta else []
    above = locate_eigenvalues(op, 4.0 + delta, g_hi + 1.0) if g_hi > 4.0 + delta else []
    return SpectralReport(below, above, "inertia")


# -- perturbation determinant ------------------------------------------------

def _divide_linear(coeffs: Sequence, root) -> list:
    """Synthetic division by ``(theta - root)``; the remainder must vanish."""
    out = []
    acc = 0
    for c in reversed(coeffs):
        acc = acc * root + c
        out.append(acc)
    rem = out.pop()
    if rem != 0:
        raise ArithmeticError("nonzero remainder")
    return out[::-1]


def perturbation_det(pot: Potential, theta):
    """``det_{J_n/J}`` at ``z = 2 - theta - 1/theta``: ratio of the Jost
    function to the free one ``(1 - theta^2)/2``.

    At ``theta = +-1`` a finite value is returned only if the Jost value
    there vanishes (removable singularity); otherwise :class:`PoleError`.
    """
    if theta == 0:
        raise ZeroDivisionError("theta = 0 is z = infinity")
    if is_exact(theta):
        theta = Fraction(theta)
    p = jost_coeffs(pot)
    if theta not in (1, -1):
        return p(theta) / ((1 - theta * theta) / 2)
    coeffs = list(p.coeffs)
    if p(theta) != 0:
        raise PoleError(f"threshold pole at theta={theta}")
    reduced = ThetaPolynomial(_divide_linear(coeffs, theta))
    # p = (theta - t0) r, free = (1 - theta)(1 + theta)/2
    if theta == 1:
        return -reduced(theta) / ((1 + theta) / 2)
    return reduced(theta) / ((1 - theta) / 2)


def has_removable_threshold(pot: Potential, edge: str) -> bool:
    """Whether the determinant stays bounded at the given edge."""
    t = 1 if edge == "left" else -1
    return jost_coeffs(pot.as_exact())(Fraction(t)) == 0


def threshold_scaled_det(pot: Potential, z: float, edge: str = "left") -> float:
    """``sqrt(-z) det`` (left, ``z < 0``) or ``sqrt(z - 4) det`` (right, ``z > 4``).

    Tends to the Jost value at theta = +1, resp. -1, as ``z`` approaches the edge.
    """
    z = float(z)
    if edge == "left":
        if not z < 0:
            raise DomainError("left edge needs z < 0")
        scale = math.sqrt(-z)
    elif edge == "right":
        if not z > 4:
            raise DomainError("right edge needs z > 4")
        scale = math.sqrt(z - 4)
    else:
        raise ValueError(f"edge must be 'left' or 'right', not {edge!r}")
    theta = theta_of_z(z)
    return scale * float(perturbation_det(pot.as_float(), theta))


# -- virtual states ----------------------------------------------------------

@dataclass
class VirtualState:
    edge: str
    components: np.ndarray  # Psi_1 .. Psi_N
    jost_value_at_zero: float
    residual: float


def _a(k: int) -> float:
    return -SQRT2 if k <= 1 else -1.0


def virtual_state(pot: Potential, edge: str = "left", N: int = 102) -> VirtualState:
    """Jost solution at a threshold, built backwards from its tail.

    ``Psi_k = theta^k`` (theta = +-1) for ``k >= max(2, n)``, then the
    difference equation is solved downwards to ``j_0``.  The residual is the
    max row defect of ``(J_n - z) Psi`` on rows ``1..N-2``; it is small
    exactly when ``j_0`` is, i.e. when Psi is a bounded solution.
    """
    if edge == "left":
        t, z = 1.0, 0.0
    elif edge == "right":
        t, z = -1.0, 4.0
    else:
        raise ValueError(f"edge must be 'left' or 'right', not {edge!r}")
    K = max(2, pot.n)
    if N < K + 2:
        raise ValueError(f"N must be at least {K + 2}")
    j = np.zeros(N + 1)  # j[0] .. j[N]
    for k in range(K, N + 1):
        j[k] = t ** k
    for k in range(K, 0, -1):
        b = 2.0 + float(pot.v(k))
        j[k - 1] = ((z - b) * j[k] - _a(k) * j[k + 1]) / _a(k - 1)
    psi = j[1:]
    op = TruncatedOperator.from_potential(pot, N)
    res = (op.diag - z) * psi
    res[:-1] += op.offdiag * psi[1:]
    res[1:] += op.offdiag * psi[:-1]
    residual = float(np.max(np.abs(res[: N - 2])))
    return VirtualState(edge, psi, float(j[0]), residual)


# -- linear-system oracles ---------------------------------------------------

def jost_via_linear_system(pot: Potential, theta) -> complex | float:
    """Jost function from a dense solve of the finite difference system.

    The unknowns ``j_0..j_K`` (``K = max(2, n)``) satisfy rows ``1..K`` of the
    difference equation with ``j_{K+1} = theta^{K+1}`` moved to the
    right-hand side, and ``j_K = theta^K``.  For ``n = 1`` the value comes
    from the rank-one resolvent formula instead.
    """
    if pot.n < 1:
        raise ValueError("needs n >= 1")
    theta = complex(theta) if isinstance(theta, complex) else float(theta)
    if theta == 0:
        raise ZeroDivisionError("theta = 0 is z = infinity")
    if pot.n == 1:
        free = (1 - theta * theta) / 2
        return det_via_resolvent(pot, theta) * free
    z = 2 - theta - 1 / theta
    K = max(2, pot.n)
    dtype = complex if isinstance(theta, complex) else float
    A = np.zeros((K + 1, K + 1), dtype=dtype)
    rhs = np.zeros(K + 1, dtype=dtype)
    for k in range(1, K + 1):
        row = k - 1
        A[row, k - 1] = _a(k - 1)
        A[row, k] = 2 - z + float(pot.v(k))
        if k < K:
            A[row, k + 1] = _a(k)
        else:
            rhs[row] = -_a(k) * theta ** (K + 1)
    A[K, K] = 1.0
    rhs[K] = theta ** K
    return _solve(A, rhs)[0]


def _solve(A: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    if not np.all(np.isfinite(A)):
        raise SingularSystemError("non-finite system")
    try:
        x = np.linalg.solve(A, rhs)
    except np.linalg.LinAlgError as exc:
        raise SingularSystemError(str(exc)) from exc
    if not np.all(np.isfinite(x)):
        raise SingularSystemError("non-finite solution")
    return x


def m_function(pot: Potential, theta, site: int):
    """``((J_{site-1} - z)^{-1} delta_site, delta_site)`` by the resolvent
    system that closes the tail with the free outgoing factor theta."""
    z = 2 - theta - 1 / theta
    dtype = complex if isinstance(theta, complex) else float
    if site == 1:
        # the sqrt(2) bond needs one extra row
        A = np.array([[2 - z, -SQRT2], [-SQRT2, 2 - z - theta]], dtype=dtype)
        return _solve(A, np.array([1, 0], dtype=dtype))[0]
    A = np.zeros((site, site), dtype=dtype)
    for i in range(1, site + 1):
        A[i - 1, i - 1] = (2 - z + float(pot.v(i))) if i < site else (2 - z - theta)
        if i < site:
            A[i - 1, i] = A[i, i - 1] = _a(i)
    rhs = np.zeros(site, dtype=dtype)
    rhs[-1] = 1
    return _solve(A, rhs)[-1]


def det_via_resolvent(pot: Potential, theta):
    """Perturbation determinant as the product of rank-one factors
    ``1 + v_k f_k`` added one site at a time."""
    theta = complex(theta) if isinstance(theta, complex) else float(theta)
    out = 1.0
    for k in range(1, pot.n + 1):
        out *= 1 + float(pot.v(k)) * m_function(pot, theta, k)
    return out


# -- large coupling ----------------------------------------------------------

def large_coupling_potential(I: Iterable[int], Jset: Iterable[int], t: float,
                             n: int | None = None) -> Potential:
    """Potential ``t (Q_J - P_I)``: strength ``-t`` on sites ``I``, ``+t`` on ``Jset``.

    Converted to the ``mu`` convention (``mu_1 = v_1/2``).
    """
    I, Jset = set(I), set(Jset)
    if I & Jset:
        raise ValueError(f"index sets overlap: {sorted(I & Jset)}")
    sites = I | Jset
    if any(i < 1 for i in sites):
        raise ValueError("sites are numbered from 1")
    size = max(sites, default=0) if n is None else n
    if size < max(sites, default=0):
        raise ValueError("n smaller than the largest site")
    v = [(-t if k in I else t if k in Jset else 0 * t) for k in range(1, size + 1)]
    return Potential.from_v(v)
