"""Scalars, potentials, the dispersion map and the threshold recurrences.

Values are either exact (:class:`fractions.Fraction` / ``int``) or ``float``.
The arithmetic below is written once and works for both; the mode of a
computation is simply the type of its inputs.  Exact inputs give exact
outputs, which is what identities and variety constructions rely on.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Sequence, Union

Scalar = Union[Fraction, int, float]

DEFAULT_TOL = 1e-12


class DomainError(ValueError):
    """Argument outside the domain of a map."""


class OnVarietyError(ArithmeticError):
    """A denominator ``Q_m`` vanished, i.e. the point lies on ``V(Q_m)``.

    ``index`` is the sign-change count of ``(Q_0, ..., Q_{m-1})``, which
    names the stratum of the variety containing the point.
    """

    def __init__(self, index: int, message: str = ""):
        super().__init__(message or f"point lies on the nodal variety (stratum {index})")
        self.index = index


def is_exact(x) -> bool:
    return isinstance(x, Rational)


def to_exact(x) -> Fraction:
    """Convert ``x`` to a Fraction without rounding.

    Strings are parsed as ``p/q`` or decimal literals (``"0.1"`` is 1/10);
    floats are converted bit-exactly.
    """
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, float) and not math.isfinite(x):
        raise ValueError(f"non-finite value {x!r}")
    return Fraction(x)


def is_zero(x, scale: float = 1.0, tol: float = DEFAULT_TOL) -> bool:
    """Zero test: exact for rationals, ``|x| <= tol*max(1, scale)`` for floats."""
    if is_exact(x):
        return x == 0
    return abs(x) <= tol * max(1.0, scale)


# -- dispersion relation -----------------------------------------------------

def _exact_sqrt(x: Fraction) -> Fraction | None:
    if x < 0:
        return None
    p, q = x.numerator, x.denominator
    rp, rq = math.isqrt(p), math.isqrt(q)
    if rp * rp == p and rq * rq == q:
        return Fraction(rp, rq)
    return None


def theta_of_z(z):
    """Root of ``theta + 1/theta = 2 - z`` lying in the closed unit disk.

    Real ``z`` must lie outside the open interval (0, 4).  ``z = 0`` maps to
    +1 and ``z = 4`` to -1.  Rational ``z`` gives a Fraction whenever the
    root is rational, otherwise a float; non-real ``z`` gives a complex.
    """
    if isinstance(z, complex):
        if z.imag == 0:
            z = z.real
        else:
            s = 2 - z
            r = cmath.sqrt(s * s - 4)
            if (s.conjugate() * r).real < 0:
                r = -r
            return 2 / (s + r)
    if 0 < z < 4:
        raise DomainError(f"z={z} lies inside the continuous spectrum (0, 4)")
    if z == 0:
        return Fraction(1) if is_exact(z) else 1.0
    if z == 4:
        return Fraction(-1) if is_exact(z) else -1.0
    s = 2 - z
    if is_exact(z):
        r = _exact_sqrt(Fraction(s) ** 2 - 4)
        if r is not None:
            return 2 / (s + r) if s > 0 else 2 / (s - r)
        s = float(s)
    r = math.sqrt(s * s - 4)
    # the larger-magnitude denominator avoids cancellation
    return 2 / (s + r) if s > 0 else 2 / (s - r)


def z_of_theta(theta):
    """Spectral parameter ``2 - theta - 1/theta``."""
    if theta == 0:
        raise ZeroDivisionError("theta = 0 corresponds to z = infinity")
    if is_exact(theta):
        theta = Fraction(theta)
    return 2 - theta - 1 / theta


# -- potentials --------------------------------------------------------------

@dataclass(frozen=True)
class Potential:
    """Diagonal perturbation ``diag(2*mu_1, mu_2, ..., mu_n, 0, ...)``.

    ``mu`` is the coordinate vector; :meth:`v` gives the actual diagonal
    entries added to the background operator.
    """

    mu: tuple

    def __init__(self, mu: Iterable = ()):
        object.__setattr__(self, "mu", tuple(mu))

    @classmethod
    def from_v(cls, v: Sequence) -> "Potential":
        """Build from diagonal strengths ``v_1..v_n``."""
        v = list(v)
        if v:
            v[0] = v[0] / 2 if not is_exact(v[0]) else Fraction(v[0]) / 2
        return cls(v)

    @classmethod
    def exact(cls, values: Iterable) -> "Potential":
        return cls(to_exact(x) for x in values)

    @property
    def n(self) -> int:
        return len(self.mu)

    def __len__(self) -> int:
        return len(self.mu)

    def v(self, k: int):
        """Diagonal strength at site ``k`` (1-based); zero outside the support."""
        if k < 1:
            raise IndexError("sites are numbered from 1")
        if k > self.n:
            return 0
        return 2 * self.mu[0] if k == 1 else self.mu[k - 1]

    def as_float(self) -> "Potential":
        return Potential(float(x) for x in self.mu)

    def as_exact(self) -> "Potential":
        return Potential(to_exact(x) for x in self.mu)

    def shifted_last(self, delta) -> "Potential":
        """Same potential with ``mu_n`` replaced by ``mu_n + delta``."""
        if not self.mu:
            raise ValueError("empty potential has no last coordinate")
        return Potential(self.mu[:-1] + (self.mu[-1] + delta,))

    def __neg__(self) -> "Potential":
        return Potential(-x for x in self.mu)

    def __iter__(self):
        return iter(self.mu)


def reflect(pot: Potential) -> Potential:
    """Spatial inversion ``mu -> -mu`` (exchanges the two thresholds)."""
    return -pot


# -- recurrences -------------------------------------------------------------

def q_sequence(pot: Potential, z) -> list:
    """``q_0..q_n`` with ``q_0 = 2``, ``q_1 = 2 - z + v_1`` and
    ``q_{k+1} = (2 - z + v_{k+1}) q_k - q_{k-1}``."""
    qs = [Fraction(2) if is_exact(z) and all(map(is_exact, pot.mu)) else 2.0]
    if pot.n == 0:
        return qs
    qs.append(2 - z + pot.v(1))
    for k in range(2, pot.n + 1):
        qs.append((2 - z + pot.v(k)) * qs[-1] - qs[-2])
    return qs


def big_q_sequence(pot: Potential) -> tuple:
    """Threshold polynomials ``(Q_0, ..., Q_n)`` evaluated at ``pot.mu``.

    ``Q_0 = 1``, ``Q_1 = 1 + mu_1``, ``Q_{m+1} = (2 + mu_{m+1}) Q_m - Q_{m-1}``.
    """
    one = Fraction(1) if all(map(is_exact, pot.mu)) else 1.0
    qs = [one]
    prev = one  # Q_{-1} = 1 makes the m = 0 step give Q_1 = 1 + mu_1
    for m in pot.mu:
        qs.append((2 + m) * qs[-1] - prev)
        prev = qs[-2]
    return tuple(qs)


def q_scale(qs: Sequence) -> float:
    """Magnitude used by float zero tests on a Q-sequence."""
    return max((abs(float(q)) for q in qs), default=1.0)


def c_n(pot: Potential):
    """Left-threshold Jost value ``C_n = Q_n - Q_{n-1}``."""
    if pot.n == 0:
        raise ValueError("C_n needs n >= 1")
    qs = big_q_sequence(pot)
    return qs[-1] - qs[-2]


def phi(prefix: Potential, tol: float = DEFAULT_TOL):
    """``Phi_m = Q_{m-1}/Q_m - 2``; its graph is ``V(Q_{m+1})``.

    The empty prefix gives ``Phi_0 = -1`` (with the convention ``Q_{-1} = 1``),
    so that ``V(Q_1) = {-1}`` is the graph over a point.
    """
    qs = big_q_sequence(prefix)
    if prefix.n == 0:
        return qs[0] - 2
    if is_zero(qs[-1], q_scale(qs), tol):
        from .classifier import sign_changes

        count, _ = sign_changes(qs[:-1], tol=tol)
        raise OnVarietyError(count)
    return qs[-2] / qs[-1] - 2


# -- Jost polynomial ---------------------------------------------------------

class ThetaPolynomial:
    """Dense polynomial in the local parameter; ``coeffs[i]`` multiplies theta**i."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        c = list(coeffs)
        while c and c[-1] == 0:
            c.pop()
        self.coeffs = tuple(c)

    @property
    def degree(self) -> int:
        """Degree, with -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __eq__(self, other) -> bool:
        if isinstance(other, ThetaPolynomial):
            return self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self) -> str:
        return f"ThetaPolynomial({list(self.coeffs)!r})"

    def __len__(self) -> int:
        return len(self.coeffs)

    def __iter__(self):
        return iter(self.coeffs)

    def __getitem__(self, i):
        return self.coeffs[i] if i < len(self.coeffs) else 0

    def parity_reflect(self) -> "ThetaPolynomial":
        """``p(-theta)``: odd coefficients negated."""
        return ThetaPolynomial(-c if i % 2 else c for i, c in enumerate(self.coeffs))

    def is_exact(self) -> bool:
        return all(map(is_exact, self.coeffs))


def _pmul(a: Sequence, b: Sequence) -> list:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def _psub(a: Sequence, b: Sequence) -> list:
    m = max(len(a), len(b))
    return [(a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0) for i in range(m)]


def jost_coeffs(pot: Potential) -> ThetaPolynomial:
    """Coefficients of the Jost function as a polynomial in theta.

    ``j = (QQ_n - theta^2 QQ_{n-1}) / 2`` with ``QQ_0 = 2``,
    ``QQ_1 = 1 + v_1 theta + theta^2`` and
    ``QQ_k = (1 + v_k theta + theta^2) QQ_{k-1} - theta^2 QQ_{k-2}``.
    The free case ``n = 0`` is ``(1 - theta^2)/2``.
    """
    exact = all(map(is_exact, pot.mu))
    one = Fraction(1) if exact else 1.0
    half = one / 2
    if pot.n == 0:
        return ThetaPolynomial([half, 0 * one, -half])
    theta2 = [0 * one, 0 * one, one]
    prev = [2 * one]
    cur = [one, pot.v(1) * one, one]
    for k in range(2, pot.n + 1):
        step = [one, pot.v(k) * one, one]
        prev, cur = cur, _psub(_pmul(step, cur), _pmul(theta2, prev))
    num = _psub(cur, _pmul(theta2, prev))
    return ThetaPolynomial(c * half for c in num)


def jost_eval(pot: Potential, theta):
    """Jost function at ``theta`` (Horner evaluation of :func:`jost_coeffs`)."""
    if is_exact(theta):
        theta = Fraction(theta)
    return jost_coeffs(pot)(theta)


def jost_eval_via_q(pot: Potential, theta):
    """Same value through ``theta^n (q_n - theta q_{n-1}) / 2`` at ``z(theta)``.

    Independent of the theta-polynomial recurrence; requires ``theta != 0``.
    """
    z = z_of_theta(theta)
    if pot.n == 0:
        return (1 - theta * theta) / 2
    qs = q_sequence(pot, z)
    return theta ** pot.n * (qs[-1] - theta * qs[-2]) / 2
