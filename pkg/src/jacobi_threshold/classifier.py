"""Component classification of potentials.

A point is placed in a component of the complement of ``V(Q_n)`` (family D)
or ``V(C_n)`` (family G) by counting sign changes along its Q-sequence.
Since ``Q_{m+1}/Q_m = mu_{m+1} - Phi_m``, a sign change between consecutive
terms is the same as lying below the graph of ``Phi_m``; the count is the
component index produced by the epigraph/hypograph construction.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .core import (
    DEFAULT_TOL,
    OnVarietyError,
    Potential,
    big_q_sequence,
    is_exact,
    phi,
)


def sign_changes(seq: Sequence, tol: float = DEFAULT_TOL) -> tuple[int, bool]:
    """Count sign alternations in ``seq`` after dropping zero entries.

    Returns ``(count, last_is_zero)``.  Float entries are zero when
    ``|x| <= tol*max(1, M)``, ``M`` the running maximum magnitude.
    Raises ``ValueError`` if ``seq[0]`` is zero or two consecutive entries
    are zero (impossible for a genuine Q-sequence).
    """
    count = 0
    last_sign = 0
    prev_zero = False
    scale = 0.0
    for i, x in enumerate(seq):
        if is_exact(x):
            zero = x == 0
        else:
            scale = max(scale, abs(x))
            zero = abs(x) <= tol * max(1.0, scale)
        if zero:
            if i == 0:
                raise ValueError("sequence must start with a nonzero entry")
            if prev_zero:
                raise ValueError(f"two consecutive zeros at positions {i - 1}, {i}")
            prev_zero = True
            continue
        prev_zero = False
        s = 1 if x > 0 else -1
        if last_sign and s != last_sign:
            count += 1
        last_sign = s
    return count, prev_zero


@dataclass(frozen=True)
class RegionClassification:
    """Verdict for one point.

    ``on_variety`` False: the point is in component ``index`` (0..n).
    ``on_variety`` True: the point is on the variety, on the stratum whose
    prefix lies in component ``index`` (0..n-1).
    """

    index: int
    on_variety: bool
    family: str
    n: int

    @property
    def verdict(self) -> str:
        return "on_variety" if self.on_variety else "interior"

    def as_dict(self) -> dict:
        return {"family": self.family, "n": self.n, "verdict": self.verdict, "index": self.index}


def _classify_sequence(qs: Sequence, family: str, n: int, tol: float) -> RegionClassification:
    count, last_zero = sign_changes(qs, tol=tol)
    # with a zero last term the count already equals that of (Q_0..Q_{n-1})
    return RegionClassification(count, last_zero, family, n)


def classify_D(point: Potential, tol: float = DEFAULT_TOL) -> RegionClassification:
    """Component of ``R^n \\ V(Q_n)`` containing ``point``, or its stratum."""
    if point.n < 1:
        raise ValueError("classification needs n >= 1")
    return _classify_sequence(big_q_sequence(point), "D", point.n, tol)


def classify_G(mu: Potential, tol: float = DEFAULT_TOL) -> RegionClassification:
    """Component of ``R^n \\ V(C_n)``; these are the D-components shifted by ``e_n``."""
    if mu.n < 1:
        raise ValueError("classification needs n >= 1")
    one = 1 if is_exact(mu.mu[-1]) else 1.0
    return _classify_sequence(big_q_sequence(mu.shifted_last(-one)), "G", mu.n, tol)


def classify_by_phi(point: Potential, tol: float = DEFAULT_TOL) -> int:
    """Component index by the inductive epigraph/hypograph rule.

    Start at 0 if ``mu_1 > -1`` else 1; at each later coordinate the index
    stays when ``mu_{m+1} > Phi_m(mu_1..mu_m)`` and increases by one when
    below.  Raises :class:`OnVarietyError` if the point or any prefix lies
    on a variety.  Used as an independent check of :func:`classify_D`.
    """
    k = 0
    for m in range(point.n):
        prefix = Potential(point.mu[:m])
        bound = phi(prefix, tol)
        x = point.mu[m]
        if x == bound:
            raise OnVarietyError(k)
        if x < bound:
            k += 1
    return k


@dataclass(frozen=True)
class SpectralClassification:
    k_left: int
    l_right: int
    critical_left: bool
    critical_right: bool
    guaranteed: bool

    def as_dict(self) -> dict:
        return {
            "k_left": self.k_left,
            "l_right": self.l_right,
            "critical_left": self.critical_left,
            "critical_right": self.critical_right,
            "guaranteed": self.guaranteed,
        }


def classify_spectral(mu: Potential, tol: float = DEFAULT_TOL) -> SpectralClassification:
    """Eigenvalue counts below 0 and above 4 read off from the components.

    On a critical point the stratum index is the count.  When both edges are
    critical the counts are still reported but ``guaranteed`` is False.
    """
    left = classify_G(mu, tol)
    right = classify_G(-mu, tol)
    return SpectralClassification(
        k_left=left.index,
        l_right=right.index,
        critical_left=left.on_variety,
        critical_right=right.on_variety,
        guaranteed=not (left.on_variety and right.on_variety),
    )


def on_variety_point(prefix: Potential, family: str = "C", tol: float = DEFAULT_TOL) -> Potential:
    """Append ``mu_n`` so that the point lies on ``V(Q_n)`` or ``V(C_n)``.

    ``mu_n = Phi_{n-1}(prefix)`` for family ``"Q"``, plus one for ``"C"``.
    """
    if family not in ("Q", "C"):
        raise ValueError(f"family must be 'Q' or 'C', not {family!r}")
    last = phi(prefix, tol)
    if family == "C":
        last = last + 1
    return Potential(prefix.mu + (last,))
