"""Exact real-root counting with Sturm chains over the rationals."""
from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .core import ThetaPolynomial, to_exact

# Polynomials here are lists of Fractions, lowest degree first, trimmed.


def _trim(p: list) -> list:
    while p and p[-1] == 0:
        p.pop()
    return p


def _deriv(p: Sequence) -> list:
    return _trim([i * c for i, c in enumerate(p)][1:])


def _divmod(a: Sequence, b: Sequence) -> tuple[list, list]:
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    r = list(a)
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 0)
    lead = b[-1]
    db = len(b) - 1
    while len(r) - 1 >= db and r:
        shift = len(r) - 1 - db
        f = r[-1] / lead
        q[shift] = f
        for i, c in enumerate(b):
            r[shift + i] -= f * c
        r.pop()  # leading term cancels exactly
        _trim(r)
    return _trim(q), r


def _monic(p: Sequence) -> list:
    lead = p[-1]
    return [c / lead for c in p]


def _gcd(a: Sequence, b: Sequence) -> list:
    a, b = list(a), list(b)
    while b:
        _, r = _divmod(a, b)
        a, b = b, (_monic(r) if r else r)
    return _monic(a) if a else a


def _eval(p: Sequence, x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(p):
        acc = acc * x + c
    return acc


def square_free(p: Sequence) -> list:
    """``p / gcd(p, p')``: same roots, all simple."""
    p = _trim([to_exact(c) for c in p])
    if not p:
        raise ValueError("zero polynomial")
    d = _deriv(p)
    if not d:
        return p
    g = _gcd(p, d)
    q, r = _divmod(p, g)
    assert not r
    return q


def sturm_chain(p: Sequence) -> list[list]:
    """Classical chain ``p, p', -rem(p, p'), ...``; each remainder is
    rescaled by a positive constant to keep coefficients small."""
    chain = [list(p)]
    d = _deriv(p)
    if not d:
        return chain
    chain.append(d)
    while True:
        _, r = _divmod(chain[-2], chain[-1])
        if not r:
            return chain
        scale = abs(r[-1])
        chain.append([-c / scale for c in r])


def _variations(chain: Sequence[Sequence], x: Fraction) -> int:
    count = 0
    last = 0
    for p in chain:
        v = _eval(p, x)
        if v == 0:
            continue
        s = 1 if v > 0 else -1
        if last and s != last:
            count += 1
        last = s
    return count


def _coeff_list(p) -> list:
    coeffs = p.coeffs if isinstance(p, ThetaPolynomial) else p
    return _trim([to_exact(c) for c in coeffs])


def sturm_count(p, a, b) -> int:
    """Number of distinct real roots of ``p`` in the open interval ``(a, b)``.

    Float coefficients and endpoints are converted to rationals exactly, so
    the count is exact for the polynomial actually given.
    """
    a, b = to_exact(a), to_exact(b)
    if not a < b:
        raise ValueError("need a < b")
    coeffs = _coeff_list(p)
    if not coeffs:
        raise ValueError("zero polynomial")
    sf = square_free(coeffs)
    # roots sitting on an endpoint are simple in sf; divide them out
    for e in (a, b):
        if _eval(sf, e) == 0:
            sf, r = _divmod(sf, [-e, Fraction(1)])
            assert not r
    if len(sf) <= 1:
        return 0
    chain = sturm_chain(sf)
    return _variations(chain, a) - _variations(chain, b)


def isolate_roots(p, a, b, width: float = 1e-12) -> list[float]:
    """Distinct real roots of ``p`` in ``(a, b)``, each located by exact
    bisection to within ``width``; returned as floats in increasing order."""
    a, b = to_exact(a), to_exact(b)
    coeffs = _coeff_list(p)
    sf = square_free(coeffs)
    for e in (a, b):
        if _eval(sf, e) == 0:
            sf, _ = _divmod(sf, [-e, Fraction(1)])
    if len(sf) <= 1:
        return []
    chain = sturm_chain(sf)

    def count(lo, hi):
        return _variations(chain, lo) - _variations(chain, hi)

    # count(lo, hi) is the number of roots in (lo, hi]; split until one per box
    roots = []
    stack = [(a, b, count(a, b))]
    while stack:
        lo, hi, k = stack.pop()
        if k == 0:
            continue
        if k == 1:
            roots.append(_refine(sf, lo, hi, Fraction(width)))
            continue
        mid = (lo + hi) / 2
        if _eval(sf, mid) == 0:
            roots.append(float(mid))
            stack.append((lo, mid, count(lo, mid) - 1))
            stack.append((mid, hi, count(mid, hi)))
        else:
            stack.append((lo, mid, count(lo, mid)))
            stack.append((mid, hi, count(mid, hi)))
    return sorted(roots)


def _refine(sf: Sequence, lo: Fraction, hi: Fraction, width: Fraction) -> float:
    """Bisect a single simple root inside ``(lo, hi)``."""
    flo = _eval(sf, lo)
    if flo == 0:  # lo is an excluded endpoint; step inside
        lo = lo + (hi - lo) / 2 ** 60
        flo = _eval(sf, lo)
    while hi - lo > width:
        mid = (lo + hi) / 2
        fm = _eval(sf, mid)
        if fm == 0:
            return float(mid)
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return float((lo + hi) / 2)
