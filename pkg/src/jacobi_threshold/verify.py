"""Cross-oracle verification suites (shared by ``jth verify`` and the tests)."""
from __future__ import annotations

import itertools
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from .classifier import (
    classify_by_phi,
    classify_D,
    classify_G,
    classify_spectral,
    on_variety_point,
)
from .core import (
    DEFAULT_TOL,
    OnVarietyError,
    Potential,
    big_q_sequence,
    c_n,
    jost_coeffs,
    jost_eval,
    z_of_theta,
)
from .oracle import (
    count_bound_states_jost,
    count_bound_states_matrix,
    jost_via_linear_system,
    large_coupling_potential,
    perturbation_det,
    threshold_scaled_det,
    virtual_state,
)
from .sampler import region_census


@dataclass
class SuiteResult:
    name: str
    checks: int = 0
    failures: list = field(default_factory=list)
    elapsed: float = 0.0
    time_limit: float | None = None
    notes: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        in_time = self.time_limit is None or self.elapsed < self.time_limit
        return not self.failures and in_time

    def check(self, ok: bool, what: str) -> None:
        self.checks += 1
        if not ok:
            self.failures.append(what)

    def as_dict(self) -> dict:
        return {
            "suite": self.name,
            "passed": self.passed,
            "checks": self.checks,
            "failures": len(self.failures),
            "first_failures": self.failures[:5],
            "elapsed_s": round(self.elapsed, 3),
            "time_limit_s": self.time_limit,
            **({"notes": self.notes} if self.notes else {}),
        }

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return (f"[{status}] {self.name}: {self.checks - len(self.failures)}/{self.checks} checks, "
                f"{self.elapsed:.2f}s (limit {self.time_limit}s)")


def _rational(rng: random.Random, lo: int, hi: int, den: int = 1000) -> Fraction:
    return Fraction(rng.randint(lo * den, hi * den), den)


def _rational_potential(rng, n, lo, hi, den=1000) -> Potential:
    return Potential(_rational(rng, lo, hi, den) for _ in range(n))


def _timed(name: str, limit: float):
    def deco(fn: Callable[..., SuiteResult]):
        def run(seed: int = 0, **kw) -> SuiteResult:
            res = SuiteResult(name, time_limit=limit)
            t0 = time.perf_counter()
            fn(res, random.Random(seed), **kw)
            res.elapsed = time.perf_counter() - t0
            return res
        run.__name__ = fn.__name__
        run.__doc__ = fn.__doc__
        return run
    return deco


@_timed("identities", 1.0)
def suite_identities(res: SuiteResult, rng: random.Random) -> None:
    """Closed forms for C_1, Q_2 and the n = 0, 1 Jost polynomials (exact)."""
    for _ in range(1000):
        mu1, mu2 = _rational(rng, -10, 10), _rational(rng, -10, 10)
        res.check(c_n(Potential([mu1])) == mu1, f"C_1({mu1})")
        q2 = big_q_sequence(Potential([mu1, mu2]))[2]
        res.check(q2 == 1 + 2 * mu1 + mu2 + mu1 * mu2, f"Q_2({mu1},{mu2})")
        v1 = 2 * mu1
        res.check(jost_coeffs(Potential([mu1])).coeffs == (Fraction(1, 2), v1 / 2, Fraction(-1, 2)),
                  f"j^(1) for v1={v1}")
    res.check(jost_coeffs(Potential([])).coeffs == (Fraction(1, 2), 0, Fraction(-1, 2)), "j^(0)")


@_timed("symmetry", 5.0)
def suite_symmetry(res: SuiteResult, rng: random.Random) -> None:
    """Jost polynomial of -mu equals that of mu at -theta, coefficientwise."""
    for i in range(200):
        n = 1 + i % 10
        pot = _rational_potential(rng, n, -5, 5)
        lhs = jost_coeffs(-pot)
        rhs = jost_coeffs(pot).parity_reflect()
        res.check(lhs == rhs, f"symmetry at {pot.mu}")


@_timed("triple-oracle", 180.0)
def suite_triple_oracle(res: SuiteResult, rng: random.Random, per_n: int = 500,
                        N: int = 3000, delta: float = 1e-8, tol: float = DEFAULT_TOL) -> None:
    """Component classification vs Jost roots vs truncated-matrix inertia."""
    excluded = 0
    for n in range(1, 7):
        for _ in range(per_n):
            pot = _rational_potential(rng, n, -5, 5)
            band = classify_spectral(pot.as_float(), tol)
            if band.critical_left or band.critical_right:
                excluded += 1
                continue
            cls = classify_spectral(pot)
            kj, lj = count_bound_states_jost(pot)
            km, lm = count_bound_states_matrix(pot.as_float(), N, delta)
            res.check((cls.k_left, cls.l_right) == (kj, lj) == (km, lm),
                      f"mu={[str(x) for x in pot.mu]}: classifier {(cls.k_left, cls.l_right)}, "
                      f"jost {(kj, lj)}, matrix {(km, lm)}")
            res.check(0 <= kj + lj <= n, f"k+l>n at {pot.mu}")
    res.notes["excluded_in_band"] = excluded


@_timed("geometry", 60.0)
def suite_geometry(res: SuiteResult, rng: random.Random) -> None:
    """Origin in D_0, cone directions in D_k, censuses hit all n+1 components."""
    for n in range(1, 11):
        r = classify_D(Potential([Fraction(0)] * n))
        res.check(not r.on_variety and r.index == 0, f"origin n={n}: {r}")
    for n in range(1, 9):
        for k in range(1, n + 1):
            e = [Fraction(0)] * (n - k) + [Fraction(-100)] * k
            r = classify_D(Potential(e))
            res.check(not r.on_variety and r.index == k, f"100 e_{k}^({n}): {r}")
    for n, m in ((1, 10_000), (2, 10_000), (3, 100_000)):
        rep = region_census(n, [(-20.0, 20.0)], m, seed=rng.randrange(2**31))
        res.check(set(rep.histogram) == set(range(n + 1)), f"census n={n}: {rep.histogram}")
        res.notes[f"census_n{n}"] = {str(k): v for k, v in rep.histogram.items()}


@_timed("classifier", 10.0)
def suite_classifier(res: SuiteResult, rng: random.Random) -> None:
    """Sign-change count equals the inductive epigraph/hypograph index."""
    for n in range(1, 9):
        done = 0
        while done < 1000:
            pot = _rational_potential(rng, n, -5, 5, den=100)
            if any(q == 0 for q in big_q_sequence(pot)):
                continue
            done += 1
            r = classify_D(pot)
            try:
                k = classify_by_phi(pot)
            except OnVarietyError:
                res.check(False, f"phi classifier hit a variety at {pot.mu}")
                continue
            res.check(not r.on_variety and r.index == k, f"{pot.mu}: {r.index} vs {k}")


@_timed("threshold-limits", 5.0)
def suite_threshold_limits(res: SuiteResult, rng: random.Random) -> None:
    """sqrt-scaled determinant tends to the threshold Jost values at rate O(sqrt|z|)."""
    for i in range(50):
        n = 1 + i % 4
        pot = _rational_potential(rng, n, -2, 2)
        left, right = c_n(pot), jost_eval(pot, -1)
        for m in range(1, 6):
            eps = 10.0 ** (-2 * m)
            bound = 1e3 * 10.0 ** (-m)
            dl = abs(threshold_scaled_det(pot, -eps, "left") - float(left))
            dr = abs(threshold_scaled_det(pot, 4 + eps, "right") - float(right))
            res.check(dl <= bound, f"left m={m} mu={pot.mu}: {dl}")
            res.check(dr <= bound, f"right m={m} mu={pot.mu}: {dr}")


@_timed("virtual-states", 30.0)
def suite_virtual_states(res: SuiteResult, rng: random.Random, rows: int = 100) -> None:
    """On-variety points carry bounded threshold solutions; count equals the stratum."""
    N = rows + 2
    for i in range(50):
        n = 1 + i % 6
        while True:
            prefix = _rational_potential(rng, n - 1, -2, 2, den=10)
            if big_q_sequence(prefix)[-1] != 0:
                break
        point = on_variety_point(prefix, "C")
        stratum = classify_D(prefix).index if n > 1 else 0
        K = max(2, n)
        res.check(c_n(point) == 0, f"C_n != 0 at {point.mu}")
        for edge, pot, sign in (("left", point, 1), ("right", -point, -1)):
            vs = virtual_state(pot.as_float(), edge, N)
            res.check(abs(vs.jost_value_at_zero) <= 1e-12, f"{edge} j0={vs.jost_value_at_zero} at {pot.mu}")
            res.check(vs.residual <= 1e-10, f"{edge} residual={vs.residual} at {pot.mu}")
            tail = vs.components[K - 1:]
            res.check(all(tail[j] == sign ** (K + j) for j in range(len(tail))), f"{edge} tail at {pot.mu}")
            k, l = count_bound_states_jost(pot)
            count = k if edge == "left" else l
            res.check(count == stratum, f"{edge} count {count} != stratum {stratum} at {pot.mu}")
            cls = classify_spectral(pot)
            flag = cls.critical_left if edge == "left" else cls.critical_right
            idx = cls.k_left if edge == "left" else cls.l_right
            res.check(flag and idx == stratum, f"{edge} classification {cls} at {pot.mu}")


@_timed("large-coupling", 60.0)
def suite_large_coupling(res: SuiteResult, rng: random.Random, t: float = 10.0,
                         sites: int = 6, max_size: int = 4) -> None:
    """Strength -t on I and +t on J gives exactly |I| and |J| eigenvalues outside [0, 4]."""
    for labels in itertools.product((0, 1, 2), repeat=sites):
        I = {s + 1 for s, c in enumerate(labels) if c == 1}
        J = {s + 1 for s, c in enumerate(labels) if c == 2}
        if len(I) + len(J) > max_size:
            continue
        pot = large_coupling_potential(I, J, t, n=sites)
        got = count_bound_states_matrix(pot)
        res.check(got == (len(I), len(J)), f"I={sorted(I)} J={sorted(J)}: {got}")


@_timed("linear-system", 10.0)
def suite_linear_system(res: SuiteResult, rng: random.Random) -> None:
    """Dense difference-system solve agrees with the recurrence; n = 1 rank-one formula is exact."""
    worst = 0.0
    for i in range(50):
        n = 1 + i % 8
        pot = _rational_potential(rng, n, -1, 1)
        for _ in range(20):
            theta = rng.uniform(-1.0, 1.0)
            a = jost_via_linear_system(pot, theta)
            b = float(jost_eval(pot, Fraction(theta)))
            worst = max(worst, abs(a - b))
            res.check(abs(a - b) <= 1e-10, f"mu={pot.mu} theta={theta}: {a} vs {b}")
    res.notes["max_abs_diff"] = worst
    for _ in range(200):
        v1 = _rational(rng, -10, 10)
        theta = _rational(rng, -1, 1)
        if theta in (0, 1, -1):
            continue
        det = perturbation_det(Potential.from_v([v1]), theta)
        res.check(det == (1 + v1 * theta - theta ** 2) / (1 - theta ** 2), f"n=1 det v1={v1} theta={theta}")
        res.check(z_of_theta(theta) < 0 or z_of_theta(theta) > 4, "theta off the cut")


SUITES = {
    "identities": suite_identities,
    "symmetry": suite_symmetry,
    "triple-oracle": suite_triple_oracle,
    "geometry": suite_geometry,
    "classifier": suite_classifier,
    "threshold-limits": suite_threshold_limits,
    "virtual-states": suite_virtual_states,
    "large-coupling": suite_large_coupling,
    "linear-system": suite_linear_system,
}


def run_suites(names=None, seed: int = 0) -> list[SuiteResult]:
    names = list(SUITES) if not names else list(names)
    unknown = [n for n in names if n not in SUITES]
    if unknown:
        raise KeyError(f"unknown suite(s): {', '.join(unknown)}")
    return [SUITES[name](seed=seed) for name in names]
