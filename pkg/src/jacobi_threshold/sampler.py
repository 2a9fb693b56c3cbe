"""Point samples of the nodal hypersurfaces and component censuses."""
from __future__ import annotations

import csv
import io
import itertools
from collections import Counter
from dataclasses import dataclass, field
from typing import Sequence, TextIO

import numpy as np

from .classifier import classify_D, classify_G
from .core import DEFAULT_TOL, Potential, big_q_sequence, is_zero

DEFAULT_STEPS = {1: 1, 2: 512, 3: 128, 4: 32}


@dataclass(frozen=True)
class VarietySample:
    prefix: tuple
    last: float
    stratum: int
    family: str

    @property
    def point(self) -> tuple:
        return self.prefix + (self.last,)


def sample_variety(n: int, family: str = "C",
                   grid: Sequence[tuple[float, float, int]] = (),
                   tol: float = DEFAULT_TOL) -> tuple[list[VarietySample], int]:
    """Sample ``V(Q_n)`` or ``V(C_n)`` as a graph over a prefix grid.

    ``grid`` has one ``(min, max, steps)`` triple per prefix axis (``n - 1``
    of them).  Grid prefixes lying in the zero band of some ``Q_m``,
    ``m < n``, have no graph point; they are skipped and their number is
    returned alongside the samples (row-major grid order).
    """
    if not 1 <= n <= 4:
        raise ValueError("sampling supports 1 <= n <= 4")
    if family not in ("Q", "C"):
        raise ValueError(f"family must be 'Q' or 'C', not {family!r}")
    if len(grid) != n - 1:
        raise ValueError(f"grid needs {n - 1} axes for n={n}, got {len(grid)}")
    axes = [np.linspace(lo, hi, int(steps)) for lo, hi, steps in grid]
    shift = 1.0 if family == "C" else 0.0
    samples = []
    skipped = 0
    for prefix in itertools.product(*axes):
        prefix = tuple(float(x) for x in prefix)
        qs = big_q_sequence(Potential(prefix))
        scale = 1.0
        bad = False
        for q in qs:
            scale = max(scale, abs(q))
            if is_zero(q, scale, tol):
                bad = True
                break
        if bad:
            skipped += 1
            continue
        last = (qs[-2] / qs[-1] - 2.0 if n > 1 else -1.0) + shift
        stratum = classify_D(Potential(prefix), tol).index if n > 1 else 0
        samples.append(VarietySample(prefix, last, stratum, family))
    return samples, skipped


def write_variety_csv(samples: Sequence[VarietySample], n: int, out: TextIO) -> None:
    w = csv.writer(out, lineterminator="\n")
    w.writerow([f"mu{i}" for i in range(1, n + 1)] + ["stratum", "family"])
    for s in samples:
        w.writerow([format(x, ".17g") for x in s.point] + [s.stratum, s.family])


@dataclass
class CensusReport:
    n: int
    box: list
    m: int
    seed: int
    histogram: dict = field(default_factory=dict)
    on_variety: int = 0
    family: str = "G"

    def as_dict(self) -> dict:
        return {
            "n": self.n,
            "box": self.box,
            "samples": self.m,
            "seed": self.seed,
            "family": self.family,
            "histogram": {str(k): v for k, v in sorted(self.histogram.items())},
            "on_variety": self.on_variety,
        }


def region_census(n: int, box: Sequence[tuple[float, float]], m: int, seed: int,
                  family: str = "G", tol: float = DEFAULT_TOL) -> CensusReport:
    """Classify ``m`` uniform samples from ``box`` and histogram the components.

    ``box`` is a single ``(min, max)`` pair (applied to every axis) or one
    pair per axis.  Deterministic for a given seed.
    """
    if m < 1:
        raise ValueError("need at least one sample")
    box = [tuple(b) for b in box]
    if len(box) == 1:
        box = box * n
    if len(box) != n:
        raise ValueError(f"box needs 1 or {n} axes")
    if any(not lo < hi for lo, hi in box):
        raise ValueError("degenerate box")
    classify = {"G": classify_G, "D": classify_D}[family]
    rng = np.random.default_rng(seed)
    lo = np.array([b[0] for b in box])
    hi = np.array([b[1] for b in box])
    pts = rng.uniform(lo, hi, size=(m, n))
    hist: Counter = Counter()
    on = 0
    for row in pts.tolist():
        r = classify(Potential(row), tol)
        if r.on_variety:
            on += 1
        else:
            hist[r.index] += 1
    return CensusReport(n, [list(b) for b in box], m, seed, dict(sorted(hist.items())), on, family)


def write_census_csv(report: CensusReport, out: TextIO) -> None:
    out.write(f"# n={report.n}\n")
    out.write(f"# seed={report.seed}\n")
    out.write("# box=" + ";".join(f"{format(a, '.17g')}:{format(b, '.17g')}" for a, b in report.box) + "\n")
    out.write(f"# samples={report.m}\n")
    out.write(f"# family={report.family}\n")
    out.write(f"# on_variety={report.on_variety}\n")
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["index", "count"])
    for k, c in sorted(report.histogram.items()):
        w.writerow([k, c])


def to_csv_string(writer, *args) -> str:
    buf = io.StringIO()
    writer(*args, buf)
    return buf.getvalue()
