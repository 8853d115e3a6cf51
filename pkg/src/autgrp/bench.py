"""Benchmark families, complexity-model fitting, and growth reference curves.

Step counts, not wall-clock times, are the measured quantity.  A family maps
an index m to one input word (deterministically, given the seed) and runs a
fixed solver on it; the fitter then compares the step column against candidate
complexity shapes by least squares on log2 scale.
"""

from __future__ import annotations

import io
import json
import math
import random
from dataclasses import dataclass
from typing import Callable, Iterable, Optional, Sequence, Union

from . import catalog
from .contraction import build_certificate
from .errors import UnknownLetter
from .nilpotent import build_instance, random_trivial_word, solve_nilpotent
from .solvers import StepReport, solve_bounded, solve_polynomial


@dataclass(frozen=True)
class BenchRow:
    m: int
    n: int
    stages: int
    steps: int

    def astuple(self) -> tuple[int, int, int, int]:
        return (self.m, self.n, self.stages, self.steps)


class BenchFamily:
    """One benchmark series: index m -> input word -> solver StepReport."""

    def __init__(
        self,
        name: str,
        description: str,
        default_range: range,
        runner: Callable[[int, int], StepReport],
    ):
        self.name = name
        self.description = description
        self.default_range = default_range
        self._runner = runner

    def run(self, m: int, seed: int = 0) -> StepReport:
        return self._runner(m, seed)

    def __repr__(self):
        r = self.default_range
        return f"BenchFamily({self.name!r}, m={r.start}..{r.stop - 1})"


def _basilica_runner(m: int, seed: int) -> StepReport:
    A = catalog.get("basilica")
    cert = _basilica_cert()
    return solve_bounded(A, cert, "ab" * 2**m)


_BASILICA_CERT = None


def _basilica_cert():
    # weak total-shrink cell (block 1, power 1): the family words always
    # reject before the no-progress hazard of that mode can bite, and the
    # small cell keeps per-stage work proportional to the tape
    global _BASILICA_CERT
    if _BASILICA_CERT is None:
        _BASILICA_CERT = build_certificate(catalog.get("basilica"), 1, 1, "item2")
    return _BASILICA_CERT


def _poly1_runner(m: int, seed: int) -> StepReport:
    A = catalog.get("poly1")
    return solve_polynomial(A, 1, "babA" * 2**m)


def _halving_runner(group: str):
    inst = build_instance(group)

    def run(m: int, seed: int) -> StepReport:
        rng = random.Random(f"{seed}:{group}:{m}")
        word = random_trivial_word(inst, 2**m, rng)
        return solve_nilpotent(inst, word)

    return run


FAMILIES: dict[str, BenchFamily] = {}


def _register(name, description, default_range, runner):
    FAMILIES[name] = BenchFamily(name, description, default_range, runner)


_register(
    "basilica-ab",
    "(ab)^(2^m) on the two-state torsion-free automaton, certificate-driven solver",
    range(4, 15),
    _basilica_runner,
)
_register(
    "poly1-comm",
    "(b a b a^-1)^(2^m) on the linear-activity automaton, reset-rule solver",
    range(3, 12),
    _poly1_runner,
)
_register(
    "z4-halving",
    "seeded trivial words of length 2^m over the rank-1 instance, halving solver",
    range(4, 14),
    _halving_runner("z4"),
)
_register(
    "heis-halving",
    "seeded trivial words of length 2^m over the Heisenberg instance, halving solver",
    range(4, 12),
    _halving_runner("heis"),
)


def get_family(name: str) -> BenchFamily:
    fam = FAMILIES.get(name)
    if fam is None:
        raise UnknownLetter(name, "bench family")
    return fam


def run_bench(
    family: Union[str, BenchFamily],
    m_range: Optional[Iterable[int]] = None,
    seed: int = 0,
) -> list[BenchRow]:
    """Run one family over the index range and collect (m, n, stages, steps)."""
    if isinstance(family, str):
        family = get_family(family)
    if m_range is None:
        m_range = family.default_range
    rows = []
    for m in m_range:
        rep = family.run(m, seed)
        rows.append(BenchRow(m, rep.input_length, rep.stages, rep.steps))
    return rows


# ---- complexity fitting ----

MODELS: dict[str, Callable[[float], float]] = {
    "n": lambda n: n,
    "n log n": lambda n: n * math.log2(n),
    "n log^2 n": lambda n: n * math.log2(n) ** 2,
    "n log^3 n": lambda n: n * math.log2(n) ** 3,
    "n^2": lambda n: n * n,
}

DEFAULT_MODELS = ("n", "n log n", "n log^2 n", "n^2")


@dataclass(frozen=True)
class FitResult:
    """Log-scale least-squares comparison of step counts against model shapes."""

    residuals: dict[str, float]
    winner: str
    constant: float

    def advantage(self, model: str) -> float:
        """How many times worse the given model fits than the winner."""
        best = self.residuals[self.winner]
        if best == 0:
            return math.inf if self.residuals[model] > 0 else 1.0
        return self.residuals[model] / best

    def to_dict(self) -> dict:
        return {
            "winner": self.winner,
            "constant": self.constant,
            "residuals": dict(self.residuals),
        }


def _extract_points(rows) -> list[tuple[int, int]]:
    pts = []
    for row in rows:
        if isinstance(row, BenchRow):
            pts.append((row.n, row.steps))
        else:
            seq = tuple(row)
            if len(seq) == 4:
                pts.append((int(seq[1]), int(seq[3])))
            elif len(seq) == 2:
                pts.append((int(seq[0]), int(seq[1])))
            else:
                raise ValueError(f"cannot read (n, steps) from row {row!r}")
    return pts


def fit_complexity(rows: Sequence, models: Optional[Iterable[str]] = None) -> FitResult:
    """Pick the best-fitting model by least squares on log2(steps).

    For each candidate shape f the constant is chosen optimally in log space
    (the mean of log2(steps/f(n))); the residual is the mean squared log2
    error around it.  Smaller residual wins.
    """
    pts = _extract_points(rows)
    if len(pts) < 2:
        raise ValueError("need at least two rows to fit")
    names = tuple(models) if models is not None else DEFAULT_MODELS
    residuals = {}
    constants = {}
    for name in names:
        f = MODELS.get(name)
        if f is None:
            raise UnknownLetter(name, "complexity model")
        logs = []
        for n, steps in pts:
            fn = f(n)
            if fn <= 0 or steps <= 0:
                raise ValueError(f"model {name} or steps nonpositive at n={n}")
            logs.append(math.log2(steps) - math.log2(fn))
        mu = sum(logs) / len(logs)
        residuals[name] = sum((v - mu) ** 2 for v in logs) / len(logs)
        constants[name] = 2.0**mu
    winner = min(residuals, key=residuals.get)
    return FitResult(residuals, winner, constants[winner])


# ---- growth lower-bound reference ----

def lower_bound_curve(growth_table, n_range: Iterable[int]) -> list[tuple[int, float]]:
    """Rows (n, n * log2(gamma(n))): the single-tape time floor implied by growth."""
    rows = []
    for n in n_range:
        gamma = growth_table[n]
        rows.append((n, n * math.log2(gamma)))
    return rows


# ---- reports ----

def write_csv(rows, out, header: Sequence[str], seed: Optional[int] = None) -> None:
    """Write rows as CSV with an optional leading ``# seed=`` comment."""
    if seed is not None:
        out.write(f"# seed={seed}\n")
    out.write(",".join(header) + "\n")
    for row in rows:
        tup = row.astuple() if isinstance(row, BenchRow) else tuple(row)
        out.write(",".join(_fmt(v) for v in tup) + "\n")


def _fmt(v) -> str:
    if isinstance(v, float):
        return f"{v:.6g}"
    return str(v)


def csv_text(rows, header: Sequence[str], seed: Optional[int] = None) -> str:
    buf = io.StringIO()
    write_csv(rows, buf, header, seed)
    return buf.getvalue()


def bench_report(
    family: Union[str, BenchFamily],
    rows: Sequence[BenchRow],
    seed: int,
    fit: Optional[FitResult] = None,
) -> dict:
    name = family if isinstance(family, str) else family.name
    return {
        "family": name,
        "seed": seed,
        "rows": [row.astuple() for row in rows],
        "fit": fit.to_dict() if fit is not None else None,
    }


def report_json(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True)
