"""Grid-refinement studies, observed orders and table rendering."""

from __future__ import annotations

import enum
import io
import math
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np

from . import caputo, relaxation, subdiffusion
from .errors import DomainError
from .weights import Scheme, expansion_coeff

__all__ = [
    "Task",
    "RefinementSpec",
    "ConvergenceRow",
    "ConvergenceReport",
    "observed_order",
    "task_error",
    "run_refinement",
    "render",
    "format_error",
    "coefficient_curve",
    "COEFF_SCHEMES",
]

# errors below this are roundoff, and their ratios say nothing about order
ORDER_FLOOR = 1e-13


class Task(str, enum.Enum):
    RELAX = "RELAX"
    SUBDIFF = "SUBDIFF"
    CAPUTO = "CAPUTO"

    @classmethod
    def parse(cls, name: "str | Task") -> "Task":
        if isinstance(name, Task):
            return name
        try:
            return cls[str(name).strip().upper()]
        except KeyError:
            raise DomainError(f"unknown task {name!r}; expected relax, subdiff or caputo") from None


@dataclass(frozen=True)
class RefinementSpec:
    """One refinement study.

    ``problem`` selects the equation (``I``/``II``/``III``/``const``) for
    RELAX, the example (``1``/``2``) for SUBDIFF, or the test function for
    CAPUTO.  ``x`` is the evaluation point for CAPUTO and the final time for
    RELAX; SUBDIFF always runs to ``t = 1`` with ``tau = h``.
    """

    task: Task
    problem: str
    alpha: float
    h_start: float
    levels: int
    scheme: Scheme = Scheme.MID_SIGMA
    regularize_m: Optional[int] = None
    x: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "task", Task.parse(self.task))
        object.__setattr__(self, "scheme", Scheme.parse(self.scheme))
        if self.levels < 2:
            raise DomainError(f"levels must be >= 2, got {self.levels}")
        if not self.h_start > 0:
            raise DomainError(f"h_start must be > 0, got {self.h_start}")


@dataclass(frozen=True)
class ConvergenceRow:
    h: float
    error: float
    order: Optional[float]


@dataclass(frozen=True)
class ConvergenceReport:
    rows: tuple[ConvergenceRow, ...]
    spec: Optional[RefinementSpec] = field(default=None, compare=False)

    @property
    def h(self) -> np.ndarray:
        return np.array([r.h for r in self.rows])

    @property
    def errors(self) -> np.ndarray:
        return np.array([r.error for r in self.rows])

    @property
    def orders(self) -> list[Optional[float]]:
        return [r.order for r in self.rows]


def observed_order(e_coarse: float, e_fine: float) -> float:
    """``log2(e_coarse / e_fine)``: the order implied by one halving of the step."""
    if not (e_coarse > 0 and e_fine > 0):
        raise DomainError(f"observed_order needs positive errors, got {e_coarse}, {e_fine}")
    return math.log2(e_coarse / e_fine)


def _steps(length: float, h: float) -> int:
    n = int(round(length / h))
    if n < 1 or abs(n * h - length) > 1e-9 * length:
        raise DomainError(f"step {h} does not divide {length} into an integer number of steps")
    return n


def task_error(spec: RefinementSpec, h: float) -> float:
    """Run the task once at step ``h`` and return its error metric."""
    if spec.task is Task.RELAX:
        p = relaxation.builtin_problem(spec.problem, spec.alpha)
        M = _steps(spec.x, h)
        traj = relaxation.solve(p, spec.scheme, h, M)
        return relaxation.max_error(traj, p.exact)
    if spec.task is Task.SUBDIFF:
        p = subdiffusion_problem(spec.problem, spec.alpha, spec.regularize_m)
        N = _steps(1.0, h)
        return subdiffusion.solve(p, spec.alpha, subdiffusion.SpaceTimeGrid(N, N)).error
    n = _steps(spec.x, h)
    approx = caputo.approximate(spec.scheme, spec.problem, spec.alpha, spec.x, n)
    return abs(approx - caputo.exact_caputo(spec.problem, spec.alpha, spec.x))


def subdiffusion_problem(example: str, alpha: float, regularize_m: Optional[int] = None):
    key = str(example).strip()
    if key == "1":
        if regularize_m is not None:
            raise DomainError("regularization applies to example 2 only")
        return subdiffusion.example_1(alpha)
    if key == "2":
        if regularize_m is None:
            return subdiffusion.example_2(alpha)
        return subdiffusion.regularize_example_2(alpha, regularize_m)[0]
    raise DomainError(f"unknown subdiffusion example {example!r}; expected 1 or 2")


def run_refinement(spec: RefinementSpec) -> ConvergenceReport:
    """Errors at ``h_start, h_start/2, ...`` (``levels`` rows) with pairwise orders.

    One extra solve at ``2 h_start`` supplies the order of the first row.
    """
    hs = [2.0 * spec.h_start] + [spec.h_start / 2**i for i in range(spec.levels)]
    errors = [task_error(spec, h) for h in hs]
    rows = []
    for i in range(1, len(hs)):
        prev, cur = errors[i - 1], errors[i]
        order = observed_order(prev, cur) if prev > ORDER_FLOOR and cur > ORDER_FLOOR else None
        rows.append(ConvergenceRow(hs[i], cur, order))
    return ConvergenceReport(tuple(rows), spec)


def format_error(e: float) -> str:
    """Fixed 7 decimals down to 1e-5, two significant digits in scientific form below."""
    if e >= 1e-5:
        return f"{e:.7f}"
    return f"{e:.1e}"


def render(report: ConvergenceReport, fmt: str = "csv") -> str:
    fmt = fmt.lower()
    out = io.StringIO()
    if fmt == "csv":
        out.write("h,error,order\n")
        for r in report.rows:
            order = "" if r.order is None else f"{r.order:.6g}"
            out.write(f"{r.h:.6g},{r.error:.6g},{order}\n")
    elif fmt == "md":
        out.write("| h | Error | Order |\n")
        out.write("|---|---|---|\n")
        for r in report.rows:
            order = "" if r.order is None else f"{r.order:.4f}"
            out.write(f"| {r.h:g} | {format_error(r.error)} | {order} |\n")
    else:
        raise DomainError(f"unknown format {fmt!r}; expected csv or md")
    return out.getvalue()


COEFF_SCHEMES = {
    Scheme.L1: "C1",
    Scheme.TRAP_SIGMA: "C8",
    Scheme.QUAD_SIGMA: "C9",
    Scheme.MID_SIGMA: "C10",
}


def coefficient_curve(
    schemes: Iterable["Scheme | str"] = tuple(COEFF_SCHEMES),
    alpha_grid: Sequence[float] = tuple(np.linspace(0.01, 0.99, 99)),
) -> str:
    """CSV of ``|C(alpha)|`` per scheme; grid points are clipped to ``[0.01, 0.99]``."""
    schemes = [Scheme.parse(s) for s in schemes]
    for s in schemes:
        if s not in COEFF_SCHEMES:
            raise DomainError(f"no expansion coefficient for scheme {s.value}")
    grid = np.clip(np.asarray(alpha_grid, dtype=float), 0.01, 0.99)
    out = io.StringIO()
    out.write("alpha," + ",".join(f"abs_{COEFF_SCHEMES[s]}" for s in schemes) + "\n")
    for a in grid:
        vals = ",".join(f"{abs(expansion_coeff(s, a)):.10g}" for s in schemes)
        out.write(f"{a:.6g},{vals}\n")
    return out.getvalue()
