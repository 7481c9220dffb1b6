"""
Convergence of the relaxation solvers
=====================================

Reproduces the grid-refinement tables for the three manufactured relaxation
equations with each scheme.  Errors are the maximum over the grid and orders
come from consecutive halvings of h.
"""

from fracapprox import Scheme
from fracapprox.harness import RefinementSpec, Task, render, run_refinement

COLUMNS = [("I", 0.25), ("II", 0.5), ("III", 0.75)]

for scheme in (Scheme.L1, Scheme.MID_OMEGA, Scheme.MID_SIGMA, Scheme.MID_DELTA):
    for equation, alpha in COLUMNS:
        spec = RefinementSpec(Task.RELAX, equation, alpha, 0.003125, 4, scheme=scheme)
        print(f"\n{scheme.value}, equation {equation}, alpha = {alpha}")
        print(render(run_refinement(spec), "md"), end="")

###############################################################################
# The sigma correction buys a fixed fraction of accuracy over L1, largest
# for small alpha.

for equation, alpha in COLUMNS:
    e = {}
    for scheme in (Scheme.L1, Scheme.MID_SIGMA):
        spec = RefinementSpec(Task.RELAX, equation, alpha, 0.000390625, 2, scheme=scheme)
        e[scheme] = run_refinement(spec).errors[0]
    print(f"equation {equation}: improvement {100 * (e[Scheme.L1] / e[Scheme.MID_SIGMA] - 1):.1f}%")
