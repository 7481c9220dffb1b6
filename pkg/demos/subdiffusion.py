"""
Subdiffusion with smooth and singular solutions
===============================================

Runs the implicit midpoint scheme on the smooth example, on the example whose
solution has an alpha-power singularity at t = 0, and on its regularized form.
"""

import warnings

from fracapprox.harness import RefinementSpec, Task, render, run_refinement

M = {0.25: 8, 0.5: 4, 0.75: 2}

for label, example, reg in (("smooth", "1", False), ("singular", "2", False), ("regularized", "2", True)):
    for alpha in (0.25, 0.5, 0.75):
        with warnings.catch_warnings():
            # m alpha < 2 for alpha = 0.75, m = 2; the regularization is then partial
            warnings.simplefilter("ignore")
            spec = RefinementSpec(Task.SUBDIFF, example, alpha, 0.025, 4, regularize_m=M[alpha] if reg else None)
            report = run_refinement(spec)
        print(f"\n{label}, alpha = {alpha}" + (f", m = {M[alpha]}" if reg else ""))
        print(render(report, "md"), end="")

###############################################################################
# Without regularization the observed order drifts down toward one, since
# the time derivative of the solution is unbounded at t = 0.  Subtracting
# the first m terms of the series restores most of the smooth-case order.
