"""
Where each criterion switches on along the Werner line
======================================================

The Werner state ``p |Phi+><Phi+| + (1 - p) I/4`` has ``T = diag(p, -p, p)``.
The trace-norm test fires at ``p > 1/3``, exactly where the partial transpose
turns negative. The CHSH test needs ``2 p^2 > 1``, so it stays silent until
``p > 1/sqrt(2)``.
"""

import numpy as np

from qent import run_all, werner

print(f"{'p':>5}  {'trace norm':>10}  {'CHSH':>6}  {'PPT':>6}  lower bound")
for p in np.linspace(0, 1, 11):
    reports = {r.name: r for r in run_all(werner(p))}
    flags = ["yes" if reports[k].entangled else "no" for k in ("trace_norm", "chsh", "ppt")]
    print(f"{p:5.2f}  {flags[0]:>10}  {flags[1]:>6}  {flags[2]:>6}  {reports['concurrence_lower_bound'].statistic:+.4f}")

# p = 1/2 separates the two tests: trace norm 1.5 but s1^2 + s2^2 only 0.5
half = {r.name: r for r in run_all(werner(0.5))}
print("\np = 0.5:", half["trace_norm"].statistic, half["chsh"].statistic)

# right at p = 1/3 the margin vanishes and the report carries a boundary flag
third = run_all(werner(1 / 3))[0]
print("p = 1/3:", third.verdict, "boundary" if third.boundary else "")
