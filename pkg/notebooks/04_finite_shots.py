"""
Detecting entanglement from a finite number of shots
====================================================

In the lab R is estimated from counts. Nine settings ``sigma_i x sigma_j``
give the whole block T; with prior knowledge that the state is a depolarized
Schmidt state two settings are enough. A bootstrap over the outcome tallies
supplies the error bar, and a detection requires the estimate to clear the
threshold by three standard deviations.
"""

from qent import measure_sim as ms
from qent import werner

rho = werner(0.6)

for strategy, shots in [("full9", 10_000), ("schmidt2", 10_000), ("full9", 100)]:
    record = ms.run_plan(rho, ms.make_plan(strategy, shots), seed=1)
    if strategy == "full9":
        v = ms.estimate_trace_norm(record)
    else:
        v = ms.estimate_schmidt_family(record, strategy)
    print(
        f"{strategy:<9} {shots:>6} shots/setting: {v.statistic:.3f} +/- {v.sigma:.3f}"
        f"  z = {v.z_margin:5.1f}  -> {v.verdict}"
    )

# just above threshold, 100 shots cannot separate 1.02 from 1
near = ms.run_plan(werner(0.34), ms.make_plan("full9", 100), seed=1)
v = ms.estimate_trace_norm(near)
print(f"p = 0.34, 100 shots/setting: {v.statistic:.3f} +/- {v.sigma:.3f} -> {v.verdict}")

# cost in the convention settings x copies
for name in ("full9", "schmidt3", "schmidt2"):
    print(f"{name:<9} f = {ms.cost_accounting(ms.make_plan(name, 1))}")
print(f"tomography f = {ms.TOMOGRAPHY_COST}")

# measured tallies can be stored and analyzed later
record = ms.run_plan(rho, ms.make_plan("schmidt2", 1000), seed=2)
print(record.to_json()["settings"][0])
