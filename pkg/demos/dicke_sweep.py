"""Sweep the drive strength of the driven pair-decay chain.

Prints the k=4 interval for <sigma_z> next to the mean-field prediction.  The
interval is widest near g = 1, where correlations are strongest.

    python3 demos/dicke_sweep.py
"""
import numpy as np

from steadybounds import bound_observable, build_ti_1d, builtin_model, mean_field_steady, observable_from_label

Z = observable_from_label("Z")
print(f"{'g':>5} {'lower':>10} {'upper':>10} {'width':>8} {'mean field':>11}")
for g in np.linspace(0.25, 1.75, 7):
    model = builtin_model("dicke_1d", g=g)
    res = bound_observable(build_ti_1d(model, 4, Z, "Z"))
    mf = mean_field_steady(model).bloch[2]
    print(f"{g:5.2f} {res.lower:10.6f} {res.upper:10.6f} {res.width:8.4f} {mf:11.6f}")
