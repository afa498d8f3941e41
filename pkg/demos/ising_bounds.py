"""Bounds on the dissipative transverse-field Ising chain for growing windows.

The interval for each Pauli expectation shrinks as the window size k grows,
and the exact value of an 8-site ring sits inside every interval.

    python3 demos/ising_bounds.py
"""
from steadybounds import (bound_observable, build_ti_1d, builtin_model, exact_steady_states,
                          extremal_expectation, observable_from_label)

model = builtin_model("ising_1d")
ring = exact_steady_states(model, 8)

print(f"{'obs':>3} {'k':>2} {'lower':>10} {'upper':>10} {'width':>9}   exact N=8")
for label in "XYZ":
    obs = observable_from_label(label)
    exact = extremal_expectation(ring, obs)[0]
    for k in (3, 4, 5):
        res = bound_observable(build_ti_1d(model, k, obs, label))
        print(f"{label:>3} {k:>2} {res.lower:10.6f} {res.upper:10.6f} {res.width:9.2e}   {exact:.6f}")
