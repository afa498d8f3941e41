"""Bounds for a model read from JSON, checked against exact rings.

    python3 demos/custom_model.py
The same file works on the command line:
    steadybounds bound --model demos/custom_model.json --k 5
"""
from pathlib import Path

from steadybounds import (bound_observable, build_ti_1d, exact_steady_states, extremal_expectation, load_model,
                          observable_from_label)

model = load_model(Path(__file__).with_name("custom_model.json"))
rings = {N: exact_steady_states(model, N) for N in (5, 6, 7)}
for label in "XYZ":
    obs = observable_from_label(label)
    res = bound_observable(build_ti_1d(model, 5, obs, label))
    exact = "  ".join(f"N={N} {extremal_expectation(s, obs)[0]:.5f}" for N, s in rings.items())
    print(f"{label}: [{res.lower:.5f}, {res.upper:.5f}]   {exact}")
