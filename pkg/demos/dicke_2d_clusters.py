"""Square-lattice bounds from 1x1 and 2x2 clusters.

The 2x2 interval sits inside the 1x1 interval, and both contain the exact
value of a small 3x2 torus.

    python3 demos/dicke_2d_clusters.py
"""
from steadybounds import (bound_observable, build_cluster_2d, builtin_model, exact_steady_states,
                          extremal_expectation, observable_from_label)
from steadybounds.lattice import rectangle

model = builtin_model("dicke_2d", g=1.0)
torus = exact_steady_states(model, (3, 2))
for label in "YZ":
    obs = observable_from_label(label, 2)
    exact = extremal_expectation(torus, obs)[0]
    print(f"<{label}>  exact 3x2 torus {exact:.6f}")
    for shape in ((1, 1), (2, 2)):
        res = bound_observable(build_cluster_2d(model, rectangle(*shape), obs, label))
        print(f"     {shape[0]}x{shape[1]} cluster [{res.lower:.6f}, {res.upper:.6f}]")
