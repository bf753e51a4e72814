"""Graphs of bivectors as stable Dirac structures, and prolongation by a symmetry.

Run with ``python demos/poisson_prolongation.py``.
"""

from stabledirac import Chart, KVector, VectorField, check_dirac, graph_poisson, prolong_dirac, span_equal
from stabledirac.tensors import schouten_bracket

chart = Chart(("x", "y", "z"))
x, y, z = (chart.var(c) for c in "xyz")

so3 = KVector.from_components(chart, 2, [(("y", "z"), x), (("z", "x"), y), (("x", "y"), z)])
bent = KVector.from_components(chart, 2, [(("x", "y"), 1), (("y", "z"), y)])

for name, W in (("so(3)", so3), ("bent", bent)):
    print(f"[{name}] [W,W] = 0: {schouten_bracket(W, W).is_zero()}")
    print(check_dirac(graph_poisson(W)).render())
    print()

# the rotation about the z axis preserves the so(3) bracket, so it may be
# appended as a stable direction
rotation = VectorField(chart, [-y, x, chart.zero()])
big = prolong_dirac(graph_poisson(so3), [rotation])
print("prolonged frame lives on", big.chart.coords)
print(check_dirac(big).render())
print("spans the graph of so(3) with the rotation as stable direction:",
      span_equal(big, graph_poisson(so3, [rotation], big.chart)))
