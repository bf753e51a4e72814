"""The Heisenberg almost contact structure: normality, its lift, and its projection.

Run with ``python demos/contact_projection.py``.
"""

from stabledirac import (
    Chart,
    EndoField,
    GacsData,
    KForm,
    KVector,
    gacs_normality_check,
    gcs_integrability_check,
    lift_gacs_to_gcs,
    projection_check,
)
from stabledirac.tensors import coord_form, coord_vector

chart = Chart(("x", "y", "z"))
y = chart.var("y")
dx, dz = coord_form(chart, "x"), coord_form(chart, "z")
ex, ey, ez = (coord_vector(chart, c) for c in "xyz")

# F rotates the horizontal plane of the contact form dz - y dx
F = EndoField.from_images(chart, {"x": ey, "y": -ex - ez * y})
g = GacsData(KVector.zero(chart, 2), KForm.zero(chart, 2), F, (ez,), (dz - dx * y,))

print(gacs_normality_check(g).render())
print()

lifted = lift_gacs_to_gcs(g)
print("lift to", lifted.chart.coords, "integrable:", gcs_integrability_check(lifted).ok)
print()

report, base = projection_check(g, ("z",))
print(report.render())
print("projected endomorphism on", base.chart.coords, ":", base.A)
