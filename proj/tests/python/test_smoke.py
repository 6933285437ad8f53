"""Smoke test for the python module: builds a tube, runs the main operations
and checks a handful of known values. Exits nonzero on the first failure."""

import math
import sys

import tubeflow as tf

failures = []


def check(cond, what):
    tag = "ok" if cond else "FAIL"
    print(f"{tag}: {what}")
    if not cond:
        failures.append(what)


a = tf.canonical_tube("A")
check(a.name == "A", "canonical tube A loads")
check(a.width(20.0) == 4.0, "tube A width is 4")
check(a.s_begin == 0.0 and a.s_end == 40.0, "tube A parameter range")

p = a.boundary_point(0.0, tf.Side.upper)
check(abs(p.x) < 1e-12 and abs(p.y - 2.0) < 1e-12, "upper boundary point at s=0")

quad = tf.QuadratureSpec(400, 20)
report = tf.compute_dof(a, quadrature=quad)
check(abs(report.energy - 20.0) < 0.1, f"tube A energy ~ 20 (got {report.energy:.4f})")
check(abs(report.dof - 0.2) < 1e-3, f"tube A dof ~ 0.2 (got {report.dof:.6f})")
check(len(report.per_element_energy) == 2 * quad.n_lambda, "per-element breakdown size")

text = tf.tube_to_json(a)
a2 = tf.tube_from_json(text)
report2 = tf.compute_dof(a2, quadrature=quad)
check(report2.energy == report.energy, "JSON round trip reproduces the energy")

e = tf.canonical_tube("E")
widths = [abs(e.width(s) - 4.0) < 0.5 for s in (0.0, 10.0, 20.0)]
check(all(widths), "tube E stays near width 4")

svg = tf.render_tube_svg(a)
check(svg.startswith("<svg") and svg.rstrip().endswith("</svg>"), "tube SVG renders")
field_svg = tf.render_field_svg(a, n_s=9, n_lambda=2)
check(field_svg.count("polyline") > 20, "field SVG has arrows")

vopts = tf.ValidationOptions(random_tubes=3, random_trapezoids=500)
vreport = tf.run_validation([a], vopts)
check(vreport.all_passed, "oracle suite passes on tube A")

copts = tf.CampaignOptions()
copts.n_robots = 5
copts.trials = 1
copts.quadrature = quad
result = tf.run_campaign([a], copts)
summary = result.tubes[0]
check(summary.tube_name == "A", "campaign reports tube name")
check(
    math.isfinite(summary.mean_crossing_time) and summary.mean_crossing_time > 0,
    f"campaign crossing time is positive (got {summary.mean_crossing_time:.2f})",
)
check(summary.containment_violations_total == 0, "no containment violations")

try:
    tf.tube_from_json("{}")
    check(False, "invalid tube JSON raises")
except RuntimeError:
    check(True, "invalid tube JSON raises")

if failures:
    print(f"{len(failures)} smoke check(s) failed", file=sys.stderr)
    sys.exit(1)
print("all smoke checks passed")
