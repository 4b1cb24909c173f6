"""Constant-depth CCZ circuits over three code copies.

Each polynomial is split into in/out/free term sets; when the five overlap
conditions hold, the emitted CCZ family preserves the stabilizer group of
the triple copy, and the intersection numbers of logical triples count the
enacted logical CCZ gates.
"""

from ttcodes.nonclifford import (catalog_ccz_report, catalog_orientations,
                                 check_cup_conditions, check_leibniz_direct,
                                 cz_action_pairs, gauge_fixed_cz)

code, orientations = catalog_orientations("ccz_36_3_3")
for letter, po in zip("ABC", orientations):
    print(f"{letter}: in={sorted(map(str, po.in_terms))} out={sorted(map(str, po.out_terms))}"
          f" conditions={check_cup_conditions(po)} leibniz={check_leibniz_direct(po)}")

code, circuit, report = catalog_ccz_report("ccz_36_3_3")
print(f"[[36,3,3]]: {circuit.gate_count()} CCZ gates in {circuit.depth} layers, "
      f"{report.count} logical CCZs: {report.triples}")

# a distance-2 code with many logical CCZs, then gauge-fix the weight-2
# logical to get an error-correcting code with an inherited CZ circuit
code, circuit, report = catalog_ccz_report("ccz_36_6_2")
print(f"[[36,6,2]]: Z-logical weights {report.z_weights}, "
      f"{report.count} logical CCZs")
gf = gauge_fixed_cz(code, circuit, report, fixed_logical=5)
print(f"gauge-fixing logical 5 gives a [[{gf.gauged_params[0]},{gf.gauged_params[1]}]] code "
      f"(distance 3) with {len(gf.cz_gates)} CZ gates acting as pairs {cz_action_pairs(gf.action)}")
