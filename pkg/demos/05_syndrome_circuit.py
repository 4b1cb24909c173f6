"""The depth-13 interleaved syndrome-measurement circuit and its symbolic
verification: the tableau is propagated with polynomial entries through the
eleven CNOT layers and compared to the required end state."""

from ttcodes import get_code
from ttcodes.circuits import (build_syndrome_circuit, circuit_depth_and_collisions,
                              serialize_circuit, verify_logical_preservation,
                              verify_tableau)

code = get_code("tt_72_6_6")
circuit = build_syndrome_circuit(code)
depth, collisions = circuit_depth_and_collisions(circuit)
print(f"{code}: depth {depth}, collisions {len(collisions)}, "
      f"{sum(len(l.cnots) for l in circuit.layers)} CNOTs")
print("tableau target reached:", verify_tableau(code, circuit))
print("logical operators preserved:", verify_logical_preservation(code, circuit))

text = serialize_circuit(circuit)
print("serialization preview:")
print("\n".join(text.splitlines()[:12]))
