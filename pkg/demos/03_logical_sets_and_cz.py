"""Logical operator structure: the three logical-set families, shift
automorphisms, and transversal CZ gates between two code copies."""

from ttcodes import Monomial, get_code
from ttcodes.code import compute_k
from ttcodes.logicals import search_logical_sets, shift_automorphism, transversal_cz

code = get_code("tt_81_6_6")
k = compute_k(code)
best = search_logical_sets(code)[0]
print(f"{code}: best logical set is the {best.variant} variant, covering "
      f"{best.covered_logicals} of {2*k} logical Paulis "
      f"({best.pairs_per_set} conjugate pairs per set)")
print(f"  f = {best.f}")
g, h, j = best.ghj
print(f"  (g, h, j) = ({g}; {h}; {j})")

# shift automorphisms permute each block by alpha -> beta*alpha
beta = Monomial(code.dims, 1, 0, 0)
perm = shift_automorphism(code, beta)
print(f"shift by {beta}: checks permute within families; "
      f"SWAP realization available: {perm.swap_layers is not None}")

# transversal CZ between two copies, with its logical action matrix
circuit, action = transversal_cz(code, "LC", Monomial(code.dims, 0, 0, 0))
print(f"CZ_LC: {len(circuit.gates)} gates (depth 1); logical action:")
print(action)
