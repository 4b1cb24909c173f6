"""Random search for new codes: sample polynomials with leading term 1,
deduplicate under the code equivalences, and rank by a quick distance bound."""

from ttcodes import GroupDims
from ttcodes.experiments import random_code_search

dims = GroupDims(3, 2, 2)
candidates = random_code_search(dims, weight=2, effort=100, seed=1,
                                distance_budget=(200, 3))
print(f"dims (3,2,2), weight-2 polynomials: {len(candidates)} inequivalent candidates")
for cand in candidates[:8]:
    print(f"  [[{cand.n},{cand.k},<={cand.dz_bound}]]  A={cand.polys[0]}  "
          f"B={cand.polys[1]}  C={cand.polys[2]}")
