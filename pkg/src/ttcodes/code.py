"""Trivariate tricycle code construction and structural properties.

A code is defined by three polynomials A, B, C over F2[Z_ell x Z_m x Z_p]
and lives on n = 3*ell*m*p data qubits split into L, C, R blocks.  Check
matrices (g = ell*m*p):

    H_X = [A B C]                                   (g x n)    X checks
    H_Z = [[0  C^T B^T], [C^T 0 A^T], [B^T A^T 0]]  (3g x n)   Z_a/Z_b/Z_c
    M_Z = [A^T B^T C^T]                             (g x 3g)   meta-checks

satisfying H_X @ H_Z.T = 0 and M_Z @ H_Z = 0.  Data qubit (block, alpha) has
column index block_offset + alpha.index; X-check alpha touches L qubits
A_i*alpha, C qubits B_i*alpha, R qubits C_i*alpha.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field

import numpy as np

from . import gf2
from .groupalg import GroupDims, GroupPolynomial, Monomial, generated_subgroup

BLOCKS = ("L", "C", "R")


@dataclass(frozen=True)
class TTCode:
    dims: GroupDims
    A: GroupPolynomial
    B: GroupPolynomial
    C: GroupPolynomial
    H_X: np.ndarray = field(compare=False, repr=False)
    H_Z: np.ndarray = field(compare=False, repr=False)
    M_Z: np.ndarray = field(compare=False, repr=False)
    name: str = ""

    @property
    def g(self) -> int:
        return self.dims.order

    @property
    def n(self) -> int:
        return 3 * self.dims.order

    @property
    def polys(self) -> tuple[GroupPolynomial, GroupPolynomial, GroupPolynomial]:
        return (self.A, self.B, self.C)

    def qubit_index(self, block: str, alpha: Monomial) -> int:
        return BLOCKS.index(block) * self.g + alpha.index

    def qubit_label(self, index: int) -> tuple[str, Monomial]:
        block, idx = divmod(index, self.g)
        return BLOCKS[block], Monomial(self.dims, *self.dims.exponents(idx))

    def __str__(self) -> str:
        tag = self.name or f"tt_{self.n}"
        return f"{tag}(dims={self.dims.ell},{self.dims.m},{self.dims.p})"


def build_tt_code(A: GroupPolynomial, B: GroupPolynomial, C: GroupPolynomial,
                  dims: GroupDims | None = None, name: str = "") -> TTCode:
    """Assemble check matrices and validate the CSS orthogonality invariants."""
    dims = dims or A.dims
    for P in (A, B, C):
        if P.dims != dims:
            raise ValueError("polynomial dims do not match code dims")
        if P.is_zero():
            raise ValueError("code polynomials must be non-zero")
    MA, MB, MC = A.to_matrix(), B.to_matrix(), C.to_matrix()
    MAt, MBt, MCt = MA.T, MB.T, MC.T
    g = dims.order
    Zero = np.zeros((g, g), dtype=np.uint8)
    H_X = np.hstack([MA, MB, MC])
    H_Z = np.vstack([
        np.hstack([Zero, MCt, MBt]),
        np.hstack([MCt, Zero, MAt]),
        np.hstack([MBt, MAt, Zero]),
    ])
    M_Z = np.hstack([MAt, MBt, MCt])
    # cannot fail for a correct assembly; kept as a hard internal assertion
    assert not gf2.matmul(H_X, H_Z.T).any(), "H_X H_Z^T != 0"
    assert not gf2.matmul(M_Z, H_Z).any(), "M_Z H_Z != 0"
    return TTCode(dims, A, B, C, H_X, H_Z, M_Z, name=name)


def compute_k(code: TTCode) -> int:
    """Number of logical qubits via the kernel-intersection formula.

    Cross-checked against n - rank(H_X) - rank(H_Z); a mismatch signals a
    linear-algebra bug and raises.
    """
    MA, MB, MC = code.A.to_matrix(), code.B.to_matrix(), code.C.to_matrix()
    g = code.g
    Zero = np.zeros((g, g), dtype=np.uint8)
    dim_f = gf2.kernel_intersection([MA, MB, MC]).shape[0]
    dim_ghj = gf2.kernel_intersection([
        np.hstack([Zero, MC, MB]),
        np.hstack([MC, Zero, MA]),
        np.hstack([MB, MA, Zero]),
    ]).shape[0]
    k = -code.n // 3 + dim_f + dim_ghj
    k_css = code.n - gf2.rank(code.H_X) - gf2.rank(code.H_Z)
    if k != k_css:
        raise RuntimeError(f"k formulas disagree: kernel formula {k} vs CSS count {k_css}")
    return k


def reduce_common_factor(P: GroupPolynomial) -> GroupPolynomial:
    """Divide out a common monomial factor so that 1 is a term.

    Dividing by any single term t (i.e. multiplying by t^T) yields an
    equivalent code; when several terms qualify, we pick the divisor that
    makes the normalized polynomial lexicographically smallest.  Polynomials
    already containing 1 are returned unchanged.
    """
    if P.is_zero():
        raise ValueError("cannot reduce the zero polynomial")
    if P.contains_one():
        return P
    best = None
    for t in P.sorted_terms():
        cand = P * t.transpose()
        key = [(m.i, m.j, m.k) for m in cand.sorted_terms()]
        if best is None or key < best[0]:
            best = (key, cand)
    return best[1]


def tanner_connected(code: TTCode) -> bool:
    """True iff the Tanner graph is a single connected component.

    Uses the subgroup criterion: the differences A_i A_j^T, B_i B_j^T,
    C_i C_j^T must generate the whole monomial group.
    """
    gens = []
    for P in code.polys:
        ts = P.sorted_terms()
        gens.extend(a * b.transpose() for a, b in itertools.product(ts, ts))
    return len(generated_subgroup(code.dims, gens)) == code.g


def tanner_connected_graph_oracle(code: TTCode) -> bool:
    """Literal BFS over the Tanner graph; independent cross-check."""
    n = code.n
    H = np.vstack([code.H_X, code.H_Z])
    n_checks = H.shape[0]
    adj_check = [np.flatnonzero(H[c]) for c in range(n_checks)]
    adj_qubit = [np.flatnonzero(H[:, q]) for q in range(n)]
    seen_q = np.zeros(n, dtype=bool)
    seen_c = np.zeros(n_checks, dtype=bool)
    stack = [("q", 0)]
    seen_q[0] = True
    while stack:
        kind, idx = stack.pop()
        if kind == "q":
            for c in adj_qubit[idx]:
                if not seen_c[c]:
                    seen_c[c] = True
                    stack.append(("c", c))
        else:
            for q in adj_check[idx]:
                if not seen_q[q]:
                    seen_q[q] = True
                    stack.append(("q", q))
    return bool(seen_q.all() and seen_c.all())


def has_toric_layout(code: TTCode) -> bool:
    """True iff some difference triple generates M with product of orders
    equal to the group order (i.e. a 3D toric spanning subgraph exists)."""
    diffs = []
    for P in code.polys:
        ts = P.sorted_terms()
        dset = {a * b.transpose() for a, b in itertools.product(ts, ts) if a != b}
        diffs.append(sorted(dset, key=lambda t: (t.i, t.j, t.k)))
    g_ord = code.g
    for da, db, dc in itertools.product(*diffs):
        if da.order() * db.order() * dc.order() != g_ord:
            continue
        if len(generated_subgroup(code.dims, [da, db, dc])) == g_ord:
            return True
    return False


def permuted_code(code: TTCode, perm: tuple[int, int, int]) -> TTCode:
    """Code with (A, B, C) permuted; an equivalent code."""
    polys = code.polys
    return build_tt_code(polys[perm[0]], polys[perm[1]], polys[perm[2]], code.dims)


def transposed_code(code: TTCode) -> TTCode:
    """Code with all three polynomials transposed; an equivalent code."""
    return build_tt_code(code.A.transpose(), code.B.transpose(), code.C.transpose(), code.dims)


def canonical_form(code_or_polys, dims: GroupDims | None = None) -> tuple:
    """Hashable canonical form modulo ABC permutation, global transpose and
    per-polynomial common-factor shifts (used for search dedup)."""
    if isinstance(code_or_polys, TTCode):
        polys, dims = code_or_polys.polys, code_or_polys.dims
    else:
        polys = tuple(code_or_polys)
        dims = dims or polys[0].dims

    def poly_orbit_min(P: GroupPolynomial) -> tuple:
        best = None
        for t in P.sorted_terms():
            cand = P * t.transpose()
            key = tuple((m.i, m.j, m.k) for m in cand.sorted_terms())
            if best is None or key < best:
                best = key
        return best

    forms = []
    for variant in (polys, tuple(P.transpose() for P in polys)):
        for perm in itertools.permutations(variant):
            forms.append(tuple(poly_orbit_min(P) for P in perm))
    return min(forms)


# -- code definition files -------------------------------------------------

def code_to_dict(code: TTCode) -> dict:
    return {
        "dims": [code.dims.ell, code.dims.m, code.dims.p],
        "A": code.A.exponent_triples(),
        "B": code.B.exponent_triples(),
        "C": code.C.exponent_triples(),
    }


def code_from_dict(data: dict, name: str = "") -> TTCode:
    dims = GroupDims(*data["dims"])
    polys = [GroupPolynomial(dims, [tuple(t) for t in data[key]]) for key in "ABC"]
    return build_tt_code(*polys, dims=dims, name=name or data.get("name", ""))


def save_code(code: TTCode, path) -> None:
    with open(path, "w") as fh:
        json.dump(code_to_dict(code), fh, indent=1)


def load_code(path) -> TTCode:
    with open(path) as fh:
        return code_from_dict(json.load(fh))
