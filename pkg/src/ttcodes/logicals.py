"""Pauli-operator structure of TT codes: commutation tests, logical bases,
the three logical-set families, shift automorphisms and transversal CZ gates
between two code copies.

CSS Pauli operators are described by a triple of polynomials giving the
support on the L, C, R data blocks.  An X operator X(P,Q,S) and a Z operator
Z(P',Q',S') anticommute iff 1 appears in P P'^T + Q Q'^T + S S'^T.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from . import gf2
from .code import BLOCKS, TTCode
from .groupalg import GroupDims, GroupPolynomial, Monomial

# -- generic CSS logical-basis machinery -------------------------------------


def coset_logical_basis(H_ker: np.ndarray, H_mod: np.ndarray) -> np.ndarray:
    """Basis of ker(H_ker) / rs(H_mod), one representative per row."""
    K = gf2.kernel_basis(H_ker)
    span = gf2.IncrementalRref(H_ker.shape[1], seed_rows=H_mod)
    chosen = [v for v in K if span.add(v)]
    if chosen:
        return np.array(chosen, dtype=np.uint8)
    return np.zeros((0, H_ker.shape[1]), dtype=np.uint8)


def dual_basis(L: np.ndarray, H_dual_ker: np.ndarray) -> np.ndarray:
    """Vectors D in ker(H_dual_ker) with L @ D.T = identity over GF(2)."""
    K = gf2.kernel_basis(H_dual_ker)
    P = gf2.matmul(L, K.T)  # k x dim(K)
    k = L.shape[0]
    D = np.zeros((k, L.shape[1]), dtype=np.uint8)
    for i in range(k):
        target = np.zeros(k, dtype=np.uint8)
        target[i] = 1
        x = gf2.solve(P, target)
        if x is None:
            raise ValueError("pairing is degenerate; inputs are not a logical basis")
        D[i] = (x.astype(np.int64) @ K.astype(np.int64) % 2).astype(np.uint8)
    return D


def css_logical_bases(code: TTCode) -> tuple[np.ndarray, np.ndarray]:
    """Symplectically paired (L_X, L_Z) bases with L_X @ L_Z.T = identity."""
    L_X = coset_logical_basis(code.H_Z, code.H_X)
    L_Z0 = coset_logical_basis(code.H_X, code.H_Z)
    P = gf2.matmul(L_X, L_Z0.T)
    k = L_X.shape[0]
    # rotate the Z side so the pairing becomes the identity
    L_Z = np.zeros_like(L_Z0)
    for i in range(k):
        target = np.zeros(k, dtype=np.uint8)
        target[i] = 1
        x = gf2.solve(P, target)
        if x is None:
            raise ValueError("degenerate X/Z pairing")
        L_Z[i] = (x.astype(np.int64) @ L_Z0.astype(np.int64) % 2).astype(np.uint8)
    assert np.array_equal(gf2.matmul(L_X, L_Z.T), np.eye(k, dtype=np.uint8))
    return L_X, L_Z


# -- CSS Pauli operators ------------------------------------------------------


@dataclass(frozen=True)
class CssPauli:
    kind: str  # "X" or "Z"
    blocks: tuple[GroupPolynomial, GroupPolynomial, GroupPolynomial]

    def __post_init__(self):
        if self.kind not in ("X", "Z"):
            raise ValueError("kind must be X or Z")
        dims = self.blocks[0].dims
        if any(P.dims != dims for P in self.blocks):
            raise ValueError("block polynomials must share dims")

    @property
    def dims(self) -> GroupDims:
        return self.blocks[0].dims

    def to_vector(self) -> np.ndarray:
        return np.concatenate([P.to_vector() for P in self.blocks])

    @classmethod
    def from_vector(cls, kind: str, dims: GroupDims, vec) -> "CssPauli":
        g = dims.order
        v = np.asarray(vec).ravel()
        return cls(kind, tuple(GroupPolynomial.from_vector(dims, v[b * g:(b + 1) * g])
                               for b in range(3)))

    @property
    def weight(self) -> int:
        return sum(P.weight for P in self.blocks)

    def __str__(self) -> str:
        return f"{self.kind}({', '.join(str(P) for P in self.blocks)})"


def anticommutes(x_op: CssPauli, z_op: CssPauli) -> bool:
    """Polynomial anticommutation test: 1 in sum of P P'^T over blocks."""
    if x_op.kind != "X" or z_op.kind != "Z":
        raise ValueError("expected an X operator and a Z operator")
    if x_op.dims != z_op.dims:
        raise ValueError("dimension mismatch")
    acc = GroupPolynomial(x_op.dims)
    for P, Pbar in zip(x_op.blocks, z_op.blocks):
        acc = acc + P * Pbar.transpose()
    return acc.contains_one()


def symplectic_anticommutes(x_op: CssPauli, z_op: CssPauli) -> bool:
    """Bit-level oracle: parity of the support overlap."""
    return bool((x_op.to_vector() & z_op.to_vector()).sum() & 1)


# -- the f and (g,h,j) polynomial spaces --------------------------------------


def find_f_polynomials(code: TTCode) -> list[GroupPolynomial]:
    """Basis of the solutions of the ring system A f = B f = C f = 0.

    As vectors this is the common kernel of the matrices of A^T, B^T, C^T
    (vec(P f) = matrix(P^T) @ vec(f)).
    """
    mats = [P.transpose().to_matrix() for P in code.polys]
    basis = gf2.kernel_intersection(mats)
    return [GroupPolynomial.from_vector(code.dims, v) for v in basis]


def find_ghj_triples(code: TTCode) -> list[tuple[GroupPolynomial, GroupPolynomial, GroupPolynomial]]:
    """Basis of ring solutions of C h + B j = C g + A j = B g + A h = 0."""
    MAt = code.A.transpose().to_matrix()
    MBt = code.B.transpose().to_matrix()
    MCt = code.C.transpose().to_matrix()
    g_ord = code.g
    Zero = np.zeros((g_ord, g_ord), dtype=np.uint8)
    system = np.vstack([
        np.hstack([Zero, MCt, MBt]),   # C h + B j = 0
        np.hstack([MCt, Zero, MAt]),   # C g + A j = 0
        np.hstack([MBt, MAt, Zero]),   # B g + A h = 0
    ])
    out = []
    for v in gf2.kernel_basis(system):
        polys = tuple(GroupPolynomial.from_vector(code.dims, v[b * g_ord:(b + 1) * g_ord])
                      for b in range(3))
        out.append(polys)
    return out


# -- logical sets --------------------------------------------------------------

# per variant: for each of the three sets, the (X blocks, Z blocks) recipe as
# functions of (f, g, h, j); entries name which polynomial lands on L, C, R
_VARIANT_RECIPES = {
    # bar: requires fh != 0
    "bar": {
        "pairing": lambda f, g, h, j: f * h,
        "sets": [
            (("f", None, None), ("hT", "gT", None)),
            (("g", "h", "j"), (None, "fT", None)),
            ((None, None, "f"), (None, "jT", "hT")),
        ],
    },
    # tilde: requires fg != 0
    "tilde": {
        "pairing": lambda f, g, h, j: f * g,
        "sets": [
            ((None, "f", None), ("hT", "gT", None)),
            (("g", "h", "j"), ("fT", None, None)),
            ((None, None, "f"), ("jT", None, "gT")),
        ],
    },
    # hat: requires fj != 0
    "hat": {
        "pairing": lambda f, g, h, j: f * j,
        "sets": [
            (("f", None, None), ("jT", None, "gT")),
            (("g", "h", "j"), (None, None, "fT")),
            ((None, "f", None), (None, "jT", "hT")),
        ],
    },
}


@dataclass
class LogicalSetBasis:
    variant: str
    f: GroupPolynomial
    ghj: tuple[GroupPolynomial, GroupPolynomial, GroupPolynomial]
    pairing: GroupPolynomial
    coverage_x: int
    coverage_z: int
    pairs_per_set: int
    x_block_polys: list[tuple]
    z_block_polys: list[tuple]

    @property
    def covered_logicals(self) -> int:
        """Independent logical Paulis (X and Z together) realized by the set."""
        return self.coverage_x + self.coverage_z

    def x_rep(self, set_index: int, alpha: Monomial) -> CssPauli:
        return CssPauli("X", tuple(P * alpha for P in self.x_block_polys[set_index]))

    def z_rep(self, set_index: int, alpha: Monomial) -> CssPauli:
        return CssPauli("Z", tuple(P * alpha for P in self.z_block_polys[set_index]))


def _resolve(symbol, f, g, h, j, dims) -> GroupPolynomial:
    if symbol is None:
        return GroupPolynomial(dims)
    base = {"f": f, "g": g, "h": h, "j": j}[symbol[0]]
    return base.transpose() if symbol.endswith("T") else base


def build_logical_set(code: TTCode, f: GroupPolynomial, ghj, variant: str,
                      verify: bool = True, allow_zero_pairing: bool = False) -> LogicalSetBasis:
    """Construct the logical set of the given variant and count its coverage.

    By default raises when the variant's pairing polynomial vanishes (no
    conjugate logical pairs exist for that choice); the coverage search sets
    allow_zero_pairing since the operators are valid logicals regardless.
    """
    g, h, j = ghj
    recipe = _VARIANT_RECIPES[variant]
    pairing = recipe["pairing"](f, g, h, j)
    if pairing.is_zero() and not allow_zero_pairing:
        raise ValueError(f"variant {variant!r} inapplicable: pairing polynomial is zero")
    dims = code.dims
    x_polys = [tuple(_resolve(sym, f, g, h, j, dims) for sym in xs)
               for xs, _ in recipe["sets"]]
    z_polys = [tuple(_resolve(sym, f, g, h, j, dims) for sym in zs)
               for _, zs in recipe["sets"]]

    # spans of all alpha-shifts of a block triple, modulo the stabilizers;
    # row alpha of matrix(P) is exactly vec(P * alpha)
    def span_rows(polys_list):
        rows = []
        for triple in polys_list:
            rows.append(np.hstack([P.to_matrix() for P in triple]))
        return np.vstack(rows)

    x_rows = span_rows(x_polys)
    z_rows = span_rows(z_polys)
    if verify:
        assert not gf2.matmul(code.H_Z, x_rows.T).any(), "X reps must commute with Z checks"
        assert not gf2.matmul(code.H_X, z_rows.T).any(), "Z reps must commute with X checks"
    coverage_x = gf2.rank(np.vstack([code.H_X, x_rows])) - gf2.rank(code.H_X)
    coverage_z = gf2.rank(np.vstack([code.H_Z, z_rows])) - gf2.rank(code.H_Z)
    pairs_per_set = gf2.rank(pairing.to_matrix())
    return LogicalSetBasis(variant, f, (g, h, j), pairing, coverage_x, coverage_z,
                           pairs_per_set, x_polys, z_polys)


def _span_candidates(basis_elems, budget_pairs: bool):
    """Basis elements plus pairwise sums (the documented search budget)."""
    out = list(basis_elems)
    if budget_pairs:
        for a, b in itertools.combinations(basis_elems, 2):
            if isinstance(a, tuple):
                out.append(tuple(x + y for x, y in zip(a, b)))
            else:
                out.append(a + b)
    return out


def search_logical_sets(code: TTCode, pairwise_sums: bool = True):
    """Enumerate (f, (g,h,j), variant) candidates and return them ranked by
    coverage (best first).  Candidates span the solution bases plus pairwise
    sums; zero-pairing combinations are skipped."""
    fs = _span_candidates(find_f_polynomials(code), pairwise_sums)
    ghjs = _span_candidates(find_ghj_triples(code), pairwise_sums)
    results = []
    for f in fs:
        if f.is_zero():
            continue
        for ghj in ghjs:
            if all(P.is_zero() for P in ghj):
                continue
            for variant in _VARIANT_RECIPES:
                ls = build_logical_set(code, f, ghj, variant, verify=False,
                                       allow_zero_pairing=True)
                results.append(ls)
    results.sort(key=lambda ls: -ls.covered_logicals)
    return results


# -- shift automorphisms -------------------------------------------------------


@dataclass
class QubitPermutation:
    """Data/measure-qubit permutation of a shift automorphism alpha -> beta*alpha."""

    beta: Monomial
    data_perm: np.ndarray      # length n, qubit q -> data_perm[q]
    check_perm: np.ndarray     # length g, X-check and per-family Z-check map
    swap_layers: list | None = None   # two layers of swaps when available

    def compose(self, other: "QubitPermutation") -> "QubitPermutation":
        return QubitPermutation(self.beta * other.beta,
                                self.data_perm[other.data_perm],
                                self.check_perm[other.check_perm], None)


def shift_automorphism(code: TTCode, beta: Monomial) -> QubitPermutation:
    """Permutation mapping every data qubit (block, alpha) to (block, beta*alpha).

    Verified to permute X-check rows among themselves and Z-check rows within
    each family.  When beta has the form T2 * T1^T for two terms of one code
    polynomial, a depth-2 SWAP realization over existing Tanner-graph
    connections is attached.
    """
    g = code.g
    dims = code.dims
    perm_g = np.empty(g, dtype=np.int64)
    for idx in range(g):
        alpha = Monomial(dims, *dims.exponents(idx))
        perm_g[idx] = (beta * alpha).index
    data_perm = np.concatenate([perm_g + b * g for b in range(3)])

    # row-permutation verification: row alpha of H_X, permuted on columns,
    # must equal row beta*alpha; same per Z family
    cols = data_perm
    HXp = code.H_X[:, :]
    for alpha_idx in range(g):
        target = perm_g[alpha_idx]
        row = np.zeros(code.n, dtype=np.uint8)
        row[cols] = code.H_X[alpha_idx]
        if not np.array_equal(row, HXp[target]):
            raise AssertionError("shift automorphism failed to permute X checks")
    for fam in range(3):
        blk = code.H_Z[fam * g:(fam + 1) * g]
        for alpha_idx in range(g):
            row = np.zeros(code.n, dtype=np.uint8)
            row[cols] = blk[alpha_idx]
            if not np.array_equal(row, blk[perm_g[alpha_idx]]):
                raise AssertionError("shift automorphism failed to permute Z checks")

    swap_layers = _swap_realization(code, beta)
    return QubitPermutation(beta, data_perm, perm_g, swap_layers)


def _swap_realization(code: TTCode, beta: Monomial):
    """Depth-2 SWAP layers for beta = T_j T_i^T built from one polynomial's
    terms, routed through measure qubits over existing connections."""
    for poly_name, P in zip("ABC", code.polys):
        terms = P.sorted_terms()
        for ti, tj in itertools.product(terms, terms):
            if tj * ti.transpose() != beta:
                continue
            layer1, layer2 = [], []
            g = code.g
            dims = code.dims
            # for the polynomial acting on block `home`, data qubits of that
            # block route via X-measure qubits; the other two blocks route via
            # the Z-measure family whose checks touch them through P
            home = "ABC".index(poly_name)
            others = [b for b in range(3) if b != home]
            zfam_for = {1: {0: "Zc", 2: "Za"}, 0: {1: "Zc", 2: "Zb"}, 2: {0: "Zb", 1: "Za"}}
            for idx in range(g):
                alpha = Monomial(dims, *dims.exponents(idx))
                mid = (ti.transpose() * alpha).index
                dest = (beta * alpha).index
                layer1.append((("data", BLOCKS[home], idx), ("X", mid)))
                layer2.append((("X", mid), ("data", BLOCKS[home], dest)))
                for b in others:
                    fam = zfam_for[home][b]
                    midz = (tj * alpha).index
                    layer1.append((("data", BLOCKS[b], idx), (fam, midz)))
                    layer2.append(((fam, midz), ("data", BLOCKS[b], dest)))
            return [layer1, layer2]
    return None


# -- transversal CZ gates -------------------------------------------------------


@dataclass
class CZCircuit:
    """Depth-1 CZ circuit between two identical code blocks."""

    pair: str                      # "CR", "LR" or "LC"
    beta: Monomial
    gates: list[tuple[int, int]]   # (block-1 qubit index, block-2 qubit index)

    @property
    def depth(self) -> int:
        return 1 if self.gates else 0


_PAIR_BLOCKS = {"CR": ("C", "R"), "LR": ("L", "R"), "LC": ("L", "C")}


def transversal_cz(code: TTCode, pair: str, beta: Monomial,
                   bases: tuple[np.ndarray, np.ndarray] | None = None):
    """Build the depth-1 inter-block CZ circuit and its logical action.

    Returns (CZCircuit, action) where action[a][b] = 1 iff the circuit enacts
    a logical CZ between logical a of block 1 and logical b of block 2 (in
    the supplied or default symplectic basis).  Raises if the stabilizer
    preservation check fails, which would signal an implementation bug.
    """
    if pair not in _PAIR_BLOCKS:
        raise ValueError("pair must be one of CR, LR, LC")
    b1, b2 = _PAIR_BLOCKS[pair]
    dims = code.dims
    g = code.g
    gates = []
    for idx in range(g):
        alpha = Monomial(dims, *dims.exponents(idx))
        partner = (beta * alpha.transpose()).index
        gates.append((code.qubit_index(b1, alpha), BLOCKS.index(b2) * g + partner))
        gates.append((code.qubit_index(b2, alpha), BLOCKS.index(b1) * g + partner))
    # dedupe doubled gates (possible when the two families coincide)
    seen = {}
    for q1, q2 in gates:
        seen[(q1, q2)] = seen.get((q1, q2), 0) ^ 1
    gates = sorted(k for k, v in seen.items() if v)
    circuit = CZCircuit(pair, beta, gates)

    # per-qubit depth-1 property
    used1 = [q1 for q1, _ in gates]
    used2 = [q2 for _, q2 in gates]
    assert len(set(used1)) == len(used1) and len(set(used2)) == len(used2)

    # stabilizer preservation: conjugating an X stabilizer of either block
    # must induce a Z stabilizer on the other block
    induced = _induced_z_map(code.n, gates)
    hz_rref = gf2.Rref(code.H_Z)
    for row in code.H_X:
        if not hz_rref.contains(induced(row, side=0)):
            raise AssertionError("transversal CZ fails stabilizer preservation (block 1)")
        if not hz_rref.contains(induced(row, side=1)):
            raise AssertionError("transversal CZ fails stabilizer preservation (block 2)")

    if bases is None:
        bases = css_logical_bases(code)
    L_X, L_Z = bases
    k = L_X.shape[0]
    action = np.zeros((k, k), dtype=np.uint8)
    for a in range(k):
        w = induced(L_X[a], side=0)
        for b in range(k):
            action[a, b] = (w & L_X[b]).sum() & 1
        # residue check: w minus its logical part must be a stabilizer
        resid = w.copy()
        for b in range(k):
            if action[a, b]:
                resid ^= L_Z[b]
        if not hz_rref.contains(resid):
            raise AssertionError("induced operator is not stabilizer + logicals")
    return circuit, action


def _induced_z_map(n: int, gates):
    """Map an X support on one block copy to the induced Z support on the other."""
    partners_from_1: dict[int, list[int]] = {}
    partners_from_2: dict[int, list[int]] = {}
    for q1, q2 in gates:
        partners_from_1.setdefault(q1, []).append(q2)
        partners_from_2.setdefault(q2, []).append(q1)

    def induced(x_support, side: int) -> np.ndarray:
        table = partners_from_1 if side == 0 else partners_from_2
        out = np.zeros(n, dtype=np.uint8)
        for q in np.flatnonzero(np.asarray(x_support).ravel()):
            for p in table.get(int(q), ()):
                out[p] ^= 1
        return out

    return induced
