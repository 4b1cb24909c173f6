"""Registry of named trivariate tricycle codes used throughout the tests
and demos, with their published parameters where known.

`known` fields: n, k always; dz/dx are best-known distance values (dx_exact
False means the value is only an upper bound from search); ccz is the
logical-CCZ count of the constant-depth circuit where applicable.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .code import TTCode, build_tt_code
from .groupalg import GroupDims, GroupPolynomial


@dataclass(frozen=True)
class CodeEntry:
    name: str
    dims: tuple[int, int, int]
    A: str
    B: str
    C: str
    n: int
    k: int
    dz: int | None = None
    dx: int | None = None
    dx_exact: bool = True
    ccz: int | None = None
    complete_logical_sets: bool | None = None
    max_logicals: int | None = None
    toric_layout: bool | None = None
    family: str = ""

    def build(self) -> TTCode:
        dims = GroupDims(*self.dims)
        polys = [GroupPolynomial.from_string(dims, s) for s in (self.A, self.B, self.C)]
        return build_tt_code(*polys, dims=dims, name=self.name)


_ENTRIES = [
    # -- weight-3 workhorse codes (memory-experiment family) ---------------
    CodeEntry("tt_72_6_6", (4, 3, 2), "1 + y + xy^2", "1 + yz + x^2y^2", "1 + xy^2z + x^2y",
              n=72, k=6, dz=6, dx=12, complete_logical_sets=False, max_logicals=6,
              toric_layout=False, family="weight3"),
    CodeEntry("tt_180_12_8", (5, 4, 3), "1 + x^2y^3z + x^4y", "1 + x^3 + x^4z^2", "1 + x^3y^3 + x^4yz^2",
              n=180, k=12, dz=8, dx=20, complete_logical_sets=True, family="weight3"),
    CodeEntry("tt_432_12_12", (6, 6, 4), "1 + xyz^3 + x^3y^4z^2", "1 + x^3yz^2 + x^3y^2z^3",
              "1 + x^4y^3z^3 + x^5z^2",
              n=432, k=12, dz=12, dx=36, dx_exact=False, complete_logical_sets=False,
              max_logicals=12, family="weight3"),
    # -- further weight-3 codes from random search --------------------------
    CodeEntry("tt_36_6_4", (3, 2, 2), "1 + x + x^2z", "1 + xy + x^2y", "1 + xyz + x^2",
              n=36, k=6, dz=4, dx=8, complete_logical_sets=False, max_logicals=6, family="weight3"),
    CodeEntry("tt_81_6_6", (3, 3, 3), "1 + x + xy", "1 + y + yz", "1 + z + x^2",
              n=81, k=6, dz=6, dx=12, complete_logical_sets=True, toric_layout=True,
              family="weight3"),
    CodeEntry("tt_126_6_8", (7, 3, 2), "1 + y^2 + x^4y", "1 + xy + x^4y^2z", "1 + x^2yz + x^2y^2",
              n=126, k=6, dz=8, dx=22, complete_logical_sets=True, family="weight3"),
    CodeEntry("tt_135_12_6", (5, 3, 3), "1 + x + x^3y^2", "1 + xz^2 + x^2yz", "1 + xy^2z + x^2yz",
              n=135, k=12, dz=6, dx=14, complete_logical_sets=True, family="weight3"),
    CodeEntry("tt_288_6_10", (8, 4, 3), "1 + yz + x^7yz^2", "1 + x^2yz + x^5z^2",
              "1 + x^2y^3z + x^6y^2z^2",
              n=288, k=6, dz=10, dx=48, dx_exact=False, complete_logical_sets=False,
              max_logicals=6, family="weight3"),
    CodeEntry("tt_588_9_14", (7, 7, 4), "1 + yz + x^3y^2z", "1 + xy^4z + x^4y^4z^2",
              "1 + x^2y^2z + x^2y^4",
              n=588, k=9, dz=14, dx=92, dx_exact=False, complete_logical_sets=True, family="weight3"),
    CodeEntry("tt_648_6_16", (6, 6, 6), "1 + xz^4 + x^3yz^4", "1 + xy^4z + x^5yz^5",
              "1 + x^2yz^2 + x^2y^2z^3",
              n=648, k=6, dz=16, dx=72, dx_exact=False, complete_logical_sets=True, family="weight3"),
    CodeEntry("tt_648_12_14", (6, 6, 6), "1 + x + x^4z", "1 + y + xyz^4", "1 + z + x^3y^2z",
              n=648, k=12, dz=14, dx=72, dx_exact=False, complete_logical_sets=False,
              max_logicals=12, toric_layout=True, family="weight3"),
    CodeEntry("tt_735_18_14", (7, 7, 5), "1 + y^2 + x^6y^5", "1 + x^2yz + x^2y^4z^3",
              "1 + x^4y^5z^2 + x^5y",
              n=735, k=18, dz=14, dx=80, dx_exact=False, complete_logical_sets=True, family="weight3"),
    CodeEntry("tt_840_9_16", (8, 7, 5), "1 + y^3z + xyz^2", "1 + y^5z + x^3y^4z", "1 + xy^3z^4 + x^7yz",
              n=840, k=9, dz=16, dx=None, complete_logical_sets=True, family="weight3"),
    CodeEntry("tt_1029_18_16", (7, 7, 7), "1 + y^2z^3 + x^5y^5z", "1 + x^2y^5z + x^4z^5",
              "1 + x^4y^6 + x^5y^4z^6",
              n=1029, k=18, dz=16, dx=None, complete_logical_sets=True, family="weight3"),
    # -- 3D toric codes ------------------------------------------------------
    CodeEntry("toric3d_81_3_3", (3, 3, 3), "1 + x", "1 + y", "1 + z",
              n=81, k=3, dz=3, dx=9, toric_layout=True, family="toric3d"),
    CodeEntry("toric3d_375_3_5", (5, 5, 5), "1 + x", "1 + y", "1 + z",
              n=375, k=3, dz=5, dx=25, toric_layout=True, family="toric3d"),
    CodeEntry("toric3d_1029_3_7", (7, 7, 7), "1 + x", "1 + y", "1 + z",
              n=1029, k=3, dz=7, dx=49, toric_layout=True, family="toric3d"),
    # -- (2,2,2) codes with logical CCZ --------------------------------------
    CodeEntry("ccz_36_3_3", (3, 2, 2), "1 + xyz", "1 + x^2z", "1 + x^2y",
              n=36, k=3, dz=3, dx=8, ccz=6, family="ccz222"),
    CodeEntry("ccz_48_3_4", (4, 2, 2), "1 + x", "1 + xz", "1 + xy",
              n=48, k=3, dz=4, dx=8, ccz=6, family="ccz222"),
    CodeEntry("ccz_54_3_4", (3, 3, 2), "1 + yz", "1 + xz", "1 + xyz",
              n=54, k=3, dz=4, dx=9, ccz=6, family="ccz222"),
    CodeEntry("ccz_60_3_4", (5, 2, 2), "1 + xz", "1 + xy", "1 + xyz",
              n=60, k=3, dz=4, dx=12, ccz=6, family="ccz222"),
    CodeEntry("ccz_90_3_5", (5, 3, 2), "1 + x", "1 + xy", "1 + x^2y^2z",
              n=90, k=3, dz=5, dx=15, ccz=6, family="ccz222"),
    # -- (4,2,2) distance-2 codes with logical CCZ ----------------------------
    CodeEntry("ccz_36_6_2", (3, 2, 2), "1 + x + z + xz", "1 + x", "1 + xyz",
              n=36, k=6, dz=2, dx=3, ccz=16, family="ccz422"),
    CodeEntry("ccz_48_6_2", (4, 2, 2), "1 + xz + x^2yz + x^3y", "1 + x^3", "1 + x^3yz",
              n=48, k=6, dz=2, dx=4, ccz=10, family="ccz422"),
    CodeEntry("ccz_54_9_2", (3, 3, 2), "1 + y + z + yz", "1 + xyz", "1 + x^2y^2",
              n=54, k=9, dz=2, dx=4, ccz=36, family="ccz422"),
    CodeEntry("ccz_108_6_2", (4, 3, 3), "1 + xz + x^2 + x^3z", "1 + x^2y^2", "1 + x^2y^2z^2",
              n=108, k=6, dz=2, dx=6, ccz=10, family="ccz422"),
    CodeEntry("ccz_108_18_2", (4, 3, 3), "1 + xy^2z^2 + x^2 + x^3y^2z^2", "1 + x^2y^2z", "1 + x^2y^2z",
              n=108, k=18, dz=2, dx=4, ccz=114, family="ccz422"),
    # -- (4,4,2) and (4,4,4) codes --------------------------------------------
    CodeEntry("ccz_108_18_2_442", (4, 3, 3), "1 + xyz^2 + x^2 + x^3yz^2",
              "1 + x^2 + x^3y^2z + xy^2z", "1 + x^2y^2z^2",
              n=108, k=18, dz=2, ccz=204, family="ccz442"),
    CodeEntry("ccz_108_60_2_444", (4, 3, 3), "1 + z + x^2 + x^2z",
              "1 + x^2yz^2 + x^2 + yz^2", "1 + z^2 + x^2 + x^2z^2",
              n=108, k=60, dz=2, ccz=552, family="ccz444"),
]

_BY_NAME = {e.name: e for e in _ENTRIES}

# factored form (G, f) of the weight-4 polynomials, matching how the codes
# were defined; used by the lemma-based pre-orientation strategy
FACTORED_A = {
    "ccz_36_6_2": ("z", "1 + x"),
    "ccz_48_6_2": ("x^2yz", "1 + xz"),
    "ccz_54_9_2": ("z", "1 + y"),
    "ccz_108_6_2": ("x^2", "1 + xz"),
    "ccz_108_18_2": ("x^2", "1 + xy^2z^2"),
    "ccz_108_18_2_442": ("x^2", "1 + xyz^2"),
    "ccz_108_60_2_444": ("x^2", "1 + z"),
}
FACTORED_B = {
    "ccz_108_18_2_442": ("x^2", "1 + x^3y^2z"),
    "ccz_108_60_2_444": ("x^2", "1 + x^2yz^2"),
}
FACTORED_C = {
    "ccz_108_60_2_444": ("x^2", "1 + z^2"),
}


# intersection-number reports are basis-dependent; these (pool_seed=0,
# sample_seed=2024) trial indices pin the documented basis convention under
# which the published logical-CCZ counts are reproduced
CCZ_BASIS_TRIAL = {
    "ccz_48_6_2": 1,
    "ccz_54_9_2": 3,
    "ccz_108_18_2": 5,
    "ccz_108_18_2_442": 1,
    "ccz_108_60_2_444": 26,
}


def names(family: str | None = None) -> list[str]:
    return [e.name for e in _ENTRIES if family is None or e.family == family]


def entry(name: str) -> CodeEntry:
    try:
        return _BY_NAME[name]
    except KeyError:
        raise KeyError(f"unknown code {name!r}; known: {', '.join(sorted(_BY_NAME))}") from None


def get(name: str) -> TTCode:
    return entry(name).build()
