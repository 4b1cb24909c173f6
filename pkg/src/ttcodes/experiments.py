"""Memory-experiment harness, statistics, fits, and code search.

All randomness in an experiment derives from one root seed; grid points get
independent seeds via SeedSequence spawning, so the result set is
bit-reproducible from the config alone (and independent of the order in
which points are run).
"""

from __future__ import annotations

import csv
import dataclasses
import io
import itertools
import json
import math
from dataclasses import dataclass, field

import numpy as np

from . import catalog, gf2
from .code import TTCode, build_tt_code, canonical_form, code_from_dict, code_to_dict, compute_k, tanner_connected
from .decoder import BpOsd, WindowDecoder
from .distance import estimate_distance
from .groupalg import GroupDims, GroupPolynomial, Monomial
from .noise import DetectorModel, build_circuit_model, build_phenom_model, sample_shots


@dataclass
class ExperimentConfig:
    code: str | dict
    noise: str = "phenomenological"      # or "circuit"
    basis: str = "X"
    p_grid: tuple = (1e-2,)
    rounds: int | None = None            # default: 2 d_Z phenom; d_Z+1 / 13 circuit
    shots: int = 10_000
    window: tuple[int, int] | None = None
    max_iters: int = 30
    osd_order: int | str = "auto"        # auto: CS-30 for circuit X memory, else OSD-0
    damping: float = 0.5
    families: str = "auto"               # circuit models: memory-basis family or both
    two_stage: bool = False              # experimental meta-repair decode (phenom Z)
    seed: int = 0
    batch: int = 2000

    def resolve_code(self) -> TTCode:
        if isinstance(self.code, str):
            return catalog.get(self.code)
        return code_from_dict(self.code)

    def resolve_rounds(self, code: TTCode) -> int:
        if self.rounds is not None:
            return self.rounds
        dz = catalog.entry(code.name).dz if code.name and isinstance(self.code, str) else None
        if dz is None:
            dz = estimate_distance(code, "Z", info_trials=500, probe_weightings=6,
                                   seed=self.seed).weight
        if self.noise == "phenomenological":
            return 2 * dz
        return dz + 1 if self.basis == "X" else 13

    def resolve_osd_order(self) -> int:
        if self.osd_order != "auto":
            return int(self.osd_order)
        return 30 if (self.noise == "circuit" and self.basis == "X") else 0

    def resolve_families(self) -> str:
        if self.families != "auto":
            return self.families
        # the correlated two-family model is worth its cost for whole-history
        # circuit-level X memory; windowed Z memory uses the projected model
        return "both" if (self.noise == "circuit" and self.basis == "X") else "memory"

    def to_dict(self) -> dict:
        d = dataclasses.asdict(self)
        d["p_grid"] = list(self.p_grid)
        d["window"] = list(self.window) if self.window else None
        return d


@dataclass
class PointResult:
    p: float
    rounds: int
    shots: int
    failures: int
    seed: int

    @property
    def P_L(self) -> float:
        return self.failures / self.shots

    @property
    def p_L(self) -> float:
        return per_round_rate(self.P_L, self.rounds)

    def wilson(self, z: float = 1.96) -> tuple[float, float]:
        return wilson_interval(self.failures, self.shots, z)


@dataclass
class ExperimentResult:
    config: ExperimentConfig
    points: list[PointResult]

    def csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf)
        w.writerow(["code", "basis", "noise_model", "p", "rounds", "shots", "failures",
                    "p_L", "ci_lo", "ci_hi", "window_w", "window_c", "seed"])
        cfg = self.config
        code_name = cfg.code if isinstance(cfg.code, str) else "custom"
        ww, wc = (cfg.window if cfg.window else ("", ""))
        for pt in self.points:
            lo, hi = pt.wilson()
            w.writerow([code_name, cfg.basis, cfg.noise, pt.p, pt.rounds, pt.shots,
                        pt.failures, f"{pt.p_L:.8g}",
                        f"{per_round_rate(lo, pt.rounds):.8g}",
                        f"{per_round_rate(hi, pt.rounds):.8g}", ww, wc, pt.seed])
        return buf.getvalue()


def wilson_interval(failures: int, shots: int, z: float = 1.96) -> tuple[float, float]:
    """Wilson score interval for a binomial proportion."""
    if shots == 0:
        return (0.0, 1.0)
    ph = failures / shots
    denom = 1 + z * z / shots
    centre = (ph + z * z / (2 * shots)) / denom
    margin = z * math.sqrt(ph * (1 - ph) / shots + z * z / (4 * shots * shots)) / denom
    return (max(0.0, centre - margin), min(1.0, centre + margin))


def per_round_rate(P_L: float, rounds: int) -> float:
    """p_L = 1 - (1 - P_L)^(1/r)."""
    return 1.0 - (1.0 - min(P_L, 1.0 - 1e-15)) ** (1.0 / rounds)


def total_rate(p_L: float, rounds: int) -> float:
    return 1.0 - (1.0 - p_L) ** rounds


def build_model(code: TTCode, noise: str, basis: str, rounds: int, p: float,
                families: str = "memory") -> DetectorModel:
    if noise == "phenomenological":
        return build_phenom_model(code, basis, rounds, p)
    if noise == "circuit":
        return build_circuit_model(code, basis, rounds, p, families=families)
    raise ValueError(f"unknown noise model {noise!r}")


def run_point(code: TTCode, cfg: ExperimentConfig, p: float, seed: int) -> PointResult:
    rounds = cfg.resolve_rounds(code)
    model = build_model(code, cfg.noise, cfg.basis, rounds, p, cfg.resolve_families())
    osd_order = cfg.resolve_osd_order()
    failures = 0
    OT = model.observable_matrix.T.toarray().astype(np.int64)
    if cfg.two_stage:
        from .decoder import TwoStageDecoder

        tsdec = TwoStageDecoder(model, code, max_iters=cfg.max_iters,
                                osd_order=osd_order)
    elif cfg.window is not None:
        wdec = WindowDecoder(model, cfg.window[0], cfg.window[1],
                             max_iters=cfg.max_iters, osd_order=osd_order,
                             damping=cfg.damping)
    else:
        dec = BpOsd(model.fault_matrix, model.priors, max_iters=cfg.max_iters,
                    osd_order=osd_order, damping=cfg.damping)
    for lo in range(0, cfg.shots, cfg.batch):
        m = min(cfg.batch, cfg.shots - lo)
        synd, obs = sample_shots(model, m, seed=seed + 7919 * (lo // cfg.batch))
        if cfg.two_stage:
            pred = np.array([tsdec.predict_observables(row) for row in synd], dtype=np.uint8)
        else:
            if cfg.window is not None:
                corr = wdec.decode_batch(synd)
            else:
                corr, _ = dec.decode_batch(synd)
            pred = ((corr.astype(np.int64) @ OT) % 2).astype(np.uint8)
        failures += int((pred != obs).any(axis=1).sum())
    return PointResult(p, rounds, cfg.shots, failures, seed)


def run_memory_experiment(cfg: ExperimentConfig) -> ExperimentResult:
    code = cfg.resolve_code()
    seeds = np.random.SeedSequence(cfg.seed).spawn(len(cfg.p_grid))
    points = []
    for p, ss in zip(cfg.p_grid, seeds):
        points.append(run_point(code, cfg, p, int(ss.generate_state(1)[0] % 2**31)))
    return ExperimentResult(cfg, points)


# -- ansatz fitting and break-even analysis ------------------------------------------


@dataclass
class FitParams:
    c0: float
    c1: float
    c2: float
    d_eff: int

    def evaluate(self, p) -> np.ndarray:
        p = np.asarray(p, dtype=float)
        return p ** (self.d_eff / 2) * np.exp(self.c0 + self.c1 * p + self.c2 * p * p)


def fit_ansatz(points, d_eff: int) -> FitParams:
    """Least-squares fit of log p_L = (d_eff/2) log p + c0 + c1 p + c2 p^2.

    Needs at least three points with nonzero rates.
    """
    pts = [(p, y) for p, y in points if y > 0]
    if len(pts) < 3:
        raise ValueError("need at least three points with nonzero failure rates")
    p = np.array([q for q, _ in pts])
    y = np.array([v for _, v in pts])
    rhs = np.log(y) - (d_eff / 2) * np.log(p)
    A = np.stack([np.ones_like(p), p, p * p], axis=1)
    coef, *_ = np.linalg.lstsq(A, rhs, rcond=None)
    return FitParams(float(coef[0]), float(coef[1]), float(coef[2]), d_eff)


def _bisect(fn, lo, hi, iters=200):
    flo, fhi = fn(lo), fn(hi)
    if flo == 0:
        return lo
    if fhi == 0:
        return hi
    if flo * fhi > 0:
        raise ValueError("no root in the searched interval")
    for _ in range(iters):
        mid = math.sqrt(lo * hi)  # geometric bisection suits log-scaled curves
        fm = fn(mid)
        if fm == 0:
            return mid
        if flo * fm < 0:
            hi = mid
        else:
            lo, flo = mid, fm
    return math.sqrt(lo * hi)


def pseudo_threshold(fit: FitParams, k: int = 1, mode: str = "phenomenological",
                     lo: float = 1e-5, hi: float = 0.3) -> float | None:
    """Root of the break-even equation: p_L(p) = p (phenomenological) or
    p_L(p) = k p (circuit).  Returns None for a degenerate (identically
    break-even) fit."""
    slope = 1.0 if mode == "phenomenological" else float(k)

    def f(p):
        return fit.evaluate(p) - slope * p

    samples = np.geomspace(lo, hi, 64)
    vals = f(samples)
    if np.max(np.abs(vals) / (slope * samples)) < 1e-9:
        return None  # degenerate: every point solves the break-even equation
    sign_change = np.flatnonzero(np.sign(vals[:-1]) * np.sign(vals[1:]) < 0)
    if sign_change.size == 0:
        raise ValueError("no root in the searched interval")
    # the break-even point is the first crossing from below; the fitted curve
    # may cross back at high p where the quadratic exponent takes over
    i = sign_change[0]
    return _bisect(f, samples[i], samples[i + 1])


def find_crossing(fit_a: FitParams, fit_b: FitParams, lo: float = 1e-4,
                  hi: float = 0.3) -> float | None:
    """Intersection of two fitted curves; None when they coincide."""
    def f(p):
        return fit_a.evaluate(p) - fit_b.evaluate(p)

    samples = np.geomspace(lo, hi, 64)
    vals = f(samples)
    scale = np.maximum(fit_a.evaluate(samples), 1e-300)
    if np.max(np.abs(vals) / scale) < 1e-9:
        return None  # identical fits: degenerate crossing
    sign_change = np.flatnonzero(np.sign(vals[:-1]) * np.sign(vals[1:]) < 0)
    if sign_change.size == 0:
        raise ValueError("no crossing in the searched interval")
    i = sign_change[0]
    return _bisect(f, samples[i], samples[i + 1])


# -- circuit-level distance -----------------------------------------------------------


def estimate_circuit_distance(model: DetectorModel, seed: int = 0,
                              weightings: int = 20, osd_order: int = 10,
                              hint_columns=None):
    """Upper bound on the minimum-weight fault set that flips an observable
    while triggering no detectors.

    Decoder-probe search: each observable row (and random combinations) is
    appended to the detector matrix and decoded as a syndrome-free target
    under random channel reweightings.  `hint_columns` optionally seeds the
    bound with known undetectable fault sets (e.g. code-distance logicals
    placed in the final round).
    """
    D = model.fault_matrix
    O = model.observable_matrix
    n_obs = O.shape[0]
    rng = np.random.default_rng(seed)
    best = math.inf
    best_vec = None
    if hint_columns:
        for cols in hint_columns:
            vec = np.zeros(model.n_faults, dtype=np.uint8)
            vec[list(cols)] = 1
            det = (D @ vec.astype(np.int64)) % 2
            obs = (O @ vec.astype(np.int64)) % 2
            if not det.any() and obs.any() and vec.sum() < best:
                best, best_vec = int(vec.sum()), vec
    targets = [O.toarray()[i] for i in range(n_obs)]
    for _ in range(max(0, weightings // 2)):
        mask = rng.integers(0, 2, size=n_obs)
        if mask.sum() >= 2:
            targets.append((mask @ O.toarray()) % 2)
    Dd = D.toarray()
    for obs_row in targets:
        aug = np.vstack([Dd, obs_row.reshape(1, -1)])
        syndrome = np.zeros(aug.shape[0], dtype=np.uint8)
        syndrome[-1] = 1
        for _ in range(weightings):
            priors = rng.uniform(0.01, 0.3, size=model.n_faults)
            dec = BpOsd(aug, priors, max_iters=30, osd_order=osd_order)
            res = dec.decode(syndrome)
            w = int(res.correction.sum())
            if 0 < w < best:
                best, best_vec = w, res.correction
    return best if best < math.inf else None, best_vec


def final_round_fault_columns(model: DetectorModel, code: TTCode, basis: str,
                              logical_vector) -> list[int] | None:
    """Model columns realizing a code-distance logical as single-qubit data
    faults early in the final measurement round: such a fault flips only the
    last consecutive-round comparison detectors of its check column (the
    final-boundary comparison cancels against the data readout).  Returns
    None when some signature is absent from the model."""
    if "logical_basis" not in model.meta:
        return None
    H = code.H_X if basis == "X" else code.H_Z
    L = model.meta["logical_basis"]
    F = model.fault_matrix
    Ob = model.observable_matrix
    last_round = model.rounds - 2  # comparison-round index (rounds-1 in build terms)
    sig_to_col = {}
    for j in range(model.n_faults):
        dets = tuple(F.indices[F.indptr[j]: F.indptr[j + 1]])
        obss = tuple(Ob.indices[Ob.indptr[j]: Ob.indptr[j + 1]])
        sig_to_col[(dets, obss)] = j
    det_index = {meta: i for i, meta in enumerate(model.detector_meta)}
    fam_names = ("X",) if basis == "X" else ("Za", "Zb", "Zc")
    g = code.g
    cols = []
    for q in np.flatnonzero(np.asarray(logical_vector).ravel()):
        dets = []
        for cidx in np.flatnonzero(H[:, q]):
            fam, c = (("X", int(cidx)) if basis == "X"
                      else (fam_names[int(cidx) // g], int(cidx) % g))
            dets.append(det_index[(last_round, fam, c)])
        key = (tuple(sorted(dets)), tuple(np.flatnonzero(L[:, int(q)])))
        if key not in sig_to_col:
            return None
        cols.append(sig_to_col[key])
    return cols


# -- random code search ----------------------------------------------------------------


@dataclass
class SearchCandidate:
    polys: tuple[str, str, str]
    n: int
    k: int
    connected: bool
    dz_bound: int | None = None
    dx_bound: int | None = None

    def sort_key(self):
        return (-(self.dz_bound or 0), -(self.k), self.n)


def random_code_search(dims: GroupDims, weight: int = 3, effort: int = 200,
                       seed: int = 0, min_k: int = 1, require_connected: bool = True,
                       distance_budget: tuple[int, int] = (300, 4),
                       exhaustive_limit: int = 4000) -> list[SearchCandidate]:
    """Sample weight-`weight` polynomials with first term 1, deduplicate under
    the code equivalences, filter by k and connectivity, and rank by a
    quick Z-distance search bound.

    Small spaces (at most `exhaustive_limit` raw triples) are enumerated
    exhaustively instead of sampled.
    """
    rng = np.random.default_rng(seed)
    monos = dims.monomials()
    non_identity = [m for m in monos if not m.is_identity()]
    one = Monomial(dims, 0, 0, 0)

    def poly_from(idxs):
        return GroupPolynomial(dims, [one] + [non_identity[i] for i in idxs])

    combos = list(itertools.combinations(range(len(non_identity)), weight - 1))
    seen = set()
    results = []
    space = len(combos) ** 3
    if space <= exhaustive_limit:
        triples = itertools.product(combos, repeat=3)
    else:
        def sampler():
            for _ in range(effort):
                yield tuple(tuple(sorted(rng.choice(len(non_identity), weight - 1,
                                                    replace=False))) for _ in range(3))
        triples = sampler()
    for tri in triples:
        polys = tuple(poly_from(t) for t in tri)
        if any(P.weight != weight for P in polys):
            continue
        key = canonical_form(polys, dims)
        if key in seen:
            continue
        seen.add(key)
        code = build_tt_code(*polys, dims=dims)
        k = compute_k(code)
        if k < min_k:
            continue
        if require_connected and not tanner_connected(code):
            continue
        cand = SearchCandidate(tuple(str(P) for P in polys), code.n, k,
                               tanner_connected(code))
        try:
            trials, probes = distance_budget
            cand.dz_bound = estimate_distance(code, "Z", info_trials=trials,
                                              probe_weightings=probes, seed=seed).weight
        except ValueError:
            pass
        results.append(cand)
    results.sort(key=SearchCandidate.sort_key)
    return results
