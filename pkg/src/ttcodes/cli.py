"""Command-line interface over the library.

Subcommands: build, params, distance, logicals, automorphism, cz, ccz,
circuit, simulate, fit, search.  Codes are referenced by catalog name or a
JSON definition file {"dims": [l,m,p], "A": [[i,j,k], ...], "B": ..., "C": ...}.
TTCODES_THREADS caps the numba thread pool.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import catalog
from .code import (build_tt_code, code_from_dict, code_to_dict, compute_k,
                   has_toric_layout, load_code, save_code, tanner_connected)
from .groupalg import GroupDims, GroupPolynomial, Monomial


def _apply_thread_env():
    threads = os.environ.get("TTCODES_THREADS")
    if threads:
        try:
            import numba
            numba.set_num_threads(max(1, int(threads)))
        except Exception:
            pass


def _resolve_code(args):
    if args.code and args.code in catalog.names():
        return catalog.get(args.code)
    if args.code and os.path.exists(args.code):
        return load_code(args.code)
    if getattr(args, "file", None):
        return load_code(args.file)
    raise SystemExit(f"unknown code {args.code!r}: pass a catalog name or JSON file")


def _parse_monomial(code, text):
    i, j, k = (int(v) for v in text.split(","))
    return Monomial(code.dims, i, j, k)


def cmd_build(args):
    dims = GroupDims(*(int(v) for v in args.dims.split(",")))
    polys = [GroupPolynomial.from_string(dims, s) for s in (args.A, args.B, args.C)]
    code = build_tt_code(*polys, dims=dims)
    out = code_to_dict(code)
    out["n"], out["k"] = code.n, compute_k(code)
    if args.out:
        save_code(code, args.out)
    json.dump(out, sys.stdout, indent=1)
    print()


def cmd_params(args):
    from .distance import estimate_distance

    code = _resolve_code(args)
    k = compute_k(code)
    print(f"code: {code}")
    print(f"n = {code.n}")
    print(f"k = {k}")
    if k > 0 and not args.skip_distance:
        for basis in ("Z", "X", "M"):
            b = estimate_distance(code, basis, info_trials=args.info_trials,
                                  probe_weightings=args.probes, seed=args.seed)
            print(f"d_{basis} <= {b.weight}   (search, trials={args.info_trials}, "
                  f"probes={args.probes}, seed={args.seed})")
    print(f"connected Tanner graph: {tanner_connected(code)}")
    print(f"3D toric layout: {has_toric_layout(code)}")


def cmd_distance(args):
    from .distance import certify_distance_exhaustive, estimate_distance

    code = _resolve_code(args)
    if args.certify is not None:
        b = certify_distance_exhaustive(code, args.basis, args.certify,
                                        budget=args.budget)
        print(b)
    else:
        b = estimate_distance(code, args.basis, info_trials=args.info_trials,
                              probe_weightings=args.probes, seed=args.seed)
        print(b)


def cmd_logicals(args):
    from .logicals import search_logical_sets

    code = _resolve_code(args)
    results = search_logical_sets(code, pairwise_sums=not args.no_pairs)
    best_by_variant = {}
    for ls in results:
        best_by_variant.setdefault(ls.variant, ls)
    k = compute_k(code)
    for variant in ("bar", "tilde", "hat"):
        ls = best_by_variant.get(variant)
        if ls is None:
            print(f"{variant}: no applicable sets")
            continue
        print(f"{variant}: covers {ls.covered_logicals} of {2*k} logical Paulis "
              f"(X {ls.coverage_x}, Z {ls.coverage_z}; conjugate pairs/set {ls.pairs_per_set})")
    best = results[0]
    print(f"best: variant={best.variant} f={best.f} ghj=({best.ghj[0]}; {best.ghj[1]}; "
          f"{best.ghj[2]}) covered={best.covered_logicals}")


def cmd_automorphism(args):
    from .logicals import shift_automorphism

    code = _resolve_code(args)
    beta = _parse_monomial(code, args.beta)
    perm = shift_automorphism(code, beta)
    print(f"shift automorphism by {beta}: verified (checks permute within families)")
    if perm.swap_layers:
        print(f"depth-2 SWAP realization: {len(perm.swap_layers[0])} + "
              f"{len(perm.swap_layers[1])} swaps over existing connections")
    else:
        print("no single-step SWAP realization (compose generator-form shifts)")


def cmd_cz(args):
    from .logicals import transversal_cz

    code = _resolve_code(args)
    beta = _parse_monomial(code, args.beta)
    circuit, action = transversal_cz(code, args.pair, beta)
    out = {
        "pair": args.pair,
        "beta": [beta.i, beta.j, beta.k],
        "gates": [[int(a), int(b)] for a, b in circuit.gates],
        "logical_action": action.astype(int).tolist(),
    }
    json.dump(out, open(args.out, "w") if args.out else sys.stdout, indent=1)
    print()


def cmd_ccz(args):
    from .nonclifford import (build_ccz_circuit, catalog_ccz_report,
                              catalog_orientations, check_cup_conditions,
                              check_leibniz_direct)

    if args.check:
        code, pos = catalog_orientations(args.code)
        for P, po in zip("ABC", pos):
            print(f"{P}: in={{{', '.join(map(str, sorted(po.in_terms)))}}} "
                  f"out={{{', '.join(map(str, sorted(po.out_terms)))}}} "
                  f"free={{{', '.join(map(str, sorted(po.free_terms)))}}} "
                  f"conditions={'pass' if check_cup_conditions(po) else 'FAIL'} "
                  f"leibniz={'pass' if check_leibniz_direct(po) else 'FAIL'}")
        return
    code, circuit, report = catalog_ccz_report(args.code)
    if args.emit:
        gates = []
        for q1, q2, q3 in circuit.gates:
            gates.append({"b1": _qubit_json(code, q1), "b2": _qubit_json(code, q2),
                          "b3": _qubit_json(code, q3)})
        json.dump(gates, open(args.emit, "w"), indent=0)
        print(f"wrote {len(gates)} gates to {args.emit}")
    if args.count or not args.emit:
        out = {
            "code": args.code,
            "gates": circuit.gate_count(),
            "z_logical_weights": report.z_weights,
            "logical_ccz_count": report.count,
            "triples": [list(t) for t in report.triples],
            "basis_seed": report.seed,
        }
        json.dump(out, sys.stdout, indent=1)
        print()


def _qubit_json(code, q):
    block, mono = code.qubit_label(q)
    return [block, mono.i, mono.j, mono.k]


def cmd_circuit(args):
    from .circuits import (build_syndrome_circuit, circuit_depth_and_collisions,
                           serialize_circuit, verify_logical_preservation,
                           verify_tableau)

    code = _resolve_code(args)
    circuit = build_syndrome_circuit(code, args.parity)
    if args.action == "emit":
        text = serialize_circuit(circuit)
        if args.out:
            open(args.out, "w").write(text)
            print(f"wrote {len(text.splitlines())} lines to {args.out}")
        else:
            sys.stdout.write(text)
    else:
        depth, collisions = circuit_depth_and_collisions(circuit)
        print(f"depth: {depth}")
        print(f"collisions: {len(collisions)}")
        print(f"tableau verification: {'pass' if verify_tableau(code, circuit) else 'FAIL'}")
        print(f"logical preservation: "
              f"{'pass' if verify_logical_preservation(code, circuit) else 'FAIL'}")


def cmd_simulate(args):
    from .experiments import ExperimentConfig, run_memory_experiment

    cfg_dict = {}
    if args.config:
        cfg_dict = json.load(open(args.config))
    overrides = {
        "code": args.code, "noise": args.noise, "basis": args.basis,
        "shots": args.shots, "seed": args.seed, "rounds": args.rounds,
    }
    for key, val in overrides.items():
        if val is not None:
            cfg_dict[key] = val
    if args.p:
        cfg_dict["p_grid"] = [float(v) for v in args.p.split(",")]
    if args.window:
        cfg_dict["window"] = tuple(int(v) for v in args.window.split(","))
    cfg_dict["p_grid"] = tuple(cfg_dict.get("p_grid", (1e-2,)))
    if cfg_dict.get("window"):
        cfg_dict["window"] = tuple(cfg_dict["window"])
    cfg = ExperimentConfig(**cfg_dict)
    result = run_memory_experiment(cfg)
    csv_text = result.csv()
    if args.out:
        open(args.out, "w").write(csv_text)
        json.dump(cfg.to_dict(), open(args.out + ".json", "w"), indent=1)
        print(f"wrote {args.out} (+ config sidecar)")
    else:
        sys.stdout.write(csv_text)


def cmd_fit(args):
    import csv as csvmod

    from .experiments import FitParams, fit_ansatz, pseudo_threshold

    rows = list(csvmod.DictReader(open(args.csv)))
    pts = [(float(r["p"]), float(r["p_L"])) for r in rows]
    fit = fit_ansatz(pts, d_eff=args.d_eff)
    out = {"c0": fit.c0, "c1": fit.c1, "c2": fit.c2, "d_eff": fit.d_eff}
    try:
        out["pseudo_threshold"] = pseudo_threshold(fit, k=args.k, mode=args.mode)
    except ValueError as exc:
        out["pseudo_threshold_error"] = str(exc)
    json.dump(out, sys.stdout, indent=1)
    print()


def cmd_search(args):
    from .experiments import random_code_search

    dims = GroupDims(*(int(v) for v in args.dims.split(",")))
    cands = random_code_search(dims, weight=args.weight, effort=args.effort,
                               seed=args.seed)
    for c in cands[: args.top]:
        print(f"[[{c.n},{c.k},<={c.dz_bound}]] A={c.polys[0]} B={c.polys[1]} C={c.polys[2]}")
    if args.out_dir:
        os.makedirs(args.out_dir, exist_ok=True)
        for i, c in enumerate(cands[: args.top]):
            dims_list = [dims.ell, dims.m, dims.p]
            polys = [GroupPolynomial.from_string(dims, s) for s in c.polys]
            data = {"dims": dims_list,
                    **{k: p.exponent_triples() for k, p in zip("ABC", polys)}}
            json.dump(data, open(os.path.join(args.out_dir, f"code_{i:03d}.json"), "w"))
        print(f"wrote {min(args.top, len(cands))} definitions to {args.out_dir}")


def main(argv=None):
    _apply_thread_env()
    ap = argparse.ArgumentParser(prog="ttcodes",
                                 description="trivariate tricycle code toolkit")
    sub = ap.add_subparsers(dest="cmd", required=True)

    b = sub.add_parser("build", help="build a code from polynomials")
    b.add_argument("--dims", required=True, help="l,m,p")
    b.add_argument("--A", required=True)
    b.add_argument("--B", required=True)
    b.add_argument("--C", required=True)
    b.add_argument("--out")
    b.set_defaults(fn=cmd_build)

    p = sub.add_parser("params", help="n, k, distance bounds, layout flags")
    p.add_argument("code")
    p.add_argument("--skip-distance", action="store_true")
    p.add_argument("--info-trials", type=int, default=2000)
    p.add_argument("--probes", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(fn=cmd_params)

    d = sub.add_parser("distance", help="distance search or certification")
    d.add_argument("code")
    d.add_argument("--basis", choices=("Z", "X", "M"), default="Z")
    d.add_argument("--certify", type=int, default=None, metavar="W_MAX")
    d.add_argument("--budget", type=int, default=10_000_000)
    d.add_argument("--info-trials", type=int, default=10_000)
    d.add_argument("--probes", type=int, default=20)
    d.add_argument("--seed", type=int, default=0)
    d.set_defaults(fn=cmd_distance)

    lg = sub.add_parser("logicals", help="logical-set coverage per variant")
    lg.add_argument("code")
    lg.add_argument("--no-pairs", action="store_true")
    lg.set_defaults(fn=cmd_logicals)

    au = sub.add_parser("automorphism", help="shift automorphism by beta")
    au.add_argument("code")
    au.add_argument("--beta", required=True, help="i,j,k")
    au.set_defaults(fn=cmd_automorphism)

    cz = sub.add_parser("cz", help="transversal CZ gate list and logical action")
    cz.add_argument("code")
    cz.add_argument("--pair", choices=("CR", "LR", "LC"), required=True)
    cz.add_argument("--beta", required=True, help="i,j,k")
    cz.add_argument("--out")
    cz.set_defaults(fn=cmd_cz)

    cc = sub.add_parser("ccz", help="cup-product CCZ pipeline")
    cc.add_argument("code")
    cc.add_argument("--check", action="store_true")
    cc.add_argument("--emit", metavar="OUT_JSON")
    cc.add_argument("--count", action="store_true")
    cc.set_defaults(fn=cmd_ccz)

    ci = sub.add_parser("circuit", help="syndrome circuit emit/verify")
    ci.add_argument("action", choices=("emit", "verify"))
    ci.add_argument("code")
    ci.add_argument("--parity", choices=("even", "odd"), default="even")
    ci.add_argument("--out")
    ci.set_defaults(fn=cmd_circuit)

    si = sub.add_parser("simulate", help="memory-experiment Monte Carlo")
    si.add_argument("--config", help="JSON config file")
    si.add_argument("--code")
    si.add_argument("--noise", choices=("phenomenological", "circuit"))
    si.add_argument("--basis", choices=("X", "Z"))
    si.add_argument("--p", help="comma-separated grid")
    si.add_argument("--rounds", type=int)
    si.add_argument("--shots", type=int)
    si.add_argument("--window", help="w,c")
    si.add_argument("--seed", type=int)
    si.add_argument("--out")
    si.set_defaults(fn=cmd_simulate)

    ft = sub.add_parser("fit", help="ansatz fit + break-even root")
    ft.add_argument("csv")
    ft.add_argument("--d-eff", type=int, required=True)
    ft.add_argument("--k", type=int, default=1)
    ft.add_argument("--mode", choices=("phenomenological", "circuit"),
                    default="phenomenological")
    ft.set_defaults(fn=cmd_fit)

    se = sub.add_parser("search", help="random code search")
    se.add_argument("--dims", required=True, help="l,m,p")
    se.add_argument("--weight", type=int, default=3)
    se.add_argument("--effort", type=int, default=200)
    se.add_argument("--seed", type=int, default=0)
    se.add_argument("--top", type=int, default=10)
    se.add_argument("--out-dir")
    se.set_defaults(fn=cmd_search)

    args = ap.parse_args(argv)
    args.fn(args)


if __name__ == "__main__":
    main()
