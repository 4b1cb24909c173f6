"""Memory-experiment Monte Carlo: phenomenological noise, BP+OSD decoding,
overlapping windows, and the break-even fit."""

from ttcodes.experiments import (ExperimentConfig, fit_ansatz, pseudo_threshold,
                                 run_memory_experiment)

cfg = ExperimentConfig(code="ccz_36_3_3", noise="phenomenological", basis="X",
                       p_grid=(0.004, 0.006, 0.008, 0.010), shots=3000, seed=7)
result = run_memory_experiment(cfg)
print(result.csv())

fit = fit_ansatz([(pt.p, pt.p_L) for pt in result.points], d_eff=3)
print("pseudo-threshold estimate:", pseudo_threshold(fit, mode="phenomenological"))

# single-shot flavoured decoding: slide a 2-round window, committing 1 round
cfg_win = ExperimentConfig(code="ccz_36_3_3", noise="phenomenological", basis="Z",
                           p_grid=(0.04,), shots=2000, window=(2, 1), seed=7)
pt = run_memory_experiment(cfg_win).points[0]
print(f"Z memory with a (2,1) window at p=0.04: LER {pt.P_L:.4f}, per-round {pt.p_L:.5f}")
