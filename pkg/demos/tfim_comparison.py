"""Head-to-head TFIM comparison: regime-switching scheduler vs pure gCANS.

Both methods get the same 25,000-shot budget and the same per-seed start on
the n=6 transverse-field Ising chain. Run:

    python demos/tfim_comparison.py
"""

import numpy as np

from sparta.harness import PAPER_SEEDS, _tfim_objective, tfim_start
from sparta.optimizer import SpartaConfig, run_gcans_baseline, run_trial


def main() -> None:
    objective = _tfim_objective()
    config = SpartaConfig(budget_total=25_000)
    ground = objective.ground_energy()
    print(f"n=6 TFIM, ground energy {ground:.4f}, budget {config.budget_total} shots\n")
    print(f"{'seed':>6s} {'sparta':>9s} {'gcans':>9s}  winner")

    finals = {"sparta": [], "gcans": []}
    for seed in PAPER_SEEDS:
        theta0 = tfim_start(seed)
        sparta = run_trial(objective, config, seed=seed, theta0=theta0)
        gcans = run_gcans_baseline(objective, config, seed=seed, theta0=theta0)
        finals["sparta"].append(sparta.final_exact_cost)
        finals["gcans"].append(gcans.final_exact_cost)
        winner = "sparta" if sparta.final_exact_cost < gcans.final_exact_cost else "gcans"
        print(f"{seed:6d} {sparta.final_exact_cost:9.3f} "
              f"{gcans.final_exact_cost:9.3f}  {winner}")

    for method in ("sparta", "gcans"):
        vals = np.array(finals[method])
        print(f"\n{method}: mean {np.mean(vals):.3f} +- {np.std(vals, ddof=1):.3f}, "
              f"best {np.min(vals):.3f}")


if __name__ == "__main__":
    main()
