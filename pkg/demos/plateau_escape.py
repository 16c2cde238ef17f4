"""Escape from a synthetic barren plateau that traps pure gradient descent.

The landscape hides a deep narrow gorge inside a flat rippled plateau whose
gradients sit below the shot-noise floor. The scheduler detects the plateau,
switches to trust-region exploration, finds the gorge, and then exploits it;
the gradient-only baseline never leaves the plateau. Run:

    python demos/plateau_escape.py
"""

import numpy as np

from sparta.objectives import plateau_landscape, standard_start
from sparta.optimizer import SpartaConfig, run_gcans_baseline, run_trial


def main() -> None:
    land = plateau_landscape(seed=0)
    theta0 = standard_start(land)
    config = SpartaConfig(eta=0.01, budget_total=250_000)
    minimum = land.eval_exact(land.theta_star)
    print(f"12-D landscape, global minimum {minimum:.2f}, "
          f"start cost {land.eval_exact(theta0):.2f}, "
          f"start distance {np.linalg.norm(theta0 - land.theta_star):.2f}\n")

    for label, runner in (("sparta", run_trial), ("gcans", run_gcans_baseline)):
        result = runner(land, config, seed=42, theta0=theta0)
        dist = np.linalg.norm(result.final_theta - land.theta_star)
        print(f"{label:7s} final cost {result.final_exact_cost:8.2f}  "
              f"distance to optimum {dist:.2f}  "
              f"shots {result.spent}  breakdown {result.breakdown}")


if __name__ == "__main__":
    main()
