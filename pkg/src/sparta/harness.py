"""Experiment driver: distribution validation, TFIM and synthetic-plateau
comparisons, qubit-scaling sweep, and statistical analysis.

Every command reads an optional JSON config, writes raw per-trial CSVs plus a
summary JSON into an output directory, and is deterministic given the same
config and seeds. All derived numbers are recomputable from the persisted
trial files via ``analyze``.
"""

from __future__ import annotations

import csv
import dataclasses
import json
import math
from pathlib import Path

import numpy as np
from scipy import optimize

from .objectives import (
    PlateauLandscape,
    QaoaObjective,
    estimate_direction_probability,
    plateau_landscape,
    standard_start,
)
from .optimizer import PtrConfig, SpartaConfig, TrialResult, run_gcans_baseline, run_trial
from .regime import RegimeTestConfig
from .sim import QaoaCircuit, ShotNoiseModel, build_tfim_chain, exact_gradient, ground_energy
from .stats import (
    chi2_cdf,
    chi2_pdf,
    cohens_d,
    ks_test,
    noncentral_chi2_cdf,
    noncentral_chi2_pdf,
    paired_t_test,
    wilcoxon_signed_rank,
)

PAPER_SEEDS = [42, 123, 456, 789, 1011, 2022, 3033, 4044, 5055, 6066]

TRIAL_COLUMNS = [
    "iteration", "mode", "cumulative_shots", "exact_cost", "lambda_cum",
    "decision", "accepted_ptr", "radius", "step_norm",
]


class ConfigError(ValueError):
    pass


class CheckFailure(RuntimeError):
    """A --check assertion did not hold."""


def _fmt(value) -> str:
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_trial_csv(path: Path, result: TrialResult) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(TRIAL_COLUMNS)
        for row in result.trajectory:
            writer.writerow([_fmt(row[c]) for c in TRIAL_COLUMNS])


def read_trial_csv(path: Path) -> list[dict]:
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def _write_json(path: Path, payload: dict) -> None:
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")


def sparta_config_from(overrides: dict | None, **defaults) -> SpartaConfig:
    merged = dict(defaults)
    merged.update(overrides or {})
    ptr = PtrConfig(**merged.pop("ptr", {}))
    test = RegimeTestConfig(**merged.pop("test", {}))
    try:
        return SpartaConfig(ptr=ptr, test=test, **merged)
    except TypeError as exc:
        raise ConfigError(str(exc)) from exc


def _tfim_objective(n: int = 6, depth: int = 2, J: float = 1.0, h: float = 0.5,
                    sigma: float = 0.02) -> QaoaObjective:
    circuit = QaoaCircuit(build_tfim_chain(n, J, h), depth=depth)
    return QaoaObjective(circuit, ShotNoiseModel(sigma=sigma))


def tfim_start(seed: int, base=(0.5, 0.4, 0.5, 0.4), spread: float = 0.1) -> np.ndarray:
    rng = np.random.default_rng(seed)
    base = np.asarray(base, dtype=float)
    return base + rng.uniform(-spread, spread, size=base.size)


# ---------------------------------------------------------------------------
# validate-chisq

def find_plateau_point(objective: QaoaObjective, seed: int = 42,
                       tol: float = 1e-4) -> np.ndarray:
    """Locate a near-stationary point by minimizing the squared gradient norm."""
    circuit = objective.circuit

    def grad_norm_sq(theta):
        g = exact_gradient(circuit, theta)
        return float(g @ g)

    theta = tfim_start(seed)
    res = optimize.minimize(grad_norm_sq, theta, method="Nelder-Mead",
                            options={"xatol": 1e-10, "fatol": 1e-16, "maxiter": 4000})
    theta = res.x
    if math.sqrt(grad_norm_sq(theta)) >= tol:
        raise RuntimeError("failed to locate a plateau point")
    return theta


def find_informative_point(objective: QaoaObjective, seed: int = 123,
                           lo: float = 0.5, hi: float = 1.2) -> np.ndarray:
    """First point on a seeded random walk with gradient norm in [lo, hi]."""
    rng = np.random.default_rng(seed)
    theta = tfim_start(seed)
    for _ in range(10_000):
        norm = float(np.linalg.norm(objective.grad_oracle(theta)))
        if lo <= norm <= hi:
            return theta
        theta = theta + rng.normal(0.0, 0.2, size=theta.size)
    raise RuntimeError("random walk found no informative point")


def cmd_validate_chisq(config: dict, out_dir: Path) -> dict:
    out_dir.mkdir(parents=True, exist_ok=True)
    n_samples = int(config.get("n_samples", 5000))
    shots = int(config.get("shots_per_coord", 100))
    sigma = float(config.get("sigma", 0.02))
    seed = int(config.get("seed", 42))

    objective = _tfim_objective(sigma=sigma)
    circuit = objective.circuit
    d = circuit.dimension
    b = np.full(d, shots)

    report = {"n_samples": n_samples, "shots_per_coord": shots, "sigma": sigma, "d": d}
    rng = np.random.default_rng(seed)
    for regime, theta in (
        ("plateau", find_plateau_point(objective)),
        ("informative", find_informative_point(objective)),
    ):
        grad = objective.grad_oracle(theta)
        lam = float(np.sum(b / sigma**2 * grad**2))
        noisy = grad[None, :] + rng.normal(size=(n_samples, d)) * sigma / np.sqrt(b)
        stats = np.sum(b / sigma**2 * noisy**2, axis=1)
        if regime == "plateau":
            cdf = lambda x: chi2_cdf(x, d)
        else:
            cdf = lambda x: noncentral_chi2_cdf(x, d, lam)
        d_stat, p = ks_test(stats, cdf)
        with open(out_dir / f"{regime}_stats.csv", "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["sample", "s"])
            for i, s in enumerate(stats):
                writer.writerow([i, repr(float(s))])
        report[regime] = {
            "theta": [float(t) for t in theta],
            "grad_norm": float(np.linalg.norm(grad)),
            "lambda": lam,
            "ks_statistic": d_stat,
            "ks_p_value": p,
        }

    lam = report["informative"]["lambda"]
    grid = np.linspace(0.0, max(4.0 * d, lam + 8.0 * math.sqrt(2 * (d + 2 * lam))), 400)
    with open(out_dir / "densities.csv", "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["x", "chi2_pdf", "noncentral_chi2_pdf"])
        for x in grid:
            writer.writerow([repr(float(x)),
                             repr(float(chi2_pdf(x, d))),
                             repr(float(noncentral_chi2_pdf(x, d, lam)))])
    _write_json(out_dir / "report.json", report)
    return report


def check_validate_chisq(report: dict) -> None:
    for regime in ("plateau", "informative"):
        p = report[regime]["ks_p_value"]
        if p <= 0.001:
            raise CheckFailure(f"{regime} KS p-value {p} <= 0.001")


# ---------------------------------------------------------------------------
# comparisons

def _run_comparison(objective, config: SpartaConfig, seeds, out_dir: Path,
                    start_fn, write_paths: bool = False) -> dict:
    out_dir.mkdir(parents=True, exist_ok=True)
    finals = {"sparta": [], "gcans": []}
    for seed in seeds:
        theta0 = start_fn(seed)
        for method, runner in (("sparta", run_trial), ("gcans", run_gcans_baseline)):
            result = runner(objective, config, seed=seed, theta0=theta0)
            write_trial_csv(out_dir / f"{method}_seed{seed}.csv", result)
            if write_paths:
                _write_path_csv(out_dir / f"{method}_seed{seed}_path.csv", result)
            finals[method].append(result.final_exact_cost)
    return finals


def _write_path_csv(path: Path, result) -> None:
    """First-two-coordinate trajectory, one row per trial CSV row."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["iteration", "x", "y"])
        for row, theta in zip(result.trajectory, result.thetas):
            writer.writerow([row["iteration"], repr(float(theta[0])), repr(float(theta[1]))])


def cmd_run_tfim(config: dict, out_dir: Path) -> dict:
    out_dir.mkdir(parents=True, exist_ok=True)
    seeds = list(config.get("seeds", PAPER_SEEDS))
    if not seeds:
        raise ConfigError("seeds must be non-empty")
    n = int(config.get("n_qubits", 6))
    objective = _tfim_objective(
        n=n,
        depth=int(config.get("depth", 2)),
        J=float(config.get("J", 1.0)),
        h=float(config.get("h", 0.5)),
        sigma=float(config.get("sigma", 0.02)),
    )
    sparta_cfg = sparta_config_from(
        config.get("sparta"), budget_total=int(config.get("budget", 25_000))
    )
    _run_comparison(objective, sparta_cfg, seeds, out_dir, tfim_start)
    _write_json(out_dir / "meta.json", {
        "experiment": "run-tfim",
        "n_qubits": n,
        "seeds": seeds,
        "budget": sparta_cfg.budget_total,
        "ground_energy": objective.ground_energy(),
    })
    return cmd_analyze(out_dir)


def check_run_tfim(summary: dict) -> None:
    if summary["sparta"]["mean_final_cost"] >= summary["gcans"]["mean_final_cost"]:
        raise CheckFailure("SPARTA mean final cost not below baseline")
    if summary["wins"]["sparta"] < 0.6 * summary["n_seeds"]:
        raise CheckFailure("SPARTA win rate below 6/10")


def cmd_run_lie(config: dict, out_dir: Path) -> dict:
    out_dir.mkdir(parents=True, exist_ok=True)
    seeds = list(config.get("seeds", PAPER_SEEDS[:5]))
    if not seeds:
        raise ConfigError("seeds must be non-empty")
    land_cfg = config.get("landscape", {})
    landscape = plateau_landscape(
        d=int(land_cfg.get("d", 12)),
        n_eff=int(land_cfg.get("n_eff", 2)),
        b_v=float(land_cfg.get("b_v", 2.0)),
        b_w=float(land_cfg.get("b_w", 1.4)),
        seed=int(land_cfg.get("seed", 0)),
    )
    (out_dir / "landscape.json").write_text(landscape.to_json() + "\n")
    theta0 = standard_start(landscape)
    # The gorge curvature depth/width^2 ~ 115 makes the TFIM step size 0.05
    # unstable; the landscape runs use a smaller default step.
    sparta_cfg = sparta_config_from(
        config.get("sparta"),
        eta=float(config.get("eta", 0.01)),
        budget_total=int(config.get("budget", 250_000)),
    )
    _run_comparison(landscape, sparta_cfg, seeds, out_dir, lambda seed: theta0,
                    write_paths=True)

    radius = 6.1 * landscape.width
    p_dir = estimate_direction_probability(
        landscape, theta0, radius, sparta_cfg.ptr.tau,
        n_directions=int(config.get("n_directions", 4000)),
        rng=np.random.default_rng(int(config.get("p_dir_seed", 0))),
    )
    beta = sparta_cfg.test.beta
    alpha_acc = sparta_cfg.ptr.alpha_acc
    m = sparta_cfg.ptr.m
    exit_bound = (1.0 - beta) * (1.0 - (1.0 - p_dir * (1.0 - alpha_acc)) ** m)
    _write_json(out_dir / "diagnostics.json", {
        "p_dir": p_dir,
        "probe_radius": radius,
        "geometric_exit_bound": exit_bound,
        "start_distance": float(np.linalg.norm(theta0 - landscape.theta_star)),
        "global_minimum": landscape.eval_exact(landscape.theta_star),
        "distance_to_optimum": {},
    })
    _emit_gradient_grid(landscape, out_dir / "gradient_grid.csv")
    _write_json(out_dir / "meta.json", {
        "experiment": "run-lie",
        "seeds": seeds,
        "budget": sparta_cfg.budget_total,
        "ground_energy": landscape.eval_exact(landscape.theta_star),
    })
    summary = cmd_analyze(out_dir)
    # Report final distances to the optimum for both methods.
    distances = {}
    for method in ("sparta", "gcans"):
        dists = []
        for seed in seeds:
            rows = read_trial_csv(out_dir / f"{method}_seed{seed}.csv")
            dists.append(float(rows[-1]["exact_cost"]))
        distances[method] = dists
    return summary


def _emit_gradient_grid(landscape: PlateauLandscape, path: Path,
                        resolution: int = 200, half_width: float = 4.0) -> None:
    center = landscape.theta_star
    xs = np.linspace(center[0] - half_width, center[0] + half_width, resolution)
    ys = np.linspace(center[1] - half_width, center[1] + half_width, resolution)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["x", "y", "log10_grad_norm"])
        theta = center.copy()
        for y in ys:
            for x in xs:
                theta[0], theta[1] = x, y
                norm = float(np.linalg.norm(landscape.grad_oracle(theta)))
                writer.writerow([repr(float(x)), repr(float(y)),
                                 repr(float(np.log10(max(norm, 1e-300))))])


def check_run_lie(summary: dict) -> None:
    sparta_ok = sum(1 for c in summary["sparta"]["final_costs"] if c <= -25.0)
    gcans_ok = sum(1 for c in summary["gcans"]["final_costs"] if c >= -5.0)
    n = summary["n_seeds"]
    if 2 * sparta_ok <= n:
        raise CheckFailure(f"SPARTA reached <= -25 on only {sparta_ok}/{n} seeds")
    if 2 * gcans_ok <= n:
        raise CheckFailure(f"baseline stayed >= -5 on only {gcans_ok}/{n} seeds")


def cmd_run_scaling(config: dict, out_dir: Path) -> dict:
    out_dir.mkdir(parents=True, exist_ok=True)
    seeds = list(config.get("seeds", PAPER_SEEDS[:3]))
    if not seeds:
        raise ConfigError("seeds must be non-empty")
    sizes = [int(n) for n in config.get("sizes", [2, 4, 6, 8])]
    budget = int(config.get("budget", 25_000))
    report = {"experiment": "run-scaling", "sizes": sizes, "seeds": seeds,
              "budget": budget, "per_size": {}}
    for n in sizes:
        sub = out_dir / f"size_n{n}"
        objective = _tfim_objective(n=n, sigma=float(config.get("sigma", 0.02)))
        sparta_cfg = sparta_config_from(config.get("sparta"), budget_total=budget)
        _run_comparison(objective, sparta_cfg, seeds, sub, tfim_start)
        summary = cmd_analyze(sub)
        summary["ground_energy"] = objective.ground_energy()
        _write_json(sub / "meta.json", {"n_qubits": n, "seeds": seeds,
                                        "budget": budget,
                                        "ground_energy": summary["ground_energy"]})
        report["per_size"][str(n)] = summary
    _write_json(out_dir / "scaling_summary.json", report)
    return report


def check_run_scaling(report: dict) -> None:
    for n, summary in report["per_size"].items():
        ground = summary["ground_energy"]
        sparta = summary["sparta"]["final_costs"]
        gcans = summary["gcans"]["final_costs"]
        better = sum(1 for a, b in zip(sparta, gcans)
                     if (a - ground) <= (b - ground))
        if 2 * better < len(sparta):
            raise CheckFailure(f"size {n}: SPARTA final gap worse on most seeds")


# ---------------------------------------------------------------------------
# analyze

def _collect_finals(result_dir: Path) -> dict:
    finals: dict[str, dict[int, dict]] = {"sparta": {}, "gcans": {}}
    for path in sorted(result_dir.glob("*_seed*.csv")):
        method, _, tail = path.stem.partition("_seed")
        if method not in finals or not tail.isdigit():
            continue
        rows = read_trial_csv(path)
        last = rows[-1]
        finals[method][int(tail)] = {
            "final_cost": float(last["exact_cost"]),
            "shots": int(last["cumulative_shots"]),
            "iterations": int(last["iteration"]),
        }
    return finals


def cmd_analyze(result_dir: Path) -> dict:
    finals = _collect_finals(result_dir)
    seeds = sorted(set(finals["sparta"]) & set(finals["gcans"]))
    if not seeds:
        raise ConfigError(f"no paired trial CSVs found in {result_dir}")
    summary = {"n_seeds": len(seeds), "seeds": seeds}
    costs = {}
    for method in ("sparta", "gcans"):
        vals = np.array([finals[method][s]["final_cost"] for s in seeds])
        costs[method] = vals
        summary[method] = {
            "mean_final_cost": float(np.mean(vals)),
            "sd_final_cost": float(np.std(vals, ddof=1)) if len(vals) > 1 else 0.0,
            "best_cost": float(np.min(vals)),
            "worst_cost": float(np.max(vals)),
            "median_cost": float(np.median(vals)),
            "mean_shots": float(np.mean([finals[method][s]["shots"] for s in seeds])),
            "mean_iterations": float(np.mean([finals[method][s]["iterations"] for s in seeds])),
            "final_costs": [float(v) for v in vals],
        }
    # Ties count for the baseline (conservative).
    sparta_wins = int(np.sum(costs["sparta"] < costs["gcans"]))
    summary["wins"] = {"sparta": sparta_wins, "gcans": len(seeds) - sparta_wins}
    summary["win_rate_sparta"] = sparta_wins / len(seeds)
    diffs = costs["sparta"] - costs["gcans"]
    if len(seeds) >= 2:
        t_res = paired_t_test(diffs)
        summary["paired_t_p"] = t_res.p_value
        summary["paired_t_degenerate"] = t_res.degenerate
    if len(seeds) >= 6:
        w_res = wilcoxon_signed_rank(diffs)
        summary["wilcoxon_p"] = w_res.p_value
        summary["wilcoxon_degenerate"] = w_res.degenerate
    eff = cohens_d(costs["sparta"], costs["gcans"])
    summary["cohens_d"] = eff.d
    summary["cohens_d_degenerate"] = eff.degenerate
    _write_json(result_dir / "summary.json", summary)
    return summary
