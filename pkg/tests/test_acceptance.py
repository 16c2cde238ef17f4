"""Headline acceptance checks, one printed PASS/FAIL line per claim.

Each test exercises a user-visible claim end to end with pinned tolerances
and a runtime budget where one applies.
"""

import itertools
import math
import time
from fractions import Fraction

import numpy as np
import pytest

from sparta import harness
from sparta.objectives import QuadraticObjective, plateau_landscape, standard_start
from sparta.optimizer import (
    GcansState,
    PtrConfig,
    ShotLedger,
    SpartaConfig,
    gcans_step,
    ptr_explore,
)
from sparta.regime import Decision, RegimeTestConfig, RegimeTestState, update
from sparta.sim import build_tfim_chain, ground_energy
from sparta.stats import clopper_pearson_upper, one_sided_ucb


def report(name: str, passed: bool, detail: str) -> None:
    print(f"\nACCEPTANCE {name}: {'PASS' if passed else 'FAIL'} ({detail})")
    assert passed, f"{name}: {detail}"


class TestAcceptance:
    def test_distribution_calibration(self, tmp_path):
        start = time.perf_counter()
        rep = harness.cmd_validate_chisq({"n_samples": 5000}, tmp_path)
        elapsed = time.perf_counter() - start
        p_plateau = rep["plateau"]["ks_p_value"]
        p_info = rep["informative"]["ks_p_value"]
        ok = p_plateau > 0.001 and p_info > 0.001 and elapsed < 60.0
        report(
            "distribution-calibration",
            ok,
            f"plateau p={p_plateau:.4f}, informative p={p_info:.4f}, {elapsed:.1f}s",
        )

    def test_anytime_type_i_control(self):
        start = time.perf_counter()
        rng = np.random.default_rng(0)
        d = 4
        cfg = RegimeTestConfig(alpha=0.05, beta=0.05, calibration="ville", max_rounds=200)
        n_streams = 2000
        false_calls = 0
        for _ in range(n_streams):
            state = RegimeTestState()
            while state.decision is Decision.CONTINUE:
                state = update(state, float(rng.chisquare(d)), d, cfg)
            if state.decision is Decision.INFORMATIVE:
                false_calls += 1
        elapsed = time.perf_counter() - start
        rate = false_calls / n_streams
        limit = 0.05 + 2.0 * math.sqrt(0.05 * 0.95 / n_streams)
        cp_upper = clopper_pearson_upper(false_calls, n_streams, 0.05)
        ok = rate <= limit and elapsed < 30.0
        report(
            "anytime-type-i",
            ok,
            f"rate={rate:.4f} <= {limit:.4f}, CP upper={cp_upper:.4f}, {elapsed:.1f}s",
        )

    def test_ptr_false_acceptance(self):
        # Candidates whose true paired descent sits exactly on the -tau R^2
        # boundary must be accepted at most alpha_acc of the time.
        start = time.perf_counter()
        rng = np.random.default_rng(1)
        ptr = PtrConfig()
        n_candidates = 10_000
        radius = ptr.r0
        threshold = -ptr.tau * radius**2
        noise = 0.05 / math.sqrt(ptr.shots_per_eval)
        accepts = 0
        for _ in range(n_candidates):
            deltas = threshold + rng.normal(0.0, noise * math.sqrt(2), size=ptr.n_pair)
            if one_sided_ucb(deltas, 1.0 - ptr.alpha_acc).upper <= threshold:
                accepts += 1
        elapsed = time.perf_counter() - start
        rate = accepts / n_candidates
        se = math.sqrt(ptr.alpha_acc * (1 - ptr.alpha_acc) / n_candidates)
        limit = ptr.alpha_acc + 3 * se
        ok = rate <= limit and elapsed < 30.0
        report("ptr-false-acceptance", ok,
               f"rate={rate:.4f} <= {limit:.4f}, {elapsed:.1f}s")

    def test_geometric_exit_bound(self):
        land = plateau_landscape(seed=0)
        theta0 = standard_start(land)
        config = SpartaConfig(eta=0.01, budget_total=10**9)
        ptr = config.ptr

        # Measure the descent-direction probability at the scanned radii and
        # take the most favorable one; a full scan can only do better.
        from sparta.objectives import estimate_direction_probability

        p_dir = max(
            estimate_direction_probability(
                land, theta0, ptr.r0 * 2**k, ptr.tau,
                n_directions=2000, rng=np.random.default_rng(k),
            )
            for k in range(ptr.k_max)
        )
        n_scans = 500
        rng = np.random.default_rng(2)
        ledger = ShotLedger(budget=10**9)
        exits = sum(
            ptr_explore(land, theta0, config, rng, ledger).accepted
            for _ in range(n_scans)
        )
        rate = exits / n_scans
        beta = config.test.beta
        bound = (1.0 - beta) * (1.0 - (1.0 - p_dir * (1.0 - ptr.alpha_acc)) ** ptr.m)
        se = math.sqrt(max(bound * (1 - bound), 1e-12) / n_scans)
        ok = rate >= bound - 3 * se
        report(
            "geometric-exit",
            ok,
            f"exit rate={rate:.4f} >= bound {bound:.4f} - 3SE ({3 * se:.4f}), "
            f"p_dir={p_dir:.4f}, n={n_scans}",
        )

    def test_allocation_optimality(self):
        # The proportionality claim holds under the Euclidean budget reading
        # of the Cauchy-Schwarz argument: among integer allocations, the
        # normalized objective sum(B_i w_i) / ||B|| is maximized exactly on
        # the multiples of w = V / sigma^2.
        cases = [
            (np.array([4.0, 1.0]), np.array([1.0, 1.0])),
            (np.array([3.0, 2.0]), np.array([1.0, 2.0])),  # w = (3, 1)
            (np.array([1.0, 2.0, 2.0]), np.array([1.0, 1.0, 1.0])),
        ]
        all_ok = True
        details = []
        for v, sigma_sq in cases:
            w = v / sigma_sq
            ratios = [Fraction(x).limit_denominator(100) for x in w]
            denom = np.lcm.reduce([r.denominator for r in ratios])
            base = np.array([int(r * denom) for r in ratios])
            base //= np.gcd.reduce(base)
            d = w.size
            best_ratio, best_allocs = -np.inf, []
            for combo in itertools.product(range(31), repeat=d):
                b = np.array(combo)
                total = b.sum()
                if total == 0 or total > 30:
                    continue
                ratio = float(b @ w) / float(np.linalg.norm(b))
                if ratio > best_ratio + 1e-12:
                    best_ratio, best_allocs = ratio, [b]
                elif abs(ratio - best_ratio) <= 1e-12:
                    best_allocs.append(b)
            proportional = {
                tuple(base * k) for k in range(1, 31) if (base * k).sum() <= 30
            }
            found = {tuple(b) for b in best_allocs}
            case_ok = found == proportional and best_ratio == pytest.approx(
                float(np.linalg.norm(w))
            )
            all_ok &= case_ok
            details.append(f"w={w.tolist()}: maximizers {sorted(found)}")
        report("allocation-optimality", all_ok, "; ".join(details))

    def test_gcans_linear_convergence(self):
        start = time.perf_counter()
        obj = QuadraticObjective(4, noise_sigma=0.05)
        config = SpartaConfig(eta=0.1, budget_total=10**9)
        rng = np.random.default_rng(3)
        ledger = ShotLedger(budget=config.budget_total)
        theta = np.full(4, 2.0)
        state = GcansState(chi=np.zeros(4), sigma_ema=np.full(4, 0.05))
        gaps = []
        for _ in range(200):
            theta, state = gcans_step(obj, theta, state, config, rng, ledger)
            gaps.append(max(obj.eval_exact(theta), 1e-300))
        slope = float(np.polyfit(np.arange(20, 200), np.log(np.array(gaps)[20:200]), 1)[0])
        elapsed = time.perf_counter() - start
        ok = slope < -0.01 and elapsed < 10.0
        report("gcans-linear-convergence", ok,
               f"log-gap slope={slope:.4f} < -0.01, {elapsed:.1f}s")

    def test_tfim_comparison(self, tmp_path):
        start = time.perf_counter()
        summary = harness.cmd_run_tfim({}, tmp_path)
        elapsed = time.perf_counter() - start
        mean_sparta = summary["sparta"]["mean_final_cost"]
        mean_gcans = summary["gcans"]["mean_final_cost"]
        wins = summary["wins"]["sparta"]
        ok = mean_sparta < mean_gcans and wins >= 6 and elapsed < 600.0
        report(
            "tfim-comparison",
            ok,
            f"mean {mean_sparta:.3f} < {mean_gcans:.3f}, wins {wins}/10, {elapsed:.0f}s",
        )

    def test_synthetic_plateau_escape(self, tmp_path):
        start = time.perf_counter()
        summary = harness.cmd_run_lie({"seeds": harness.PAPER_SEEDS[:5]}, tmp_path)
        elapsed = time.perf_counter() - start
        sparta_hits = sum(1 for c in summary["sparta"]["final_costs"] if c <= -25.0)
        gcans_hits = sum(1 for c in summary["gcans"]["final_costs"] if c >= -5.0)
        ok = sparta_hits >= 3 and gcans_hits >= 3 and elapsed < 600.0
        report(
            "synthetic-plateau",
            ok,
            f"SPARTA <= -25 on {sparta_hits}/5, baseline >= -5 on {gcans_hits}/5, "
            f"{elapsed:.0f}s",
        )

    def test_ground_truth_oracle(self):
        value = ground_energy(build_tfim_chain(2, 1.0, 0.5))
        ok = abs(value - (-math.sqrt(2.0))) <= 1e-8
        report("ground-truth", ok, f"E0={value:.12f} vs -sqrt(2)")

    def test_csv_determinism(self, tmp_path):
        config = {"seeds": [42, 123], "budget": 8000}
        first = tmp_path / "first"
        second = tmp_path / "second"
        harness.cmd_run_tfim(dict(config), first)
        harness.cmd_run_tfim(dict(config), second)
        files = sorted(p.name for p in first.glob("*.csv"))
        identical = all(
            (first / name).read_bytes() == (second / name).read_bytes() for name in files
        )
        ok = identical and len(files) == 4
        report("csv-determinism", ok, f"{len(files)} CSVs byte-identical across reruns")
