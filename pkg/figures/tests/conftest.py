"""Golden result-directory fixtures matching the harness file schema.

Built from fixed synthetic numbers with no dependency on the primary package,
so this suite exercises only the documented CSV/JSON interfaces.
"""

import json
import math

import pytest

TRIAL_HEADER = ("iteration,mode,cumulative_shots,exact_cost,lambda_cum,"
                "decision,accepted_ptr,radius,step_norm")


def write_trial(path, costs, start_shots=1000, step=500):
    lines = [TRIAL_HEADER]
    for i, cost in enumerate(costs):
        lines.append(
            f"{i},exploit,{start_shots + i * step},{cost},0.0,informative,,,0.1"
        )
    path.write_text("\n".join(lines) + "\n")


def write_comparison(out, n_seeds=2, ground=-5.0):
    for seed in range(1, n_seeds + 1):
        write_trial(out / f"sparta_seed{seed}.csv",
                    [-1.0 - 0.5 * i - 0.1 * seed for i in range(10)])
        write_trial(out / f"gcans_seed{seed}.csv",
                    [-1.0 - 0.2 * i - 0.1 * seed for i in range(10)])
    (out / "meta.json").write_text(json.dumps({"ground_energy": ground}))


@pytest.fixture
def chisq_dir(tmp_path):
    out = tmp_path / "chisq"
    out.mkdir()
    for name, center in (("plateau_stats.csv", 4.0), ("informative_stats.csv", 30.0)):
        rows = ["sample,s"]
        for i in range(64):
            rows.append(f"{i},{center + 3.0 * math.sin(1.7 * i)}")
        (out / name).write_text("\n".join(rows) + "\n")
    rows = ["x,chi2_pdf,noncentral_chi2_pdf"]
    for i in range(80):
        x = 0.5 * i
        rows.append(f"{x},{math.exp(-x / 2) * x / 4},{math.exp(-((x - 30) / 8) ** 2) / 10}")
    (out / "densities.csv").write_text("\n".join(rows) + "\n")
    return out


@pytest.fixture
def tfim_dir(tmp_path):
    out = tmp_path / "tfim"
    out.mkdir()
    write_comparison(out, n_seeds=3, ground=-5.52)
    return out


@pytest.fixture
def lie_dir(tmp_path):
    out = tmp_path / "lie"
    out.mkdir()
    write_comparison(out, n_seeds=2, ground=-30.0)
    (out / "diagnostics.json").write_text(json.dumps({"global_minimum": -30.0}))
    (out / "landscape.json").write_text(json.dumps({"theta_star": [1.0, -0.5]}))
    rows = ["x,y,log10_grad_norm"]
    n = 20
    for j in range(n):
        for i in range(n):
            x = -3.0 + 6.0 * i / (n - 1)
            y = -3.0 + 6.0 * j / (n - 1)
            rows.append(f"{x},{y},{-1.0 + 0.1 * (x * x + y * y)}")
    (out / "gradient_grid.csv").write_text("\n".join(rows) + "\n")
    for seed in (1, 2):
        for method in ("sparta", "gcans"):
            path_rows = ["iteration,x,y"]
            for i in range(8):
                path_rows.append(f"{i},{2.0 - 0.2 * i},{1.5 - 0.15 * i}")
            (out / f"{method}_seed{seed}_path.csv").write_text(
                "\n".join(path_rows) + "\n"
            )
    return out


@pytest.fixture
def scaling_dir(tmp_path):
    out = tmp_path / "scaling"
    out.mkdir()
    for n in (2, 4, 6, 8):
        sub = out / f"size_n{n}"
        sub.mkdir()
        write_comparison(sub, n_seeds=2, ground=-float(n))
    return out
