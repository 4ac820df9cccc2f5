"""
Demo script: runs 3 scenarios against the library and prints results.

No configuration needed. Runs:
  - Scenario 1: Exact probe of a small two-class scheme
  - Scenario 2: Zero-one sweep cell below and above the threshold (n=500)
  - Scenario 3: Node capture on a fixed scheme
"""

from __future__ import annotations

import logging

from config import get_thread_count
from core.exactprob import edge_prob_matrix, expected_isolated, mean_edge_probs
from core.model import validate_scheme
from core.scaling import ScalingPreset
from montecarlo.checks import capture_attack
from montecarlo.sweep import sweep


# ANSI colors
GREEN = "\033[92m"
CYAN = "\033[96m"
YELLOW = "\033[93m"
BOLD = "\033[1m"
RESET = "\033[0m"

DEMO_SEED = 2024


def _fmt(value: float | None) -> str:
    return "n/a" if value is None else f"{value:.4f}"


def _run_scenario_1(threads: int) -> None:
    """Exact quantities for mu=[.5,.5], K=[1,2], P=4, n=3."""
    print(f"\n{BOLD}{YELLOW}=== Scenario 1: Exact probe ==={RESET}\n")
    theta = validate_scheme(2, [0.5, 0.5], [1, 2], 4)
    print(f"{GREEN}p matrix:{RESET}\n{edge_prob_matrix(theta)}")
    print(f"{GREEN}lambda:{RESET} {mean_edge_probs(theta)}")
    print(f"{GREEN}E[I_3]:{RESET} {expected_isolated(3, theta):.6f}")
    print("-" * 60)


def _run_scenario_2(threads: int) -> None:
    """One n, two targets on either side of c = 1."""
    print(f"\n{BOLD}{YELLOW}=== Scenario 2: Zero-one sweep at n=500 ==={RESET}\n")
    preset = ScalingPreset(
        pool_rule="nlogn", ring_shape=(1.0, 2.0), mu=(0.5, 0.5), target_c=1.0
    )
    rows = sweep(preset, [0.5, 2.0], [500], trials=50, master_seed=DEMO_SEED, threads=threads)
    for row in rows:
        print(
            f"{CYAN}c={row.c_target} K={row.K} c_n={_fmt(row.c_achieved)}{RESET} "
            f"P[conn]={_fmt(row.connected.mean if row.connected else None)} "
            f"P[I=0]={_fmt(row.no_isolated.mean if row.no_isolated else None)} "
            f"E[I]={_fmt(row.isolated_mean.mean if row.isolated_mean else None)} "
            f"exact={_fmt(row.exact_isolated)} status={row.status}"
        )
    print("-" * 60)


def _run_scenario_3(threads: int) -> None:
    """Capture 0, 10 and 50 of 200 nodes."""
    print(f"\n{BOLD}{YELLOW}=== Scenario 3: Node capture ==={RESET}\n")
    theta = validate_scheme(2, [0.5, 0.5], [20, 40], 10_000)
    for s in (0, 10, 50):
        result = capture_attack(theta, 200, s, trials=20, master_seed=DEMO_SEED, threads=threads)
        print(
            f"{CYAN}s={s}{RESET} coverage={_fmt(result.pool_coverage.mean)} "
            f"(exact {_fmt(result.expected_pool_coverage)}) "
            f"compromised links={_fmt(result.compromised_link_fraction.mean)}"
        )
    print("-" * 60)


def main() -> None:
    logging.basicConfig(
        level=logging.WARNING,
        format="%(asctime)s [%(levelname)s] %(name)s - %(message)s",
    )
    threads = get_thread_count()
    print(f"{BOLD}Running demo with {threads} worker(s)...{RESET}")

    scenarios = [
        ("Scenario 1 (exact probe)", _run_scenario_1),
        ("Scenario 2 (zero-one sweep)", _run_scenario_2),
        ("Scenario 3 (node capture)", _run_scenario_3),
    ]

    for name, run_fn in scenarios:
        try:
            run_fn(threads)
        except Exception as e:
            print(f"\n{YELLOW}Scenario failed: {name}{RESET}")
            print(f"Exception: {e}")
            import traceback
            traceback.print_exc()


if __name__ == "__main__":
    main()
