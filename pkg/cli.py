"""
Command-line front door.

    python cli.py probe --config run.ini
    python cli.py dimension --config run.ini
    python cli.py sweep --config run.ini --seed 7 --threads 4 --out sweep.csv
    python cli.py resilience --config run.ini
    python cli.py dump-graph --config run.ini --out graph.txt

Exit codes: 0 success, 2 configuration error, 3 infeasible dimensioning,
4 any other failure.
"""

from __future__ import annotations

import argparse
import contextlib
import logging
import sys
import time
from typing import Callable, Dict, Iterator, List, Optional, Sequence, TextIO

from pydantic import ValidationError

from config import RunConfig, get_thread_count, load_run_config
from core import exactprob
from core.errors import (
    ConfigError,
    InfeasibleDimensioningError,
    ParameterRangeError,
    SchemeValidationError,
)
from core.model import SchemeParams, validate_scheme
from core.scaling import achieved_c, check_theorem2_conditions, instantiate
from montecarlo.checks import capture_attack, coverage_event_check
from montecarlo.trials import Estimate
from montecarlo.sweep import SweepRow, cell_records, sweep
from simulation.sampler import SeedSpec, build_graph, dump_graph
from utils.formats import (
    COVERAGE_HEADER,
    PROBE_HEADER,
    RESILIENCE_HEADER,
    SWEEP_FOOTER,
    SWEEP_HEADER,
    Cell,
    condition_header,
    header_comment,
)
from utils.output import write_csv, write_jsonl


logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_INFEASIBLE = 3
EXIT_FAILURE = 4

DEFAULT_CONDITION_SIGMA = 1.0


def _configure_logging() -> None:
    logging.basicConfig(
        level=logging.INFO,
        format="%(asctime)s [%(levelname)s] %(name)s - %(message)s",
        stream=sys.stderr,
    )


@contextlib.contextmanager
def _open_output(path: Optional[str]) -> Iterator[TextIO]:
    if path is None:
        yield sys.stdout
        return
    with open(path, "w", encoding="utf-8", newline="") as handle:
        yield handle
    logger.info("Wrote %s", path)


def _require_n(config: RunConfig) -> int:
    n = config.experiment.n
    if n is None:
        raise ConfigError("[experiment] n is required for this command")
    return n


def _resolve_scheme(config: RunConfig, n: int) -> SchemeParams:
    if config.scheme is not None:
        return config.scheme.to_scheme()
    return instantiate(config.preset.to_preset(), n)


def _probe_rows(n: int, theta: SchemeParams) -> List[List[Cell]]:
    r = theta.r
    rows: List[List[Cell]] = []
    for i in range(1, r + 1):
        for j in range(i, r + 1):
            rows.append(["p", i, j, exactprob.edge_prob(i, j, theta)])
            if exactprob.is_saturated(i, j, theta):
                rows.append(["saturated", i, j, True])
    for i in range(1, r + 1):
        for j in range(i, r + 1):
            rows.append(["p_lower_bound", i, j, exactprob.edge_prob_lower_bound(i, j, theta)])
    for i, lam in enumerate(exactprob.mean_edge_probs(theta).tolist(), start=1):
        rows.append(["lambda", i, None, lam])
        rows.append(["expected_degree", i, None, exactprob.expected_degree(i, n, theta)])
    rows.append(["expected_isolated", None, None, exactprob.expected_isolated(n, theta)])
    rows.append(
        ["expected_class1_isolated", None, None, exactprob.expected_class1_isolated(n, theta)]
    )
    if n >= 2:
        rows.append(["c_n", None, None, achieved_c(n, theta)])
        rows.append(
            ["pair_class1_isolated", None, None, exactprob.pair_class1_isolated_prob(n, theta)]
        )
        if exactprob.mean_edge_prob(1, theta) < 1.0:
            rows.append(
                ["second_moment_ratio", None, None, exactprob.second_moment_ratio(n, theta)]
            )
    rows.append(["z_variance", None, None, exactprob.z_variance(theta)])
    rows.append(["popoviciu_bound", None, None, exactprob.popoviciu_bound(theta)])
    return rows


def cmd_probe(config: RunConfig, threads: int) -> None:
    """Exact quantities for a fixed n; no randomness involved."""
    n = _require_n(config)
    theta = _resolve_scheme(config, n)
    with _open_output(config.output.path) as out:
        write_csv(
            out,
            PROBE_HEADER,
            _probe_rows(n, theta),
            comments=[header_comment("probe", config.experiment.master_seed)],
        )


def cmd_dimension(config: RunConfig, threads: int) -> None:
    if config.preset is None:
        raise ConfigError("dimension needs a [preset] block")
    n_grid = config.n_values()
    if not n_grid:
        raise ConfigError("dimension needs [experiment] n or n_grid")
    preset = config.preset.to_preset()
    sigma = config.experiment.sigma or preset.sigma or DEFAULT_CONDITION_SIGMA
    report = check_theorem2_conditions(preset, n_grid, sigma)

    rows = [
        [row.n, row.P, *row.K, row.lambda_1, row.c_n, row.p_over_n, row.n_k1sq_over_p, row.gap_a,
         row.saturated]
        for row in report.rows
    ]
    with _open_output(config.output.path) as out:
        write_csv(
            out,
            condition_header(len(preset.mu)),
            rows,
            comments=[header_comment("dimension", config.experiment.master_seed)],
        )
    logger.info(
        "Condition report: pool_linear_ok=%s, nK1^2/P trend=%s",
        report.pool_linear_ok, report.k1sq_trend,
    )
    if report.infeasible_n:
        raise InfeasibleDimensioningError(
            f"target c={preset.target_c} unreachable at n={report.infeasible_n}"
        )


def cmd_sweep(config: RunConfig, threads: int) -> None:
    if config.preset is None:
        raise ConfigError("sweep needs a [preset] block")
    n_grid = config.n_values()
    c_grid = config.experiment.c_grid
    if not n_grid or not c_grid:
        raise ConfigError("sweep needs [experiment] n_grid (or n) and c_grid")
    master_seed = config.require_seed()
    experiment = config.experiment
    needs_thresholds = experiment.beta is None or experiment.gamma is None
    if config.output.coverage is not None and needs_thresholds:
        raise ConfigError("[output] coverage needs [experiment] beta and gamma")

    started = time.perf_counter()
    rows = sweep(
        config.preset.to_preset(),
        c_grid,
        n_grid,
        experiment.trials,
        master_seed,
        threads=threads,
        keep_records=config.output.records is not None,
    )
    wall_time = time.perf_counter() - started
    comment = header_comment("sweep", master_seed)

    with _open_output(config.output.path) as out:
        if config.output.format == "jsonl":
            write_jsonl(out, rows, comments=[comment])
        else:
            write_csv(
                out,
                SWEEP_HEADER,
                (
                    [
                        row.n, row.c_target, row.c_achieved, row.P, row.K,
                        *_estimate_cells(row.no_isolated),
                        *_estimate_cells(row.connected),
                        *_estimate_cells(row.isolated_mean),
                        row.exact_isolated, row.agrees, row.status,
                    ]
                    for row in rows
                ),
                comments=[comment],
                footer=[SWEEP_FOOTER.format(master_seed=master_seed, wall_time=wall_time)],
            )
    if config.output.records is not None:
        with _open_output(config.output.records) as out:
            write_jsonl(out, cell_records(rows), comments=[comment])
    if config.output.coverage is not None:
        with _open_output(config.output.coverage) as out:
            write_csv(
                out,
                COVERAGE_HEADER,
                _coverage_rows(config, rows, master_seed, threads),
                comments=[header_comment("sweep-coverage", master_seed)],
            )


def _coverage_rows(
    config: RunConfig, rows: Sequence[SweepRow], master_seed: int, threads: int
) -> List[List[Cell]]:
    """Per-ell coverage event frequencies for every feasible sweep cell."""
    preset, experiment = config.preset, config.experiment
    table: List[List[Cell]] = []
    for row in rows:
        if row.status != "ok":
            continue
        theta = validate_scheme(len(preset.mu), preset.mu, row.K, row.P)
        result = coverage_event_check(
            theta,
            row.n,
            experiment.beta,
            experiment.gamma,
            min(experiment.max_ell, row.n),
            experiment.trials,
            master_seed,
            threads=threads,
        )
        table.extend(
            [
                row.n, row.c_target, record.ell, record.threshold,
                *_estimate_cells(record.union_size),
                *_estimate_cells(record.violated),
            ]
            for record in result.rows
        )
    return table


def _estimate_cells(estimate: Optional[Estimate]) -> List[Cell]:
    if estimate is None:
        return [None, None]
    return [estimate.mean, estimate.stderr]


def cmd_resilience(config: RunConfig, threads: int) -> None:
    n = _require_n(config)
    s_grid = config.experiment.s
    if not s_grid:
        raise ConfigError("resilience needs [experiment] s")
    master_seed = config.require_seed()
    theta = _resolve_scheme(config, n)

    results = [
        capture_attack(theta, n, s, config.experiment.trials, master_seed, threads=threads)
        for s in s_grid
    ]
    with _open_output(config.output.path) as out:
        if config.output.format == "jsonl":
            write_jsonl(out, results, comments=[header_comment("resilience", master_seed)])
            return
        write_csv(
            out,
            RESILIENCE_HEADER,
            (
                [
                    result.s,
                    *_estimate_cells(result.pool_coverage),
                    result.expected_pool_coverage,
                    *_estimate_cells(result.compromised_link_fraction),
                ]
                for result in results
            ),
            comments=[header_comment("resilience", master_seed)],
        )


def cmd_dump_graph(config: RunConfig, threads: int) -> None:
    n = _require_n(config)
    master_seed = config.require_seed()
    theta = _resolve_scheme(config, n)
    graph = build_graph(
        n, theta, SeedSpec(master_seed=master_seed, trial_index=config.experiment.trial)
    )
    with _open_output(config.output.path) as out:
        dump_graph(graph, out)


COMMANDS: Dict[str, Callable[[RunConfig, int], None]] = {
    "probe": cmd_probe,
    "dimension": cmd_dimension,
    "sweep": cmd_sweep,
    "resilience": cmd_resilience,
    "dump-graph": cmd_dump_graph,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="keygraph",
        description="Exact and simulated connectivity of heterogeneous key predistribution.",
    )
    parser.add_argument("command", choices=sorted(COMMANDS))
    parser.add_argument("--config", required=True, help="path to the run configuration")
    parser.add_argument("--seed", type=int, default=None, help="master seed, overrides the config")
    parser.add_argument("--trials", type=int, default=None, help="trials per cell")
    parser.add_argument("--out", default=None, help="output file (default: stdout)")
    parser.add_argument(
        "--threads", type=int, default=None,
        help="worker processes; changes speed only (env KEYGRAPH_THREADS)",
    )
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    _configure_logging()
    args = build_parser().parse_args(argv)
    try:
        config = load_run_config(args.config).with_overrides(
            seed=args.seed, trials=args.trials, out=args.out
        )
        threads = get_thread_count(args.threads)
        logger.info("Running %s with %s worker(s).", args.command, threads)
        COMMANDS[args.command](config, threads)
    except (ConfigError, SchemeValidationError, ParameterRangeError, ValidationError) as exc:
        logger.error("Configuration error: %s", exc)
        return EXIT_CONFIG
    except InfeasibleDimensioningError as exc:
        logger.error("Infeasible dimensioning: %s", exc)
        return EXIT_INFEASIBLE
    except Exception:
        logger.exception("%s failed.", args.command)
        return EXIT_FAILURE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
