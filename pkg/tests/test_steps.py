import logging
from unittest.mock import patch

from core.errors import InfeasibleDimensioningError
from core.model import validate_scheme
from core.scaling import ScalingPreset
from montecarlo.trials import Estimate, TrialSummary
from steps.comparison import ComparisonStep
from steps.dimension import DimensionStep
from steps.report import ReportStep
from steps.simulate import SimulationStep
from workflow.state import SweepCellState


logger = logging.getLogger(__name__)


def _preset() -> ScalingPreset:
    return ScalingPreset(pool_rule="nlogn", ring_shape=(1.0, 2.0), mu=(0.5, 0.5), target_c=1.0)


def _estimate(mean: float, stderr: float = 0.1) -> Estimate:
    return Estimate(
        mean=mean, stderr=stderr, trials=100,
        ci95_low=mean - 1.96 * stderr, ci95_high=mean + 1.96 * stderr, master_seed=1,
    )


def _summary(isolated_mean: float) -> TrialSummary:
    return TrialSummary(
        n=2000,
        trials=100,
        master_seed=1,
        no_isolated=_estimate(0.1),
        connected=_estimate(0.1),
        isolated_mean=_estimate(isolated_mean),
        class1_isolated_mean=_estimate(isolated_mean),
        no_iso_but_disconnected=_estimate(0.0),
        pair_class1_isolated=_estimate(0.0),
    )


def test_dimension_step_retargets_preset() -> None:
    state: SweepCellState = {"preset": _preset(), "n": 2000, "c_target": 2.0}
    result = DimensionStep().run(state)
    logger.info("Dimension step result: %s", result)

    assert result.get("status") == "ok"
    assert result["theta"].K == (9, 18)
    assert result["c_achieved"] >= 2.0
    assert result.get("visited_steps") == ["dimension"]


@patch("steps.dimension.instantiate")
def test_dimension_step_flags_infeasible(mock_instantiate) -> None:
    mock_instantiate.side_effect = InfeasibleDimensioningError("unreachable")
    state: SweepCellState = {"preset": _preset(), "n": 100, "c_target": 50.0}
    result = DimensionStep().run(state)

    assert result.get("status") == "infeasible"
    assert result.get("theta") is None
    assert "unreachable" in result.get("error", "")
    called_preset = mock_instantiate.call_args.args[0]
    assert called_preset.target_c == 50.0


@patch("steps.simulate.run_trials")
def test_simulation_step_passes_threads(mock_run_trials) -> None:
    mock_run_trials.return_value = _summary(7.0)
    theta = validate_scheme(2, [0.5, 0.5], [5, 10], 15202)
    state: SweepCellState = {"theta": theta, "n": 2000, "trials": 100, "master_seed": 1}

    result = SimulationStep(threads=4).run(state)

    mock_run_trials.assert_called_once_with(theta, 2000, 100, 1, threads=4, keep_records=False)
    assert result.get("summary").isolated_mean.mean == 7.0
    assert result.get("visited_steps") == ["simulate"]


@patch("steps.comparison.expected_isolated")
def test_comparison_step_agreement(mock_expected) -> None:
    mock_expected.return_value = 7.2
    state: SweepCellState = {"n": 2000, "theta": None, "summary": _summary(7.0)}
    result = ComparisonStep().run(state)

    assert result.get("exact_isolated") == 7.2
    assert result.get("agrees") is True
    assert result.get("visited_steps") == ["compare"]


@patch("steps.comparison.expected_isolated")
def test_comparison_step_disagreement(mock_expected) -> None:
    mock_expected.return_value = 9.0
    state: SweepCellState = {"n": 2000, "theta": None, "summary": _summary(7.0)}
    result = ComparisonStep().run(state)
    assert result.get("agrees") is False


def test_report_step_infeasible_row() -> None:
    state: SweepCellState = {"n": 100, "c_target": 50.0, "status": "infeasible"}
    result = ReportStep().run(state)
    row = result["row"]
    assert row.status == "infeasible"
    assert row.K is None and row.connected is None
    assert result.get("visited_steps") == ["report"]


def test_report_step_fills_exact_when_comparison_skipped() -> None:
    theta = validate_scheme(2, [0.5, 0.5], [5, 10], 15202)
    state: SweepCellState = {
        "n": 2000,
        "c_target": 0.5,
        "status": "ok",
        "theta": theta,
        "c_achieved": 0.65,
        "summary": _summary(7.0),
    }
    row = ReportStep().run(state)["row"]
    assert row.status == "ok"
    assert row.K == (5, 10)
    assert row.P == 15202
    assert row.exact_isolated is not None and row.exact_isolated > 0
    assert row.agrees is None
