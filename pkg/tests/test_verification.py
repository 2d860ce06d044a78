"""Tests for the verification planner, executor and invariant checks."""

import pytest

from src.config import get_tolerances
from src.errors import ConfigurationError, NotARoot
from src.verification.checks import CHECKS, check_assertion_table, check_chart_example, check_circle_windings
from src.verification.executor import CheckExecutor
from src.verification.planner import CheckPlanner


def test_plan_covers_every_check_in_order():
    planner = CheckPlanner()
    plan = planner.create_plan()
    assert [step["action"] for step in plan] == list(CHECKS)
    assert [step["step"] for step in plan] == list(range(1, len(CHECKS) + 1))
    assert all(step["reason"] for step in plan)
    assert planner.validate_plan(plan) == {"valid": True, "issues": []}


def test_plan_params_are_attached():
    plan = CheckPlanner().create_plan(["assertion_table"], {"assertion_table": {"ns": (2, 3)}})
    assert plan[0]["params"] == {"ns": (2, 3)}


def test_validate_plan_reports_problems():
    planner = CheckPlanner()
    assert planner.validate_plan([]) == {"valid": False, "issues": ["Plan is empty"]}
    plan = [
        {"step": 1, "action": "nonsense", "params": {}},
        {"step": 1, "action": "sm_family", "params": []},
        {"step": "3", "action": ""},
    ]
    issues = planner.validate_plan(plan)["issues"]
    assert any("Unknown action 'nonsense'" in issue for issue in issues)
    assert any("Duplicate step number 1" in issue for issue in issues)
    assert any("'params' must be dict" in issue for issue in issues)
    assert any("'step' must be integer" in issue for issue in issues)
    assert any("Missing or empty 'action'" in issue for issue in issues)


def test_executor_continues_after_a_failed_step(monkeypatch):
    def boom():
        raise NotARoot("planted failure", {"residual": 1.0})

    monkeypatch.setitem(CHECKS, "boom", (boom, "always fails"))
    monkeypatch.setitem(CHECKS, "fails", (lambda: {"passed": False}, "never passes"))
    planner = CheckPlanner()
    plan = planner.create_plan(["boom", "fails", "assertion_table"], {"assertion_table": {"ns": (2, 3)}})
    messages = []
    executor = CheckExecutor()
    results = executor.execute_plan(plan, progress_callback=messages.append)

    assert not results["success"]
    assert results["failed_steps"] == [1, 2]
    assert results["results"][1]["error"]["type"] == "NotARoot"
    assert results["results"][2]["error"] == "check did not pass"
    assert results["results"][3]["status"] == "success"
    assert any("Continuing" in line for line in results["logs"])
    assert messages[-1] == "⚠️  1/3 checks passed"

    summary = executor.get_execution_summary()
    assert summary["total_steps"] == 3
    assert summary["successful_steps"] == 1
    assert summary["failed_steps"] == 2


def test_summary_before_execution():
    assert CheckExecutor().get_execution_summary() == {"status": "not_started"}


def test_assertion_table_check():
    result = check_assertion_table((2, 3, 4, 5))
    assert result["passed"]
    assert [row["sm"] for row in result["rows"]] == [1, -1, 1, 1]


def test_chart_and_circle_checks():
    assert check_chart_example()["passed"]
    circles = check_circle_windings()
    assert circles["passed"]
    assert (circles["winding_1_5"], circles["winding_3"]) == (1, 2)


def test_tolerance_scale_from_environment(monkeypatch):
    monkeypatch.setenv("MIXCURVE_TOL", "10")
    tol = get_tolerances()
    assert tol.root_residual == pytest.approx(1e-8)
    assert tol.winding_start_samples == 64
    assert tol.sm_default_radius == 0.1
    monkeypatch.setenv("MIXCURVE_TOL", "zero")
    with pytest.raises(ConfigurationError):
        get_tolerances()
