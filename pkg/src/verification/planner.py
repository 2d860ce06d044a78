"""
Verification Planning Module

Builds verification plans from the catalogue of invariant checks and
validates plans before they are executed.

A plan is a list of steps, each with:
    - step: integer step number (1-based, consecutive)
    - action: name of a registered check
    - params: keyword arguments for the check
    - reason: what the check establishes
"""

import logging
from typing import Any, Dict, List, Optional, Sequence

from src.verification.checks import CHECKS

logger = logging.getLogger(__name__)


class CheckPlanner:
    """
    Creates and validates verification plans.

    Example:
        planner = CheckPlanner()
        plan = planner.create_plan(["assertion_table", "circle_windings"])
        validation = planner.validate_plan(plan)
    """

    def __init__(self):
        self.allowed_actions = list(CHECKS)

    def create_plan(
        self,
        names: Optional[Sequence[str]] = None,
        params: Optional[Dict[str, Dict[str, Any]]] = None
    ) -> List[Dict[str, Any]]:
        """
        Create a plan running the named checks in order.

        Args:
            names: Check names; all registered checks when omitted
            params: Optional per-check keyword arguments

        Returns:
            List of plan steps
        """
        names = list(names) if names else list(self.allowed_actions)
        params = params or {}
        plan = []
        for i, name in enumerate(names, start=1):
            reason = CHECKS[name][1] if name in CHECKS else ""
            plan.append({
                "step": i,
                "action": name,
                "params": dict(params.get(name, {})),
                "reason": reason,
            })
        logger.debug(f"🔍 Plan with {len(plan)} step(s): {', '.join(names)}")
        return plan

    def validate_plan(self, plan: List[Dict[str, Any]]) -> Dict[str, Any]:
        """
        Validate a plan.

        Returns:
            Dictionary with:
                - valid: True if no issues were found
                - issues: List of problems found
        """
        issues = []

        if not plan:
            return {"valid": False, "issues": ["Plan is empty"]}

        seen_steps = set()
        for i, step in enumerate(plan, start=1):
            step_id = f"Step {i}"

            if not step.get("action"):
                issues.append(f"{step_id}: Missing or empty 'action' field")
            elif step["action"] not in self.allowed_actions:
                issues.append(f"{step_id}: Unknown action '{step['action']}'")

            if "params" in step and not isinstance(step["params"], dict):
                issues.append(f"{step_id}: 'params' must be dict, got {type(step['params']).__name__}")

            number = step.get("step")
            if not isinstance(number, int):
                issues.append(f"{step_id}: 'step' must be integer, got {type(number).__name__}")
            elif number in seen_steps:
                issues.append(f"{step_id}: Duplicate step number {number}")
            else:
                seen_steps.add(number)
                if number != i:
                    issues.append(f"{step_id}: Step number mismatch (expected {i}, got {number})")

        return {"valid": len(issues) == 0, "issues": issues}


if __name__ == "__main__":
    planner = CheckPlanner()
    plan = planner.create_plan()
    for step in plan:
        print(f"  {step['step']}. {step['action']} - {step['reason']}")
    validation = planner.validate_plan(plan)
    print(f"{'✅' if validation['valid'] else '❌'} valid: {validation['valid']}")
