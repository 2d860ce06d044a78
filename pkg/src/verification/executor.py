"""
Verification Execution Module

Runs verification plans step by step with progress tracking.

The executor:
- Runs each check in the plan sequentially
- Records status, result, error and timestamp per step
- Keeps going after a failed step
- Keeps a timestamped execution log
"""

import time
import logging
from datetime import datetime
from typing import Any, Callable, Dict, List, Optional

from src.errors import MixcurveError
from src.verification.checks import CHECKS

logger = logging.getLogger(__name__)


class CheckExecutor:
    """
    Executes verification plans step by step.

    Example:
        executor = CheckExecutor()
        results = executor.execute_plan(
            plan=plan,
            progress_callback=lambda status: print(status)
        )
        if executor.execution_successful:
            print("All checks passed")
    """

    def __init__(self):
        self.execution_log: List[str] = []
        self.step_results: Dict[int, Dict[str, Any]] = {}
        self.execution_successful: bool = False
        self.current_step: int = 0
        self.total_steps: int = 0
        self.start_time: Optional[float] = None
        self.end_time: Optional[float] = None

    def execute_plan(
        self,
        plan: List[Dict[str, Any]],
        progress_callback: Optional[Callable[[str], None]] = None
    ) -> Dict[str, Any]:
        """
        Execute a verification plan.

        Args:
            plan: List of steps from CheckPlanner
            progress_callback: Optional callback for progress updates

        Returns:
            Dictionary with:
                - success: True if every step passed
                - results: Per-step records keyed by step number
                - execution_time: Total time taken in seconds
                - logs: Execution log entries
                - failed_steps: Step numbers that failed
        """
        self.total_steps = len(plan)
        self.current_step = 0
        self.start_time = time.time()
        self.end_time = None
        self.execution_successful = False
        self.step_results = {}
        self.execution_log = []

        self._log(f"Starting verification of {self.total_steps}-step plan")

        for step in plan:
            self.current_step = step["step"]
            action = step["action"]
            progress_pct = int((self.current_step / max(self.total_steps, 1)) * 100)
            self._log(f"Step {self.current_step}/{self.total_steps} ({progress_pct}%): {action}")
            if progress_callback:
                progress_callback(f"Step {self.current_step}/{self.total_steps}: {action}")

            started = time.time()
            try:
                result = self._execute_step(step)
                passed = bool(result.get("passed", True))
                record = {
                    "action": action,
                    "result": result,
                    "status": "success" if passed else "failed",
                    "timestamp": datetime.now().isoformat(),
                    "elapsed": time.time() - started,
                }
                if passed:
                    self._log(f"✅ Step {self.current_step} passed: {action}")
                else:
                    record["error"] = "check did not pass"
                    self._log(f"❌ Step {self.current_step} did not pass: {action}")
            except Exception as e:
                error = e.to_dict() if isinstance(e, MixcurveError) else {"type": type(e).__name__, "message": str(e)}
                record = {
                    "action": action,
                    "result": None,
                    "status": "failed",
                    "error": error,
                    "timestamp": datetime.now().isoformat(),
                    "elapsed": time.time() - started,
                }
                self._log(f"❌ Step {self.current_step} failed: {action}")
                self._log(f"   Error: {e}")
                if progress_callback:
                    progress_callback(f"⚠️  Step {self.current_step} failed: {e}")
                self._log("⚠️  Continuing with remaining steps...")
            self.step_results[self.current_step] = record

        self.end_time = time.time()
        execution_time = self.end_time - self.start_time

        failed_steps = [
            number for number, record in self.step_results.items()
            if record["status"] == "failed"
        ]
        self.execution_successful = len(failed_steps) == 0

        if self.execution_successful:
            self._log(f"✅ Verification completed successfully in {execution_time:.2f}s")
        else:
            self._log(f"⚠️  Verification completed with {len(failed_steps)} failed steps in {execution_time:.2f}s")

        if progress_callback:
            if self.execution_successful:
                progress_callback(f"✅ All {self.total_steps} checks passed!")
            else:
                progress_callback(f"⚠️  {self.total_steps - len(failed_steps)}/{self.total_steps} checks passed")

        return {
            "success": self.execution_successful,
            "results": self.step_results,
            "execution_time": execution_time,
            "logs": self.execution_log,
            "failed_steps": failed_steps,
        }

    def _execute_step(self, step: Dict[str, Any]) -> Dict[str, Any]:
        action = step["action"]
        if action not in CHECKS:
            raise KeyError(f"unknown check '{action}'")
        check, _ = CHECKS[action]
        return check(**step.get("params", {}))

    def _log(self, message: str) -> None:
        timestamp = datetime.now().strftime("%Y-%m-%d %H:%M:%S")
        log_entry = f"[{timestamp}] {message}"
        self.execution_log.append(log_entry)
        logger.info(log_entry)

    def get_execution_summary(self) -> Dict[str, Any]:
        """Summary counts of the last execution."""
        if not self.start_time:
            return {"status": "not_started"}

        execution_time = (self.end_time - self.start_time) if self.end_time else 0

        return {
            "total_steps": self.total_steps,
            "completed_steps": len(self.step_results),
            "successful_steps": sum(1 for r in self.step_results.values() if r["status"] == "success"),
            "failed_steps": sum(1 for r in self.step_results.values() if r["status"] == "failed"),
            "execution_time": f"{execution_time:.2f}s",
            "success": self.execution_successful,
        }


if __name__ == "__main__":
    from src.verification.planner import CheckPlanner

    plan = CheckPlanner().create_plan(["assertion_table", "circle_windings"])
    executor = CheckExecutor()
    results = executor.execute_plan(plan, progress_callback=lambda s: print(f"📊 {s}"))
    for key, value in executor.get_execution_summary().items():
        print(f"  {key}: {value}")
