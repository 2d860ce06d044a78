"""
Verification

Catalogue of invariant checks with a planner and a step-by-step executor.
"""

from .checks import CHECKS
from .planner import CheckPlanner
from .executor import CheckExecutor

__all__ = ['CHECKS', 'CheckPlanner', 'CheckExecutor']
