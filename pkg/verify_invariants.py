"""
Verification Script: Planner → Executor → Report
Runs the invariant checks end to end and saves a JSON report.

    python verify_invariants.py                      # every check
    python verify_invariants.py assertion_table sm_family
"""
import os
import sys

from src.reports.report_writer import list_saved_reports, save_json_report
from src.verification.executor import CheckExecutor
from src.verification.planner import CheckPlanner

print("=" * 80)
print("🔥 INVARIANT VERIFICATION: Planner → Executor → Report")
print("=" * 80 + "\n")

# Step 1: Plan
print("🧭 Step 1: Planning checks...")
planner = CheckPlanner()
plan = planner.create_plan(sys.argv[1:] or None)
validation = planner.validate_plan(plan)

if not validation['valid']:
    print("❌ Invalid plan:")
    for issue in validation['issues']:
        print(f"   • {issue}")
    sys.exit(1)

for step in plan:
    print(f"   {step['step']}. {step['action']}: {step['reason']}")
print(f"✅ {len(plan)} checks planned\n")

# Step 2: Execute
print("🚀 Step 2: Running checks...")
print("-" * 80)
executor = CheckExecutor()
results = executor.execute_plan(plan, progress_callback=lambda status: print(f"📊 {status}"))

print("\n" + "=" * 80)
print("📊 VERIFICATION RESULTS")
print("=" * 80 + "\n")

for number, record in results['results'].items():
    mark = "✅" if record['status'] == "success" else "❌"
    print(f"{mark} {number}. {record['action']} ({record['elapsed']:.2f}s)")
    if record.get('error') and record['status'] == "failed":
        print(f"      {record['error']}")

summary = executor.get_execution_summary()
print(f"\n   • Passed: {summary['successful_steps']}/{summary['total_steps']}")
print(f"   • Time: {summary['execution_time']}")

# Step 3: Save
print("\n💾 Step 3: Saving report...")
path = save_json_report("verify", {"plan": plan, "summary": summary, "results": results})
print(f"✅ Saved to {path}")
previous = [
    name for name in list_saved_reports(os.path.dirname(path))
    if name.startswith("verify_") and name != os.path.basename(path)
]
if previous:
    print(f"📁 {len(previous)} earlier report(s) in {os.path.dirname(path)}, latest {previous[0]}")

sys.exit(0 if results['success'] else 2)
