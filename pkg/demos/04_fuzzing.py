"""Fuzzing the tree under invariant checks, and shrinking a failure.

A clean run passes every check. With a planted fault (activating the parent
of the last leaf) the fuzzer catches the broken invariant and shrinks the
trace to a handful of operations.
"""

from unitopsort.index_forest import DESK
from unitopsort.traces import format_tree_trace, fuzz, inject_fault

ok = fuzz(3000, 200, seed=1, thresholds=DESK, check="full", check_every=20)
print("clean run passed:", ok.passed, "after", ok.ops_run, "ops")

bad = fuzz(3000, 200, seed=1, corrupt=inject_fault)
print(f"planted fault caught at op {bad.ops_run}: invariant {bad.invariant}")
print(f"shrunk witness ({len(bad.witness)} ops):")
print(format_tree_trace(bad.witness), end="")
