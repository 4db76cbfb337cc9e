"""The staged ladder from symmetry to squared-amplitude pricing.

Stage 1: an equal two-branch game is worth the average payoff.  Stage 2: the
same for n equal branches.  Stage 3: a rational-weight game, realized
through the equalizing register coupling, reduces to stage 2 plus grouping,
which forces the weighted mean; pricing it differently under the direct
realization is exactly a realization sensitivity.  Stages 4 to 6: irrational
weights are squeezed by rational approximants.  The count-based rule sails
through stages 1 and 2 and snags on stage 3.
"""

import math

from branchlab import (
    Born,
    Egalitarian,
    egalitarian_incoherence_demo,
    verify_stage1,
    verify_stage2,
    verify_stage3,
    verify_stage_general,
)
from branchlab.verifier import default_demo_game

for strategy in (Born(), Egalitarian(1e-9)):
    name = type(strategy).__name__
    s1 = verify_stage1(strategy)
    s2 = verify_stage2(strategy, n=7)
    s3 = verify_stage3(strategy, m=1, n=3)
    print(f"{name}: stage1 {s1.verdict}, stage2(n=7) {s2.verdict}, stage3(1/3) {s3.verdict}")
    case = s3.cases[0]
    print(
        f"    stage3 detail: direct {case['direct_value']:.4f}, "
        f"register {case['ancilla_value']:.4f}, gap {case['mn_delta']:.4f}"
    )

print("\nirrational weight 1/sqrt(2), approximant denominators up to 4096:")
report = verify_stage_general(Born(), 1 / math.sqrt(2), tolerance=1e-4)
for case in report.cases:
    print(f"  cap {case['cap']:>5}: {case['m']}/{case['n']} residual {case['residual']:.2e}")
print("verdict:", report.verdict)

print("\nwhy equal-care cannot be stabilized (rotation then recount):")
demo = egalitarian_incoherence_demo(default_demo_game())
for case in demo.cases:
    print(
        f"  step {case['step']} ({case['operation']}): counts {case['counts']}, "
        f"count-rule value {case['egalitarian_value']:.4f}, "
        f"weight-rule value {case['born_value']:.4f}"
    )
print("verdict:", demo.verdict)
