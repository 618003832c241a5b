# Two ways to stop x being a D.
#
# T = {B and C SubClassOf D} and x is asserted B, C and D.  Dropping D(x)
# alone is not enough since B and C bring it back, so each update has to
# break the conjunction as well.  Removing all three would also work but is
# redundant: B(x) could stay.
from pathlib import Path

from elhcf import CounterfactualRequest, Direction, Atomic, explain, parse_kb, verbalize

FIXTURES = Path(__file__).parents[1] / "tests" / "fixtures"

kb = parse_kb((FIXTURES / "example1.kb").read_text())
request = CounterfactualRequest(Atomic("D"), "x", Direction.REM)
result = explain(kb, request)

print("candidates found:", result.candidates_total)
for rc in result.counterfactuals:
    left = sorted(map(str, kb.abox - rc.change_set.removed))
    print(f"{rc.rank}. remove {sorted(map(str, rc.change_set.removed))} -> ABox {left}, "
          f"edit distance {rc.edit_distance}")
    print("  ", verbalize(rc, request))

# x is the only individual, so nobody is a negative example and the
# likeliness scores stay empty
print("l_min of the first:", result.counterfactuals[0].l_min)
