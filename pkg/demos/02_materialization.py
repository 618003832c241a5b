# Why the KB is materialized first.
#
# With A < B < C < D and only A(x) asserted, the derived facts B(x), C(x),
# D(x) are invisible until materialization.  Once they are explicit, taking
# x out of C costs three facts (A, B and C) and D(x) survives, which is the
# honest edit distance.  Without materialization the update is just "drop
# A(x)" at distance 1.
from pathlib import Path

from elhcf import CounterfactualRequest, Direction, Atomic, explain, materialize, parse_kb, serialize_kb

kb = parse_kb((Path(__file__).parents[1] / "tests" / "fixtures" / "chain.kb").read_text())
print(serialize_kb(materialize(kb)))

req = CounterfactualRequest(Atomic("C"), "x", Direction.REM)
for flag in (True, False):
    [rc] = explain(kb, req, materialized=flag).counterfactuals
    print(f"materialized={flag}: remove {sorted(map(str, rc.change_set.removed))}, "
          f"distance {rc.edit_distance}")
