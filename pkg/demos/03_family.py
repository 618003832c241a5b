# Ranked explanations on a family KB of about 200 people.
#
# Who is a brother here, and what would have to change about him for that
# to stop?  Among the cheapest updates, the ones that leave him looking like
# people who already are not brothers come first.
import time
from pathlib import Path

from elhcf import (
    CounterfactualRequest, Direction, explain, instance_check, parse_concept, parse_kb, verbalize,
)

kb = parse_kb((Path(__file__).parents[1] / "tests" / "fixtures" / "family.kb").read_text())
print(f"{len(kb.individuals)} individuals, {len(kb.tbox)} TBox axioms, {len(kb.abox)} assertions")

for text in ["Male and hasSibling some Female", "Grandfather", "Sister"]:
    c = parse_concept(text)
    x = next(y for y in sorted(kb.individuals) if instance_check(kb, c, y))
    request = CounterfactualRequest(c, x, Direction.REM)
    for measure in ("min", "mean"):
        t0 = time.perf_counter()
        result = explain(kb, request, rank=measure)
        took = time.perf_counter() - t0
        print(f"\n{text} for {x}, ranked by l_{measure} ({took:.2f} s)")
        for rc in result.counterfactuals:
            print(f"  {rc.rank}. d={rc.edit_distance} l_min={rc.l_min} l_mean={float(rc.l_mean):.2f}")
            print("    ", verbalize(rc, request))
