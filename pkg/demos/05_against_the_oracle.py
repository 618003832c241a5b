# Checking the search against brute force on random KBs.
#
# The oracle tries every subset of the assertions about x, smallest first,
# and keeps the minimal ones that break the entailment.  Where no chain of
# role assertions leads from x back to x the two agree exactly.  On such a
# cycle the search can miss updates that break an existential's filler at x
# itself; what it does return is always among the oracle's answers.
import random

from elhcf import create_candidates_neg, format_concept, materialize
from elhcf.model import RoleAssertion
from elhcf.oracle import (
    MAX_SUBJECT_ASSERTIONS, brute_force_neg_candidates, concept_holding_at, random_kb,
)


def on_cycle(kb, x):
    succ = {}
    for a in kb.abox:
        if isinstance(a, RoleAssertion):
            succ.setdefault(a.subject, set()).add(a.object)
    seen, todo = set(), list(succ.get(x, ()))
    while todo:
        y = todo.pop()
        if y == x:
            return True
        if y not in seen:
            seen.add(y)
            todo.extend(succ.get(y, ()))
    return False


tally = {}
for seed in range(40):
    rng = random.Random(seed)
    kb = materialize(random_kb(rng))
    x = rng.choice(sorted(kb.individuals))
    c = concept_holding_at(rng, kb, x)
    if len(kb.assertions_about(x)) > MAX_SUBJECT_ASSERTIONS:
        continue
    got = {cs.removed for cs in create_candidates_neg(kb, c, x).non_redundant}
    want = {cs.removed for cs in brute_force_neg_candidates(kb, c, x)}
    verdict = "equal" if got == want else ("subset" if got <= want else "WRONG")
    cyc = on_cycle(kb, x)
    tally[cyc, verdict] = tally.get((cyc, verdict), 0) + 1
    print(f"seed {seed:2d} x={x:3s} cycle={'yes' if cyc else 'no ':3s} {verdict:6s} {format_concept(c)}")

for (cyc, verdict), n in sorted(tally.items()):
    print(f"role cycle through x: {cyc!s:5s}  {verdict:6s} {n}")
