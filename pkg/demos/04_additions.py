# Making a classification hold instead of fail.
#
# Additions are built directly: every existential gets a fresh individual,
# conjuncts the KB already entails are skipped, and anything the other
# additions make unnecessary is dropped again.
from pathlib import Path

from elhcf import CounterfactualRequest, Direction, create_candidates_pos, parse_concept, parse_kb, verbalize
from elhcf.counterfactual import RankedCounterfactual

fixtures = Path(__file__).parents[1] / "tests" / "fixtures"
kb = parse_kb((fixtures / "animals.kb").read_text())

for text, x in [("Turtle", "s"), ("Carnivore", "p"), ("Mammal and eats some Bird", "f")]:
    c = parse_concept(text)
    cs = create_candidates_pos(kb, c, x)
    req = CounterfactualRequest(c, x, Direction.ADD)
    print(f"{text}({x}): add {sorted(map(str, cs.added))}")
    print("  ", verbalize(RankedCounterfactual(cs, 0), req))
