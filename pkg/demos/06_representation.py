"""From an ordering of acts back to a probability and a utility.

Generate every act over two states and two consequences, order them by
probability-weighted utility, throw the numbers away, and hand the bare
ordering to the extractor.  It returns the max-margin probability and a
normalized utility whose ordering reproduces the input exactly.  Events can
also be compared without any numbers at all, through constant-act bets.
"""

from fractions import Fraction

from branchlab import (
    Representation,
    Setup,
    extract_representation,
    generate_preferences,
    qualitative_probability,
)

setup = Setup(
    kind="fission",
    states=("rainy", "sunny"),
    consequences=("walk", "cinema"),
)
truth = Representation(
    probability={"rainy": Fraction(1, 3), "sunny": Fraction(2, 3)},
    utility={"walk": Fraction(0), "cinema": Fraction(1)},
)

prefs = generate_preferences(setup, truth)
print("ordering (best tier first):")
for tier in prefs.tiers():
    print("  ", [act.mapping() for act in tier])

extracted = extract_representation(prefs)
print("\nextracted probability:", extracted.probability)
print("extracted utility:   ", extracted.utility)

verdict = qualitative_probability(prefs, {"sunny"}, {"rainy"})
print("\nis sunny at least as probable as rainy, judged from bets alone?", verdict.value)
