"""How many branches are there?  Wrong question.

Branch weight per outcome survives any redescription of the fine-grained
structure.  The number of branches above a weight threshold does not: a
rotation of the fine basis by a milliradian changes the count, and
coarse-graining changes it back.  Anything an agent's values hang on had
better not be the count.
"""

from fractions import Fraction

from branchlab import (
    Direct,
    RotationConfig,
    branch,
    coarse_grain,
    count_branches,
    outcome_weights,
    rotate_basis,
    tree_to_csv,
    weighted_game,
)

game = weighted_game((Fraction(1, 3), Fraction(2, 3)), (10, 0))
tree = branch(game, Direct(), fine_dim=8, grain=1e-9)


def snapshot(title, t):
    counts = {x: count_branches(t, x) for x in (1.0, 2.0)}
    weights = {x: float(w) for x, w in outcome_weights(t).items()}
    print(f"{title:<28} counts {counts}   weights {weights}")


snapshot("fresh tree", tree)

rotated = rotate_basis(tree, RotationConfig(epsilon=1e-3, pair_schedule=None, seed=5))
snapshot("after 1e-3 rotation", rotated)

merged = coarse_grain(rotated, 2)
snapshot("after coarse-graining by 2", merged)

collapsed = coarse_grain(rotated, 8)
snapshot("fully coarse-grained", collapsed)

print("\nper-cell dump of the rotated tree:")
print(tree_to_csv(coarse_grain(rotated, 4)))
