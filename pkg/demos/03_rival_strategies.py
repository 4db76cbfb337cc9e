"""Four rules for caring about branches, and what each pays for a game.

The weight rule prices a game identically however the measurement is
realized.  The count rule pays 5 for a direct measurement of the 1/3 vs 2/3
game but only 10/3 for the register-mediated version of the very same game:
a realization sensitivity of exactly 5/3.  The squared-weight and
eigenvalue rules have their own pathologies, probed in the staged checks.
"""

from fractions import Fraction

from branchlab import (
    AncillaCoupled,
    Born,
    Direct,
    Egalitarian,
    EigenvalueWeighted,
    SquaredWeightRenormalized,
    branch,
    caring_measure,
    mn_violation,
    value_game,
    weighted_game,
)

game = weighted_game((Fraction(1, 3), Fraction(2, 3)), (10, 0))
tree = branch(game, Direct())

print("caring over the direct tree:")
for strategy in (Born(), Egalitarian(1e-6), SquaredWeightRenormalized(), EigenvalueWeighted()):
    care = caring_measure(strategy, tree).by_outcome()
    print(f"  {type(strategy).__name__:<26} {dict(sorted(care.items()))}")

print("\ngame values by realization:")
for strategy in (Born(), Egalitarian(1e-6)):
    direct = value_game(strategy, game, Direct())
    register = value_game(strategy, game, AncillaCoupled(1, 3))
    gap = mn_violation(strategy, game, [Direct(), AncillaCoupled(1, 3)])
    print(
        f"  {type(strategy).__name__:<26} direct {direct:.6f}   "
        f"register {register:.6f}   realization gap {gap:.6f}"
    )
