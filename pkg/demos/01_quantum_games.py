"""Quantum games and the two ways to realize the same measurement.

A game is a bet staked on a projective measurement: a state to measure, an
observable naming the outcomes, and a payoff from eigenvalues to valued
consequences.  Branch weights are squared amplitudes, kept as exact
fractions whenever the state is built from rational weights.
"""

from fractions import Fraction

from branchlab import (
    AncillaCoupled,
    Direct,
    born_weights,
    couple_ancilla,
    game_to_json,
    validate_game,
    weighted_game,
)

# A two-outcome game: weight 1/3 on eigenvalue 1 (paying 10 utils via
# consequence c1), weight 2/3 on eigenvalue 2 (paying 0 via c2).
game = weighted_game((Fraction(1, 3), Fraction(2, 3)), (10, 0))

print("validation report:", validate_game(game) or "clean")
print("branch weights:", born_weights(game))

# The same measurement can be carried out by entangling the system with a
# three-level register: the light branch keeps one register level, the heavy
# branch gets two, and every level carries weight exactly 1/3.
joint, register, grouping = couple_ancilla(game, n=1, N=3)
print("\nregister realization of the same game:")
for label, amp in zip(joint.basis_labels, joint.amplitudes):
    print(f"  {label}: weight {amp.abs2}, counts as eigenvalue {grouping[label]}")

# Direct and register-mediated realizations are different physical processes
# for one and the same game triple.
print("\nrealizations:", Direct(), "and", AncillaCoupled(1, 3))

print("\nwire format:")
print(game_to_json(game))
