"""Twenty measurements, every outcome realized, and yet a theory wins.

Two rival theories predict the outcome statistics of the repeated 1/3 vs
2/3 game.  All outcome sequences happen on some branch; confirmation is a
statement about where the agent's care ends up.  Weighing branches by
squared amplitude, over 99 percent of the final caring mass sits on
branches whose inhabitants assign the true theory credence above 0.95.
"""

from fractions import Fraction

from branchlab import Born, CredenceState, confirmation_experiment, weighted_game

game = weighted_game((Fraction(1, 3), Fraction(2, 3)), (10, 0))
cred = CredenceState(
    priors={"born": Fraction(1, 2), "skew": Fraction(1, 2)},
    likelihoods={
        "born": {1.0: Fraction(1, 3), 2.0: Fraction(2, 3)},
        "skew": {1.0: Fraction(9, 10), 2.0: Fraction(1, 10)},
    },
)

report = confirmation_experiment(cred, game, Born(), trials=20)

print("caring-weighted mean credence in the true theory:")
for it in range(0, 21, 4):
    print(f"  after {it:>2} trials: {float(report.mean_credence('born', it)):.4f}")

mass = report.final_mass_above("born", 0.95)
print(f"\nfinal caring mass with credence(born) > 0.95: {float(mass):.6f}")
print(f"exactly: {mass}")

print("\nfinal outcome classes (counts of eigenvalue 1 and 2):")
for row in report.rows_at(20):
    n1 = dict(row.outcome_class)[1.0]
    marker = "<-- credible" if float(row.credences["born"]) > 0.95 else ""
    print(
        f"  {n1:>2} light / {20 - n1:>2} heavy: mass {float(row.caring_mass):.6f}, "
        f"credence {float(row.credences['born']):.4f} {marker}"
    )
