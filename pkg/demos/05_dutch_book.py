"""Updating by anything but conditionalization costs money on every branch.

The announced posterior q differs from the conditional credence p: three
bets, each fair at its placement-time quotient, settle at the same loss
|p - q| * p(A) * S in the no-evidence case and both evidence cases.  In a
branching picture all three cases are actual, so the loss is not an
expectation; it lands on every branch.
"""

from fractions import Fraction

from branchlab import (
    CredenceState,
    Deviant,
    build_dutch_book,
    case_tree,
    evaluate_book_on_branches,
    evidence_probability,
    posterior,
)

cred = CredenceState(
    priors={"T": Fraction(4, 5), "notT": Fraction(1, 5)},
    likelihoods={
        "T": {"A": Fraction(1, 2), "notA": Fraction(1, 2)},
        "notT": {"A": Fraction(1, 2), "notA": Fraction(1, 2)},
    },
)
print("p(A)      =", evidence_probability(cred, "A"))
print("p(T|A)    =", posterior(cred, "T", "A"))

book = build_dutch_book(cred, Deviant({("T", "A"): Fraction(3, 5)}), "A", "T", stake=1)
print("announced =", book.announced)
print("\nthe three bets:")
for bet in book.bets:
    side = "backs" if bet.direction > 0 else "opposes"
    called_off = ", called off without the evidence" if bet.conditional else ""
    print(
        f"  [{bet.placement}] {side} {bet.target} at quotient {bet.quotient} "
        f"with stake {bet.stake}{called_off}"
    )

tree, assignment = case_tree(book.p_evidence, book.p_conditional)
nets = evaluate_book_on_branches(book, tree, assignment)
cases = ["no evidence", "evidence and theory", "evidence, no theory"]
print("\nsettlement on each branch:")
for i, name in enumerate(cases):
    print(f"  {name:<22} net {nets[i]}")
print("guaranteed:", book.guaranteed_net)
