"""Bayesian confirmation bench: updating, sure-loss books, repeated trials.

Credences over rival theories are updated on observed outcomes.  An agent
who announces a posterior different from the conditional credence can be
sold three individually fair bets that settle at a loss in every case, and
the loss is realized on every branch of the outcome tree, not merely in
expectation.  The repeated-trial experiment tracks how much care an agent
ends up investing in branches where the true theory is highly credible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Hashable, Mapping, Sequence, Union

from .branching import BranchLeaf, BranchTree, branch
from .games import Direct, MeasurementRealization, QuantumGame
from .strategies import Strategy, TablePreference, caring_measure

Number = Union[int, float, Fraction]
Evidence = Hashable


@dataclass(frozen=True)
class CredenceState:
    """Credences over theories plus per-theory likelihood tables.

    likelihoods[T][A] is the probability the theory T assigns to the
    evidence proposition A.  Values may be floats or fractions; fractions
    keep every downstream identity exact.
    """

    priors: Mapping[str, Number]
    likelihoods: Mapping[str, Mapping[Evidence, Number]]

    def __post_init__(self) -> None:
        total = float(sum(self.priors.values()))
        if abs(total - 1.0) > 1e-9:
            raise ValueError(f"credences must sum to 1, got {total!r}")
        for theory, p in self.priors.items():
            if not 0.0 <= float(p) <= 1.0 + 1e-12:
                raise ValueError(f"credence for {theory!r} outside [0, 1]")
            if theory not in self.likelihoods:
                raise ValueError(f"no likelihood table for theory {theory!r}")
        for theory, table in self.likelihoods.items():
            for a, v in table.items():
                if not 0.0 <= float(v) <= 1.0 + 1e-12:
                    raise ValueError(f"likelihood p({a!r}|{theory!r}) outside [0, 1]")

    def theories(self) -> tuple[str, ...]:
        return tuple(self.priors)


def evidence_probability(cred: CredenceState, evidence: Evidence) -> Number:
    """Prior probability of the evidence: sum over theories of p(T) p(A|T)."""
    total: Number = Fraction(0)
    for theory, p in cred.priors.items():
        table = cred.likelihoods[theory]
        if evidence not in table:
            raise KeyError(f"theory {theory!r} has no likelihood for evidence {evidence!r}")
        total = total + p * table[evidence]
    return total


def conditionalize(cred: CredenceState, evidence: Evidence) -> CredenceState:
    """Bayes update: new credence in T is p(A|T) p(T) / p(A)."""
    pa = evidence_probability(cred, evidence)
    if pa == 0:
        raise ValueError(f"evidence {evidence!r} has zero prior probability; update undefined")
    new_priors = {
        theory: (p * cred.likelihoods[theory][evidence]) / pa
        for theory, p in cred.priors.items()
    }
    return replace(cred, priors=new_priors)


def posterior(cred: CredenceState, theory: str, evidence: Evidence) -> Number:
    return conditionalize(cred, evidence).priors[theory]


# -- Update policies ------------------------------------------------------------


@dataclass(frozen=True)
class Conditionalize:
    """Announce the conditional credence itself."""


@dataclass(frozen=True)
class Deviant:
    """Announce explicit posteriors, keyed by (theory, evidence)."""

    posteriors: Mapping[tuple[str, Evidence], Number]


@dataclass(frozen=True)
class Rigid:
    """Announce the unchanged prior, whatever was observed."""


UpdatePolicy = Union[Conditionalize, Deviant, Rigid]


def announced_posterior(
    policy: UpdatePolicy, cred: CredenceState, theory: str, evidence: Evidence
) -> Number:
    if isinstance(policy, Conditionalize):
        return posterior(cred, theory, evidence)
    if isinstance(policy, Rigid):
        return cred.priors[theory]
    if isinstance(policy, Deviant):
        try:
            return policy.posteriors[(theory, evidence)]
        except KeyError:
            raise KeyError(f"deviant policy has no announcement for ({theory!r}, {evidence!r})")
    raise TypeError(f"unknown update policy {policy!r}")


# -- The three-bet book ----------------------------------------------------------


@dataclass(frozen=True)
class Bet:
    """A single bet at a stated quotient.

    direction +1 backs the target proposition, -1 backs its negation; a
    conditional bet is called off (settles at 0) unless the evidence obtains,
    and a post-evidence bet is simply never placed on no-evidence branches.
    """

    target: str  # "theory" or "evidence"
    placement: str  # "pre" or "post"
    quotient: Number
    stake: Number
    direction: int
    conditional: bool = False


@dataclass(frozen=True)
class Book:
    """Three bets that settle at the same net loss in every case."""

    bets: tuple[Bet, Bet, Bet]
    theory: str
    evidence: Evidence
    p_evidence: Number
    p_conditional: Number
    announced: Number
    stake: Number
    guaranteed_net: Number


def settle_bet(bet: Bet, evidence_true: bool, theory_true: bool) -> Number:
    if bet.conditional and not evidence_true:
        return Fraction(0)
    if bet.placement == "post" and not evidence_true:
        return Fraction(0)
    holds = theory_true if bet.target == "theory" else evidence_true
    indicator = 1 if holds else 0
    return bet.direction * (indicator - bet.quotient) * bet.stake


def build_dutch_book(
    cred: CredenceState,
    policy: UpdatePolicy,
    evidence: Evidence,
    theory: str,
    stake: Number = 1,
) -> Book | None:
    """Construct the three-bet sure-loss book against a non-conditionalizer.

    Let p be the conditional credence in the theory given the evidence, r the
    prior probability of the evidence, and q the posterior the policy will
    announce.  The book is: (i) a pre-evidence conditional bet on the theory
    at quotient p with stake S, backed or opposed according to the sign of
    p - q; (ii) a pre-evidence purchase of the evidence proposition at
    quotient r with stake |p - q| S, which spreads the conditional loss onto
    the no-evidence case; (iii) a post-evidence bet on the theory at the
    announced q, opposite in direction to (i).  Each bet is fair at its
    placement-time quotient, yet the three settle at -|p - q| r S in all of
    the cases (no evidence), (evidence, theory) and (evidence, no theory).
    Returns None when the announced posterior equals the conditional
    credence: a conditionalizer cannot be booked this way.
    """
    if isinstance(policy, Conditionalize):
        return None
    p = posterior(cred, theory, evidence)
    r = evidence_probability(cred, evidence)
    if not 0.0 < float(r) < 1.0:
        raise ValueError(f"evidence probability must lie strictly inside (0, 1), got {float(r)!r}")
    q = announced_posterior(policy, cred, theory, evidence)
    gap = p - q
    if abs(float(gap)) <= 1e-12:
        return None
    direction = 1 if gap > 0 else -1
    hedge_stake = abs(gap) * stake
    bets = (
        Bet(
            target="theory",
            placement="pre",
            quotient=p,
            stake=stake,
            direction=direction,
            conditional=True,
        ),
        Bet(
            target="evidence",
            placement="pre",
            quotient=r,
            stake=hedge_stake,
            direction=1,
        ),
        Bet(
            target="theory",
            placement="post",
            quotient=q,
            stake=stake,
            direction=-direction,
        ),
    )
    return Book(
        bets=bets,
        theory=theory,
        evidence=evidence,
        p_evidence=r,
        p_conditional=p,
        announced=q,
        stake=stake,
        guaranteed_net=-abs(gap) * r * stake,
    )


def evaluate_book_on_branches(
    book: Book | None,
    tree: BranchTree,
    truth_assignment: Mapping[int, tuple[bool, bool]],
) -> dict[int, Number]:
    """Net payoff of the book on every leaf, keyed by leaf index.

    truth_assignment maps each leaf index to (evidence obtained?, theory
    true?).  A None book (fair updater) settles at zero everywhere.
    """
    if set(truth_assignment) != set(range(len(tree.leaves))):
        raise ValueError("truth assignment must cover every leaf exactly once")
    if book is None:
        return {i: Fraction(0) for i in range(len(tree.leaves))}
    out: dict[int, Number] = {}
    for i in range(len(tree.leaves)):
        a, t = truth_assignment[i]
        out[i] = sum((settle_bet(bet, a, t) for bet in book.bets), Fraction(0))
    return out


def case_tree(p_evidence: Number, p_conditional: Number) -> tuple[BranchTree, dict[int, tuple[bool, bool]]]:
    """The canonical three-leaf tree for book settlement.

    Leaves carry weights (1-r) for no-evidence, r*p for evidence-and-theory
    and r*(1-p) for evidence-without-theory, with the matching truth
    assignment.
    """
    r = p_evidence if isinstance(p_evidence, Fraction) else Fraction(p_evidence)
    p = p_conditional if isinstance(p_conditional, Fraction) else Fraction(p_conditional)
    weights = [1 - r, r * p, r * (1 - p)]
    leaves = tuple(
        BranchLeaf(outcome=float(i), history=(), weight=w, cells=(w,))
        for i, w in enumerate(weights)
    )
    tree = BranchTree(leaves=leaves, grain=1e-9, fine_dim=1)
    assignment = {0: (False, False), 1: (True, True), 2: (True, False)}
    return tree, assignment


# -- Repeated-trial confirmation experiment --------------------------------------


@dataclass(frozen=True)
class TrajectoryRow:
    iteration: int
    outcome_class: tuple[tuple[float, int], ...]
    caring_mass: Number
    credences: Mapping[str, Number]
    frozen: bool = False


@dataclass(frozen=True)
class TrajectoryReport:
    rows: tuple[TrajectoryRow, ...]
    theories: tuple[str, ...]
    trials: int

    def rows_at(self, iteration: int) -> list[TrajectoryRow]:
        return [row for row in self.rows if row.iteration == iteration]

    def final_mass_above(self, theory: str, threshold: float) -> Number:
        """Caring mass of final branches whose credence in the theory exceeds
        the threshold."""
        mass: Number = Fraction(0)
        for row in self.rows_at(self.trials):
            if float(row.credences[theory]) > threshold:
                mass = mass + row.caring_mass
        return mass

    def mean_credence(self, theory: str, iteration: int) -> Number:
        """Caring-weighted mean credence in the theory at an iteration."""
        total: Number = Fraction(0)
        for row in self.rows_at(iteration):
            total = total + row.caring_mass * row.credences[theory]
        return total


def _step_caring(strategy: Strategy, game: QuantumGame, realization: MeasurementRealization) -> dict[float, Number]:
    tree = branch(game, realization)
    return caring_measure(strategy, tree).by_outcome()


def _class_rows(
    cred: CredenceState,
    outcomes: Sequence[float],
    step_mass: Mapping[float, Number],
    trials: int,
) -> list[TrajectoryRow]:
    """Exact enumeration collapsed to outcome-count classes.

    Valid because repeated identical measurements make both the caring mass
    and the updated credence depend on the path only through its outcome
    counts.  Cross-checked against full path enumeration in the tests.
    """
    rows = [
        TrajectoryRow(
            iteration=0,
            outcome_class=(),
            caring_mass=Fraction(1),
            credences=dict(cred.priors),
        )
    ]
    k = len(outcomes)
    for it in range(1, trials + 1):
        for counts in _compositions(it, k):
            coeff = _multinomial(counts)
            mass: Number = Fraction(coeff)
            for outcome, c in zip(outcomes, counts):
                mass = mass * (step_mass[outcome] ** c)
            post: dict[str, Number] = {}
            norm: Number = Fraction(0)
            for theory, prior in cred.priors.items():
                w: Number = prior
                for outcome, c in zip(outcomes, counts):
                    w = w * (cred.likelihoods[theory][outcome] ** c)
                post[theory] = w
                norm = norm + w
            credences = {t: w / norm for t, w in post.items()}
            rows.append(
                TrajectoryRow(
                    iteration=it,
                    outcome_class=tuple(zip(outcomes, counts)),
                    caring_mass=mass,
                    credences=credences,
                )
            )
    return rows


def _compositions(total: int, parts: int):
    if parts == 1:
        yield (total,)
        return
    for head in range(total + 1):
        for rest in _compositions(total - head, parts - 1):
            yield (head,) + rest


def _multinomial(counts: Sequence[int]) -> int:
    out = 1
    seen = 0
    for c in counts:
        seen += c
        out *= math.comb(seen, c)
    return out


def _full_rows(
    cred: CredenceState,
    games: Sequence[tuple[QuantumGame, MeasurementRealization]],
    strategy: Strategy,
    trials: int,
) -> list[TrajectoryRow]:
    """Full path enumeration; paths with identical outcome counts stay separate
    until they are merged into class rows at the end of each iteration."""
    paths: list[tuple[tuple[float, ...], Number, CredenceState, bool]] = [
        ((), Fraction(1), cred, False)
    ]
    rows = [
        TrajectoryRow(
            iteration=0,
            outcome_class=(),
            caring_mass=Fraction(1),
            credences=dict(cred.priors),
        )
    ]
    all_outcomes = sorted(
        {x for game, realization in games for x in _step_caring(strategy, game, realization)}
    )
    for it in range(1, trials + 1):
        game, realization = games[(it - 1) % len(games)]
        step_mass = _step_caring(strategy, game, realization)
        new_paths = []
        for history, mass, state, frozen in paths:
            for outcome, m in sorted(step_mass.items()):
                if frozen:
                    new_state, now_frozen = state, True
                else:
                    try:
                        new_state = conditionalize(state, outcome)
                        now_frozen = False
                    except (ValueError, KeyError):
                        new_state, now_frozen = state, True
                new_paths.append((history + (outcome,), mass * m, new_state, now_frozen))
        paths = new_paths
        merged: dict[tuple, TrajectoryRow] = {}
        for history, mass, state, frozen in paths:
            counts = tuple((x, history.count(x)) for x in all_outcomes)
            key = (counts, tuple(sorted((t, float(v)) for t, v in state.priors.items())), frozen)
            if key in merged:
                prior_row = merged[key]
                merged[key] = replace(prior_row, caring_mass=prior_row.caring_mass + mass)
            else:
                merged[key] = TrajectoryRow(
                    iteration=it,
                    outcome_class=counts,
                    caring_mass=mass,
                    credences=dict(state.priors),
                    frozen=frozen,
                )
        rows.extend(merged[k] for k in sorted(merged, key=lambda k: (k[0], k[1], k[2])))
    return rows


def confirmation_experiment(
    cred: CredenceState,
    games: Sequence[tuple[QuantumGame, MeasurementRealization]] | QuantumGame,
    strategy: Strategy,
    trials: int,
    method: str = "auto",
) -> TrajectoryReport:
    """Iterate measurements, conditionalize on every branch, weigh by caring.

    games is a single game (measured directly) or a sequence of (game,
    realization) pairs cycled for the given number of trials.  The "classes"
    method collapses paths to outcome-count classes and applies only to a
    single repeated game with strictly positive likelihoods; "full"
    enumerates paths and is capped at small depth; "auto" picks classes when
    valid.  Branches where the observed outcome has zero prior probability
    are flagged frozen and their credences stop moving.
    """
    if isinstance(strategy, TablePreference):
        raise ValueError("a table preference has no caring measure to weigh branches with")
    if isinstance(games, QuantumGame):
        games = [(games, Direct())]
    games = list(games)
    if not games:
        raise ValueError("need at least one game")
    if trials < 0:
        raise ValueError("trials must be nonnegative")

    single = len(games) == 1
    outcomes_ok = True
    if single:
        step_mass = _step_caring(strategy, games[0][0], games[0][1])
        outcomes = sorted(step_mass)
        for theory in cred.theories():
            for x in outcomes:
                table = cred.likelihoods[theory]
                if x not in table or float(table[x]) <= 0.0:
                    outcomes_ok = False
    use_classes = method == "classes" or (method == "auto" and single and outcomes_ok)
    if method == "classes" and not (single and outcomes_ok):
        raise ValueError(
            "class enumeration needs a single repeated game and strictly positive likelihoods"
        )
    if use_classes:
        rows = _class_rows(cred, outcomes, step_mass, trials)
    else:
        per_step = max(len(_step_caring(strategy, g, r)) for g, r in games)
        if per_step ** trials > 200_000:
            raise ValueError("full enumeration too deep; use a single repeated game instead")
        rows = _full_rows(cred, games, strategy, trials)
    return TrajectoryReport(rows=tuple(rows), theories=cred.theories(), trials=trials)
