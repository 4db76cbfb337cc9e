"""Finite decision kernel: states, consequences, acts and preferences.

An act maps states to consequences; a preference relation is a total
comparison over a finite act set.  The kernel evaluates acts by
probability-weighted utility, checks the two rationality axioms used here
(transitivity and dominance), compares events qualitatively through
constant-act bets, and inverts the whole construction: given an ordering, it
searches for a probability vector and a utility assignment whose expected
utilities reproduce the ordering exactly.
"""

from __future__ import annotations

import itertools
import json
import random
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterable, Mapping, Sequence, Union

import numpy as np
from scipy.optimize import linprog

Number = Union[int, float, Fraction]

TIE_TOL = 1e-9


@dataclass(frozen=True)
class Setup:
    """A finite decision situation: either a chance setup (one state obtains,
    unknown which) or a fission setup (every state is realized on a branch)."""

    kind: str
    states: tuple[str, ...]
    consequences: tuple[str, ...]

    def __post_init__(self) -> None:
        if self.kind not in ("chance", "fission"):
            raise ValueError("setup kind must be 'chance' or 'fission'")
        if not self.states or not self.consequences:
            raise ValueError("setup needs at least one state and one consequence")
        if len(set(self.states)) != len(self.states):
            raise ValueError("states must be distinct")
        if len(set(self.consequences)) != len(self.consequences):
            raise ValueError("consequences must be distinct")


@dataclass(frozen=True)
class Act:
    """A total assignment of consequences to states, stored sorted by state."""

    assignment: tuple[tuple[str, str], ...]

    @classmethod
    def from_mapping(cls, mapping: Mapping[str, str]) -> "Act":
        return cls(tuple(sorted(mapping.items())))

    @classmethod
    def constant(cls, setup: Setup, consequence: str) -> "Act":
        return cls.from_mapping({s: consequence for s in setup.states})

    def mapping(self) -> dict[str, str]:
        return dict(self.assignment)

    def consequence_for(self, state: str) -> str:
        for s, c in self.assignment:
            if s == state:
                return c
        raise KeyError(f"act does not cover state {state!r}")

    def is_total_on(self, states: Sequence[str]) -> bool:
        return {s for s, _ in self.assignment} == set(states)


@dataclass(frozen=True)
class Representation:
    """A probability over states plus a utility over consequences."""

    probability: Mapping[str, Number]
    utility: Mapping[str, Number]

    def __post_init__(self) -> None:
        total = float(sum(self.probability.values()))
        if abs(total - 1.0) > 1e-9:
            raise ValueError(f"probabilities must sum to 1, got {total!r}")
        if any(float(p) < -1e-12 for p in self.probability.values()):
            raise ValueError("probabilities must be nonnegative")


@dataclass(frozen=True)
class Infeasible:
    """No probability-utility pair reproduces the ordering; witness shows a
    pair of acts whose stated comparison the best candidate still gets wrong."""

    witness: tuple[Act, Act]
    detail: str = ""


class Comparison(Enum):
    HIGHER_OR_EQUAL = "higher-or-equal"
    LOWER = "lower"
    INCOMPARABLE = "incomparable"


@dataclass(frozen=True)
class AxiomViolation:
    kind: str
    acts: tuple[Act, ...]
    detail: str


class AxiomError(ValueError):
    """Raised when an operation requires axiom-consistent preferences."""

    def __init__(self, violations: Sequence[AxiomViolation]):
        self.violations = tuple(violations)
        super().__init__(f"{len(self.violations)} axiom violation(s): {self.violations[0].detail}")


@dataclass(frozen=True)
class PreferenceRelation:
    """A reflexive, total comparison over a finite act list.

    weak contains index pairs (i, j) meaning act i is weakly preferred to
    act j.  Totality is enforced at construction; transitivity is not, so
    that inconsistent inputs can be represented and then diagnosed.
    """

    setup: Setup
    acts: tuple[Act, ...]
    weak: frozenset[tuple[int, int]]

    def __post_init__(self) -> None:
        n = len(self.acts)
        if len(set(self.acts)) != n:
            raise ValueError("acts must be distinct")
        for act in self.acts:
            if not act.is_total_on(self.setup.states):
                raise ValueError(f"act {act} is not total on the setup's states")
        pairs = set(self.weak)
        pairs.update((i, i) for i in range(n))
        for i in range(n):
            for j in range(i + 1, n):
                if (i, j) not in pairs and (j, i) not in pairs:
                    raise ValueError(
                        f"relation must be total: acts {i} and {j} are not compared"
                    )
        object.__setattr__(self, "weak", frozenset(pairs))

    @classmethod
    def from_tiers(cls, setup: Setup, tiers: Sequence[Sequence[Act]]) -> "PreferenceRelation":
        """Build from a best-first list of indifference tiers."""
        acts: list[Act] = [act for tier in tiers for act in tier]
        level = {}
        for rank, tier in enumerate(tiers):
            for act in tier:
                level[act] = rank
        weak = frozenset(
            (i, j)
            for i, a in enumerate(acts)
            for j, b in enumerate(acts)
            if level[a] <= level[b]
        )
        return cls(setup, tuple(acts), weak)

    @classmethod
    def from_pairs(
        cls,
        setup: Setup,
        acts: Sequence[Act],
        weak_pairs: Iterable[tuple[Act, Act]],
    ) -> "PreferenceRelation":
        acts = tuple(acts)
        index = {act: i for i, act in enumerate(acts)}
        weak = frozenset((index[a], index[b]) for a, b in weak_pairs)
        return cls(setup, acts, weak)

    def index_of(self, act: Act) -> int | None:
        try:
            return self.acts.index(act)
        except ValueError:
            return None

    def contains(self, act: Act) -> bool:
        return act in self.acts

    def holds(self, a: Act, b: Act) -> bool:
        """a is weakly preferred to b."""
        i, j = self.index_of(a), self.index_of(b)
        if i is None or j is None:
            raise KeyError("both acts must be listed in the relation")
        return (i, j) in self.weak

    def strictly(self, a: Act, b: Act) -> bool:
        return self.holds(a, b) and not self.holds(b, a)

    def indifferent(self, a: Act, b: Act) -> bool:
        return self.holds(a, b) and self.holds(b, a)

    def ranks(self) -> list[int]:
        """For each act, the number of acts strictly preferred to it."""
        n = len(self.acts)
        out = []
        for i in range(n):
            out.append(
                sum(1 for j in range(n) if (j, i) in self.weak and (i, j) not in self.weak)
            )
        return out

    def tiers(self) -> list[list[Act]]:
        """Indifference classes, best first.  Requires consistency."""
        violations = check_axioms(self)
        if violations:
            raise AxiomError(violations)
        ranks = self.ranks()
        buckets: dict[int, list[Act]] = {}
        for act, r in zip(self.acts, ranks):
            buckets.setdefault(r, []).append(act)
        return [sorted(buckets[r], key=lambda a: a.assignment) for r in sorted(buckets)]


def all_acts(setup: Setup) -> tuple[Act, ...]:
    """Every function from states to consequences, in deterministic order."""
    count = len(setup.consequences) ** len(setup.states)
    if count > 100_000:
        raise ValueError(f"act space too large to enumerate ({count})")
    acts = []
    for combo in itertools.product(setup.consequences, repeat=len(setup.states)):
        acts.append(Act.from_mapping(dict(zip(setup.states, combo))))
    return tuple(acts)


def all_events(setup: Setup) -> tuple[frozenset[str], ...]:
    """The power set of the state space (capped at 12 states)."""
    if len(setup.states) > 12:
        raise ValueError("event enumeration is capped at 12 states")
    out = []
    for r in range(len(setup.states) + 1):
        for combo in itertools.combinations(setup.states, r):
            out.append(frozenset(combo))
    return tuple(out)


def expected_utility(act: Act, rep: Representation) -> Number:
    """Probability-weighted utility of the act's consequences.

    Exact when the representation is rational-valued.
    """
    total: Number = Fraction(0)
    for state, p in rep.probability.items():
        c = act.consequence_for(state)
        if c not in rep.utility:
            raise KeyError(f"no utility for consequence {c!r}")
        total = total + p * rep.utility[c]
    return total


def generate_preferences(
    setup: Setup,
    rep: Representation,
    acts: Sequence[Act] | None = None,
) -> PreferenceRelation:
    """The ordering induced by expected utility, as a tier list.

    This is the forward direction used as an independent oracle for the
    extraction round trip: EUs are computed for every act and sorted, with
    ties grouped at TIE_TOL.
    """
    acts = tuple(acts) if acts is not None else all_acts(setup)
    scored = sorted(
        ((expected_utility(act, rep), act) for act in acts),
        key=lambda pair: (-float(pair[0]), pair[1].assignment),
    )
    tiers: list[list[Act]] = []
    last_eu: Number | None = None
    for eu, act in scored:
        if last_eu is not None and abs(float(last_eu) - float(eu)) <= TIE_TOL:
            tiers[-1].append(act)
        else:
            tiers.append([act])
        last_eu = eu
    return PreferenceRelation.from_tiers(setup, tiers)


def check_axioms(prefs: PreferenceRelation) -> list[AxiomViolation]:
    """Transitivity and dominance violations; empty list means consistent."""
    violations: list[AxiomViolation] = []
    n = len(prefs.acts)
    weak = prefs.weak
    ranks = prefs.ranks()

    consistent = all(
        ((i, j) in weak) == (ranks[i] <= ranks[j]) for i in range(n) for j in range(n)
    )
    if not consistent:
        # Slow scan, only reached on genuinely intransitive input.
        for i, j, k in itertools.product(range(n), repeat=3):
            if (i, j) in weak and (j, k) in weak and (i, k) not in weak:
                a, b, c = prefs.acts[i], prefs.acts[j], prefs.acts[k]
                violations.append(
                    AxiomViolation(
                        kind="transitivity",
                        acts=(a, b, c),
                        detail=(
                            f"{a.mapping()} >= {b.mapping()} and {b.mapping()} >= "
                            f"{c.mapping()} but not {a.mapping()} >= {c.mapping()}"
                        ),
                    )
                )

    # Dominance is judged against the ordering of constant acts, where listed.
    cons_pref: dict[tuple[str, str], bool] = {}
    for c, d in itertools.product(prefs.setup.consequences, repeat=2):
        ic = prefs.index_of(Act.constant(prefs.setup, c))
        id_ = prefs.index_of(Act.constant(prefs.setup, d))
        if ic is not None and id_ is not None:
            cons_pref[(c, d)] = (ic, id_) in weak
    for i, j in itertools.product(range(n), repeat=2):
        if i == j:
            continue
        a, b = prefs.acts[i], prefs.acts[j]
        statewise = [
            cons_pref.get((a.consequence_for(s), b.consequence_for(s)))
            for s in prefs.setup.states
        ]
        if all(v is True for v in statewise):
            # a weakly dominates b; b must not be strictly preferred.
            if (j, i) in weak and (i, j) not in weak:
                violations.append(
                    AxiomViolation(
                        kind="dominance",
                        acts=(a, b),
                        detail=(
                            f"{a.mapping()} gives weakly preferred consequences on every "
                            f"state yet {b.mapping()} is strictly preferred"
                        ),
                    )
                )
    return violations


def qualitative_probability(
    prefs: PreferenceRelation,
    event_a: Iterable[str],
    event_b: Iterable[str],
) -> Comparison:
    """Compare two events through constant-act bets.

    With constant acts c1 weakly preferred to c2, event A counts at least as
    probable as event B exactly when the act paying c1 on A and c2 elsewhere
    is weakly preferred to the act paying c1 on B and c2 elsewhere.  Returns
    INCOMPARABLE when the relation does not list the acts needed to run the
    comparison.
    """
    ea = frozenset(event_a)
    eb = frozenset(event_b)
    states = set(prefs.setup.states)
    if not ea <= states or not eb <= states:
        raise ValueError("events must be subsets of the setup's states")
    if ea == eb:
        return Comparison.HIGHER_OR_EQUAL

    for c1, c2 in itertools.permutations(prefs.setup.consequences, 2):
        const1 = Act.constant(prefs.setup, c1)
        const2 = Act.constant(prefs.setup, c2)
        if not (prefs.contains(const1) and prefs.contains(const2)):
            continue
        if not prefs.strictly(const1, const2):
            continue
        bet_a = Act.from_mapping({s: (c1 if s in ea else c2) for s in prefs.setup.states})
        bet_b = Act.from_mapping({s: (c1 if s in eb else c2) for s in prefs.setup.states})
        if not (prefs.contains(bet_a) and prefs.contains(bet_b)):
            continue
        if prefs.holds(bet_a, bet_b):
            return Comparison.HIGHER_OR_EQUAL
        return Comparison.LOWER
    return Comparison.INCOMPARABLE


# -- Representation extraction -------------------------------------------------


_LP_OPTIONS = {
    "primal_feasibility_tolerance": 1e-10,
    "dual_feasibility_tolerance": 1e-10,
}


def _pair_matrix(a: Act, b: Act, states: Sequence[str], consequences: Sequence[str]) -> np.ndarray:
    """M[s, c] = [a(s) = c] - [b(s) = c]; EU(a) - EU(b) = p @ M @ u."""
    cidx = {c: k for k, c in enumerate(consequences)}
    M = np.zeros((len(states), len(consequences)))
    for si, s in enumerate(states):
        M[si, cidx[a.consequence_for(s)]] += 1.0
        M[si, cidx[b.consequence_for(s)]] -= 1.0
    return M


def _maximize_margin(c, A_ub, b_ub, A_eq, b_eq, bounds):
    res = linprog(
        c,
        A_ub=A_ub if A_ub is not None and len(A_ub) else None,
        b_ub=b_ub if A_ub is not None and len(A_ub) else None,
        A_eq=A_eq if A_eq is not None and len(A_eq) else None,
        b_eq=b_eq if A_eq is not None and len(A_eq) else None,
        bounds=bounds,
        method="highs",
        options=_LP_OPTIONS,
    )
    return res


class _Extractor:
    """Deterministic max-margin search shared by the public entry point.

    Strict tier constraints are stacked into a (K, ns, nc) tensor so that
    fixing either block reduces each constraint to a dot product.  The search
    ladder: alternation seeded by a rank-one relaxation in the monomials
    p_s * u_c, alternation from uniform p, then coarse-to-fine grids over the
    free utility classes, polishing every seed with alternating LPs.
    """

    def __init__(self, setup, tiers):
        self.states = setup.states
        self.consequences = setup.consequences
        self.ns, self.nc = len(self.states), len(self.consequences)
        self.tiers = tiers
        tier_of = {act: k for k, tier in enumerate(tiers) for act in tier}
        self.cons_class = {c: tier_of[Act.constant(setup, c)] for c in self.consequences}
        self.class_levels = sorted(set(self.cons_class.values()))
        self.class_members = [
            [k for k, c in enumerate(self.consequences) if self.cons_class[c] == lev]
            for lev in self.class_levels
        ]
        self.top = self.class_members[0]
        self.bottom = self.class_members[-1]
        self.strict_pairs = [
            (tiers[k][0], tiers[k + 1][0]) for k in range(len(tiers) - 1)
        ]
        self.S = np.stack(
            [_pair_matrix(a, b, self.states, self.consequences) for a, b in self.strict_pairs]
        )
        self.tie_pairs = []
        ties = []
        for tier in tiers:
            for other in tier[1:]:
                self.tie_pairs.append((tier[0], other))
                ties.append(_pair_matrix(tier[0], other, self.states, self.consequences))
        self.T = np.stack(ties) if ties else np.zeros((0, self.ns, self.nc))

    def probability_lp(self, u):
        """Maximize the minimum strict gap over p with u fixed."""
        coeff = self.S @ u  # (K, ns)
        A_ub = np.hstack([-coeff, np.ones((coeff.shape[0], 1))])
        eq_rows = [np.concatenate([np.ones(self.ns), [0.0]])]
        if len(self.T):
            tie_coeff = self.T @ u
            eq_rows += [np.concatenate([row, [0.0]]) for row in tie_coeff]
        A_eq = np.vstack(eq_rows)
        b_eq = np.zeros(len(eq_rows))
        b_eq[0] = 1.0
        bounds = [(0.0, 1.0)] * self.ns + [(-2.0, 2.0)]
        res = _maximize_margin(
            [0.0] * self.ns + [-1.0], A_ub, np.zeros(len(A_ub)), A_eq, b_eq, bounds
        )
        if not res.success:
            return None, -np.inf
        return res.x[: self.ns], res.x[self.ns]

    def utility_lp(self, p):
        """Maximize the minimum strict gap over u with p fixed."""
        coeff = np.einsum("s,ksc->kc", p, self.S)
        A_ub = np.hstack([-coeff, np.ones((coeff.shape[0], 1))])
        eq_rows, b_eq = [], []
        if len(self.T):
            tie_coeff = np.einsum("s,ksc->kc", p, self.T)
            for row in tie_coeff:
                eq_rows.append(np.concatenate([row, [0.0]]))
                b_eq.append(0.0)
        for k in self.top:
            row = np.zeros(self.nc + 1)
            row[k] = 1.0
            eq_rows.append(row)
            b_eq.append(1.0)
        for k in self.bottom:
            row = np.zeros(self.nc + 1)
            row[k] = 1.0
            eq_rows.append(row)
            b_eq.append(0.0)
        bounds = [(0.0, 1.0)] * self.nc + [(-2.0, 2.0)]
        res = _maximize_margin(
            [0.0] * self.nc + [-1.0],
            A_ub,
            np.zeros(len(A_ub)),
            np.vstack(eq_rows),
            np.array(b_eq),
            bounds,
        )
        if not res.success:
            return None, -np.inf
        return res.x[: self.nc], res.x[self.nc]

    def alternate_from_u(self, u0, rounds=40):
        u = np.asarray(u0, dtype=float)
        best = (None, None, -np.inf)
        for _ in range(rounds):
            p, _ = self.probability_lp(u)
            if p is None:
                break
            u_new, t_u = self.utility_lp(p)
            if u_new is None:
                break
            if t_u > best[2]:
                best = (p, u_new, t_u)
            elif t_u <= best[2] + 1e-12:
                break
            u = u_new
        return best

    def alternate_from_p(self, p0, rounds=40):
        u, _ = self.utility_lp(np.asarray(p0, dtype=float))
        if u is None:
            return (None, None, -np.inf)
        return self.alternate_from_u(u, rounds=rounds)

    def relaxation_seed(self):
        """One LP over z[s, c] ~ p_s * u_c with the rank-one coupling relaxed.

        Every EU constraint is exactly linear in z, so only the cross-state
        proportionality of columns is lost; the projected (p, u) is usually
        close to a feasible pair and makes a strong alternation seed.
        """
        ns, nc = self.ns, self.nc
        nz = ns * nc
        A_ub_rows, A_eq_rows, b_eq = [], [], []
        for M in self.S:
            A_ub_rows.append(np.concatenate([-M.flatten(), [1.0]]))
        for M in self.T:
            A_eq_rows.append(np.concatenate([M.flatten(), [0.0]]))
            b_eq.append(0.0)
        for c in self.bottom:
            for s in range(ns):
                row = np.zeros(nz + 1)
                row[s * nc + c] = 1.0
                A_eq_rows.append(row)
                b_eq.append(0.0)
        for c in self.top:
            row = np.zeros(nz + 1)
            for s in range(ns):
                row[s * nc + c] = 1.0
            A_eq_rows.append(row)
            b_eq.append(1.0)
        for group in self.class_members:
            for other in group[1:]:
                for s in range(ns):
                    row = np.zeros(nz + 1)
                    row[s * nc + group[0]] = 1.0
                    row[s * nc + other] = -1.0
                    A_eq_rows.append(row)
                    b_eq.append(0.0)
        for g1, g2 in zip(self.class_members, self.class_members[1:]):
            for s in range(ns):
                row = np.zeros(nz + 1)
                row[s * nc + g1[0]] = -1.0
                row[s * nc + g2[0]] = 1.0
                A_ub_rows.append(row)
        bounds = [(0.0, 1.0)] * nz + [(-2.0, 2.0)]
        c_obj = np.zeros(nz + 1)
        c_obj[nz] = -1.0
        res = _maximize_margin(
            c_obj,
            np.vstack(A_ub_rows),
            np.zeros(len(A_ub_rows)),
            np.vstack(A_eq_rows) if A_eq_rows else None,
            np.array(b_eq) if b_eq else None,
            bounds,
        )
        if not res.success:
            return None, None
        z = res.x[:nz].reshape(ns, nc)
        p = np.clip(z[:, self.top[0]], 0.0, None)
        p = p / p.sum() if p.sum() > 0 else np.full(ns, 1.0 / ns)
        return p, z.sum(axis=0)

    def class_u(self, middle_values):
        """Expand per-class utility levels (middles only) to consequences."""
        levels = [1.0] + list(middle_values) + [0.0]
        u = np.zeros(self.nc)
        for level, members in zip(levels, self.class_members):
            for k in members:
                u[k] = level
        return u

    def middle_grids(self, step_counts):
        """Deterministic grids over the free (middle) utility classes."""
        free = len(self.class_members) - 2
        if free <= 0:
            return
        for steps in step_counts:
            ticks = [k / steps for k in range(1, steps)]
            for combo in itertools.combinations(reversed(ticks), free):
                yield combo

    def search(self):
        p_uniform = np.full(self.ns, 1.0 / self.ns)
        p_relax, u_relax = self.relaxation_seed()
        seeds = []
        if u_relax is not None:
            seeds.append(lambda: self.alternate_from_u(u_relax))
        seeds.append(lambda: self.alternate_from_p(p_uniform))
        if p_relax is not None:
            seeds.append(lambda: self.alternate_from_p(p_relax))

        best = (None, None, -np.inf)
        for run in seeds:
            cand = run()
            if cand[2] > best[2]:
                best = cand
            if best[2] > 1e-9:
                return best

        # Grid over the free utility classes, coarse to fine, polishing the
        # most promising points.  The probability LP is global in p, so only
        # u needs covering.
        for middles in self.middle_grids((8, 20)):
            u0 = self.class_u(middles)
            p, t = self.probability_lp(u0)
            if t > best[2]:
                cand = self.alternate_from_u(u0)
                if cand[2] > best[2]:
                    best = cand
            if best[2] > 1e-9:
                return best

        # Local refinement around the best utility seen so far.
        if best[1] is not None and len(self.class_members) > 2:
            mid_idx = [g[0] for g in self.class_members[1:-1]]
            center = [best[1][k] for k in mid_idx]
            offsets = [-0.04, -0.02, -0.01, 0.0, 0.01, 0.02, 0.04]
            for combo in itertools.product(offsets, repeat=len(center)):
                middles = tuple(
                    min(0.999, max(0.001, c + d)) for c, d in zip(center, combo)
                )
                if any(a <= b for a, b in zip(middles, middles[1:])):
                    continue
                cand = self.alternate_from_u(self.class_u(middles))
                if cand[2] > best[2]:
                    best = cand
                if best[2] > 1e-9:
                    return best
        return best


def extract_representation(prefs: PreferenceRelation) -> Representation | Infeasible:
    """Search for a probability and utility whose EU ordering reproduces prefs.

    The EU constraints are bilinear in (p, u), so the search alternates two
    linear programs, each maximizing the minimum strict gap with the other
    block held fixed, seeded by a rank-one relaxation and refined over
    deterministic utility grids when alternation stalls.  The result is the
    first positive-margin point found under that fixed schedule, with
    utilities normalized to [0, 1]; the worked two-state case lands on the
    max-margin center of its feasible region.  If the best candidate still
    misorders some pair, that pair is returned as an infeasibility witness.
    """
    violations = check_axioms(prefs)
    if violations:
        raise AxiomError(violations)
    setup = prefs.setup
    for c in setup.consequences:
        if not prefs.contains(Act.constant(setup, c)):
            raise ValueError(f"extraction needs the constant act for {c!r} to be listed")

    tiers = prefs.tiers()
    states, consequences = setup.states, setup.consequences
    ns = len(states)

    if len(tiers) == 1:
        return Representation(
            probability={s: 1.0 / ns for s in states},
            utility={c: 0.0 for c in consequences},
        )

    extractor = _Extractor(setup, tiers)
    if len(extractor.class_levels) == 1:
        # Every consequence is equally good, yet some acts are strictly
        # ranked: no utility assignment can separate them.
        return Infeasible(
            witness=(tiers[0][0], tiers[1][0]),
            detail="all consequences are indifferent but the act ordering is strict",
        )

    p, u, margin = extractor.search()
    if p is not None and margin > 0.0:
        # Canonical tie-break: when the probability block is slack (as with
        # constant-acts-only input), prefer the uniform point.
        uniform = np.full(len(states), 1.0 / len(states))
        strict_at_uniform = (extractor.S @ u) @ uniform
        ties_at_uniform = (extractor.T @ u) @ uniform if len(extractor.T) else np.zeros(0)
        if (
            strict_at_uniform.size
            and strict_at_uniform.min() >= margin - 1e-12
            and (not ties_at_uniform.size or np.abs(ties_at_uniform).max() <= 1e-12)
        ):
            p = uniform
    if p is None or margin <= 0.0:
        witness = extractor.strict_pairs[0]
        if p is not None and u is not None:
            for (a, b), M in zip(extractor.strict_pairs, extractor.S):
                if float(p @ M @ u) <= 0.0:
                    witness = (a, b)
                    break
        return Infeasible(
            witness=witness,
            detail=f"no positive-margin representation found (best margin {margin!r})",
        )

    rep = Representation(
        probability={s: float(max(p[i], 0.0)) for i, s in enumerate(states)},
        utility={c: float(u[k]) for k, c in enumerate(consequences)},
    )

    # Confirm the candidate reproduces the stated ordering before returning it.
    for (a, b) in extractor.strict_pairs:
        if not float(expected_utility(a, rep)) > float(expected_utility(b, rep)):
            return Infeasible(witness=(a, b), detail="candidate misorders a strict pair")
    for (a, b) in extractor.tie_pairs:
        if abs(float(expected_utility(a, rep)) - float(expected_utility(b, rep))) > TIE_TOL:
            return Infeasible(witness=(a, b), detail="candidate breaks a stated tie")
    return rep


# -- Round-trip sweep (oracle: brute-force pairwise EU comparison) -------------


def random_representation(rng: random.Random, ns: int, nc: int) -> tuple[Setup, Representation]:
    setup = Setup(
        kind="fission",
        states=tuple(f"s{i}" for i in range(1, ns + 1)),
        consequences=tuple(f"c{i}" for i in range(1, nc + 1)),
    )
    raw = [rng.randrange(1, 60) for _ in range(ns)]
    total = sum(raw)
    probability = {s: Fraction(k, total) for s, k in zip(setup.states, raw)}
    utility = {c: Fraction(rng.randrange(-40, 41), rng.randrange(1, 7)) for c in setup.consequences}
    return setup, Representation(probability=probability, utility=utility)


def representation_roundtrip_sweep(
    count: int,
    seed: int = 0,
    max_states: int = 4,
    max_consequences: int = 4,
) -> list[dict]:
    """Generate orderings from random rational (p, u), re-extract, and compare.

    Instances are resampled until every act has a distinct exact EU, so the
    generated ordering is strict.  Success means the extracted representation
    reproduces the full ordering under brute-force pairwise comparison.
    """
    rng = random.Random(seed)
    results = []
    for trial in range(count):
        while True:
            ns = rng.randrange(2, max_states + 1)
            nc = rng.randrange(2, max_consequences + 1)
            setup, rep = random_representation(rng, ns, nc)
            acts = all_acts(setup)
            eus = [expected_utility(a, rep) for a in acts]
            if len(set(eus)) == len(eus):
                break
        prefs = generate_preferences(setup, rep)
        extracted = extract_representation(prefs)
        ok = isinstance(extracted, Representation) and orderings_match(prefs, extracted)
        results.append(
            {
                "trial": trial,
                "states": ns,
                "consequences": nc,
                "acts": len(acts),
                "ok": ok,
            }
        )
    return results


def orderings_match(prefs: PreferenceRelation, rep: Representation) -> bool:
    """Brute-force check that rep's EU comparisons agree with prefs on all pairs."""
    eus = [float(expected_utility(act, rep)) for act in prefs.acts]
    weak = prefs.weak
    n = len(prefs.acts)
    for i in range(n):
        for j in range(i + 1, n):
            i_over_j = (i, j) in weak
            j_over_i = (j, i) in weak
            if i_over_j and j_over_i:
                if abs(eus[i] - eus[j]) > TIE_TOL:
                    return False
            elif i_over_j:
                if not eus[i] > eus[j]:
                    return False
            elif j_over_i:
                if not eus[j] > eus[i]:
                    return False
    return True


# -- JSON wire format -----------------------------------------------------------


def preferences_to_json_dict(prefs: PreferenceRelation) -> dict:
    tiers = prefs.tiers()
    return {
        "setup": {
            "kind": prefs.setup.kind,
            "states": list(prefs.setup.states),
            "consequences": list(prefs.setup.consequences),
        },
        "tiers": [[act.mapping() for act in tier] for tier in tiers],
    }


def preferences_from_json_dict(doc) -> PreferenceRelation:
    """Accepts either {"setup": ..., "tiers": ...} or a bare tier list."""
    if isinstance(doc, list):
        tiers_raw = doc
        states = sorted({s for tier in doc for act in tier for s in act})
        consequences = sorted({c for tier in doc for act in tier for c in act.values()})
        setup = Setup(kind="fission", states=tuple(states), consequences=tuple(consequences))
    else:
        tiers_raw = doc["tiers"]
        setup = Setup(
            kind=doc["setup"].get("kind", "fission"),
            states=tuple(doc["setup"]["states"]),
            consequences=tuple(doc["setup"]["consequences"]),
        )
    tiers = [[Act.from_mapping(act) for act in tier] for tier in tiers_raw]
    return PreferenceRelation.from_tiers(setup, tiers)


def preferences_from_json(text: str) -> PreferenceRelation:
    return preferences_from_json_dict(json.loads(text))


def representation_to_json_dict(rep: Representation) -> dict:
    return {
        "probability": {s: float(p) for s, p in rep.probability.items()},
        "utility": {c: float(u) for c, u in rep.utility.items()},
    }
