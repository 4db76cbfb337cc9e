"""Branch trees with squared-amplitude weights.

A measurement turns a game into a tree of decohered branches.  Each leaf
carries a total weight plus a row of fine-grained cells that stand in for
sub-branch structure.  Two knobs, small basis rotations and coarse-graining,
redistribute weight among cells without ever changing any outcome's total
weight.  They exist to make one point runnable: the number of branches above
a weight threshold is not a stable quantity, while the weight itself is.
"""

from __future__ import annotations

import math
import random
import warnings
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Union

from .games import (
    AncillaCoupled,
    Direct,
    MeasurementRealization,
    QuantumGame,
    born_weights,
    couple_ancilla,
)

Number = Union[int, float, Fraction]


@dataclass(frozen=True)
class BranchLeaf:
    outcome: float
    history: tuple[float, ...]
    weight: Number
    cells: tuple[Number, ...]

    def __post_init__(self) -> None:
        if not self.cells:
            raise ValueError("a leaf needs at least one cell")
        drift = abs(float(sum(self.cells)) - float(self.weight))
        if drift > 1e-9:
            raise ValueError(f"cells must sum to the leaf weight (off by {drift!r})")


@dataclass(frozen=True)
class BranchTree:
    leaves: tuple[BranchLeaf, ...]
    grain: float
    fine_dim: int

    def __post_init__(self) -> None:
        if self.grain <= 0:
            raise ValueError("grain threshold must be positive")
        if self.fine_dim < 1:
            raise ValueError("fine_dim must be at least 1")
        total = float(sum(leaf.weight for leaf in self.leaves))
        if abs(total - 1.0) > 1e-9:
            raise ValueError(f"leaf weights must sum to 1, got {total!r}")
        for leaf in self.leaves:
            if len(leaf.cells) != self.fine_dim:
                raise ValueError("every leaf must carry fine_dim cells")


@dataclass(frozen=True)
class RotationConfig:
    """A small rotation of the fine-grained decomposition.

    With an explicit pair_schedule the same cell pairs are mixed in every
    leaf.  With pair_schedule=None, a per-leaf schedule of fine_dim pairs is
    drawn deterministically from the seed, which is what lets occupied-cell
    counts drift apart between outcomes.
    """

    epsilon: float
    pair_schedule: tuple[tuple[int, int], ...] | None = None
    seed: int = 0

    def __post_init__(self) -> None:
        if not abs(self.epsilon) < 0.1:
            raise ValueError("rotation angle must satisfy |epsilon| < 0.1")
        if self.pair_schedule is not None:
            object.__setattr__(
                self, "pair_schedule", tuple((int(i), int(j)) for i, j in self.pair_schedule)
            )


def _fresh_cells(weight: Number, fine_dim: int) -> tuple[Number, ...]:
    # All weight sits in cell 0 until a rotation spreads it.
    zero = Fraction(0) if isinstance(weight, Fraction) else 0.0
    return (weight,) + (zero,) * (fine_dim - 1)


def branch(
    game: QuantumGame,
    realization: MeasurementRealization,
    fine_dim: int = 1,
    grain: float = 1e-9,
) -> BranchTree:
    """Decohere a game into a branch tree under the given realization.

    Direct measurement yields one leaf per eigenvalue at its squared-amplitude
    weight.  Ancilla coupling yields N leaves of equal per-register weight,
    grouped back to the original eigenvalues.
    """
    if fine_dim < 1:
        raise ValueError("fine_dim must be at least 1")
    from .games import validate_game

    problems = validate_game(game)
    if problems:
        raise ValueError("invalid game: " + "; ".join(problems))
    if isinstance(realization, Direct):
        weights = born_weights(game)
        leaves = tuple(
            BranchLeaf(outcome=x, history=(), weight=w, cells=_fresh_cells(w, fine_dim))
            for x, w in sorted(weights.items())
        )
    elif isinstance(realization, AncillaCoupled):
        joint, register, grouping = couple_ancilla(game, realization.n, realization.N)
        leaves = tuple(
            BranchLeaf(
                outcome=grouping[label],
                history=(),
                weight=amp.abs2,
                cells=_fresh_cells(amp.abs2, fine_dim),
            )
            for label, amp in zip(joint.basis_labels, joint.amplitudes)
        )
    else:
        raise ValueError(f"unsupported realization {realization!r} for this game shape")
    return BranchTree(leaves=leaves, grain=grain, fine_dim=fine_dim)


def outcome_weights(tree: BranchTree) -> dict[float, Number]:
    """Total weight per outcome, summed over leaves."""
    totals: dict[float, Number] = {}
    for leaf in tree.leaves:
        totals[leaf.outcome] = totals.get(leaf.outcome, Fraction(0)) + leaf.weight
    return totals


def count_branches(tree: BranchTree, outcome: float) -> int:
    """Number of cells above the tree's grain threshold for this outcome."""
    known = {leaf.outcome for leaf in tree.leaves}
    if outcome not in known:
        warnings.warn(f"outcome {outcome!r} not present in tree; count is 0", stacklevel=2)
        return 0
    return sum(
        1
        for leaf in tree.leaves
        if leaf.outcome == outcome
        for c in leaf.cells
        if float(c) > tree.grain
    )


def _leaf_pairs(config: RotationConfig, fine_dim: int, rng: random.Random) -> list[tuple[int, int]]:
    if config.pair_schedule is not None:
        return list(config.pair_schedule)
    pairs = []
    for _ in range(fine_dim):
        i = rng.randrange(fine_dim)
        j = rng.randrange(fine_dim - 1)
        if j >= i:
            j += 1
        pairs.append((i, j))
    return pairs


def rotate_basis(tree: BranchTree, config: RotationConfig) -> BranchTree:
    """Mix scheduled cell pairs within each leaf by the angle epsilon.

    The mixing acts on square roots of the cell weights (the nonnegative
    root; relative sign is not tracked), so each leaf's total weight is
    preserved by construction and cells never mix across outcomes.
    """
    if config.epsilon == 0:
        return tree
    if tree.fine_dim < 2:
        raise ValueError("rotation needs at least two cells per leaf")
    cos_e, sin_e = math.cos(config.epsilon), math.sin(config.epsilon)
    rng = random.Random(config.seed)
    new_leaves = []
    for leaf in tree.leaves:
        pairs = _leaf_pairs(config, tree.fine_dim, rng)
        cells = [float(c) for c in leaf.cells]
        for i, j in pairs:
            if not (0 <= i < tree.fine_dim and 0 <= j < tree.fine_dim) or i == j:
                raise ValueError(f"bad cell pair ({i}, {j}) for fine_dim {tree.fine_dim}")
            a, b = math.sqrt(cells[i]), math.sqrt(cells[j])
            cells[i] = (a * cos_e - b * sin_e) ** 2
            cells[j] = (a * sin_e + b * cos_e) ** 2
        new_leaves.append(replace(leaf, cells=tuple(cells)))
    return replace(tree, leaves=tuple(new_leaves))


def coarse_grain(tree: BranchTree, factor: int) -> BranchTree:
    """Merge consecutive cell groups of the given size by summing weights."""
    if factor < 1 or tree.fine_dim % factor != 0:
        raise ValueError(f"factor {factor} does not divide fine_dim {tree.fine_dim}")
    if factor == 1:
        return tree
    new_dim = tree.fine_dim // factor
    new_leaves = []
    for leaf in tree.leaves:
        cells = tuple(
            sum(leaf.cells[k * factor:(k + 1) * factor], Fraction(0)) for k in range(new_dim)
        )
        new_leaves.append(replace(leaf, cells=cells))
    return BranchTree(leaves=tuple(new_leaves), grain=tree.grain, fine_dim=new_dim)


def extend(
    tree: BranchTree,
    game: QuantumGame,
    realization: MeasurementRealization,
    fine_dim: int | None = None,
) -> BranchTree:
    """Measure again on every leaf: weights multiply, histories grow.

    Each existing leaf becomes the root of a fresh measurement; its own cell
    structure collapses into the leaf weight.
    """
    step = branch(game, realization, fine_dim=fine_dim or tree.fine_dim, grain=tree.grain)
    new_leaves = []
    for leaf in tree.leaves:
        for child in step.leaves:
            w = leaf.weight * child.weight
            new_leaves.append(
                BranchLeaf(
                    outcome=child.outcome,
                    history=leaf.history + (leaf.outcome,),
                    weight=w,
                    cells=_fresh_cells(w, step.fine_dim),
                )
            )
    return BranchTree(leaves=tuple(new_leaves), grain=tree.grain, fine_dim=step.fine_dim)


def tree_to_csv(tree: BranchTree) -> str:
    """One row per (leaf, cell): outcome, history, cell_index, weight.

    Rows are ordered by (history, outcome, cell_index) so dumps are
    deterministic.
    """
    import csv
    import io as _io

    buf = _io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["outcome", "history", "cell_index", "weight"])
    ordered = sorted(tree.leaves, key=lambda leaf: (leaf.history, leaf.outcome))
    for leaf in ordered:
        history = "|".join(repr(float(h)) for h in leaf.history)
        for idx, cell in enumerate(leaf.cells):
            writer.writerow([repr(float(leaf.outcome)), history, idx, repr(float(cell))])
    return buf.getvalue()
