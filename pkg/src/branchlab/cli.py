"""Command-line front end.

One binary, subcommand style.  Every run is a pure function of its arguments
and input files: fixed seeds drive all sweeps, and output bytes are stable
across runs.  Exit codes: 0 on success or a passing check, 1 on a failed
check, 2 on usage or validation errors.
"""

from __future__ import annotations

import json
import math
import os
from fractions import Fraction

import click

from .confirmation import (
    CredenceState,
    Deviant,
    build_dutch_book,
    case_tree,
    confirmation_experiment,
    evaluate_book_on_branches,
)
from .decision import (
    AxiomError,
    Infeasible,
    extract_representation,
    preferences_from_json,
    representation_roundtrip_sweep,
    representation_to_json_dict,
)
from .games import (
    game_from_json,
    parse_realization,
    realization_label,
    relabel_game,
    validate_game,
)
from .branching import RotationConfig
from .reporting import dumps_stable, emit, fmt_float
from .strategies import parse_strategy, value_game
from .verifier import (
    DEMO_SEED,
    StageReport,
    default_demo_game,
    egalitarian_incoherence_demo,
    verify_stage1,
    verify_stage2,
    verify_stage2_sweep,
    verify_stage3,
    verify_stage3_sweep,
    verify_stage_general,
)

GENERAL_TARGETS = (1 / math.sqrt(2), math.pi / 4, math.e / 3)


def _resolve_out(path: str | None) -> str | None:
    if path is None:
        return None
    if os.path.isabs(path):
        return path
    base = os.environ.get("BRANCHLAB_OUT")
    return os.path.join(base, path) if base else path


def _write(data: bytes, out: str | None) -> None:
    target = _resolve_out(out)
    if target is None:
        click.echo(data.decode(), nl=False)
    else:
        with open(target, "wb") as fh:
            fh.write(data)
        click.echo(f"wrote {target}")


def _load_json(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise click.UsageError(f"cannot read {path}: {exc}")


def _strategy(spec: str):
    try:
        return parse_strategy(spec)
    except ValueError as exc:
        raise click.UsageError(str(exc))


@click.group()
def main() -> None:
    """Branching-measurement decision lab."""


# -- game -----------------------------------------------------------------------


@main.group()
def game() -> None:
    """Operations on single games."""


@game.command("eval")
@click.option("--game", "game_path", required=True, type=click.Path(), help="Game JSON file.")
@click.option("--strategy", "strategy_spec", default="born", show_default=True)
@click.option("--realization", "realization_spec", default="direct", show_default=True)
@click.option(
    "--relabel-check",
    is_flag=True,
    help="Re-evaluate under renamed labels and renumbered eigenvalues; fail on a value change.",
)
@click.option("--format", "fmt", type=click.Choice(["json", "csv", "table"]), default="json")
@click.option("--out", default=None)
def game_eval(game_path, strategy_spec, realization_spec, relabel_check, fmt, out) -> None:
    """Value a game under a strategy and realization."""
    doc = _load_json(game_path)
    try:
        g = game_from_json(json.dumps(doc))
        realization = parse_realization(realization_spec)
    except (KeyError, ValueError, TypeError) as exc:
        raise click.UsageError(f"bad game file or realization: {exc}")
    strategy = _strategy(strategy_spec)
    problems = validate_game(g)
    if problems:
        raise click.UsageError("invalid game: " + "; ".join(problems))
    from .games import born_weights

    value = value_game(strategy, g, realization)
    report = {
        "strategy": strategy_spec,
        "realization": realization_label(realization),
        "value": value,
        "born_weights": {repr(x): w for x, w in sorted(born_weights(g).items())},
    }
    exit_code = 0
    if relabel_check:
        label_map = {l: f"{l}_renamed" for l in g.state.basis_labels}
        eigenvalue_map = {x: 2.0 * x + 3.0 for x in g.observable.eigenvalues.values()}
        twin = relabel_game(g, label_map, eigenvalue_map)
        twin_value = value_game(strategy, twin, realization)
        gap = abs(value - twin_value)
        report["relabeled_value"] = twin_value
        report["relabel_gap"] = gap
        report["physicality_ok"] = gap <= 1e-12
        if gap > 1e-12:
            exit_code = 1
    _write(emit(report, fmt) if fmt != "json" else dumps_stable(report).encode(), out)
    raise SystemExit(exit_code)


# -- dw verify ------------------------------------------------------------------


@main.group()
def dw() -> None:
    """Staged value-consistency checks."""


def _merge_general(reports: list[StageReport]) -> StageReport:
    return StageReport(
        stage="S4to6",
        passed=all(r.passed for r in reports),
        residual=max(r.residual for r in reports),
        details=" ; ".join(r.details for r in reports),
        cases=tuple(case for r in reports for case in r.cases),
        inconclusive=any(r.inconclusive for r in reports),
    )


@dw.command("verify")
@click.option("--stage", required=True, type=click.Choice(["1", "2", "3", "general", "egal-demo"]))
@click.option("--strategy", "strategy_spec", default="born", show_default=True)
@click.option("--m", "m_", type=int, default=None, help="Stage 3: weight numerator.")
@click.option("--n", "n_", type=int, default=None, help="Stage 2 branch count / stage 3 denominator.")
@click.option("--max-n", type=int, default=None, help="Sweep bound when --m/--n are omitted.")
@click.option("--payoff-count", type=int, default=None)
@click.option("--seed", type=int, default=7, show_default=True)
@click.option("--u1", type=float, default=10.0, show_default=True)
@click.option("--u2", type=float, default=0.0, show_default=True)
@click.option("--a1sq", type=float, multiple=True, help="Stage general: squared first weight(s).")
@click.option("--tolerance", type=float, default=1e-4, show_default=True)
@click.option("--max-denominator", type=int, default=4096, show_default=True)
@click.option("--fine-dim", type=int, default=8, show_default=True)
@click.option("--epsilon", type=float, default=1e-3, show_default=True)
@click.option("--tau", type=float, default=1e-9, show_default=True)
@click.option("--demo-seed", type=int, default=DEMO_SEED, show_default=True)
@click.option("--format", "fmt", type=click.Choice(["json", "csv", "table"]), default="json")
@click.option("--out", default=None)
def dw_verify(
    stage, strategy_spec, m_, n_, max_n, payoff_count, seed, u1, u2,
    a1sq, tolerance, max_denominator, fine_dim, epsilon, tau, demo_seed, fmt, out,
) -> None:
    """Run one stage (or its full sweep) and report pass/fail."""
    strategy = _strategy(strategy_spec)
    payoffs = ((Fraction(u1), Fraction(u2)),)
    if stage == "1":
        report = verify_stage1(strategy, payoff_count=payoff_count or 100, seed=seed)
    elif stage == "2":
        if n_ is not None:
            report = verify_stage2(strategy, n_, payoff_count=payoff_count or 20, seed=seed)
        else:
            report = verify_stage2_sweep(strategy, max_n=max_n or 64, payoff_count=payoff_count or 20, seed=seed)
    elif stage == "3":
        if m_ is not None and n_ is not None:
            report = verify_stage3(strategy, m_, n_, payoffs=payoffs)
        else:
            report = verify_stage3_sweep(strategy, max_n=max_n or 32, payoffs=payoffs)
    elif stage == "general":
        targets = a1sq or GENERAL_TARGETS
        reports = [
            verify_stage_general(
                strategy, t, tolerance, payoff=(Fraction(u1), Fraction(u2)),
                max_denominator=max_denominator,
            )
            for t in targets
        ]
        report = _merge_general(reports)
    else:
        config = RotationConfig(epsilon=epsilon, pair_schedule=None, seed=demo_seed)
        report = egalitarian_incoherence_demo(
            default_demo_game(), schedule=(config,), fine_dim=fine_dim, grain=tau
        )
    _write(emit(report, fmt), out)
    click.echo(f"stage {report.stage}: {report.verdict} (residual {fmt_float(report.residual)})")
    raise SystemExit(0 if report.passed else 1)


# -- egal demo ------------------------------------------------------------------


@main.group()
def egal() -> None:
    """Count-based care demonstrations."""


@egal.command("demo")
@click.option("--fine-dim", type=int, default=8, show_default=True)
@click.option("--epsilon", type=float, default=1e-3, show_default=True)
@click.option("--tau", type=float, default=1e-9, show_default=True)
@click.option("--seed", type=int, default=DEMO_SEED, show_default=True)
@click.option("--coarse-factor", type=int, default=None, help="Optional coarse-grain step after the rotation.")
@click.option("--format", "fmt", type=click.Choice(["json", "csv", "table"]), default="json")
@click.option("--out", default=None)
def egal_demo(fine_dim, epsilon, tau, seed, coarse_factor, fmt, out) -> None:
    """Rotate the fine-grained basis and watch count-based value drift."""
    schedule: list = [RotationConfig(epsilon=epsilon, pair_schedule=None, seed=seed)]
    if coarse_factor is not None:
        schedule.append(coarse_factor)
    report = egalitarian_incoherence_demo(
        default_demo_game(), schedule=tuple(schedule), fine_dim=fine_dim, grain=tau
    )
    _write(emit(report, fmt), out)
    click.echo(f"egalitarian demo: {report.verdict}")
    raise SystemExit(0 if report.passed else 1)


# -- dutchbook ------------------------------------------------------------------


def _credences_for(pa: Fraction, pta: Fraction) -> CredenceState:
    # Any credence state with p(A) = pa and p(T|A) = pta does; this one sets
    # p(T) = pta with evidence-independent likelihoods.
    return CredenceState(
        priors={"T": pta, "notT": 1 - pta},
        likelihoods={"T": {"A": pa, "notA": 1 - pa}, "notT": {"A": pa, "notA": 1 - pa}},
    )


@main.command()
@click.option("--pa", default="0.5", show_default=True, help="Prior probability of the evidence.")
@click.option("--pta", default="0.8", show_default=True, help="Conditional credence p(T|A).")
@click.option("--q", default="0.6", show_default=True, help="Announced posterior.")
@click.option("--stake", default="1", show_default=True)
@click.option("--sweep", type=int, default=None, help="Check N random deviant cases instead.")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--format", "fmt", type=click.Choice(["json", "csv", "table"]), default="json")
@click.option("--out", default=None)
def dutchbook(pa, pta, q, stake, sweep, seed, fmt, out) -> None:
    """Build the three-bet book against a deviant updater and settle it."""
    if sweep is not None:
        import random

        rng = random.Random(seed)
        worst = 0.0
        for _ in range(sweep):
            r = rng.uniform(0.01, 0.99)
            p = rng.uniform(0.01, 0.99)
            while True:
                q_val = rng.uniform(0.0, 1.0)
                if abs(q_val - p) >= 0.01:
                    break
            cred = _credences_for(Fraction(r), Fraction(p))
            book = build_dutch_book(cred, Deviant({("T", "A"): q_val}), "A", "T")
            tree, assignment = case_tree(book.p_evidence, book.p_conditional)
            nets = evaluate_book_on_branches(book, tree, assignment)
            for net in nets.values():
                worst = max(worst, abs(float(net) - float(book.guaranteed_net)))
        report = {"cases": sweep, "max_deviation": worst, "ok": worst <= 1e-12}
        _write(dumps_stable(report).encode(), out)
        raise SystemExit(0 if worst <= 1e-12 else 1)

    try:
        pa_f, pta_f, q_f, stake_f = Fraction(pa), Fraction(pta), Fraction(q), Fraction(stake)
    except (ValueError, ZeroDivisionError) as exc:
        raise click.UsageError(f"bad quotient: {exc}")
    cred = _credences_for(pa_f, pta_f)
    book = build_dutch_book(cred, Deviant({("T", "A"): q_f}), "A", "T", stake=stake_f)
    if book is None:
        _write(dumps_stable({"book": None, "reason": "announced posterior matches the conditional credence"}).encode(), out)
        raise SystemExit(0)
    tree, assignment = case_tree(book.p_evidence, book.p_conditional)
    nets = evaluate_book_on_branches(book, tree, assignment)
    case_names = ["no-evidence", "evidence-and-theory", "evidence-not-theory"]
    report = {
        "p_evidence": float(book.p_evidence),
        "p_conditional": float(book.p_conditional),
        "announced": float(book.announced),
        "stake": float(book.stake),
        "guaranteed_net": float(book.guaranteed_net),
        "bets": [
            {
                "target": b.target,
                "placement": b.placement,
                "quotient": float(b.quotient),
                "stake": float(b.stake),
                "direction": b.direction,
                "conditional": b.conditional,
            }
            for b in book.bets
        ],
        "settlement": {name: float(nets[i]) for i, name in enumerate(case_names)},
    }
    _write(dumps_stable(report).encode(), out)
    raise SystemExit(0)


# -- confirm run ------------------------------------------------------------------


@main.group()
def confirm() -> None:
    """Repeated-trial confirmation experiments."""


@confirm.command("run")
@click.option("--theories", "theories_path", required=True, type=click.Path())
@click.option("--games", "games_path", required=True, type=click.Path())
@click.option("--strategy", "strategy_spec", default="born", show_default=True)
@click.option("--depth", type=int, default=20, show_default=True)
@click.option("--threshold", type=float, default=0.95, show_default=True)
@click.option("--true-theory", default=None, help="Theory whose credence mass is summarized.")
@click.option("--require-mass", type=float, default=None, help="Fail unless the final mass exceeds this.")
@click.option("--method", type=click.Choice(["auto", "classes", "full"]), default="auto")
@click.option("--format", "fmt", type=click.Choice(["json", "csv", "table"]), default="csv")
@click.option("--out", default=None)
def confirm_run(
    theories_path, games_path, strategy_spec, depth, threshold,
    true_theory, require_mass, method, fmt, out,
) -> None:
    """Iterate games, conditionalize on every branch, report caring-weighted credences."""
    theories_doc = _load_json(theories_path)
    games_doc = _load_json(games_path)
    try:
        cred = CredenceState(
            priors={t: Fraction(str(p)) for t, p in theories_doc["priors"].items()},
            likelihoods={
                t: {float(k): Fraction(str(v)) for k, v in table.items()}
                for t, table in theories_doc["likelihoods"].items()
            },
        )
        games = [
            (
                game_from_json(json.dumps(entry["game"])),
                parse_realization(entry.get("realization", "direct")),
            )
            for entry in games_doc
        ]
    except (KeyError, TypeError, ValueError) as exc:
        raise click.UsageError(f"bad theories/games file: {exc}")
    strategy = _strategy(strategy_spec)
    report = confirmation_experiment(cred, games, strategy, trials=depth, method=method)
    _write(emit(report, fmt), out)
    target = true_theory or report.theories[0]
    mass = float(report.final_mass_above(target, threshold))
    click.echo(f"final caring mass with credence({target}) > {fmt_float(threshold)}: {fmt_float(mass)}")
    if require_mass is not None and mass <= require_mass:
        raise SystemExit(1)
    raise SystemExit(0)


# -- extract -----------------------------------------------------------------------


@main.command()
@click.option("--prefs", "prefs_path", type=click.Path(), default=None)
@click.option("--roundtrip-sweep", type=int, default=None, help="Run N random round-trip checks instead.")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--max-states", type=int, default=4, show_default=True)
@click.option("--max-consequences", type=int, default=4, show_default=True)
@click.option("--format", "fmt", type=click.Choice(["json", "csv", "table"]), default="json")
@click.option("--out", default=None)
def extract(prefs_path, roundtrip_sweep, seed, max_states, max_consequences, fmt, out) -> None:
    """Extract a probability and utility from a preference file."""
    if roundtrip_sweep is not None:
        results = representation_roundtrip_sweep(
            roundtrip_sweep, seed=seed, max_states=max_states, max_consequences=max_consequences
        )
        ok = all(r["ok"] for r in results)
        _write(emit(results, fmt if fmt != "json" else "csv"), out)
        click.echo(f"round trips: {sum(r['ok'] for r in results)}/{len(results)} reproduced")
        raise SystemExit(0 if ok else 1)
    if prefs_path is None:
        raise click.UsageError("provide --prefs or --roundtrip-sweep")
    try:
        prefs = preferences_from_json(json.dumps(_load_json(prefs_path)))
    except (KeyError, TypeError, ValueError) as exc:
        raise click.UsageError(f"bad preference file: {exc}")
    try:
        result = extract_representation(prefs)
    except AxiomError as exc:
        _write(dumps_stable({"error": "axiom violation", "detail": str(exc)}).encode(), out)
        raise SystemExit(1)
    if isinstance(result, Infeasible):
        _write(
            dumps_stable(
                {
                    "infeasible": True,
                    "witness": [result.witness[0].mapping(), result.witness[1].mapping()],
                    "detail": result.detail,
                }
            ).encode(),
            out,
        )
        raise SystemExit(1)
    _write(dumps_stable(representation_to_json_dict(result)).encode(), out)
    raise SystemExit(0)


if __name__ == "__main__":
    main()
