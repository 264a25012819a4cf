"""Command-line harness.

Verbs: ``recognize`` (posterior trace), ``explain`` (why / why-not answers),
``rank`` (per-observation ranking table), ``bench`` (timing report over a
scenario directory), ``eval`` (agreement against a ground-truth annotation
file).  Exit status is 0 on success, 2 on any validation/parse error and 3
when the planner's expansion budget is exhausted.

Every command builds a structured payload first; text output is derived from
it, so ``--format structured`` exposes exactly what the text shows, with
weights at full precision.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .bench import format_report, run_bench
from .errors import BudgetExceeded, GrexError
from .explainer import (WhyAnswer, answer_why, answer_why_not, build_explanan,
                        rank_observations)
from .metrics import eval_cf_agreement, eval_mae
from .planner import DEFAULT_BUDGET
from .recognizer import mirror_posteriors
from .render import render, render_ascii
from .scenario import load_annotations, load_priors, load_scenario
from .version import __version__


def _entry_dict(problem, entry):
    return {
        "predicted": problem.goal_label(entry.predicted_goal),
        "counterfactual": problem.goal_label(entry.counterfactual_goal),
        "observation": entry.observation_index,
        "action": problem.observations[entry.observation_index - 1].action.name,
        "woe": entry.woe,
    }


def _load(args):
    problem = load_scenario(args.scenario)
    priors = load_priors(args.priors, problem) if args.priors else None
    return problem, priors


def _goal_index(problem, label):
    try:
        return problem.goal_names.index(label)
    except ValueError:
        raise GrexError(
            f"unknown goal {label!r}; choose from {list(problem.goal_names)}"
        ) from None


def cmd_recognize(args):
    problem, priors = _load(args)
    trace = mirror_posteriors(problem, priors=priors, budget=args.budget)
    payload = {
        "scenario": problem.domain.annotations.get("name", str(args.scenario)),
        "goals": list(problem.goal_names),
        "prior": list(trace.prior),
        "posteriors": [list(d) for d in trace.per_prefix],
        "predicted": [problem.goal_names[i] for i in sorted(trace.predicted)],
        "counterfactual": [problem.goal_names[i]
                           for i in sorted(trace.counterfactual)],
    }

    lines = ["prefix  " + "  ".join(f"{g:>8}" for g in payload["goals"])]
    lines.append("    o0  " + "  ".join(f"{p:8.4f}" for p in payload["prior"]))
    for i, dist in enumerate(payload["posteriors"], start=1):
        lines.append(f"    o{i}  " + "  ".join(f"{p:8.4f}" for p in dist))
    lines.append(f"predicted: {', '.join(payload['predicted'])}")
    if payload["counterfactual"]:
        lines.append(f"counterfactual: {', '.join(payload['counterfactual'])}")
    text = "\n".join(lines)
    if args.format == "ascii-grid":
        text = render_ascii(problem) + "\n" + text
    return payload, text


def cmd_explain(args):
    problem, priors = _load(args)
    trace = mirror_posteriors(problem, priors=priors, budget=args.budget)
    explanan = build_explanan(trace, priors=priors)
    goal_filter = None
    if args.goal:
        goal_filter = [_goal_index(problem, args.goal)]

    payload = {
        "scenario": problem.domain.annotations.get("name", str(args.scenario)),
        "question": args.question,
        "entries": [_entry_dict(problem, e) for e in explanan.entries],
        "excluded_observations": list(explanan.excluded_observations),
    }

    if args.question == "why":
        answer = answer_why(problem, explanan)
        if goal_filter is not None:
            markers = tuple(e for e in answer.markers
                            if e.predicted_goal in goal_filter)
            if not markers:
                raise GrexError(f"goal {args.goal!r} is not a predicted goal; "
                                f"ask --question whynot about it instead")
            answer = WhyAnswer(markers=markers)
            answer.rendered = render(answer, problem)
        payload["markers"] = [_entry_dict(problem, e) for e in answer.markers]
        payload["text"] = answer.rendered
        highlight = {e.observation_index for e in answer.markers}
    else:
        answer = answer_why_not(problem, explanan, goals=goal_filter,
                                budget=args.budget)
        if goal_filter is not None and not answer.selections:
            raise GrexError(f"goal {args.goal!r} is not a counterfactual goal; "
                            f"ask --question why about it instead")
        payload["markers"] = [_entry_dict(problem, e) for e in answer.markers]
        payload["counterfactuals"] = [
            {"goal": problem.goal_label(sel.goal),
             "status": sel.status,
             "observation": (min(e.observation_index for e in sel.markers)
                             if sel.markers else None),
             "counterfactual_action": sel.action.name if sel.action else None}
            for sel in answer.selections]
        payload["text"] = answer.rendered
        highlight = {e.observation_index for e in answer.markers}

    lines = [payload["text"]]
    for marker in payload["markers"]:
        lines.append(f"  marker o{marker['observation']} ({marker['action']}): "
                     f"WoE {marker['woe']:.2f} for {marker['predicted']} "
                     f"over {marker['counterfactual']}")
    text = "\n".join(lines)
    if args.format == "ascii-grid":
        text = render_ascii(problem, highlight=highlight) + "\n" + text
    return payload, text


def cmd_rank(args):
    problem, priors = _load(args)
    trace = mirror_posteriors(problem, priors=priors, budget=args.budget)
    explanan = build_explanan(trace, priors=priors)
    why_ranks, whynot_ranks = rank_observations(explanan)
    payload = {
        "scenario": problem.domain.annotations.get("name", str(args.scenario)),
        "why_ranks": {f"o{i}": r for i, r in why_ranks.items()},
        "whynot_ranks": {f"o{i}": r for i, r in whynot_ranks.items()},
    }
    lines = [f"{'obs':>5}  {'WhyQ':>5}  {'WhyNotQ':>8}"]
    for i in sorted(why_ranks, reverse=True):
        lines.append(f"{'o' + str(i):>5}  {why_ranks[i]:>5}  {whynot_ranks[i]:>8}")
    text = "\n".join(lines)
    if args.format == "ascii-grid":
        text = render_ascii(problem) + "\n" + text
    return payload, text


def cmd_bench(args):
    root = Path(args.scenario)
    paths = sorted(root.glob("*.yaml")) if root.is_dir() else [root]
    if not paths:
        raise GrexError(f"no scenario files under {root}")
    reports = run_bench(paths, budget=args.budget)
    payload = {"reports": [
        {"domain": r.domain, "scenarios": r.scenario_count,
         "total_with_explain_s": r.total_with_explain, "total_sd_s": r.total_sd,
         "explain_only_s": r.explain_only, "explain_only_sd_s": r.explain_only_sd,
         "time_increase_pct": r.time_increase_pct,
         "counterfactual_planning_pct": r.counterfactual_planning_pct,
         "failures": list(r.failures)}
        for r in reports]}
    return payload, format_report(reports)


def cmd_eval(args):
    problem, priors = _load(args)
    annotations = load_annotations(args.annotations)
    trace = mirror_posteriors(problem, priors=priors, budget=args.budget)
    explanan = build_explanan(trace, priors=priors)
    why_ranks, whynot_ranks = rank_observations(explanan)
    n = len(problem.observations)

    payload = {
        "scenario": annotations.scenario or problem.domain.annotations.get("name"),
        "why_mae": eval_mae(why_ranks, annotations.why_ranks, n),
        "whynot_mae": eval_mae(whynot_ranks, annotations.whynot_ranks, n),
    }

    if annotations.counterfactual_actions:
        for action_name in annotations.counterfactual_actions.values():
            if not problem.domain.has_action(action_name):
                raise GrexError(f"annotation names unknown action {action_name!r}")
        answer = answer_why_not(problem, explanan, budget=args.budget)
        model_actions = {
            problem.goal_label(sel.goal): sel.action.name
            for sel in answer.selections if sel.action is not None}
        annotated = {g: a for g, a in annotations.counterfactual_actions.items()}
        model = {g: model_actions.get(g, "") for g in annotated}
        payload["cf_agreement_pct"] = eval_cf_agreement(model, annotated)

    lines = [f"why MAE:     {payload['why_mae']:.3f}",
             f"why-not MAE: {payload['whynot_mae']:.3f}"]
    if "cf_agreement_pct" in payload:
        lines.append(f"CF agreement: {payload['cf_agreement_pct']:.1f}%")
    return payload, "\n".join(lines)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="grexplain",
        description="Goal recognition with contrastive why / why-not explanations.")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, scenario_help):
        p.add_argument("--scenario", required=True, help=scenario_help)
        p.add_argument("--priors", help="YAML file of per-goal prior weights")
        p.add_argument("--budget", type=int, default=DEFAULT_BUDGET,
                       help="planner node-expansion cap")
        p.add_argument("--format", choices=["text", "structured", "ascii-grid"],
                       default="text")
        p.add_argument("--out", help="write output to this file instead of stdout")

    p = sub.add_parser("recognize", help="print the posterior trace")
    common(p, "scenario file")
    p.set_defaults(fn=cmd_recognize)

    p = sub.add_parser("explain", help="answer a why or why-not question")
    common(p, "scenario file")
    p.add_argument("--question", choices=["why", "whynot"], required=True)
    p.add_argument("--goal", help="restrict the answer to one goal label")
    p.set_defaults(fn=cmd_explain)

    p = sub.add_parser("rank", help="rank observations for both questions")
    common(p, "scenario file")
    p.set_defaults(fn=cmd_rank)

    p = sub.add_parser("bench", help="time recognition vs explanation")
    common(p, "scenario file or directory of scenario files")
    p.set_defaults(fn=cmd_bench)

    p = sub.add_parser("eval", help="compare against ground-truth annotations")
    common(p, "scenario file")
    p.add_argument("--annotations", required=True,
                   help="YAML annotation file with ranks and actions")
    p.set_defaults(fn=cmd_eval)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        payload, text = args.fn(args)
    except BudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except GrexError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    output = (json.dumps(payload, indent=2) if args.format == "structured"
              else text)
    if args.out:
        Path(args.out).write_text(output + "\n")
    else:
        print(output)
    return 0


if __name__ == "__main__":
    sys.exit(main())
