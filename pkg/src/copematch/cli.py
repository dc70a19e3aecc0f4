"""Command-line front end.

Every command prints (or writes with ``--out``) one JSON document holding a
``manifest`` (command, configuration, seeds, input digest, version,
duration) and a ``result``.  Randomized commands default to seed 0.

Exit codes: 0 success, 1 a verification or internal check failed,
2 usage error, 3 unreadable or malformed input, 4 enumeration budget exceeded.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from fractions import Fraction
from pathlib import Path

from . import __version__
from .election import compare, is_stable
from .fpras import FprasConfig, run_fpras
from .model import (Instance, InstanceError, Matching, MatchingError, ParseError, parse_instance,
                    parse_matching, random_instance, serialize_instance, serialize_matching)
from .oracle import BUDGET_ENV, BudgetExceeded, is_pareto_optimal, matching_space, score_table
from .reduction import (ReductionError, StateAssignment, build_dual_certificate, build_reduction,
                        build_state_matching, parse_cover, sweep_red_red_witnesses, valid_assignments,
                        verify_gadgets)
from .sampler import ExactUniformSampler, McmcSampler, SamplerConfig, default_steps, tv_diagnostic
from .weighted import (default_apx_samples, is_popular_via_solver, verify_dual,
                       weighted_copeland_apx, weighted_copeland_exact, wt_score)

DEFAULT_SEED = 0

EXIT_OK, EXIT_FAILED, EXIT_USAGE, EXIT_INPUT, EXIT_BUDGET = 0, 1, 2, 3, 4


class UsageError(Exception):
    pass


def _positive_fraction(text: str) -> Fraction:
    try:
        value = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if value <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return value


def _unit_fraction(text: str) -> Fraction:
    value = _positive_fraction(text)
    if value >= 1:
        raise argparse.ArgumentTypeError("must lie in (0, 1)")
    return value


def _read(path: str) -> tuple[str, str]:
    data = sys.stdin.buffer.read() if path == "-" else Path(path).read_bytes()
    return data.decode("utf-8"), hashlib.sha256(data).hexdigest()


def _load_instance(path: str) -> tuple[Instance, str]:
    text, digest = _read(path)
    inst = parse_instance(text)
    for warning in inst.validation_warnings():
        print(f"warning: {warning}", file=sys.stderr)
    return inst, digest


def _load_matching(spec: str, inst: Instance) -> Matching:
    if spec == "none":
        return Matching()
    text, _ = _read(spec)
    return parse_matching(text, inst)


def _names(inst: Instance, m: Matching) -> list[list[str]]:
    return [list(p) for p in inst.named(m)]


def _oracle_scores(inst: Instance, budget):
    """``{matching: score}`` and mu, or None if the instance is too large to enumerate."""
    try:
        space = matching_space(inst, budget)
    except BudgetExceeded:
        return None, None
    return dict(zip(space.matchings, (r.score for r in score_table(inst, budget)))), space.mu


# ------------------------------------------------------------------ commands

def cmd_enumerate(args) -> tuple[dict, int]:
    inst, digest = _load_instance(args.instance)
    args.digest = digest
    space = matching_space(inst, args.budget)
    table = score_table(inst, args.budget, args.jobs)
    mu = space.mu
    alpha = args.alpha
    best = max(r.alpha_score(alpha) for r in table)
    rows = []
    for m, r in zip(space.matchings, table):
        row = {"matching": _names(inst, m), "wins": r.wins, "ties": r.ties, "losses": r.losses,
               "score": str(r.score)}
        if args.flags:
            row.update(popular=r.losses == 0, semi_popular=2 * (r.wins + r.ties) >= mu,
                       condorcet=r.wins == mu - 1, weak_copeland=2 * r.score >= mu,
                       stable=is_stable(inst, m)[0], unpopularity_margin=None,
                       pareto_optimal=is_pareto_optimal(inst, m, args.budget),
                       wt_score=str(r.wt_score))
        rows.append(row)
    if args.flags:
        for row, m in zip(rows, space.matchings):
            row["unpopularity_margin"] = is_popular_via_solver(inst, m)[2]
    result = {
        "mu": mu,
        "alpha": str(alpha),
        "max_alpha_score": str(best),
        "copeland_winners": [_names(inst, m) for m, r in zip(space.matchings, table)
                             if r.alpha_score(alpha) == best],
        "weak_copeland_winners": [_names(inst, m) for m, r in zip(space.matchings, table)
                                  if 2 * r.score >= mu],
        "popular": [_names(inst, m) for m, r in zip(space.matchings, table) if r.losses == 0],
        "score_total": str(sum(r.score for r in table)),
    }
    if not args.summary_only:
        result["matchings"] = rows
    ok = 2 * max(r.score for r in table) >= mu and sum(r.score for r in table) == Fraction(mu * mu, 2)
    return result, EXIT_OK if ok else EXIT_FAILED


def cmd_elect(args) -> tuple[dict, int]:
    inst, digest = _load_instance(args.instance)
    args.digest = digest
    m = _load_matching(args.first, inst)
    n = _load_matching(args.second, inst)
    r = compare(inst, m, n)
    return {"first": _names(inst, m), "second": _names(inst, n), "votes_for": r.votes_for,
            "votes_against": r.votes_against, "delta": r.delta, "outcome": r.outcome}, EXIT_OK


def cmd_fpras(args) -> tuple[dict, int]:
    inst, digest = _load_instance(args.instance)
    args.digest = digest
    scores, mu = _oracle_scores(inst, args.budget)
    trials = []
    all_ok = True
    passed = 0
    for t in range(args.trials):
        cfg = FprasConfig(args.epsilon, seed=args.seed + t,
                          backend="exact-uniform" if args.exact_uniform else "mcmc",
                          steps=args.steps, k_override=args.k, jobs=args.jobs, budget=args.budget)
        rep = run_fpras(inst, cfg)
        entry = rep.to_dict(inst, include_samples=args.include_samples)
        all_ok &= entry["half_k_bound_ok"] and entry["conservation_ok"]
        if scores is not None:
            s = scores[rep.winner]
            good = s > Fraction(mu, 2) * (1 - args.epsilon)
            passed += good
            entry.update(oracle_score=str(s), above_threshold=good)
        trials.append(entry)
    result = {"trials": trials}
    if scores is not None:
        result.update(mu=mu, threshold=str(Fraction(mu, 2) * (1 - args.epsilon)),
                      pass_rate=str(Fraction(passed, args.trials)) if args.trials else None)
    return result, EXIT_OK if all_ok else EXIT_FAILED


def cmd_wtscore(args) -> tuple[dict, int]:
    inst, digest = _load_instance(args.instance)
    args.digest = digest
    try:
        best, best_value = weighted_copeland_exact(inst, budget=args.budget)
    except BudgetExceeded:
        if args.mode == "exact":
            raise
        best, best_value = None, None
    if args.mode == "exact":
        return {"mode": "exact", "matching": _names(inst, best), "wt_score": str(best_value)}, EXIT_OK
    samples = args.samples or default_apx_samples(inst, args.epsilon)
    trials = []
    within = 0
    for t in range(args.trials):
        seed = args.seed + t
        if args.exact_uniform:
            sampler = ExactUniformSampler(inst, seed, args.budget)
        else:
            steps = args.steps or default_steps(inst)
            sampler = McmcSampler(inst, SamplerConfig(steps, seed), args.jobs)
        m, _ = weighted_copeland_apx(inst, args.epsilon, sampler, samples)
        entry = {"seed": seed, "matching": _names(inst, m)}
        if best_value is not None:
            value = wt_score(inst, m)
            ok = value >= best_value - args.epsilon
            within += ok
            entry.update(wt_score=str(value), gap=str(best_value - value), within_epsilon=ok)
        trials.append(entry)
    result = {"mode": "apx", "epsilon": str(args.epsilon), "samples": samples,
              "sampler": "exact-uniform" if args.exact_uniform else "mcmc", "trials": trials}
    if best_value is not None:
        result.update(exact_max=str(best_value), exact_argmax=_names(inst, best),
                      within_rate=str(Fraction(within, args.trials)) if args.trials else None)
    return result, EXIT_OK


def _load_cover(args):
    text, digest = _read(args.cover)
    args.digest = digest
    return parse_cover(text)


def cmd_reduce(args) -> tuple[dict, int]:
    h = _load_cover(args)
    art = build_reduction(h, args.aux)
    inst = art.instance
    if args.instance_out:
        Path(args.instance_out).write_text(serialize_instance(inst), encoding="utf-8")
    gmap = art.gadget_map()
    if args.map_out:
        Path(args.map_out).write_text(json.dumps(gmap, indent=2) + "\n", encoding="utf-8")
    result = {"vertices": inst.n, "edges": len(inst.edges), "A": art.A,
              "inter_gadget_edges": gmap["inter_gadget_edges"]}
    if not args.instance_out:
        result["instance"] = serialize_instance(inst)
    return result, EXIT_OK


def _parse_blue(text: str, n: int) -> set[int]:
    if not text.strip():
        return set()
    try:
        blue = {int(x) for x in text.split(",")}
    except ValueError:
        raise UsageError(f"--blue expects comma-separated vertex numbers, got {text!r}") from None
    bad = [i for i in blue if not 1 <= i <= n]
    if bad:
        raise UsageError(f"--blue lists vertices outside 1..{n}: {bad}")
    return blue


def cmd_certify(args) -> tuple[dict, int]:
    h = _load_cover(args)
    art = build_reduction(h, args.aux)
    inst = art.instance
    if args.all_valid:
        assignments = valid_assignments(h)
    else:
        if args.blue is None:
            raise UsageError("give --blue or --all-valid")
        assignments = [StateAssignment.from_blue(h, _parse_blue(args.blue, h.n))]
    runs = []
    ok = True
    for s in assignments:
        blue = sorted(i for i, c in s.vertex_state.items() if c == "blue")
        bad = s.uncovered_edges(h)
        if bad:
            runs.append({"blue": blue, "refused": True,
                         "reason": f"edge {bad[0][0]}-{bad[0][1]} has no blue endpoint"})
            ok = False
            continue
        m = build_state_matching(art, s)
        cert = build_dual_certificate(art, s)
        rep = verify_dual(inst, m, cert)
        inter = [rep.edge_slack[e] for e in sorted(art.inter_gadget_edges)]
        entry = {"blue": blue, "refused": False, "feasible": rep.ok, "objective": rep.objective,
                 "violations": rep.violations,
                 "min_inter_gadget_slack": str(min(inter)) if inter else None,
                 "inter_gadget_slack_ok": all(x >= 1 for x in inter)}
        if args.solver_check:
            popular, witness, margin = is_popular_via_solver(inst, m)
            entry.update(solver_popular=popular, solver_margin=margin)
            ok &= popular
        ok &= rep.ok and entry["inter_gadget_slack_ok"]
        if args.write_matching:
            Path(args.write_matching).write_text(serialize_matching(inst, m), encoding="utf-8")
        if args.write_certificate:
            Path(args.write_certificate).write_text(
                json.dumps(cert.to_dict(inst), indent=2) + "\n", encoding="utf-8")
        runs.append(entry)
    return {"A": art.A, "vertices": inst.n, "assignments": runs}, EXIT_OK if ok else EXIT_FAILED


def cmd_sample_diag(args) -> tuple[dict, int]:
    inst, digest = _load_instance(args.instance)
    args.digest = digest
    steps = args.steps or default_steps(inst)
    cfg = SamplerConfig(steps, args.seed, args.laziness)
    tv = tv_diagnostic(inst, cfg, args.samples, args.budget, args.jobs)
    return {"mu": matching_space(inst, args.budget).mu, "steps": steps, "samples": args.samples,
            "laziness": str(cfg.laziness), "tv": str(tv), "tv_float": float(tv)}, EXIT_OK


def cmd_verify_gadgets(args) -> tuple[dict, int]:
    h = _load_cover(args)
    art = build_reduction(h, args.aux)
    rep = verify_gadgets(art)
    result = rep.to_dict(art)
    ok = rep.ok
    if args.red_red:
        sweeps = {}
        for e in h.edges:
            cases = sweep_red_red_witnesses(art, e)
            summary = {case: {"matchings": len(v), "all_confirmed": all(r.ok for r in v),
                              "min_confirmed": min(r.confirmed for r in v)}
                       for case, v in sorted(cases.items())}
            ok &= all(c["all_confirmed"] for c in summary.values())
            sweeps[f"{e[0]},{e[1]}"] = summary
        result["red_red_witnesses"] = sweeps
    return result, EXIT_OK if ok else EXIT_FAILED


def cmd_random(args) -> tuple[dict, int]:
    inst = random_instance(args.n, args.p, args.tiers, args.seed)
    text = serialize_instance(inst)
    args.digest = hashlib.sha256(text.encode()).hexdigest()
    if args.instance_out:
        Path(args.instance_out).write_text(text, encoding="utf-8")
        return {"vertices": inst.n, "edges": len(inst.edges), "written": args.instance_out}, EXIT_OK
    return {"vertices": inst.n, "edges": len(inst.edges), "instance": text}, EXIT_OK


# ------------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="copematch", description=__doc__.split("\n")[0])
    p.add_argument("--version", action="version", version=f"copematch {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, seed=False):
        sp.add_argument("--out", help="write the JSON report here instead of stdout")
        sp.add_argument("--jobs", type=int, default=1, help="worker threads (results do not depend on it)")
        sp.add_argument("--budget", type=int, default=None,
                        help=f"enumeration budget in matchings (default 10^7 or ${BUDGET_ENV})")
        if seed:
            sp.add_argument("--seed", type=int, default=DEFAULT_SEED, help="base seed (default 0)")

    sp = sub.add_parser("enumerate", help="score every matching of a small instance")
    sp.add_argument("instance")
    sp.add_argument("--alpha", type=Fraction, default=Fraction(1, 2), help="weight of a tie (default 1/2)")
    sp.add_argument("--flags", action="store_true",
                    help="per-matching popularity, stability, Condorcet and Pareto flags")
    sp.add_argument("--summary-only", action="store_true", help="omit the per-matching table")
    common(sp)
    sp.set_defaults(func=cmd_enumerate)

    sp = sub.add_parser("elect", help="head-to-head election between two matchings")
    sp.add_argument("instance")
    sp.add_argument("first", help="matching file, or 'none' for the empty matching")
    sp.add_argument("second", help="matching file, or 'none' for the empty matching")
    common(sp)
    sp.set_defaults(func=cmd_elect)

    sp = sub.add_parser("fpras", help="sampling tournament for an almost weak Copeland winner")
    sp.add_argument("instance")
    sp.add_argument("--epsilon", type=_positive_fraction, required=True)
    sp.add_argument("--steps", type=int, help="chain steps per sample (default from epsilon)")
    sp.add_argument("--exact-uniform", action="store_true", help="sample exactly uniformly by enumeration")
    sp.add_argument("--trials", type=int, default=1)
    sp.add_argument("--k", type=int, help="override the sample size k")
    sp.add_argument("--include-samples", action="store_true", help="list both samples and all counters")
    common(sp, seed=True)
    sp.set_defaults(func=cmd_fpras)

    sp = sub.add_parser("wtscore", help="weighted Copeland winner, exact or sampled")
    sp.add_argument("instance")
    sp.add_argument("--mode", choices=("exact", "apx"), default="exact")
    sp.add_argument("--epsilon", type=_positive_fraction, default=Fraction(1, 4))
    sp.add_argument("--samples", type=int, help="sample count (default from epsilon and size)")
    sp.add_argument("--steps", type=int, help="chain steps per sample")
    sp.add_argument("--exact-uniform", action="store_true")
    sp.add_argument("--trials", type=int, default=1)
    common(sp, seed=True)
    sp.set_defaults(func=cmd_wtscore)

    sp = sub.add_parser("reduce", help="compile a vertex-cover instance into a roommates instance")
    sp.add_argument("cover")
    sp.add_argument("--aux", type=int, default=100, help="auxiliary vertices per vertex gadget")
    sp.add_argument("--instance-out", help="write the instance file here")
    sp.add_argument("--map-out", help="write the gadget map (JSON) here")
    common(sp)
    sp.set_defaults(func=cmd_reduce)

    sp = sub.add_parser("certify", help="build and check dual certificates for state matchings")
    sp.add_argument("cover")
    sp.add_argument("--aux", type=int, default=100)
    sp.add_argument("--blue", help="comma-separated blue H-vertices; the rest are red")
    sp.add_argument("--all-valid", action="store_true", help="every assignment with a blue endpoint per edge")
    sp.add_argument("--solver-check", action="store_true", help="also confirm popularity with the matching solver")
    sp.add_argument("--write-matching")
    sp.add_argument("--write-certificate")
    common(sp)
    sp.set_defaults(func=cmd_certify)

    sp = sub.add_parser("sample-diag", help="empirical distance of the chain to uniform")
    sp.add_argument("instance")
    sp.add_argument("--steps", type=int)
    sp.add_argument("--samples", type=int, default=10**5)
    sp.add_argument("--laziness", type=_unit_fraction, default=Fraction(1, 2))
    common(sp, seed=True)
    sp.set_defaults(func=cmd_sample_diag)

    sp = sub.add_parser("verify-gadgets", help="exhaustive gadget checks for a reduced instance")
    sp.add_argument("cover")
    sp.add_argument("--aux", type=int, default=5)
    sp.add_argument("--red-red", action="store_true", help="also sweep red-red witness constructions")
    common(sp)
    sp.set_defaults(func=cmd_verify_gadgets)

    sp = sub.add_parser("random", help="generate a random instance")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--p", type=Fraction, default=Fraction(1, 2))
    sp.add_argument("--tiers", type=int, default=3)
    sp.add_argument("--instance-out")
    common(sp, seed=True)
    sp.set_defaults(func=cmd_random)
    return p


def _jsonable(value):
    if isinstance(value, Fraction):
        return str(value)
    return value


def _manifest(args, duration: float) -> dict:
    config = {k: _jsonable(v) for k, v in sorted(vars(args).items())
              if k not in ("func", "digest", "out")}
    seeds = [args.seed + t for t in range(getattr(args, "trials", 1))] if hasattr(args, "seed") else []
    return {"command": args.command, "config": config, "seeds": seeds,
            "input_sha256": getattr(args, "digest", None), "version": __version__,
            "duration_seconds": round(duration, 6)}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "jobs", 1) < 1:
        parser.error("--jobs must be positive")
    for name in ("trials", "samples", "steps", "k", "aux", "budget"):
        val = getattr(args, name, None)
        if val is not None and val < (0 if name == "trials" else 1):
            parser.error(f"--{name} must be positive")
    start = time.perf_counter()
    try:
        result, code = args.func(args)
    except UsageError as exc:
        parser.error(str(exc))
    except (ParseError, InstanceError, MatchingError, ReductionError, UnicodeDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except BudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    doc = {"manifest": _manifest(args, time.perf_counter() - start), "result": result}
    text = json.dumps(doc, indent=2) + "\n"
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
