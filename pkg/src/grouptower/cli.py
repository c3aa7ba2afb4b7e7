"""Command-line entry point.

Subcommands: ``reduce`` (normal form of a word over a tower file), ``build``
(scheduled tower construction plus condition checks), ``lemmas`` (the full
oracle suite), ``field`` (exact matrix identity suite, or one evaluated
instance), ``minstruct`` (axiom suites, chain cross-check, embedding) and
``classical`` (pair-letter construction and centralizer witnesses).

Reports print as text by default; ``--format structured`` emits canonical
JSON that is byte-identical across runs with the same configuration.
Exit status is nonzero iff some check produced a counterexample or error.
"""
from __future__ import annotations

import argparse
import random
import sys
import time
from fractions import Fraction
from pathlib import Path

from . import constructions, fieldext, minstruct, oracles
from .report import RunReport
from .tower import (
    ExtensionTower,
    MembershipUndecided,
    parse_tower,
    nf_word,
)
from .words import parse_word


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="grouptower")
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--format", choices=("text", "structured"), default="text")

    p = sub.add_parser("reduce", parents=[common], help="print the normal form of a word")
    p.add_argument("word")
    p.add_argument("--tower", help="tower description file (default: bare rank-2 free group)")

    p = sub.add_parser("build", parents=[common], help="run the scheduled tower construction")
    p.add_argument("--stages", type=int, default=4)
    p.add_argument("--radius", type=int, default=2)
    p.add_argument("--power-bound", type=int, default=4)
    p.add_argument("--g0-mode", choices=("free", "classical"), default="free")
    p.add_argument("--check-candidates", type=int, default=200)

    p = sub.add_parser("lemmas", parents=[common], help="run the lemma oracle suite")
    p.add_argument("--radius", type=int, default=3)
    p.add_argument("--power-bound", type=int, default=4)
    p.add_argument("--order-bound", type=int, default=5)
    p.add_argument("--cap", type=int, default=4000)
    p.add_argument("--tower", help="run every oracle on this tower file instead of the references")

    p = sub.add_parser("field", parents=[common], help="exact extension-matrix identities")
    p.add_argument("--n", type=int, help="evaluate one instance of this degree")
    p.add_argument("--b", help="comma-separated coefficients b0,b1,...")
    p.add_argument("--alpha", default="1", help="exact scalar, e.g. 3/2")
    p.add_argument("--beta", default="2")
    p.add_argument("--cap", type=int, default=100, help="random instances per degree in suite mode")

    p = sub.add_parser("minstruct", parents=[common], help="ordered exponent-2 group checks")
    p.add_argument("--bound", type=int, default=8)
    p.add_argument("--support-bound", type=int, default=6)
    p.add_argument("--embed-bound", type=int, default=6)

    p = sub.add_parser("classical", parents=[common], help="pair-letter construction")
    p.add_argument("--radius", type=int, default=1)
    p.add_argument("--count", type=int, default=50)
    p.add_argument("--t-elt", default="g0")

    return parser


def _load_tower(path: str | None) -> ExtensionTower:
    if path is None:
        return ExtensionTower(2)
    return parse_tower(Path(path).read_text())


def cmd_reduce(args) -> tuple[RunReport, str | None]:
    tower = _load_tower(args.tower)
    word = parse_word(args.word)
    result = nf_word(word, tower)
    report = RunReport("reduce", {"word": args.word, "tower": args.tower or "(rank-2 free)"})
    report.add("normal-form", "ok", {"input": str(word), "normal_form": str(result)})
    return report, str(result)


def cmd_build(args) -> tuple[RunReport, None]:
    report = RunReport(
        "build",
        {
            "stages": args.stages,
            "radius": args.radius,
            "power_bound": args.power_bound,
            "g0_mode": args.g0_mode,
            "seed": args.seed,
            "check_candidates": args.check_candidates,
        },
    )
    state = constructions.initial_state(
        radius=args.radius, power_bound=args.power_bound, g0_mode=args.g0_mode
    )
    report.add(
        "base",
        "ok",
        {
            "g0_mode": args.g0_mode,
            "base_steps": state.base_steps,
            "ledger_size": len(state.ledger),
            "queue_pending": len(state.z_queue),
            "seed_ball_fraction": round(state.fractions[-1][0], 6),
        },
    )
    for i in range(args.stages):
        state = constructions.tower_step(state)
        step = state.tower.steps[-1]
        kind = "freeZ" if step.is_free else f"hnn target={step.target}"
        fallback = state.stage in state.fallbacks
        report.add(
            f"stage-{state.stage}",
            "ok",
            {
                "step": kind,
                "case2_fallback": fallback,
                "ledger_size": len(state.ledger),
                "queue_pending": len(state.z_queue),
                "seed_ball_fraction": round(state.fractions[-1][0], 6),
                "current_ball_fraction": round(state.fractions[-1][1], 6),
            },
        )
    if args.stages >= 1:
        cond = constructions.check_conditions(
            state, min_centralizer_candidates=args.check_candidates, seed=args.seed
        )
        report.add(
            "condition-growth",
            "pass" if cond.growth_pass else "fail",
            {"fresh_letter": cond.fresh_letter},
        )
        report.add(
            "condition-centralizers",
            "pass" if not any("centralizer" in v for v in cond.violations) else "counterexample",
            {
                "elements": len(cond.centralizer_results),
                "candidates_per_element": min(
                    (r["candidates"] for r in cond.centralizer_results), default=0
                ),
                "undecided": sum(r["undecided"] for r in cond.centralizer_results),
            },
            witnesses=[v for v in cond.violations if v.startswith("centralizer")],
        )
        report.add(
            "condition-rigidity",
            "pass" if not any("rigidity" in v for v in cond.violations) else "counterexample",
            {
                "elements": len(cond.rigidity_results),
                "undecided": sum(r["undecided"] for r in cond.rigidity_results),
            },
            witnesses=[v for v in cond.violations if v.startswith("rigidity")],
        )
        report.add(
            "condition-progress",
            "pass" if cond.progress_pass else "fail",
            {"seed_ball_fractions": [round(f[0], 6) for f in state.fractions]},
        )
    return report, None


def cmd_lemmas(args) -> tuple[RunReport, None]:
    report = RunReport(
        "lemmas",
        {
            "radius": args.radius,
            "power_bound": args.power_bound,
            "order_bound": args.order_bound,
            "cap": args.cap,
            "seed": args.seed,
            "tower": args.tower or "(reference towers)",
        },
    )
    if args.tower is None:
        results = oracles.run_standard_suite(
            radius=args.radius,
            power_bound=args.power_bound,
            order_bound=args.order_bound,
            sample_cap=args.cap,
            seed=args.seed,
        )
    else:
        tower = _load_tower(args.tower)
        spec = oracles.BallSpec(radius=args.radius, sample_cap=args.cap, seed=args.seed)
        pair_spec = oracles.BallSpec(radius=min(args.radius, 2), sample_cap=args.cap, seed=args.seed)
        results = [("tower", fn) for fn in (
            oracles.check_dodatkowy(spec, tower, args.power_bound),
            oracles.check_cent(pair_spec, tower),
            oracles.check_cykr(spec, tower, min(args.power_bound, 3)),
            oracles.check_ip(spec, tower),
            oracles.check_nn(pair_spec, tower, args.power_bound),
            oracles.check_jsc(pair_spec, tower, args.power_bound),
            oracles.check_torsion(spec, tower, args.order_bound),
        )]
        if tower.num_steps and tower.steps[-1].is_free:
            results.insert(0, ("tower", oracles.check_aabb(spec, tower)))
    for name, verdict in results:
        report.add(
            f"{verdict.lemma_id}@{name}",
            verdict.outcome,
            {
                "checked": verdict.checked,
                "premise_hits": verdict.premise_hits,
                "undecided": verdict.undecided,
            },
            witnesses=[" | ".join(w) for w in verdict.witnesses[:8]],
        )
    return report, None


def cmd_field(args) -> tuple[RunReport, str | None]:
    if args.n is not None:
        coeffs = [Fraction(c) for c in (args.b or "1,1").split(",")]
        if len(coeffs) != args.n:
            raise SystemExit(f"need {args.n} coefficients, got {len(coeffs)}")
        spec = fieldext.ExtFieldSpec(tuple(coeffs))
        alpha, beta = Fraction(args.alpha), Fraction(args.beta)
        mul = fieldext.mul_matrix(alpha, spec)
        inv = fieldext.explicit_inverse(alpha, spec)
        m = fieldext.m_matrix(alpha, beta, spec)
        entry = fieldext.m_entry_formula(alpha, beta, spec)
        report = RunReport(
            "field",
            {"n": args.n, "b": args.b or "1,1", "alpha": str(alpha), "beta": str(beta)},
        )
        report.add(
            "instance",
            "pass" if m.entry(spec.m - 1, spec.m) == entry else "fail",
            {
                "mul_rows": mul.format_rows().split("\n"),
                "inverse_rows": inv.format_rows().split("\n"),
                "m_rows": m.format_rows().split("\n"),
                "entry_formula": str(entry),
            },
        )
        text = "\n".join(
            ["mul:", mul.format_rows(), "inverse:", inv.format_rows(), "m:", m.format_rows(),
             f"entry(m-1,m) = {entry}"]
        )
        return report, text
    report = RunReport("field", {"cap": args.cap, "seed": args.seed})
    rng = random.Random(args.seed)
    for n in range(2, 7):
        ok = 0
        for _ in range(args.cap):
            spec, alpha, beta = fieldext.random_instance(rng, n)
            ident = fieldext.SquareMatrix.identity(n)
            if (fieldext.explicit_inverse(alpha, spec) @ fieldext.mul_matrix(alpha, spec)).rows != ident.rows:
                report.add(f"inverse-identity-n{n}", "counterexample", {"alpha": str(alpha)})
                break
            if fieldext.m_matrix(alpha, beta, spec).entry(n - 2, n - 1) != fieldext.m_entry_formula(alpha, beta, spec):
                report.add(f"entry-formula-n{n}", "counterexample", {"alpha": str(alpha)})
                break
            ok += 1
        else:
            report.add(f"identities-n{n}", "pass", {"instances": ok})
    worked = fieldext.explicit_inverse(Fraction(1), fieldext.ExtFieldSpec((Fraction(1), Fraction(1))))
    report.add(
        "worked-instance",
        "pass" if worked.rows == ((Fraction(2), Fraction(-1)), (Fraction(-1), Fraction(1))) else "fail",
        {"rows": worked.format_rows().split("\n")},
    )
    for n in (2, 3, 4):
        rng_n = random.Random(args.seed + n)
        spec, _, _ = fieldext.random_instance(rng_n, n)
        numerator = fieldext.m_entry_numerator_symbolic(spec)
        report.add(
            f"symbolic-nonvanishing-n{n}",
            "pass" if not numerator.is_zero and not fieldext.symbolic_denominator(spec).is_zero else "fail",
            {"terms": len(numerator.coeffs)},
        )
    return report, None


def cmd_minstruct(args) -> tuple[RunReport, None]:
    report = RunReport(
        "minstruct",
        {"bound": args.bound, "support_bound": args.support_bound, "embed_bound": args.embed_bound},
    )
    for mode in (minstruct.OMEGA, minstruct.MODE_I):
        suite = minstruct.axiom_suite(mode, args.bound)
        for res in suite.results:
            report.add(
                f"{mode}:{res.axiom}",
                "pass" if res.passed else "counterexample",
                {"checked": res.checked},
                witnesses=res.witnesses,
            )
    pts = list(range(args.support_bound))
    dom = minstruct.elements_over(minstruct.OMEGA, pts)
    mismatch = 0
    pairs = 0
    for a in dom:
        for b in dom:
            if minstruct.less(a, b):
                pairs += 1
                gap = minstruct.points_between(minstruct.OMEGA, minstruct.degree(a), minstruct.degree(b))
                if minstruct.max_chain_brute(a, b, dom) != gap:
                    mismatch += 1
    report.add(
        "chain-cross-check",
        "pass" if mismatch == 0 else "counterexample",
        {"pairs": pairs, "mismatches": mismatch},
    )
    embedded = minstruct.embedding_check(args.embed_bound)
    report.add("embedding", "pass" if embedded else "counterexample", {"bound": args.embed_bound})
    return report, None


def cmd_classical(args) -> tuple[RunReport, None]:
    report = RunReport(
        "classical",
        {"radius": args.radius, "count": args.count, "t_elt": args.t_elt, "seed": args.seed},
    )
    state = constructions.classical_state(2)
    state = constructions.classical_step(state, args.radius)
    sound = 0
    for (s, t), stage in sorted(state.pair_stage.items(), key=lambda kv: kv[1]):
        letter = parse_word(f"t{stage}")
        if nf_word(letter * s * letter.inverse(), state.tower) == nf_word(t, state.tower):
            sound += 1
    report.add(
        "pair-relations",
        "pass" if sound == len(state.pair_stage) else "counterexample",
        {"pairs": len(state.pair_stage), "sound": sound},
    )
    try:
        witnesses = constructions.classical_centralizer_witnesses(
            state, parse_word(args.t_elt), args.count
        )
        distinct = len({w.word for w in witnesses})
        report.add(
            "centralizer-witnesses",
            "pass" if distinct >= args.count else "fail",
            {"requested": args.count, "distinct": distinct},
        )
    except constructions.InsufficientPairs as exc:
        report.add("centralizer-witnesses", "error", {"reason": str(exc)})
    return report, None


_HANDLERS = {
    "reduce": cmd_reduce,
    "build": cmd_build,
    "lemmas": cmd_lemmas,
    "field": cmd_field,
    "minstruct": cmd_minstruct,
    "classical": cmd_classical,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    started = time.monotonic()
    try:
        report, plain = _HANDLERS[args.command](args)
    except (ValueError, MembershipUndecided, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if args.format == "structured":
        sys.stdout.write(report.to_json())
    elif plain is not None:
        print(plain)
    else:
        sys.stdout.write(report.to_text(elapsed=time.monotonic() - started))
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
