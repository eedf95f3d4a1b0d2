"""Command-line front end.

Subcommands:

    decide   decide one sequent (Core by default, intuitionistic with
             --logic int); exit 0 provable, 1 unprovable, 2 error
    check    check a derivation file; exit 0 valid, 1 invalid, 2 error
    repro    run the bundled experiment suite and write a deterministic
             report; exit 3 on any checker/engine disagreement
    atlas    enumerate a bounded sequent family to CSV with Core and
             intuitionistic verdicts

JSON goes to standard output, human-readable text to standard error.
The environment variable CORESEQ_MEMO_CAP overrides the search cap.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import __version__
from .admissibility import (
    l_top_transform,
    test_admissibility,
    top_equivalence_study,
    weakening_transform,
)
from .engine import DEFAULT_MEMO_CAP, Engine, Provable, ResourceLimitError
from .intuitionistic import IntProver, cross_check, decide_int
from .kernel import (
    RULE_NAMES,
    check_derivation,
    check_rule,
    derivation_to_json,
    fixture_derivations,
    height,
    load_derivation,
    save_derivation,
)
from .syntax import (
    Atom,
    ParseError,
    Sequent,
    formula_universe,
    parse_formula,
    parse_sequent,
    print_sequent,
    sequent_family,
    sequent_weight,
)

_ATOM_SUPPLY = ("p", "q", "r", "s", "t", "u", "v", "w")


def _memo_cap() -> int:
    raw = os.environ.get("CORESEQ_MEMO_CAP")
    if raw is None:
        return DEFAULT_MEMO_CAP
    try:
        return int(raw)
    except ValueError:
        raise SystemExit(f"coreseq: invalid CORESEQ_MEMO_CAP {raw!r}")


def _say(msg: str) -> None:
    print(msg, file=sys.stderr)


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _stats_json(stats) -> dict:
    return {
        "goals_expanded": stats.goals_expanded,
        "distinct_goals": stats.distinct_goals,
        "max_weight_seen": stats.max_weight_seen,
        "mode": stats.mode,
    }


def _decision_json(result) -> dict:
    if isinstance(result, Provable):
        return {
            "status": "provable",
            "min_height": result.min_height,
            "derivation": derivation_to_json(result.derivation),
            "stats": _stats_json(result.stats),
        }
    return {"status": "unprovable", "stats": _stats_json(result.certificate)}


# ---------------------------------------------------------------------------
# decide


def _cmd_decide(args) -> int:
    try:
        goal = parse_sequent(args.sequent)
    except ParseError as e:
        _say(f"coreseq: parse error: {e}")
        if args.json:
            sys.stdout.write(_dump({"status": "error", "error": str(e), "position": e.position}))
        return 2

    if args.logic == "int":
        if args.emit_derivation:
            _say("coreseq: --emit-derivation is only available for core logic")
            return 2
        ok = decide_int(goal)
        if args.json:
            sys.stdout.write(_dump({"status": "provable" if ok else "unprovable", "logic": "int"}))
        _say(f"{print_sequent(goal)}: {'intuitionistically provable' if ok else 'intuitionistically unprovable'}")
        return 0 if ok else 1

    engine = Engine(args.mode, memo_cap=_memo_cap())
    try:
        result = engine.decide(goal)
    except ResourceLimitError as e:
        _say(f"coreseq: resource limit: {e}")
        if args.json:
            sys.stdout.write(_dump({"status": "resource-limit", "error": str(e)}))
        return 2
    if args.json:
        sys.stdout.write(_dump(_decision_json(result)))
    if isinstance(result, Provable):
        if args.emit_derivation:
            save_derivation(result.derivation, args.emit_derivation)
            _say(f"derivation written to {args.emit_derivation}")
        _say(f"{print_sequent(goal)}: provable, minimal height {result.min_height}")
        return 0
    _say(f"{print_sequent(goal)}: unprovable (exhausted {result.certificate.distinct_goals} goals)")
    return 1


# ---------------------------------------------------------------------------
# check


def _cmd_check(args) -> int:
    try:
        d = load_derivation(args.path)
    except (OSError, ValueError, ParseError) as e:
        _say(f"coreseq: cannot load derivation: {e}")
        if args.json:
            sys.stdout.write(_dump({"status": "error", "error": str(e)}))
        return 2
    v = check_derivation(d, args.mode)
    if v is None:
        if args.json:
            sys.stdout.write(_dump({"status": "valid", "height": height(d), "conclusion": print_sequent(d.conclusion)}))
        _say(f"valid derivation of {print_sequent(d.conclusion)} (height {height(d)})")
        return 0
    where = "root" if not v.path else "/".join(map(str, v.path))
    if args.json:
        sys.stdout.write(_dump({"status": "invalid", "clause": v.clause, "message": v.message, "path": list(v.path)}))
    _say(f"invalid: {v.message} [{v.clause}] at {where}")
    return 1


# ---------------------------------------------------------------------------
# repro


class _InternalDisagreement(Exception):
    pass


def _recheck(result, goal: Sequent, mode: str):
    """Engine output must satisfy the checker; anything else is a bug."""
    if isinstance(result, Provable):
        v = check_derivation(result.derivation, mode)
        if v is not None:
            raise _InternalDisagreement(
                f"engine derivation for {print_sequent(goal)} fails the checker: {v.message}"
            )
        if result.derivation.conclusion != goal:
            raise _InternalDisagreement(
                f"engine derivation concludes {print_sequent(result.derivation.conclusion)}, not {print_sequent(goal)}"
            )
        if height(result.derivation) != result.min_height:
            raise _InternalDisagreement(
                f"reported minimal height {result.min_height} does not match the witness"
            )


def _cmd_repro(args) -> int:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    mode = args.mode
    top = parse_formula(args.top)
    cap = _memo_cap()

    fixtures = fixture_derivations()
    report: dict = {"version": __version__, "mode": mode, "top": args.top, "items": []}
    items = report["items"]

    def add(item: dict) -> None:
        items.append(item)

    def fresh() -> Engine:
        return Engine(mode, memo_cap=cap)

    try:
        # eq1: the first Lewis paradox is underivable in both modes
        eq1 = parse_sequent("~A, A |- B")
        eq1_status = {}
        for m in ("tennant", "strict-table"):
            res = Engine(m, memo_cap=cap).decide(eq1)
            _recheck(res, eq1, m)
            eq1_status[m] = _decision_json(res)
        add({
            "id": "eq1",
            "query": print_sequent(eq1),
            "status": "unprovable" if all(v["status"] == "unprovable" for v in eq1_status.values()) else "provable",
            "by_mode": eq1_status,
        })

        # eq2: the conditional form is derivable, matching the bundled tree
        eq2 = parse_sequent("|- ~A -> (A -> B)")
        res2 = fresh().decide(eq2)
        _recheck(res2, eq2, mode)
        eq2_path = out / "eq2-derivation.json"
        if isinstance(res2, Provable):
            save_derivation(res2.derivation, eq2_path)
        add({
            "id": "eq2",
            "query": print_sequent(eq2),
            "status": "provable" if isinstance(res2, Provable) else "unprovable",
            "min_height": res2.min_height if isinstance(res2, Provable) else None,
            "matches_d1_upper": isinstance(res2, Provable) and res2.derivation == fixtures["d1-upper"],
            "evidence": eq2_path.name,
        })

        # eq3: the d1 tree extended by a final step outside the rule table
        bad = fixtures["d1-full-with-ltop"]
        v = check_derivation(bad, mode)
        add({
            "id": "eq3-d1",
            "status": "invalid" if v is not None else "valid",
            "clause": v.clause if v else None,
            "message": v.message if v else None,
            "path": list(v.path) if v else None,
            "root_rule": bad.rule,
            "unjustified_leaf": print_sequent(bad.premises[1].conclusion),
            "leaf_note": "underivability claims have no judgment form in the calculus; "
            "the leaf stands in for one and carries no valid justification",
        })

        # eq4: the same end-sequent via the seven-node tree
        d2 = fixtures["d2"]
        v = check_derivation(d2, mode)
        if v is not None:
            raise _InternalDisagreement(f"bundled d2 fixture rejected: {v.message}")
        eq4 = d2.conclusion
        res4 = fresh().decide(eq4)
        _recheck(res4, eq4, mode)
        if not isinstance(res4, Provable):
            raise _InternalDisagreement("d2 checks as valid but its conclusion is reported unprovable")
        eq4_path = out / "eq4-derivation.json"
        save_derivation(res4.derivation, eq4_path)
        add({
            "id": "eq4-d2",
            "query": print_sequent(eq4),
            "status": "valid+provable",
            "fixture_height": height(d2),
            "min_height": res4.min_height,
            "evidence": eq4_path.name,
        })

        # absurdity form of eq1's antecedent
        pair = parse_sequent("~A, A |-")
        resp = fresh().decide(pair)
        _recheck(resp, pair, mode)
        add({
            "id": "eq1-absurd",
            "query": print_sequent(pair),
            "status": "provable" if isinstance(resp, Provable) else "unprovable",
            "min_height": resp.min_height if isinstance(resp, Provable) else None,
        })

        shared = fresh()

        # the two-line equivalence fixtures plus the three-query study
        for name in ("lemma1-right", "lemma1-left"):
            v = check_derivation(fixtures[name], mode)
            if v is not None:
                raise _InternalDisagreement(f"bundled {name} fixture rejected: {v.message}")
        study = top_equivalence_study(Atom("q"), top, mode=mode, engine=shared)
        study_path = out / "lemma1-study.json"
        study_path.write_text(_dump(study.to_json()), encoding="utf-8")
        add({
            "id": "lemma1",
            "status": "valid",
            "fixtures": ["lemma1-right", "lemma1-left"],
            "study": study.to_json(),
            "evidence": study_path.name,
        })

        for item_id, name in (("contradiction1", "contradiction1"), ("contradiction2", "contradiction2")):
            v = check_derivation(fixtures[name], mode)
            add({
                "id": item_id,
                "status": "valid" if v is None else "invalid",
                "conclusion": print_sequent(fixtures[name].conclusion),
                "height": height(fixtures[name]),
            })
            if v is not None:
                raise _InternalDisagreement(f"bundled {name} fixture rejected: {v.message}")

        # prefixing a theorem on the left, tested over a bounded family
        ltop_universe = formula_universe(("p", "q"), 5)
        verdict = test_admissibility(l_top_transform(top), ltop_universe, 5, mode=mode, engine=shared)
        ltop_path = out / "ltop-verdict.json"
        ltop_path.write_text(_dump(verdict.to_json()), encoding="utf-8")
        add({
            "id": "ltop-verdict",
            "status": verdict.status,
            "first_witness": verdict.witnesses[0].to_json() if verdict.witnesses else None,
            "evidence": ltop_path.name,
        })
        for w in verdict.witnesses:
            again = shared.min_height(w.transformed)
            if (again is not None) != w.transformed_provable:
                raise _InternalDisagreement("admissibility witness does not re-verify")

        # left weakening: the schema rejection plus the bounded-family verdict
        wk_conclusion = parse_sequent("B, ~A, A |-")
        wk_premise = parse_sequent("~A, A |-")
        rejections = {}
        for rule in RULE_NAMES:
            rv = check_rule(wk_conclusion, rule, [wk_premise], mode)
            if rv is None:
                raise _InternalDisagreement(f"weakening step unexpectedly valid as {rule}")
            rejections[rule] = rv.clause
        res_wk = shared.decide(wk_conclusion)
        _recheck(res_wk, wk_conclusion, mode)
        wk_verdict = test_admissibility(
            weakening_transform(Atom("q")), formula_universe(("p", "q"), 2), 4, mode=mode, engine=shared
        )
        wk_path = out / "weakening-verdict.json"
        wk_path.write_text(_dump(wk_verdict.to_json()), encoding="utf-8")
        add({
            "id": "weakening",
            "status": wk_verdict.status,
            "step_conclusion": print_sequent(wk_conclusion),
            "step_premise": print_sequent(wk_premise),
            "step_rejected_as": rejections,
            "weakened_pair_status": "provable" if isinstance(res_wk, Provable) else "unprovable",
            "evidence": wk_path.name,
        })

        # oracle cross-check over the standard small family
        universe = [parse_formula(t) for t in ("p", "q", "~p", "~q", "p & q", "p | q", "p -> q", "q -> p", "p -> p")]
        cc = cross_check(universe, 6, mode=mode, engine=shared)
        cc_path = out / "crosscheck.json"
        cc_path.write_text(_dump(cc.to_json()), encoding="utf-8")
        if cc.violations:
            raise _InternalDisagreement(
                f"{len(cc.violations)} Core-provable sequents are intuitionistically unprovable"
            )
        add({
            "id": "crosscheck",
            "status": "ok",
            "total": cc.total,
            "divergences": len(cc.divergences),
            "evidence": cc_path.name,
        })
    except _InternalDisagreement as e:
        _say(f"coreseq: internal disagreement: {e}")
        return 3
    except ResourceLimitError as e:
        _say(f"coreseq: resource limit: {e}")
        return 2

    text = _dump(report)
    (out / "report.json").write_text(text, encoding="utf-8")
    sys.stdout.write(text)
    _say(f"report and evidence written to {out}/")
    return 0


# ---------------------------------------------------------------------------
# atlas


def _cmd_atlas(args) -> int:
    if args.atoms < 1 or args.atoms > len(_ATOM_SUPPLY):
        _say(f"coreseq: --atoms must be between 1 and {len(_ATOM_SUPPLY)}")
        return 2
    atoms = _ATOM_SUPPLY[: args.atoms]
    universe = formula_universe(atoms, args.weight_cap)
    family = sequent_family(universe, args.weight_cap)
    engine = Engine(args.mode, memo_cap=_memo_cap())
    prover = IntProver()

    def row(s: Sequent) -> tuple:
        h = engine.min_height(s)
        iok = prover.decide(s)
        core = "provable" if h is not None else "unprovable"
        intu = "provable" if iok else "unprovable"
        divergence = iok and h is None
        return (
            print_sequent(s),
            sequent_weight(s),
            core,
            "" if h is None else h,
            intu,
            "yes" if divergence else "",
        )

    try:
        if args.workers > 1:
            from concurrent.futures import ThreadPoolExecutor

            with ThreadPoolExecutor(max_workers=args.workers) as pool:
                rows = list(pool.map(row, family))
        else:
            rows = [row(s) for s in family]
    except ResourceLimitError as e:
        _say(f"coreseq: resource limit, no output written: {e}")
        return 2

    import csv
    import io

    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(["sequent", "weight", "core", "core_min_height", "int", "divergence"])
    writer.writerows(rows)
    text = buffer.getvalue()
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)

    total = len(rows)
    core_n = sum(1 for r in rows if r[2] == "provable")
    int_n = sum(1 for r in rows if r[4] == "provable")
    div_n = sum(1 for r in rows if r[5] == "yes")
    _say(
        f"atlas: {total} sequents over {args.atoms} atoms (weight cap {args.weight_cap}); "
        f"core-provable {core_n}, intuitionistically provable {int_n}, divergences {div_n}"
    )
    return 0


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="coreseq", description=__doc__.split("\n\n")[0])
    parser.add_argument("--version", action="version", version=f"coreseq {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("decide", help="decide derivability of one sequent")
    p.add_argument("sequent")
    p.add_argument("--mode", choices=("tennant", "strict-table"), default="tennant")
    p.add_argument("--logic", choices=("core", "int"), default="core")
    p.add_argument("--json", action="store_true")
    p.add_argument("--emit-derivation", metavar="PATH")
    p.set_defaults(func=_cmd_decide)

    p = sub.add_parser("check", help="check a derivation file")
    p.add_argument("path")
    p.add_argument("--mode", choices=("tennant", "strict-table"), default="tennant")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_check)

    p = sub.add_parser("repro", help="run the bundled experiment suite")
    p.add_argument("--out", default="repro-out")
    p.add_argument("--mode", choices=("tennant", "strict-table"), default="tennant")
    p.add_argument("--top", default="p -> p", help="concrete theorem used for the prefix studies")
    p.set_defaults(func=_cmd_repro)

    p = sub.add_parser("atlas", help="CSV of verdicts over a bounded family")
    p.add_argument("--atoms", type=int, required=True)
    p.add_argument("--weight-cap", type=int, required=True)
    p.add_argument("--out")
    p.add_argument("--mode", choices=("tennant", "strict-table"), default="tennant")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=_cmd_atlas)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ParseError as e:
        _say(f"coreseq: parse error: {e}")
        return 2


if __name__ == "__main__":
    sys.exit(main())
