"""Trusted checker for Core-logic sequent derivations.

Exactly eleven rules are recognised; each is checked against its schema
under set semantics (antecedents are sets, so "Gamma, Delta" means union
and side formulas may coincide with principal ones).  Two succedent modes
exist: the default ``tennant`` mode lets the shared succedent of LAnd and
LImp be the absurdity marker as well as a formula, while ``strict-table``
restricts those two rules to formula succedents.  All other rules are
identical in both modes.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Sequence

from .syntax import (
    And,
    Imp,
    Neg,
    Or,
    Sequent,
    parse_sequent,
    print_sequent,
)

RULE_NAMES = (
    "Ax",
    "LNeg",
    "RNeg",
    "LAnd",
    "RAnd",
    "LOr",
    "ROr1",
    "ROr2",
    "LImp",
    "RImpA",
    "RImpB",
)

RULE_ARITY = {
    "Ax": 0,
    "LNeg": 1,
    "RNeg": 1,
    "LAnd": 1,
    "RAnd": 2,
    "LOr": 2,
    "ROr1": 1,
    "ROr2": 1,
    "LImp": 2,
    "RImpA": 1,
    "RImpB": 1,
}

MODES = ("tennant", "strict-table")


@dataclass(frozen=True)
class Violation:
    """Structured rejection: clause identifier, human message, tree path."""

    clause: str
    message: str
    path: tuple[int, ...] = ()

    def at(self, path: tuple[int, ...]) -> "Violation":
        return Violation(self.clause, self.message, path)


def _check_ax(c: Sequent, ps, mode):
    if c.succedent is None:
        return Violation("ax-succedent", "Ax concludes a formula, not the absurdity marker")
    if len(c.antecedent) != 1:
        return Violation("ax-singleton", "Ax requires a singleton antecedent")
    if c.antecedent[0] != c.succedent:
        return Violation("ax-mismatch", "Ax antecedent must equal its succedent")
    return None


def _check_lneg(c: Sequent, ps, mode):
    (p,) = ps
    if c.succedent is not None:
        return Violation("lneg-conclusion", "LNeg concludes the absurdity marker")
    if p.succedent is None:
        return Violation("lneg-premise", "LNeg premise must conclude a formula")
    if c.antecedent_set() != p.antecedent_set() | {Neg(p.succedent)}:
        return Violation(
            "lneg-antecedent",
            "LNeg conclusion antecedent must be the premise antecedent "
            "plus the negated premise succedent",
        )
    return None


def _check_rneg(c: Sequent, ps, mode):
    (p,) = ps
    if not isinstance(c.succedent, Neg):
        return Violation("rneg-conclusion", "RNeg concludes a negation")
    if p.succedent is not None:
        return Violation("rneg-premise", "RNeg premise must have an empty succedent")
    a = c.succedent.sub
    if a in c.antecedent_set():
        return Violation("rneg-retained", "RNeg discharged formula may not remain in the conclusion")
    if p.antecedent_set() != c.antecedent_set() | {a}:
        return Violation(
            "rneg-antecedent",
            "RNeg premise antecedent must be the conclusion antecedent plus the discharged formula",
        )
    return None


def _check_land(c: Sequent, ps, mode):
    (p,) = ps
    if mode == "strict-table" and c.succedent is None:
        return Violation("land-strict-succedent", "LAnd succedent must be a formula in strict-table mode")
    if p.succedent != c.succedent:
        return Violation("land-succedent", "LAnd premise and conclusion succedents must agree")
    cant, pant = c.antecedent_set(), p.antecedent_set()
    candidates = [f for f in c.antecedent if isinstance(f, And)]
    if not candidates:
        return Violation("land-no-principal", "LAnd conclusion has no conjunction to introduce")
    side_failed = False
    for f in candidates:
        parts = {f.left, f.right}
        if not pant & parts:
            side_failed = True
            continue
        if cant == {f} | (pant - parts):
            return None
    if side_failed and len(candidates) == 1:
        return Violation("land-side-condition", "LAnd side condition violated: premise shares no conjunct")
    return Violation("land-antecedent", "no conjunction in the conclusion matches the LAnd schema")


def _check_rand(c: Sequent, ps, mode):
    p1, p2 = ps
    if not isinstance(c.succedent, And):
        return Violation("rand-conclusion", "RAnd concludes a conjunction")
    if p1.succedent != c.succedent.left:
        return Violation("rand-left-premise", "first RAnd premise must conclude the left conjunct")
    if p2.succedent != c.succedent.right:
        return Violation("rand-right-premise", "second RAnd premise must conclude the right conjunct")
    if c.antecedent_set() != p1.antecedent_set() | p2.antecedent_set():
        return Violation("rand-antecedent", "RAnd conclusion antecedent must be the union of the premises'")
    return None


def _check_lor(c: Sequent, ps, mode):
    p1, p2 = ps
    s1, s2 = p1.succedent, p2.succedent
    if s1 is not None and s2 is not None and s1 != s2:
        return Violation("lor-premise-agreement", "LOr formula premises must conclude the same formula")
    required = s1 if s1 is not None else s2
    if c.succedent != required:
        return Violation(
            "lor-succedent",
            "LOr conclusion succedent must be the common premise formula, "
            "or the absurdity marker when both premises end in it",
        )
    cant = c.antecedent_set()
    pant1, pant2 = p1.antecedent_set(), p2.antecedent_set()
    for f in c.antecedent:
        if not isinstance(f, Or):
            continue
        a, b = f.left, f.right
        if a not in pant1 or b not in pant2:
            continue
        for d in (pant1 - {a}, pant1):
            for g in (pant2 - {b}, pant2):
                if cant == {f} | d | g:
                    return None
    return Violation("lor-schema", "no disjunction in the conclusion matches the LOr schema")


def _check_ror(which: str, c: Sequent, ps, mode):
    (p,) = ps
    if not isinstance(c.succedent, Or):
        return Violation("ror-conclusion", f"{which} concludes a disjunction")
    wanted = c.succedent.left if which == "ROr1" else c.succedent.right
    if p.succedent != wanted:
        side = "left" if which == "ROr1" else "right"
        return Violation("ror-premise", f"{which} premise must conclude the {side} disjunct")
    if p.antecedent_set() != c.antecedent_set():
        return Violation("ror-antecedent", f"{which} premise and conclusion antecedents must agree")
    return None


def _check_limp(c: Sequent, ps, mode):
    p1, p2 = ps
    if mode == "strict-table" and c.succedent is None:
        return Violation("limp-strict-succedent", "LImp succedent must be a formula in strict-table mode")
    if p1.succedent is None:
        return Violation("limp-minor", "first LImp premise must conclude a formula")
    if p2.succedent != c.succedent:
        return Violation("limp-succedent", "second LImp premise succedent must agree with the conclusion")
    a = p1.succedent
    cant = c.antecedent_set()
    pant1, pant2 = p1.antecedent_set(), p2.antecedent_set()
    for f in c.antecedent:
        if not isinstance(f, Imp) or f.left != a:
            continue
        if f.right not in pant2:
            continue
        for g in (pant2 - {f.right}, pant2):
            if cant == {f} | pant1 | g:
                return None
    return Violation("limp-schema", "no conditional in the conclusion matches the LImp schema")


def _check_rimpa(c: Sequent, ps, mode):
    (p,) = ps
    if not isinstance(c.succedent, Imp):
        return Violation("rimpa-conclusion", "RImpA concludes a conditional")
    if p.succedent is not None:
        return Violation("rimpa-premise", "RImpA premise must have an empty succedent")
    if p.antecedent_set() != c.antecedent_set() | {c.succedent.left}:
        return Violation(
            "rimpa-antecedent",
            "RImpA premise antecedent must be the conclusion antecedent plus the conditional's antecedent",
        )
    return None


def _check_rimpb(c: Sequent, ps, mode):
    (p,) = ps
    if not isinstance(c.succedent, Imp):
        return Violation("rimpb-conclusion", "RImpB concludes a conditional")
    if p.succedent != c.succedent.right:
        return Violation("rimpb-premise", "RImpB premise must conclude the conditional's consequent")
    if c.antecedent_set() != p.antecedent_set() - {c.succedent.left}:
        return Violation(
            "rimpb-antecedent",
            "RImpB conclusion antecedent must be the premise antecedent "
            "with the conditional's antecedent removed",
        )
    return None


_RULE_CHECKS = {
    "Ax": _check_ax,
    "LNeg": _check_lneg,
    "RNeg": _check_rneg,
    "LAnd": _check_land,
    "RAnd": _check_rand,
    "LOr": _check_lor,
    "ROr1": lambda c, ps, m: _check_ror("ROr1", c, ps, m),
    "ROr2": lambda c, ps, m: _check_ror("ROr2", c, ps, m),
    "LImp": _check_limp,
    "RImpA": _check_rimpa,
    "RImpB": _check_rimpb,
}


def check_rule(
    conclusion: Sequent,
    rule: str,
    premises: Sequence[Sequent],
    mode: str = "tennant",
) -> Violation | None:
    """Check one inference step; None means the instance is valid."""
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}")
    if rule not in RULE_ARITY:
        return Violation("unknown-rule", f"unknown rule {rule!r}")
    if len(premises) != RULE_ARITY[rule]:
        return Violation(
            "arity",
            f"{rule} takes {RULE_ARITY[rule]} premise(s), got {len(premises)}",
        )
    return _RULE_CHECKS[rule](conclusion, tuple(premises), mode)


# ---------------------------------------------------------------------------
# Derivations


@dataclass(frozen=True)
class Derivation:
    conclusion: Sequent
    rule: str
    premises: tuple["Derivation", ...] = ()


def height(d: Derivation) -> int:
    """0 at axioms, otherwise one more than the tallest premise."""
    if not d.premises:
        return 0
    return 1 + max(height(p) for p in d.premises)


def check_derivation(d: Derivation, mode: str = "tennant") -> Violation | None:
    """Depth-first check of every node; reports the first failure with its path."""
    stack: list[tuple[Derivation, tuple[int, ...]]] = [(d, ())]
    while stack:
        node, path = stack.pop()
        v = check_rule(node.conclusion, node.rule, [p.conclusion for p in node.premises], mode)
        if v is not None:
            return v.at(path)
        for i in range(len(node.premises) - 1, -1, -1):
            stack.append((node.premises[i], path + (i,)))
    return None


# ---------------------------------------------------------------------------
# JSON derivation files

_NODE_KEYS = {"rule", "conclusion", "premises"}


def derivation_to_json(d: Derivation) -> dict:
    return {
        "rule": d.rule,
        "conclusion": print_sequent(d.conclusion),
        "premises": [derivation_to_json(p) for p in d.premises],
    }


def derivation_from_json(obj) -> Derivation:
    if not isinstance(obj, dict):
        raise ValueError(f"derivation node must be an object, got {type(obj).__name__}")
    unknown = set(obj) - _NODE_KEYS
    if unknown:
        raise ValueError(f"unknown derivation node keys: {sorted(unknown)}")
    if "rule" not in obj or "conclusion" not in obj:
        raise ValueError("derivation node needs 'rule' and 'conclusion'")
    if not isinstance(obj["rule"], str):
        raise ValueError("'rule' must be a string")
    conclusion = parse_sequent(obj["conclusion"])
    premises = tuple(derivation_from_json(p) for p in obj.get("premises", []))
    return Derivation(conclusion, obj["rule"], premises)


def load_derivation(path) -> Derivation:
    with open(path, "r", encoding="utf-8") as fh:
        return derivation_from_json(json.load(fh))


def save_derivation(d: Derivation, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(derivation_to_json(d), fh, indent=2, sort_keys=True)
        fh.write("\n")


# ---------------------------------------------------------------------------
# Bundled fixtures

FIXTURE_NAMES = (
    "lemma1-right",
    "lemma1-left",
    "contradiction1",
    "contradiction2",
    "d1-upper",
    "d2",
    "d1-full-with-ltop",
)


def _ax(text: str) -> Derivation:
    return Derivation(parse_sequent(text), "Ax")


def fixture_derivations() -> dict[str, Derivation]:
    """The bundled derivation trees, keyed by fixture name.

    Schematic set variables are instantiated with the single atom ``d``
    and the schematic theorem with ``p -> p`` carrying its own two-line
    proof.  Every fixture is checker-valid except ``d1-full-with-ltop``,
    whose root uses a rule outside the calculus.
    """
    top_proof = Derivation(parse_sequent("|- p -> p"), "RImpB", (_ax("p |- p"),))

    lemma1_right = Derivation(
        parse_sequent("d |- (p -> p) & d"),
        "RAnd",
        (top_proof, _ax("d |- d")),
    )
    lemma1_left = Derivation(
        parse_sequent("(p -> p) & d |- d"),
        "LAnd",
        (_ax("d |- d"),),
    )

    contradiction1 = Derivation(
        parse_sequent("~(d -> c), ((p -> p) & d) -> c |-"),
        "LNeg",
        (
            Derivation(
                parse_sequent("((p -> p) & d) -> c |- d -> c"),
                "RImpB",
                (
                    Derivation(
                        parse_sequent("d, ((p -> p) & d) -> c |- c"),
                        "LImp",
                        (
                            Derivation(
                                parse_sequent("d |- (p -> p) & d"),
                                "RAnd",
                                (top_proof, _ax("d |- d")),
                            ),
                            _ax("c |- c"),
                        ),
                    ),
                ),
            ),
        ),
    )

    contradiction2 = Derivation(
        parse_sequent("~(((p -> p) & d) -> c), d -> c |-"),
        "LNeg",
        (
            Derivation(
                parse_sequent("d -> c |- ((p -> p) & d) -> c"),
                "RImpB",
                (
                    Derivation(
                        parse_sequent("(p -> p) & d, d -> c |- c"),
                        "LImp",
                        (
                            Derivation(
                                parse_sequent("(p -> p) & d |- d"),
                                "LAnd",
                                (_ax("d |- d"),),
                            ),
                            _ax("c |- c"),
                        ),
                    ),
                ),
            ),
        ),
    )

    d1_upper = Derivation(
        parse_sequent("|- ~A -> (A -> B)"),
        "RImpB",
        (
            Derivation(
                parse_sequent("~A |- A -> B"),
                "RImpA",
                (
                    Derivation(
                        parse_sequent("~A, A |-"),
                        "LNeg",
                        (_ax("A |- A"),),
                    ),
                ),
            ),
        ),
    )

    d2 = Derivation(
        parse_sequent("~A -> (A -> B), ~A, A |- B"),
        "LImp",
        (
            Derivation(
                parse_sequent("~A |- ~A"),
                "RNeg",
                (
                    Derivation(
                        parse_sequent("~A, A |-"),
                        "LNeg",
                        (_ax("A |- A"),),
                    ),
                ),
            ),
            Derivation(
                parse_sequent("A -> B, A |- B"),
                "LImp",
                (_ax("A |- A"), _ax("B |- B")),
            ),
        ),
    )

    # d1-upper extended by a two-premise step outside the eleven-rule table,
    # whose second premise is an unprovability claim that the judgment
    # grammar cannot even express; it is encoded here as an unjustified
    # leaf.  The checker must reject the root for its rule name.
    d1_full_with_ltop = Derivation(
        parse_sequent("~A -> (A -> B), ~A, A |- B"),
        "LTop",
        (d1_upper, _ax("~A, A |- B")),
    )

    return {
        "lemma1-right": lemma1_right,
        "lemma1-left": lemma1_left,
        "contradiction1": contradiction1,
        "contradiction2": contradiction2,
        "d1-upper": d1_upper,
        "d2": d2,
        "d1-full-with-ltop": d1_full_with_ltop,
    }


def fixture_path(name: str):
    """Filesystem path of a bundled fixture file."""
    from importlib.resources import files

    if name not in FIXTURE_NAMES:
        raise KeyError(f"unknown fixture {name!r}")
    return files("coreseq").joinpath("fixtures").joinpath(f"{name}.json")
