"""Empirical admissibility testing over bounded sequent families.

A rule transform maps a provable sequent (the virtual premise) to the
sequent its rule would conclude.  Over every provable sequent in a
bounded family, the verdict is:

* NotAdmissible   - some transformed sequent is underivable (conclusive:
                    the witness refutes admissibility outright);
* Admissible      - all transformed sequents are derivable but at least
                    one needs a taller derivation than its premise;
* StronglyAdmissible - every transformed sequent is derivable at a height
                    no greater than its premise's (only "within bound").

Verdicts carry re-checkable witnesses, minimal-weight first.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional

from .engine import Engine
from .syntax import (
    Formula,
    Sequent,
    formula_key,
    print_formula,
    print_sequent,
    sequent_family,
    sequent_weight,
)

NOT_ADMISSIBLE = "NotAdmissible"
ADMISSIBLE = "Admissible"
STRONGLY_ADMISSIBLE = "StronglyAdmissible"


@dataclass(frozen=True)
class RuleTransform:
    """Total map from well-formed sequents to well-formed sequents."""

    name: str
    apply: Callable[[Sequent], Sequent]


def add_left_transform(name: str, f: Formula) -> RuleTransform:
    return RuleTransform(name, lambda s: Sequent(s.antecedent + (f,), s.succedent))


def l_top_transform(top: Formula) -> RuleTransform:
    """Prefix the antecedent with a concrete theorem."""
    return add_left_transform(f"LTop[{print_formula(top)}]", top)


def weakening_transform(f: Formula) -> RuleTransform:
    """Left weakening by a fixed formula."""
    return add_left_transform(f"Wk[{print_formula(f)}]", f)


identity_transform = RuleTransform("Identity", lambda s: s)


@dataclass(frozen=True)
class Witness:
    premise: Sequent
    premise_min_height: int
    transformed: Sequent
    transformed_provable: bool
    transformed_min_height: Optional[int]

    def to_json(self) -> dict:
        return {
            "premise": print_sequent(self.premise),
            "premise_min_height": self.premise_min_height,
            "transformed": print_sequent(self.transformed),
            "transformed_status": "provable" if self.transformed_provable else "unprovable",
            "transformed_min_height": self.transformed_min_height,
            "premise_cli": f'coreseq decide "{print_sequent(self.premise)}"',
            "transformed_cli": f'coreseq decide "{print_sequent(self.transformed)}"',
        }


@dataclass
class AdmissibilityVerdict:
    rule: str
    universe: str
    mode: str
    status: str
    witnesses: list[Witness] = field(default_factory=list)
    sequents_tested: int = 0
    provable_tested: int = 0

    def to_json(self) -> dict:
        return {
            "rule": self.rule,
            "universe": self.universe,
            "mode": self.mode,
            "status": self.status,
            "witnesses": [w.to_json() for w in self.witnesses],
            "sequents_tested": self.sequents_tested,
            "provable_tested": self.provable_tested,
        }


def describe_universe(universe: Iterable[Formula], weight_cap: int) -> str:
    pool = sorted(set(universe), key=formula_key)
    atoms = sorted({a for f in pool for a in _atom_names(f)})
    maxw = max((formula_key(f)[0] for f in pool), default=0)
    return (
        f"atoms={{{','.join(atoms)}}} formulas={len(pool)} "
        f"formula_weight<={maxw} sequent_weight<={weight_cap}"
    )


def _atom_names(f: Formula) -> set[str]:
    from .syntax import Atom, Neg

    if isinstance(f, Atom):
        return {f.name}
    if isinstance(f, Neg):
        return _atom_names(f.sub)
    return _atom_names(f.left) | _atom_names(f.right)


def test_admissibility(
    transform: RuleTransform,
    universe: Iterable[Formula],
    weight_cap: int,
    mode: str = "tennant",
    engine: Optional[Engine] = None,
) -> AdmissibilityVerdict:
    """Test one transform over every provable sequent in the bounded family."""
    eng = engine or Engine(mode)
    pool = sorted(set(universe), key=formula_key)
    family = sequent_family(pool, weight_cap)

    counterexamples: list[Witness] = []
    height_increases: list[Witness] = []
    provable = 0
    for s in family:
        h = eng.min_height(s)
        if h is None:
            continue
        provable += 1
        t = transform.apply(s)
        th = eng.min_height(t)
        if th is None:
            counterexamples.append(Witness(s, h, t, False, None))
        elif th > h:
            height_increases.append(Witness(s, h, t, True, th))

    def ordered(ws: list[Witness]) -> list[Witness]:
        return sorted(ws, key=lambda w: (sequent_weight(w.premise), print_sequent(w.premise)))

    if counterexamples:
        status, witnesses = NOT_ADMISSIBLE, ordered(counterexamples)
    elif height_increases:
        status, witnesses = ADMISSIBLE, ordered(height_increases)
    else:
        status, witnesses = STRONGLY_ADMISSIBLE, []
    return AdmissibilityVerdict(
        rule=transform.name,
        universe=describe_universe(pool, weight_cap),
        mode=mode,
        status=status,
        witnesses=witnesses,
        sequents_tested=len(family),
        provable_tested=provable,
    )


# ---------------------------------------------------------------------------
# The theorem-prefix equivalence study


@dataclass
class TopEquivalenceReport:
    """Derivability of the three sequents relating a set member to a
    theorem: the two conjunction directions and the two-element set form."""

    delta: Formula
    top: Formula
    conjunction_intro: tuple[bool, Optional[int]]   # delta |- top & delta
    conjunction_elim: tuple[bool, Optional[int]]    # top & delta |- delta
    set_form: tuple[bool, Optional[int]]            # top, delta |- delta
    mode: str

    @property
    def summary(self) -> str:
        def word(v):
            return "provable" if v[0] else "unprovable"

        return (
            f"delta -||- top & delta: {word(self.conjunction_intro)}/"
            f"{word(self.conjunction_elim)}; top, delta |- delta: {word(self.set_form)}"
        )

    def to_json(self) -> dict:
        def entry(seq: Sequent, v):
            return {
                "sequent": print_sequent(seq),
                "status": "provable" if v[0] else "unprovable",
                "min_height": v[1],
            }

        from .syntax import And

        return {
            "delta": print_formula(self.delta),
            "top": print_formula(self.top),
            "mode": self.mode,
            "conjunction_intro": entry(
                Sequent((self.delta,), And(self.top, self.delta)), self.conjunction_intro
            ),
            "conjunction_elim": entry(
                Sequent((And(self.top, self.delta),), self.delta), self.conjunction_elim
            ),
            "set_form": entry(
                Sequent((self.top, self.delta), self.delta), self.set_form
            ),
            "summary": self.summary,
        }


def top_equivalence_study(
    delta: Formula,
    top: Formula,
    mode: str = "tennant",
    engine: Optional[Engine] = None,
) -> TopEquivalenceReport:
    """Contrast the conjunction equivalence with the two-element set reading.

    `top` must be a theorem (derivable with empty antecedent); the study
    decides delta |- top & delta, top & delta |- delta, and the critical
    third query top, delta |- delta, whose status shows whether prefixing
    the theorem as a separate set member preserves derivability.
    """
    from .syntax import And

    eng = engine or Engine(mode)
    if eng.min_height(Sequent((), top)) is None:
        raise ValueError(f"{print_formula(top)} is not a theorem (|- {print_formula(top)} is underivable)")

    def query(s: Sequent) -> tuple[bool, Optional[int]]:
        h = eng.min_height(s)
        return (h is not None, h)

    return TopEquivalenceReport(
        delta=delta,
        top=top,
        conjunction_intro=query(Sequent((delta,), And(top, delta))),
        conjunction_elim=query(Sequent((And(top, delta),), delta)),
        set_form=query(Sequent((top, delta), delta)),
        mode=mode,
    )
