"""coreseq: a workbench for propositional Core-logic sequents.

Parsing and printing of formulas and sequents, a trusted checker for the
eleven-rule sequent calculus, a complete decision procedure with minimal-
height witnesses, an intuitionistic oracle with Kripke countermodels, and
an admissibility lab for structural-rule experiments.
"""

__version__ = "0.1.0"

from .syntax import (
    And,
    Atom,
    Formula,
    Imp,
    Neg,
    Or,
    ParseError,
    Sequent,
    formula_universe,
    parse_formula,
    parse_sequent,
    print_formula,
    print_sequent,
    sequent_family,
    sequent_weight,
    weight,
)
from .kernel import (
    Derivation,
    RULE_NAMES,
    Violation,
    check_derivation,
    check_rule,
    derivation_from_json,
    derivation_to_json,
    fixture_derivations,
    fixture_path,
    height,
    load_derivation,
    save_derivation,
)
from .engine import (
    DecisionResult,
    Engine,
    Provable,
    ResourceLimitError,
    SearchStats,
    Unprovable,
    decide,
    forward_closure,
    provable_subsequents,
)
from .intuitionistic import (
    CrossCheckReport,
    IntProver,
    KripkeModel,
    countermodel,
    cross_check,
    decide_int,
    theoremhood_report,
)
from .admissibility import (
    AdmissibilityVerdict,
    RuleTransform,
    identity_transform,
    l_top_transform,
    test_admissibility,
    top_equivalence_study,
    weakening_transform,
)
