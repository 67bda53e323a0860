"""Decision procedure for third-order matching in the simply typed lambda calculus."""

from .core import (
    App,
    Arrow,
    Atom,
    IllTyped,
    Kind,
    Lam,
    NotNormal,
    Signature,
    Substitution,
    Symbol,
    Term,
    Type,
    Var,
    alpha_equal,
    app,
    arity,
    arrow,
    canonical,
    compose,
    const,
    eta_long,
    free_instantiables,
    free_locals,
    free_vars,
    infer_type,
    is_ground,
    ivar,
    lams,
    local,
    nf,
    normalize,
    order,
    spine,
    strip_lams,
    substitute,
)
from .bohm import BohmTree, depth, from_bohm, to_bohm, tree_depth, trivial_ground_term
from .enumeration import EnumContext, count_terms, enum_substitutions, enum_terms
from .matching import (
    Equation,
    InterpolationEquation,
    MatchingProblem,
    SolveResult,
    ValidationError,
    decompose,
    depth_bound,
    enumerate_complete_set,
    problem_h,
    problem_vars,
    solve_brute,
    solve_huet_pruned,
    validate,
    verify_solution,
)
from .parser import ParseError, format_term, format_type, parse_problem, parse_term
from .proofs import (
    KeyLemmaReport,
    accessible_occurrences,
    accessible_solution,
    build_interpolation,
    compact_accessible_solution,
    fresh_local_absence_check,
    key_lemma_check,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
