from .model import (
    CONTRADICTION,
    ActionSchema,
    Atom,
    Conjunction,
    DomainModel,
    Literal,
    OneOf,
    ProblemModel,
    State,
    Task,
    When,
    format_atom,
    format_state,
)
from .parser import PDDLSemanticError, parse_domain, parse_problem
from .semantics import (
    GroundAction,
    InapplicableAction,
    applicable_actions,
    apply,
    ground_all,
    outcome_count,
    successors,
)
from .sexpr import PDDLSyntaxError
from .writer import write_domain, write_problem

__all__ = [
    "CONTRADICTION", "ActionSchema", "Atom", "Conjunction", "DomainModel",
    "GroundAction", "InapplicableAction", "Literal", "OneOf", "PDDLSemanticError",
    "PDDLSyntaxError", "ProblemModel", "State", "Task", "When", "applicable_actions",
    "apply", "format_atom", "format_state", "ground_all", "outcome_count",
    "parse_domain", "parse_problem", "successors", "write_domain", "write_problem",
]
