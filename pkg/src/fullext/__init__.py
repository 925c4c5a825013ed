"""Full surplus extraction with behavioral (always truthful) types."""

from .core import (
    Belief,
    Contract,
    ContractDerivation,
    ContractMenu,
    Environment,
    Kind,
    Method,
    TypeRecord,
    expected_transfer,
    validate_environment,
)
from .extraction import (
    SolveResult,
    behavioral_contract,
    cm_menu,
    corollary_extend,
    full_extraction_menu,
    proposition_menu,
)
from .geometry import check_cm, check_theorem_conditions, hull_membership
from .verify import check_full_extraction, check_ic, oracle_feasibility, verify_menu

__all__ = [
    "Belief",
    "Contract",
    "ContractDerivation",
    "ContractMenu",
    "Environment",
    "Kind",
    "Method",
    "SolveResult",
    "TypeRecord",
    "behavioral_contract",
    "check_cm",
    "check_full_extraction",
    "check_ic",
    "check_theorem_conditions",
    "cm_menu",
    "corollary_extend",
    "expected_transfer",
    "full_extraction_menu",
    "hull_membership",
    "oracle_feasibility",
    "proposition_menu",
    "validate_environment",
    "verify_menu",
]
