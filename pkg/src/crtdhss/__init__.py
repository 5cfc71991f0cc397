"""Hierarchical threshold secret sharing over F_p[x] via polynomial CRT.

Ships four pieces: the exact field/polynomial core, the hierarchical
scheme (dealing, public masks, reconstruction), a deliberately insecure
two-level reference scheme together with the coalition attack that breaks
it, and a brute-force auditor that measures what an unauthorized coalition
actually learns at desk-scale parameters.
"""

from .errors import (
    AttackNotApplicableError,
    BudgetExceededError,
    FieldMismatchError,
    InconsistentSharesError,
    InsufficientIrreduciblesError,
    InvalidParametersError,
    MissingBulletinEntryError,
    NoCrtSolutionError,
    NotCoprimeError,
    NotPairwiseCoprimeError,
    UnauthorizedSubsetError,
)
from .fieldpoly import (
    Poly,
    crt_combine,
    inverse_mod,
    is_pairwise_coprime,
    is_prime,
    poly_gcd,
    poly_xgcd,
    pow_mod,
)
from .hashing import HashFamily, family_from_params
from .oracle import (
    MODE_COALITION,
    MODE_FULL,
    CoalitionView,
    EnumerationBudget,
    count_consistent_tuples,
    count_secret_preimages,
    crt_bruteforce,
    enumerate_consistent,
    histogram_entropy_bits,
    loss_entropy,
    observe_coalition,
    preimage_exponent,
)
from .params import (
    AccessStructure,
    PublicParams,
    ValidationReport,
    generate_moduli,
    information_rate,
    is_authorized,
    is_irreducible,
    min_authorized_level,
    monic_irreducible_count,
    validate_params,
)
from .scheme import Bulletin, Share, deal, reconstruct, unmask_share
from .yang import yang_attack, yang_deal, yang_reconstruct

__version__ = "0.1.0"

__all__ = [
    "AccessStructure",
    "AttackNotApplicableError",
    "BudgetExceededError",
    "Bulletin",
    "CoalitionView",
    "EnumerationBudget",
    "FieldMismatchError",
    "HashFamily",
    "InconsistentSharesError",
    "InsufficientIrreduciblesError",
    "InvalidParametersError",
    "MODE_COALITION",
    "MODE_FULL",
    "MissingBulletinEntryError",
    "NoCrtSolutionError",
    "NotCoprimeError",
    "NotPairwiseCoprimeError",
    "Poly",
    "PublicParams",
    "Share",
    "UnauthorizedSubsetError",
    "ValidationReport",
    "__version__",
    "count_consistent_tuples",
    "count_secret_preimages",
    "crt_bruteforce",
    "crt_combine",
    "deal",
    "enumerate_consistent",
    "family_from_params",
    "generate_moduli",
    "histogram_entropy_bits",
    "information_rate",
    "inverse_mod",
    "is_authorized",
    "is_irreducible",
    "is_pairwise_coprime",
    "is_prime",
    "loss_entropy",
    "min_authorized_level",
    "monic_irreducible_count",
    "observe_coalition",
    "poly_gcd",
    "poly_xgcd",
    "pow_mod",
    "preimage_exponent",
    "reconstruct",
    "unmask_share",
    "validate_params",
    "yang_attack",
    "yang_deal",
    "yang_reconstruct",
]
