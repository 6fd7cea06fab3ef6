"""Non-linear combination of probabilities alongside Bayes' theorem."""

from .combinators import (
    BayesAlternative,
    SupportContribution,
    bayes_implied,
    bayes_posterior,
    bayes_total,
    cmpe_add,
    cohen_binary_combine,
    derivation_identity,
    dpe_sub,
    laplace_succession,
    mpe_error_product,
    nonlinear_add_curve,
    support_transfer,
)
from .core import (
    DEFAULT_TOLERANCE,
    ErrorComplement,
    Mode,
    Probability,
    RepresentationMode,
    complement,
    from_log_complement,
    product,
    to_log_complement,
)
from .diagnostics import (
    DiagnosticReport,
    broad_chain,
    cohen_complementarity_check,
    implied_evidence_comparison,
)
from .dsl import evaluate, evaluate_source, parse, parse_expression, to_source, tokenize
from .errors import *  # noqa: F401,F403
from .evidence import (
    CombinationResult,
    Evidence,
    EvidenceDocument,
    EvidenceKind,
    combine_document,
    laplace_vs_cmpe,
    load_document,
    validate_semantic_independence,
)

__version__ = "0.1.0"
