"""Exact, enumerative toolkit for information costs of protocols in the
coordinator model: players with private channels to a coordinator, inputs
small enough that every probability is an exact rational."""

from .budget import BudgetExceeded, enumeration_budget
from .costs import CostReport, check_cc_ic, check_direct_sum_lemma, check_sic_vs_ic, full_report, internal_ic, switched_ic
from .distributions import SwitchedDistribution, build_eta, build_uniform, build_xi, check_switched, e_bar
from .harness import harness, make_protocol
from .infotheory import Check, entropy, hellinger, hellinger_sq, mutual_information
from .model import (
    InputMatrix,
    Protocol,
    Transcript,
    and_k,
    communication_cost,
    disj,
    error_probability,
    execute,
    transcript_distribution,
    view_distribution,
)
from .pmf import JointPmf, Pmf
from .protolib import (
    EmbeddingConfig,
    and_poll_protocol,
    build_direct_sum_protocol,
    direct_sum_protocol,
    naive_protocol,
    sequential_search_protocol,
)
from .structure import check_rectangle, usefulness, verify_onebit_chain

__all__ = [
    "BudgetExceeded",
    "enumeration_budget",
    "CostReport",
    "check_cc_ic",
    "check_direct_sum_lemma",
    "check_sic_vs_ic",
    "full_report",
    "internal_ic",
    "switched_ic",
    "SwitchedDistribution",
    "build_eta",
    "build_uniform",
    "build_xi",
    "check_switched",
    "e_bar",
    "harness",
    "make_protocol",
    "Check",
    "entropy",
    "hellinger",
    "hellinger_sq",
    "mutual_information",
    "InputMatrix",
    "Protocol",
    "Transcript",
    "and_k",
    "communication_cost",
    "disj",
    "error_probability",
    "execute",
    "transcript_distribution",
    "view_distribution",
    "JointPmf",
    "Pmf",
    "EmbeddingConfig",
    "and_poll_protocol",
    "build_direct_sum_protocol",
    "direct_sum_protocol",
    "naive_protocol",
    "sequential_search_protocol",
    "check_rectangle",
    "usefulness",
    "verify_onebit_chain",
]

__version__ = "0.1.0"
