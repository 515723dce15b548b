from .types import CheckRecord, CheckResult, GroupKind, LedgerGroup, Suite, Verdict, Witness
from .config import TOOL_VERSION, Config, JobConfig
from .errors import (
    BetheError,
    CardinalityError,
    ConfigError,
    DegenerateError,
    GenericityError,
    PoleError,
    RangeError,
    RetryExhausted,
    SkippedCheck,
    SplitError,
)
from .ratfun import ParamSet, f, finv, g, genericity_check, set_product_f, set_product_g
from .partitions import all_partitions_2, partitions_with_cardinality, single_picks, singleton_partitions
from .rep import ChainSpec, MonodromyRep, StateVector, build_chain, monodromy, rtt_selftest
from .bethe import (
    BetheIndex,
    apply_morphism,
    bethe_polynomial,
    bethe_vector,
    bethe_vector_recursive,
    dual_bethe_vector,
    izergin,
)
from .actions import ACTION_FORMULAS, act_rhs, formula, verify_action
from .composite import (
    SplitSpec,
    TermLedger,
    composite_bethe_rhs,
    corollary1_verify,
    ledger_T12,
    ledger_T13,
    split_monodromy,
    theorem1_verify,
    weight_function_check,
)
from .runner import VerificationRunner, draw_generic_rationals

__version__ = TOOL_VERSION

__all__ = [
    "CheckRecord",
    "CheckResult",
    "GroupKind",
    "LedgerGroup",
    "Suite",
    "Verdict",
    "Witness",
    "Config",
    "JobConfig",
    "BetheError",
    "CardinalityError",
    "ConfigError",
    "DegenerateError",
    "GenericityError",
    "PoleError",
    "RangeError",
    "RetryExhausted",
    "SkippedCheck",
    "SplitError",
    "ParamSet",
    "f",
    "finv",
    "g",
    "genericity_check",
    "set_product_f",
    "set_product_g",
    "all_partitions_2",
    "partitions_with_cardinality",
    "single_picks",
    "singleton_partitions",
    "ChainSpec",
    "MonodromyRep",
    "StateVector",
    "build_chain",
    "monodromy",
    "rtt_selftest",
    "BetheIndex",
    "apply_morphism",
    "bethe_polynomial",
    "bethe_vector",
    "bethe_vector_recursive",
    "dual_bethe_vector",
    "izergin",
    "ACTION_FORMULAS",
    "act_rhs",
    "formula",
    "verify_action",
    "SplitSpec",
    "TermLedger",
    "composite_bethe_rhs",
    "corollary1_verify",
    "ledger_T12",
    "ledger_T13",
    "split_monodromy",
    "theorem1_verify",
    "weight_function_check",
    "VerificationRunner",
    "draw_generic_rationals",
]
