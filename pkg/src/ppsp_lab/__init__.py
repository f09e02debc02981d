"""Masked scalar-product protocol, the attacks that break it, and a sweep harness.

The package implements both published revisions of the protocol over plain
big integers, P0-side distinguishing and candidate-testing attacks, the
1-out-of-2 bit-transfer reduction and its break, and a reproducible
Monte-Carlo harness charting correctness error against attack accuracy as
the multiplicative-mask width k4 grows.
"""

from .attacks import (
    CandidateGuess,
    OtTranscript,
    break_ot,
    distinguish_pair,
    distinguish_pair_original,
    noise_bound,
    ot_default_params,
    ot_from_ppsp,
    predict_d_original,
    predict_e_scaled,
    scaled_observation,
    test_candidate,
)
from .harness import (
    CSV_HEADER,
    Attack,
    PairMode,
    SweepRow,
    TrialConfig,
    VectorMode,
    crossing_summary,
    run_attack_trials,
    run_correctness_trials,
    run_original_attack_trials,
    sweep_k4,
    write_sweep_csv,
)
from .params import (
    ConstraintReport,
    ParameterError,
    ProtocolParams,
    ThresholdReport,
    Variant,
    attack_thresholds,
    ceil_log2,
    validate,
)
from .protocol import (
    AdversaryView,
    CorrectnessWarning,
    ForcedSecrets,
    P0State,
    P1Trace,
    PrimeSearchError,
    Round1Msg,
    Round2Msg,
    VariantError,
    as_vector,
    dot_oracle,
    extend,
    gen_prime,
    mod_inv,
    p0_finalize,
    p0_round1,
    p1_round2,
    p1_round2_traced,
    round1_message,
    run_session,
)
from .rng import derive_rng, derive_seed
from .wire import FramingError, decode_message, encode_message, read_message

__version__ = "0.1.0"

__all__ = [
    "Attack",
    "AdversaryView",
    "CSV_HEADER",
    "CandidateGuess",
    "ConstraintReport",
    "CorrectnessWarning",
    "ForcedSecrets",
    "FramingError",
    "OtTranscript",
    "P0State",
    "P1Trace",
    "PairMode",
    "ParameterError",
    "PrimeSearchError",
    "ProtocolParams",
    "Round1Msg",
    "Round2Msg",
    "SweepRow",
    "ThresholdReport",
    "TrialConfig",
    "Variant",
    "VariantError",
    "VectorMode",
    "as_vector",
    "attack_thresholds",
    "break_ot",
    "ceil_log2",
    "crossing_summary",
    "decode_message",
    "derive_rng",
    "derive_seed",
    "distinguish_pair",
    "distinguish_pair_original",
    "dot_oracle",
    "encode_message",
    "extend",
    "gen_prime",
    "mod_inv",
    "noise_bound",
    "ot_default_params",
    "ot_from_ppsp",
    "p0_finalize",
    "p0_round1",
    "p1_round2",
    "p1_round2_traced",
    "predict_d_original",
    "predict_e_scaled",
    "read_message",
    "round1_message",
    "run_attack_trials",
    "run_correctness_trials",
    "run_original_attack_trials",
    "run_session",
    "scaled_observation",
    "sweep_k4",
    "test_candidate",
    "validate",
    "write_sweep_csv",
]
