"""Monte-Carlo engine: correctness error and attack accuracy as functions of k4.

Every quantity is reproducible: a sweep row derives its stream from
(seed, k4), a trial from (row seed, kind, trial index), so grid points are
independent and may run in parallel. One modulus is pinned per row (fresh
primes per trial would dominate the runtime without affecting the
statistics, which quantify over alpha, s, c, r and the input vectors).
"""

from __future__ import annotations

import dataclasses
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Sequence, TextIO

from .attacks import distinguish_pair, distinguish_pair_original
from .params import ParameterError, ProtocolParams, Variant
from .protocol import (
    CorrectnessWarning,
    ForcedSecrets,
    dot_oracle,
    gen_prime,
    p0_finalize,
    p0_round1,
    p1_round2,
)
from .rng import derive_rng, derive_seed


class VectorMode(str, Enum):
    ZERO = "zero"
    RANDOM = "random"


class PairMode(str, Enum):
    RANDOM_PAIR = "random"
    NEIGHBOR_PAIR = "neighbor"


class Attack(str, Enum):
    ATTACK1_A_ZERO = "fixed-a0"
    ATTACK2_GENERAL_A = "fixed-general"


@dataclass(frozen=True)
class TrialConfig:
    """One batch of trials: parameters, count, seed, and vector policies."""

    base_params: ProtocolParams
    trials: int = 1000
    seed: int = 0
    a_mode: VectorMode = VectorMode.RANDOM
    pair_mode: PairMode = PairMode.RANDOM_PAIR
    b_mode: VectorMode = VectorMode.ZERO

    def __post_init__(self) -> None:
        if self.trials < 1:
            raise ParameterError(f"trials must be >= 1, got {self.trials}")


@dataclass(frozen=True)
class SweepRow:
    """One grid point of the k4 sweep."""

    k4: int
    acc_attack1_random: float
    acc_attack1_neighbor: float
    acc_attack2_random: float
    acc_attack2_neighbor: float
    mean_abs_error_bits: float
    max_abs_error_bits: int
    trials: int


CSV_HEADER = (
    "k4,trials,acc_attack1_random,acc_attack1_neighbor,"
    "acc_attack2_random,acc_attack2_neighbor,"
    "mean_abs_error_bits,max_abs_error_bits"
)


def _draw_vector(rng, n: int, q: int, mode: VectorMode) -> tuple[int, ...]:
    if mode is VectorMode.ZERO:
        return (0,) * n
    return tuple(rng.randrange(q) for _ in range(n))


def _draw_pair(rng, n: int, q: int, mode: PairMode) -> tuple[tuple[int, ...], tuple[int, ...]]:
    b = tuple(rng.randrange(q) for _ in range(n))
    if mode is PairMode.NEIGHBOR_PAIR:
        idx = rng.randrange(n)
        other = b[:idx] + ((b[idx] + 1) % q,) + b[idx + 1 :]
        return b, other
    while True:
        other = tuple(rng.randrange(q) for _ in range(n))
        if other != b:
            return b, other


def _pinned_modulus(cfg: TrialConfig) -> int:
    return gen_prime(cfg.base_params.k1, derive_rng(cfg.seed, "p"))


def run_correctness_trials(cfg: TrialConfig) -> tuple[float, int]:
    """Measure |result - a.b| in bits: (mean, max) over the trials."""
    params = cfg.base_params
    pin = ForcedSecrets(p=_pinned_modulus(cfg))
    total_bits = 0
    max_bits = 0
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", CorrectnessWarning)
        for t in range(cfg.trials):
            rng = derive_rng(cfg.seed, "corr", t)
            a = _draw_vector(rng, params.n, params.q, cfg.a_mode)
            b = _draw_vector(rng, params.n, params.q, cfg.b_mode)
            state, msg1 = p0_round1(a, params, rng, forced=pin)
            msg2 = p1_round2(b, msg1, params, rng)
            result, _ = p0_finalize(state, msg2, msg1)
            bits = abs(result - dot_oracle(a, b)).bit_length()
            total_bits += bits
            max_bits = max(max_bits, bits)
    return total_bits / cfg.trials, max_bits


def run_attack_trials(cfg: TrialConfig, attack: Attack) -> float:
    """Two-candidate distinction accuracy over the trials (TPDS14).

    Per trial: draw the true b and a second candidate per the pair mode, run
    a session on the true b, present the pair in random order, and score the
    distinguisher's pick. Attack 1 fixes a to the zero vector; attack 2 draws
    a uniformly.
    """
    params = cfg.base_params
    if params.variant is not Variant.TPDS14:
        raise ParameterError("attack trials target the TPDS14 variant")
    pin = ForcedSecrets(p=_pinned_modulus(cfg))
    n, q = params.n, params.q
    correct = 0
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", CorrectnessWarning)
        for t in range(cfg.trials):
            rng = derive_rng(cfg.seed, attack.value, cfg.pair_mode.value, t)
            if attack is Attack.ATTACK1_A_ZERO:
                a = (0,) * n
            else:
                a = _draw_vector(rng, n, q, VectorMode.RANDOM)
            b, other = _draw_pair(rng, n, q, cfg.pair_mode)
            state, msg1 = p0_round1(a, params, rng, forced=pin)
            msg2 = p1_round2(b, msg1, params, rng)
            _, view = p0_finalize(state, msg2, msg1)
            truth = rng.randrange(2)
            pair = (b, other) if truth == 0 else (other, b)
            correct += distinguish_pair(view, *pair).index == truth
    return correct / cfg.trials


def run_original_attack_trials(cfg: TrialConfig) -> float:
    """Accuracy of the deterministic forward-simulation distinguisher (SPOC13)."""
    params = cfg.base_params
    if params.variant is not Variant.SPOC13:
        raise ParameterError("the deterministic distinguisher targets SPOC13")
    pin = ForcedSecrets(p=_pinned_modulus(cfg))
    n, q = params.n, params.q
    correct = 0
    for t in range(cfg.trials):
        rng = derive_rng(cfg.seed, "original", cfg.pair_mode.value, t)
        a = _draw_vector(rng, n, q, cfg.a_mode)
        b, other = _draw_pair(rng, n, q, cfg.pair_mode)
        state, msg1 = p0_round1(a, params, rng, forced=pin)
        msg2 = p1_round2(b, msg1, params, rng)
        _, view = p0_finalize(state, msg2, msg1)
        truth = rng.randrange(2)
        pair = (b, other) if truth == 0 else (other, b)
        correct += distinguish_pair_original(view, *pair).index == truth
    return correct / cfg.trials


def _sweep_row(cfg: TrialConfig, k4: int) -> SweepRow:
    params_k4 = dataclasses.replace(cfg.base_params, k4=k4)
    row = dataclasses.replace(
        cfg, base_params=params_k4, seed=derive_seed(cfg.seed, "k4", k4)
    )

    def acc(attack: Attack, mode: PairMode) -> float:
        return run_attack_trials(dataclasses.replace(row, pair_mode=mode), attack)

    mean_bits, max_bits = run_correctness_trials(row)
    return SweepRow(
        k4=k4,
        acc_attack1_random=acc(Attack.ATTACK1_A_ZERO, PairMode.RANDOM_PAIR),
        acc_attack1_neighbor=acc(Attack.ATTACK1_A_ZERO, PairMode.NEIGHBOR_PAIR),
        acc_attack2_random=acc(Attack.ATTACK2_GENERAL_A, PairMode.RANDOM_PAIR),
        acc_attack2_neighbor=acc(Attack.ATTACK2_GENERAL_A, PairMode.NEIGHBOR_PAIR),
        mean_abs_error_bits=mean_bits,
        max_abs_error_bits=max_bits,
        trials=cfg.trials,
    )


def _sweep_row_job(args: tuple[TrialConfig, int]) -> SweepRow:
    return _sweep_row(*args)


def sweep_k4(
    cfg: TrialConfig,
    k4_from: int,
    k4_to: int,
    k4_step: int,
    workers: int | None = None,
) -> list[SweepRow]:
    """One SweepRow per grid point of [k4_from, k4_to] (inclusive).

    Rows are independent; ``workers`` > 1 computes them in parallel with
    identical results.
    """
    if k4_from > k4_to:
        raise ParameterError(f"empty k4 range {k4_from}..{k4_to}")
    if k4_step < 1:
        raise ParameterError(f"k4 step must be >= 1, got {k4_step}")
    grid = list(range(k4_from, k4_to + 1, k4_step))
    jobs = [(cfg, k4) for k4 in grid]
    if workers is not None and workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(_sweep_row_job, jobs))
    return [_sweep_row(cfg, k4) for k4 in grid]


def write_sweep_csv(rows: Iterable[SweepRow], out: TextIO) -> None:
    """Emit the sweep as CSV with fixed formatting (diff-friendly)."""
    out.write(CSV_HEADER + "\n")
    for r in rows:
        out.write(
            f"{r.k4},{r.trials},"
            f"{r.acc_attack1_random:.4f},{r.acc_attack1_neighbor:.4f},"
            f"{r.acc_attack2_random:.4f},{r.acc_attack2_neighbor:.4f},"
            f"{r.mean_abs_error_bits:.4f},{r.max_abs_error_bits}\n"
        )


def crossing_summary(rows: Sequence[SweepRow]) -> str:
    """One line naming the first grid points where the curves give way."""

    def first_k4(pred) -> str:
        for r in rows:
            if pred(r):
                return str(r.k4)
        return "none"

    onset = first_k4(lambda r: r.max_abs_error_bits > 0)
    a1 = first_k4(lambda r: r.acc_attack1_random <= 0.55)
    a2 = first_k4(lambda r: r.acc_attack2_random <= 0.55)
    return (
        f"first nonzero error at k4={onset}; "
        f"attack1(random) <= 0.55 from k4={a1}; "
        f"attack2(random) <= 0.55 from k4={a2}"
    )
