"""Both variants of the masked scalar-product protocol over plain big integers.

One session has three steps. P0 draws a prime modulus p, a structuring base
alpha, a multiplicative mask s and additive masks c_i, and publishes
C_i = s*(a_i*alpha + c_i) mod p (or s*c_i for a_i = 0). P1 answers with
D = sum(D_i) mod p where D_i = b_i*alpha*C_i for b_i != 0 and D_i = r_i*C_i
otherwise (r_i = 1 under SPOC13, a fresh k4-bit mask under TPDS14, which also
appends two all-zero fix slots). P0 unmasks E = s^-1 * D mod p and reads the
scalar product out of the alpha^2 digit: result = (E - (E mod alpha^2)) / alpha^2.

Everything P0 legitimately sees during a run is packaged as AdversaryView,
the sole input to the attacks module.
"""

from __future__ import annotations

import random
import warnings
from dataclasses import dataclass
from math import isqrt
from typing import Sequence

import gmpy2

from .params import ParameterError, ProtocolParams, Variant, validate
from .rng import derive_rng

# Miller-Rabin rounds; composite survival probability < 4**-40 = 2**-80.
_MR_ROUNDS = 40


class PrimeSearchError(RuntimeError):
    """Prime search exhausted its candidate budget (misconfigured randomness)."""


class VariantError(ParameterError):
    """An operation was applied to the wrong protocol variant."""


class CorrectnessWarning(UserWarning):
    """Issued when a session is started with parameters that break correctness."""


@dataclass(frozen=True)
class P0State:
    """P0's secrets for one session; never leaves the local party."""

    p: int
    alpha: int
    s: int
    s_inv: int
    c: tuple[int, ...]  # one additive mask per slot (n, or n + 2 under TPDS14)
    a: tuple[int, ...]  # P0's input, n entries
    params: ProtocolParams


@dataclass(frozen=True)
class Round1Msg:
    """First wire message, P0 -> P1. p and alpha are public protocol values."""

    p: int
    alpha: int
    C: tuple[int, ...]


@dataclass(frozen=True)
class Round2Msg:
    """Second wire message, P1 -> P0."""

    D: int


@dataclass(frozen=True)
class P1Trace:
    """Test hook: P1's internals for one response (extended b and the r_i).

    r[i] is None for slots answered with b_i*alpha*C_i; 1 for SPOC13 zero
    slots; the drawn mask otherwise.
    """

    b_ext: tuple[int, ...]
    r: tuple[int | None, ...]


@dataclass(frozen=True)
class AdversaryView:
    """Everything P0 holds after a session: secrets, both messages, and E."""

    state: P0State
    round1: Round1Msg
    round2: Round2Msg
    E: int


@dataclass(frozen=True)
class ForcedSecrets:
    """Override sampled values (tests, toy walkthroughs, pinned moduli)."""

    p: int | None = None
    alpha: int | None = None
    s: int | None = None
    c: Sequence[int] | None = None


def as_vector(elems: Sequence[int], params: ProtocolParams) -> tuple[int, ...]:
    """Validate an input vector against the parameter set."""
    vec = tuple(int(x) for x in elems)
    if len(vec) != params.n:
        raise ParameterError(f"expected {params.n} elements, got {len(vec)}")
    for i, x in enumerate(vec):
        if not 0 <= x < params.q:
            raise ParameterError(f"element {i} = {x} outside [0, {params.q})")
    return vec


def extend(vec: tuple[int, ...], params: ProtocolParams) -> tuple[int, ...]:
    """Append the two all-zero fix slots under TPDS14."""
    return vec + (0, 0) if params.variant is Variant.TPDS14 else vec


def gen_prime(bits: int, rng: random.Random, max_tries: int | None = None) -> int:
    """Random probable prime with exact bit length ``bits``.

    Candidates come from ``rng`` with the top bit and lowest bit forced, so
    the search fails fast (PrimeSearchError) if the generator is degenerate.
    """
    if bits < 2:
        raise ParameterError(f"prime bit length must be >= 2, got {bits}")
    if max_tries is None:
        max_tries = max(4096, 48 * bits)
    top = 1 << (bits - 1)
    seen_odd_candidates = 0
    for _ in range(max_tries):
        cand = rng.getrandbits(bits) | top | 1
        seen_odd_candidates += 1
        if gmpy2.is_prime(cand, _MR_ROUNDS):
            return int(cand)
    raise PrimeSearchError(
        f"no {bits}-bit prime after {seen_odd_candidates} candidates"
    )


def mod_inv(x: int, p: int) -> int:
    """Inverse of x modulo p; requires 1 <= x < p and gcd(x, p) == 1."""
    if not 1 <= x < p:
        raise ParameterError(f"x must lie in [1, p), got x={x}")
    try:
        return pow(x, -1, p)
    except ValueError as exc:  # gcd(x, p) != 1; unreachable for prime p
        raise ParameterError(f"{x} is not invertible modulo {p}") from exc


def _alpha_lower_bound(p: int, params: ProtocolParams) -> int:
    # Besides the exact-bit-length floor, require 2**(k1-2k2) * alpha^2 > p-1
    # so the worst-case unmasking error floor((p-1)/alpha^2) stays within the
    # analytic ceiling of k1 - 2*k2 bits.
    coupled = isqrt((p - 1) >> (params.k1 - 2 * params.k2)) + 1
    return max(1 << (params.k2 - 1), coupled)


def _draw_modulus_and_base(
    params: ProtocolParams, rng: random.Random, forced_p: int | None
) -> tuple[int, int]:
    for _ in range(64):
        p = forced_p if forced_p is not None else gen_prime(params.k1, rng)
        lo = _alpha_lower_bound(p, params)
        if lo < (1 << params.k2):
            return p, rng.randrange(lo, 1 << params.k2)
        if forced_p is not None:
            raise ParameterError(
                f"no admissible alpha for forced p={p} at k2={params.k2}"
            )
        # p sits in the tiny top window of its range; redraw it.
    raise PrimeSearchError("no admissible (p, alpha) pair found")


def round1_message(state: P0State) -> Round1Msg:
    """Recompute the (deterministic) first message from P0's secrets."""
    p, alpha, s = state.p, state.alpha, state.s
    a_ext = extend(state.a, state.params)
    C = tuple(
        (s * (ai * alpha + ci)) % p if ai else (s * ci) % p
        for ai, ci in zip(a_ext, state.c)
    )
    return Round1Msg(p=p, alpha=alpha, C=C)


def p0_round1(
    a: Sequence[int],
    params: ProtocolParams,
    rng: random.Random,
    forced: ForcedSecrets | None = None,
) -> tuple[P0State, Round1Msg]:
    """P0's first step: draw session secrets and publish the masked vector.

    Parameter sets violating the correctness constraints are allowed (the
    sweep harness runs them on purpose) but trigger a CorrectnessWarning.
    """
    a_vec = as_vector(a, params)
    if not validate(params).all_satisfied:
        warnings.warn(
            "parameters violate the correctness constraints; results may be wrong",
            CorrectnessWarning,
            stacklevel=2,
        )
    forced = forced or ForcedSecrets()

    if forced.alpha is not None:
        if forced.p is None:
            raise ParameterError("forcing alpha requires forcing p as well")
        p, alpha = forced.p, forced.alpha
    else:
        p, alpha = _draw_modulus_and_base(params, rng, forced.p)

    s = forced.s if forced.s is not None else rng.randrange(2, p)
    s_inv = mod_inv(s, p)

    if forced.c is not None:
        c = tuple(int(x) for x in forced.c)
        if len(c) != params.slots:
            raise ParameterError(f"forced c needs {params.slots} entries")
    else:
        c = tuple(rng.randrange(1, 1 << params.k3) for _ in range(params.slots))

    state = P0State(p=p, alpha=alpha, s=s, s_inv=s_inv, c=c, a=a_vec, params=params)
    return state, round1_message(state)


def p1_round2_traced(
    b: Sequence[int],
    round1: Round1Msg,
    params: ProtocolParams,
    rng: random.Random,
    forced_r: Sequence[int] | None = None,
) -> tuple[Round2Msg, P1Trace]:
    """P1's step, also returning its internals (test hook)."""
    b_vec = as_vector(b, params)
    if len(round1.C) != params.slots:
        raise ParameterError(
            f"round 1 carries {len(round1.C)} slots, expected {params.slots}"
        )
    p, alpha = round1.p, round1.alpha
    b_ext = extend(b_vec, params)
    original_variant = params.variant is Variant.SPOC13

    total = 0
    rs: list[int | None] = []
    for i, (bi, Ci) in enumerate(zip(b_ext, round1.C)):
        if bi:
            total += (bi * alpha) % p * Ci
            rs.append(None)
        else:
            if forced_r is not None:
                ri = int(forced_r[i])
            elif original_variant:
                ri = 1
            else:
                ri = rng.randrange(1, 1 << params.k4)
            total += ri * Ci
            rs.append(ri)
    return Round2Msg(D=total % p), P1Trace(b_ext=b_ext, r=tuple(rs))


def p1_round2(
    b: Sequence[int],
    round1: Round1Msg,
    params: ProtocolParams,
    rng: random.Random,
    forced_r: Sequence[int] | None = None,
) -> Round2Msg:
    """P1's step: answer the masked vector with the aggregated response D."""
    msg, _ = p1_round2_traced(b, round1, params, rng, forced_r)
    return msg


def p0_finalize(
    state: P0State, round2: Round2Msg, round1: Round1Msg | None = None
) -> tuple[int, AdversaryView]:
    """P0's last step: unmask E and extract the result from the alpha^2 digit.

    Always returns, even for constraint-violating parameters; correctness is a
    measured property, not a contract. ``round1`` is recomputed from the state
    when not supplied.
    """
    E = (state.s_inv * round2.D) % state.p
    a2 = state.alpha * state.alpha
    result = (E - E % a2) // a2
    if round1 is None:
        round1 = round1_message(state)
    view = AdversaryView(state=state, round1=round1, round2=round2, E=E)
    return result, view


def dot_oracle(a: Sequence[int], b: Sequence[int]) -> int:
    """Reference scalar product, exact over the integers."""
    if len(a) != len(b):
        raise ParameterError(f"length mismatch: {len(a)} vs {len(b)}")
    return sum(x * y for x, y in zip(a, b))


def run_session(
    a: Sequence[int],
    b: Sequence[int],
    params: ProtocolParams,
    rng: random.Random | int,
) -> tuple[int, AdversaryView]:
    """Run one full session in-process.

    ``rng`` may be a seed or a generator; either way each party gets its own
    derived sub-stream, so a fixed seed reproduces the transcript bit for bit.
    """
    seed = rng if isinstance(rng, int) else rng.getrandbits(64)
    p0_rng = derive_rng(seed, "p0")
    p1_rng = derive_rng(seed, "p1")
    state, msg1 = p0_round1(a, params, p0_rng)
    msg2 = p1_round2(b, msg1, params, p1_rng)
    return p0_finalize(state, msg2, msg1)
