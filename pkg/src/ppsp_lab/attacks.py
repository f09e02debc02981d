"""P0-side attacks, computed from nothing but the adversary view.

Against SPOC13 the response D is a deterministic function of alpha, the C_i,
and b, so P0 distinguishes candidate inputs by exact forward simulation.
Against TPDS14 the attacks compare floor(E / alpha) with a per-candidate
prediction: for the true b the difference is bounded by the masking noise,
for a wrong candidate it is dominated by the candidates' separation. The
distance metric is the bit length of the absolute difference.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Sequence

from .params import ParameterError, ProtocolParams, Variant, ceil_log2
from .protocol import (
    AdversaryView,
    P0State,
    Round1Msg,
    VariantError,
    as_vector,
    run_session,
)


@dataclass(frozen=True)
class CandidateGuess:
    """Outcome of a two-candidate distinction; index 0 wins ties."""

    index: int
    distance_bits: tuple[int, int]


@dataclass(frozen=True)
class OtTranscript:
    """P0's side of a 1-out-of-2 transfer run through the protocol.

    The receiver's choice sigma selects a = (1 - sigma, sigma); the sender's
    bits are b = (x0, x1); the protocol result is x_sigma.
    """

    view: AdversaryView
    sigma: int
    output: int


def scaled_observation(view: AdversaryView) -> int:
    """floor(E / alpha), the quantity all TPDS14 attacks compare against."""
    return view.E // view.state.alpha


def predict_d_original(
    state: P0State, round1: Round1Msg, candidate_b: Sequence[int]
) -> int:
    """Exact forward simulation of P1's response under SPOC13."""
    if state.params.variant is not Variant.SPOC13:
        raise VariantError("forward simulation of D applies to SPOC13 only")
    cand = as_vector(candidate_b, state.params)
    p, alpha = round1.p, round1.alpha
    total = 0
    for bi, Ci in zip(cand, round1.C):
        total += (bi * alpha) % p * Ci if bi else Ci
    return total % p


def predict_e_scaled(state: P0State, candidate_b: Sequence[int]) -> int:
    """P0's prediction of floor(E / alpha) for a candidate b under TPDS14.

    Plain integer, no reduction: sum of a_i*b_i*alpha over slots with
    a_i != 0 plus b_i*c_i over slots with a_i == 0. The two fix slots are
    zero in any candidate and contribute nothing.
    """
    if state.params.variant is not Variant.TPDS14:
        raise VariantError("the scaled-E prediction applies to TPDS14 only")
    cand = as_vector(candidate_b, state.params)
    return sum(
        ai * bi * state.alpha if ai else bi * ci
        for ai, bi, ci in zip(state.a, cand, state.c)
    )


def _predict_e_full(state: P0State, candidate_b: Sequence[int]) -> int:
    # Like predict_e_scaled but keeping the b_i*c_i cross term of slots with
    # a_i != 0. Immaterial at sweep scale, decisive for the tiny transfer
    # vectors where c_i sits at the same bit scale as the candidate signal.
    return sum(
        bi * (ai * state.alpha + ci) if bi else 0
        for ai, bi, ci in zip(state.a, candidate_b, state.c)
    )


def _pick(dist0: int, dist1: int) -> CandidateGuess:
    bits = (dist0.bit_length(), dist1.bit_length())
    return CandidateGuess(index=0 if bits[0] <= bits[1] else 1, distance_bits=bits)


def distinguish_pair(
    view: AdversaryView, b0: Sequence[int], b1: Sequence[int]
) -> CandidateGuess:
    """Guess which of two candidates was P1's input (TPDS14)."""
    t = scaled_observation(view)
    d0 = abs(t - predict_e_scaled(view.state, b0))
    d1 = abs(t - predict_e_scaled(view.state, b1))
    return _pick(d0, d1)


def distinguish_pair_original(
    view: AdversaryView, b0: Sequence[int], b1: Sequence[int]
) -> CandidateGuess:
    """Guess between two candidates under SPOC13 by matching D exactly."""
    D = view.round2.D
    d0 = abs(D - predict_d_original(view.state, view.round1, b0))
    d1 = abs(D - predict_d_original(view.state, view.round1, b1))
    return _pick(d0, d1)


def noise_bound(params: ProtocolParams) -> int:
    """Bit-length ceiling on the part of floor(E/alpha) P0 cannot predict.

    Covers the three residual terms of a truthful candidate: additive masks
    of slots where both inputs are nonzero, r_i*a_i of slots with b_i = 0,
    and the alpha-scaled r_i*c_i leftovers.
    """
    ln, lq = params.log2_n, params.log2_q
    return max(
        ln + params.k3 + params.k4 - params.k2,
        ln + params.k4 + lq,
        ln + lq + params.k3,
    )


def test_candidate(
    view: AdversaryView, candidate_b: Sequence[int], slack_bits: int = 2
) -> bool:
    """Accept the candidate iff the prediction residual fits the noise bound.

    The default slack of 2 bits absorbs summation carries (calibrated by
    Monte-Carlo over seeded sessions).
    """
    t = scaled_observation(view)
    residual = abs(t - predict_e_scaled(view.state, candidate_b))
    return residual.bit_length() <= noise_bound(view.state.params) + slack_bits


def ot_default_params() -> ProtocolParams:
    """Parameter set for the transfer demo: bit vectors of length two."""
    return ProtocolParams(
        n=2, q=2, k1=512, k2=200, k3=128, k4=128, variant=Variant.TPDS14
    )


def ot_from_ppsp(
    sigma: int,
    x0: int,
    x1: int,
    params_ot: ProtocolParams,
    rng: random.Random | int,
) -> OtTranscript:
    """Run a 1-out-of-2 bit transfer as a scalar-product session.

    The receiver P0 inputs a = (1 - sigma, sigma); the sender P1 inputs
    b = (x0, x1). The session result is exactly x_sigma.
    """
    for name, bit in (("sigma", sigma), ("x0", x0), ("x1", x1)):
        if bit not in (0, 1):
            raise ParameterError(f"{name} must be a bit, got {bit}")
    if params_ot.n != 2 or params_ot.q != 2:
        raise ParameterError("the transfer encoding needs n=2, q=2")
    if params_ot.variant is not Variant.TPDS14:
        raise VariantError("the transfer demo targets the TPDS14 variant")
    a = (1 - sigma, sigma)
    b = (x0, x1)
    output, view = run_session(a, b, params_ot, rng)
    return OtTranscript(view=view, sigma=sigma, output=output)


def break_ot(transcript: OtTranscript) -> tuple[int, int] | None:
    """Recover both sender bits from the receiver's view, or None on a tie.

    Enumerates the four candidate inputs and keeps the unique one whose
    prediction residual has minimal bit length. Recovering x_{1-sigma} is
    exactly what the transfer's privacy is supposed to forbid.
    """
    state = transcript.view.state
    t = scaled_observation(transcript.view)
    candidates = ((0, 0), (0, 1), (1, 0), (1, 1))
    dists = [
        abs(t - _predict_e_full(state, cand)).bit_length() for cand in candidates
    ]
    best = min(dists)
    winners = [cand for cand, d in zip(candidates, dists) if d == best]
    if len(winners) != 1:
        return None
    return winners[0]
