"""Protocol parameter set, correctness constraints, and analytic attack thresholds.

All constraint arithmetic works on bit lengths: ``log2`` of the vector length
``n`` and the element bound ``q`` is taken as ``ceil(log2(.))`` so that the
inequalities stay conservative for sizes that are not powers of two.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum


class ParameterError(ValueError):
    """A structurally invalid parameter set or input vector."""


class Variant(str, Enum):
    """Which published revision of the protocol a session runs.

    SPOC13 is the original three-step protocol; TPDS14 adds multiplicative
    masks r_i for zero entries of b plus two all-zero "fix" slots appended to
    both input vectors.
    """

    SPOC13 = "spoc13"
    TPDS14 = "tpds14"


def ceil_log2(x: int) -> int:
    """ceil(log2(x)) for a positive integer; 0 for x == 1."""
    if x < 1:
        raise ParameterError(f"ceil_log2 needs a positive integer, got {x}")
    return (x - 1).bit_length()


@dataclass(frozen=True)
class ProtocolParams:
    """Sizes governing one protocol instance.

    n:  vector length, excluding the two fix slots of the TPDS14 variant
    q:  exclusive upper bound on vector elements; a_i, b_i in [0, q)
    k1: bit length of the prime modulus p
    k2: bit length of the structuring base alpha
    k3: bit length of the additive masks c_i
    k4: bit length of the multiplicative masks r_i
    """

    n: int
    q: int
    k1: int
    k2: int
    k3: int
    k4: int
    variant: Variant = Variant.TPDS14

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ParameterError(f"n must be >= 1, got {self.n}")
        if self.q < 2:
            raise ParameterError(f"q must be >= 2, got {self.q}")
        if self.k2 < 2:
            raise ParameterError(f"k2 must be >= 2, got {self.k2}")
        if self.k1 <= 2 * self.k2:
            raise ParameterError(
                f"k1 must exceed 2*k2 so alpha^2 fits below p "
                f"(k1={self.k1}, k2={self.k2})"
            )
        if self.k3 < 1:
            raise ParameterError(f"k3 must be >= 1, got {self.k3}")
        if self.k4 < 1:
            raise ParameterError(f"k4 must be >= 1, got {self.k4}")
        if not isinstance(self.variant, Variant):
            object.__setattr__(self, "variant", Variant(self.variant))

    @property
    def slots(self) -> int:
        """Total slot count: n, plus the two fix slots under TPDS14."""
        return self.n + (2 if self.variant is Variant.TPDS14 else 0)

    @property
    def log2_n(self) -> int:
        return ceil_log2(self.n)

    @property
    def log2_q(self) -> int:
        return ceil_log2(self.q)


@dataclass(frozen=True)
class ConstraintReport:
    """Truth values of the bit-length inequalities required for correctness."""

    eq_result_fits_p: bool  # log2 n + 2 log2 q + 2 k2 < k1
    eq_1a: bool  # log2 n + log2 q + k3 < k2
    eq_1b: bool  # log2 n + log2 q + k4 < k2
    eq_1c: bool  # log2 n + k3 + k4 < 2 k2
    all_satisfied: bool

    def as_text(self) -> str:
        rows = [
            ("result fits below p", self.eq_result_fits_p),
            ("eq 1a (additive masks)", self.eq_1a),
            ("eq 1b (multiplicative masks)", self.eq_1b),
            ("eq 1c (combined masks)", self.eq_1c),
            ("all satisfied", self.all_satisfied),
        ]
        return "\n".join(f"  {name:<30} {str(ok).lower()}" for name, ok in rows)

    def as_record(self) -> str:
        return (
            f"eq_result_fits_p={str(self.eq_result_fits_p).lower()} "
            f"eq_1a={str(self.eq_1a).lower()} "
            f"eq_1b={str(self.eq_1b).lower()} "
            f"eq_1c={str(self.eq_1c).lower()} "
            f"all_satisfied={str(self.all_satisfied).lower()}"
        )


@dataclass(frozen=True)
class ThresholdReport:
    """Analytic k4 thresholds at which correctness or the attacks degrade.

    All values are bit lengths; the harness treats ``k4 >= threshold`` as the
    regime where the corresponding property may fail.
    """

    k4_correctness_onset: int  # k2 - log2 q - log2 n; smallest k4 breaking eq 1b
    k4_attack1_neighbor: int  # k2 - log2 n; neighbor-pair distinction may fail
    k4_attack1_any: int  # k2; distinguishing any pair may fail
    k4_attack2: int  # 2 (k2 + log2 q) - k3; general-a attack may fail
    max_error_bits: int  # k1 - 2 k2; ceiling on the result error's bit length

    def as_text(self) -> str:
        rows = [
            ("correctness error onset", self.k4_correctness_onset),
            ("attack 1 may fail (neighbor b)", self.k4_attack1_neighbor),
            ("attack 1 may fail (any b)", self.k4_attack1_any),
            ("attack 2 may fail", self.k4_attack2),
            ("max error bits", self.max_error_bits),
        ]
        return "\n".join(f"  {name:<30} {val}" for name, val in rows)

    def as_record(self) -> str:
        return (
            f"k4_correctness_onset={self.k4_correctness_onset} "
            f"k4_attack1_neighbor={self.k4_attack1_neighbor} "
            f"k4_attack1_any={self.k4_attack1_any} "
            f"k4_attack2={self.k4_attack2} "
            f"max_error_bits={self.max_error_bits}"
        )


def validate(params: ProtocolParams) -> ConstraintReport:
    """Evaluate the correctness constraints for a parameter set.

    Pure function of the parameters; structural violations (e.g. k1 <= 2*k2)
    are rejected by ProtocolParams itself.
    """
    ln, lq = params.log2_n, params.log2_q
    fits_p = ln + 2 * lq + 2 * params.k2 < params.k1
    eq_1a = ln + lq + params.k3 < params.k2
    eq_1b = ln + lq + params.k4 < params.k2
    eq_1c = ln + params.k3 + params.k4 < 2 * params.k2
    return ConstraintReport(
        eq_result_fits_p=fits_p,
        eq_1a=eq_1a,
        eq_1b=eq_1b,
        eq_1c=eq_1c,
        all_satisfied=fits_p and eq_1a and eq_1b and eq_1c,
    )


def attack_thresholds(params: ProtocolParams) -> ThresholdReport:
    """Derive the analytic failure thresholds for a parameter set."""
    ln, lq = params.log2_n, params.log2_q
    return ThresholdReport(
        k4_correctness_onset=params.k2 - lq - ln,
        k4_attack1_neighbor=params.k2 - ln,
        k4_attack1_any=params.k2,
        k4_attack2=2 * (params.k2 + lq) - params.k3,
        max_error_bits=params.k1 - 2 * params.k2,
    )
