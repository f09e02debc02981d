import pytest

from ppsp_lab import ProtocolParams, Variant


@pytest.fixture(scope="session")
def baseline_params() -> ProtocolParams:
    """The sweep-baseline parameter set (valid for correctness)."""
    return ProtocolParams(
        n=256, q=1 << 32, k1=512, k2=200, k3=128, k4=128, variant=Variant.TPDS14
    )


@pytest.fixture(scope="session")
def small_params() -> ProtocolParams:
    """A fast, constraint-satisfying parameter set for property tests."""
    return ProtocolParams(
        n=16, q=256, k1=112, k2=40, k3=16, k4=16, variant=Variant.TPDS14
    )


@pytest.fixture(scope="session")
def small_spoc13(small_params) -> ProtocolParams:
    import dataclasses

    return dataclasses.replace(small_params, variant=Variant.SPOC13)
