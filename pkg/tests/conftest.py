import pytest

from turbostop import RscSpec, UMTS_SPEC, SisoInput, build_trellis


@pytest.fixture(scope="session")
def umts_trellis():
    return build_trellis(UMTS_SPEC)


@pytest.fixture(scope="session")
def tiny_trellis():
    # memory-1 code (feedback 1+D, forward 1+D): small enough to reason about
    # by hand, still recursive and systematic.
    return build_trellis(RscSpec(feedback_poly=0b11, forward_poly=0b11, memory=1))


def random_siso_input(rng, k, memory, spread=4.0):
    n = k + memory
    return SisoInput(sys_llr=rng.normal(0.0, spread, n),
                     par_llr=rng.normal(0.0, spread, n),
                     apriori=rng.normal(0.0, spread, k))
