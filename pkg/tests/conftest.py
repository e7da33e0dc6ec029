from fractions import Fraction

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

settings.register_profile(
    "default", deadline=None, max_examples=100, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


def rationals(max_num: int = 10**6, max_den: int = 10**6):
    return st.builds(Fraction, st.integers(-max_num, max_num), st.integers(1, max_den))


def positive_rationals(max_num: int = 1000, max_den: int = 1000):
    return st.builds(Fraction, st.integers(1, max_num), st.integers(1, max_den))
