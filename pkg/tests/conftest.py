import os

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from cordcalc.braid import from_letters

settings.register_profile("default", max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("thorough", max_examples=300, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@st.composite
def braids(draw, max_strands=3, max_length=4, min_strands=2):
    n = draw(st.integers(min_strands, max_strands))
    length = draw(st.integers(0, max_length))
    letters = draw(st.lists(st.integers(1, n - 1).flatmap(lambda k: st.sampled_from([k, -k])), min_size=length, max_size=length))
    return from_letters(letters, n)


@st.composite
def braid_pairs(draw, max_strands=3, max_length=3):
    a = draw(braids(max_strands, max_length))
    b = draw(braids(a.strands, max_length, min_strands=a.strands))
    return a, b
