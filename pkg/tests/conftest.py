import os

from hypothesis import HealthCheck, settings, strategies as st

from ninefields.field_arith import FIELDS, QuadInt, field

settings.register_profile(
    "default", max_examples=60, deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.register_profile("thorough", max_examples=1000, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

fields = st.sampled_from(FIELDS).map(field)


def elements(K, bound=50, nonzero=False):
    el = st.builds(lambda x, y: QuadInt(x, y, K),
                   st.integers(-bound, bound), st.integers(-bound, bound))
    return el.filter(bool) if nonzero else el


@st.composite
def field_and_elements(draw, n=2, bound=50, nonzero=False):
    K = draw(fields)
    return (K,) + tuple(draw(elements(K, bound, nonzero)) for _ in range(n))
