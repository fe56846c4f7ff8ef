import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from cases import inst_a
from rmsmqc.core import Instance, validate_and_normalize

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture
def A():
    return inst_a()


@st.composite
def instances(draw, max_locations=4, max_regions=5, max_b=3, q=None):
    """Normalized instances where every region has at least one neighbor."""
    n_i = draw(st.integers(1, max_locations))
    n_j = draw(st.integers(1, max_regions))
    nbrs = [draw(st.sets(st.integers(0, n_i - 1), min_size=1, max_size=n_i)) for _ in range(n_j)]
    a = [draw(st.integers(0, max_b)) for _ in range(n_j)]
    b = [aj + draw(st.integers(0, max_b)) for aj in a]
    gamma = draw(st.integers(sum(a), sum(b)))
    qq = q if q is not None else draw(st.integers(1, 3))
    return validate_and_normalize(Instance(qq, n_i, tuple(tuple(nb) for nb in nbrs),
                                           tuple(a), tuple(b), gamma))


@st.composite
def instance_and_x(draw, max_x=3, **kw):
    inst = draw(instances(**kw))
    x = [draw(st.integers(0, max_x)) for _ in range(inst.n_locations)]
    return inst, x


@st.composite
def instance_and_demand(draw, max_d=4, **kw):
    inst = draw(instances(**kw))
    d = [draw(st.integers(0, max_d)) for _ in range(inst.n_regions)]
    return inst, d


# one verdict line per acceptance criterion, shown at the end of the run
ACCEPTANCE: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for n in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[n])
