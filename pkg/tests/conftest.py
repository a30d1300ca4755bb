import sys
from pathlib import Path

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

sys.path.insert(0, str(Path(__file__).parent))

from tmodext.field import FieldParams, RationalCoeff  # noqa: E402
from tmodext.skew import Side, SkewPoly  # noqa: E402

settings.register_profile("default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

F3 = FieldParams(3)
F4 = FieldParams(2, 2, (1, 1, 1))  # F_4 = F_2[z]/(z^2 + z + 1)

VARS = (("theta", 0), ("theta", 1), ("a", 0), ("a", 1), ("a", -1), ("b", 0))


@st.composite
def polys(draw, F=F3, max_terms=3, max_exp=2):
    terms = draw(st.lists(st.tuples(st.integers(0, F.q - 1), st.sampled_from(VARS), st.integers(0, max_exp)), max_size=max_terms))
    out = RationalCoeff.zero(F)
    for c, (name, tw), e in terms:
        out = out + RationalCoeff.from_scalar(c, F) * RationalCoeff.var(name, F, tw) ** e
    return out


@st.composite
def coeffs(draw, F=F3):
    num = draw(polys(F))
    den = draw(polys(F, max_terms=2))
    return num if den.is_zero() else num / den


@st.composite
def skew_polys(draw, F=F3, side=Side.TAU, max_deg=3):
    cs = draw(st.lists(coeffs(F), max_size=max_deg + 1))
    return SkewPoly(cs, F, side)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(results):
        terminalreporter.write_line(results[n])
