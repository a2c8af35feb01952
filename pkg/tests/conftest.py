import os
import sys

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from partreg.poly import Polynomial, make_monomial  # noqa: E402

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

VARS = ("w", "x", "y", "z")

exponents = st.dictionaries(st.sampled_from(VARS), st.integers(0, 3), max_size=3)
monomials = exponents.map(make_monomial)
coeffs = st.integers(-9, 9)


@st.composite
def polynomials(draw, max_terms=4):
    terms = draw(st.lists(st.tuples(monomials, coeffs), max_size=max_terms))
    out = {}
    for m, c in terms:
        out[m] = out.get(m, 0) + c
    return Polynomial(out)


@st.composite
def homogeneous_polys(draw, max_terms=4, min_degree=1):
    d = draw(st.integers(min_degree, 3))
    n_terms = draw(st.integers(1, max_terms))
    out = {}
    for _ in range(n_terms):
        exps = dict.fromkeys(VARS, 0)
        for _ in range(d):
            exps[draw(st.sampled_from(VARS))] += 1
        out[make_monomial(exps)] = draw(st.integers(-9, 9).filter(bool))
    return Polynomial(out)


points = st.fixed_dictionaries({v: st.integers(-6, 6) for v in VARS})
