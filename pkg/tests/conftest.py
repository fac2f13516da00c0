from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import strategies as st

from sncdp.chow_ring import ChowClass, RingPresentation
from sncdp.variety import BundleData, product, projective_bundle, projective_space, hirzebruch


def _p1xp1():
    return product(projective_space(1, var="f"), projective_space(1, var="f"))


def _c1_bundle():
    m = _p1xp1()
    return m, projective_bundle(m, BundleData(2, m.ring("1 + f1 + f2 + 2*f1*f2")), var="h")


BUILTIN_VARIETIES = {
    "P1": lambda: projective_space(1),
    "P2": lambda: projective_space(2),
    "P3": lambda: projective_space(3),
    **{f"F{n}": (lambda n=n: hirzebruch(n)) for n in range(9)},
    "P1xP1": _p1xp1,
    "C1": lambda: _c1_bundle()[1].variety,
    "F6xP1": lambda: product(hirzebruch(6), projective_space(1, var="g")),
    "P2xP1": lambda: product(projective_space(2), projective_space(1, var="g")),
}


@pytest.fixture(scope="session")
def varieties():
    return {k: f() for k, f in BUILTIN_VARIETIES.items()}


@pytest.fixture(scope="session")
def c1_bundle():
    return _c1_bundle()


coefficients = st.one_of(
    st.integers(-6, 6).map(Fraction),
    st.builds(Fraction, st.integers(-9, 9), st.integers(1, 4)),
)


def classes(ring: RingPresentation, max_terms: int = 5):
    """Hypothesis strategy for random classes over ``ring``."""
    monos = ring.standard_monomials()
    return st.dictionaries(st.sampled_from(monos), coefficients, max_size=max_terms).map(
        lambda d: ChowClass.from_terms(ring, d)
    )


def random_class(rng, ring: RingPresentation, max_terms: int = 5, degree: int | None = None) -> ChowClass:
    monos = ring.standard_monomials(degree) if degree is not None else ring.standard_monomials()
    terms = {}
    for _ in range(rng.randint(0, max_terms)):
        terms[rng.choice(monos)] = Fraction(rng.randint(-7, 7), rng.randint(1, 3))
    return ChowClass.from_terms(ring, terms)


def pytest_terminal_summary(terminalreporter):
    from .test_acceptance import RESULTS

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
