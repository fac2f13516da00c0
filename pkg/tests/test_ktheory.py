from __future__ import annotations

from fractions import Fraction
from math import factorial

from hypothesis import given
from hypothesis import strategies as st

from sncdp.chow_ring import graded_part
from sncdp.ktheory import (
    KClass,
    ch_to_chern,
    chern_to_ch,
    dual,
    line_bundle,
    tensor,
    todd,
    trivial,
)

from .conftest import BUILTIN_VARIETIES, classes

_P3 = BUILTIN_VARIETIES["P3"]().ring
_RINGS = {k: f().ring for k, f in BUILTIN_VARIETIES.items()}


def _exp_series(a: int, n: int) -> list[Fraction]:
    """Coefficients of exp(a·h) up to h^n, written without the engine."""
    return [Fraction(a**k, factorial(k)) for k in range(n + 1)]


def _split_oracle(roots: list[int], n: int = 3):
    """(total Chern coefficients, ch coefficients) of ⊕ O(a_i h) on P^n."""
    c = [Fraction(1)] + [Fraction(0)] * n
    for a in roots:
        c = [c[k] + (a * c[k - 1] if k else 0) for k in range(n + 1)]
    ch = [Fraction(0)] * (n + 1)
    for a in roots:
        ch = [x + y for x, y in zip(ch, _exp_series(a, n))]
    return c, ch


def _h_poly(ring, coeffs):
    h = ring.gen("h")
    return sum((c * h**k for k, c in enumerate(coeffs)), ring.zero())


@given(st.lists(st.integers(-5, 5), min_size=0, max_size=4))
def test_chern_character_of_split_bundles(roots):
    c, ch = _split_oracle(roots)
    k = chern_to_ch(len(roots), _h_poly(_P3, c))
    assert k.ch == _h_poly(_P3, ch)
    assert ch_to_chern(k) == _h_poly(_P3, c)


@given(st.integers(0, 3), st.lists(st.integers(-9, 9), min_size=3, max_size=3))
def test_chern_roundtrip_random_inputs(rank, cs):
    total = _h_poly(_P3, [1, *cs])
    assert ch_to_chern(chern_to_ch(rank, total)) == total


def test_cotangent_of_p2(varieties):
    r = varieties["P2"].ring
    k = chern_to_ch(2, r("1 - 3*h + 3*h^2"))
    assert k.ch == r("2 - 3*h + 3/2*h^2")
    assert ch_to_chern(k) == r("1 - 3*h + 3*h^2")


def test_trivial_bundle(varieties):
    r = varieties["P1xP1"].ring
    assert chern_to_ch(4, r.one()).ch == 4
    assert ch_to_chern(trivial(r, 5)) == 1


def test_rank_zero_virtual_class(varieties):
    r = varieties["P1xP1"].ring
    assert ch_to_chern(KClass(r("-4*f1-4*f2"))) == r("1-4*f1-4*f2+16*f1*f2")


def test_f6_sheaf_character_by_chern_classes(varieties):
    # E|S = Ω ⊕ ω^* on F6: c(Ω) = 1 + K + 4pt, c(ω^*) = 1 - K, K = -2e-8f
    r = varieties["F6"].ring
    k = r("-2*e-8*f")
    omega = chern_to_ch(2, 1 + k + 4 * r.point())
    anti = chern_to_ch(1, 1 - k)
    assert (omega + anti).ch == r("3 + 4*e*f")


def test_dual_examples(varieties):
    p2 = varieties["P2"].ring
    x = KClass(p2("3 + 6*h^2"))
    assert dual(x) == x
    p1 = varieties["P1"].ring
    assert dual(KClass(p1("1 + 5*h"))).ch == p1("1 - 5*h")


@given(st.sampled_from(sorted(_RINGS)).flatmap(lambda k: classes(_RINGS[k])))
def test_dual_is_involution(x):
    k = KClass(x - x.constant() + 2)
    assert dual(dual(k)) == k


@given(st.sampled_from(sorted(_RINGS)).flatmap(lambda k: st.tuples(*(classes(_RINGS[k]),) * 3)))
def test_tensor_commutative_associative(xyz):
    a, b, c = (KClass(x - x.constant() + i) for i, x in enumerate(xyz))
    assert tensor(a, b) == tensor(b, a)
    assert tensor(tensor(a, b), c) == tensor(a, tensor(b, c))
    assert tensor(a, b).rank == a.rank * b.rank
    assert (a + b).rank == a.rank + b.rank


def test_tensor_of_line_bundles_on_divisor(varieties):
    r = varieties["P1xP1"].ring
    t = tensor(line_bundle(r("3*f1 - f2")), line_bundle(r("-6*f1")))
    assert t.ch == r("1 - 3*f1 - f2 + 3*f1*f2")
    assert tensor(t, trivial(r)) == t


def test_twisted_relative_tangent(varieties):
    r = varieties["C1"].ring
    t = tensor(line_bundle(r("2*h - f1 - f2")), line_bundle(r("-h - f1 + f2")))
    assert graded_part(t.ch, 1) == r("h - 2*f1")


def test_todd_examples(varieties):
    c1 = varieties["C1"].ring
    assert todd(line_bundle(c1("2*h - f1 - f2"))) == c1("1 + h - 1/2*f1 - 1/2*f2 - 1/2*f1*f2")
    f6 = varieties["F6"].ring
    assert todd(line_bundle(f6("2*e + 6*f"))) == f6("1 + e + 3*f")
    assert todd(trivial(f6)) == 1


def _todd_line_series(n: int) -> list[Fraction]:
    """Coefficients of x/(1-e^{-x}) via the Bernoulli recursion, independent of the engine."""
    # x/(1-e^{-x}) = Σ B_k^+ x^k / k!, with B_1^+ = +1/2
    b = [Fraction(1)]
    for m in range(1, n + 1):
        b.append(-sum(Fraction(factorial(m + 1), factorial(k) * factorial(m + 1 - k)) * b[k] for k in range(m)) / (m + 1))
    if n >= 1:
        b[1] = -b[1]
    return [b[k] / factorial(k) for k in range(n + 1)]


@given(st.integers(-6, 6), st.integers(-6, 6))
def test_todd_of_sum_is_product(a, b):
    r = _P3
    h = r.gen("h")
    la, lb = line_bundle(a * h), line_bundle(b * h)
    assert todd(la + lb) == todd(la) * todd(lb)
    series = _todd_line_series(3)
    assert todd(la) == sum((c * (a * h) ** k for k, c in enumerate(series)), r.zero())


@given(st.integers(-6, 6), st.integers(-6, 6), st.integers(-6, 6), st.integers(-6, 6))
def test_todd_of_sum_on_surface_product(a, b, c, d):
    r = _RINGS["P1xP1"]
    f1, f2 = r.gen("f1"), r.gen("f2")
    la = line_bundle(a * f1 + b * f2)
    lb = line_bundle(c * f1 + d * f2)
    assert todd(la + lb) == todd(la) * todd(lb)
