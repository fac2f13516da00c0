from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from sncdp.chow_ring import graded_part
from sncdp.snc_delpezzo import (
    ComponentSurface,
    ConfigurationError,
    Gluing,
    SncConfiguration,
    check_config,
    classify,
    curve,
    e_character,
    is_ample,
    rank2,
    smooth_rational_curves,
    surface,
)

EXPECTED_RANK2 = {
    "P2 u F3: l~e",
    "P2 u F6: 2l~e",
    "F0 u F2: e~e",
    "F0 u F4: e+f~e",
    "F1 u F1: e~e",
    "F1 u F3: e+f~e",
}


def _oracle_rank2(n_max: int, b_max: int) -> set[frozenset]:
    """Brute force with integer arithmetic only: (kind, (a, b) or d) pairs summing to -2."""
    entries = []
    for d in (1, 2):
        if 3 - d > 0:  # -(K + dl) = (3-d)l ample
            entries.append((("P2", d), d * d))
    for n in range(n_max + 1):
        for a, b in [(1, 0), (0, 1)] + [(1, b) for b in range(max(n, 1), b_max + 1)]:
            ra, rb = 2 - a, n + 2 - b  # -(K + ae + bf)
            if ra > 0 and rb > n * ra:
                key = (a, b)
                if n == 0:
                    key = max(key, key[::-1])
                entries.append(((f"F{n}", key), -n * a * a + 2 * a * b))
    out = set()
    for i, (x, sx) in enumerate(entries):
        for y, sy in entries[i:]:
            if sx + sy == -2:
                out.add(frozenset([x, y]))
    return out


def _as_oracle_key(cfg) -> frozenset:
    keys = []
    for comp in cfg.components:
        (c,) = comp.boundary_curves
        if comp.kind == "P2":
            keys.append(("P2", c.key[0]))
        else:
            k = c.key
            if comp.kind == "F0":
                k = max(k, k[::-1])
            keys.append((comp.kind, k))
    return frozenset(keys)


# -- ampleness and curves ------------------------------------------------------

def test_ampleness_examples():
    assert is_ample("F6", surface("F6").ring("e + 8*f"))
    assert is_ample("P2", surface("P2").ring("h"))
    assert not is_ample("F2", surface("F2").ring("e + 2*f"))


@pytest.mark.parametrize("n", range(9))
def test_anticanonical_ampleness_singles_out_del_pezzo(n):
    x = surface(f"F{n}")
    assert is_ample(f"F{n}", -x.canonical_class) == (n <= 1)


def test_unsupported_kind():
    with pytest.raises(ConfigurationError):
        surface("Q3")


def test_curve_lists():
    p2 = smooth_rational_curves("P2", 8)
    assert [c.name for c in p2] == ["l", "2l"]
    assert [c.self_intersection for c in p2] == [1, 4]
    f6 = {c.name: c for c in smooth_rational_curves("F6", 8)}
    assert f6["e"].self_intersection == -6
    assert set(f6) == {"e", "f", "e+6f", "e+7f", "e+8f"}
    f0 = {c.name: c for c in smooth_rational_curves("F0", 8)}
    assert f0["e+f"].self_intersection == 2


@given(st.integers(0, 8), st.integers(1, 12))
def test_listed_curves_are_rational(n, bound):
    for c in smooth_rational_curves(f"F{n}", bound):
        assert c.genus == 0
        assert c.self_intersection >= -n


# -- configurations -----------------------------------------------------------

def test_check_config_examples():
    assert check_config(rank2("F1", "e", "F1", "e")).ok
    bad = check_config(rank2("P2", "l", "F5", "e"))
    assert not bad.ok
    assert any("1 + -5 = -4" in v for v in bad.violations)


def test_f2_triangle_passes():
    comp = ComponentSurface("F2", (curve("F2", "f"), curve("F2", "e")))
    cfg = SncConfiguration(
        (comp, comp, comp),
        (Gluing(0, 1, 1, 0), Gluing(1, 1, 2, 0), Gluing(2, 1, 0, 0)),
    )
    assert check_config(cfg).ok
    x = surface("F2")
    assert -(x.canonical_class + x.ring("e + f")) == x.ring("e + 3*f")
    assert is_ample("F2", x.ring("e + 3*f"))


def test_malformed_configuration_raises():
    comp = ComponentSurface("F1", (curve("F1", "e"),))
    with pytest.raises(ConfigurationError):
        check_config(SncConfiguration((comp, comp), (Gluing(0, 0, 1, 3),)))


def test_disconnected_configuration_fails():
    comp = ComponentSurface("F1", (curve("F1", "e"),))
    verdict = check_config(SncConfiguration((comp, comp), ()))
    assert any("connected" in v for v in verdict.violations)


def test_classify_rank2_matches_list():
    result = classify(2, 8, 8)
    assert {c.describe() for c in result.configurations} == EXPECTED_RANK2
    assert len(result.configurations) == 6
    assert result.complete
    for cfg in result.configurations:
        assert check_config(cfg).ok


@pytest.mark.parametrize("n_max, b_max", [(8, 8), (10, 10), (12, 9), (9, 14)])
def test_classify_rank2_matches_brute_force(n_max, b_max):
    result = classify(2, n_max, b_max)
    assert {_as_oracle_key(c) for c in result.configurations} == _oracle_rank2(n_max, b_max)


def test_classify_rank3_is_the_triangle():
    result = classify(3, 8, 8)
    assert len(result.configurations) == 1
    (tri,) = result.configurations
    assert [c.kind for c in tri.components] == ["F2", "F2", "F2"]
    assert check_config(tri).ok
    assert result.complete


@pytest.mark.parametrize("rank", [2, 3])
def test_classification_saturates(rank):
    base = [c.describe() for c in classify(rank, 8, 8).configurations]
    for n_max, b_max in ((9, 8), (8, 11), (12, 12)):
        assert [c.describe() for c in classify(rank, n_max, b_max).configurations] == base


def test_small_bounds_flagged_incomplete():
    result = classify(2, 2, 8)
    assert {c.describe() for c in result.configurations} == {"F0 u F2: e~e", "F1 u F1: e~e"}
    assert not result.complete
    assert result.note


def test_classify_rejects_rank():
    with pytest.raises(ValueError):
        classify(4)


def test_classification_is_deterministic():
    a = [c.to_dict() for c in classify(2).configurations]
    b = [c.to_dict() for c in classify(2).configurations]
    assert a == b


# -- sheaf characters -----------------------------------------------------------

def test_e_character_values():
    assert e_character("P2").ch == surface("P2").ring("3 + 6*h^2")
    assert e_character("F6").ch == surface("F6").ring("3 + 4*e*f")
    assert e_character("F1").ch == surface("F1").ring("3 + 4*e*f")


@pytest.mark.parametrize("rank", [2, 3])
def test_e_character_rank3_c1_zero_on_classified_components(rank):
    for cfg in classify(rank).configurations:
        for comp in cfg.components:
            e = e_character(comp)
            assert e.rank == 3
            assert graded_part(e.ch, 1) == 0
