from __future__ import annotations

import pytest

from sncdp.bps_local import (
    BPSError,
    SheafModuli,
    gv_table,
    multiple_cover_check,
    weighted_euler_smooth,
)
from sncdp.gw_local import builtin_example, local_gw_genus0
from sncdp.variety import euler_number, point, product


def test_weighted_euler_examples(varieties):
    assert weighted_euler_smooth(varieties["P1"]) == -2
    assert weighted_euler_smooth(varieties["P1xP1"]) == 4
    assert weighted_euler_smooth(point()) == 1


@pytest.mark.parametrize("a, b", [("P1", "P1"), ("P1", "P2"), ("P2", "P2"), ("F3", "P1"), ("P3", "P1")])
def test_weighted_euler_of_products(varieties, a, b):
    x, y = varieties[a], varieties[b]
    expected = (-1) ** (x.dim + y.dim) * euler_number(x) * euler_number(y)
    assert weighted_euler_smooth(product(x, y)) == expected


@pytest.mark.parametrize("name, n0", [("f1f1", -2), ("p2f6", 4)])
def test_gv_tables(name, n0):
    setup = builtin_example(name)
    table = gv_table(SheafModuli(setup.moduli, hilbert_chow_embedding=True))
    assert table.n0 == n0 == weighted_euler_smooth(setup.moduli)
    assert table.as_list() == [n0, 0, 0, 0]
    assert table[1] == table[7] == 0


def test_gv_table_requires_hilbert_chow(varieties):
    with pytest.raises(BPSError, match="higher-genus GV undefined here"):
        gv_table(SheafModuli(varieties["P1"]))


@pytest.mark.parametrize("name", ["f1f1", "p2f6"])
def test_multiple_cover_passes_on_examples(name):
    setup = builtin_example(name)
    table = gv_table(SheafModuli(setup.moduli, hilbert_chow_embedding=True))
    report = multiple_cover_check(local_gw_genus0(setup), table, primitive=True)
    assert report.passed and report.verdict == "pass"


def test_multiple_cover_detects_mismatch(varieties):
    table = gv_table(SheafModuli(varieties["P1"], hilbert_chow_embedding=True))
    assert multiple_cover_check(4, table).verdict == "fail"
    with pytest.raises(BPSError):
        multiple_cover_check(-2, table, primitive=False)
