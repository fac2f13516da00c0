"""Local BPS (genus-0 Gopakumar–Vafa) invariants of declared smooth sheaf moduli."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .variety import Variety, euler_number


class BPSError(ValueError):
    pass


@dataclass(frozen=True)
class SheafModuli:
    space: Variety
    label: str = ""
    hilbert_chow_embedding: bool = False
    polarization: str = "any"


@dataclass(frozen=True)
class GVTable:
    n0: int
    higher: tuple[int, ...] = (0, 0, 0)

    def __getitem__(self, g: int) -> int:
        if g == 0:
            return self.n0
        if g - 1 < len(self.higher):
            return self.higher[g - 1]
        return 0

    def as_list(self) -> list[int]:
        return [self.n0, *self.higher]


def weighted_euler_smooth(space: Variety) -> int:
    """Behrend-weighted Euler characteristic; the weight is (-1)^dim on smooth spaces."""
    return (-1) ** space.dim * euler_number(space)


def gv_table(moduli: SheafModuli, genera: int = 3) -> GVTable:
    if not moduli.hilbert_chow_embedding:
        raise BPSError(
            "higher-genus GV undefined here: the Hilbert-Chow morphism must be declared "
            "an isomorphism onto its image"
        )
    return GVTable(weighted_euler_smooth(moduli.space), (0,) * genera)


@dataclass(frozen=True)
class MultipleCoverReport:
    gw: Fraction
    bps: int
    passed: bool

    @property
    def verdict(self) -> str:
        return "pass" if self.passed else "fail"


def multiple_cover_check(n0_gw: Fraction | int, table: GVTable, primitive: bool = True) -> MultipleCoverReport:
    """At a primitive class only k = 1 contributes to Σ_{k|γ} n⁰_{γ/k}/k³."""
    if not primitive:
        raise BPSError("multiple-cover check needs a primitive class; divisor sums are not supported")
    gw = Fraction(n0_gw)
    return MultipleCoverReport(gw, table.n0, gw == table.n0)
