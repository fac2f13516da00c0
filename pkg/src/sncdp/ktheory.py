"""Virtual sheaf classes recorded by their Chern characters."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial

from .chow_ring import ChowClass, RingError, RingPresentation, graded_part


@dataclass(frozen=True)
class KClass:
    ch: ChowClass

    def __post_init__(self):
        rank = self.ch.constant()
        if rank.denominator != 1:
            raise RingError(f"virtual rank must be an integer, got {rank}")

    @property
    def ring(self) -> RingPresentation:
        return self.ch.ring

    @property
    def rank(self) -> int:
        return int(self.ch.constant())

    def part(self, d: int) -> ChowClass:
        return graded_part(self.ch, d)

    def __add__(self, other: KClass) -> KClass:
        return KClass(self.ch + other.ch)

    def __sub__(self, other: KClass) -> KClass:
        return KClass(self.ch - other.ch)

    def __neg__(self) -> KClass:
        return KClass(-self.ch)

    def __mul__(self, other: KClass) -> KClass:
        return tensor(self, other)

    def __rmul__(self, n: int) -> KClass:
        return KClass(self.ch * n)

    def __str__(self) -> str:
        return str(self.ch)


def exp_class(x: ChowClass) -> ChowClass:
    """exp(x) truncated at the ring dimension; ``x`` must have no constant term."""
    if x.constant():
        raise RingError("exp needs a class with vanishing degree-0 part")
    result = x.ring.one()
    term = x.ring.one()
    for k in range(1, x.ring.dim + 1):
        term = term * x / k
        if not term:
            break
        result = result + term
    return result


def line_bundle(c1: ChowClass) -> KClass:
    return KClass(exp_class(c1))


def trivial(ring: RingPresentation, rank: int = 1) -> KClass:
    return KClass(ring.scalar(rank))


def _chern_parts(total: ChowClass) -> list[ChowClass]:
    ring = total.ring
    return [graded_part(total, d) for d in range(ring.dim + 1)]


def chern_to_ch(rank: int, total_chern: ChowClass) -> KClass:
    """Newton's identities: power sums p_k = k! ch_k from elementary classes c_k."""
    ring = total_chern.ring
    c = _chern_parts(total_chern)
    if c[0] != 1:
        raise RingError(f"total Chern class must start with 1, got {total_chern}")
    p: list[ChowClass] = [ring.scalar(rank)]
    for k in range(1, ring.dim + 1):
        pk = c[k] * ((-1) ** (k - 1) * k)
        for i in range(1, k):
            pk = pk + c[k - i] * p[i] * (-1) ** (k - 1 + i)
        p.append(pk)
    ch = ring.scalar(rank)
    for k in range(1, ring.dim + 1):
        ch = ch + p[k] / factorial(k)
    return KClass(ch)


def ch_to_chern(k: KClass) -> ChowClass:
    """Total Chern class from the Chern character; valid for virtual classes too."""
    ring = k.ring
    p = [k.ch.ring.scalar(k.rank)] + [graded_part(k.ch, d) * factorial(d) for d in range(1, ring.dim + 1)]
    c: list[ChowClass] = [ring.one()]
    for n in range(1, ring.dim + 1):
        acc = ring.zero()
        for i in range(1, n + 1):
            acc = acc + c[n - i] * p[i] * (-1) ** (i - 1)
        c.append(acc / n)
    total = ring.zero()
    for part in c:
        total = total + part
    return total


def chern_class(k: KClass, i: int) -> ChowClass:
    return graded_part(ch_to_chern(k), i)


def dual(k: KClass) -> KClass:
    ring = k.ring
    out = ring.zero()
    for d, part in k.ch.degree_parts().items():
        out = out + (part if d % 2 == 0 else -part)
    return KClass(out)


def tensor(a: KClass, b: KClass) -> KClass:
    return KClass(a.ch * b.ch)


def todd(k: KClass) -> ChowClass:
    """Universal Todd polynomial through degree 3."""
    c = ch_to_chern(k)
    c1, c2 = graded_part(c, 1), graded_part(c, 2)
    return 1 + c1 / 2 + (c1 * c1 + c2) / 12 + c1 * c2 / 24


def inverse_total(c: ChowClass) -> ChowClass:
    """Multiplicative inverse of a class with constant term 1."""
    if c.constant() != 1:
        raise RingError("only classes with constant term 1 are invertible here")
    nil = c - 1
    out = c.ring.one()
    term = c.ring.one()
    for _ in range(c.ring.dim):
        term = -term * nil
        if not term:
            break
        out = out + term
    return out
