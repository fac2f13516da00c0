"""Projective spaces, Hirzebruch surfaces, products and rank-2 projective bundles.

Projective bundles follow the quotient convention: on ``P(E)`` with
``ξ = c1(O(1))`` we have ``ξ² = c1(E)ξ - c2(E)``, ``π_*ξ = 1`` and
``c1(T_π) = 2ξ - c1(E)``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple

from .chow_ring import (
    ChowClass,
    RingError,
    RingPresentation,
    VariableSpec,
    graded_part,
    make_ring,
)
from .ktheory import KClass, ch_to_chern, exp_class, line_bundle
from .pushforward import (
    Pushforward,
    RingMap,
    product_projection,
    projective_bundle_pushforward,
    pullback,
)


@dataclass(frozen=True, eq=False)
class Variety:
    ring: RingPresentation
    tangent_ch: KClass
    label: str
    kind: str = ""
    factor_maps: tuple[RingMap, ...] = field(default=(), repr=False)

    def __post_init__(self):
        if self.tangent_ch.ring is not self.ring:
            raise RingError("tangent character must live on the variety's ring")
        if self.tangent_ch.rank != self.ring.dim:
            raise RingError(f"tangent rank {self.tangent_ch.rank} != dimension {self.ring.dim}")

    @property
    def dim(self) -> int:
        return self.ring.dim

    @property
    def canonical_class(self) -> ChowClass:
        return -graded_part(self.tangent_ch.ch, 1)

    @property
    def hirzebruch_index(self) -> int | None:
        if self.kind.startswith("F") and self.kind[1:].isdigit():
            return int(self.kind[1:])
        return None

    def __call__(self, text: str) -> ChowClass:
        return self.ring(text)

    def __repr__(self) -> str:
        return f"Variety({self.label})"


@dataclass(frozen=True)
class BundleData:
    rank: int
    total_chern: ChowClass

    def __post_init__(self):
        c = self.total_chern
        if c.constant() != 1 or graded_part(c, 0) != 1:
            raise RingError("total Chern class must start with 1")
        for d in range(self.rank + 1, c.ring.dim + 1):
            if graded_part(c, d):
                raise RingError(f"c_{d} must vanish for a rank {self.rank} bundle")

    def c(self, i: int) -> ChowClass:
        return graded_part(self.total_chern, i)


class ProjectiveBundle(NamedTuple):
    variety: Variety
    pushforward: Pushforward
    rel_tangent: KClass
    base_pullback: RingMap


def point() -> Variety:
    ring = make_ring([], [], 0, (), label="pt")
    return Variety(ring, KClass(ring.zero()), "pt", kind="point")


def projective_space(n: int, var: str = "h") -> Variety:
    if n < 1:
        raise ValueError("projective_space needs n >= 1")
    ring = make_ring([(var, 1)], [(var, n + 1, 0)], n, (n,), label=f"P{n}")
    h = ring.gen(var)
    tangent = exp_class(h) * (n + 1) - 1
    return Variety(ring, KClass(tangent), f"P{n}", kind=f"P{n}")


def projective_bundle(base: Variety, bundle: BundleData, var: str = "xi") -> ProjectiveBundle:
    if bundle.rank != 2:
        raise ValueError("only rank-2 projective bundles are supported")
    if bundle.total_chern.ring is not base.ring:
        raise RingError("bundle data must live on the base")
    br = base.ring
    n = len(br.variables)
    variables = list(br.variables) + [VariableSpec(var, 1)]
    rules = []
    for rule in br.rules:
        rules.append((rule.variable, rule.power, {m + (0,): c for m, c in rule.replacement}))
    repl: dict = {}
    for m, c in bundle.c(1).terms.items():
        repl[m + (1,)] = repl.get(m + (1,), 0) + c
    for m, c in bundle.c(2).terms.items():
        repl[m + (0,)] = repl.get(m + (0,), 0) - c
    rules.append((var, 2, repl))
    label = f"P({base.label})"
    ring = make_ring(variables, rules, br.dim + 1, br.point_monomial + (1,), label=label)
    up = RingMap(br, ring, tuple(ring.gen(v.name) for v in br.variables))
    xi = ring.gen(var)
    t_rel = line_bundle(2 * xi - pullback(up, bundle.c(1)))
    tangent = pullback(up, base.tangent_ch) + t_rel
    total = Variety(ring, tangent, label, kind="bundle")
    pf = projective_bundle_pushforward(ring, br, var, {v.name: v.name for v in br.variables})
    return ProjectiveBundle(total, pf, t_rel, up)


def hirzebruch_bundle(n: int, names: tuple[str, str] = ("e", "f")) -> ProjectiveBundle:
    """F_n = P(O ⊕ O(-n)) over P¹ with section class ``e`` (e² = -n) and fiber ``f``."""
    if n < 0:
        raise ValueError("hirzebruch needs n >= 0")
    e, f = names
    base = projective_space(1, var=f)
    c = base.ring.one() - n * base.ring.gen(f)
    pb = projective_bundle(base, BundleData(2, c), var=e)
    v = pb.variety
    surf = Variety(v.ring, v.tangent_ch, f"F{n}", kind=f"F{n}")
    return ProjectiveBundle(surf, pb.pushforward, pb.rel_tangent, pb.base_pullback)


def hirzebruch(n: int, names: tuple[str, str] = ("e", "f")) -> Variety:
    return hirzebruch_bundle(n, names).variety


def _renamed(names_x, names_y):
    clash = set(names_x) & set(names_y)
    if not clash:
        return list(names_x), list(names_y), {}
    nx = [f"{v}1" if v in clash else v for v in names_x]
    ny = [f"{v}2" if v in clash else v for v in names_y]
    if len(set(nx) | set(ny)) != len(nx) + len(ny):
        raise RingError(f"cannot resolve variable collision between {names_x} and {names_y}")
    renames = {v: (f"{v}1", f"{v}2") for v in sorted(clash)}
    return nx, ny, renames


def product(x: Variety, y: Variety) -> Variety:
    if y.dim == 0 and not y.ring.variables:
        return x
    if x.dim == 0 and not x.ring.variables:
        return y
    nx, ny, renames = _renamed(x.ring.names, y.ring.names)
    kx = len(nx)
    variables = [VariableSpec(n, v.degree) for n, v in zip(nx, x.ring.variables)]
    variables += [VariableSpec(n, v.degree) for n, v in zip(ny, y.ring.variables)]
    pad = (0,) * len(ny)
    rules = [(nx[i], r.power, {m + pad: c for m, c in r.replacement}) for i, r in enumerate(x.ring.rules)]
    lpad = (0,) * kx
    rules += [(ny[i], r.power, {lpad + m: c for m, c in r.replacement}) for i, r in enumerate(y.ring.rules)]
    label = f"{x.label}x{y.label}"
    if renames:
        label += "[" + ",".join(f"{v}->{a}|{b}" for v, (a, b) in renames.items()) + "]"
    ring = make_ring(
        variables, rules, x.dim + y.dim,
        x.ring.point_monomial + y.ring.point_monomial, label=label,
    )
    px = RingMap(x.ring, ring, tuple(ring.gen(n) for n in nx))
    py = RingMap(y.ring, ring, tuple(ring.gen(n) for n in ny))
    tangent = pullback(px, x.tangent_ch) + pullback(py, y.tangent_ch)
    return Variety(ring, tangent, label, kind="product", factor_maps=(px, py))


def factor_projection(xy: Variety, which: int) -> Pushforward:
    """Pushforward ``X×Y -> X`` (which=0) or ``X×Y -> Y`` (which=1)."""
    if len(xy.factor_maps) != 2:
        raise ValueError("not a product built by this module")
    keep, drop = xy.factor_maps[which], xy.factor_maps[1 - which]
    contracted = {}
    for img, e in zip(drop.images, drop.source.point_monomial):
        contracted[xy.ring.names[_gen_index(img)]] = e
    base = {xy.ring.names[_gen_index(img)]: name for img, name in zip(keep.images, keep.source.names)}
    return product_projection(xy.ring, keep.source, contracted, base)


def _gen_index(img: ChowClass) -> int:
    (m,) = img.terms
    return m.index(1)


def integrate(x: Variety | RingPresentation, cls: ChowClass) -> Fraction:
    ring = x.ring if isinstance(x, Variety) else x
    if cls.ring is not ring:
        raise RingError("integrate: class does not live on this variety")
    return cls.coefficient(ring.point_monomial)


def total_chern(x: Variety) -> ChowClass:
    return ch_to_chern(x.tangent_ch)


def euler_number(x: Variety) -> int:
    value = integrate(x, graded_part(total_chern(x), x.dim))
    if value.denominator != 1:
        raise ArithmeticError(f"non-integral Euler number {value} for {x.label}")
    return int(value)
