"""Pullbacks, pushforwards and the GRR index for families of curves.

Every pushforward the engine needs has the same shape: the source ring is
(base variables) x (fiber variables), and pushing forward keeps the
coefficient of one fixed fiber monomial, renaming base variables into the
target.  The three kinds differ only in that fiber monomial:

* ``projective-bundle``: the fiber variable to the first power,
* ``product-projection``: the point class of the contracted factor,
* ``isomorphism``: the empty monomial.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Union

from .chow_ring import ChowClass, Monomial, RingError, RingPresentation, parse_class
from .ktheory import KClass, todd

PROJECTIVE_BUNDLE = "projective-bundle"
PRODUCT_PROJECTION = "product-projection"
ISOMORPHISM = "isomorphism"


@dataclass(frozen=True)
class RingMap:
    source: RingPresentation
    target: RingPresentation
    images: tuple[ChowClass, ...]

    def image(self, name: str) -> ChowClass:
        return self.images[self.source.index(name)]

    def __call__(self, x):
        return pullback(self, x)

    def compose(self, after: RingMap) -> RingMap:
        """``after ∘ self``: first apply self, then ``after``."""
        if after.source is not self.target:
            raise RingError("cannot compose ring maps: ring mismatch")
        return RingMap(self.source, after.target, tuple(after(img) for img in self.images))


def ring_map(
    source: RingPresentation,
    target: RingPresentation,
    images: Mapping[str, Union[ChowClass, str]] | None = None,
    by_name: bool = True,
) -> RingMap:
    """Build a ring map from generator images, checking degrees and every relation.

    Generators missing from ``images`` are sent to the target generator of the
    same name when ``by_name`` is set.
    """
    images = dict(images or {})
    unknown = set(images) - set(source.names)
    if unknown:
        raise RingError(f"images given for unknown generators {sorted(unknown)}")
    out = []
    for spec in source.variables:
        if spec.name in images:
            img = images[spec.name]
            if isinstance(img, str):
                img = parse_class(target, img)
        elif by_name and spec.name in target.names:
            img = target.gen(spec.name)
        else:
            raise RingError(f"no image for generator {spec.name!r}")
        if img.ring is not target:
            raise RingError(f"image of {spec.name!r} lives in the wrong ring")
        if not img.is_homogeneous(spec.degree):
            raise RingError(f"image of {spec.name!r} is not homogeneous of degree {spec.degree}")
        out.append(img)
    rmap = RingMap(source, target, tuple(out))
    for i, rule in enumerate(source.rules):
        lhs = out[i] ** rule.power
        rhs = target.zero()
        for m, c in rule.replacement:
            rhs = rhs + _apply_monomial(rmap, m) * c
        if lhs != rhs:
            raise RingError(
                f"ring map violates relation {rule.variable}^{rule.power}: {lhs} != {rhs}"
            )
    return rmap


def identity_map(ring: RingPresentation) -> RingMap:
    return RingMap(ring, ring, ring.gens())


def _apply_monomial(rmap: RingMap, m: Monomial) -> ChowClass:
    result = rmap.target.one()
    for img, e in zip(rmap.images, m):
        if e:
            result = result * img ** e
    return result


def pullback(rmap: RingMap, x):
    if isinstance(x, KClass):
        return KClass(pullback(rmap, x.ch))
    if x.ring is not rmap.source:
        raise RingError("pullback: class is not over the map's source ring")
    out = rmap.target.zero()
    for m, c in x.terms.items():
        out = out + _apply_monomial(rmap, m) * c
    return out


@dataclass(frozen=True)
class Pushforward:
    kind: str
    source: RingPresentation
    target: RingPresentation
    base: tuple[tuple[int, int], ...]  # (source index, target index) pairs
    fiber: tuple[int, ...]  # source indices of fiber variables
    fiber_top: tuple[int, ...]  # exponents of the kept fiber monomial

    @property
    def fiber_dim(self) -> int:
        return sum(e * self.source.degrees[i] for i, e in zip(self.fiber, self.fiber_top))

    def pullback_map(self) -> RingMap:
        images = [self.source.zero()] * len(self.target.variables)
        for s, t in self.base:
            images[t] = self.source.gen(self.source.names[s])
        return RingMap(self.target, self.source, tuple(images))

    def __call__(self, x):
        return push(self, x)


def _base_pairs(source, target, base_map, exclude) -> tuple[tuple[int, int], ...]:
    if base_map is None:
        base_map = {n: n for n in source.names if n not in exclude}
    pairs = []
    for s_name, t_name in base_map.items():
        pairs.append((source.index(s_name), target.index(t_name)))
    covered_s = {s for s, _ in pairs} | {source.index(n) for n in exclude}
    if covered_s != set(range(len(source.variables))):
        raise RingError("base map must cover every non-fiber source generator")
    if sorted(t for _, t in pairs) != list(range(len(target.variables))):
        raise RingError("base map must be a bijection onto the target generators")
    for s, t in pairs:
        if source.degrees[s] != target.degrees[t]:
            raise RingError("base map must preserve degrees")
    return tuple(sorted(pairs))


def _check_base_relations(pf: Pushforward) -> None:
    # The base generators of the source must satisfy exactly the target's relations.
    rename = dict(pf.base)
    inv = {t: s for s, t in pf.base}
    for s, t in pf.base:
        srule, trule = pf.source.rules[s], pf.target.rules[t]
        moved = []
        for m, c in trule.replacement:
            sm = [0] * len(pf.source.variables)
            for ti, e in enumerate(m):
                sm[inv[ti]] += e
            moved.append((tuple(sm), c))
        if srule.power != trule.power or sorted(moved) != sorted(srule.replacement):
            raise RingError(
                f"base relation mismatch for {pf.source.names[s]} -> {pf.target.names[rename[s]]}"
            )


def projective_bundle_pushforward(
    source: RingPresentation,
    target: RingPresentation,
    fiber_var: str,
    base_map: Mapping[str, str] | None = None,
) -> Pushforward:
    xi = source.index(fiber_var)
    rule = source.rules[xi]
    if rule.power != 2 or source.degrees[xi] != 1:
        raise RingError("projective-bundle fiber variable needs a degree-1 quadratic relation")
    pf = Pushforward(
        PROJECTIVE_BUNDLE, source, target,
        _base_pairs(source, target, base_map, [fiber_var]), (xi,), (1,),
    )
    _check_base_relations(pf)
    if source.dim != target.dim + 1:
        raise RingError("projective bundle must raise the dimension by one")
    return pf


def product_projection(
    source: RingPresentation,
    target: RingPresentation,
    contracted: Mapping[str, int],
    base_map: Mapping[str, str] | None = None,
) -> Pushforward:
    """Integrate out the factor whose generators are ``contracted``; values give its point monomial."""
    idx = tuple(source.index(n) for n in contracted)
    top = tuple(contracted.values())
    pf = Pushforward(
        PRODUCT_PROJECTION, source, target,
        _base_pairs(source, target, base_map, list(contracted)), idx, top,
    )
    _check_base_relations(pf)
    if source.dim != target.dim + pf.fiber_dim:
        raise RingError("contracted factor dimension does not match")
    return pf


def isomorphism(pullback_map: RingMap) -> Pushforward:
    """Pushforward along an isomorphism ``X -> Y`` given the pullback ``A(Y) -> A(X)``.

    The pullback must send generators bijectively to generators.
    """
    base = {}
    for t_idx, img in enumerate(pullback_map.images):
        terms = list(img.terms.items())
        if len(terms) != 1 or terms[0][1] != 1 or sum(terms[0][0]) != 1:
            raise RingError("isomorphism data must send generators to generators")
        s_idx = terms[0][0].index(1)
        if s_idx in base:
            raise RingError("isomorphism data is not injective on generators")
        base[s_idx] = t_idx
    src, tgt = pullback_map.target, pullback_map.source
    if len(base) != len(src.variables) or src.dim != tgt.dim:
        raise RingError("isomorphism data is not invertible")
    pf = Pushforward(ISOMORPHISM, src, tgt, tuple(sorted(base.items())), (), ())
    _check_base_relations(pf)
    return pf


def push(pf: Pushforward, x):
    if isinstance(x, KClass):
        return KClass(push(pf, x.ch))
    if x.ring is not pf.source:
        raise RingError("push: class is not over the pushforward's source ring")
    n_target = len(pf.target.variables)
    acc: dict[Monomial, Fraction] = {}
    for m, c in x.terms.items():
        if tuple(m[i] for i in pf.fiber) != pf.fiber_top:
            continue
        tm = [0] * n_target
        for s, t in pf.base:
            tm[t] += m[s]
        tm_t = tuple(tm)
        acc[tm_t] = acc.get(tm_t, 0) + c
    return ChowClass.from_terms(pf.target, acc)


def grr_index(pf: Pushforward, rel_tangent: KClass | None, sheaf: KClass) -> KClass:
    """ch of ind Rπ_*F, i.e. π_*(ch(F)·td(T_π))."""
    if sheaf.ring is not pf.source:
        raise RingError("grr_index: sheaf does not live on the source")
    if pf.fiber_dim > 1:
        raise RingError("grr_index supports fibers of dimension at most one")
    if rel_tangent is None:
        if pf.fiber_dim:
            raise RingError("grr_index: relative tangent required for curve fibrations")
        td = pf.source.one()
    else:
        if rel_tangent.ring is not pf.source:
            raise RingError("grr_index: relative tangent does not live on the source")
        if rel_tangent.rank != pf.fiber_dim:
            raise RingError(
                f"grr_index: relative tangent rank {rel_tangent.rank} != fiber dimension {pf.fiber_dim}"
            )
        td = todd(rel_tangent)
    return KClass(push(pf, sheaf.ch * td))
