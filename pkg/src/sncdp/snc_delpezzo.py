"""Local snc del Pezzo configurations built from P² and Hirzebruch surfaces.

Boundary curves are smooth rational curves: ``l`` and ``2l`` on P², and
``f``, ``e``, ``e+bf`` (b >= n) on F_n.  A configuration is *local* when
every gluing curve has self-intersections summing to -2 on its two sides and
``-(K_i + boundary_i)`` is ample on every component.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache

from .chow_ring import ChowClass, RingError
from .ktheory import KClass, dual, line_bundle
from .variety import Variety, hirzebruch, integrate, projective_space


class ConfigurationError(ValueError):
    pass


@lru_cache(maxsize=None)
def surface(kind: str) -> Variety:
    """``"P2"`` or ``"F<n>"``; cached so that equal kinds share one ring."""
    if kind == "P2":
        return projective_space(2, var="h")
    if kind.startswith("F") and kind[1:].isdigit():
        return hirzebruch(int(kind[1:]))
    raise ConfigurationError(f"unsupported surface kind {kind!r}")


def _coeffs(kind: str, cls: ChowClass) -> tuple:
    x = surface(kind)
    if cls.ring is not x.ring or not cls.is_homogeneous(1):
        raise ConfigurationError(f"{cls} is not a divisor class on {kind}")
    if kind == "P2":
        return (cls.coefficient((1,)),)
    # F_n ring variables are (f, e)
    return (cls.coefficient((0, 1)), cls.coefficient((1, 0)))


def is_ample(kind: str, divisor: ChowClass) -> bool:
    """P²: d > 0.  F_n: a·e + b·f is ample iff a > 0 and b > n·a."""
    c = _coeffs(kind, divisor)
    if kind == "P2":
        return c[0] > 0
    a, b = c
    n = int(kind[1:])
    return a > 0 and b > n * a


@dataclass(frozen=True)
class CurveClassOnComponent:
    kind: str
    cls: ChowClass = field(compare=False)
    key: tuple = field(default=())

    @property
    def self_intersection(self) -> int:
        return int(integrate(surface(self.kind), self.cls * self.cls))

    @property
    def genus(self) -> int:
        k = surface(self.kind).canonical_class
        return int(integrate(surface(self.kind), self.cls * self.cls + self.cls * k)) // 2 + 1

    def dot(self, other: CurveClassOnComponent) -> int:
        return int(integrate(surface(self.kind), self.cls * other.cls))

    @property
    def name(self) -> str:
        if self.kind == "P2":
            (d,) = self.key
            return "l" if d == 1 else f"{d}l"
        a, b = self.key
        parts = []
        if a:
            parts.append("e" if a == 1 else f"{a}e")
        if b:
            parts.append("f" if b == 1 else f"{b}f")
        return "+".join(parts) or "0"

    def __str__(self) -> str:
        return self.name


def curve(kind: str, text: str | ChowClass) -> CurveClassOnComponent:
    """Curve class from text such as ``"2*h"``, ``"e+f"``, or the names ``l``/``2l``."""
    x = surface(kind)
    if isinstance(text, str):
        t = text.strip()
        if kind == "P2" and t.endswith("l"):
            t = (t[:-1] or "1") + "*h"
        cls = x.ring(t)
    else:
        cls = text
    key = tuple(int(v) for v in _coeffs(kind, cls))
    return CurveClassOnComponent(kind, cls, key)


def is_smooth_rational_class(c: CurveClassOnComponent) -> bool:
    if c.kind == "P2":
        return c.key[0] in (1, 2)
    a, b = c.key
    n = int(c.kind[1:])
    irreducible = (a, b) in ((0, 1), (1, 0)) or (a == 1 and b >= n)
    return irreducible and c.genus == 0


def smooth_rational_curves(kind: str, coefficient_bound: int = 8) -> list[CurveClassOnComponent]:
    if coefficient_bound < 1:
        raise ValueError("coefficient bound must be >= 1")
    if kind == "P2":
        return [curve(kind, "l"), curve(kind, "2l")]
    n = int(kind[1:])
    keys = [(1, 0), (0, 1)] + [(1, b) for b in range(max(n, 1), coefficient_bound + 1)]
    x = surface(kind)
    out = []
    for a, b in keys:
        c = curve(kind, x.ring.gen("e") * a + x.ring.gen("f") * b)
        assert c.genus == 0
        out.append(c)
    return out


@dataclass(frozen=True)
class ComponentSurface:
    kind: str
    boundary_curves: tuple[CurveClassOnComponent, ...]

    @property
    def variety(self) -> Variety:
        return surface(self.kind)

    def __str__(self) -> str:
        return f"{self.kind}(" + ",".join(map(str, self.boundary_curves)) + ")"


@dataclass(frozen=True)
class Gluing:
    """Curve ``curve_i`` of component ``i`` is identified with curve ``curve_j`` of component ``j``."""

    i: int
    curve_i: int
    j: int
    curve_j: int


@dataclass(frozen=True)
class SncConfiguration:
    components: tuple[ComponentSurface, ...]
    gluings: tuple[Gluing, ...]

    @property
    def rank(self) -> int:
        return len(self.components)

    def glued_curves(self, g: Gluing) -> tuple[CurveClassOnComponent, CurveClassOnComponent]:
        return (
            self.components[g.i].boundary_curves[g.curve_i],
            self.components[g.j].boundary_curves[g.curve_j],
        )

    def describe(self) -> str:
        names = " u ".join(c.kind for c in self.components)
        glue = ", ".join(
            f"{a}~{b}" for a, b in (self.glued_curves(g) for g in self.gluings)
        )
        return f"{names}: {glue}"

    def to_dict(self) -> dict:
        return {
            "components": [c.kind for c in self.components],
            "boundary": [[str(b) for b in c.boundary_curves] for c in self.components],
            "gluings": [
                {"components": [g.i, g.j], "curves": [str(a), str(b)]}
                for g, (a, b) in ((g, self.glued_curves(g)) for g in self.gluings)
            ],
            "self_intersections": [
                [a.self_intersection, b.self_intersection]
                for a, b in (self.glued_curves(g) for g in self.gluings)
            ],
            "label": self.describe(),
        }


def rank2(kind1: str, curve1: str, kind2: str, curve2: str) -> SncConfiguration:
    return SncConfiguration(
        (
            ComponentSurface(kind1, (curve(kind1, curve1),)),
            ComponentSurface(kind2, (curve(kind2, curve2),)),
        ),
        (Gluing(0, 0, 1, 0),),
    )


@dataclass(frozen=True)
class Verdict:
    violations: tuple[str, ...]

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.ok


def _anti_log_canonical(comp: ComponentSurface) -> ChowClass:
    x = comp.variety
    total = -x.canonical_class
    for c in comp.boundary_curves:
        total = total - c.cls
    return total


def check_config(config: SncConfiguration) -> Verdict:
    problems = []
    if not config.components:
        raise ConfigurationError("configuration has no components")
    used: dict[int, set[int]] = {i: set() for i in range(config.rank)}
    for g in config.gluings:
        for idx, ci in ((g.i, g.curve_i), (g.j, g.curve_j)):
            if not (0 <= idx < config.rank) or not (0 <= ci < len(config.components[idx].boundary_curves)):
                raise ConfigurationError(f"gluing {g} refers to a missing curve")
        if g.i == g.j:
            raise ConfigurationError(f"gluing {g} glues a component to itself")
        used[g.i].add(g.curve_i)
        used[g.j].add(g.curve_j)
    for i, comp in enumerate(config.components):
        if not 1 <= len(comp.boundary_curves) <= 2:
            problems.append(f"component {i} ({comp.kind}) must carry one or two boundary curves")
        for c in comp.boundary_curves:
            if c.kind != comp.kind:
                raise ConfigurationError(f"curve {c} does not live on {comp.kind}")
            if not is_smooth_rational_class(c):
                problems.append(f"component {i}: {c} is not a smooth rational curve class")
        if used[i] != set(range(len(comp.boundary_curves))):
            problems.append(f"component {i}: every boundary curve must be glued exactly once")
        if len(comp.boundary_curves) == 2:
            a, b = comp.boundary_curves
            if a.dot(b) != 1:
                problems.append(f"component {i}: boundary curves {a}, {b} must meet in one point")
        anti = _anti_log_canonical(comp)
        if not is_ample(comp.kind, anti):
            problems.append(f"component {i}: -(K+C) = {anti} on {comp.kind} is not ample")
    for g in config.gluings:
        a, b = config.glued_curves(g)
        s = a.self_intersection + b.self_intersection
        if s != -2:
            problems.append(
                f"gluing {g.i}-{g.j}: self-intersections {a.self_intersection} + "
                f"{b.self_intersection} = {s} != -2"
            )
    # connectivity of the dual graph
    seen, stack = {0}, [0]
    while stack:
        k = stack.pop()
        for g in config.gluings:
            for u, v in ((g.i, g.j), (g.j, g.i)):
                if u == k and v not in seen:
                    seen.add(v)
                    stack.append(v)
    if len(seen) != config.rank:
        problems.append("components do not form a connected surface")
    return Verdict(tuple(problems))


def _kinds(n_max: int) -> list[str]:
    return ["P2"] + [f"F{n}" for n in range(n_max + 1)]


def _component_key(kind: str, keys: tuple[tuple, ...]) -> tuple:
    # F0 has the e <-> f symmetry; e-heavy representatives win.
    if kind == "F0":
        return (kind, max(keys, tuple(k[::-1] for k in keys)))
    return (kind, keys)


def _kind_order(kind: str) -> tuple:
    return (0, 0) if kind == "P2" else (1, int(kind[1:]))


@dataclass(frozen=True)
class Classification:
    rank: int
    configurations: tuple[SncConfiguration, ...]
    complete: bool
    n_max: int
    b_max: int
    note: str = ""


def _boundary_options(kind: str, b_max: int, count: int):
    """Boundary curve tuples (one or two curves) with -(K+C) ample."""
    curves = smooth_rational_curves(kind, b_max)
    if count == 1:
        choices = [(c,) for c in curves]
    else:
        choices = [(a, b) for a, b in itertools.product(curves, repeat=2) if a.dot(b) == 1]
    out = []
    for ch in choices:
        comp = ComponentSurface(kind, ch)
        if is_ample(kind, _anti_log_canonical(comp)):
            out.append(comp)
    return out


def classify(rank: int, n_max: int = 8, b_max: int = 8) -> Classification:
    """Enumerate local snc del Pezzo configurations of rank 2 or 3.

    The result is flagged ``complete`` when the bounds certify that nothing was
    missed: any admissible boundary curve has self-intersection at most the
    largest positive value seen (``s_max``), so a partner F_n curve needs
    ``n <= s_max + 2``; ampleness of ``-(K+C)`` is monotone in the fiber
    coefficient, so a failing value below ``b_max`` rules out all larger ones.
    """
    if rank not in (2, 3):
        raise ValueError("classification is implemented for rank 2 and rank 3")
    if n_max < 0 or b_max < 1:
        raise ValueError("bounds must satisfy n_max >= 0 and b_max >= 1")
    per_kind = {k: _boundary_options(k, b_max, 1 if rank == 2 else 2) for k in _kinds(n_max)}
    found: dict[tuple, SncConfiguration] = {}
    if rank == 2:
        comps = [c for k in _kinds(n_max) for c in per_kind[k]]
        for a, b in itertools.combinations_with_replacement(comps, 2):
            cfg = SncConfiguration((a, b), (Gluing(0, 0, 1, 0),))
            if check_config(cfg):
                key = tuple(sorted(
                    [_component_key(a.kind, (a.boundary_curves[0].key,)),
                     _component_key(b.kind, (b.boundary_curves[0].key,))],
                    key=lambda t: (_kind_order(t[0]), t[1]),
                ))
                found.setdefault(key, _ordered_rank2(a, b))
    else:
        comps = [c for k in _kinds(n_max) for c in per_kind[k]]
        s_in = [c.boundary_curves[0].self_intersection for c in comps]
        s_out = [c.boundary_curves[1].self_intersection for c in comps]
        # cyclic gluing: a.out ~ b.in, b.out ~ c.in, c.out ~ a.in
        follows = {
            i: [j for j in range(len(comps)) if s_out[i] + s_in[j] == -2] for i in range(len(comps))
        }
        triples = (
            (comps[i], comps[j], comps[k])
            for i in follows for j in follows[i] for k in follows[j] if i in follows[k]
        )
        for a, b, c in triples:
            cfg = SncConfiguration(
                (a, b, c),
                (Gluing(0, 1, 1, 0), Gluing(1, 1, 2, 0), Gluing(2, 1, 0, 0)),
            )
            if check_config(cfg):
                found.setdefault(_triangle_key(a, b, c), cfg)

    configs = tuple(found[k] for k in sorted(found, key=_sort_key))
    s_max = max(
        (bc.self_intersection for k in per_kind for comp in per_kind[k] for bc in comp.boundary_curves),
        default=0,
    )
    needed_n = max(s_max, 0) + 2
    b_cut = all(
        not is_ample(k, _anti_log_canonical(ComponentSurface(k, (curve(k, f"e+{b_max}*f"),))))
        for k in _kinds(n_max) if k != "P2"
    )
    complete = n_max >= needed_n and b_cut
    note = "" if complete else (
        f"bounds do not certify completeness (need n_max >= {needed_n} and an ampleness "
        f"cut-off below b_max)"
    )
    return Classification(rank, configs, complete, n_max, b_max, note)


def _ordered_rank2(a: ComponentSurface, b: ComponentSurface) -> SncConfiguration:
    if (_kind_order(b.kind), b.boundary_curves[0].key) < (_kind_order(a.kind), a.boundary_curves[0].key):
        a, b = b, a
    return SncConfiguration((a, b), (Gluing(0, 0, 1, 0),))


def _triangle_key(a, b, c) -> tuple:
    seq = [(x.kind, tuple(bc.key for bc in x.boundary_curves)) for x in (a, b, c)]
    candidates = []
    for s in (seq, [(k, keys[::-1]) for k, keys in reversed(seq)]):
        for r in range(3):
            rot = s[r:] + s[:r]
            candidates.append(tuple(_component_key(k, keys) for k, keys in rot))
    return min(candidates, key=lambda t: [(_kind_order(k), keys) for k, keys in t])


def _sort_key(key: tuple):
    return [(_kind_order(k), keys) for k, keys in key]


def e_character(component: ComponentSurface | Variety | str) -> KClass:
    """ch(Ω_S) + ch(ω_S^*) on one component."""
    if isinstance(component, ComponentSurface):
        x = component.variety
    elif isinstance(component, str):
        x = surface(component)
    else:
        x = component
    if x.dim != 2:
        raise RingError("e_character is defined on surfaces")
    return dual(x.tangent_ch) + line_bundle(-x.canonical_class)
