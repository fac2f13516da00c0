"""Local genus-0 Gromov–Witten invariants of rank-2 snc del Pezzo surfaces.

A family of stable maps is declared by its (smooth) moduli space ``M``, the
two components ``C_i -> M`` of the universal curve, and the divisor ``D``
along which they are glued, with ``D ≅ M``.  Index bundles are assembled from
the normalization sequence

    ind Rπ_*f^*V = Σ_i ind Rπ_i*(f_i^*V) - f_D^*V

and the invariant is

    N⁰ = ∫_M c(-ind Rπ_*f^*E^* + ind Rπ_*T_π^•) · c(T_M)

where ``ch(E|S_j) = ch(Ω_{S_j}) + ch(ω_{S_j}^*)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .chow_ring import ChowClass, RingError, graded_part
from .ktheory import KClass, ch_to_chern, dual, inverse_total, line_bundle, tensor
from .pushforward import (
    Pushforward,
    RingMap,
    grr_index,
    isomorphism,
    identity_map,
    projective_bundle_pushforward,
    pullback,
    push,
    ring_map,
)
from .snc_delpezzo import SncConfiguration, check_config, e_character, rank2, surface
from .variety import (
    BundleData,
    Variety,
    integrate,
    product,
    projective_bundle,
    projective_space,
    total_chern,
)


class SetupError(ValueError):
    """A declared family fails one of its consistency checks."""

    def __init__(self, invariant: str, detail: str):
        self.invariant = invariant
        super().__init__(f"{invariant}: {detail}")


@dataclass(frozen=True)
class CurveFamilyComponent:
    total: Variety
    pf: Pushforward
    rel_tangent: KClass
    surface_pullback: RingMap
    surface_index: int


@dataclass(frozen=True)
class GluedDivisor:
    variety: Variety
    classes: tuple[ChowClass, ...]  # [D] in each component
    restrictions: tuple[RingMap, ...]  # component ring -> D ring
    to_moduli: Pushforward  # isomorphism D -> M


@dataclass(frozen=True)
class FamilySetup:
    name: str
    moduli: Variety
    components: tuple[CurveFamilyComponent, ...]
    divisor: GluedDivisor | None
    surface: SncConfiguration
    curve_class_label: str
    moduli_smooth: bool = True


def twist(k: KClass, divisor: ChowClass) -> KClass:
    return tensor(k, line_bundle(divisor))


def validate_setup(setup: FamilySetup) -> None:
    """Raise :class:`SetupError` naming the first failed invariant."""
    m = setup.moduli.ring
    verdict = check_config(setup.surface)
    if not verdict.ok:
        raise SetupError("surface", "; ".join(verdict.violations))
    if not setup.moduli_smooth:
        raise SetupError("smooth-moduli", "only declared smooth moduli spaces are supported")
    if not setup.components:
        raise SetupError("components", "no universal-curve components")
    for i, comp in enumerate(setup.components):
        if comp.pf.source is not comp.total.ring or comp.pf.target is not m:
            raise SetupError("component-target", f"component {i} does not map to the moduli space")
        if comp.pf.fiber_dim != 1:
            raise SetupError("curve-fibers", f"component {i} has fibers of dimension {comp.pf.fiber_dim}")
        if comp.rel_tangent.ring is not comp.total.ring or comp.rel_tangent.rank != 1:
            raise SetupError("relative-tangent", f"component {i} needs a rank-1 relative tangent")
        surf = setup.surface.components[comp.surface_index].variety
        if comp.surface_pullback.source is not surf.ring or comp.surface_pullback.target is not comp.total.ring:
            raise SetupError("surface-map", f"component {i} surface map has the wrong rings")
    d = setup.divisor
    if len(setup.components) == 1:
        if d is not None:
            raise SetupError("divisor", "a single-component family has no gluing divisor")
        return
    if len(setup.components) != 2 or d is None:
        raise SetupError("divisor", "two components glued along one divisor are required")
    if d.to_moduli.target is not m or d.to_moduli.source is not d.variety.ring:
        raise SetupError("divisor-iso", "divisor must be identified with the moduli space")
    for i, comp in enumerate(setup.components):
        cls, r = d.classes[i], d.restrictions[i]
        if cls.ring is not comp.total.ring or not cls.is_homogeneous(1):
            raise SetupError("divisor-class", f"[D] in component {i} must be a degree-1 class")
        if r.source is not comp.total.ring or r.target is not d.variety.ring:
            raise SetupError("divisor-restriction", f"restriction map of component {i} has wrong rings")
        # D is a section: pushing [D]·x down to M must equal restricting x to D.
        for mono in comp.total.ring.standard_monomials():
            x = comp.total.ring.monomial(mono)
            lhs = push(comp.pf, cls * x)
            rhs = push(d.to_moduli, pullback(r, x))
            if lhs != rhs:
                raise SetupError(
                    "divisor-section",
                    f"component {i}: π_*([D]·{x}) = {lhs} but (x|_D) = {rhs}",
                )


def section_class(pf: Pushforward, restriction: RingMap, to_moduli: Pushforward) -> ChowClass:
    """Class of a section of a P¹-bundle determined by how the fiber variable restricts to it.

    Writing ``[D] = ξ + π^*a``, the section condition ``π_*([D]·ξ) = ξ|_D``
    gives ``a = ξ|_D - π_*(ξ²)``.
    """
    (xi_idx,) = pf.fiber
    xi = pf.source.gen(pf.source.names[xi_idx])
    a = push(to_moduli, pullback(restriction, xi)) - push(pf, xi * xi)
    return xi + pullback(pf.pullback_map(), a)


def _component_sheaf(setup: FamilySetup, i: int, v: KClass) -> KClass:
    return pullback(setup.components[i].surface_pullback, v)


def restrict_to_divisor(setup: FamilySetup, i: int, k: KClass) -> KClass:
    """Restrict a class on component ``i`` to D, then transport to M."""
    d = setup.divisor
    return push(d.to_moduli, pullback(d.restrictions[i], k))


def family_index_bundle(
    setup: FamilySetup, sheaves: Sequence[KClass], on_divisor: KClass | None = None
) -> KClass:
    """ind Rπ_*f^*V from per-surface-component characters ``sheaves``."""
    return family_index_breakdown(setup, sheaves, on_divisor)[0]


def family_index_breakdown(
    setup: FamilySetup,
    sheaves: Sequence[KClass],
    on_divisor: KClass | None = None,
) -> tuple[KClass, list[KClass], KClass | None]:
    """Total index together with the component rows and the divisor row.

    When
    ``on_divisor`` is omitted, f_D^*V is obtained by restricting from every
    component and the results are required to agree.
    """
    rows = []
    for i, comp in enumerate(setup.components):
        v = _component_sheaf(setup, i, sheaves[comp.surface_index])
        rows.append(grr_index(comp.pf, comp.rel_tangent, v))
    total = rows[0]
    for r in rows[1:]:
        total = total + r
    if setup.divisor is None:
        return total, rows, None
    if on_divisor is None:
        restricted = [
            restrict_to_divisor(setup, i, _component_sheaf(setup, i, sheaves[c.surface_index]))
            for i, c in enumerate(setup.components)
        ]
        if any(r.ch != restricted[0].ch for r in restricted[1:]):
            raise SetupError(
                "divisor-compatibility",
                f"sheaf restrictions to D disagree: {[str(r) for r in restricted]}",
            )
        on_divisor = restricted[0]
    elif on_divisor.ring is not setup.moduli.ring:
        raise RingError("divisor term must be given on the moduli ring")
    for i, c in enumerate(setup.components):
        if sheaves[c.surface_index].rank != on_divisor.rank:
            raise SetupError("divisor-rank", "sheaf rank on D does not match the components")
    return total - on_divisor, rows, on_divisor


def relative_tangent_index(setup: FamilySetup) -> KClass:
    return relative_tangent_breakdown(setup)[0]


def relative_tangent_breakdown(setup: FamilySetup) -> tuple[KClass, list[KClass], KClass | None]:
    """ind Rπ_*T_π^• from H⁰ = ⊕ T_{π_i}(-D) and H¹ = T_{π_1}|_D ⊗ T_{π_2}|_D."""
    comps = setup.components
    if setup.divisor is None:
        if len(comps) != 1:
            raise SetupError("divisor", "missing divisor data")
        c = comps[0]
        row = grr_index(c.pf, c.rel_tangent, c.rel_tangent)
        return row, [row], None
    d = setup.divisor
    rows = []
    for i, c in enumerate(comps):
        sheaf = twist(c.rel_tangent, -d.classes[i])
        rows.append(grr_index(c.pf, c.rel_tangent, sheaf))
    node = restrict_to_divisor(setup, 0, comps[0].rel_tangent)
    for i in range(1, len(comps)):
        node = tensor(node, restrict_to_divisor(setup, i, comps[i].rel_tangent))
    total = rows[0]
    for r in rows[1:]:
        total = total + r
    return total - node, rows, node


@dataclass(frozen=True)
class GWResult:
    value: Fraction
    e_characters: tuple[KClass, ...]
    e_index: KClass
    e_rows: tuple[KClass, ...]
    e_divisor: KClass | None
    tangent_index: KClass
    tangent_rows: tuple[KClass, ...]
    tangent_node: KClass | None
    virtual_class_ch: KClass
    virtual_chern: ChowClass
    moduli_chern: ChowClass

    def intermediates(self) -> dict[str, str]:
        out = {}
        for j, e in enumerate(self.e_characters):
            out[f"ch(E|S{j + 1})"] = str(e)
        for i, r in enumerate(self.e_rows):
            out[f"ch(ind Rpi_*f{i + 1}^*E^*)"] = str(r)
        if self.e_divisor is not None:
            out["ch(f_D^*E^*)"] = str(self.e_divisor)
        out["ch(ind Rpi_*f^*E^*)"] = str(self.e_index)
        for i, r in enumerate(self.tangent_rows):
            out[f"ch(ind Rpi_*T_pi{i + 1}(-D))"] = str(r)
        if self.tangent_node is not None:
            out["ch(T_pi1|_D (x) T_pi2|_D)"] = str(self.tangent_node)
        out["ch(Rpi_*T_pi)"] = str(self.tangent_index)
        out["ch(-ind Rpi_*f^*E^* + ind Rpi_*T_pi)"] = str(self.virtual_class_ch)
        out["c(-ind Rpi_*f^*E^* + ind Rpi_*T_pi)"] = str(self.virtual_chern)
        out["c(T_M)"] = str(self.moduli_chern)
        return out


def evaluate_genus0(setup: FamilySetup, e_characters: Sequence[KClass] | None = None) -> GWResult:
    validate_setup(setup)
    if e_characters is None:
        e_characters = [e_character(c) for c in setup.surface.components]
    e_characters = tuple(e_characters)
    for j, e in enumerate(e_characters):
        if e.rank != 3 or graded_part(e.ch, 1):
            raise SetupError("e-character", f"ch(E|S{j + 1}) = {e} must have rank 3 and c1 = 0")
    duals = [dual(e) for e in e_characters]
    a, a_rows, a_div = family_index_breakdown(setup, duals)
    b, b_rows, b_node = relative_tangent_breakdown(setup)
    k = -a + b
    if k.rank != 0:
        raise SetupError("virtual-rank", f"-ind f^*E^* + ind T_pi has rank {k.rank}, expected 0")
    c_virt = ch_to_chern(k)
    c_m = total_chern(setup.moduli)
    prod = c_virt * c_m
    value = integrate(setup.moduli, graded_part(prod, setup.moduli.dim))
    for part in (c_virt, c_m):
        if any(c.denominator != 1 for c in part.terms.values()):
            raise SetupError("integrality", f"non-integral Chern class {part}")
    return GWResult(
        value, e_characters, a, tuple(a_rows), a_div, b, tuple(b_rows), b_node, k, c_virt, c_m,
    )


def local_gw_genus0(setup: FamilySetup) -> Fraction:
    return evaluate_genus0(setup).value


def canonical_index(setup: FamilySetup) -> KClass:
    """ind Rπ_*ω_S from the normalization sequence 0 → ω_S → ⊕ ω_{S_i}(C) → ω_C → 0."""
    validate_setup(setup)
    d = setup.divisor
    rows = []
    for i, comp in enumerate(setup.components):
        surf = setup.surface.components[comp.surface_index]
        (glued,) = surf.boundary_curves
        twisted = surf.variety.canonical_class + glued.cls
        sheaf = line_bundle(pullback(comp.surface_pullback, twisted))
        rows.append(grr_index(comp.pf, comp.rel_tangent, sheaf))
    # ω_C = ω_{S_i}(C)|_C by adjunction; pulled back to D through component 0.
    surf0 = setup.surface.components[setup.components[0].surface_index]
    k0 = surf0.variety.canonical_class + surf0.boundary_curves[0].cls
    omega_c = line_bundle(
        pullback(d.restrictions[0], pullback(setup.components[0].surface_pullback, k0))
    )
    total = rows[0]
    for r in rows[1:]:
        total = total + r
    return total - push(d.to_moduli, omega_c)


def simplified_gw_genus0(setup: FamilySetup) -> Fraction:
    """deg(c(ind Rπ_*ω_S)^{-1} ∩ [M]), valid when the universal curve is the surface itself."""
    idx = canonical_index(setup)
    inv = inverse_total(ch_to_chern(idx))
    return integrate(setup.moduli, graded_part(inv, setup.moduli.dim))


def builtin_example(name: str) -> FamilySetup:
    if name == "f1f1":
        return _example_f1f1()
    if name == "p2f6":
        return _example_p2f6()
    raise KeyError(f"unknown example {name!r}; expected 'f1f1' or 'p2f6'")


def _example_f1f1() -> FamilySetup:
    config = rank2("F1", "e", "F1", "e")
    s = surface("F1")
    moduli = projective_space(1, var="f")
    # The universal curve is S itself: both components are F1 -> P¹ with f = id.
    pf = projective_bundle_pushforward(s.ring, moduli.ring, "e")
    rel = KClass(_f_rel_tangent(s))
    comps = tuple(
        CurveFamilyComponent(s, pf, rel, identity_map(s.ring), i) for i in range(2)
    )
    to_m = isomorphism(identity_map(moduli.ring))
    restr = ring_map(s.ring, moduli.ring, {"e": "-f", "f": "f"})
    cls = section_class(pf, restr, to_m)
    divisor = GluedDivisor(moduli, (cls, cls), (restr, restr), to_m)
    setup = FamilySetup("f1f1", moduli, comps, divisor, config, "f1+f2")
    validate_setup(setup)
    return setup


def _example_p2f6() -> FamilySetup:
    config = rank2("P2", "2l", "F6", "e")
    p2, f6 = surface("P2"), surface("F6")
    moduli = product(projective_space(1, var="f"), projective_space(1, var="f"))
    m = moduli.ring

    # C1 = P(α^*Q) over P¹×P¹, with α^*h = f1 + f2
    c1b = projective_bundle(moduli, BundleData(2, m("1 + f1 + f2 + 2*f1*f2")), var="h")
    c1 = c1b.variety
    f1_map = ring_map(p2.ring, c1.ring, {"h": "h"}, by_name=False)

    # C2 = F6 × P¹ with π2 = π_{F6} × 1
    c2 = product(f6, projective_space(1, var="g"))
    f2_map = c2.factor_maps[0]
    if f2_map.source is not f6.ring:
        raise RingError("F6 factor must share the surface ring")
    pf2 = projective_bundle_pushforward(c2.ring, m, "e", {"f": "f1", "g": "f2"})
    rel2 = KClass(pullback(f2_map, _f_rel_tangent(f6)))

    # D ≅ P¹×P¹: section of π1 through p ∈ L, and e × P¹ in C2
    d_var = moduli
    to_m = isomorphism(identity_map(m))
    r1 = ring_map(c1.ring, m, {"h": "2*f1", "f1": "f1", "f2": "f2"})
    r2 = ring_map(c2.ring, m, {"e": "-6*f1", "f": "f1", "g": "f2"})
    d1 = section_class(c1b.pushforward, r1, to_m)
    d2 = section_class(pf2, r2, to_m)
    divisor = GluedDivisor(d_var, (d1, d2), (r1, r2), to_m)

    comps = (
        CurveFamilyComponent(c1, c1b.pushforward, c1b.rel_tangent, f1_map, 0),
        CurveFamilyComponent(c2, pf2, rel2, f2_map, 1),
    )
    setup = FamilySetup("p2f6", moduli, comps, divisor, config, "l+f")
    validate_setup(setup)
    return setup


def _f_rel_tangent(fn: Variety) -> ChowClass:
    """ch(T_π) for F_n -> P¹: T_{F_n} = π^*T_{P¹} + T_π with T_{P¹} = O(2f)."""
    f = fn.ring.gen("f")
    return fn.tangent_ch.ch - (1 + 2 * f)
