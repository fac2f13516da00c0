"""Sectioned text format for family setups, plus the matching serializer.

Every value that denotes a class is written in the ring grammar of
:mod:`sncdp.chow_ring`.  See ``data/p2f6.ini`` for a complete file.

Sections::

    [schema]        version = 1
    [setup]         name, curve_class, moduli (a variety section name)
    [surface]       components = P2, F6 ; curves = 2l, e
    [variety NAME]  variables, relations, dim, point, tangent_ch, label
    [component K]   total, surface, fiber, base, rel_tangent_c1 | rel_tangent,
                    surface_map, divisor, restriction
    [divisor]       variety, to_moduli
    [sheaves]       E1, E2, ...   (optional ch(E|S_j) overrides)
    [bps]           moduli, hilbert_chow_embedding, polarization (optional)
"""
from __future__ import annotations

import configparser
from dataclasses import dataclass, field

from .bps_local import SheafModuli
from .chow_ring import (
    ChowClass,
    ParseError,
    RingPresentation,
    format_class,
    format_monomial,
    make_ring,
    parse_class,
    parse_terms,
)
from .gw_local import CurveFamilyComponent, FamilySetup, GluedDivisor, validate_setup
from .ktheory import KClass, line_bundle
from .pushforward import (
    PROJECTIVE_BUNDLE,
    RingMap,
    isomorphism,
    projective_bundle_pushforward,
    ring_map,
)
from .snc_delpezzo import rank2
from .variety import Variety

SCHEMA_VERSION = 1
_PLAIN_SECTIONS = {"schema", "setup", "surface", "divisor", "sheaves", "bps"}


class FormatError(ValueError):
    """The input file does not follow the declarative format."""


@dataclass
class ParsedInput:
    setup: FamilySetup
    e_characters: list[KClass] | None = None
    bps: SheafModuli | None = None
    varieties: dict[str, Variety] = field(default_factory=dict)


def _get(cp: configparser.ConfigParser, section: str, key: str, default=None):
    if not cp.has_section(section):
        if default is not None:
            return default
        raise FormatError(f"missing section [{section}]")
    if not cp.has_option(section, key):
        if default is not None:
            return default
        raise FormatError(f"missing key {key!r} in [{section}]")
    return cp.get(section, key).strip()


def _split(text: str, sep: str = ",") -> list[str]:
    return [t.strip() for t in text.split(sep) if t.strip()]


def _parse_variety(cp, section: str, name: str) -> Variety:
    variables = []
    for item in _split(_get(cp, section, "variables", "")):
        var, _, deg = item.partition(":")
        variables.append((var.strip(), int(deg) if deg else 1))
    names = [v for v, _ in variables]
    rules = []
    for rel in _split(_get(cp, section, "relations", ""), ";"):
        lhs, eq, rhs = rel.partition("=")
        if not eq:
            raise FormatError(f"[{section}] relation {rel!r} needs '='")
        lhs_terms = parse_terms(names, lhs)
        if len(lhs_terms) != 1:
            raise FormatError(f"[{section}] relation {rel!r} must have a pure power on the left")
        (mono, coeff), = lhs_terms.items()
        nz = [i for i, e in enumerate(mono) if e]
        if coeff != 1 or len(nz) != 1:
            raise FormatError(f"[{section}] relation {rel!r} must have a pure power on the left")
        rules.append((names[nz[0]], mono[nz[0]], rhs.strip() or "0"))
    dim = int(_get(cp, section, "dim"))
    point = _get(cp, section, "point", "1")
    point_mono = (0,) * len(names) if point == "1" else point
    ring = make_ring(variables, rules, dim, point_mono, label=cp.get(section, "label", fallback=name).strip())
    tangent_text = cp.get(section, "tangent_ch", fallback=None)
    tangent = KClass(parse_class(ring, tangent_text)) if tangent_text else KClass(ring.scalar(dim))
    label = cp.get(section, "label", fallback=name).strip()
    return Variety(ring, tangent, label, kind="declared" if tangent_text else "declared-no-tangent")


def _parse_map(source: RingPresentation, target: RingPresentation, text: str, where: str) -> RingMap:
    images = {}
    for item in _split(text):
        src, arrow, img = item.partition("->")
        if not arrow:
            raise FormatError(f"{where}: map entry {item!r} needs '->'")
        images[src.strip()] = parse_class(target, img.strip())
    return ring_map(source, target, images, by_name=False)


def _parse_renaming(text: str, where: str) -> dict[str, str]:
    out = {}
    for item in _split(text):
        src, arrow, tgt = item.partition("->")
        if not arrow:
            raise FormatError(f"{where}: entry {item!r} needs '->'")
        out[src.strip()] = tgt.strip()
    return out


def loads(text: str) -> ParsedInput:
    # ';' separates relations, so only '#' starts an inline comment
    cp = configparser.ConfigParser(inline_comment_prefixes=("#",), interpolation=None)
    try:
        cp.read_string(text)
    except configparser.Error as exc:
        raise FormatError(str(exc)) from exc
    for sec in cp.sections():
        head = sec.split(None, 1)[0]
        if sec not in _PLAIN_SECTIONS and not (head in ("variety", "component") and " " in sec):
            raise FormatError(f"unknown section [{sec}]")
    version = int(_get(cp, "schema", "version", str(SCHEMA_VERSION)))
    if version != SCHEMA_VERSION:
        raise FormatError(f"unsupported schema version {version}")

    varieties = {}
    for sec in cp.sections():
        if sec.startswith("variety "):
            name = sec.split(None, 1)[1].strip()
            varieties[name] = _parse_variety(cp, sec, name)

    def variety(name: str) -> Variety:
        try:
            return varieties[name]
        except KeyError:
            raise FormatError(f"unknown variety {name!r}") from None

    kinds = _split(_get(cp, "surface", "components"))
    curves = _split(_get(cp, "surface", "curves"))
    if len(kinds) != 2 or len(curves) != 2:
        raise FormatError("[surface] must list two components and two gluing curves")
    config = rank2(kinds[0], curves[0], kinds[1], curves[1])

    moduli = variety(_get(cp, "setup", "moduli"))
    if moduli.kind == "declared-no-tangent":
        raise FormatError("the moduli variety must declare tangent_ch")
    m = moduli.ring

    comp_sections = sorted(
        (s for s in cp.sections() if s.startswith("component ")), key=lambda s: s.split()[1]
    )
    if not comp_sections:
        raise FormatError("no [component K] sections")
    d_var = variety(_get(cp, "divisor", "variety")) if cp.has_section("divisor") else None
    to_m = None
    if d_var is not None:
        to_m = isomorphism(_parse_map(m, d_var.ring, _get(cp, "divisor", "to_moduli"), "[divisor]"))

    comps, d_classes, restrictions = [], [], []
    for sec in comp_sections:
        total = variety(_get(cp, sec, "total"))
        s_idx = int(_get(cp, sec, "surface")) - 1
        if not 0 <= s_idx < config.rank:
            raise FormatError(f"[{sec}] surface index out of range")
        fiber = _get(cp, sec, "fiber")
        base = _parse_renaming(_get(cp, sec, "base"), f"[{sec}]")
        pf = projective_bundle_pushforward(total.ring, m, fiber, base)
        if cp.has_option(sec, "rel_tangent_c1"):
            rel = line_bundle(parse_class(total.ring, _get(cp, sec, "rel_tangent_c1")))
        elif cp.has_option(sec, "rel_tangent"):
            rel = KClass(parse_class(total.ring, _get(cp, sec, "rel_tangent")))
        else:
            # quotient convention: c1(T_π) = 2ξ - c1(E), with c1(E) read off the ξ relation
            rule = total.ring.rules[total.ring.index(fiber)]
            xi = total.ring.index(fiber)
            c1e = ChowClass.from_terms(
                total.ring,
                {tuple(e - (1 if i == xi else 0) for i, e in enumerate(mono)): c
                 for mono, c in rule.replacement if mono[xi] == 1},
            )
            rel = line_bundle(2 * total.ring.gen(fiber) - c1e)
        surf_ring = config.components[s_idx].variety.ring
        fmap = _parse_map(surf_ring, total.ring, _get(cp, sec, "surface_map"), f"[{sec}]")
        comps.append(CurveFamilyComponent(total, pf, rel, fmap, s_idx))
        if d_var is not None:
            d_classes.append(parse_class(total.ring, _get(cp, sec, "divisor")))
            restrictions.append(_parse_map(total.ring, d_var.ring, _get(cp, sec, "restriction"), f"[{sec}]"))

    divisor = None
    if d_var is not None:
        divisor = GluedDivisor(d_var, tuple(d_classes), tuple(restrictions), to_m)
    setup = FamilySetup(
        _get(cp, "setup", "name", "setup"),
        moduli,
        tuple(comps),
        divisor,
        config,
        _get(cp, "setup", "curve_class", "?"),
    )
    validate_setup(setup)

    e_chars = None
    if cp.has_section("sheaves"):
        e_chars = []
        for j, comp in enumerate(config.components):
            key = f"E{j + 1}"
            if not cp.has_option("sheaves", key):
                raise FormatError(f"[sheaves] must give {key} when the section is present")
            e_chars.append(KClass(parse_class(comp.variety.ring, cp.get("sheaves", key))))

    bps = None
    if cp.has_section("bps"):
        space = variety(_get(cp, "bps", "moduli"))
        if space.kind == "declared-no-tangent":
            raise FormatError("the BPS moduli variety must declare tangent_ch")
        flag = _get(cp, "bps", "hilbert_chow_embedding", "false").lower()
        if flag not in ("true", "false", "yes", "no", "1", "0"):
            raise FormatError(f"[bps] hilbert_chow_embedding must be a boolean, got {flag!r}")
        bps = SheafModuli(
            space,
            label=setup.curve_class_label,
            hilbert_chow_embedding=flag in ("true", "yes", "1"),
            polarization=_get(cp, "bps", "polarization", "any"),
        )
    return ParsedInput(setup, e_chars, bps, varieties)


def load(path) -> ParsedInput:
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read())


# -- serialization ----------------------------------------------------------


def _variety_lines(name: str, x: Variety) -> list[str]:
    r = x.ring
    lines = [f"[variety {name}]"]
    lines.append("variables = " + ", ".join(f"{v.name}:{v.degree}" for v in r.variables))
    rels = []
    for rule in r.rules:
        rhs = format_class(ChowClass(r, dict(rule.replacement))) if rule.replacement else "0"
        rels.append(f"{rule.variable}^{rule.power} = {rhs}")
    lines.append("relations = " + "; ".join(rels))
    lines.append(f"dim = {r.dim}")
    lines.append("point = " + (format_monomial(r.names, r.point_monomial) or "1"))
    lines.append(f"tangent_ch = {x.tangent_ch}")
    lines.append(f"label = {x.label}")
    return lines


def _map_text(rmap: RingMap) -> str:
    return ", ".join(f"{n} -> {img}" for n, img in zip(rmap.source.names, rmap.images))


def dumps(
    setup: FamilySetup,
    e_characters: list[KClass] | None = None,
    bps: SheafModuli | None = None,
) -> str:
    if setup.surface.rank != 2:
        raise FormatError("only rank-2 surfaces are serializable")
    names: dict[int, str] = {id(setup.moduli.ring): "M"}
    ordered: list[tuple[str, Variety]] = [("M", setup.moduli)]
    for i, comp in enumerate(setup.components):
        if id(comp.total.ring) not in names:
            n = f"C{len(ordered)}"
            names[id(comp.total.ring)] = n
            ordered.append((n, comp.total))
    if setup.divisor is not None and id(setup.divisor.variety.ring) not in names:
        names[id(setup.divisor.variety.ring)] = "D"
        ordered.append(("D", setup.divisor.variety))
    if bps is not None and id(bps.space.ring) not in names:
        names[id(bps.space.ring)] = "B"
        ordered.append(("B", bps.space))

    out = [f"# family setup {setup.name}", "", "[schema]", f"version = {SCHEMA_VERSION}", ""]
    out += ["[setup]", f"name = {setup.name}", f"curve_class = {setup.curve_class_label}", "moduli = M", ""]
    cfg = setup.surface
    (g,) = cfg.gluings
    a, b = cfg.glued_curves(g)
    out += [
        "[surface]",
        "components = " + ", ".join(c.kind for c in cfg.components),
        f"curves = {a}, {b}",
        "",
    ]
    for n, x in ordered:
        out += _variety_lines(n, x) + [""]
    for k, comp in enumerate(setup.components, start=1):
        pf = comp.pf
        if pf.kind != PROJECTIVE_BUNDLE:
            raise FormatError("components must be projective-bundle fibrations")
        (xi,) = pf.fiber
        base = ", ".join(f"{pf.source.names[s]} -> {pf.target.names[t]}" for s, t in pf.base)
        out += [
            f"[component {k}]",
            f"total = {names[id(comp.total.ring)]}",
            f"surface = {comp.surface_index + 1}",
            f"fiber = {pf.source.names[xi]}",
            f"base = {base}",
        ]
        c1 = comp.rel_tangent.part(1)
        if comp.rel_tangent.ch == line_bundle(c1).ch:
            out.append(f"rel_tangent_c1 = {c1}")
        else:
            out.append(f"rel_tangent = {comp.rel_tangent}")
        out.append(f"surface_map = {_map_text(comp.surface_pullback)}")
        if setup.divisor is not None:
            out.append(f"divisor = {setup.divisor.classes[k - 1]}")
            out.append(f"restriction = {_map_text(setup.divisor.restrictions[k - 1])}")
        out.append("")
    if setup.divisor is not None:
        d = setup.divisor
        to_m = ", ".join(
            f"{d.to_moduli.target.names[t]} -> {d.to_moduli.source.names[s]}" for s, t in d.to_moduli.base
        )
        out += ["[divisor]", f"variety = {names[id(d.variety.ring)]}", f"to_moduli = {to_m}", ""]
    if e_characters is not None:
        out.append("[sheaves]")
        out += [f"E{j + 1} = {e}" for j, e in enumerate(e_characters)]
        out.append("")
    if bps is not None:
        out += [
            "[bps]",
            f"moduli = {names[id(bps.space.ring)]}",
            f"hilbert_chow_embedding = {'true' if bps.hilbert_chow_embedding else 'false'}",
            f"polarization = {bps.polarization}",
            "",
        ]
    return "\n".join(out)


def dump_example(name: str) -> str:
    from .cli import builtin_bps
    from .gw_local import builtin_example

    setup = builtin_example(name)
    return dumps(setup, None, builtin_bps(name, setup))

