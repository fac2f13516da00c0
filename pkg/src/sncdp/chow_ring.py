"""Graded quotient rings over Q with single-leading-power rewrite rules.

A ring is presented by generators with degrees, one rule ``v^k -> replacement``
per generator, and a dimension above which every class vanishes.  Elements are
kept in normal form: each generator's exponent is below its rule's leading
power and no term has degree above the dimension.

The text grammar used by :func:`parse_class` (and by the CLI input files) is a
signed sum of terms, each term a ``*``-separated product of rational
coefficients (``3``, ``-1/2``) and variable powers (``h``, ``f1^2``)::

    3 + 10*f1 + 6*f2 - 6*f1*f2
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Union

Monomial = tuple[int, ...]
Scalar = Union[int, Fraction]


class RingError(ValueError):
    """Malformed presentation or mixing elements of different rings."""


class ParseError(ValueError):
    """Syntax error in a class expression; ``position`` is a 0-based offset."""

    def __init__(self, message: str, position: int, text: str = ""):
        self.position = position
        self.text = text
        super().__init__(f"{message} at position {position}")


@dataclass(frozen=True)
class VariableSpec:
    name: str
    degree: int = 1


@dataclass(frozen=True)
class RewriteRule:
    """``variable^power -> replacement``; replacement terms are raw exponent tuples."""

    variable: str
    power: int
    replacement: tuple[tuple[Monomial, Fraction], ...] = ()


@dataclass(frozen=True, eq=False)
class RingPresentation:
    variables: tuple[VariableSpec, ...]
    rules: tuple[RewriteRule, ...]
    dim: int
    point_monomial: Monomial
    label: str = ""
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(v.name for v in self.variables)

    @property
    def degrees(self) -> tuple[int, ...]:
        return tuple(v.degree for v in self.variables)

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise RingError(f"unknown variable {name!r} in ring {self.label or self.names}") from None

    def monomial_degree(self, m: Monomial) -> int:
        return sum(e * d for e, d in zip(m, self.degrees))

    def powers(self) -> tuple[int, ...]:
        return tuple(r.power for r in self.rules)

    def standard_monomials(self, degree: int | None = None) -> list[Monomial]:
        """Normal-form monomials (every exponent below its leading power) of degree <= dim."""
        out = []
        for m in itertools.product(*(range(k) for k in self.powers())):
            d = self.monomial_degree(m)
            if d <= self.dim and (degree is None or d == degree):
                out.append(m)
        out.sort(key=lambda m: _print_key(self, m))
        return out

    # Same-object identity is the right notion of equality for rings; structural
    # comparison is offered separately for serialization round-trips.
    def same_presentation(self, other: RingPresentation) -> bool:
        return (
            self.variables == other.variables
            and self.rules == other.rules
            and self.dim == other.dim
            and self.point_monomial == other.point_monomial
        )

    def zero(self) -> ChowClass:
        return ChowClass(self, {})

    def one(self) -> ChowClass:
        return self.scalar(1)

    def scalar(self, c: Scalar) -> ChowClass:
        return ChowClass.from_terms(self, {(0,) * len(self.variables): Fraction(c)})

    def gen(self, name: str) -> ChowClass:
        m = [0] * len(self.variables)
        m[self.index(name)] = 1
        return ChowClass.from_terms(self, {tuple(m): Fraction(1)})

    def gens(self) -> tuple[ChowClass, ...]:
        return tuple(self.gen(n) for n in self.names)

    def monomial(self, m: Monomial) -> ChowClass:
        return ChowClass.from_terms(self, {tuple(m): Fraction(1)})

    def point(self) -> ChowClass:
        return self.monomial(self.point_monomial)

    def __call__(self, text: str) -> ChowClass:
        return parse_class(self, text)

    def __repr__(self) -> str:
        return f"RingPresentation({self.label or ','.join(self.names)}, dim={self.dim})"


def _add_into(acc: dict[Monomial, Fraction], m: Monomial, c: Fraction) -> None:
    v = acc.get(m, 0) + c
    if v:
        acc[m] = v
    else:
        acc.pop(m, None)


def _mono_mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))


def _reduce_monomial(ring: RingPresentation, m: Monomial, last_first: bool = True) -> dict[Monomial, Fraction]:
    key = (m, last_first)
    cache = ring._cache
    if key in cache:
        return cache[key]
    if ring.monomial_degree(m) > ring.dim:
        result: dict[Monomial, Fraction] = {}
    else:
        order = range(len(m) - 1, -1, -1) if last_first else range(len(m))
        hit = next((i for i in order if m[i] >= ring.rules[i].power), None)
        if hit is None:
            result = {m: Fraction(1)}
        else:
            rest = list(m)
            rest[hit] -= ring.rules[hit].power
            rest_t = tuple(rest)
            result = {}
            for rm, rc in ring.rules[hit].replacement:
                for nm, nc in _reduce_monomial(ring, _mono_mul(rest_t, rm), last_first).items():
                    _add_into(result, nm, rc * nc)
    cache[key] = result
    return result


def _reduce_terms(ring: RingPresentation, terms: Mapping[Monomial, Fraction], last_first: bool = True) -> dict[Monomial, Fraction]:
    out: dict[Monomial, Fraction] = {}
    for m, c in terms.items():
        if not c:
            continue
        for nm, nc in _reduce_monomial(ring, m, last_first).items():
            _add_into(out, nm, c * nc)
    return out


def _print_key(ring: RingPresentation, m: Monomial):
    return (ring.monomial_degree(m), tuple(-e for e in m))


class ChowClass:
    """An element of a :class:`RingPresentation`, always in normal form."""

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: RingPresentation, terms: Mapping[Monomial, Fraction]):
        # Trusted constructor: ``terms`` must already be in normal form.
        self.ring = ring
        self.terms: dict[Monomial, Fraction] = dict(terms)
        self._hash = None

    @classmethod
    def from_terms(cls, ring: RingPresentation, terms: Mapping[Monomial, Scalar]) -> ChowClass:
        n = len(ring.variables)
        for m in terms:
            if len(m) != n or any(e < 0 for e in m):
                raise RingError(f"monomial {m} does not belong to ring {ring.names}")
        return cls(ring, _reduce_terms(ring, {m: Fraction(c) for m, c in terms.items()}))

    def _coerce(self, other) -> ChowClass:
        if isinstance(other, ChowClass):
            if other.ring is not self.ring:
                raise RingError(f"ring mismatch: {self.ring!r} vs {other.ring!r}")
            return other
        if isinstance(other, (int, Fraction)):
            return self.ring.scalar(other)
        return NotImplemented

    def __add__(self, other) -> ChowClass:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        acc = dict(self.terms)
        for m, c in other.terms.items():
            _add_into(acc, m, c)
        return ChowClass(self.ring, acc)

    __radd__ = __add__

    def __neg__(self) -> ChowClass:
        return ChowClass(self.ring, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other) -> ChowClass:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other) -> ChowClass:
        return (-self) + other

    def __mul__(self, other) -> ChowClass:
        if isinstance(other, (int, Fraction)):
            if not other:
                return self.ring.zero()
            return ChowClass(self.ring, {m: c * other for m, c in self.terms.items()})
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        ring = self.ring
        acc: dict[Monomial, Fraction] = {}
        for (ma, ca), (mb, cb) in itertools.product(self.terms.items(), other.terms.items()):
            m = _mono_mul(ma, mb)
            if ring.monomial_degree(m) > ring.dim:
                continue
            for nm, nc in _reduce_monomial(ring, m).items():
                _add_into(acc, nm, ca * cb * nc)
        return ChowClass(ring, acc)

    __rmul__ = __mul__

    def __truediv__(self, other: Scalar) -> ChowClass:
        return self * (1 / Fraction(other))

    def __pow__(self, n: int) -> ChowClass:
        if n < 0:
            raise ValueError("negative powers are not defined in a Chow ring")
        result = self.ring.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = self.ring.scalar(other)
        if not isinstance(other, ChowClass):
            return NotImplemented
        return self.ring is other.ring and self.terms == other.terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((id(self.ring), frozenset(self.terms.items())))
        return self._hash

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __iter__(self) -> Iterator[tuple[Monomial, Fraction]]:
        return iter(sorted(self.terms.items(), key=lambda t: _print_key(self.ring, t[0])))

    def degree_parts(self) -> dict[int, ChowClass]:
        parts: dict[int, dict[Monomial, Fraction]] = {}
        for m, c in self.terms.items():
            parts.setdefault(self.ring.monomial_degree(m), {})[m] = c
        return {d: ChowClass(self.ring, t) for d, t in sorted(parts.items())}

    def coefficient(self, m: Monomial) -> Fraction:
        return self.terms.get(tuple(m), Fraction(0))

    def constant(self) -> Fraction:
        return self.coefficient((0,) * len(self.ring.variables))

    def is_homogeneous(self, degree: int) -> bool:
        return all(self.ring.monomial_degree(m) == degree for m in self.terms)

    def __str__(self) -> str:
        return format_class(self)

    def __repr__(self) -> str:
        return f"ChowClass({format_class(self)!r})"


def make_ring(
    variables: Iterable[VariableSpec | tuple[str, int] | str],
    rules: Iterable[tuple[str, int, object]],
    dim: int,
    point_monomial: object,
    label: str = "",
) -> RingPresentation:
    """Build and self-check a presentation.

    ``rules`` holds one ``(variable, power, replacement)`` triple per variable;
    the replacement may be a class expression string, a mapping from exponent
    tuples to rationals, or ``0``.  ``point_monomial`` is an exponent tuple or
    a monomial string such as ``"e*f"``.
    """
    specs = []
    for v in variables:
        if isinstance(v, VariableSpec):
            specs.append(v)
        elif isinstance(v, str):
            specs.append(VariableSpec(v, 1))
        else:
            specs.append(VariableSpec(v[0], int(v[1])))
    names = [s.name for s in specs]
    if len(set(names)) != len(names):
        raise RingError(f"duplicate variable name in {names}")
    for s in specs:
        if not _IDENT.fullmatch(s.name):
            raise RingError(f"invalid variable name {s.name!r}")
        if s.degree < 1:
            raise RingError(f"variable {s.name!r} must have positive degree")
    if dim < 0:
        raise RingError("dimension must be nonnegative")

    by_var: dict[str, RewriteRule] = {}
    degrees = [s.degree for s in specs]
    for var, power, repl in rules:
        if var not in names:
            raise RingError(f"rule for unknown variable {var!r}")
        if var in by_var:
            raise RingError(f"more than one rule for {var!r}")
        if power < 1:
            raise RingError(f"rule for {var!r} needs a positive leading power")
        i = names.index(var)
        if isinstance(repl, str):
            raw = parse_terms(names, repl)
        elif isinstance(repl, Mapping):
            raw = {tuple(m): Fraction(c) for m, c in repl.items() if c}
        elif repl == 0 or repl is None:
            raw = {}
        else:
            raise RingError(f"unsupported replacement {repl!r}")
        lead_degree = power * degrees[i]
        for m, c in raw.items():
            d = sum(e * g for e, g in zip(m, degrees))
            if d != lead_degree:
                raise RingError(
                    f"rule {var}^{power}: replacement term of degree {d} != {lead_degree}"
                )
            if m[i] >= power or any(m[j] for j in range(i + 1, len(m))):
                raise RingError(
                    f"rule {var}^{power}: replacement may only use earlier variables "
                    f"and lower powers of {var}"
                )
        by_var[var] = RewriteRule(var, power, tuple(sorted(raw.items())))
    missing = [n for n in names if n not in by_var]
    if missing:
        raise RingError(f"no rule for variables {missing}")

    if isinstance(point_monomial, str):
        pm_terms = parse_terms(names, point_monomial)
        if len(pm_terms) != 1 or next(iter(pm_terms.values())) != 1:
            raise RingError(f"point monomial {point_monomial!r} must be a bare monomial")
        pm = next(iter(pm_terms))
    else:
        pm = tuple(point_monomial)
    ring = RingPresentation(
        variables=tuple(specs),
        rules=tuple(by_var[n] for n in names),
        dim=dim,
        point_monomial=pm,
        label=label,
    )
    _check_presentation(ring)
    return ring


def _check_presentation(ring: RingPresentation) -> None:
    pm = ring.point_monomial
    if len(pm) != len(ring.variables) or ring.monomial_degree(pm) != ring.dim:
        raise RingError(f"point monomial must have degree {ring.dim}")
    top = ring.standard_monomials(ring.dim)
    if top != [pm]:
        raise RingError(
            f"top degree must be spanned by the point monomial alone; normal forms found: {top}"
        )
    # Overlaps of two leading powers are the only critical pairs; reducing each
    # with both variable priorities must agree.
    powers = ring.powers()
    n = len(powers)
    witnesses = set()
    for i in range(n):
        for j in range(i, n):
            m = [0] * n
            m[i] += powers[i]
            m[j] += powers[j]
            witnesses.add(tuple(m))
            m[i] += 1
            witnesses.add(tuple(m))
    for w in sorted(witnesses):
        a = _reduce_terms(ring, {w: Fraction(1)}, last_first=True)
        b = _reduce_terms(ring, {w: Fraction(1)}, last_first=False)
        if a != b:
            raise RingError(f"rewrite system is not confluent on witness {w}")


def normal_form(ring: RingPresentation, cls: ChowClass | Mapping[Monomial, Scalar]) -> ChowClass:
    if isinstance(cls, ChowClass):
        if cls.ring is not ring:
            raise RingError("class belongs to a different ring")
        return ChowClass.from_terms(ring, cls.terms)
    return ChowClass.from_terms(ring, cls)


def add(a: ChowClass, b: ChowClass) -> ChowClass:
    return a + b


def mul(a: ChowClass, b: ChowClass) -> ChowClass:
    return a * b


def graded_part(cls: ChowClass, d: int) -> ChowClass:
    return ChowClass(cls.ring, {m: c for m, c in cls.terms.items() if cls.ring.monomial_degree(m) == d})


def truncate(cls: ChowClass, max_degree: int) -> ChowClass:
    return ChowClass(cls.ring, {m: c for m, c in cls.terms.items() if cls.ring.monomial_degree(m) <= max_degree})


def format_rational(c: Fraction) -> str:
    c = Fraction(c)
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def format_monomial(names: tuple[str, ...], m: Monomial) -> str:
    parts = []
    for name, e in zip(names, m):
        if e == 1:
            parts.append(name)
        elif e > 1:
            parts.append(f"{name}^{e}")
    return "*".join(parts)


def format_class(cls: ChowClass) -> str:
    """Compact text with no spaces, e.g. ``3+10*f1+6*f2-6*f1*f2``."""
    if not cls.terms:
        return "0"
    out = []
    for m, c in cls:
        mono = format_monomial(cls.ring.names, m)
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        if not mono:
            body = format_rational(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{format_rational(mag)}*{mono}"
        out.append((sign, body))
    first_sign, first_body = out[0]
    text = ("-" if first_sign == "-" else "") + first_body
    return text + "".join(s + b for s, b in out[1:])


_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_TOKEN = re.compile(r"\s*(?:(?P<num>\d+(?:/\d+)?)|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[-+*^]))")


def parse_terms(names: Iterable[str], text: str) -> dict[Monomial, Fraction]:
    """Parse ``text`` into raw (unreduced) terms over the variables ``names``."""
    names = tuple(names)
    tokens: list[tuple[str, str, int]] = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        mt = _TOKEN.match(text, pos)
        if not mt or mt.end() == pos:
            bad = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise ParseError(f"unexpected character {text[bad]!r}", bad, text)
        kind = mt.lastgroup
        start = mt.start(kind)
        tokens.append((kind, mt.group(kind), start))
        pos = mt.end()
    end = len(text)

    terms: dict[Monomial, Fraction] = {}
    i = 0

    def peek():
        return tokens[i] if i < len(tokens) else ("end", "", end)

    expect_term = True
    sign = 1
    while True:
        kind, val, p = peek()
        if kind == "end":
            if i == 0:
                return {}
            if expect_term:
                raise ParseError("expected a term", p, text)
            break
        if not expect_term:
            raise ParseError(f"expected '+' or '-' but found {val!r}", p, text)
        sign = 1
        while kind == "op" and val in "+-":
            if val == "-":
                sign = -sign
            i += 1
            kind, val, p = peek()
        coeff = Fraction(sign)
        expo = [0] * len(names)
        need_factor = True
        while True:
            kind, val, p = peek()
            if need_factor:
                if kind == "num":
                    num, _, den = val.partition("/")
                    if den and int(den) == 0:
                        raise ParseError("zero denominator", p + len(num) + 1, text)
                    coeff *= Fraction(int(num), int(den) if den else 1)
                    i += 1
                elif kind == "ident":
                    if val not in names:
                        raise ParseError(f"unknown variable {val!r}", p, text)
                    i += 1
                    power = 1
                    k2, v2, p2 = peek()
                    if k2 == "op" and v2 == "^":
                        i += 1
                        k3, v3, p3 = peek()
                        if k3 != "num" or "/" in v3:
                            raise ParseError("expected integer exponent", p3, text)
                        power = int(v3)
                        i += 1
                    expo[names.index(val)] += power
                else:
                    raise ParseError("expected a coefficient or variable", p, text)
                need_factor = False
            elif kind == "op" and val == "*":
                i += 1
                need_factor = True
            else:
                break
        _add_into(terms, tuple(expo), coeff)
        expect_term = False
        kind, val, p = peek()
        if kind == "op" and val in "+-":
            expect_term = True
        elif kind != "end":
            raise ParseError(f"unexpected token {val!r}", p, text)
    return terms


def parse_class(ring: RingPresentation, text: str) -> ChowClass:
    return ChowClass.from_terms(ring, parse_terms(ring.names, text))
