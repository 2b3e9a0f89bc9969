"""Separable forms over F_q as multisets of transfer symbols.

A symbol ``(m, c)`` stands for tr_{F_{q^m}/F_q} <c>, the trace form of the
one-dimensional form <c> over F_{q^m}; it has dimension m, and m = 1 gives
back the diagonal form <c>.  Symbols are formal atoms keyed by the degree m
and the power class of c in F_{q^m}; whether a symbol is indecomposable is
not decided here.
"""

from __future__ import annotations

import json
import math
import re
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Mapping

from .diagform import DiagonalForm
from .errors import CtxMismatch, DomainError, ParseError
from .ffield import FieldCtx, all_h_trivial_in, extend, make_field, norm_trace


@dataclass(frozen=True, order=True)
class TransferSymbol:
    m: int
    cls: int

    @property
    def dim(self) -> int:
        return self.m


def _level(base: FieldCtx, m: int) -> FieldCtx:
    return base if m == 1 else extend(base, m).top


def symbol(base: FieldCtx, m: int, c: int) -> TransferSymbol:
    """The symbol tr_{F_{q^m}/F_q} <c> for a nonzero element c of F_{q^m}."""
    if m < 1:
        raise DomainError("symbol degree must be >= 1")
    return TransferSymbol(m, _level(base, m).class_of(c))


def witness(base: FieldCtx, s: TransferSymbol) -> int:
    """Least element of F_{q^m} in the symbol's class."""
    return _level(base, s.m).class_rep(s.cls)


class SeparableForm:
    """A finite multiset of transfer symbols over a fixed base field."""

    __slots__ = ("base", "symbols")

    def __init__(self, base: FieldCtx, symbols: Mapping[TransferSymbol, int] | Iterable[TransferSymbol] = ()):
        if isinstance(symbols, Mapping):
            counts = Counter({s: int(n) for s, n in symbols.items() if n})
        else:
            counts = Counter(symbols)
        for s, n in counts.items():
            if n < 0:
                raise DomainError("negative symbol multiplicity")
            if not 0 <= s.cls < _level(base, s.m).s:
                raise DomainError(f"class {s.cls} out of range for degree {s.m}")
        self.base = base
        self.symbols = counts

    def _key(self):
        return (self.base, tuple(sorted(self.symbols.items())))

    def __eq__(self, other) -> bool:
        return isinstance(other, SeparableForm) and self._key() == other._key()

    def __hash__(self) -> int:
        return hash(self._key())

    def __repr__(self) -> str:
        return f"SeparableForm(F_{self.base.q}: {format_sep(self) or '0'})"

    @property
    def dim(self) -> int:
        return sum(s.m * n for s, n in self.symbols.items())

    def items(self):
        return sorted(self.symbols.items())

    def __add__(self, other: "SeparableForm") -> "SeparableForm":
        _same(self, other)
        return SeparableForm(self.base, self.symbols + other.symbols)

    def restrict_degree(self, m: int) -> "SeparableForm":
        return SeparableForm(self.base, {s: n for s, n in self.symbols.items() if s.m == m})

    def degrees(self) -> list[int]:
        return sorted({s.m for s in self.symbols})


def _same(a: SeparableForm, b: SeparableForm) -> None:
    if a.base != b.base:
        raise CtxMismatch(f"F_{a.base.q} vs F_{b.base.q}")


def from_diagonal(phi: DiagonalForm) -> SeparableForm:
    if not phi.space.field_mode:
        raise DomainError("separable forms need a field-mode diagonal form")
    return SeparableForm(phi.space.field, {TransferSymbol(1, c): n for c, n in enumerate(phi.mult) if n})


def to_diagonal_mult(g: SeparableForm) -> list[int]:
    """Multiplicity vector of the degree-1 part."""
    out = [0] * g.base.s
    for s, n in g.symbols.items():
        if s.m == 1:
            out[s.cls] += n
    return out


# ---------------------------------------------------------------------------
# operations


def _class_embed(base: FieldCtx, m: int, h: int) -> int:
    return h % base.s if m == 1 else extend(base, m).class_embed(h)


def scale_sep(h: int, g: SeparableForm) -> SeparableForm:
    """h * tr<c> = tr<hc> for a base class h."""
    out = Counter()
    for s, n in g.symbols.items():
        sm = _level(g.base, s.m).s
        out[TransferSymbol(s.m, (s.cls + _class_embed(g.base, s.m, h)) % sm)] += n
    return SeparableForm(g.base, out)


def symbol_iso(a: TransferSymbol, b: TransferSymbol) -> bool:
    return a.m == b.m and a.cls == b.cls


def _conjugate_class(base: FieldCtx, s: TransferSymbol, L: int, i: int) -> int:
    """Class in F_{q^L} of sigma^i(c), c a representative of s embedded in F_{q^L}."""
    c = witness(base, s)
    up = extend(_level(base, s.m), L // s.m) if L != s.m else None
    y = up.embed(c) if up else c
    top = _level(base, L)
    return top.class_of(top.power(y, base.q**i))


def base_change(g: SeparableForm, n: int) -> SeparableForm:
    """g over F_{q^n}: (m, c) splits into gcd(m, n) symbols of degree m/gcd(m, n)."""
    new_base = _level(g.base, n)
    out = Counter()
    for s, cnt in g.symbols.items():
        k = math.gcd(s.m, n)
        L = s.m * n // k
        for i in range(k):
            out[TransferSymbol(s.m // k, _conjugate_class(g.base, s, L, i))] += cnt
    return SeparableForm(new_base, out)


def transfer(g: "SeparableForm | DiagonalForm", base: FieldCtx) -> SeparableForm:
    """tr_{l/k}: a form over l = F_{q^m} viewed over k = F_q."""
    if isinstance(g, DiagonalForm):
        g = from_diagonal(g)
    l = g.base
    if l.p != base.p or l.d != base.d or l.t % base.t:
        raise CtxMismatch(f"F_{l.q} is not an extension of F_{base.q}")
    m = l.t // base.t
    return SeparableForm(base, {TransferSymbol(m * s.m, s.cls): n for s, n in g.symbols.items()})


def tensor_mixed(theta: DiagonalForm, g: SeparableForm) -> SeparableForm:
    """theta (x) g for diagonal theta over the base: <b> (x) tr<c> = tr<bc>."""
    if not theta.space.field_mode or theta.space.field != g.base:
        raise CtxMismatch("diagonal form and separable form live over different fields")
    out = Counter()
    for b, nb in enumerate(theta.mult):
        if nb:
            for s, n in scale_sep(b, g).symbols.items():
                out[s] += nb * n
    return SeparableForm(g.base, out)


def tensor_symbols(base: FieldCtx, a: TransferSymbol, b: TransferSymbol) -> list[TransferSymbol]:
    """tr<c> (x) tr<c'> = sum over i < gcd of tr_{F_{q^lcm}} <c * sigma^i(c')>."""
    k = math.gcd(a.m, b.m)
    L = a.m * b.m // k
    ca = _conjugate_class(base, a, L, 0)
    sL = _level(base, L).s
    return [TransferSymbol(L, (ca + _conjugate_class(base, b, L, i)) % sL) for i in range(k)]


def tensor_sep(g: SeparableForm, h: SeparableForm) -> SeparableForm:
    _same(g, h)
    out = Counter()
    for a, na in g.symbols.items():
        for b, nb in h.symbols.items():
            for s in tensor_symbols(g.base, a, b):
                out[s] += na * nb
    return SeparableForm(g.base, out)


def galois_canonical(g: SeparableForm) -> SeparableForm:
    """Replace each class by the least class in its Frobenius orbit.

    tr<c> and tr<c^q> are isometric, so this is a coarser, still sound,
    symbol identity; handy when comparing tensor products computed in
    different orders.
    """
    out = Counter()
    for s, n in g.symbols.items():
        sm = _level(g.base, s.m).s
        orbit = {(s.cls * pow(g.base.q, i, sm)) % sm for i in range(s.m)} if sm > 1 else {0}
        out[TransferSymbol(s.m, min(orbit))] += n
    return SeparableForm(g.base, out)


@dataclass(frozen=True)
class SepAnalysis:
    is_H_form: bool
    reduced: SeparableForm
    h_part: SeparableForm


def image_subgroup(base: FieldCtx, m: int, H: Iterable[int]) -> frozenset[int]:
    return frozenset(_class_embed(base, m, h) for h in H)


def h_analyze_sep(g: SeparableForm, H: Iterable[int] | None = None) -> SepAnalysis:
    """Split off the largest separable H-form.

    In each degree m, H acts on classes of F_{q^m} by translation through the
    class embedding; a symbol multiset is H-stable iff it is constant on the
    orbits, so each orbit contributes (min multiplicity) full orbits.  When
    H dies in F_{q^m} every orbit is a point and each symbol is an H-form.
    """
    H = frozenset(range(g.base.s)) if H is None else frozenset(H)
    red, part = Counter(), Counter()
    for m in g.degrees():
        sm = _level(g.base, m).s
        Hm = image_subgroup(g.base, m, H)
        if m > 1:
            assert all_h_trivial_in(H, extend(g.base, m)) == (Hm == {0})
        mult = [0] * sm
        for s, n in g.symbols.items():
            if s.m == m:
                mult[s.cls] += n
        seen = set()
        for c in range(sm):
            if c in seen:
                continue
            orbit = sorted({(c + h) % sm for h in Hm})
            seen.update(orbit)
            lo = min(mult[x] for x in orbit)
            for x in orbit:
                if lo:
                    part[TransferSymbol(m, x)] += lo
                if mult[x] - lo:
                    red[TransferSymbol(m, x)] += mult[x] - lo
    return SepAnalysis(not red, SeparableForm(g.base, red), SeparableForm(g.base, part))


def symbol_permanent(base: FieldCtx, s: TransferSymbol) -> int:
    """Class in k^x/k^{x d} of N_{l/k}(c)."""
    c = witness(base, s)
    if s.m == 1:
        return base.class_of(c)
    n, _ = norm_trace(extend(base, s.m), c)
    return base.class_of(n)


def sep_invariants(g: SeparableForm) -> tuple[int, int]:
    """(dim, permanent) with the permanent additive over orthogonal sums."""
    perm = 0
    for s, n in g.symbols.items():
        perm = (perm + n * symbol_permanent(g.base, s)) % g.base.s
    return g.dim, perm


# ---------------------------------------------------------------------------
# literals and JSON

_SYM_RE = re.compile(r"^tr\[(\d+)\]\{(\d+)\}$")


def parse_sep(base: FieldCtx, text: str) -> SeparableForm:
    """``"tr[2]{10},3"``: tr_{F_{q^2}/F_q}<10> + <3>; c is the int encoding in F_{q^m}."""
    out = Counter()
    for item in filter(None, (x.strip() for x in text.split(","))):
        m = _SYM_RE.match(item)
        try:
            if m:
                deg, c = int(m.group(1)), int(m.group(2))
            else:
                deg, c = 1, int(item)
        except ValueError:
            raise ParseError(f"bad symbol literal {item!r}") from None
        if deg < 1 or not 0 < c < _level(base, deg).q:
            raise ParseError(f"bad symbol literal {item!r}")
        out[symbol(base, deg, c)] += 1
    return SeparableForm(base, out)


def format_sep(g: SeparableForm) -> str:
    parts = []
    for s, n in g.items():
        lit = f"tr[{s.m}]{{{witness(g.base, s)}}}"
        parts.extend([lit] * n)
    return ",".join(parts)


def sep_to_json(g: SeparableForm) -> dict:
    return {
        "base": g.base.descriptor(),
        "symbols": [
            {"m": s.m, "c": witness(g.base, s), "class": s.cls, "count": n} for s, n in g.items()
        ],
    }


def sep_from_json(doc: dict | str) -> SeparableForm:
    if isinstance(doc, str):
        doc = json.loads(doc)
    b = doc["base"]
    base = make_field(b["p"], b["t"], b["d"])
    out = Counter()
    for item in doc["symbols"]:
        s = symbol(base, item["m"], item["c"])
        if s.cls != item["class"]:
            raise ParseError("symbol class does not match its witness")
        out[s] += item["count"]
    return SeparableForm(base, out)
