"""Diagonal forms of degree d >= 3 as multisets of power classes.

For d >= 3 two diagonal forms are isometric exactly when their coefficient
classes agree as multisets, so a form is stored as its multiplicity vector
over G.  On top of that sit the H-form calculus (H-decomposition, reduced
representatives) and the Witt ring W^D_d(k, H).
"""

from __future__ import annotations

import json
import re
from typing import Iterable, Sequence

from .errors import (
    CtxMismatch,
    DegreeTooSmall,
    DomainError,
    KindMismatch,
    NotInvariant,
    ParseError,
    ZeroCoefficient,
)
from .ffield import PowerClassGroup
from .groupring import GroupRingElement, canonical_rep, permanent_hom


class DiagonalForm:
    """<a_1, ..., a_n> up to isometry: ``mult[c]`` copies of class c.

    In field mode an explicit coefficient list may ride along; it is only
    used for evaluation and printing, never for comparisons.
    """

    __slots__ = ("space", "mult", "coeffs")

    def __init__(self, space: PowerClassGroup, mult: Sequence[int], coeffs: Sequence[int] | None = None):
        if space.d < 3:
            raise DegreeTooSmall(
                f"degree {space.d}: diagonal forms are classified by class multisets only for d >= 3"
            )
        mult = tuple(int(m) for m in mult)
        if len(mult) != space.order or any(m < 0 for m in mult):
            raise DomainError(f"bad multiplicity vector {mult} for {space}")
        if coeffs is not None:
            coeffs = tuple(coeffs)
            assert len(coeffs) == sum(mult)
        self.space = space
        self.mult = mult
        self.coeffs = coeffs

    def __eq__(self, other) -> bool:
        return isinstance(other, DiagonalForm) and self.space == other.space and self.mult == other.mult

    def __hash__(self) -> int:
        return hash((self.space, self.mult))

    def __repr__(self) -> str:
        return f"DiagonalForm({format_form(self)})"

    @property
    def dim(self) -> int:
        return sum(self.mult)

    def classes(self) -> list[int]:
        """Class list in ascending order, with repetition."""
        return [c for c, m in enumerate(self.mult) for _ in range(m)]

    def coefficients(self) -> list[int]:
        """Field-mode coefficient list; canonical class representatives if none were given."""
        if self.coeffs is not None:
            return list(self.coeffs)
        return [self.space.class_rep(c) for c in self.classes()]

    def is_zero(self) -> bool:
        return not any(self.mult)


# ---------------------------------------------------------------------------
# construction


def make(space: PowerClassGroup, coeffs: Iterable[int]) -> DiagonalForm:
    """<a_1, ..., a_n> from nonzero field elements."""
    coeffs = list(coeffs)
    mult = [0] * space.order
    for a in coeffs:
        if a == 0:
            raise ZeroCoefficient("diagonal coefficients must be nonzero")
        mult[space.class_of(a)] += 1
    return DiagonalForm(space, mult, coeffs)


def from_classes(space: PowerClassGroup, classes: Iterable[int]) -> DiagonalForm:
    mult = [0] * space.order
    for c in classes:
        if not 0 <= c < space.order:
            raise DomainError(f"class {c} out of range for {space.group}")
        mult[c] += 1
    return DiagonalForm(space, mult)


def from_mult(space: PowerClassGroup, mult: Sequence[int]) -> DiagonalForm:
    return DiagonalForm(space, mult)


def zero(space: PowerClassGroup) -> DiagonalForm:
    return DiagonalForm(space, [0] * space.order, ())


def coset_form(space: PowerClassGroup, shift: int = 0) -> DiagonalForm:
    """<a_1, ..., a_s> (x) <b>: one copy of every class in the coset shift + H."""
    return DiagonalForm(space, GroupRingElement.norm(space.group, space.H, shift).coeffs)


# ---------------------------------------------------------------------------
# semiring operations


def _same(a: DiagonalForm, b: DiagonalForm) -> None:
    if a.space != b.space:
        raise CtxMismatch(f"{a.space} vs {b.space}")


def osum(a: DiagonalForm, b: DiagonalForm) -> DiagonalForm:
    _same(a, b)
    coeffs = None
    if a.coeffs is not None and b.coeffs is not None:
        coeffs = a.coeffs + b.coeffs
    return DiagonalForm(a.space, [x + y for x, y in zip(a.mult, b.mult)], coeffs)


def tensor(a: DiagonalForm, b: DiagonalForm) -> DiagonalForm:
    _same(a, b)
    G = a.space.group
    prod = GroupRingElement(G, a.mult) * GroupRingElement(G, b.mult)
    coeffs = None
    if a.coeffs is not None and b.coeffs is not None and a.space.field_mode:
        F = a.space.field
        coeffs = tuple(F.mul(x, y) for x in a.coeffs for y in b.coeffs)
    return DiagonalForm(a.space, prod.coeffs, coeffs)


def scale(h: int, a: DiagonalForm) -> DiagonalForm:
    """h * a for a class h: translates the multiset by h."""
    G = a.space.group
    mult = [0] * G.order
    for c, m in enumerate(a.mult):
        if m:
            mult[G.add(c, h)] += m
    coeffs = None
    if a.coeffs is not None and a.space.field_mode:
        r = a.space.class_rep(h)
        coeffs = tuple(a.space.field.mul(r, x) for x in a.coeffs)
    return DiagonalForm(a.space, mult, coeffs)


def multiple(n: int, a: DiagonalForm) -> DiagonalForm:
    return DiagonalForm(a.space, [n * m for m in a.mult])


def is_isomorphic(a: DiagonalForm, b: DiagonalForm) -> bool:
    _same(a, b)
    return a.mult == b.mult


def similarity_group(a: DiagonalForm) -> frozenset[int]:
    """G(a): classes h with h*a isometric to a."""
    G = a.space.group
    return frozenset(
        h for h in G.elements()
        if all(a.mult[G.add(c, h)] == m for c, m in enumerate(a.mult))
    )


# ---------------------------------------------------------------------------
# H-forms


def is_H_form(a: DiagonalForm) -> bool:
    return all(len({a.mult[g] for g in C}) == 1 for C in a.space.cosets())


def _split_coeffs(a: DiagonalForm, keep: Sequence[int]):
    # keep the first keep[c] coefficients of each class, in input order
    if a.coeffs is None:
        return None, None
    left = list(keep)
    kept, dropped = [], []
    for x in a.coeffs:
        c = a.space.class_of(x)
        if left[c]:
            kept.append(x)
            left[c] -= 1
        else:
            dropped.append(x)
    return tuple(kept), tuple(dropped)


def h_decompose(a: DiagonalForm) -> tuple[DiagonalForm, DiagonalForm]:
    """(a_H, t_H(a)) with a = a_H + t_H(a), t_H an H-form and a_H H-reduced.

    t_H holds min-over-coset copies of every H-coset; what is left has a
    zero somewhere in each coset.
    """
    t = [0] * a.space.order
    for C in a.space.cosets():
        m = min(a.mult[g] for g in C)
        for g in C:
            t[g] = m
    red = [x - y for x, y in zip(a.mult, t)]
    kept, dropped = _split_coeffs(a, red)
    return DiagonalForm(a.space, red, kept), DiagonalForm(a.space, t, dropped)


def h_reduce(a: DiagonalForm) -> DiagonalForm:
    return h_decompose(a)[0]


def is_H_reduced(a: DiagonalForm) -> bool:
    return all(min(a.mult[g] for g in C) == 0 for C in a.space.cosets())


def h_equivalent(a: DiagonalForm, b: DiagonalForm) -> bool:
    _same(a, b)
    return h_reduce(a).mult == h_reduce(b).mult


def witt_neg(a: DiagonalForm) -> DiagonalForm:
    """The smallest b with a + b an H-form: per coset, fill every class up to the coset maximum."""
    out = [0] * a.space.order
    for C in a.space.cosets():
        top = max(a.mult[g] for g in C)
        for g in C:
            out[g] = top - a.mult[g]
    b = DiagonalForm(a.space, out)
    assert is_H_form(osum(a, b))
    return b


def conjugate_inverse(a: DiagonalForm) -> DiagonalForm:
    """Sum of the conjugates h*a over the nontrivial cosets of K = G(a) n H in H."""
    G = a.space.group
    K = similarity_group(a) & a.space.H
    seen = set(K)
    out = zero(a.space)
    for h in sorted(a.space.H):
        if h in seen:
            continue
        seen.update(G.add(h, k) for k in K)
        out = osum(out, scale(h, a))
    return DiagonalForm(a.space, out.mult)


# ---------------------------------------------------------------------------
# invariants


def dim_index(a: "DiagonalForm | WittClass") -> int:
    """Dimension modulo |H|."""
    if isinstance(a, WittClass):
        a = a.rep
    return a.dim % len(a.space.H)


def permanent(a: "DiagonalForm | WittClass") -> int:
    """Class of the coefficient product, i.e. sum of mult(g) * g in G.

    On Witt classes this is only defined when the permanent kills every
    H-form; otherwise NotInvariant is raised.
    """
    if isinstance(a, WittClass):
        _, ok = permanent_hom(GroupRingElement(a.space.group, a.rep.mult), a.space.H)
        if not ok:
            raise NotInvariant(f"the permanent does not descend to W(G, H) for |H| = {len(a.space.H)}")
        a = a.rep
    return permanent_hom(GroupRingElement(a.space.group, a.mult), frozenset([0]))[0]


# ---------------------------------------------------------------------------
# Witt classes


class WittClass:
    """An element of W_d(k, H) (kind "H") or W_d(k, I) (kind "I"), held by its reduced representative."""

    __slots__ = ("space", "kind", "rep")

    def __init__(self, rep: DiagonalForm, kind: str = "H"):
        if kind not in ("H", "I"):
            raise DomainError(f"unknown equivalence kind {kind!r}")
        if kind == "H":
            rep = h_reduce(rep)
        else:
            from .pointwise import i_canonical

            rep = i_canonical(rep)
        self.space = rep.space
        self.kind = kind
        self.rep = rep

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, WittClass)
            and self.kind == other.kind
            and self.space == other.space
            and self.rep.mult == other.rep.mult
        )

    def __hash__(self) -> int:
        return hash((self.kind, self.space, self.rep.mult))

    def __repr__(self) -> str:
        return f"WittClass[{self.kind}]({format_form(self.rep)})"

    def _other(self, other: "WittClass") -> None:
        if not isinstance(other, WittClass) or other.kind != self.kind:
            raise KindMismatch("Witt classes of different kinds")
        _same(self.rep, other.rep)

    def __add__(self, other: "WittClass") -> "WittClass":
        self._other(other)
        return WittClass(osum(self.rep, other.rep), self.kind)

    def __mul__(self, other: "WittClass") -> "WittClass":
        self._other(other)
        return WittClass(tensor(self.rep, other.rep), self.kind)

    def __neg__(self) -> "WittClass":
        if self.kind == "H":
            return WittClass(witt_neg(self.rep), "H")
        from .pointwise import witt_neg_I

        return WittClass(witt_neg_I(self.rep), "I")

    def __sub__(self, other: "WittClass") -> "WittClass":
        return self + (-other)


def witt_class(a: DiagonalForm, kind: str = "H") -> WittClass:
    return WittClass(a, kind)


def to_groupring(w: WittClass) -> GroupRingElement:
    """Image of an H-class in Z[G]/(N_H), as the canonical lattice representative."""
    if w.kind != "H":
        raise KindMismatch("only H-equivalence classes map to Z[G]/(N_H)")
    return canonical_rep(GroupRingElement(w.space.group, w.rep.mult), w.space.H)


def from_groupring(x: GroupRingElement, space: PowerClassGroup) -> WittClass:
    """Inverse of :func:`to_groupring`: shift each coset so its minimum is 0."""
    if x.group != space.group:
        raise CtxMismatch(f"{x.group} vs {space.group}")
    c = list(x.coeffs)
    for C in space.cosets():
        m = min(c[g] for g in C)
        for g in C:
            c[g] -= m
    return WittClass(DiagonalForm(space, c), "H")


# ---------------------------------------------------------------------------
# literals and JSON

_MULT_RE = re.compile(r"^\{(.*)\}$")


def parse_form(space: PowerClassGroup, text: str) -> DiagonalForm:
    """Parse a form literal.

    Field mode: ``"1,2,4"`` (coefficients; polynomial-basis ints when t > 1).
    Either mode: ``"@0,1,2"`` (class list) or ``"@{0:2,1:1}"`` (multiplicities).
    The empty string and ``"@{}"`` are the zero form.
    """
    s = text.strip()
    try:
        if s.startswith("@"):
            body = s[1:].strip()
            m = _MULT_RE.match(body)
            if m:
                mult = [0] * space.order
                for item in filter(None, (x.strip() for x in m.group(1).split(","))):
                    c, n = item.split(":")
                    c, n = int(c), int(n)
                    if not 0 <= c < space.order or n < 0:
                        raise ParseError(f"bad multiplicity entry {item!r}")
                    mult[c] += n
                return DiagonalForm(space, mult)
            return from_classes(space, [int(x) for x in body.split(",") if x.strip()])
        if not s:
            return zero(space)
        if not space.field_mode:
            raise ParseError("abstract groups take class literals: '@0,1,2' or '@{0:2}'")
        vals = [int(x) for x in s.split(",") if x.strip()]
    except ValueError as exc:
        raise ParseError(f"cannot parse form literal {text!r}: {exc}") from None
    for v in vals:
        if not 0 <= v < space.field.q:
            raise ParseError(f"{v} is not an element of F_{space.field.q}")
    return make(space, vals)


def format_form(a: DiagonalForm) -> str:
    """Coefficient list in field mode (least class representatives when none are stored),
    multiplicity literal otherwise; the zero form is ``@{}``."""
    if a.space.field_mode and a.dim:
        return ",".join(str(x) for x in a.coefficients())
    items = ",".join(f"{c}:{m}" for c, m in enumerate(a.mult) if m)
    return "@{" + items + "}"


def form_to_json(a: DiagonalForm, with_invariants: bool = True) -> dict:
    red = h_reduce(a)
    doc = {
        "dim": a.dim,
        "mult": list(a.mult),
        "literal": format_form(a),
        "reduced": format_form(red),
    }
    if with_invariants:
        doc["invariants"] = {
            "dim_index": dim_index(a),
            "permanent": permanent(a),
            "is_H_form": is_H_form(a),
        }
    return doc


def dumps(a: DiagonalForm) -> str:
    return json.dumps(form_to_json(a))
