"""Finite abelian groups, the group ring Z[G], and its quotient by a norm ideal.

Z[G] / (g * N_H : g in G) is the ring model of the diagonal Witt ring: a
diagonal form is its multiplicity vector, orthogonal sum is addition and the
tensor product is convolution.
"""

from __future__ import annotations

import itertools
import random
from functools import cached_property
from typing import Iterable, Sequence

from . import lattice
from .errors import DegreeTooSmall, DomainError, GroupMismatch, TooDeep

MAX_GROUP_ORDER = 4096
MAX_FILTRATION_DEPTH = 4


class AbGroup:
    """Z/n_1 x ... x Z/n_k with elements enumerated in lexicographic tuple order.

    Element 0 is the identity, and a smaller index always means a
    lexicographically smaller tuple.
    """

    def __init__(self, factors: Iterable[int]):
        factors = tuple(int(n) for n in factors)
        if not factors or any(n < 1 for n in factors):
            raise DomainError(f"invalid cyclic factors {factors!r}")
        order = 1
        for n in factors:
            order *= n
        if order > MAX_GROUP_ORDER:
            raise DomainError(f"group order {order} exceeds {MAX_GROUP_ORDER}")
        self.factors = factors
        self.order = order
        self._tuples = list(itertools.product(*(range(n) for n in factors)))
        self._index = {t: i for i, t in enumerate(self._tuples)}
        self._coset_cache: dict[frozenset[int], list[tuple[int, ...]]] = {}
        self._subgroup_cache: dict[frozenset[int], bool] = {}

    def __repr__(self) -> str:
        return "AbGroup(" + " x ".join(f"Z/{n}" for n in self.factors) + ")"

    def __eq__(self, other) -> bool:
        return isinstance(other, AbGroup) and self.factors == other.factors

    def __hash__(self) -> int:
        return hash(("AbGroup", self.factors))

    def elements(self) -> range:
        return range(self.order)

    def as_tuple(self, i: int) -> tuple[int, ...]:
        return self._tuples[i]

    def index(self, t: Sequence[int]) -> int:
        return self._index[tuple(x % n for x, n in zip(t, self.factors))]

    @cached_property
    def add_table(self) -> list[list[int]]:
        return [
            [self.index([x + y for x, y in zip(a, b)]) for b in self._tuples]
            for a in self._tuples
        ]

    def add(self, a: int, b: int) -> int:
        return self.add_table[a][b]

    @cached_property
    def neg_table(self) -> list[int]:
        return [self.index([-x for x in t]) for t in self._tuples]

    def neg(self, a: int) -> int:
        return self.neg_table[a]

    def mul_scalar(self, n: int, a: int) -> int:
        return self.index([n * x for x in self._tuples[a]])

    def element_order(self, a: int) -> int:
        k, x = 1, a
        while x != 0:
            x = self.add(x, a)
            k += 1
        return k

    def is_subgroup(self, S: Iterable[int]) -> bool:
        S = frozenset(S)
        if S not in self._subgroup_cache:
            self._subgroup_cache[S] = 0 in S and all(
                self.add(a, self.neg(b)) in S for a in S for b in S
            )
        return self._subgroup_cache[S]

    def subgroup(self, gens: Iterable[int]) -> frozenset[int]:
        """Subgroup generated by ``gens``."""
        H = {0}
        frontier = [0]
        gens = [g % self.order for g in gens]
        while frontier:
            x = frontier.pop()
            for g in gens:
                y = self.add(x, g)
                if y not in H:
                    H.add(y)
                    frontier.append(y)
        return frozenset(H)

    def is_cyclic(self) -> bool:
        return any(self.element_order(a) == self.order for a in self.elements())

    def subgroup_of_order(self, n: int) -> frozenset[int]:
        """The unique subgroup of order ``n`` of a cyclic group."""
        if n < 1 or self.order % n:
            raise DomainError(f"no subgroup of order {n} in a group of order {self.order}")
        gen = next((a for a in self.elements() if self.element_order(a) == self.order), None)
        if gen is None:
            raise DomainError("order:n subgroups are only defined for cyclic groups; use gens:")
        return self.subgroup([self.mul_scalar(self.order // n, gen)])

    def full(self) -> frozenset[int]:
        return frozenset(self.elements())

    def cosets(self, H: Iterable[int]) -> list[tuple[int, ...]]:
        """Cosets of H, each sorted, listed by their lex-least element."""
        key = frozenset(H)
        if key not in self._coset_cache:
            seen: set[int] = set()
            out = []
            for g in self.elements():
                if g in seen:
                    continue
                C = tuple(sorted(self.add(g, h) for h in key))
                seen.update(C)
                out.append(C)
            self._coset_cache[key] = out
        return list(self._coset_cache[key])


def _check_subgroup(G: AbGroup, H: Iterable[int]) -> frozenset[int]:
    H = frozenset(H)
    if not H or not all(0 <= h < G.order for h in H) or not G.is_subgroup(H):
        raise DomainError(f"{sorted(H)} is not a subgroup of {G}")
    return H


class GroupRingElement:
    """An element of Z[G] as a dense integer coefficient vector."""

    __slots__ = ("group", "coeffs")

    def __init__(self, group: AbGroup, coeffs: Iterable[int]):
        coeffs = tuple(int(c) for c in coeffs)
        if len(coeffs) != group.order:
            raise DomainError(f"expected {group.order} coefficients, got {len(coeffs)}")
        self.group = group
        self.coeffs = coeffs

    @classmethod
    def zero(cls, group: AbGroup) -> "GroupRingElement":
        return cls(group, [0] * group.order)

    @classmethod
    def delta(cls, group: AbGroup, g: int = 0) -> "GroupRingElement":
        c = [0] * group.order
        c[g] = 1
        return cls(group, c)

    @classmethod
    def norm(cls, group: AbGroup, H: Iterable[int], shift: int = 0) -> "GroupRingElement":
        """shift * N_H, the indicator of the coset shift + H."""
        c = [0] * group.order
        for h in H:
            c[group.add(shift, h)] += 1
        return cls(group, c)

    def _same(self, other: "GroupRingElement") -> None:
        if self.group != other.group:
            raise GroupMismatch(f"{self.group} vs {other.group}")

    def __add__(self, other):
        self._same(other)
        return GroupRingElement(self.group, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    def __sub__(self, other):
        self._same(other)
        return GroupRingElement(self.group, [a - b for a, b in zip(self.coeffs, other.coeffs)])

    def __neg__(self):
        return GroupRingElement(self.group, [-a for a in self.coeffs])

    def __mul__(self, other):
        if isinstance(other, int):
            return GroupRingElement(self.group, [other * a for a in self.coeffs])
        return gr_mul(self, other)

    def __rmul__(self, other):
        if isinstance(other, int):
            return self * other
        return NotImplemented

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, GroupRingElement)
            and self.group == other.group
            and self.coeffs == other.coeffs
        )

    def __hash__(self) -> int:
        return hash((self.group, self.coeffs))

    def __repr__(self) -> str:
        return f"GroupRingElement({self.group!r}, {self.coeffs})"

    def augmentation(self) -> int:
        return sum(self.coeffs)

    def translate(self, h: int) -> "GroupRingElement":
        c = [0] * self.group.order
        for g, a in enumerate(self.coeffs):
            if a:
                c[self.group.add(g, h)] += a
        return GroupRingElement(self.group, c)


def gr_mul(x: GroupRingElement, y: GroupRingElement) -> GroupRingElement:
    """Convolution product in Z[G]."""
    x._same(y)
    table = x.group.add_table
    out = [0] * x.group.order
    ys = [(b, v) for b, v in enumerate(y.coeffs) if v]
    for a, u in enumerate(x.coeffs):
        if u:
            row = table[a]
            for b, v in ys:
                out[row[b]] += u * v
    return GroupRingElement(x.group, out)


def canonical_rep(x: GroupRingElement, H: Iterable[int]) -> GroupRingElement:
    """Representative of x modulo span{g * N_H} vanishing at each coset's least element."""
    G = x.group
    H = _check_subgroup(G, H)
    c = list(x.coeffs)
    for C in G.cosets(H):
        m = c[C[0]]
        if m:
            for g in C:
                c[g] -= m
    return GroupRingElement(G, c)


def norm_ideal_rows(G: AbGroup, H: Iterable[int]) -> list[list[int]]:
    """Generators g * N_H of the norm ideal, one per coset."""
    H = _check_subgroup(G, H)
    return [list(GroupRingElement.norm(G, H, C[0]).coeffs) for C in G.cosets(H)]


def in_norm_ideal(x: GroupRingElement, H: Iterable[int]) -> bool:
    """Lattice membership of x in span{g * N_H}, by Hermite normal form."""
    basis = lattice.hnf(norm_ideal_rows(x.group, H), x.group.order)
    return lattice.in_lattice(x.coeffs, basis)


def permanent_hom(x: GroupRingElement, H: Iterable[int] | None = None) -> tuple[int, bool]:
    """Sum of coeff(g) * g in G, and whether this descends to Z[G]/(N_H).

    The flag is True iff the permanent kills every generator g * N_H.
    With ``H=None`` the flag refers to H = G.
    """
    G = x.group
    H = G.full() if H is None else _check_subgroup(G, H)
    flag = all(_perm_sum(G, GroupRingElement.norm(G, H, C[0]).coeffs) == 0 for C in G.cosets(H))
    return _perm_sum(G, x.coeffs), flag


def _perm_sum(G: AbGroup, coeffs: Sequence[int]) -> int:
    acc = 0
    for g, a in enumerate(coeffs):
        if a:
            acc = G.add(acc, G.mul_scalar(a, g))
    return acc


def _augmentation_ideal_rows(G: AbGroup, Hsize: int) -> list[list[int]]:
    # Z-basis of {x : aug(x) = 0 mod |H|}: delta_g - delta_0 and |H| * delta_0.
    rows = []
    for g in range(1, G.order):
        r = [0] * G.order
        r[g], r[0] = 1, -1
        rows.append(r)
    r = [0] * G.order
    r[0] = Hsize
    rows.append(r)
    return rows


def _product_rows(G: AbGroup, A: Sequence[Sequence[int]], B: Sequence[Sequence[int]]) -> list[list[int]]:
    return [
        list(gr_mul(GroupRingElement(G, a), GroupRingElement(G, b)).coeffs)
        for a in A
        for b in B
    ]


def _shuffled(rows, rng):
    rows = [list(r) for r in rows]
    if rng is not None:
        rng.shuffle(rows)
    return rows


def ideal_power_rows(
    G: AbGroup, H: Iterable[int], n: int, rng: random.Random | None = None
) -> list[list[int]]:
    """HNF basis of the preimage of I^n in Z[G], i.e. (lift of I)^n + span{g N_H}.

    I is the kernel of the dimension index W -> Z/|H|. ``rng`` only permutes
    generator lists, which must not change the lattice.
    """
    H = _check_subgroup(G, H)
    N = norm_ideal_rows(G, H)
    if n == 0:
        return lattice.hnf(_shuffled(_identity(G.order), rng), G.order)
    gens = _augmentation_ideal_rows(G, len(H))
    power = lattice.hnf(_shuffled(gens, rng), G.order)
    for _ in range(n - 1):
        power = lattice.hnf(_shuffled(_product_rows(G, power, gens), rng), G.order)
    return lattice.hnf(_shuffled(power + N, rng), G.order)


def _identity(k: int) -> list[list[int]]:
    return [[int(i == j) for j in range(k)] for i in range(k)]


def filtration_quotient(
    G: AbGroup, H: Iterable[int], d: int, n: int, rng: random.Random | None = None
) -> list[int]:
    """Invariant factors of I^n / I^(n+1) in W = Z[G]/(N_H).

    ``[3]`` means Z/3, ``[]`` the zero group, and 0 a free summand.
    """
    if d < 3:
        raise DegreeTooSmall(f"degree {d} < 3")
    if n < 0:
        raise DomainError("filtration index must be nonnegative")
    if n > MAX_FILTRATION_DEPTH:
        raise TooDeep(f"n = {n} > {MAX_FILTRATION_DEPTH}")
    outer = ideal_power_rows(G, H, n, rng)
    inner = ideal_power_rows(G, H, n + 1, rng)
    return lattice.quotient_invariants(outer, inner)


def exponent_holds(G: AbGroup, H: Iterable[int], e: int, n: int) -> bool:
    """Whether e * I^n is contained in I^(n+1), by exact lattice membership."""
    outer = ideal_power_rows(G, H, n + 1)
    return lattice.contains(outer, ([e * x for x in r] for r in ideal_power_rows(G, H, n)))
