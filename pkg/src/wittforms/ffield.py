"""Finite fields F_{p^t} with discrete-log tables, and degree-d power classes.

Every field F_{p^e} is realised with its Conway polynomial: the least (in
Conway's signed lexicographic order) primitive polynomial whose root is
compatible with the roots chosen for all subfields.  The root is the fixed
multiplicative generator, so subfield embeddings are just
``gen_k -> gen_l ** ((|l|-1)/(|k|-1))`` and every tower of embeddings commutes.

Elements are ints in ``range(q)``: the polynomial-basis encoding
``sum(c_i * p**i)`` of ``sum(c_i * X**i)``.  For t = 1 this is the usual
residue in ``range(p)``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Iterable, Sequence

import numpy as np

from .errors import CharTooSmall, DomainError, NonPrime, TooLarge, ZeroElement
from .groupring import AbGroup

TABLE_BOUND = 2**20


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def prime_factors(n: int) -> list[int]:
    out = []
    f = 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1
    if n > 1:
        out.append(n)
    return out


def split_prime_power(q: int) -> tuple[int, int]:
    """(p, t) with q = p**t, or NonPrime."""
    fs = prime_factors(q) if q > 1 else []
    if len(fs) != 1:
        raise NonPrime(f"{q} is not a prime power")
    p, t = fs[0], 0
    while q > 1:
        q //= p
        t += 1
    return p, t


# ---------------------------------------------------------------------------
# polynomials over F_p, coefficient lists low -> high


def _mulmod(a: Sequence[int], b: Sequence[int], f: Sequence[int], p: int) -> list[int]:
    e = len(f) - 1
    prod = [0] * (2 * e - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                prod[i + j] += x * y
    for k in range(len(prod) - 1, e - 1, -1):
        c = prod[k] % p
        if c:
            for j in range(e + 1):
                prod[k - e + j] -= c * f[j]
    return [x % p for x in prod[:e]]


def _powmod(a: Sequence[int], n: int, f: Sequence[int], p: int) -> list[int]:
    e = len(f) - 1
    result = [1] + [0] * (e - 1)
    base = list(a)
    while n:
        if n & 1:
            result = _mulmod(result, base, f, p)
        base = _mulmod(base, base, f, p)
        n >>= 1
    return result


def _eval_mod(g: Sequence[int], y: Sequence[int], f: Sequence[int], p: int) -> list[int]:
    e = len(f) - 1
    acc = [0] * e
    for c in reversed(g):
        acc = _mulmod(acc, y, f, p)
        acc[0] = (acc[0] + c) % p
    return acc


def _x(e: int) -> list[int]:
    if e == 1:
        return [0]
    return [0, 1] + [0] * (e - 2)


@lru_cache(maxsize=None)
def conway_polynomial(p: int, e: int) -> tuple[int, ...]:
    """Conway polynomial of F_{p^e}, coefficients low -> high (monic)."""
    q = p**e
    one = [1] + [0] * (e - 1)
    primes = prime_factors(q - 1)
    subs = [k for k in range(1, e) if e % k == 0]
    for seq in itertools.product(range(p), repeat=e):
        # seq = (a_{e-1}, ..., a_0); coefficient of X^i is (-1)^(e-i) a_i
        a = list(reversed(seq))
        if a[0] == 0:
            continue
        f = [((-1) ** (e - i) * a[i]) % p for i in range(e)] + [1]
        x = [(-f[0]) % p] if e == 1 else _x(e)
        if _powmod(x, q - 1, f, p) != one:
            continue
        if any(_powmod(x, (q - 1) // r, f, p) == one for r in primes):
            continue
        ok = True
        for k in subs:
            y = _powmod(x, (q - 1) // (p**k - 1), f, p)
            if any(_eval_mod(conway_polynomial(p, k), y, f, p)):
                ok = False
                break
        if ok:
            return tuple(f)
    raise AssertionError(f"no Conway polynomial found for p={p}, e={e}")


class _Tables:
    """Log/antilog and digit tables of F_{p^e}; shared by all FieldCtx over it."""

    def __init__(self, p: int, e: int):
        self.p, self.e, self.q = p, e, p**e
        self.modulus = conway_polynomial(p, e)
        q = self.q
        exp = [0] * (q - 1)
        if e == 1:
            g = (-self.modulus[0]) % p
            x = 1
            for i in range(q - 1):
                exp[i] = x
                x = x * g % p
            self.gen = g
        else:
            low = [(-c) % p for c in self.modulus[:e]]
            digits = [1] + [0] * (e - 1)
            for i in range(q - 1):
                v, w = 0, 1
                for c in digits:
                    v += c * w
                    w *= p
                exp[i] = v
                top = digits[-1]
                digits = [0] + digits[:-1]
                if top:
                    digits = [(c + top * m) % p for c, m in zip(digits, low)]
            self.gen = p
        log = [-1] * q
        for i, x in enumerate(exp):
            log[x] = i
        self.exp = exp
        self.log = log
        self.weights = np.array([p**i for i in range(e)], dtype=np.int64)
        idx = np.arange(q, dtype=np.int64)
        self.digits = np.stack([(idx // p**i) % p for i in range(e)], axis=1)
        self.exp_arr = np.array(exp, dtype=np.int64)
        self.log_arr = np.array(log, dtype=np.int64)


@lru_cache(maxsize=None)
def _tables(p: int, e: int) -> _Tables:
    return _Tables(p, e)


class FieldCtx:
    """F_q with q = p**t, together with the form degree d.

    Immutable after construction; obtain instances through :func:`make_field`.
    """

    def __init__(self, p: int, t: int, d: int):
        self.p, self.t, self.d = p, t, d
        self.q = p**t
        self._tab = _tables(p, t)
        self.modulus: tuple[int, ...] = self._tab.modulus
        self.gen: int = self._tab.gen
        self.s = math.gcd(d, self.q - 1)

    def __repr__(self) -> str:
        return f"FieldCtx(p={self.p}, t={self.t}, d={self.d})"

    def __eq__(self, other) -> bool:
        return isinstance(other, FieldCtx) and (self.p, self.t, self.d) == (other.p, other.t, other.d)

    def __hash__(self) -> int:
        return hash(("FieldCtx", self.p, self.t, self.d))

    def descriptor(self) -> dict:
        return {"p": self.p, "t": self.t, "d": self.d, "modulus": list(self.modulus), "gen": self.gen}

    # -- element arithmetic -------------------------------------------------

    def elements(self) -> range:
        return range(self.q)

    def add(self, a: int, b: int) -> int:
        p = self.p
        if self.t == 1:
            return (a + b) % p
        r, w = 0, 1
        while a or b:
            r += ((a % p + b % p) % p) * w
            a //= p
            b //= p
            w *= p
        return r

    def neg(self, a: int) -> int:
        p = self.p
        if self.t == 1:
            return (-a) % p
        r, w = 0, 1
        while a:
            r += ((-(a % p)) % p) * w
            a //= p
            w *= p
        return r

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        L = self._tab.log
        return self._tab.exp[(L[a] + L[b]) % (self.q - 1)]

    def power(self, a: int, n: int) -> int:
        if a == 0:
            if n == 0:
                return 1
            if n < 0:
                raise ZeroElement("0 has no inverse")
            return 0
        return self._tab.exp[(self._tab.log[a] * n) % (self.q - 1)]

    def inv(self, a: int) -> int:
        return self.power(a, -1)

    def dlog(self, x: int) -> int:
        if x == 0:
            raise ZeroElement("discrete log of 0")
        return self._tab.log[x]

    def gen_power(self, i: int) -> int:
        return self._tab.exp[i % (self.q - 1)]

    def class_of(self, x: int) -> int:
        """Index of x in k^x / k^{x d}: dlog(x) mod s."""
        if not 0 <= x < self.q:
            raise DomainError(f"{x} is not an element of F_{self.q}")
        if x == 0:
            raise ZeroElement("0 has no power class")
        return self._tab.log[x] % self.s

    def class_elements(self, c: int) -> list[int]:
        return sorted(self._tab.exp[i] for i in range(c % self.s, self.q - 1, self.s))

    def class_rep(self, c: int) -> int:
        """Least element (as an int) of power class c."""
        return self.class_elements(c)[0]

    @cached_property
    def dth_powers(self) -> np.ndarray:
        """Sorted array of the nonzero d-th powers."""
        return np.sort(self._tab.exp_arr[:: self.s] if self.s else self._tab.exp_arr)

    @cached_property
    def power_table(self) -> np.ndarray:
        """x -> x**d for every element x."""
        L = self._tab.log_arr
        out = np.zeros(self.q, dtype=np.int64)
        nz = L >= 0
        out[nz] = self._tab.exp_arr[(L[nz] * self.d) % (self.q - 1)]
        return out

    # -- vectorised helpers -------------------------------------------------

    def add_arr(self, a, b) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.t == 1:
            return (a + b) % self.p
        D = self._tab.digits
        return ((D[a] + D[b]) % self.p) @ self._tab.weights

    def mul_arr(self, a, b) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        a, b = np.broadcast_arrays(a, b)
        out = np.zeros(a.shape, dtype=np.int64)
        nz = (a != 0) & (b != 0)
        L = self._tab.log_arr
        out[nz] = self._tab.exp_arr[(L[a[nz]] + L[b[nz]]) % (self.q - 1)]
        return out

    def neg_arr(self, a) -> np.ndarray:
        a = np.asarray(a, dtype=np.int64)
        if self.t == 1:
            return (-a) % self.p
        return ((-self._tab.digits[a]) % self.p) @ self._tab.weights

    def coefficients(self, x: int) -> list[int]:
        """Coordinates of x in the basis 1, X, ..., X^(t-1)."""
        return [(x // self.p**i) % self.p for i in range(self.t)]


@lru_cache(maxsize=None)
def make_field(p: int, t: int, d: int) -> FieldCtx:
    """Tabulated context for F_{p^t} with form degree d (needs p > d)."""
    if not is_prime(p):
        raise NonPrime(f"{p} is not prime")
    if t < 1:
        raise DomainError("extension degree must be >= 1")
    if p <= d:
        raise CharTooSmall(f"characteristic {p} must exceed the degree {d}")
    if p**t > TABLE_BOUND:
        raise TooLarge(f"q = {p}^{t} exceeds the table bound {TABLE_BOUND}")
    return FieldCtx(p, t, d)


# ---------------------------------------------------------------------------
# extensions


@dataclass(frozen=True, eq=False)
class Extension:
    """l = F_{q^m} over k = F_q with the canonical embedding k -> l."""

    base: FieldCtx
    top: FieldCtx
    m: int
    embedding: tuple[int, ...]
    class_map: tuple[int, ...]

    def embed(self, x: int) -> int:
        return self.embedding[x]

    @cached_property
    def _restrict(self) -> dict[int, int]:
        return {y: x for x, y in enumerate(self.embedding)}

    def restrict(self, y: int) -> int:
        """Preimage in k of an element of l lying in the image of k."""
        try:
            return self._restrict[y]
        except KeyError:
            raise DomainError(f"{y} does not lie in the subfield F_{self.base.q}") from None

    def frobenius(self, y: int, i: int = 1) -> int:
        """y ** (q ** i), the i-th power of the generator of Gal(l/k)."""
        return self.top.power(y, pow(self.base.q, i, self.top.q - 1) if y else 1)

    def class_embed(self, c: int) -> int:
        return self.class_map[c % self.base.s]


@lru_cache(maxsize=None)
def extend(ctx: FieldCtx, m: int) -> Extension:
    """F_{q^m} over ctx with its embedding and the induced map on power classes."""
    if m < 1:
        raise DomainError("extension degree must be >= 1")
    if ctx.q**m > TABLE_BOUND:
        raise TooLarge(f"q^m = {ctx.q}^{m} exceeds the table bound {TABLE_BOUND}")
    top = make_field(ctx.p, ctx.t * m, ctx.d)
    e = (top.q - 1) // (ctx.q - 1)
    emb = [0] * ctx.q
    for x in range(1, ctx.q):
        emb[x] = top.gen_power(ctx.dlog(x) * e)
    class_map = []
    for c in range(ctx.s):
        cls = {top.class_of(emb[x]) for x in ctx.class_elements(c)}
        assert len(cls) == 1, "power class map is not well defined"
        class_map.append(cls.pop())
    return Extension(ctx, top, m, tuple(emb), tuple(class_map))


def norm_trace(ext: Extension, x: int) -> tuple[int, int]:
    """(N_{l/k}(x), Tr_{l/k}(x)) as elements of k."""
    top = ext.top
    n, tr = 1, 0
    for i in range(ext.m):
        y = ext.frobenius(x, i)
        n = top.mul(n, y)
        tr = top.add(tr, y)
    return ext.restrict(n), ext.restrict(tr)


def all_h_trivial_in(H: Iterable[int], ext: Extension) -> bool:
    """True iff every class in H becomes a d-th power in the extension."""
    return all(ext.class_embed(h) == 0 for h in H)


# ---------------------------------------------------------------------------
# power-class groups


class PowerClassGroup:
    """G = k^x / k^{x d} (field mode) or any finite abelian G (abstract mode),
    together with the chosen subgroup H."""

    def __init__(self, group: AbGroup, d: int, H: Iterable[int] | None = None,
                 field: FieldCtx | None = None):
        self.group = group
        self.d = d
        self.field = field
        H = group.full() if H is None else frozenset(H)
        if not H or not all(0 <= h < group.order for h in H) or not group.is_subgroup(H):
            raise DomainError(f"{sorted(H)} is not a subgroup of {group}")
        self.H = H

    @classmethod
    def of_field(cls, ctx: FieldCtx, H=None) -> "PowerClassGroup":
        g = cls(AbGroup([ctx.s]), ctx.d, None, ctx)
        return g if H is None else g.with_subgroup(H)

    @classmethod
    def abstract(cls, factors: Iterable[int], d: int = 3, H=None) -> "PowerClassGroup":
        g = cls(AbGroup(factors), d)
        return g if H is None else g.with_subgroup(H)

    def _key(self):
        f = None if self.field is None else (self.field.p, self.field.t)
        return (self.group.factors, self.d, self.H, f)

    def __eq__(self, other) -> bool:
        return isinstance(other, PowerClassGroup) and self._key() == other._key()

    def __hash__(self) -> int:
        return hash(self._key())

    def __repr__(self) -> str:
        mode = f"F_{self.field.q}" if self.field else "abstract"
        return f"PowerClassGroup({mode}, {self.group!r}, d={self.d}, |H|={len(self.H)})"

    @property
    def field_mode(self) -> bool:
        return self.field is not None

    @property
    def order(self) -> int:
        return self.group.order

    def subgroup_from_spec(self, spec) -> frozenset[int]:
        """'max', 'order:n', 'gens:a;b' (or an explicit iterable of elements)."""
        G = self.group
        if isinstance(spec, str):
            s = spec.strip()
            if s == "max":
                return G.full()
            if s in ("trivial", "1"):
                return frozenset([0])
            if s.startswith("order:"):
                return G.subgroup_of_order(int(s[6:]))
            if s.startswith("gens:"):
                body = s[5:].strip()
                gens = [int(x) for x in body.replace(";", ",").split(",") if x.strip()] if body else []
                return G.subgroup(gens)
            raise DomainError(f"bad subgroup spec {spec!r}")
        return frozenset(spec)

    def with_subgroup(self, spec) -> "PowerClassGroup":
        return PowerClassGroup(self.group, self.d, self.subgroup_from_spec(spec), self.field)

    def is_maximal(self) -> bool:
        return len(self.H) == self.group.order

    def cosets(self) -> list[tuple[int, ...]]:
        return self.group.cosets(self.H)

    def class_of(self, x: int) -> int:
        if self.field is None:
            raise DomainError("class_of needs a field-mode group")
        return self.field.class_of(x)

    def class_rep(self, c: int) -> int:
        if self.field is None:
            raise DomainError("class_rep needs a field-mode group")
        return self.field.class_rep(c)
