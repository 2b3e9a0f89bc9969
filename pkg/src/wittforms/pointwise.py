"""Evaluation of diagonal forms over a concrete F_q: represented classes,
isotropy, round/universal tests, and the I-form decomposition.

Value sets are computed exactly by dynamic programming over the field:
after the first i variables the attainable values are
``S_i = S_{i-1} + a_i * ({0} u d-th powers)``, tracked separately for the
zero vector and nonzero vectors.  A brute-force enumerator is kept alongside
as an independent oracle.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import diagform as df
from .diagform import DiagonalForm
from .errors import AbstractMode, DomainError, SearchTooLarge
from .ffield import FieldCtx

CROSS_CHECK_BUDGET = 10**7
SEARCH_BUDGET = 10**9
_CHUNK = 1 << 16


@dataclass(frozen=True)
class RepresentationProfile:
    represented: frozenset[int]
    represents_zero_nontrivially: bool
    witnesses: dict[int, tuple[int, ...]] = field(default_factory=dict)


def _field(a: DiagonalForm) -> FieldCtx:
    if not a.space.field_mode:
        raise AbstractMode("this operation needs a concrete finite field")
    return a.space.field


def term_values(F: FieldCtx, a: int) -> np.ndarray:
    """a * x**d for every x in F_q, indexed by x."""
    return F.mul_arr(a, F.power_table)


def evaluate(a: DiagonalForm, x) -> int:
    F = _field(a)
    coeffs = a.coefficients()
    if len(x) != len(coeffs):
        raise DomainError("vector length does not match the dimension")
    v = 0
    for c, xi in zip(coeffs, x):
        v = F.add(v, F.mul(c, F.power(xi, F.d)))
    return v


def _sumset(F: FieldCtx, mask: np.ndarray, T: np.ndarray) -> np.ndarray:
    out = np.zeros(F.q, dtype=bool)
    vals = np.flatnonzero(mask)
    step = max(1, _CHUNK // max(1, len(T)))
    for k in range(0, len(vals), step):
        out[F.add_arr(vals[k:k + step, None], T[None, :]).ravel()] = True
    return out


def _suffix_tables(F: FieldCtx, coeffs: list[int]):
    """any_[i] / nz[i]: values of the terms i.. over all / nonzero sub-vectors."""
    n = len(coeffs)
    any_ = [None] * (n + 1)
    nz = [None] * (n + 1)
    any_[n] = np.zeros(F.q, dtype=bool)
    any_[n][0] = True
    nz[n] = np.zeros(F.q, dtype=bool)
    P = F.dth_powers
    for i in range(n - 1, -1, -1):
        hit = _sumset(F, any_[i + 1], F.mul_arr(coeffs[i], P))
        nz[i] = nz[i + 1] | hit
        any_[i] = any_[i + 1] | hit
    return any_, nz


def _lex_witness(F: FieldCtx, coeffs: list[int], any_, nz, target: int) -> tuple[int, ...] | None:
    """Lexicographically least nonzero x with form(x) = target, or None."""
    n = len(coeffs)
    if n == 0 or not nz[0][target]:
        return None
    xs = np.arange(F.q, dtype=np.int64)
    r, started, out = target, False, []
    for i in range(n):
        rem = F.add_arr(r, F.neg_arr(term_values(F, coeffs[i])))
        nonzero_now = started | (xs != 0)
        table_any = any_[i + 1][rem]
        table_nz = nz[i + 1][rem]
        ok = np.where(nonzero_now, table_any, table_nz)
        x = int(np.argmax(ok))
        assert ok[x]
        out.append(x)
        r = int(rem[x])
        started = started or x != 0
    return tuple(out)


def represented_classes(a: DiagonalForm, witnesses: bool = False) -> RepresentationProfile:
    """D(a) as a set of classes, and whether a has a nontrivial zero."""
    F = _field(a)
    coeffs = a.coefficients()
    any_, nz = _suffix_tables(F, coeffs)
    hit = nz[0]
    values = np.flatnonzero(hit[1:]) + 1
    classes = frozenset(int(c) for c in F._tab.log_arr[values] % F.s)
    wit = {}
    if witnesses:
        for c in sorted(classes):
            target = next(v for v in F.class_elements(c) if hit[v])
            wit[c] = _lex_witness(F, coeffs, any_, nz, target)
    return RepresentationProfile(classes, bool(hit[0]), wit)


def brute_values(a: DiagonalForm, budget: int = CROSS_CHECK_BUDGET) -> np.ndarray:
    """a(x) for every x in F_q^n, in lexicographic order of x (x_1 slowest)."""
    F = _field(a)
    n = a.dim
    if F.q**n > budget:
        raise SearchTooLarge(f"q^dim = {F.q}^{n} exceeds the budget {budget}")
    vals = np.zeros(1, dtype=np.int64)
    for c in a.coefficients():
        vals = F.add_arr(vals[:, None], term_values(F, c)[None, :]).ravel()
    return vals


def brute_represented(a: DiagonalForm, budget: int = CROSS_CHECK_BUDGET) -> RepresentationProfile:
    F = _field(a)
    vals = brute_values(a, budget)
    nz = vals[1:]
    classes = frozenset(int(c) for c in F._tab.log_arr[nz[nz != 0]] % F.s)
    return RepresentationProfile(classes, bool(np.any(nz == 0)))


def brute_isotropy_witness(a: DiagonalForm, budget: int = CROSS_CHECK_BUDGET) -> tuple[int, ...] | None:
    F = _field(a)
    vals = brute_values(a, budget)
    hits = np.flatnonzero(vals[1:] == 0)
    if not len(hits):
        return None
    idx = int(hits[0]) + 1
    out = []
    for _ in range(a.dim):
        out.append(idx % F.q)
        idx //= F.q
    return tuple(reversed(out))


def is_isotropic(a: DiagonalForm, method: str = "auto", budget: int = SEARCH_BUDGET):
    """(isotropic?, lex-least nonzero zero or None).

    ``auto``: more variables than the degree always gives a nontrivial zero
    (Chevalley-Warning); otherwise the exact value-set search decides.
    ``brute``: plain enumeration of F_q^n, refused above ``budget``.
    """
    F = _field(a)
    if a.dim == 0:
        return False, None
    coeffs = a.coefficients()
    if method == "brute":
        if F.q**a.dim > budget:
            raise SearchTooLarge(f"q^dim = {F.q}^{a.dim} exceeds the budget {budget}")
        w = brute_isotropy_witness(a, budget)
        return w is not None, w
    if method != "auto":
        raise DomainError(f"unknown isotropy method {method!r}")
    if a.dim * F.q * len(F.dth_powers) > budget:
        raise SearchTooLarge("value-set search exceeds the budget")
    any_, nz = _suffix_tables(F, coeffs)
    w = _lex_witness(F, coeffs, any_, nz, 0)
    if a.dim > F.d:
        assert w is not None, "Chevalley-Warning violated"
    return w is not None, w


def classify(a: DiagonalForm) -> dict[str, bool]:
    """round / universal / H_max-form / isotropic / I-form flags (H maximal)."""
    F = _field(a)
    prof = represented_classes(a)
    sim = df.similarity_group(a)
    amax = _as_max(a)
    flags = {
        "round": prof.represented <= sim,
        "universal": prof.represented == frozenset(range(F.s)),
        "h_max_form": df.is_H_form(amax),
        "isotropic": prof.represents_zero_nontrivially,
    }
    flags["i_form"] = flags["h_max_form"] and flags["isotropic"]
    if a.dim > 0:
        assert flags["h_max_form"] == (flags["round"] and flags["universal"]), a
    return flags


def _as_max(a: DiagonalForm) -> DiagonalForm:
    if a.space.is_maximal():
        return a
    return DiagonalForm(a.space.with_subgroup("max"), a.mult, a.coeffs)


def _require_max(a: DiagonalForm) -> None:
    _field(a)
    if not a.space.is_maximal():
        raise DomainError("I-forms are defined for the maximal subgroup H = G only")


def is_I_form(a: DiagonalForm) -> bool:
    _require_max(a)
    return df.is_H_form(a) and is_isotropic(a)[0]


def i_decompose(a: DiagonalForm) -> tuple[DiagonalForm, DiagonalForm]:
    """(a_I, t_I(a)): the H-decomposition if t_H(a) is isotropic, else (a, 0)."""
    _require_max(a)
    red, t = df.h_decompose(a)
    if is_isotropic(t)[0]:
        return red, t
    return a, df.zero(a.space)


def i_reduce(a: DiagonalForm) -> DiagonalForm:
    return i_decompose(a)[0]


def i_canonical(a: DiagonalForm) -> DiagonalForm:
    """Canonical representative of the I-class of a.

    Two forms are I-equivalent iff a + A = b + B for I-forms A, B.  Any
    H-form of dimension > d is isotropic, hence an I-form, so padding with
    enough copies of the coset form shows that I-equivalence and
    H-equivalence coincide on diagonal forms.  The H-reduced part is thus
    the canonical representative.  It equals ``i_reduce(a)`` unless t_H(a)
    is a nonzero anisotropic H-form (e.g. <1, g> over F_17 with d = 6); in
    that case the decomposition part is not a class invariant.
    """
    _require_max(a)
    return df.h_reduce(a)


def i_equivalent(a: DiagonalForm, b: DiagonalForm) -> bool:
    return i_canonical(a).mult == i_canonical(b).mult


def i_equivalent_by_padding(a: DiagonalForm, b: DiagonalForm) -> bool:
    """The defining relation, searched directly: is a + l*N isometric to b + l'*N, both paddings isotropic?

    Independent of the reduction; used as an oracle.  Only full-coset
    multiples are tried, which suffices because H-forms are sums of cosets.
    """
    _require_max(a)
    df._same(a, b)
    N = df.coset_form(a.space)
    top = max(a.dim, b.dim) // max(1, N.dim) + a.space.d + 2
    pads = [l for l in range(top + 1) if l == 0 or is_isotropic(df.multiple(l, N))[0]]
    lefts = {tuple(x + l * n for x, n in zip(a.mult, N.mult)) for l in pads}
    return any(tuple(x + l * n for x, n in zip(b.mult, N.mult)) in lefts for l in pads)


def witt_neg_I(a: DiagonalForm) -> DiagonalForm:
    """b~ + a + b~ with b~ the minimal H-inverse of a.

    Then a + result = 2 * (a + b~), an H-form; if that happens to be
    anisotropic, further copies of a + b~ are added until it is isotropic,
    which must happen once the dimension exceeds d.
    """
    _require_max(a)
    tilde = df.witt_neg(a)
    out = df.osum(df.osum(tilde, a), tilde)
    block = df.osum(a, tilde)
    while not block.is_zero() and not is_I_form(df.osum(a, out)):
        out = df.osum(out, block)
    assert i_reduce(df.osum(a, out)).is_zero()
    return out
