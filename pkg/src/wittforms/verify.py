"""Named, reproducible checks of the structural results implemented here.

Each check returns a :class:`CheckReport`.  Exhaustive checks walk every
multiset up to a dimension bound; randomized ones draw from a seeded
``random.Random`` so that a given (params, seed) always gives the same
verdict.  A failing report carries a JSON-serializable counterexample and
can be written to a replay file and re-run later.
"""

from __future__ import annotations

import itertools
import json
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Callable

from . import diagform as df
from . import groupring as gr
from . import lattice
from . import pointwise as pw
from . import sepform as sf
from .errors import UnknownCheck
from .ffield import PowerClassGroup, extend, make_field
from .groupring import AbGroup, GroupRingElement

DEFAULT_SEED = 20240611


@dataclass
class CheckReport:
    check_id: str
    params: dict
    verdict: str
    cases_run: int
    seed: int
    elapsed: float
    counterexample: dict | None = None
    details: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"

    def to_json(self) -> dict:
        doc = asdict(self)
        if doc["counterexample"] is None:
            del doc["counterexample"]
        return doc


class _Fail(Exception):
    def __init__(self, counterexample: dict):
        super().__init__(counterexample.get("reason", "check failed"))
        self.counterexample = counterexample


class _Ctx:
    """Per-run state handed to a check: params, rng and a case counter."""

    def __init__(self, params: dict, seed: int):
        self.params = params
        self.rng = random.Random(seed)
        self.cases = 0
        self.details: dict = {}

    def expect(self, cond: bool, reason: str, **data) -> None:
        self.cases += 1
        if not cond:
            raise _Fail({"reason": reason, **data})


@dataclass(frozen=True)
class _Entry:
    fn: Callable[[_Ctx], None]
    defaults: dict
    summary: str


REGISTRY: dict[str, _Entry] = {}


def register(check_id: str, summary: str = "", **defaults):
    def wrap(fn):
        REGISTRY[check_id] = _Entry(fn, defaults, summary or (fn.__doc__ or "").strip().splitlines()[0])
        return fn

    return wrap


def list_checks() -> list[tuple[str, str]]:
    return sorted((k, e.summary) for k, e in REGISTRY.items())


def run_check(check_id: str, params: dict | None = None, seed: int = DEFAULT_SEED) -> CheckReport:
    if check_id not in REGISTRY:
        raise UnknownCheck(f"no check named {check_id!r}; known: {', '.join(sorted(REGISTRY))}")
    entry = REGISTRY[check_id]
    merged = {**entry.defaults, **(params or {})}
    ctx = _Ctx(merged, seed)
    t0 = time.perf_counter()
    cex = None
    try:
        entry.fn(ctx)
    except _Fail as exc:
        cex = exc.counterexample
    elapsed = time.perf_counter() - t0
    return CheckReport(
        check_id=check_id,
        params=merged,
        verdict="fail" if cex else "pass",
        cases_run=ctx.cases,
        seed=seed,
        elapsed=round(elapsed, 4),
        counterexample=cex,
        details=ctx.details,
    )


def _run_one(args):
    cid, params, seed = args
    return run_check(cid, params, seed)


def run_all(ids=None, seed: int = DEFAULT_SEED, jobs: int = 1, params: dict | None = None) -> list[CheckReport]:
    """Run several checks; reports come back sorted by check_id whatever ``jobs`` is."""
    ids = sorted(REGISTRY) if ids is None else sorted(ids)
    for cid in ids:
        if cid not in REGISTRY:
            raise UnknownCheck(f"no check named {cid!r}")
    work = [(cid, (params or {}).get(cid), seed) for cid in ids]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            reports = list(pool.map(_run_one, work))
    else:
        reports = [_run_one(w) for w in work]
    return sorted(reports, key=lambda r: r.check_id)


def write_replay(report: CheckReport, directory) -> Path:
    path = Path(directory) / f"replay-{report.check_id}-{report.seed}.json"
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(report.to_json(), indent=2, sort_keys=True))
    return path


def replay(path) -> CheckReport:
    """Re-run the check recorded in a replay file with its params and seed."""
    doc = json.loads(Path(path).read_text())
    return run_check(doc["check_id"], doc["params"], doc["seed"])


# ---------------------------------------------------------------------------
# enumeration helpers


def multisets(k: int, max_dim: int):
    """All multiplicity vectors of length k with total <= max_dim, by dimension then lex."""
    for n in range(max_dim + 1):
        for combo in itertools.combinations_with_replacement(range(k), n):
            m = [0] * k
            for c in combo:
                m[c] += 1
            yield m


def _space(spec) -> PowerClassGroup:
    """{"group": [3], "H": "max"} or {"field": [7, 1, 3], "H": "max"}."""
    if "field" in spec:
        p, t, d = spec["field"]
        return PowerClassGroup.of_field(make_field(p, t, d), spec.get("H", "max"))
    return PowerClassGroup.abstract(spec["group"], spec.get("d", 3), spec.get("H", "max"))


def _random_form(space: PowerClassGroup, rng: random.Random, max_dim: int) -> df.DiagonalForm:
    n = rng.randint(0, max_dim)
    return df.from_classes(space, [rng.randrange(space.order) for _ in range(n)])


def _subgroups(G: AbGroup) -> list[frozenset[int]]:
    seen = {G.subgroup(gens) for r in range(3) for gens in itertools.combinations(G.elements(), r)}
    return sorted(seen, key=lambda H: (len(H), sorted(H)))


def hsubgroup_choices(factors) -> list[frozenset[int]]:
    """H = G plus every proper nontrivial subgroup; for prime-order G, H = G and H = 1."""
    G = AbGroup(factors)
    subs = _subgroups(G)
    proper = [H for H in subs if 1 < len(H) < G.order]
    return [G.full()] + (proper or [frozenset([0])])


# ---------------------------------------------------------------------------
# checks


@register("thm3", group=[3], field=[7, 1, 3], n=1, expected=[3])
def _filtration_z3(ctx: _Ctx) -> None:
    """I/I^2 is cyclic of order 3 and the permanent realizes the isomorphism."""
    P = ctx.params
    targets = [("abstract", AbGroup(P["group"]))]
    if P.get("field"):
        F = make_field(*P["field"])
        targets.append((f"F_{F.q}", PowerClassGroup.of_field(F).group))
    for label, G in targets:
        H = G.full()
        inv = gr.filtration_quotient(G, H, 3, P["n"])
        ctx.details[label] = inv
        ctx.expect(inv == P["expected"], "unexpected filtration quotient", source=label, invariants=inv)
        if P["n"] == 1:
            # the permanent kills I^2 and maps I onto G: with |I/I^2| = |G| it is an isomorphism
            for row in gr.ideal_power_rows(G, H, 2):
                g, ok = gr.permanent_hom(GroupRingElement(G, row), H)
                ctx.expect(ok and g == 0, "permanent does not vanish on I^2", source=label, row=row)
            image = G.subgroup(
                gr.permanent_hom(GroupRingElement(G, r), H)[0] for r in gr.ideal_power_rows(G, H, 1)
            )
            ctx.expect(image == G.full(), "permanent is not onto on I", source=label, image=sorted(image))


@register("filtration-z5", group=[5], n_max=2)
def _filtration_z5(ctx: _Ctx) -> None:
    """Filtration quotients for larger cyclic G, recorded rather than asserted."""
    G = AbGroup(ctx.params["group"])
    for n in range(ctx.params["n_max"] + 1):
        ctx.details[f"I^{n}/I^{n + 1}"] = gr.filtration_quotient(G, G.full(), 3, n)
        ctx.cases += 1


@register("exp-lemma", primes=[3, 5], ns=[1, 2])
def _exp_lemma(ctx: _Ctx) -> None:
    """p * I^n lies in I^(n+1) for G = Z/p, H = G."""
    for p in ctx.params["primes"]:
        G = AbGroup([p])
        for n in ctx.params["ns"]:
            ctx.expect(gr.exponent_holds(G, G.full(), p, n), "exponent fails", p=p, n=n)


@register("witt-iso", groups=[[2], [3], [4], [2, 2]], pairs=10_000, max_dim=6)
def _witt_iso(ctx: _Ctx) -> None:
    """Form arithmetic matches Z[G]/(N_H) under the canonical lattice representative."""
    for factors in ctx.params["groups"]:
        for H in hsubgroup_choices(factors):
            space = PowerClassGroup.abstract(factors, 3, H)
            G = space.group

            def image(a):
                return gr.canonical_rep(GroupRingElement(G, a.mult), H)

            for _ in range(ctx.params["pairs"]):
                a = _random_form(space, ctx.rng, ctx.params["max_dim"])
                b = _random_form(space, ctx.rng, ctx.params["max_dim"])
                ia, ib = image(a), image(b)
                ok_sum = image(df.osum(a, b)) == gr.canonical_rep(ia + ib, H)
                ok_prod = image(df.tensor(a, b)) == gr.canonical_rep(ia * ib, H)
                ctx.expect(
                    ok_sum and ok_prod,
                    "sum or product not preserved",
                    group=factors, H=sorted(H), a=a.mult, b=b.mult,
                )


@register("h-equiv-oracle", group=[3], max_dim=6, max_pad=6)
def _h_equiv_oracle(ctx: _Ctx) -> None:
    """h_equivalent agrees with a brute-force search over full-coset paddings (H = G)."""
    space = PowerClassGroup.abstract(ctx.params["group"], 3, "max")
    forms = list(multisets(space.order, ctx.params["max_dim"]))
    L = ctx.params["max_pad"]
    for a, b in itertools.product(forms, repeat=2):
        brute = any(
            [x + l for x in b] == a or [x + l for x in a] == b for l in range(L + 1)
        )
        fa, fb = df.from_mult(space, a), df.from_mult(space, b)
        ctx.expect(df.h_equivalent(fa, fb) == brute, "disagreement with brute force", a=a, b=b, brute=brute)


@register("round-univ-equiv", fields=[[7, 1, 3, 5], [13, 1, 3, 4]])
def _round_univ(ctx: _Ctx) -> None:
    """H_max-form iff round and universal, with D(phi) by exhaustive enumeration."""
    for p, t, d, max_dim in ctx.params["fields"]:
        F = make_field(p, t, d)
        space = PowerClassGroup.of_field(F)
        for m in multisets(space.order, max_dim):
            if not sum(m):
                continue
            a = df.from_mult(space, m)
            D = pw.brute_represented(a).represented
            sim = df.similarity_group(a)
            round_, universal = D <= sim, D == frozenset(range(F.s))
            h_form = set(space.H) <= sim
            ctx.expect(
                h_form == (round_ and universal),
                "H_max-form vs round and universal",
                q=F.q, d=d, mult=m, D=sorted(D), G_phi=sorted(sim),
            )


@register("h-forms-cosets", group=[3], H="max", max_dim=9)
def _h_forms_cosets(ctx: _Ctx) -> None:
    """Every diagonal H-form is a disjoint union of H-cosets; its dimension is a multiple of |H|."""
    space = PowerClassGroup.abstract(ctx.params["group"], 3, ctx.params["H"])
    Hs = len(space.H)
    for m in multisets(space.order, ctx.params["max_dim"]):
        a = df.from_mult(space, m)
        by_def = set(space.H) <= df.similarity_group(a)
        ctx.expect(by_def == df.is_H_form(a), "is_H_form disagrees with the definition", mult=m)
        if by_def:
            ctx.expect(a.dim % Hs == 0, "dimension not a multiple of |H|", mult=m)
            ctx.expect(
                all(len({m[g] for g in C}) == 1 for C in space.cosets()),
                "not a union of cosets", mult=m,
            )


@register("h-decomp", groups=[[3], [4], [2, 2], [6]], max_dim=8)
def _h_decomp(ctx: _Ctx) -> None:
    """Each H-form is an orthogonal sum of shifted coset forms g*N_H (greedy peeling)."""
    for factors in ctx.params["groups"]:
        for H in hsubgroup_choices(factors):
            space = PowerClassGroup.abstract(factors, 3, H)
            for m in multisets(space.order, ctx.params["max_dim"]):
                a = df.from_mult(space, m)
                if not df.is_H_form(a):
                    continue
                rest = list(m)
                for C in space.cosets():
                    while all(rest[g] > 0 for g in C):
                        for g in C:
                            rest[g] -= 1
                ctx.expect(not any(rest), "H-form is not a sum of coset forms", group=factors, H=sorted(H), mult=m)


@register("witt-inverse", groups=[[3], [4], [2, 2]], max_dim=6)
def _witt_inverse(ctx: _Ctx) -> None:
    """witt_neg and the conjugate-sum inverse both make a + (-a) an H-form."""
    for factors in ctx.params["groups"]:
        for H in hsubgroup_choices(factors):
            space = PowerClassGroup.abstract(factors, 3, H)
            for m in multisets(space.order, ctx.params["max_dim"]):
                a = df.from_mult(space, m)
                for name, inv in (("minimal", df.witt_neg(a)), ("conjugate", df.conjugate_inverse(a))):
                    ctx.expect(
                        df.is_H_form(df.osum(a, inv)),
                        "inverse does not cancel", which=name, group=factors, H=sorted(H), mult=m,
                    )


@register("torsion", groups=[[2], [3]], n_max=100)
def _torsion(ctx: _Ctx) -> None:
    """n*<1> is never H-equivalent to 0 (checked by reduction and by lattice membership)."""
    for factors in ctx.params["groups"]:
        space = PowerClassGroup.abstract(factors, 3, "max")
        G = space.group
        basis = lattice.hnf(gr.norm_ideal_rows(G, space.H), G.order)
        for n in range(1, ctx.params["n_max"] + 1):
            a = df.multiple(n, df.from_classes(space, [0]))
            x = GroupRingElement.delta(G, 0) * n
            ctx.expect(not df.h_equivalent(a, df.zero(space)), "torsion by reduction", group=factors, n=n)
            ctx.expect(not lattice.in_lattice(x.coeffs, basis), "torsion by lattice", group=factors, n=n)


@register("witt-real-even", max_dim=12)
def _real_even(ctx: _Ctx) -> None:
    """G = Z/2, H = G: (x, y) -> x - y identifies the Witt ring with Z."""
    space = PowerClassGroup.abstract([2], 3, "max")
    forms = [df.from_mult(space, m) for m in multisets(2, ctx.params["max_dim"])]

    def z(a):
        return a.mult[0] - a.mult[1]

    reps = {}
    for a in forms:
        r = df.h_reduce(a)
        ctx.expect(z(r) == z(a), "reduction changes x - y", mult=a.mult)
        reps.setdefault(z(a), set()).add(tuple(r.mult))
    ctx.expect(all(len(v) == 1 for v in reps.values()), "x - y is not injective on classes")
    top = ctx.params["max_dim"]
    ctx.expect(sorted(reps) == list(range(-top, top + 1)), "x - y is not onto the window")
    for a, b in itertools.product(forms, repeat=2):
        ctx.expect(z(df.h_reduce(df.osum(a, b))) == z(a) + z(b), "sum", a=a.mult, b=b.mult)
        ctx.expect(z(df.h_reduce(df.tensor(a, b))) == z(a) * z(b), "product", a=a.mult, b=b.mult)


@register("i-decomp", field=[7, 1, 3], max_dim=5)
def _i_decomp(ctx: _Ctx) -> None:
    """I-decomposition is a splitting, reduction is idempotent, I-forms are H-forms, W(I) -> W(H) is onto."""
    F = make_field(*ctx.params["field"])
    space = PowerClassGroup.of_field(F)
    forms = [df.from_mult(space, m) for m in multisets(space.order, ctx.params["max_dim"])]
    i_classes, h_classes = {}, set()
    for a in forms:
        red, t = pw.i_decompose(a)
        ctx.expect(df.osum(red, t).mult == a.mult, "not a splitting", mult=a.mult)
        ctx.expect(pw.i_reduce(red).mult == red.mult, "reduction not idempotent", mult=a.mult)
        iso_dp = pw.is_isotropic(a)[0]
        iso_brute = pw.is_isotropic(a, method="brute")[0]
        ctx.expect(iso_dp == iso_brute, "isotropy search disagrees with brute force", mult=a.mult)
        if pw.is_I_form(a):
            ctx.expect(df.is_H_form(a), "I-form that is not an H-form", mult=a.mult)
        i_classes.setdefault(tuple(pw.i_canonical(a).mult), set()).add(tuple(df.h_reduce(a).mult))
        h_classes.add(tuple(df.h_reduce(a).mult))
    image = set().union(*i_classes.values())
    ctx.expect(all(len(v) == 1 for v in i_classes.values()), "W(I) -> W(H) not well defined")
    ctx.expect(image == h_classes, "W(I) -> W(H) not onto", missing=sorted(h_classes - image))


@register("transfer", field=[7, 1, 3], m=2, theta_dim=3, h_form_dim=6)
def _transfer(ctx: _Ctx) -> None:
    """Projection formula at element level, and transfers of H_max-forms are H_max-forms."""
    k = make_field(*ctx.params["field"])
    ext = extend(k, ctx.params["m"])
    l = ext.top
    kspace, lspace = PowerClassGroup.of_field(k), PowerClassGroup.of_field(l)
    for tm in multisets(k.s, ctx.params["theta_dim"]):
        theta = df.from_mult(kspace, tm)
        for c_cls in range(l.s):
            c = l.class_rep(c_cls)
            # left: transfer of theta_l (x) <c>, with products formed in l
            left = sf.transfer(
                df.make(lspace, [l.mul(ext.embed(b), c) for b in theta.coefficients()]), k
            )
            right = sf.tensor_mixed(theta, sf.transfer(df.make(lspace, [c]), k))
            ctx.expect(left == right, "projection formula", theta=tm, c=c)
    for m in multisets(l.s, ctx.params["h_form_dim"]):
        phi = df.from_mult(lspace, m)
        if not df.is_H_form(phi):
            continue
        T = sf.transfer(phi, k)
        stable = all(sf.scale_sep(h, T) == T for h in range(k.s))
        ctx.expect(stable and sf.h_analyze_sep(T).is_H_form, "transfer of an H_max-form", mult=m)


@register("ring-axioms", groups=[[3], [4], [2, 2]], triples=2000, max_dim=6)
def _ring_axioms(ctx: _Ctx) -> None:
    """Commutative ring axioms for Witt classes under sum, product and negation."""
    for factors in ctx.params["groups"]:
        for H in hsubgroup_choices(factors):
            space = PowerClassGroup.abstract(factors, 3, H)
            one = df.WittClass(df.from_classes(space, [0]))
            zero = df.WittClass(df.zero(space))
            for _ in range(ctx.params["triples"]):
                a, b, c = (df.WittClass(_random_form(space, ctx.rng, ctx.params["max_dim"])) for _ in range(3))
                ok = (
                    (a + b) + c == a + (b + c)
                    and a + b == b + a
                    and (a * b) * c == a * (b * c)
                    and a * b == b * a
                    and a * (b + c) == a * b + a * c
                    and a * one == a
                    and a + zero == a
                    and a + (-a) == zero
                )
                ctx.expect(ok, "ring axiom", group=factors, H=sorted(H),
                           a=a.rep.mult, b=b.rep.mult, c=c.rep.mult)


@register("isotropy-cross", fields=[[7, 1, 3, 6], [13, 1, 3, 4], [13, 1, 4, 5]])
def _isotropy_cross(ctx: _Ctx) -> None:
    """Value-set search (with its dim > d shortcut) against plain enumeration."""
    for p, t, d, max_dim in ctx.params["fields"]:
        F = make_field(p, t, d)
        space = PowerClassGroup.of_field(F)
        for m in multisets(space.order, max_dim):
            a = df.from_mult(space, m)
            if F.q ** a.dim > pw.CROSS_CHECK_BUDGET:
                continue
            got, w = pw.is_isotropic(a)
            want, wb = pw.is_isotropic(a, method="brute", budget=pw.CROSS_CHECK_BUDGET)
            ctx.expect(got == want and w == wb, "isotropy disagreement", q=F.q, d=d, mult=m)
            if a.dim > d:
                ctx.expect(want, "more variables than the degree but anisotropic", q=F.q, mult=m)
            prof, brute = pw.represented_classes(a), pw.brute_represented(a)
            ctx.expect(prof.represented == brute.represented, "D(phi) disagreement", q=F.q, mult=m)
