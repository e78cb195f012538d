"""Check orchestration: named identity checks, suites and structured reports.

Every check kind maps to one engine routine and runs over its full subject
range (pairs, triples, generators or casimirs).  A failing comparison
carries the canonical rendering of the nonzero residual, which re-evaluates
to the same element when parsed back.  Randomized checks are seeded, so
reports are reproducible up to their timing fields.
"""

from __future__ import annotations

import itertools
import json
import random
import time
from dataclasses import dataclass, field

from . import bialgebra as _bial
from .algspec import AlgebraSpec, LieBialgebraData
from .catalog import catalog_load
from .errors import FuelExhausted, NegativeHbarValuation, NegativeZValuation
from .parser import eval_expression
from .poisson import (
    PoissonElem,
    apply_coproduct,
    apply_coproduct_to_leg,
    counit_contract,
    first_order_delta,
    p_bracket,
    p_z0_limit,
    poisson_gen,
    primitive_tensor,
    render_poisson,
    render_tensor,
    tensor_bracket,
    tensor_z0_limit,
)
from .quantum import (
    DEFAULT_FUEL,
    QuantumElem,
    divide_hbar,
    gen_quantum,
    hbar_limit_bracket,
    hbar_limit_elem,
    normal_order,
    q_apply_coproduct,
    q_commutator,
    q_z0_limit,
    qt_commutator,
    qt_from_raw,
    qt_hbar_limit,
    qt_primitive,
    qt_z0_limit,
    render_qtensor,
    render_quantum,
    rescale_map,
    subst_hbar_one,
)
from .ring import CoeffElem, Q

SCHEMA_VERSION = 1

CHECK_KINDS = (
    "lie-jacobi",
    "cojacobi",
    "cocycle",
    "poisson-jacobi",
    "leibniz",
    "hopf-homomorphism",
    "coassociativity",
    "counit",
    "casimir-centrality",
    "first-order-delta",
    "quantum-jacobi",
    "quantum-casimir",
    "casimir-forms-equal",
    "hbar-limit-brackets",
    "hbar-limit-coproduct",
    "hbar-limit-casimir",
    "z0-limit",
    "serre",
    "quantum-serre",
    "reabsorption",
    "limit-noncommutation",
    "confluence-probe",
)

HEAVY_NOTE = "heavy: su3 quantum coproduct homomorphism runs in the full suite only"


@dataclass
class CheckResult:
    kind: str
    algebra: str
    subject: str
    status: str  # "pass" | "fail" | "warning"
    witness: str | None = None
    detail: str | None = None
    elapsed_ms: float = 0.0

    def to_dict(self, include_timing: bool = True) -> dict:
        out = {
            "kind": self.kind,
            "algebra": self.algebra,
            "subject": self.subject,
            "status": self.status,
            "witness": self.witness,
            "detail": self.detail,
        }
        if include_timing:
            out["elapsed_ms"] = round(self.elapsed_ms, 3)
        return out


class AlgebraContext:
    """Both catalog faces of one algebra plus run options."""

    def __init__(self, name: str, quantum: AlgebraSpec, poisson: AlgebraSpec,
                 fuel: int = DEFAULT_FUEL, seed: int = 2024):
        self.name = name
        self.quantum = quantum
        self.poisson = poisson
        self.fuel = fuel
        self.seed = seed

    @classmethod
    def from_catalog(cls, name: str, fuel: int = DEFAULT_FUEL, seed: int = 2024):
        return cls(name, catalog_load(name, "quantum"), catalog_load(name, "poisson"), fuel, seed)


class Report:
    def __init__(self, algebra: str, suite: str, fuel: int, results: list):
        self.algebra = algebra
        self.suite = suite
        self.fuel = fuel
        self.results = results

    @property
    def ok(self) -> bool:
        return all(r.status != "fail" for r in self.results)

    def counts(self) -> dict:
        out = {"pass": 0, "fail": 0, "warning": 0}
        for r in self.results:
            out[r.status] += 1
        return out

    def to_dict(self, include_timing: bool = True) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "tool": "qhopf",
            "algebra": self.algebra,
            "suite": self.suite,
            "fuel": self.fuel,
            "status": "pass" if self.ok else "fail",
            "counts": self.counts(),
            "checks": [r.to_dict(include_timing) for r in self.results],
        }

    def to_json(self, include_timing: bool = True) -> str:
        return json.dumps(self.to_dict(include_timing), indent=2)

    def render_text(self, verbose: bool = False) -> str:
        lines = []
        for r in self.results:
            if r.status == "pass" and not verbose:
                continue
            line = f"{r.status.upper():7s} {r.kind:22s} {r.algebra:16s} {r.subject}"
            lines.append(line)
            if r.witness:
                lines.append(f"        residual: {r.witness}")
            if r.detail:
                lines.append(f"        detail:   {r.detail}")
        c = self.counts()
        lines.append(
            f"{self.algebra} [{self.suite}]: {c['pass']} passed, {c['fail']} failed, "
            f"{c['warning']} warnings"
        )
        return "\n".join(lines)


def _res(kind, ctx, subject, passed, witness=None, detail=None, t0=None, warning=False):
    status = "pass" if passed else ("warning" if warning else "fail")
    elapsed = (time.perf_counter() - t0) * 1000 if t0 is not None else 0.0
    return CheckResult(kind, ctx.name, subject, status, witness, detail, elapsed)


def _pairs(spec):
    return itertools.combinations(range(len(spec.gen_names)), 2)


def _triples(spec):
    return itertools.combinations(range(len(spec.gen_names)), 3)


# -- linear bialgebra checks -------------------------------------------------


def _check_linear(kind, ctx):
    fn = {
        "lie-jacobi": _bial.lie_jacobi_check,
        "cojacobi": _bial.cojacobi_check,
        "cocycle": _bial.cocycle_check,
    }[kind]
    t0 = time.perf_counter()
    violations = fn(LieBialgebraData.from_spec(ctx.poisson))
    if not violations:
        return [_res(kind, ctx, "all", True, t0=t0)]
    return [_res(kind, ctx, "all", False, detail="; ".join(violations), t0=t0)]


# -- poisson checks -----------------------------------------------------------


def _check_poisson_jacobi(ctx):
    sp = ctx.poisson
    gens = [poisson_gen(sp, g) for g in range(len(sp.gen_names))]
    out = []
    for i, j, k in _triples(sp):
        t0 = time.perf_counter()
        s = p_bracket(sp, gens[i], p_bracket(sp, gens[j], gens[k]))
        s = s + p_bracket(sp, gens[j], p_bracket(sp, gens[k], gens[i]))
        s = s + p_bracket(sp, gens[k], p_bracket(sp, gens[i], gens[j]))
        subject = f"triple:({sp.gen_names[i]},{sp.gen_names[j]},{sp.gen_names[k]})"
        out.append(
            _res("poisson-jacobi", ctx, subject, s.is_zero(),
                 witness=None if s.is_zero() else render_poisson(s, sp.e_names, sp.ord_names),
                 t0=t0)
        )
    return out


def _random_poisson(sp, rng) -> PoissonElem:
    out = PoissonElem.zero(sp.rank, sp.n_ord)
    for _ in range(rng.randint(1, 2)):
        q = Q(rng.randint(-3, 3), rng.randint(1, 2))
        if not q:
            q = Q(1)
        c = CoeffElem.monomial(
            sp.rank,
            q,
            zpow=rng.randint(0, 1),
            hpow=rng.randint(0, 1),
            polydeg=[rng.randint(0, 1) for _ in range(sp.rank)],
            expw=[Q(rng.choice((-1, 0, 0, 1)), rng.choice((1, 2))) for _ in range(sp.rank)],
        )
        mdeg = tuple(rng.choice((0, 0, 1)) for _ in range(sp.n_ord))
        out = out + PoissonElem(sp.rank, sp.n_ord, {mdeg: c})
    return out


def _check_leibniz(ctx, cases: int = 20):
    sp = ctx.poisson
    rng = random.Random(ctx.seed)
    out = []
    for case in range(cases):
        t0 = time.perf_counter()
        x, y, w = (_random_poisson(sp, rng) for _ in range(3))
        lhs = p_bracket(sp, x, y * w)
        rhs = p_bracket(sp, x, y) * w + y * p_bracket(sp, x, w)
        diff = lhs - rhs
        out.append(
            _res("leibniz", ctx, f"case:{case}", diff.is_zero(),
                 witness=None if diff.is_zero() else render_poisson(diff, sp.e_names, sp.ord_names),
                 t0=t0)
        )
    return out


def _check_hopf_homomorphism(ctx, include_heavy: bool):
    sp = ctx.poisson
    out = []
    gens = [poisson_gen(sp, g) for g in range(len(sp.gen_names))]
    for i, j in _pairs(sp):
        t0 = time.perf_counter()
        lhs = apply_coproduct(sp, p_bracket(sp, gens[i], gens[j]))
        rhs = tensor_bracket(sp, sp.coproduct_table[i], sp.coproduct_table[j])
        diff = lhs - rhs
        subject = f"poisson:({sp.gen_names[i]},{sp.gen_names[j]})"
        out.append(
            _res("hopf-homomorphism", ctx, subject, diff.is_zero(),
                 witness=None if diff.is_zero() else render_tensor(diff, sp.e_names, sp.ord_names),
                 t0=t0)
        )
    sq = ctx.quantum
    if ctx.name == "su3" and not include_heavy:
        return out
    qgens = [gen_quantum(sq, g) for g in range(len(sq.gen_names))]
    cop = {g: qt_from_raw(sq, sq.coproduct_table[g], ctx.fuel) for g in range(len(sq.gen_names))}
    for i, j in _pairs(sq):
        t0 = time.perf_counter()
        subject = f"quantum:({sq.gen_names[i]},{sq.gen_names[j]})"
        try:
            lhs = qt_commutator(sq, cop[i], cop[j], ctx.fuel)
            rhs = q_apply_coproduct(sq, q_commutator(sq, qgens[i], qgens[j], ctx.fuel), ctx.fuel)
        except FuelExhausted as e:
            out.append(_res("hopf-homomorphism", ctx, subject, False, detail=str(e), t0=t0))
            continue
        diff = lhs - rhs
        out.append(
            _res("hopf-homomorphism", ctx, subject, diff.is_zero(),
                 witness=None if diff.is_zero() else render_qtensor(diff, sq.e_names, sq.ord_names),
                 t0=t0)
        )
    return out


def _check_coassociativity(ctx):
    sp = ctx.poisson
    out = []
    for g in range(len(sp.gen_names)):
        t0 = time.perf_counter()
        t = sp.coproduct_table[g]
        diff = apply_coproduct_to_leg(sp, t, 0) - apply_coproduct_to_leg(sp, t, 1)
        out.append(
            _res("coassociativity", ctx, f"generator:{sp.gen_names[g]}", diff.is_zero(),
                 witness=None if diff.is_zero() else render_tensor(diff, sp.e_names, sp.ord_names),
                 t0=t0)
        )
    return out


def _check_counit(ctx):
    sp = ctx.poisson
    out = []
    for g in range(len(sp.gen_names)):
        t0 = time.perf_counter()
        t = sp.coproduct_table[g]
        x = poisson_gen(sp, g)
        left = counit_contract(sp, t, 0) - x
        right = counit_contract(sp, t, 1) - x
        ok = left.is_zero() and right.is_zero()
        bad = left if not left.is_zero() else right
        out.append(
            _res("counit", ctx, f"generator:{sp.gen_names[g]}", ok,
                 witness=None if ok else render_poisson(bad, sp.e_names, sp.ord_names),
                 t0=t0)
        )
    return out


def _check_casimir_centrality(ctx):
    sp = ctx.poisson
    out = []
    gens = [poisson_gen(sp, g) for g in range(len(sp.gen_names))]
    for cname, C in sp.casimirs:
        for g, x in enumerate(gens):
            t0 = time.perf_counter()
            br = p_bracket(sp, C, x)
            out.append(
                _res("casimir-centrality", ctx, f"{cname}/{sp.gen_names[g]}", br.is_zero(),
                     witness=None if br.is_zero() else render_poisson(br, sp.e_names, sp.ord_names),
                     t0=t0)
            )
    return out


def _check_first_order_delta(ctx):
    sp = ctx.poisson
    out = []
    for g in range(len(sp.gen_names)):
        t0 = time.perf_counter()
        diff = first_order_delta(sp, g) - sp.cocommutator_table[g]
        out.append(
            _res("first-order-delta", ctx, f"generator:{sp.gen_names[g]}", diff.is_zero(),
                 witness=None if diff.is_zero() else render_tensor(diff, sp.e_names, sp.ord_names),
                 t0=t0)
        )
    return out


# -- quantum checks -----------------------------------------------------------


def _check_quantum_jacobi(ctx):
    sq = ctx.quantum
    out = []
    gens = [gen_quantum(sq, g) for g in range(len(sq.gen_names))]
    for i, j in _pairs(sq):
        t0 = time.perf_counter()
        subject = f"pair:({sq.gen_names[i]},{sq.gen_names[j]})"
        try:
            diff = q_commutator(sq, gens[i], gens[j], ctx.fuel) - normal_order(
                sq, sq.bracket_quantum_raw(i, j), ctx.fuel
            )
        except FuelExhausted as e:
            out.append(_res("quantum-jacobi", ctx, subject, False, detail=str(e), t0=t0))
            continue
        out.append(
            _res("quantum-jacobi", ctx, subject, diff.is_zero(),
                 witness=None if diff.is_zero() else render_quantum(diff, sq.e_names, sq.ord_names),
                 t0=t0)
        )
    for i, j, k in _triples(sq):
        t0 = time.perf_counter()
        subject = f"triple:({sq.gen_names[i]},{sq.gen_names[j]},{sq.gen_names[k]})"
        try:
            s = q_commutator(sq, gens[i], q_commutator(sq, gens[j], gens[k], ctx.fuel), ctx.fuel)
            s = s + q_commutator(sq, gens[j], q_commutator(sq, gens[k], gens[i], ctx.fuel), ctx.fuel)
            s = s + q_commutator(sq, gens[k], q_commutator(sq, gens[i], gens[j], ctx.fuel), ctx.fuel)
        except FuelExhausted as e:
            out.append(_res("quantum-jacobi", ctx, subject, False, detail=str(e), t0=t0))
            continue
        out.append(
            _res("quantum-jacobi", ctx, subject, s.is_zero(),
                 witness=None if s.is_zero() else render_quantum(s, sq.e_names, sq.ord_names),
                 t0=t0)
        )
    return out


def _check_quantum_casimir(ctx):
    sq = ctx.quantum
    out = []
    gens = [gen_quantum(sq, g) for g in range(len(sq.gen_names))]
    for cname, raw in sq.casimirs:
        C = normal_order(sq, raw, ctx.fuel)
        for g, x in enumerate(gens):
            t0 = time.perf_counter()
            br = q_commutator(sq, C, x, ctx.fuel)
            out.append(
                _res("quantum-casimir", ctx, f"{cname}/{sq.gen_names[g]}", br.is_zero(),
                     witness=None if br.is_zero() else render_quantum(br, sq.e_names, sq.ord_names),
                     t0=t0)
            )
    return out


def _check_casimir_forms_equal(ctx):
    sq = ctx.quantum
    if len(sq.casimirs) < 2:
        return []
    t0 = time.perf_counter()
    forms = [(n, normal_order(sq, raw, ctx.fuel)) for n, raw in sq.casimirs]
    base_name, base = forms[0]
    out = []
    for n, other in forms[1:]:
        diff = other - base
        out.append(
            _res("casimir-forms-equal", ctx, f"{base_name}=={n}", diff.is_zero(),
                 witness=None if diff.is_zero() else render_quantum(diff, sq.e_names, sq.ord_names),
                 t0=t0)
        )
        t0 = time.perf_counter()
    return out


def _check_hbar_limit_brackets(ctx):
    sq, sp = ctx.quantum, ctx.poisson
    gens = [gen_quantum(sq, g) for g in range(len(sq.gen_names))]
    out = []
    for i, j in _pairs(sq):
        t0 = time.perf_counter()
        subject = f"pair:({sq.gen_names[i]},{sq.gen_names[j]})"
        try:
            lim = hbar_limit_bracket(sq, sp, gens[i], gens[j], ctx.fuel)
        except (NegativeHbarValuation, FuelExhausted) as e:
            out.append(_res("hbar-limit-brackets", ctx, subject, False, detail=str(e), t0=t0))
            continue
        diff = lim - sp.bracket_poisson(i, j)
        out.append(
            _res("hbar-limit-brackets", ctx, subject, diff.is_zero(),
                 witness=None if diff.is_zero() else render_poisson(diff, sp.e_names, sp.ord_names),
                 t0=t0)
        )
    return out


def _check_hbar_limit_coproduct(ctx):
    sq, sp = ctx.quantum, ctx.poisson
    out = []
    for g in range(len(sq.gen_names)):
        t0 = time.perf_counter()
        subject = f"generator:{sq.gen_names[g]}"
        try:
            lim = qt_hbar_limit(sq, sp, qt_from_raw(sq, sq.coproduct_table[g], ctx.fuel))
        except (NegativeHbarValuation, FuelExhausted) as e:
            out.append(_res("hbar-limit-coproduct", ctx, subject, False, detail=str(e), t0=t0))
            continue
        diff = lim - sp.coproduct_table[g]
        out.append(
            _res("hbar-limit-coproduct", ctx, subject, diff.is_zero(),
                 witness=None if diff.is_zero() else render_tensor(diff, sp.e_names, sp.ord_names),
                 t0=t0)
        )
    return out


def _check_hbar_limit_casimir(ctx):
    sq, sp = ctx.quantum, ctx.poisson
    if not sq.casimirs:
        return []
    out = []
    for idx, (cname, raw) in enumerate(sq.casimirs):
        t0 = time.perf_counter()
        if len(sp.casimirs) == 1:
            target_name, target = sp.casimirs[0]
        elif len(sp.casimirs) == len(sq.casimirs):
            target_name, target = sp.casimirs[idx]
        else:
            out.append(
                _res("hbar-limit-casimir", ctx, cname, False,
                     detail="no matching commutative casimir", t0=t0)
            )
            continue
        try:
            lim = hbar_limit_elem(sq, sp, normal_order(sq, raw, ctx.fuel))
        except (NegativeHbarValuation, FuelExhausted) as e:
            out.append(_res("hbar-limit-casimir", ctx, cname, False, detail=str(e), t0=t0))
            continue
        diff = lim - target
        out.append(
            _res("hbar-limit-casimir", ctx, f"{cname}->{target_name}", diff.is_zero(),
                 witness=None if diff.is_zero() else render_poisson(diff, sp.e_names, sp.ord_names),
                 t0=t0)
        )
    return out


def _linear_target_poisson(sp, i, j) -> PoissonElem:
    vec = sp.linear_bracket(i, j)
    out = PoissonElem.zero(sp.rank, sp.n_ord)
    for g, q in enumerate(vec):
        if q:
            out = out + poisson_gen(sp, g) * q
    return out


def _linear_target_quantum(sq, i, j) -> QuantumElem:
    vec = sq.linear_bracket(i, j)
    hbar = CoeffElem.monomial(sq.rank, 1, hpow=1)
    out = QuantumElem.zero(sq.rank)
    for g, q in enumerate(vec):
        if q:
            t = gen_quantum(sq, g)
            out = out + QuantumElem(sq.rank, {w: c * hbar * q for w, c in t.terms.items()})
    return out


def _check_z0_limit(ctx):
    sq, sp = ctx.quantum, ctx.poisson
    out = []
    for i, j in _pairs(sp):
        t0 = time.perf_counter()
        subject = f"poisson:({sp.gen_names[i]},{sp.gen_names[j]})"
        try:
            lim = p_z0_limit(sp.bracket_poisson(i, j))
            diff = lim - p_z0_limit(_linear_target_poisson(sp, i, j))
            out.append(
                _res("z0-limit", ctx, subject, diff.is_zero(),
                     witness=None if diff.is_zero() else render_poisson(diff, sp.e_names, sp.ord_names),
                     t0=t0)
            )
        except NegativeZValuation as e:
            out.append(_res("z0-limit", ctx, subject, False, detail=str(e), t0=t0))
        t0 = time.perf_counter()
        subject = f"quantum:({sq.gen_names[i]},{sq.gen_names[j]})"
        try:
            nf = normal_order(sq, sq.bracket_quantum_raw(i, j), ctx.fuel)
            diff = q_z0_limit(nf) - _linear_target_quantum(sq, i, j)
            out.append(
                _res("z0-limit", ctx, subject, diff.is_zero(),
                     witness=None if diff.is_zero() else render_quantum(diff, sq.e_names, sq.ord_names),
                     t0=t0)
            )
        except (NegativeZValuation, FuelExhausted) as e:
            out.append(_res("z0-limit", ctx, subject, False, detail=str(e), t0=t0))
    for g in range(len(sp.gen_names)):
        t0 = time.perf_counter()
        subject = f"poisson-coproduct:{sp.gen_names[g]}"
        diff = tensor_z0_limit(sp.coproduct_table[g]) - primitive_tensor(sp, g)
        out.append(
            _res("z0-limit", ctx, subject, diff.is_zero(),
                 witness=None if diff.is_zero() else render_tensor(diff, sp.e_names, sp.ord_names),
                 t0=t0)
        )
        t0 = time.perf_counter()
        subject = f"quantum-coproduct:{sq.gen_names[g]}"
        diff2 = qt_z0_limit(qt_from_raw(sq, sq.coproduct_table[g], ctx.fuel)) - qt_primitive(sq, g)
        out.append(
            _res("z0-limit", ctx, subject, diff2.is_zero(),
                 witness=None if diff2.is_zero() else render_qtensor(diff2, sq.e_names, sq.ord_names),
                 t0=t0)
        )
    return out


_SERRE_PAIRS = (("F12", "F23"), ("F23", "F12"), ("F21", "F32"), ("F32", "F21"))


def _check_serre(ctx):
    sp = ctx.poisson
    if any(n not in sp.gen_names for pair in _SERRE_PAIRS for n in pair):
        return []
    out = []
    for a, b in _SERRE_PAIRS:
        t0 = time.perf_counter()
        xi = poisson_gen(sp, sp.gen_index(a))
        xj = poisson_gen(sp, sp.gen_index(b))
        lhs = p_bracket(sp, xi, p_bracket(sp, xi, xj))
        rhs = eval_expression(sp, f"z^2 * {a}^2 * {b}")
        diff = lhs - rhs
        out.append(
            _res("serre", ctx, f"({a},{b})", diff.is_zero(),
                 witness=None if diff.is_zero() else render_poisson(diff, sp.e_names, sp.ord_names),
                 t0=t0)
        )
    return out


def _check_quantum_serre(ctx):
    sq = ctx.quantum
    if any(n not in sq.gen_names for pair in _SERRE_PAIRS for n in pair):
        return []
    out = []
    for a, b in _SERRE_PAIRS:
        t0 = time.perf_counter()
        xi = gen_quantum(sq, sq.gen_index(a))
        xj = gen_quantum(sq, sq.gen_index(b))
        lhs = q_commutator(sq, xi, q_commutator(sq, xi, xj, ctx.fuel), ctx.fuel)
        rhs = normal_order(sq, eval_expression(sq, f"4*sinh(z*hbar/2)^2 * {a}*{b}*{a}"), ctx.fuel)
        diff = lhs - rhs
        out.append(
            _res("quantum-serre", ctx, f"({a},{b})", diff.is_zero(),
                 witness=None if diff.is_zero() else render_quantum(diff, sq.e_names, sq.ord_names),
                 t0=t0)
        )
    return out


def _check_reabsorption(ctx):
    sq = ctx.quantum
    out = []
    for (i, j), _raw in sq.bracket_entries:
        if i == j:
            continue
        t0 = time.perf_counter()
        subject = f"pair:({sq.gen_names[i]},{sq.gen_names[j]})"
        try:
            nf = normal_order(sq, sq.bracket_quantum_raw(i, j), ctx.fuel)
            rescaled = divide_hbar(rescale_map(sq, nf), 2)
        except (ValueError, FuelExhausted) as e:
            out.append(_res("reabsorption", ctx, subject, False, detail=str(e), t0=t0))
            continue
        hbar_free = all(c.is_hbar_free() for c in rescaled.terms.values())
        diff = rescaled - subst_hbar_one(nf)
        ok = hbar_free and diff.is_zero()
        detail = None if hbar_free else "rescaled relation still carries hbar"
        out.append(
            _res("reabsorption", ctx, subject, ok,
                 witness=None if diff.is_zero() else render_quantum(diff, sq.e_names, sq.ord_names),
                 detail=detail, t0=t0)
        )
    return out


def _check_limit_noncommutation(ctx):
    """Expected-error check: after reabsorption the Poisson limit must not exist."""
    sq, sp = ctx.quantum, ctx.poisson
    out = []
    for (i, j), _raw in sq.bracket_entries:
        if i == j:
            continue
        nf = normal_order(sq, sq.bracket_quantum_raw(i, j), ctx.fuel)
        if nf.is_zero():
            continue
        t0 = time.perf_counter()
        subject = f"pair:({sq.gen_names[i]},{sq.gen_names[j]})"
        rescaled = divide_hbar(rescale_map(sq, nf), 2)
        try:
            hbar_limit_elem(sq, sp, divide_hbar(rescaled, 1))
        except NegativeHbarValuation:
            out.append(_res("limit-noncommutation", ctx, subject, True, t0=t0))
            continue
        out.append(
            _res("limit-noncommutation", ctx, subject, False,
                 detail="limit after reabsorption unexpectedly exists", t0=t0)
        )
    return out


def _check_confluence_probe(ctx):
    """Re-normalize with randomized rule choice and compare; warning only."""
    sq = ctx.quantum
    nord = sq.n_ord
    rng = random.Random(ctx.seed)
    words = [(a, b) for a in range(nord) for b in range(nord)]
    words += [tuple(rng.randrange(nord) for _ in range(3)) for _ in range(10)]
    out = []
    for word in words:
        t0 = time.perf_counter()
        raw = [(Q(1), word)]
        det = normal_order(sq, raw, ctx.fuel)
        alt = normal_order(sq, raw, ctx.fuel, rng=random.Random(rng.randrange(2**30)))
        agree = det == alt
        subject = "word:" + "*".join(sq.ord_names[i] for i in word)
        out.append(
            _res("confluence-probe", ctx, subject, agree,
                 detail=None if agree else "strategies disagree; rewrite system may be non-confluent",
                 t0=t0, warning=True)
        )
    return out


# -- dispatch -----------------------------------------------------------------


def run_check(kind: str, ctx: AlgebraContext, include_heavy: bool = True) -> list:
    if kind in ("lie-jacobi", "cojacobi", "cocycle"):
        return _check_linear(kind, ctx)
    fn = {
        "poisson-jacobi": _check_poisson_jacobi,
        "leibniz": _check_leibniz,
        "coassociativity": _check_coassociativity,
        "counit": _check_counit,
        "casimir-centrality": _check_casimir_centrality,
        "first-order-delta": _check_first_order_delta,
        "quantum-jacobi": _check_quantum_jacobi,
        "quantum-casimir": _check_quantum_casimir,
        "casimir-forms-equal": _check_casimir_forms_equal,
        "hbar-limit-brackets": _check_hbar_limit_brackets,
        "hbar-limit-coproduct": _check_hbar_limit_coproduct,
        "hbar-limit-casimir": _check_hbar_limit_casimir,
        "z0-limit": _check_z0_limit,
        "serre": _check_serre,
        "quantum-serre": _check_quantum_serre,
        "reabsorption": _check_reabsorption,
        "limit-noncommutation": _check_limit_noncommutation,
        "confluence-probe": _check_confluence_probe,
    }.get(kind)
    if fn is None:
        if kind == "hopf-homomorphism":
            return _check_hopf_homomorphism(ctx, include_heavy)
        raise ValueError(f"unknown check kind {kind!r}")
    return fn(ctx)


LIMIT_KINDS = ("hbar-limit-brackets", "hbar-limit-coproduct", "hbar-limit-casimir", "z0-limit")


def run_suite(ctx: AlgebraContext, kinds=None, parallelism: int = 1,
              suite: str = "default") -> Report:
    """Run named checks (default: all) and merge results deterministically."""
    include_heavy = suite == "full"
    if kinds is None:
        kinds = CHECK_KINDS
    kinds = list(kinds)
    if parallelism > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=parallelism) as pool:
            chunks = list(pool.map(lambda k: run_check(k, ctx, include_heavy), kinds))
    else:
        chunks = [run_check(k, ctx, include_heavy) for k in kinds]
    results = [r for chunk in chunks for r in chunk]
    order = {k: i for i, k in enumerate(CHECK_KINDS)}
    results.sort(key=lambda r: (order.get(r.kind, 99), r.subject))
    return Report(ctx.name, suite, ctx.fuel, results)
