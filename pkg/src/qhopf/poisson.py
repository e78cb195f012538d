"""Commutative Poisson-Hopf engine.

Elements of the deformed function algebra are finite sums of monomials in
the ordinary (non-exponential) generators with ring coefficients; tensors
carry one such block per leg plus a shared scalar part.  Brackets extend
the defining table by bilinearity, the Leibniz rule and the chain rule for
coefficient functions of the exponential-capable generators; coproducts
act as algebra morphisms.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, NamedTuple

from .errors import LegMismatch, NegativeZValuation, NonLinearEImage
from .ring import (
    CoeffElem,
    Q,
    QONE,
    QZERO,
    RingKey,
    _linear_form_power,
    make_key,
    render_coeff,
    render_key,
    unit_key,
)


class PoissonElem:
    """Finite map from ordinary-generator multidegrees to ring coefficients."""

    __slots__ = ("rank", "nord", "terms")

    def __init__(self, rank: int, nord: int, terms: dict | None = None):
        self.rank = rank
        self.nord = nord
        self.terms = {}
        if terms:
            for mdeg, c in terms.items():
                if not c.is_zero():
                    self.terms[mdeg] = c

    @classmethod
    def zero(cls, rank: int, nord: int) -> "PoissonElem":
        return cls(rank, nord)

    @classmethod
    def from_coeff(cls, nord: int, c: CoeffElem) -> "PoissonElem":
        return cls(c.rank, nord, {(0,) * nord: c})

    @classmethod
    def one(cls, rank: int, nord: int) -> "PoissonElem":
        return cls.from_coeff(nord, CoeffElem.one(rank))

    @classmethod
    def ordinary_gen(cls, rank: int, nord: int, pos: int) -> "PoissonElem":
        mdeg = [0] * nord
        mdeg[pos] = 1
        return cls(rank, nord, {tuple(mdeg): CoeffElem.one(rank)})

    def __add__(self, other: "PoissonElem") -> "PoissonElem":
        out = dict(self.terms)
        for mdeg, c in other.terms.items():
            nc = out.get(mdeg)
            nc = c if nc is None else nc + c
            if nc.is_zero():
                out.pop(mdeg, None)
            else:
                out[mdeg] = nc
        res = PoissonElem(self.rank, self.nord)
        res.terms = out
        return res

    def __neg__(self) -> "PoissonElem":
        res = PoissonElem(self.rank, self.nord)
        res.terms = {m: -c for m, c in self.terms.items()}
        return res

    def __sub__(self, other: "PoissonElem") -> "PoissonElem":
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            other = CoeffElem.scalar(self.rank, other)
        if isinstance(other, CoeffElem):
            res = PoissonElem(self.rank, self.nord)
            for mdeg, c in self.terms.items():
                nc = c * other
                if not nc.is_zero():
                    res.terms[mdeg] = nc
            return res
        out: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                mdeg = tuple(a + b for a, b in zip(m1, m2))
                c = c1 * c2
                prev = out.get(mdeg)
                c = c if prev is None else prev + c
                if c.is_zero():
                    out.pop(mdeg, None)
                else:
                    out[mdeg] = c
        res = PoissonElem(self.rank, self.nord)
        res.terms = out
        return res

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "PoissonElem":
        out = PoissonElem.one(self.rank, self.nord)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other) -> bool:
        return isinstance(other, PoissonElem) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset((m, c) for m, c in self.terms.items()))

    def is_zero(self) -> bool:
        return not self.terms

    def __repr__(self):
        return f"PoissonElem<{len(self.terms)} terms>"

    def scalar_part(self) -> CoeffElem:
        return self.terms.get((0,) * self.nord, CoeffElem.zero(self.rank))


def poisson_gen(spec, g: int) -> PoissonElem:
    """The generator with global index g as a PoissonElem."""
    if spec.is_exponential(g):
        return PoissonElem.from_coeff(spec.n_ord, CoeffElem.gen(spec.rank, spec.e_slot(g)))
    return PoissonElem.ordinary_gen(spec.rank, spec.n_ord, spec.ord_pos(g))


def partial(spec, x: PoissonElem, g: int) -> PoissonElem:
    """Partial derivative of x with respect to generator g."""
    res = PoissonElem(spec.rank, spec.n_ord)
    if spec.is_exponential(g):
        slot = spec.e_slot(g)
        for mdeg, c in x.terms.items():
            nc = c.derive(slot)
            if not nc.is_zero():
                res.terms[mdeg] = nc
    else:
        pos = spec.ord_pos(g)
        for mdeg, c in x.terms.items():
            d = mdeg[pos]
            if not d:
                continue
            nm = list(mdeg)
            nm[pos] -= 1
            nm = tuple(nm)
            nc = c * d
            prev = res.terms.get(nm)
            nc = nc if prev is None else prev + nc
            if nc.is_zero():
                res.terms.pop(nm, None)
            else:
                res.terms[nm] = nc
    return res


def p_bracket(spec, x: PoissonElem, y: PoissonElem) -> PoissonElem:
    """Poisson bracket of two elements via the chain/Leibniz expansion.

    {x, y} = sum over generator pairs of dx/dg_i * dy/dg_j * {g_i, g_j}.
    """
    n = len(spec.gen_names)
    out = PoissonElem.zero(spec.rank, spec.n_ord)
    for i in range(n):
        dxi = dyi = None
        for j in range(i + 1, n):
            base = spec.bracket_poisson(i, j)
            if base.is_zero():
                continue
            if dxi is None:
                dxi, dyi = partial(spec, x, i), partial(spec, y, i)
            dxj, dyj = partial(spec, x, j), partial(spec, y, j)
            term = dxi * dyj - dxj * dyi
            if not term.is_zero():
                out = out + term * base
    return out


# -- tensors -----------------------------------------------------------


class TKey(NamedTuple):
    zpow: int
    hpow: int
    hbarw: Fraction
    constw: Fraction
    legs: tuple  # per leg: (inert, polydeg, expw); inert is a multidegree or a word


def _zero_leg(rank: int, nord: int) -> tuple:
    return ((0,) * nord, (0,) * rank, (QZERO,) * rank)


def _combine_leg(a, b):
    return (
        tuple(x + y for x, y in zip(a[0], b[0])),
        tuple(x + y for x, y in zip(a[1], b[1])),
        tuple(x + y for x, y in zip(a[2], b[2])),
    )


class TensorElem:
    """k-leg tensor over the commutative algebra, in canonical flat form.

    Scalar content (z and hbar powers and exponentials of z*hbar and z
    alone) is shared; each leg carries its own multidegree, polynomial
    E-degrees and exponential E-weights.
    """

    __slots__ = ("rank", "nord", "nlegs", "terms")

    def __init__(self, rank: int, nord: int, nlegs: int, terms: dict | None = None):
        self.rank = rank
        self.nord = nord
        self.nlegs = nlegs
        self.terms = {k: q for k, q in (terms or {}).items() if q}

    @classmethod
    def zero(cls, rank, nord, nlegs) -> "TensorElem":
        return cls(rank, nord, nlegs)

    @classmethod
    def one(cls, rank, nord, nlegs) -> "TensorElem":
        key = TKey(0, 0, QZERO, QZERO, tuple(_zero_leg(rank, nord) for _ in range(nlegs)))
        return cls(rank, nord, nlegs, {key: QONE})

    def _acc(self, out: dict, key: TKey, q: Fraction) -> None:
        nq = out.get(key, QZERO) + q
        if nq:
            out[key] = nq
        else:
            out.pop(key, None)

    def __add__(self, other: "TensorElem") -> "TensorElem":
        if self.nlegs != other.nlegs:
            raise LegMismatch(f"{self.nlegs} legs vs {other.nlegs}")
        out = dict(self.terms)
        for key, q in other.terms.items():
            self._acc(out, key, q)
        return TensorElem(self.rank, self.nord, self.nlegs, out)

    def __neg__(self) -> "TensorElem":
        return TensorElem(
            self.rank, self.nord, self.nlegs, {k: -q for k, q in self.terms.items()}
        )

    def __sub__(self, other: "TensorElem") -> "TensorElem":
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            q = Q(other)
            return TensorElem(
                self.rank, self.nord, self.nlegs,
                {k: v * q for k, v in self.terms.items()} if q else None,
            )
        if self.nlegs != other.nlegs:
            raise LegMismatch(f"{self.nlegs} legs vs {other.nlegs}")
        out: dict = {}
        for k1, q1 in self.terms.items():
            for k2, q2 in other.terms.items():
                key = TKey(
                    k1.zpow + k2.zpow,
                    k1.hpow + k2.hpow,
                    k1.hbarw + k2.hbarw,
                    k1.constw + k2.constw,
                    tuple(_combine_leg(a, b) for a, b in zip(k1.legs, k2.legs)),
                )
                self._acc(out, key, q1 * q2)
        return TensorElem(self.rank, self.nord, self.nlegs, out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "TensorElem":
        out = TensorElem.one(self.rank, self.nord, self.nlegs)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other) -> bool:
        return isinstance(other, TensorElem) and self.terms == other.terms

    def is_zero(self) -> bool:
        return not self.terms

    def __repr__(self):
        return f"TensorElem<{self.nlegs} legs, {len(self.terms)} terms>"


def _scalar_key_of(key: TKey, rank: int) -> RingKey:
    return make_key(rank, zpow=key.zpow, hpow=key.hpow, hbarw=key.hbarw, constw=key.constw)


def leg_content(spec, key: TKey, leg: int) -> PoissonElem:
    """The content of one leg as a PoissonElem, without the shared scalar part."""
    mdeg, polydeg, expw = key.legs[leg]
    c = CoeffElem(spec.rank, {make_key(spec.rank, polydeg=polydeg, expw=expw): QONE})
    return PoissonElem(spec.rank, spec.n_ord, {mdeg: c})


def tensor_of(spec, legs: Iterable[PoissonElem], coeff: CoeffElem | None = None, q=1) -> TensorElem:
    """Outer product of PoissonElems with an optional generator-free scalar."""
    legs = list(legs)
    rank, nord = spec.rank, spec.n_ord
    out = TensorElem.one(rank, nord, len(legs)) * Q(q)
    for pos, p in enumerate(legs):
        t = TensorElem.zero(rank, nord, len(legs))
        acc: dict = {}
        for mdeg, c in p.terms.items():
            for rkey, rq in c.terms.items():
                lg = [_zero_leg(rank, nord) for _ in range(len(legs))]
                lg[pos] = (mdeg, rkey.polydeg, rkey.expw)
                key = TKey(rkey.zpow, rkey.hpow, rkey.hbarw, rkey.constw, tuple(lg))
                nq = acc.get(key, QZERO) + rq
                if nq:
                    acc[key] = nq
                else:
                    acc.pop(key, None)
        t.terms = acc
        out = out * t
    if coeff is not None:
        out = scale_by_scalar(out, coeff)
    return out


def scale_by_scalar(t: TensorElem, c: CoeffElem) -> TensorElem:
    """Multiply by a generator-free ring element (z/hbar content only)."""
    out: dict = {}
    for rkey, rq in c.terms.items():
        if any(rkey.polydeg) or any(rkey.expw):
            raise ValueError("tensor scalar must be generator-free")
        for key, q in t.terms.items():
            nk = TKey(
                key.zpow + rkey.zpow,
                key.hpow + rkey.hpow,
                key.hbarw + rkey.hbarw,
                key.constw + rkey.constw,
                key.legs,
            )
            nq = out.get(nk, QZERO) + q * rq
            if nq:
                out[nk] = nq
            else:
                out.pop(nk, None)
    return TensorElem(t.rank, t.nord, t.nlegs, out)


def tensor_bracket(spec, x: TensorElem, y: TensorElem) -> TensorElem:
    """Leg-wise Poisson bracket: {a@b, c@d} = {a,c}@bd + ac@{b,d}, etc."""
    if x.nlegs != y.nlegs:
        raise LegMismatch(f"{x.nlegs} legs vs {y.nlegs}")
    nlegs = x.nlegs
    out = TensorElem.zero(spec.rank, spec.n_ord, nlegs)
    for kx, qx in x.terms.items():
        sx = CoeffElem(spec.rank, {_scalar_key_of(kx, spec.rank): QONE})
        legs_x = [leg_content(spec, kx, l) for l in range(nlegs)]
        for ky, qy in y.terms.items():
            sy = CoeffElem(spec.rank, {_scalar_key_of(ky, spec.rank): QONE})
            legs_y = [leg_content(spec, ky, l) for l in range(nlegs)]
            scalar = sx * sy
            for l in range(nlegs):
                br = p_bracket(spec, legs_x[l], legs_y[l])
                if br.is_zero():
                    continue
                legs = [
                    br if m == l else legs_x[m] * legs_y[m] for m in range(nlegs)
                ]
                out = out + tensor_of(spec, legs, scalar, qx * qy)
    return out


# -- morphisms ----------------------------------------------------------


def _e_image_linear_form(spec, img: TensorElem):
    """Decompose an E-generator image as per-leg linear forms plus a constant.

    Returns (forms, const) with forms[leg][e_slot] rational, or raises
    NonLinearEImage.
    """
    forms = [dict() for _ in range(img.nlegs)]
    const = QZERO
    for key, q in img.terms.items():
        if key.zpow or key.hpow or key.hbarw or key.constw:
            raise NonLinearEImage("image carries z/hbar content")
        degree = 0
        where = None
        for l, (mdeg, polydeg, expw) in enumerate(key.legs):
            if any(expw):
                raise NonLinearEImage("image carries exponential content")
            if any(mdeg):
                raise NonLinearEImage("image of an exponential generator leaves E")
            d = sum(polydeg)
            if d:
                degree += d
                where = (l, polydeg)
        if degree == 0:
            const += q
        elif degree == 1:
            l, polydeg = where
            slot = polydeg.index(1)
            forms[l][slot] = forms[l].get(slot, QZERO) + q
        else:
            raise NonLinearEImage("image of an exponential generator is not linear")
    return forms, const


def apply_morphism(spec, images: dict, x: PoissonElem, nlegs: int) -> TensorElem:
    """Extend generator images to the unique algebra morphism and apply to x."""
    rank, nord = spec.rank, spec.n_ord
    e_forms: dict = {}
    out = TensorElem.zero(rank, nord, nlegs)
    for mdeg, coeff in x.terms.items():
        base = TensorElem.one(rank, nord, nlegs)
        for pos, d in enumerate(mdeg):
            if d:
                base = base * images[spec.ord_global(pos)] ** d
        for rkey, rq in coeff.terms.items():
            t = base
            for slot, d in enumerate(rkey.polydeg):
                if d:
                    t = t * images[spec.e_global(slot)] ** d
            legw = [(QZERO,) * rank for _ in range(nlegs)]
            constw = rkey.constw
            if any(rkey.expw):
                for slot, a in enumerate(rkey.expw):
                    if not a:
                        continue
                    g = spec.e_global(slot)
                    if g not in e_forms:
                        e_forms[g] = _e_image_linear_form(spec, images[g])
                    forms, const = e_forms[g]
                    constw += a * const
                    legw = [
                        tuple(
                            w + a * forms[l].get(s, QZERO) for s, w in enumerate(legw[l])
                        )
                        for l in range(nlegs)
                    ]
            key = TKey(
                rkey.zpow,
                rkey.hpow,
                rkey.hbarw,
                constw,
                tuple(((0,) * nord, (0,) * rank, legw[l]) for l in range(nlegs)),
            )
            piece = TensorElem(rank, nord, nlegs, {key: rq})
            out = out + t * piece
    return out


def coproduct_images(spec) -> dict:
    return {g: spec.coproduct_table[g] for g in range(len(spec.gen_names))}


def apply_coproduct(spec, x: PoissonElem) -> TensorElem:
    return apply_morphism(spec, coproduct_images(spec), x, 2)


def counit_contract(spec, t: TensorElem, leg: int) -> PoissonElem:
    """Apply the zero-evaluation counit to one leg of a 2-leg tensor."""
    if t.nlegs != 2:
        raise LegMismatch("counit contraction expects a 2-leg tensor")
    out = PoissonElem.zero(spec.rank, spec.n_ord)
    other = 1 - leg
    for key, q in t.terms.items():
        mdeg, polydeg, _expw = key.legs[leg]
        if any(mdeg) or any(polydeg):
            continue
        omdeg, opoly, oexpw = key.legs[other]
        rkey = RingKey(key.zpow, key.hpow, opoly, oexpw, key.hbarw, key.constw)
        piece = PoissonElem(spec.rank, spec.n_ord, {omdeg: CoeffElem(spec.rank, {rkey: q})})
        out = out + piece
    return out


def apply_coproduct_to_leg(spec, t: TensorElem, leg: int) -> TensorElem:
    """Replace one leg by its coproduct image, yielding a (k+1)-leg tensor."""
    rank, nord = spec.rank, spec.n_ord
    out = TensorElem.zero(rank, nord, t.nlegs + 1)
    images = coproduct_images(spec)
    for key, q in t.terms.items():
        content = leg_content(spec, key, leg)
        img = apply_morphism(spec, images, content, 2)
        for k2, q2 in img.terms.items():
            legs = key.legs[:leg] + k2.legs + key.legs[leg + 1 :]
            nk = TKey(
                key.zpow + k2.zpow,
                key.hpow + k2.hpow,
                key.hbarw + k2.hbarw,
                key.constw + k2.constw,
                legs,
            )
            out = out + TensorElem(rank, nord, t.nlegs + 1, {nk: q * q2})
    return out


# -- z-expansions --------------------------------------------------------


def _compositions(total: int, parts: int):
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def tensor_z_coefficient(t: TensorElem, n: int) -> TensorElem:
    """Coefficient of z**n after expanding all exponentials in z."""
    rank, nord, nlegs = t.rank, t.nord, t.nlegs
    out: dict = {}
    for key, q in t.terms.items():
        rem = n - key.zpow
        if rem < 0:
            continue
        gkey = make_key(rank, hbarw=key.hbarw, constw=key.constw)
        leg_keys = [make_key(rank, expw=key.legs[l][2]) for l in range(nlegs)]
        for comp in _compositions(rem, 1 + nlegs):
            for _gp, dh, gw in _linear_form_power(gkey, comp[0]):
                if not gw:
                    continue
                stack = [((), QONE)]
                for l in range(nlegs):
                    nxt = []
                    for built, w in stack:
                        for dpoly, _dh2, lw in _linear_form_power(leg_keys[l], comp[1 + l]):
                            if lw:
                                nxt.append((built + (dpoly,), w * lw))
                    stack = nxt
                for built, w in stack:
                    legs = tuple(
                        (
                            key.legs[l][0],
                            tuple(a + b for a, b in zip(key.legs[l][1], built[l])),
                            (QZERO,) * rank,
                        )
                        for l in range(nlegs)
                    )
                    nk = TKey(0, key.hpow + dh, QZERO, QZERO, legs)
                    nq = out.get(nk, QZERO) + q * gw * w
                    if nq:
                        out[nk] = nq
                    else:
                        out.pop(nk, None)
    return TensorElem(rank, nord, nlegs, out)


def _tensor_require_nonneg_z(t: TensorElem) -> None:
    mz = min((k.zpow for k in t.terms), default=0)
    for deg in range(mz, 0):
        bad = tensor_z_coefficient(t, deg)
        if not bad.is_zero():
            raise NegativeZValuation(f"tensor term of z-degree {deg} survives cancellation")


def tensor_z0_limit(t: TensorElem) -> TensorElem:
    _tensor_require_nonneg_z(t)
    return tensor_z_coefficient(t, 0)


def first_order_delta(spec, g: int) -> TensorElem:
    """The z**1 coefficient of the coproduct of generator g (the cocommutator)."""
    t = spec.coproduct_table[g]
    _tensor_require_nonneg_z(t)
    return tensor_z_coefficient(t, 1)


def p_z0_limit(x: PoissonElem) -> PoissonElem:
    """Coefficient-wise z -> 0 limit; result has polynomial coefficients."""
    res = PoissonElem(x.rank, x.nord)
    for mdeg, c in x.terms.items():
        nc = c.z0_limit().to_coeff()
        if not nc.is_zero():
            res.terms[mdeg] = nc
    return res


def primitive_tensor(spec, g: int) -> TensorElem:
    one = PoissonElem.one(spec.rank, spec.n_ord)
    x = poisson_gen(spec, g)
    return tensor_of(spec, [x, one]) + tensor_of(spec, [one, x])


def wedge_tensor(spec, a: PoissonElem, b: PoissonElem) -> TensorElem:
    return tensor_of(spec, [a, b]) - tensor_of(spec, [b, a])


# -- rendering ------------------------------------------------------------


def render_poisson(x: PoissonElem, enames, onames) -> str:
    if x.is_zero():
        return "0"
    chunks = []
    for mdeg in sorted(x.terms):
        c = x.terms[mdeg]
        gens = "*".join(
            onames[i] if d == 1 else f"{onames[i]}^{d}" for i, d in enumerate(mdeg) if d
        )
        coeff = render_coeff(c, enames)
        if not gens:
            term = coeff
        elif coeff == "1":
            term = gens
        elif coeff == "-1":
            term = f"-{gens}"
        elif len(c.terms) == 1:
            term = f"{coeff}*{gens}"
        else:
            term = f"({coeff})*{gens}"
        if not chunks:
            chunks.append(term)
        elif term.startswith("-"):
            chunks.append(" - " + term[1:])
        else:
            chunks.append(" + " + term)
    return "".join(chunks)


def _render_leg(leg, enames, onames) -> str:
    mdeg, polydeg, expw = leg
    key = RingKey(0, 0, polydeg, expw, QZERO, QZERO)
    pieces = []
    coeff = render_key(key, enames)
    if coeff != "1":
        pieces.append(coeff)
    for i, d in enumerate(mdeg):
        if d:
            pieces.append(onames[i] if d == 1 else f"{onames[i]}^{d}")
    return "*".join(pieces) if pieces else "1"


def render_tensor(t: TensorElem, enames, onames) -> str:
    if t.is_zero():
        return "0"
    chunks = []
    for key in sorted(t.terms):
        q = t.terms[key]
        skey = RingKey(key.zpow, key.hpow, (0,) * t.rank, (QZERO,) * t.rank, key.hbarw, key.constw)
        scalar = render_key(skey, enames, q)
        legs = " @ ".join(_render_leg(leg, enames, onames) for leg in key.legs)
        term = legs if scalar == "1" else (f"-{legs}" if scalar == "-1" else f"{scalar}*{legs}")
        if not chunks:
            chunks.append(term)
        elif term.startswith("-"):
            chunks.append(" - " + term[1:])
        else:
            chunks.append(" + " + term)
    return "".join(chunks)
