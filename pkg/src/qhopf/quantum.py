"""Noncommutative engine: word arithmetic and normal ordering by rewriting.

An element is a finite sum of (ring coefficient) * (word of ordinary
generators); all dependence on the exponential-capable generators lives in
the coefficient.  Unnormalized values are "raw" term lists
``[(rational, atoms)]`` where each atom is either an ordinary-generator
position (int) or a ring monomial key.  Normal ordering moves coefficient
atoms to the far left (by shift or differential reorder rules) and sorts
adjacent out-of-order letters against the bracket table, deterministically
leftmost-first and bounded by a fuel budget.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, NamedTuple

from .errors import FuelExhausted, LegMismatch, NegativeZValuation
from .poisson import PoissonElem, TensorElem, TKey
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

DEFAULT_FUEL = 10**6


class QuantumElem:
    """Finite map from normal-ordered words to ring coefficients."""

    __slots__ = ("rank", "terms")

    def __init__(self, rank: int, terms: dict | None = None):
        self.rank = rank
        self.terms = {}
        if terms:
            for word, c in terms.items():
                if not c.is_zero():
                    self.terms[word] = c

    @classmethod
    def zero(cls, rank: int) -> "QuantumElem":
        return cls(rank)

    @classmethod
    def from_coeff(cls, c: CoeffElem) -> "QuantumElem":
        return cls(c.rank, {(): c})

    @classmethod
    def one(cls, rank: int) -> "QuantumElem":
        return cls.from_coeff(CoeffElem.one(rank))

    def __add__(self, other: "QuantumElem") -> "QuantumElem":
        out = dict(self.terms)
        for word, c in other.terms.items():
            nc = out.get(word)
            nc = c if nc is None else nc + c
            if nc.is_zero():
                out.pop(word, None)
            else:
                out[word] = nc
        res = QuantumElem(self.rank)
        res.terms = out
        return res

    def __neg__(self) -> "QuantumElem":
        res = QuantumElem(self.rank)
        res.terms = {w: -c for w, c in self.terms.items()}
        return res

    def __sub__(self, other: "QuantumElem") -> "QuantumElem":
        return self + (-other)

    def __eq__(self, other) -> bool:
        return isinstance(other, QuantumElem) and self.terms == other.terms

    def is_zero(self) -> bool:
        return not self.terms

    def __repr__(self):
        return f"QuantumElem<{len(self.terms)} words>"


def gen_quantum(spec, g: int) -> QuantumElem:
    if spec.is_exponential(g):
        return QuantumElem.from_coeff(CoeffElem.gen(spec.rank, spec.e_slot(g)))
    return QuantumElem(spec.rank, {(spec.ord_pos(g),): CoeffElem.one(spec.rank)})


# -- raw term lists ------------------------------------------------------


def as_raw(spec, x) -> list:
    if isinstance(x, list):
        return x
    if isinstance(x, QuantumElem):
        out = []
        for word, c in x.terms.items():
            for key, q in c.terms.items():
                out.append((q, (key,) + word))
        return out
    if isinstance(x, CoeffElem):
        return [(q, (key,)) for key, q in x.terms.items()]
    raise TypeError(f"not a quantum value: {type(x).__name__}")


def raw_mul(x: list, y: list) -> list:
    return [(qx * qy, ax + ay) for qx, ax in x for qy, ay in y]


def raw_scale(x: list, q) -> list:
    q = Q(q)
    return [(qt * q, atoms) for qt, atoms in x] if q else []


def q_mul(spec, x, y) -> list:
    """Raw product; reordering is deferred to normal_order."""
    return raw_mul(as_raw(spec, x), as_raw(spec, y))


def _render_raw_term(spec, q: Fraction, atoms) -> str:
    pieces = [str(q)]
    for a in atoms:
        if isinstance(a, RingKey):
            pieces.append(render_key(a, spec.e_names))
        else:
            pieces.append(spec.ord_names[a])
    return "*".join(pieces)


def _merge_adjacent_keys(atoms: tuple) -> tuple:
    out = []
    for a in atoms:
        if out and isinstance(a, RingKey) and isinstance(out[-1], RingKey):
            out[-1] = out[-1].combine(a)
        else:
            out.append(a)
    return tuple(out)


def normal_order(spec, x, fuel: int = DEFAULT_FUEL, rng=None) -> QuantumElem:
    """Rewrite to the canonical sum of coefficient * ascending word.

    Deterministic by default: coefficient crossings are applied before
    letter swaps, leftmost first.  Passing an rng picks uniformly among all
    applicable rewrite positions instead (the confluence probe).
    """
    if spec.mode != "quantum":
        raise ValueError("normal ordering needs a quantum spec")
    rank = spec.rank
    budget = fuel
    acc: dict = {}
    stack = [(q, _merge_adjacent_keys(atoms)) for q, atoms in as_raw(spec, x)]
    while stack:
        q, atoms = stack.pop()
        if not q:
            continue
        while True:
            crossings = []
            descents = []
            for i in range(len(atoms) - 1):
                a, b = atoms[i], atoms[i + 1]
                if isinstance(a, int) and isinstance(b, RingKey):
                    crossings.append(i)
                elif isinstance(a, int) and isinstance(b, int) and a > b:
                    descents.append(i)
            if rng is None:
                pos = crossings[0] if crossings else (descents[0] if descents else None)
            else:
                redexes = crossings + descents
                pos = rng.choice(redexes) if redexes else None
            if pos is None:
                break
            if budget <= 0:
                raise FuelExhausted(
                    "fuel exhausted while normalizing " + _render_raw_term(spec, q, atoms),
                    term=_render_raw_term(spec, q, atoms),
                )
            budget -= 1
            pre, post = atoms[:pos], atoms[pos + 2 :]
            a, b = atoms[pos], atoms[pos + 1]
            if isinstance(b, RingKey):
                # crossing: letter a over coefficient monomial b
                felem = CoeffElem(rank, {b: QONE})
                if spec.reorder_kind == "shift":
                    w = spec.ord_weight(a)
                    shifted = felem.shift(tuple(-v for v in w))
                    pieces = [
                        (q * q2, pre + (k2, a) + post) for k2, q2 in shifted.terms.items()
                    ]
                else:
                    pieces = [(q, pre + (b, a) + post)]
                    hbar = CoeffElem.monomial(rank, 1, hpow=1)
                    for rule in spec.reorder_rules[a]:
                        d = felem
                        for _ in range(rule.order):
                            d = d.derive(0)
                        piece = (hbar**rule.hbar_power) * rule.coeff * d
                        for k2, q2 in piece.terms.items():
                            pieces.append((q * q2, pre + (k2,) + rule.tail + post))
                q, atoms = pieces[0]
                atoms = _merge_adjacent_keys(atoms)
                stack.extend(
                    (q2, _merge_adjacent_keys(a2)) for q2, a2 in pieces[1:]
                )
            else:
                # swap: a*b -> b*a + [a, b] with [a, b] looked up in the table
                gi, gj = spec.ord_global(a), spec.ord_global(b)
                comm = spec.bracket_quantum_raw(gi, gj)
                for qt, at in comm:
                    stack.append((q * qt, _merge_adjacent_keys(pre + at + post)))
                atoms = pre + (b, a) + post
        # canonical term: optional single leading key, then letters
        if atoms and isinstance(atoms[0], RingKey):
            key, word = atoms[0], atoms[1:]
        else:
            key, word = unit_key(rank), atoms
        word = tuple(word)
        slot = acc.setdefault(word, {})
        nq = slot.get(key, QZERO) + q
        if nq:
            slot[key] = nq
        else:
            slot.pop(key, None)
    res = QuantumElem(rank)
    for word, terms in acc.items():
        c = CoeffElem(rank)
        c.terms = {k: v for k, v in terms.items() if v}
        if not c.is_zero():
            res.terms[word] = c
    return res


def q_commutator(spec, x, y, fuel: int = DEFAULT_FUEL) -> QuantumElem:
    xr, yr = as_raw(spec, x), as_raw(spec, y)
    return normal_order(spec, raw_mul(xr, yr) + raw_scale(raw_mul(yr, xr), -1), fuel)


def q_anticommutator(spec, x, y, fuel: int = DEFAULT_FUEL) -> QuantumElem:
    xr, yr = as_raw(spec, x), as_raw(spec, y)
    return normal_order(spec, raw_mul(xr, yr) + raw_mul(yr, xr), fuel)


# -- limits and substitutions ---------------------------------------------


def _word_to_mdeg(spec_p, word: tuple) -> tuple:
    mdeg = [0] * spec_p.n_ord
    for letter in word:
        mdeg[letter] += 1
    return tuple(mdeg)


def hbar_limit_elem(spec_q, spec_p, x: QuantumElem) -> PoissonElem:
    """hbar -> 0 limit of a normal-ordered element, as a commutative element."""
    out = PoissonElem.zero(spec_p.rank, spec_p.n_ord)
    for word, c in x.terms.items():
        lim = c.hbar_limit()
        if lim.is_zero():
            continue
        out = out + PoissonElem(spec_p.rank, spec_p.n_ord, {_word_to_mdeg(spec_p, word): lim})
    return out


def hbar_limit_bracket(spec_q, spec_p, x, y, fuel: int = DEFAULT_FUEL) -> PoissonElem:
    """lim [x, y]/hbar, the Poisson bracket induced by the quantum commutator."""
    comm = q_commutator(spec_q, x, y, fuel)
    divided = QuantumElem(spec_q.rank, {w: c.divide_hbar(1) for w, c in comm.terms.items()})
    return hbar_limit_elem(spec_q, spec_p, divided)


def q_z0_limit(x: QuantumElem) -> QuantumElem:
    """Coefficient-wise z -> 0 limit; coefficients become polynomial."""
    res = QuantumElem(x.rank)
    for word, c in x.terms.items():
        nc = c.z0_limit().to_coeff()
        if not nc.is_zero():
            res.terms[word] = nc
    return res


def subst_hbar_one(x: QuantumElem) -> QuantumElem:
    return QuantumElem(x.rank, {w: c.subst_hbar_one() for w, c in x.terms.items()})


def rescale_map(spec, x: QuantumElem) -> QuantumElem:
    """Reabsorption substitution: generators gain a factor hbar, z -> z/hbar."""
    res = QuantumElem(x.rank)
    for word, c in x.terms.items():
        nc = c.rescale().divide_hbar(-len(word))
        if not nc.is_zero():
            res.terms[word] = nc
    return res


def divide_hbar(x: QuantumElem, k: int = 1) -> QuantumElem:
    return QuantumElem(x.rank, {w: c.divide_hbar(k) for w, c in x.terms.items()})


# -- quantum tensors -------------------------------------------------------


class QTKey(NamedTuple):
    zpow: int
    hpow: int
    hbarw: Fraction
    constw: Fraction
    legs: tuple  # per leg: (word, polydeg, expw)


class QTensorElem:
    """k-leg tensor over the quantum algebra, per-leg normal ordered."""

    __slots__ = ("rank", "nlegs", "terms")

    def __init__(self, rank: int, nlegs: int, terms: dict | None = None):
        self.rank = rank
        self.nlegs = nlegs
        self.terms = {k: q for k, q in (terms or {}).items() if q}

    @classmethod
    def zero(cls, rank, nlegs) -> "QTensorElem":
        return cls(rank, nlegs)

    @classmethod
    def one(cls, rank, nlegs) -> "QTensorElem":
        leg = ((), (0,) * rank, (QZERO,) * rank)
        return cls(rank, nlegs, {QTKey(0, 0, QZERO, QZERO, (leg,) * nlegs): QONE})

    def _acc(self, out, key, q):
        nq = out.get(key, QZERO) + q
        if nq:
            out[key] = nq
        else:
            out.pop(key, None)

    def __add__(self, other: "QTensorElem") -> "QTensorElem":
        if self.nlegs != other.nlegs:
            raise LegMismatch(f"{self.nlegs} legs vs {other.nlegs}")
        out = dict(self.terms)
        for key, q in other.terms.items():
            self._acc(out, key, q)
        return QTensorElem(self.rank, self.nlegs, out)

    def __neg__(self) -> "QTensorElem":
        return QTensorElem(self.rank, self.nlegs, {k: -q for k, q in self.terms.items()})

    def __sub__(self, other: "QTensorElem") -> "QTensorElem":
        return self + (-other)

    def __eq__(self, other) -> bool:
        return isinstance(other, QTensorElem) and self.terms == other.terms

    def is_zero(self) -> bool:
        return not self.terms

    def __repr__(self):
        return f"QTensorElem<{self.nlegs} legs, {len(self.terms)} terms>"


def qt_from_raw(spec, raw_legs_terms: list, fuel: int = DEFAULT_FUEL) -> QTensorElem:
    """Canonicalize raw tensor terms [(rational, (leg atoms, ...))] per leg."""
    nlegs = None
    out: dict = {}
    for q, legs_atoms in raw_legs_terms:
        if nlegs is None:
            nlegs = len(legs_atoms)
        elif nlegs != len(legs_atoms):
            raise LegMismatch("tensor terms with different leg counts")
        parts = [normal_order(spec, [(QONE, atoms)], fuel) for atoms in legs_atoms]
        _distribute_legs(spec, out, q, parts)
    return QTensorElem(spec.rank, nlegs if nlegs is not None else 2, out)


def _distribute_legs(spec, out: dict, q: Fraction, parts: list) -> None:
    rank = spec.rank
    stack = [((), 0, 0, QZERO, QZERO, q)]
    for elem in parts:
        nxt = []
        for legs, zp, hp, hb, cw, qt in stack:
            for word, c in elem.terms.items():
                for key, q2 in c.terms.items():
                    nxt.append(
                        (
                            legs + ((word, key.polydeg, key.expw),),
                            zp + key.zpow,
                            hp + key.hpow,
                            hb + key.hbarw,
                            cw + key.constw,
                            qt * q2,
                        )
                    )
        stack = nxt
    for legs, zp, hp, hb, cw, qt in stack:
        key = QTKey(zp, hp, hb, cw, legs)
        nq = out.get(key, QZERO) + qt
        if nq:
            out[key] = nq
        else:
            out.pop(key, None)


def _leg_atoms(leg) -> tuple:
    word, polydeg, expw = leg
    key = RingKey(0, 0, polydeg, expw, QZERO, QZERO)
    return (key,) + tuple(word)


def qt_mul(spec, x: QTensorElem, y: QTensorElem, fuel: int = DEFAULT_FUEL) -> QTensorElem:
    if x.nlegs != y.nlegs:
        raise LegMismatch(f"{x.nlegs} legs vs {y.nlegs}")
    out: dict = {}
    for kx, qx in x.terms.items():
        for ky, qy in y.terms.items():
            parts = [
                normal_order(spec, [(QONE, _leg_atoms(kx.legs[l]) + _leg_atoms(ky.legs[l]))], fuel)
                for l in range(x.nlegs)
            ]
            q = qx * qy
            zp = kx.zpow + ky.zpow
            hp = kx.hpow + ky.hpow
            hb = kx.hbarw + ky.hbarw
            cw = kx.constw + ky.constw
            sub: dict = {}
            _distribute_legs(spec, sub, q, parts)
            for key, qt in sub.items():
                nk = QTKey(key.zpow + zp, key.hpow + hp, key.hbarw + hb, key.constw + cw, key.legs)
                nq = out.get(nk, QZERO) + qt
                if nq:
                    out[nk] = nq
                else:
                    out.pop(nk, None)
    return QTensorElem(spec.rank, x.nlegs, out)


def qt_commutator(spec, x: QTensorElem, y: QTensorElem, fuel: int = DEFAULT_FUEL) -> QTensorElem:
    return qt_mul(spec, x, y, fuel) - qt_mul(spec, y, x, fuel)


def _q_e_image_form(spec, g: int, fuel: int):
    """Per-leg linear form of the quantum coproduct of an E-generator."""
    t = qt_from_raw(spec, spec.coproduct_table[g], fuel)
    forms = [dict() for _ in range(t.nlegs)]
    const = QZERO
    for key, q in t.terms.items():
        if key.zpow or key.hpow or key.hbarw or key.constw:
            raise ValueError(f"coproduct of {spec.gen_names[g]} is not linear")
        degree = 0
        where = None
        for l, (word, polydeg, expw) in enumerate(key.legs):
            if word or any(expw):
                raise ValueError(f"coproduct of {spec.gen_names[g]} is not linear")
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
            raise ValueError(f"coproduct of {spec.gen_names[g]} is not linear")
    return forms, const


def q_apply_coproduct(spec, x: QuantumElem, fuel: int = DEFAULT_FUEL) -> QTensorElem:
    """Extend the coproduct table to an algebra morphism and apply it."""
    rank = spec.rank
    nlegs = 2
    e_forms: dict = {}
    e_images: dict = {}

    def e_image(slot: int) -> QTensorElem:
        if slot not in e_images:
            g = spec.e_global(slot)
            forms, const = _e_forms(g)
            terms: dict = {}
            zero_leg = ((), (0,) * rank, (QZERO,) * rank)
            for l in range(nlegs):
                for s2, lam in forms[l].items():
                    pd = [0] * rank
                    pd[s2] = 1
                    legs = tuple(
                        (zero_leg if m != l else ((), tuple(pd), (QZERO,) * rank))
                        for m in range(nlegs)
                    )
                    key = QTKey(0, 0, QZERO, QZERO, legs)
                    terms[key] = terms.get(key, QZERO) + lam
            if const:
                key = QTKey(0, 0, QZERO, QZERO, (zero_leg,) * nlegs)
                terms[key] = terms.get(key, QZERO) + const
            e_images[slot] = QTensorElem(rank, nlegs, terms)
        return e_images[slot]

    def _e_forms(g: int):
        if g not in e_forms:
            e_forms[g] = _q_e_image_form(spec, g, fuel)
        return e_forms[g]

    letter_images = {}
    out = QTensorElem.zero(rank, nlegs)
    for word, coeff in x.terms.items():
        for rkey, rq in coeff.terms.items():
            t = QTensorElem.one(rank, nlegs)
            for slot, d in enumerate(rkey.polydeg):
                for _ in range(d):
                    t = qt_mul(spec, t, e_image(slot), fuel)
            legw = [[QZERO] * rank for _ in range(nlegs)]
            constw = rkey.constw
            for slot, a in enumerate(rkey.expw):
                if not a:
                    continue
                forms, const = _e_forms(spec.e_global(slot))
                constw += a * const
                for l in range(nlegs):
                    for s2, lam in forms[l].items():
                        legw[l][s2] += a * lam
            ckey = QTKey(
                rkey.zpow,
                rkey.hpow,
                rkey.hbarw,
                constw,
                tuple(((), (0,) * rank, tuple(legw[l])) for l in range(nlegs)),
            )
            t = qt_mul(spec, t, QTensorElem(rank, nlegs, {ckey: rq}), fuel)
            for letter in word:
                g = spec.ord_global(letter)
                if g not in letter_images:
                    letter_images[g] = qt_from_raw(spec, spec.coproduct_table[g], fuel)
                t = qt_mul(spec, t, letter_images[g], fuel)
            out = out + t
    return out


def qt_hbar_limit(spec_q, spec_p, t: QTensorElem) -> TensorElem:
    """hbar -> 0 limit of a quantum tensor, as a commutative tensor."""
    from .errors import NegativeHbarValuation

    def coefficient(deg: int) -> dict:
        out: dict = {}
        for key, q in t.terms.items():
            from math import factorial

            n = deg - key.hpow
            if n < 0 or (n and not key.hbarw):
                continue
            w = key.hbarw**n / factorial(n)
            legs = tuple(
                (_word_to_mdeg(spec_p, word), polydeg, expw) for word, polydeg, expw in key.legs
            )
            nk = TKey(key.zpow + n, 0, QZERO, key.constw, legs)
            nq = out.get(nk, QZERO) + q * w
            if nq:
                out[nk] = nq
            else:
                out.pop(nk, None)
        return out

    mh = min((k.hpow for k in t.terms), default=0)
    for deg in range(mh, 0):
        if coefficient(deg):
            raise NegativeHbarValuation(f"tensor term of hbar-degree {deg} survives cancellation")
    return TensorElem(spec_p.rank, spec_p.n_ord, t.nlegs, coefficient(0))


def qt_z_coefficient(t: QTensorElem, n: int) -> QTensorElem:
    """Coefficient of z**n of a quantum tensor (words inert)."""
    from .poisson import _compositions

    rank, nlegs = t.rank, t.nlegs
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
                    nk = QTKey(0, key.hpow + dh, QZERO, QZERO, legs)
                    nq = out.get(nk, QZERO) + q * gw * w
                    if nq:
                        out[nk] = nq
                    else:
                        out.pop(nk, None)
    return QTensorElem(rank, nlegs, out)


def qt_z0_limit(t: QTensorElem) -> QTensorElem:
    mz = min((k.zpow for k in t.terms), default=0)
    for deg in range(mz, 0):
        if not qt_z_coefficient(t, deg).is_zero():
            raise NegativeZValuation(f"tensor term of z-degree {deg} survives cancellation")
    return qt_z_coefficient(t, 0)


def qt_primitive(spec, g: int) -> QTensorElem:
    """g @ 1 + 1 @ g in canonical quantum tensor form."""
    rank = spec.rank
    zero_leg = ((), (0,) * rank, (QZERO,) * rank)
    if spec.is_exponential(g):
        pd = [0] * rank
        pd[spec.e_slot(g)] = 1
        content = ((), tuple(pd), (QZERO,) * rank)
    else:
        content = ((spec.ord_pos(g),), (0,) * rank, (QZERO,) * rank)
    k1 = QTKey(0, 0, QZERO, QZERO, (content, zero_leg))
    k2 = QTKey(0, 0, QZERO, QZERO, (zero_leg, content))
    return QTensorElem(rank, 2, {k1: QONE, k2: QONE})


# -- rendering --------------------------------------------------------------


def render_quantum(x: QuantumElem, enames, onames) -> str:
    if x.is_zero():
        return "0"
    chunks = []
    for word in sorted(x.terms):
        c = x.terms[word]
        gens = "*".join(onames[i] for i in word)
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


def render_qtensor(t: QTensorElem, enames, onames) -> str:
    if t.is_zero():
        return "0"
    rank = t.rank
    chunks = []
    for key in sorted(t.terms):
        q = t.terms[key]
        skey = RingKey(key.zpow, key.hpow, (0,) * rank, (QZERO,) * rank, key.hbarw, key.constw)
        scalar = render_key(skey, enames, q)
        leg_strs = []
        for word, polydeg, expw in key.legs:
            lkey = RingKey(0, 0, polydeg, expw, QZERO, QZERO)
            pieces = []
            coeff = render_key(lkey, enames)
            if coeff != "1":
                pieces.append(coeff)
            pieces.extend(onames[i] for i in word)
            leg_strs.append("*".join(pieces) if pieces else "1")
        legs = " @ ".join(leg_strs)
        term = legs if scalar == "1" else (f"-{legs}" if scalar == "-1" else f"{scalar}*{legs}")
        if not chunks:
            chunks.append(term)
        elif term.startswith("-"):
            chunks.append(" - " + term[1:])
        else:
            chunks.append(" + " + term)
    return "".join(chunks)
