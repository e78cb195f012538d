"""Exact scalar arithmetic for deformed enveloping and Poisson algebras.

Every scalar handled by the engines is a finite sum of monomials

    q * z**k * hbar**m * E**alpha * exp(z*(w.E + c*hbar + d))

where q, the exponential weights w, c and d are rationals, k and m are
(possibly negative) integers, and E = (E_1, ..., E_r) is a fixed tuple of
commuting generators that may occur both polynomially and inside
exponentials.  sinh and cosh are stored through their exponential halves,
so products, partial derivatives, argument shifts E -> E + hbar*s, the
hbar -> 0 and z -> 0 limits and series coefficients all stay inside the
ring and are computed exactly.  Nothing here touches floating point.
"""

from __future__ import annotations

from fractions import Fraction
from math import factorial
from typing import Iterable, Iterator, NamedTuple

from .errors import NegativeHbarValuation, NegativeZValuation

Q = Fraction
QZERO = Q(0)
QONE = Q(1)


def qq(x) -> Fraction:
    """Coerce an int/str/Fraction to Fraction; floats are rejected."""
    if isinstance(x, float):
        raise TypeError("floating point is not allowed in exact arithmetic")
    return x if isinstance(x, Fraction) else Fraction(x)


class RingKey(NamedTuple):
    """One monomial shape: z**zpow * hbar**hpow * E**polydeg * exp(z*(expw.E + hbarw*hbar + constw))."""

    zpow: int
    hpow: int
    polydeg: tuple
    expw: tuple
    hbarw: Fraction
    constw: Fraction

    def combine(self, other: "RingKey") -> "RingKey":
        return RingKey(
            self.zpow + other.zpow,
            self.hpow + other.hpow,
            tuple(a + b for a, b in zip(self.polydeg, other.polydeg)),
            tuple(a + b for a, b in zip(self.expw, other.expw)),
            self.hbarw + other.hbarw,
            self.constw + other.constw,
        )

    def inverse(self) -> "RingKey":
        if any(self.polydeg):
            raise ValueError("monomial with polynomial part is not invertible")
        return RingKey(
            -self.zpow,
            -self.hpow,
            self.polydeg,
            tuple(-a for a in self.expw),
            -self.hbarw,
            -self.constw,
        )

    @property
    def rank(self) -> int:
        return len(self.polydeg)


def unit_key(rank: int) -> RingKey:
    zeros = (0,) * rank
    return RingKey(0, 0, zeros, (QZERO,) * rank, QZERO, QZERO)


def make_key(rank, zpow=0, hpow=0, polydeg=None, expw=None, hbarw=0, constw=0) -> RingKey:
    pd = tuple(polydeg) if polydeg is not None else (0,) * rank
    ew = tuple(qq(a) for a in expw) if expw is not None else (QZERO,) * rank
    if len(pd) != rank or len(ew) != rank:
        raise ValueError("key vectors must have length rank")
    return RingKey(zpow, hpow, pd, ew, qq(hbarw), qq(constw))


def _acc(terms: dict, key: RingKey, q: Fraction) -> None:
    nq = terms.get(key, QZERO) + q
    if nq:
        terms[key] = nq
    else:
        terms.pop(key, None)


class CoeffElem:
    """A canonical finite sum of ring monomials (no zero coefficients)."""

    __slots__ = ("rank", "terms")

    def __init__(self, rank: int, terms: dict | None = None):
        self.rank = rank
        self.terms = {}
        if terms:
            for key, q in terms.items():
                if q:
                    self.terms[key] = q

    # -- constructors -------------------------------------------------

    @classmethod
    def zero(cls, rank: int) -> "CoeffElem":
        return cls(rank)

    @classmethod
    def scalar(cls, rank: int, q) -> "CoeffElem":
        q = qq(q)
        return cls(rank, {unit_key(rank): q} if q else None)

    @classmethod
    def one(cls, rank: int) -> "CoeffElem":
        return cls.scalar(rank, 1)

    @classmethod
    def monomial(cls, rank, q=1, **key_fields) -> "CoeffElem":
        return cls(rank, {make_key(rank, **key_fields): qq(q)})

    @classmethod
    def gen(cls, rank: int, i: int) -> "CoeffElem":
        pd = [0] * rank
        pd[i] = 1
        return cls.monomial(rank, 1, polydeg=pd)

    @classmethod
    def exp_of(cls, rank, expw, hbarw=0, constw=0) -> "CoeffElem":
        return cls.monomial(rank, 1, expw=expw, hbarw=hbarw, constw=constw)

    @classmethod
    def sinh_of(cls, rank, expw, hbarw=0, constw=0) -> "CoeffElem":
        plus = make_key(rank, expw=expw, hbarw=hbarw, constw=constw)
        minus = plus.inverse()
        if plus == minus:
            return cls.zero(rank)
        return cls(rank, {plus: Q(1, 2), minus: Q(-1, 2)})

    @classmethod
    def cosh_of(cls, rank, expw, hbarw=0, constw=0) -> "CoeffElem":
        plus = make_key(rank, expw=expw, hbarw=hbarw, constw=constw)
        minus = plus.inverse()
        if plus == minus:
            return cls.one(rank)
        return cls(rank, {plus: Q(1, 2), minus: Q(1, 2)})

    # -- ring structure -----------------------------------------------

    def __add__(self, other: "CoeffElem") -> "CoeffElem":
        out = dict(self.terms)
        for key, q in other.terms.items():
            _acc(out, key, q)
        res = CoeffElem(self.rank)
        res.terms = out
        return res

    def __sub__(self, other: "CoeffElem") -> "CoeffElem":
        return self + (-other)

    def __neg__(self) -> "CoeffElem":
        res = CoeffElem(self.rank)
        res.terms = {k: -q for k, q in self.terms.items()}
        return res

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            q = qq(other)
            res = CoeffElem(self.rank)
            if q:
                res.terms = {k: v * q for k, v in self.terms.items()}
            return res
        out: dict = {}
        for k1, q1 in self.terms.items():
            for k2, q2 in other.terms.items():
                _acc(out, k1.combine(k2), q1 * q2)
        res = CoeffElem(self.rank)
        res.terms = out
        return res

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "CoeffElem":
        if n < 0:
            return self.inverse() ** (-n)
        out = CoeffElem.one(self.rank)
        for _ in range(n):
            out = out * self
        return out

    def inverse(self) -> "CoeffElem":
        if len(self.terms) != 1:
            raise ValueError("only single-monomial elements are invertible")
        ((key, q),) = self.terms.items()
        return CoeffElem(self.rank, {key.inverse(): 1 / q})

    def __eq__(self, other) -> bool:
        return isinstance(other, CoeffElem) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def is_zero(self) -> bool:
        return not self.terms

    def __repr__(self):
        names = tuple(f"E{i + 1}" for i in range(self.rank))
        return f"CoeffElem({render_coeff(self, names)})"

    # -- calculus ------------------------------------------------------

    def derive(self, i: int) -> "CoeffElem":
        """Formal partial derivative with respect to E_i."""
        out: dict = {}
        for key, q in self.terms.items():
            if key.polydeg[i]:
                pd = list(key.polydeg)
                deg = pd[i]
                pd[i] -= 1
                _acc(out, key._replace(polydeg=tuple(pd)), q * deg)
            if key.expw[i]:
                # d/dE_i exp(z*w_i*E_i) contributes z*w_i times the monomial
                _acc(out, key._replace(zpow=key.zpow + 1), q * key.expw[i])
        res = CoeffElem(self.rank)
        res.terms = out
        return res

    def shift(self, s) -> "CoeffElem":
        """Exact substitution E -> E + hbar*s for a rational vector s."""
        s = tuple(qq(a) for a in s)
        if len(s) != self.rank:
            raise ValueError("shift vector must have length rank")
        out: dict = {}
        for key, q in self.terms.items():
            hb = key.hbarw + sum(a * b for a, b in zip(key.expw, s))
            for beta, weight, hinc in _binomial_shifts(key.polydeg, s):
                nk = RingKey(key.zpow, key.hpow + hinc, beta, key.expw, hb, key.constw)
                _acc(out, nk, q * weight)
        res = CoeffElem(self.rank)
        res.terms = out
        return res

    # -- expansions and limits ----------------------------------------

    def min_zpow(self) -> int:
        return min((k.zpow for k in self.terms), default=0)

    def min_hpow(self) -> int:
        return min((k.hpow for k in self.terms), default=0)

    def z_coefficient(self, n: int) -> "PolyElem":
        """Coefficient of z**n in the full z-expansion, as a polynomial in E and hbar."""
        out: dict = {}
        for key, q in self.terms.items():
            m = n - key.zpow
            if m < 0:
                continue
            for dpoly, dh, weight in _linear_form_power(key, m):
                pd = tuple(a + b for a, b in zip(key.polydeg, dpoly))
                pk = (pd, key.hpow + dh)
                nq = out.get(pk, QZERO) + q * weight
                if nq:
                    out[pk] = nq
                else:
                    out.pop(pk, None)
        return PolyElem(self.rank, out)

    def _require_nonnegative_z(self) -> None:
        for t in range(self.min_zpow(), 0):
            bad = self.z_coefficient(t)
            if not bad.is_zero():
                raise NegativeZValuation(
                    f"term of z-degree {t} survives cancellation: {bad!r}"
                )

    def z0_limit(self) -> "PolyElem":
        self._require_nonnegative_z()
        return self.z_coefficient(0)

    def z_series_coeff(self, n: int) -> "PolyElem":
        self._require_nonnegative_z()
        return self.z_coefficient(n)

    def hbar_coefficient(self, t: int) -> "CoeffElem":
        """Coefficient of hbar**t after expanding every exp(z*hbar*c) factor."""
        out: dict = {}
        for key, q in self.terms.items():
            n = t - key.hpow
            if n < 0:
                continue
            if n and not key.hbarw:
                continue
            weight = key.hbarw**n / factorial(n)
            nk = RingKey(key.zpow + n, 0, key.polydeg, key.expw, QZERO, key.constw)
            _acc(out, nk, q * weight)
        res = CoeffElem(self.rank)
        res.terms = out
        return res

    def hbar_limit(self) -> "CoeffElem":
        for t in range(self.min_hpow(), 0):
            bad = self.hbar_coefficient(t)
            if not bad.is_zero():
                raise NegativeHbarValuation(
                    f"term of hbar-degree {t} survives cancellation: {bad!r}"
                )
        return self.hbar_coefficient(0)

    def divide_hbar(self, k: int = 1) -> "CoeffElem":
        res = CoeffElem(self.rank)
        res.terms = {key._replace(hpow=key.hpow - k): q for key, q in self.terms.items()}
        return res

    # -- substitutions -------------------------------------------------

    def subst_hbar_one(self) -> "CoeffElem":
        """Evaluate at hbar = 1: drops hbar powers, merges hbarw into constw."""
        out: dict = {}
        for key, q in self.terms.items():
            nk = RingKey(key.zpow, 0, key.polydeg, key.expw, QZERO, key.constw + key.hbarw)
            _acc(out, nk, q)
        res = CoeffElem(self.rank)
        res.terms = out
        return res

    def rescale(self) -> "CoeffElem":
        """The coefficient half of the reabsorption map E -> hbar*E, z -> z/hbar.

        exp(z*w.E) is invariant, exp(z*hbar*c) becomes exp(z*c), explicit
        z**k contributes hbar**-k and polynomial E-degrees gain matching
        hbar powers.  Requires constw == 0 on every monomial, since
        exp(z*d) would leave the ring under z -> z/hbar.
        """
        out: dict = {}
        for key, q in self.terms.items():
            if key.constw:
                raise ValueError("exp(z*const) does not survive z -> z/hbar")
            nh = key.hpow - key.zpow + sum(key.polydeg)
            nk = RingKey(key.zpow, nh, key.polydeg, key.expw, QZERO, key.hbarw)
            _acc(out, nk, q)
        res = CoeffElem(self.rank)
        res.terms = out
        return res

    def is_polynomial(self) -> bool:
        """No z powers and no exponential content (pure polynomial in E, hbar)."""
        return all(
            k.zpow == 0 and not any(k.expw) and not k.hbarw and not k.constw
            for k in self.terms
        )

    def is_hbar_free(self) -> bool:
        return all(k.hpow == 0 and not k.hbarw for k in self.terms)


class PolyElem:
    """Exponential-free polynomial in E and hbar: {(polydeg, hpow): rational}."""

    __slots__ = ("rank", "terms")

    def __init__(self, rank: int, terms: dict | None = None):
        self.rank = rank
        self.terms = {k: q for k, q in (terms or {}).items() if q}

    @classmethod
    def zero(cls, rank: int) -> "PolyElem":
        return cls(rank)

    @classmethod
    def scalar(cls, rank: int, q) -> "PolyElem":
        q = qq(q)
        return cls(rank, {((0,) * rank, 0): q} if q else None)

    def __add__(self, other: "PolyElem") -> "PolyElem":
        out = dict(self.terms)
        for k, q in other.terms.items():
            nq = out.get(k, QZERO) + q
            if nq:
                out[k] = nq
            else:
                out.pop(k, None)
        return PolyElem(self.rank, out)

    def __neg__(self) -> "PolyElem":
        return PolyElem(self.rank, {k: -q for k, q in self.terms.items()})

    def __sub__(self, other: "PolyElem") -> "PolyElem":
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            q = qq(other)
            return PolyElem(self.rank, {k: v * q for k, v in self.terms.items()} if q else None)
        out: dict = {}
        for (pd1, h1), q1 in self.terms.items():
            for (pd2, h2), q2 in other.terms.items():
                k = (tuple(a + b for a, b in zip(pd1, pd2)), h1 + h2)
                nq = out.get(k, QZERO) + q1 * q2
                if nq:
                    out[k] = nq
                else:
                    out.pop(k, None)
        return PolyElem(self.rank, out)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        return isinstance(other, PolyElem) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def is_zero(self) -> bool:
        return not self.terms

    def to_coeff(self) -> CoeffElem:
        """Embed back into the full ring (trivial exponential part)."""
        out = CoeffElem(self.rank)
        out.terms = {
            make_key(self.rank, hpow=h, polydeg=pd): q for (pd, h), q in self.terms.items()
        }
        return out

    def __repr__(self):
        names = tuple(f"E{i + 1}" for i in range(self.rank))
        return f"PolyElem({render_poly(self, names)})"


# -- expansion helpers ------------------------------------------------


def _binomial_shifts(polydeg, s) -> Iterator[tuple[tuple, Fraction, int]]:
    """Expansion of prod_i (E_i + hbar*s_i)**polydeg_i.

    Yields (new polydeg, rational weight, hbar increment).
    """
    acc = [((), QONE, 0)]
    for deg, si in zip(polydeg, s):
        nxt = []
        for beta, weight, hinc in acc:
            if deg == 0 or not si:
                nxt.append((beta + (deg,), weight, hinc))
                continue
            for b in range(deg + 1):
                w = weight * _binom(deg, b) * si ** (deg - b)
                nxt.append((beta + (b,), w, hinc + deg - b))
        acc = nxt
    return iter(acc)


def _binom(n: int, k: int) -> int:
    return factorial(n) // (factorial(k) * factorial(n - k))


def _linear_form_power(key: RingKey, m: int) -> Iterator[tuple[tuple, int, Fraction]]:
    """Expansion of (expw.E + hbarw*hbar + constw)**m / m!.

    Yields (polydeg increment, hbar increment, rational weight).
    """
    rank = key.rank
    if m == 0:
        yield (0,) * rank, 0, QONE
        return
    slots = [("e", i, a) for i, a in enumerate(key.expw) if a]
    if key.hbarw:
        slots.append(("h", -1, key.hbarw))
    if key.constw:
        slots.append(("c", -1, key.constw))
    if not slots:
        return

    def rec(idx: int, left: int):
        if idx == len(slots) - 1:
            kind, i, a = slots[idx]
            yield {(kind, i): left}, a**left / factorial(left)
            return
        kind, i, a = slots[idx]
        for take in range(left + 1):
            w0 = a**take / factorial(take)
            if not w0:
                continue
            for assign, w in rec(idx + 1, left - take):
                assign = dict(assign)
                assign[(kind, i)] = take
                yield assign, w0 * w

    for assign, weight in rec(0, m):
        dpoly = [0] * rank
        dh = 0
        for (kind, i), cnt in assign.items():
            if kind == "e":
                dpoly[i] += cnt
            elif kind == "h":
                dh += cnt
        yield tuple(dpoly), dh, weight


# -- canonical text renderings ----------------------------------------


def render_fraction(q: Fraction) -> str:
    return str(q)


def _join_signed(parts: list[tuple[Fraction, str]]) -> str:
    """Render a signed sum of (coefficient, symbol) pairs; symbol None means a constant."""
    if not parts:
        return "0"
    chunks = []
    for i, (q, sym) in enumerate(parts):
        mag = abs(q)
        if sym is None:
            body = render_fraction(mag)
        elif mag == 1:
            body = sym
        else:
            body = f"{render_fraction(mag)}*{sym}"
        if i == 0:
            chunks.append(body if q > 0 else f"-{body}")
        else:
            chunks.append((" + " if q > 0 else " - ") + body)
    return "".join(chunks)


def render_exp_argument(key: RingKey, enames) -> str:
    parts = [(a, enames[i]) for i, a in enumerate(key.expw) if a]
    if key.hbarw:
        parts.append((key.hbarw, "hbar"))
    if key.constw:
        parts.append((key.constw, None))
    return _join_signed(parts)


def render_key(key: RingKey, enames, q: Fraction = QONE) -> str:
    """One monomial as a parseable product; q is its rational coefficient."""
    pieces = []
    if key.zpow:
        pieces.append("z" if key.zpow == 1 else f"z^{key.zpow}")
    if key.hpow:
        pieces.append("hbar" if key.hpow == 1 else f"hbar^{key.hpow}")
    for i, d in enumerate(key.polydeg):
        if d:
            pieces.append(enames[i] if d == 1 else f"{enames[i]}^{d}")
    if any(key.expw) or key.hbarw or key.constw:
        pieces.append(f"exp(z*({render_exp_argument(key, enames)}))")
    if not pieces:
        return render_fraction(q)
    body = "*".join(pieces)
    if q == 1:
        return body
    if q == -1:
        return f"-{body}"
    return f"{render_fraction(q)}*{body}"


def render_coeff(elem: CoeffElem, enames) -> str:
    if elem.is_zero():
        return "0"
    chunks = []
    for key in sorted(elem.terms):
        term = render_key(key, enames, elem.terms[key])
        if not chunks:
            chunks.append(term)
        elif term.startswith("-"):
            chunks.append(" - " + term[1:])
        else:
            chunks.append(" + " + term)
    return "".join(chunks)


def render_poly(elem: PolyElem, enames) -> str:
    if elem.is_zero():
        return "0"
    chunks = []
    for pd, h in sorted(elem.terms):
        q = elem.terms[(pd, h)]
        pieces = []
        if h:
            pieces.append("hbar" if h == 1 else f"hbar^{h}")
        for i, d in enumerate(pd):
            if d:
                pieces.append(enames[i] if d == 1 else f"{enames[i]}^{d}")
        if not pieces:
            term = render_fraction(q)
        else:
            body = "*".join(pieces)
            if q == 1:
                term = body
            elif q == -1:
                term = f"-{body}"
            else:
                term = f"{render_fraction(q)}*{body}"
        if not chunks:
            chunks.append(term)
        elif term.startswith("-"):
            chunks.append(" - " + term[1:])
        else:
            chunks.append(" + " + term)
    return "".join(chunks)
