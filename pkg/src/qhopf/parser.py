"""Definition-source parser for algebra specifications.

The format is line oriented: a header (``algebra NAME`` / ``mode ...``)
followed by sections ``generators``, ``brackets``, ``reorder``,
``coproduct``, ``cocommutator``, ``linear`` and ``casimirs``.  Expressions
share one grammar: rationals, ``z``, ``hbar``, generator names, ``+ - * /
^``, ``@`` for tensor legs, and ``exp``/``sinh``/``cosh`` whose argument
must be z times a linear form in the exponential-capable generators plus
z*hbar and z times constants.  The exact grammar is described in
docs/format.md and frozen by golden tests.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import NamedTuple

from .algspec import AlgebraSpec, DiffRule, GeneratorInfo
from .errors import (
    IncompleteTable,
    NonLinearExpArgument,
    ParseError,
    UnknownGenerator,
)
from .poisson import PoissonElem, TensorElem, tensor_of, wedge_tensor
from .quantum import QuantumElem, raw_mul, raw_scale, render_quantum
from .ring import CoeffElem, Q, QONE, QZERO, RingKey, render_key

_RESERVED = {"z", "hbar", "exp", "sinh", "cosh", "wedge", "comm", "acomm", "pois", "D", "delta"}

_TOKEN_RE = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(.))")


class Token(NamedTuple):
    kind: str  # "num" | "name" | single-char symbol
    text: str
    line: int
    col: int


def tokenize(text: str, line: int = 1) -> list:
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m or m.end() == pos:
            break
        col = m.start(m.lastindex) + 1
        if m.group(1):
            out.append(Token("num", m.group(1), line, col))
        elif m.group(2):
            out.append(Token("name", m.group(2), line, col))
        else:
            ch = m.group(3)
            if ch in "+-*/^()@[]{}=:,":
                out.append(Token(ch, ch, line, col))
            else:
                raise ParseError(f"unexpected character {ch!r}", line, col)
        pos = m.end()
    return out


# -- expression AST ---------------------------------------------------------


class _ExprParser:
    def __init__(self, tokens: list, line: int):
        self.tokens = tokens
        self.line = line
        self.i = 0

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def next(self):
        t = self.peek()
        if t is None:
            raise ParseError("unexpected end of expression", self.line)
        self.i += 1
        return t

    def expect(self, kind):
        t = self.next()
        if t.kind != kind:
            raise ParseError(f"expected {kind!r}, found {t.text!r}", t.line, t.col)
        return t

    def done(self):
        if self.i != len(self.tokens):
            t = self.tokens[self.i]
            raise ParseError(f"unexpected token {t.text!r}", t.line, t.col)

    def parse(self, allow_tensor=True):
        node = self.expr(allow_tensor)
        self.done()
        return node

    def expr(self, allow_tensor):
        node = self.tensor_term(allow_tensor)
        while self.peek() and self.peek().kind in "+-":
            op = self.next()
            rhs = self.tensor_term(allow_tensor)
            node = ("add" if op.kind == "+" else "sub", node, rhs, (op.line, op.col))
        return node

    def tensor_term(self, allow_tensor):
        node = self.product()
        if not allow_tensor:
            return node
        legs = [node]
        while self.peek() and self.peek().kind == "@":
            t = self.next()
            legs.append(self.product())
        if len(legs) == 1:
            return node
        return ("tensor", legs, (t.line, t.col))

    def product(self):
        node = self.unary()
        while self.peek() and self.peek().kind in "*/":
            op = self.next()
            rhs = self.unary()
            node = ("mul" if op.kind == "*" else "div", node, rhs, (op.line, op.col))
        return node

    def unary(self):
        t = self.peek()
        if t and t.kind == "-":
            self.next()
            return ("neg", self.unary(), (t.line, t.col))
        return self.power()

    def power(self):
        node = self.atom()
        t = self.peek()
        if t and t.kind == "^":
            self.next()
            sign = 1
            nt = self.next()
            if nt.kind == "-":
                sign = -1
                nt = self.next()
            if nt.kind != "num":
                raise ParseError("exponent must be an integer", nt.line, nt.col)
            node = ("pow", node, sign * int(nt.text), (t.line, t.col))
        return node

    def atom(self):
        t = self.next()
        if t.kind == "num":
            return ("num", Fraction(int(t.text)), (t.line, t.col))
        if t.kind == "(":
            node = self.expr(allow_tensor=False)
            self.expect(")")
            return node
        if t.kind == "name":
            if t.text in ("exp", "sinh", "cosh", "wedge", "comm", "acomm", "pois"):
                self.expect("(")
                args = [self.expr(allow_tensor=False)]
                while self.peek() and self.peek().kind == ",":
                    self.next()
                    args.append(self.expr(allow_tensor=False))
                self.expect(")")
                return ("call", t.text, args, (t.line, t.col))
            return ("name", t.text, (t.line, t.col))
        raise ParseError(f"unexpected token {t.text!r}", t.line, t.col)


def parse_expression_ast(text: str, line: int = 1, allow_tensor: bool = True):
    return _ExprParser(tokenize(text, line), line).parse(allow_tensor)


# -- evaluation domains -----------------------------------------------------


def _exp_arg_parts(ast, st):
    """Validate and split an exp/sinh/cosh argument into (expw, hbarw, constw)."""
    pos = ast[-1]
    try:
        value = _evaluate(ast, _CoeffDomain(st))
    except ParseError as e:
        raise NonLinearExpArgument(f"exponential argument is not z-linear: {e}", *pos)
    expw = [QZERO] * st.rank
    hbarw = QZERO
    constw = QZERO
    for key, q in value.terms.items():
        if any(key.expw) or key.hbarw or key.constw:
            raise NonLinearExpArgument("nested exponential in argument", *pos)
        deg = sum(key.polydeg)
        if key.zpow != 1 or key.hpow not in (0, 1) or (key.hpow == 1 and deg):
            raise NonLinearExpArgument("argument must be z times a linear form", *pos)
        if key.hpow == 1:
            hbarw += q
        elif deg == 0:
            constw += q
        elif deg == 1:
            expw[key.polydeg.index(1)] += q
        else:
            raise NonLinearExpArgument("argument must be z times a linear form", *pos)
    return tuple(expw), hbarw, constw


class _DomainBase:
    def __init__(self, st, spec=None):
        self.st = st
        self.spec = spec

    def call(self, fname, args, pos):
        if fname in ("exp", "sinh", "cosh"):
            if len(args) != 1:
                raise ParseError(f"{fname}() takes one argument", *pos)
            expw, hbarw, constw = _exp_arg_parts(args[0], self.st)
            make = {
                "exp": CoeffElem.exp_of,
                "sinh": CoeffElem.sinh_of,
                "cosh": CoeffElem.cosh_of,
            }[fname]
            return self.embed_coeff(make(self.st.rank, expw, hbarw=hbarw, constw=constw))
        raise ParseError(f"{fname}() is not available in this context", *pos)

    def embed_coeff(self, c):
        raise NotImplementedError

    def tensor(self, leg_asts, pos):
        raise ParseError("tensor products are not available in this context", *pos)

    def pow(self, value, n, pos):
        if n >= 0:
            out = self.one()
            for _ in range(n):
                out = self.mul(out, value, pos)
            return out
        inv = self.invert(value, pos)
        return self.pow(inv, -n, pos)

    def div(self, a, b, pos):
        return self.mul(a, self.invert(b, pos), pos)

    def invert(self, value, pos):
        raise ParseError("this value is not invertible", *pos)


class _CoeffDomain(_DomainBase):
    def rational(self, q):
        return CoeffElem.scalar(self.st.rank, q)

    def one(self):
        return CoeffElem.one(self.st.rank)

    def symbol(self, name, pos):
        if name == "z":
            return CoeffElem.monomial(self.st.rank, 1, zpow=1)
        if name == "hbar":
            return CoeffElem.monomial(self.st.rank, 1, hpow=1)
        try:
            g = self.st.gen_index(name)
        except KeyError:
            raise UnknownGenerator(f"unknown generator {name!r}", *pos)
        if not self.st.is_exponential(g):
            raise ParseError(
                f"generator {name!r} is not allowed in a coefficient expression", *pos
            )
        return CoeffElem.gen(self.st.rank, self.st.e_slot(g))

    def add(self, a, b, pos):
        return a + b

    def neg(self, a):
        return -a

    def mul(self, a, b, pos):
        return a * b

    def invert(self, value, pos):
        try:
            return value.inverse()
        except ValueError as e:
            raise ParseError(f"divisor is not invertible: {e}", *pos)

    def embed_coeff(self, c):
        return c


class _PoissonDomain(_DomainBase):
    def rational(self, q):
        return PoissonElem.from_coeff(self.st.n_ord, CoeffElem.scalar(self.st.rank, q))

    def one(self):
        return PoissonElem.one(self.st.rank, self.st.n_ord)

    def symbol(self, name, pos):
        if name in ("z", "hbar"):
            return self.embed_coeff(_CoeffDomain(self.st).symbol(name, pos))
        try:
            g = self.st.gen_index(name)
        except KeyError:
            raise UnknownGenerator(f"unknown generator {name!r}", *pos)
        from .poisson import poisson_gen

        return poisson_gen(self.st, g)

    def add(self, a, b, pos):
        if isinstance(a, TensorElem) != isinstance(b, TensorElem):
            raise ParseError("cannot add a tensor to a plain element", *pos)
        return a + b

    def neg(self, a):
        return -a

    def mul(self, a, b, pos):
        return a * b

    def invert(self, value, pos):
        if set(value.terms) != {(0,) * self.st.n_ord}:
            raise ParseError("divisor must be a coefficient monomial", *pos)
        try:
            return PoissonElem.from_coeff(self.st.n_ord, value.scalar_part().inverse())
        except ValueError as e:
            raise ParseError(f"divisor is not invertible: {e}", *pos)

    def embed_coeff(self, c):
        return PoissonElem.from_coeff(self.st.n_ord, c)

    def tensor(self, legs, pos):
        if any(isinstance(l, TensorElem) for l in legs):
            raise ParseError("nested tensor products are not supported", *pos)
        return tensor_of(self.st, legs)

    def call(self, fname, args, pos):
        if fname == "pois":
            if self.spec is None:
                raise ParseError("pois() needs a full algebra context", *pos)
            if len(args) != 2:
                raise ParseError("pois() takes two arguments", *pos)
            from .poisson import p_bracket

            a = _evaluate(args[0], self)
            b = _evaluate(args[1], self)
            return p_bracket(self.spec, a, b)
        return super().call(fname, args, pos)


class _QTRaw(NamedTuple):
    terms: tuple  # ((rational, (leg atoms, ...)), ...)


class _QuantumDomain(_DomainBase):
    """Values are raw term lists [(rational, atoms)] or _QTRaw tensors."""

    def rational(self, q):
        q = Q(q)
        return [(q, ())] if q else []

    def one(self):
        return [(QONE, ())]

    def symbol(self, name, pos):
        if name in ("z", "hbar"):
            return self.embed_coeff(_CoeffDomain(self.st).symbol(name, pos))
        try:
            g = self.st.gen_index(name)
        except KeyError:
            raise UnknownGenerator(f"unknown generator {name!r}", *pos)
        if self.st.is_exponential(g):
            return self.embed_coeff(CoeffElem.gen(self.st.rank, self.st.e_slot(g)))
        return [(QONE, (self.st.ord_pos(g),))]

    def add(self, a, b, pos):
        if isinstance(a, _QTRaw) != isinstance(b, _QTRaw):
            raise ParseError("cannot add a tensor to a plain element", *pos)
        if isinstance(a, _QTRaw):
            if a.terms and b.terms and len(a.terms[0][1]) != len(b.terms[0][1]):
                raise ParseError("tensor terms have different leg counts", *pos)
            return _QTRaw(a.terms + b.terms)
        return a + b

    def neg(self, a):
        if isinstance(a, _QTRaw):
            return _QTRaw(tuple((-q, legs) for q, legs in a.terms))
        return raw_scale(a, -1)

    def mul(self, a, b, pos):
        if isinstance(a, _QTRaw) or isinstance(b, _QTRaw):
            raise ParseError("tensors can only be combined with + and -", *pos)
        return raw_mul(a, b)

    def invert(self, value, pos):
        if isinstance(value, _QTRaw) or len(value) != 1:
            raise ParseError("divisor must be a coefficient monomial", *pos)
        q, atoms = value[0]
        if not all(isinstance(a, RingKey) for a in atoms):
            raise ParseError("divisor must be a coefficient monomial", *pos)
        key = RingKey(0, 0, (0,) * self.st.rank, (QZERO,) * self.st.rank, QZERO, QZERO)
        for a in atoms:
            key = key.combine(a)
        try:
            return [(1 / q, (key.inverse(),))]
        except ValueError as e:
            raise ParseError(f"divisor is not invertible: {e}", *pos)

    def embed_coeff(self, c):
        return [(q, (key,)) for key, q in c.terms.items()]

    def tensor(self, legs, pos):
        for l in legs:
            if isinstance(l, _QTRaw):
                raise ParseError("nested tensor products are not supported", *pos)
        stack = [(QONE, ())]
        for leg in legs:
            stack = [(q * q2, built + (atoms,)) for q, built in stack for q2, atoms in leg]
        return _QTRaw(tuple(stack))

    def call(self, fname, args, pos):
        if fname in ("comm", "acomm"):
            if len(args) != 2:
                raise ParseError(f"{fname}() takes two arguments", *pos)
            a = _evaluate(args[0], self)
            b = _evaluate(args[1], self)
            if isinstance(a, _QTRaw) or isinstance(b, _QTRaw):
                raise ParseError(f"{fname}() expects plain elements", *pos)
            sign = -1 if fname == "comm" else 1
            return raw_mul(a, b) + raw_scale(raw_mul(b, a), sign)
        return super().call(fname, args, pos)


class _LinearDomain(_DomainBase):
    """Values are rational scalars or vectors over all generators."""

    def rational(self, q):
        return Q(q)

    def one(self):
        return QONE

    def symbol(self, name, pos):
        if name in ("z", "hbar"):
            raise ParseError(f"{name} is not allowed in a linear expression", *pos)
        try:
            g = self.st.gen_index(name)
        except KeyError:
            raise UnknownGenerator(f"unknown generator {name!r}", *pos)
        return {g: QONE}

    def _vec(self, v, pos):
        if isinstance(v, Fraction):
            if v:
                raise ParseError("constants are not allowed in a linear expression", *pos)
            return {}
        return v

    def add(self, a, b, pos):
        if isinstance(a, Fraction) and isinstance(b, Fraction):
            return a + b
        a, b = self._vec(a, pos), self._vec(b, pos)
        out = dict(a)
        for g, q in b.items():
            nq = out.get(g, QZERO) + q
            if nq:
                out[g] = nq
            else:
                out.pop(g, None)
        return out

    def neg(self, a):
        if isinstance(a, Fraction):
            return -a
        return {g: -q for g, q in a.items()}

    def mul(self, a, b, pos):
        if isinstance(a, Fraction) and isinstance(b, Fraction):
            return a * b
        if isinstance(a, Fraction):
            return {g: a * q for g, q in b.items()} if a else {}
        if isinstance(b, Fraction):
            return {g: b * q for g, q in a.items()} if b else {}
        raise ParseError("products of generators are not linear", *pos)

    def invert(self, value, pos):
        if isinstance(value, Fraction) and value:
            return 1 / value
        raise ParseError("can only divide by nonzero rationals here", *pos)

    def call(self, fname, args, pos):
        raise ParseError(f"{fname}() is not allowed in a linear expression", *pos)


class _WedgeDomain(_LinearDomain):
    """Linear domain extended with wedge(x, y) = x@y - y@x tensors."""

    def _poisson_of_vec(self, v):
        from .poisson import poisson_gen

        out = PoissonElem.zero(self.st.rank, self.st.n_ord)
        for g, q in v.items():
            out = out + poisson_gen(self.st, g) * q
        return out

    def call(self, fname, args, pos):
        if fname == "wedge":
            if len(args) != 2:
                raise ParseError("wedge() takes two arguments", *pos)
            a = _evaluate(args[0], self)
            b = _evaluate(args[1], self)
            if isinstance(a, (Fraction, TensorElem)) or isinstance(b, (Fraction, TensorElem)):
                raise ParseError("wedge() expects linear combinations of generators", *pos)
            return wedge_tensor(self.st, self._poisson_of_vec(a), self._poisson_of_vec(b))
        return super().call(fname, args, pos)

    def add(self, a, b, pos):
        if isinstance(a, TensorElem) or isinstance(b, TensorElem):
            a = self._coerce_tensor(a, pos)
            b = self._coerce_tensor(b, pos)
            return a + b
        return super().add(a, b, pos)

    def neg(self, a):
        if isinstance(a, TensorElem):
            return -a
        return super().neg(a)

    def mul(self, a, b, pos):
        if isinstance(a, TensorElem) and isinstance(b, Fraction):
            return a * b
        if isinstance(b, TensorElem) and isinstance(a, Fraction):
            return b * a
        if isinstance(a, TensorElem) or isinstance(b, TensorElem):
            raise ParseError("wedge tensors scale only by rationals", *pos)
        return super().mul(a, b, pos)

    def _coerce_tensor(self, v, pos):
        if isinstance(v, TensorElem):
            return v
        if isinstance(v, Fraction) and not v:
            return TensorElem.zero(self.st.rank, self.st.n_ord, 2)
        raise ParseError("cannot mix tensors with non-tensor terms", *pos)


def _evaluate(ast, dom):
    node = ast[0]
    if node == "num":
        return dom.rational(ast[1])
    if node == "name":
        return dom.symbol(ast[1], ast[2])
    if node == "neg":
        return dom.neg(_evaluate(ast[1], dom))
    if node == "add":
        return dom.add(_evaluate(ast[1], dom), _evaluate(ast[2], dom), ast[3])
    if node == "sub":
        return dom.add(_evaluate(ast[1], dom), dom.neg(_evaluate(ast[2], dom)), ast[3])
    if node == "mul":
        return dom.mul(_evaluate(ast[1], dom), _evaluate(ast[2], dom), ast[3])
    if node == "div":
        return dom.div(_evaluate(ast[1], dom), _evaluate(ast[2], dom), ast[3])
    if node == "pow":
        return dom.pow(_evaluate(ast[1], dom), ast[2], ast[3])
    if node == "call":
        return dom.call(ast[1], ast[2], ast[3])
    if node == "tensor":
        legs = [_evaluate(leg, dom) for leg in ast[1]]
        return dom.tensor(legs, ast[2])
    raise AssertionError(node)


def eval_expression(spec, text: str, line: int = 1, with_brackets: bool = False):
    """Evaluate one expression against an algebra; mode picks the domain."""
    ast = parse_expression_ast(text, line)
    if spec.mode == "poisson":
        dom = _PoissonDomain(spec, spec if with_brackets else None)
    else:
        dom = _QuantumDomain(spec, spec)
    return _evaluate(ast, dom)


def eval_coeff_expression(spec, text: str, line: int = 1) -> CoeffElem:
    ast = parse_expression_ast(text, line, allow_tensor=False)
    return _evaluate(ast, _CoeffDomain(spec))


# -- specification files ----------------------------------------------------

_SECTIONS = ("generators", "brackets", "reorder", "coproduct", "cocommutator", "linear", "casimirs")


def _logical_lines(text: str):
    for n, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].rstrip()
        if body.strip():
            yield n, body.strip()


def _parse_rational_tokens(tokens, i, line):
    sign = 1
    if i < len(tokens) and tokens[i].kind == "-":
        sign = -1
        i += 1
    if i >= len(tokens) or tokens[i].kind != "num":
        t = tokens[i] if i < len(tokens) else None
        raise ParseError("expected a rational number", line, t.col if t else None)
    num = int(tokens[i].text)
    i += 1
    den = 1
    if i < len(tokens) and tokens[i].kind == "/":
        i += 1
        if i >= len(tokens) or tokens[i].kind != "num":
            raise ParseError("expected a denominator", line)
        den = int(tokens[i].text)
        i += 1
    return Fraction(sign * num, den), i


def parse_spec(text: str) -> AlgebraSpec:
    lines = list(_logical_lines(text))
    if len(lines) < 2:
        raise ParseError("definition source must start with 'algebra NAME' and 'mode ...'")
    idx = 0

    def header(keyword):
        nonlocal idx
        n, body = lines[idx]
        parts = body.split()
        if len(parts) != 2 or parts[0] != keyword:
            raise ParseError(f"expected '{keyword} ...'", n)
        idx += 1
        return n, parts[1]

    _, name = header("algebra")
    n_mode, mode = header("mode")
    if mode not in ("quantum", "poisson"):
        raise ParseError("mode must be 'quantum' or 'poisson'", n_mode)

    sections: dict = {}
    current = None
    for n, body in lines[idx:]:
        if body in _SECTIONS:
            if body in sections:
                raise ParseError(f"duplicate section {body!r}", n)
            current = body
            sections[body] = []
            continue
        if current is None:
            raise ParseError(f"line outside of any section: {body!r}", n)
        sections[current].append((n, body))

    if "generators" not in sections or not sections["generators"]:
        raise ParseError("missing generators section")

    generators = _parse_generators(sections["generators"])
    st = AlgebraSpec(name, mode, generators, [], None, {}, {}, {}, {}, ())
    ngen = len(generators)

    bracket_entries = _parse_brackets(sections.get("brackets", []), st, mode)
    reorder_kind, reorder_rules = _parse_reorder(sections.get("reorder"), st, mode)
    coproduct = _parse_coproduct(sections.get("coproduct", []), st, mode)
    cocommutator = _parse_cocommutator(sections.get("cocommutator", []), st)
    linear = _parse_linear(sections.get("linear", []), st)
    casimirs = _parse_casimirs(sections.get("casimirs", []), st, mode)

    pairs = {frozenset(p) for p, _ in bracket_entries if len(frozenset(p)) == 2}
    for i in range(ngen):
        for j in range(i + 1, ngen):
            if frozenset((i, j)) not in pairs:
                raise IncompleteTable(
                    f"bracket table misses pair ({st.gen_names[i]},{st.gen_names[j]})"
                )
            if (i, j) not in linear and (j, i) not in linear:
                raise IncompleteTable(
                    f"linear table misses pair ({st.gen_names[i]},{st.gen_names[j]})"
                )
    for g in range(ngen):
        if g not in coproduct:
            raise IncompleteTable(f"coproduct table misses generator {st.gen_names[g]}")
        if g not in cocommutator:
            raise IncompleteTable(f"cocommutator table misses generator {st.gen_names[g]}")

    return AlgebraSpec(
        name,
        mode,
        generators,
        bracket_entries,
        reorder_kind,
        reorder_rules,
        coproduct,
        cocommutator,
        linear,
        casimirs,
    )


def _parse_generators(entries) -> tuple:
    gens = []
    names = set()
    rank = 0
    seen_ordinary = False
    for n, body in entries:
        tokens = tokenize(body, n)
        if not tokens or tokens[0].kind != "name":
            raise ParseError("expected a generator name", n)
        gname = tokens[0].text
        if gname in _RESERVED:
            raise ParseError(f"{gname!r} is a reserved name", n)
        if gname in names:
            raise ParseError(f"duplicate generator {gname!r}", n)
        names.add(gname)
        if len(tokens) < 2 or tokens[1].kind != "name":
            raise ParseError("expected 'exp', 'ord' or 'weight ...' after the name", n)
        kind = tokens[1].text
        if kind == "exp":
            if seen_ordinary:
                raise ParseError("exponential-capable generators must be declared first", n)
            if len(tokens) != 2:
                raise ParseError("unexpected tokens after 'exp'", n)
            gens.append(GeneratorInfo(gname, True, None))
            rank += 1
        elif kind == "ord":
            seen_ordinary = True
            if len(tokens) != 2:
                raise ParseError("unexpected tokens after 'ord'", n)
            gens.append(GeneratorInfo(gname, False, None))
        elif kind == "weight":
            seen_ordinary = True
            i = 2
            weights = []
            while i < len(tokens):
                q, i = _parse_rational_tokens(tokens, i, n)
                weights.append(q)
            if len(weights) != rank:
                raise ParseError(
                    f"weight vector for {gname!r} must have {rank} entries", n
                )
            gens.append(GeneratorInfo(gname, False, tuple(weights)))
        else:
            raise ParseError(f"unknown generator kind {kind!r}", n)
    return tuple(gens)


def _split_on_equals(tokens, n):
    for i, t in enumerate(tokens):
        if t.kind == "=":
            return tokens[:i], tokens[i + 1 :]
    raise ParseError("expected '='", n)


def _parse_pair_head(tokens, st, n, open_sym, close_sym):
    if (
        len(tokens) != 5
        or tokens[0].kind != open_sym
        or tokens[1].kind != "name"
        or tokens[2].kind != ","
        or tokens[3].kind != "name"
        or tokens[4].kind != close_sym
    ):
        raise ParseError(f"expected '{open_sym}A, B{close_sym} = ...'", n)
    out = []
    for t in (tokens[1], tokens[3]):
        try:
            out.append(st.gen_index(t.text))
        except KeyError:
            raise UnknownGenerator(f"unknown generator {t.text!r}", t.line, t.col)
    return tuple(out)


def _parse_brackets(entries, st, mode) -> list:
    open_sym, close_sym = ("[", "]") if mode == "quantum" else ("{", "}")
    out = []
    for n, body in entries:
        tokens = tokenize(body, n)
        head, rhs = _split_on_equals(tokens, n)
        pair = _parse_pair_head(head, st, n, open_sym, close_sym)
        ast = _ExprParser(rhs, n).parse(allow_tensor=False)
        if mode == "poisson":
            value = _evaluate(ast, _PoissonDomain(st))
        else:
            value = _evaluate(ast, _QuantumDomain(st))
        out.append((pair, value))
    return out


def _parse_reorder(entries, st, mode):
    if entries is None:
        return None, {}
    if mode == "poisson":
        raise ParseError("poisson specs take no reorder section", entries[0][0] if entries else None)
    if len(entries) == 1 and entries[0][1] == "shift":
        return "shift", {}
    rules: dict = {}
    for n, body in entries:
        tokens = tokenize(body, n)
        head, rhs = _split_on_equals(tokens, n)
        cols = []
        cur = []
        for t in head:
            if t.kind == ":":
                cols.append(cur)
                cur = []
            else:
                cur.append(t)
        cols.append(cur)
        if len(cols) not in (3, 4):
            raise ParseError("expected 'X : hbar-power : order [: tail] = coeff'", n)
        if len(cols[0]) != 1 or cols[0][0].kind != "name":
            raise ParseError("expected a generator name", n)
        gname = cols[0][0].text
        try:
            g = st.gen_index(gname)
        except KeyError:
            raise UnknownGenerator(f"unknown generator {gname!r}", n)
        if st.is_exponential(g):
            raise ParseError(f"reorder rules apply to ordinary generators, not {gname!r}", n)
        if len(cols[1]) != 1 or cols[1][0].kind != "num":
            raise ParseError("expected an hbar power", n)
        if len(cols[2]) != 1 or cols[2][0].kind != "num":
            raise ParseError("expected a derivative order", n)
        jpow, order = int(cols[1][0].text), int(cols[2][0].text)
        tail = []
        if len(cols) == 4:
            for t in cols[3]:
                if t.kind != "name":
                    raise ParseError("tail must be a list of generator names", n)
                try:
                    tg = st.gen_index(t.text)
                except KeyError:
                    raise UnknownGenerator(f"unknown generator {t.text!r}", t.line, t.col)
                if st.is_exponential(tg):
                    raise ParseError("tail generators must be ordinary", n)
                tail.append(st.ord_pos(tg))
        ast = _ExprParser(rhs, n).parse(allow_tensor=False)
        coeff = _evaluate(ast, _CoeffDomain(st))
        rules.setdefault(st.ord_pos(g), []).append(DiffRule(jpow, coeff, order, tuple(tail)))
    return "rules", {pos: tuple(rs) for pos, rs in rules.items()}


def _parse_head_call(tokens, st, n, keyword):
    if (
        len(tokens) != 4
        or tokens[0].kind != "name"
        or tokens[0].text != keyword
        or tokens[1].kind != "("
        or tokens[2].kind != "name"
        or tokens[3].kind != ")"
    ):
        raise ParseError(f"expected '{keyword}(X) = ...'", n)
    try:
        return st.gen_index(tokens[2].text)
    except KeyError:
        raise UnknownGenerator(f"unknown generator {tokens[2].text!r}", tokens[2].line, tokens[2].col)


def _parse_coproduct(entries, st, mode) -> dict:
    out = {}
    for n, body in entries:
        tokens = tokenize(body, n)
        head, rhs = _split_on_equals(tokens, n)
        g = _parse_head_call(head, st, n, "D")
        if g in out:
            raise ParseError(f"duplicate coproduct entry for {st.gen_names[g]}", n)
        ast = _ExprParser(rhs, n).parse()
        if mode == "poisson":
            value = _evaluate(ast, _PoissonDomain(st))
            if not isinstance(value, TensorElem):
                raise ParseError("coproduct entries must be 2-leg tensors", n)
            if value.nlegs != 2:
                raise ParseError("coproduct entries must have exactly two legs", n)
        else:
            value = _evaluate(ast, _QuantumDomain(st))
            if not isinstance(value, _QTRaw):
                raise ParseError("coproduct entries must be 2-leg tensors", n)
            if any(len(legs) != 2 for _, legs in value.terms):
                raise ParseError("coproduct entries must have exactly two legs", n)
            value = list(value.terms)
        out[g] = value
    return out


def _parse_cocommutator(entries, st) -> dict:
    out = {}
    for n, body in entries:
        tokens = tokenize(body, n)
        head, rhs = _split_on_equals(tokens, n)
        g = _parse_head_call(head, st, n, "delta")
        if g in out:
            raise ParseError(f"duplicate cocommutator entry for {st.gen_names[g]}", n)
        ast = _ExprParser(rhs, n).parse(allow_tensor=False)
        value = _evaluate(ast, _WedgeDomain(st))
        if isinstance(value, Fraction):
            if value:
                raise ParseError("cocommutator entries must be wedge combinations or 0", n)
            value = TensorElem.zero(st.rank, st.n_ord, 2)
        elif isinstance(value, dict):
            raise ParseError("cocommutator entries must be wedge combinations or 0", n)
        out[g] = value
    return out


def _parse_linear(entries, st) -> dict:
    ngen = len(st.gen_names)
    out = {}
    for n, body in entries:
        tokens = tokenize(body, n)
        head, rhs = _split_on_equals(tokens, n)
        pair = _parse_pair_head(head, st, n, "[", "]")
        ast = _ExprParser(rhs, n).parse(allow_tensor=False)
        value = _evaluate(ast, _LinearDomain(st))
        if isinstance(value, Fraction):
            if value:
                raise ParseError("linear entries must be combinations of generators or 0", n)
            value = {}
        vec = tuple(value.get(g, QZERO) for g in range(ngen))
        out[pair] = vec
    return out


def _parse_casimirs(entries, st, mode) -> tuple:
    out = []
    seen = set()
    for n, body in entries:
        tokens = tokenize(body, n)
        head, rhs = _split_on_equals(tokens, n)
        if len(head) != 1 or head[0].kind != "name":
            raise ParseError("expected 'NAME = expression'", n)
        cname = head[0].text
        if cname in seen:
            raise ParseError(f"duplicate casimir {cname!r}", n)
        seen.add(cname)
        ast = _ExprParser(rhs, n).parse(allow_tensor=False)
        if mode == "poisson":
            value = _evaluate(ast, _PoissonDomain(st))
        else:
            value = _evaluate(ast, _QuantumDomain(st))
        out.append((cname, value))
    return tuple(out)


# -- rendering a spec back to source ----------------------------------------


def _render_raw_quantum(raw, st) -> str:
    if not raw:
        return "0"
    chunks = []
    for q, atoms in raw:
        pieces = []
        for a in atoms:
            if isinstance(a, RingKey):
                pieces.append(render_key(a, st.e_names))
            else:
                pieces.append(st.ord_names[a])
        if not pieces:
            body = str(abs(q))
        else:
            body = "*".join(pieces)
            if abs(q) != 1:
                body = f"{abs(q)}*{body}"
        if not chunks:
            chunks.append(body if q > 0 else f"-{body}")
        else:
            chunks.append((" + " if q > 0 else " - ") + body)
    return "".join(chunks)


def _render_qt_raw(raw, st) -> str:
    if not raw:
        return "0"
    chunks = []
    for q, legs in raw:
        leg_strs = []
        for atoms in legs:
            pieces = []
            for a in atoms:
                if isinstance(a, RingKey):
                    pieces.append(render_key(a, st.e_names))
                else:
                    pieces.append(st.ord_names[a])
            leg_strs.append("*".join(pieces) if pieces else "1")
        body = " @ ".join(leg_strs)
        if abs(q) != 1:
            body = f"{abs(q)}*{leg_strs[0]}" + "".join(f" @ {s}" for s in leg_strs[1:])
        if not chunks:
            chunks.append(body if q > 0 else f"-{body}")
        else:
            chunks.append((" + " if q > 0 else " - ") + body)
    return "".join(chunks)


def render_spec(spec: AlgebraSpec) -> str:
    from .poisson import render_poisson, render_tensor

    en, on = spec.e_names, spec.ord_names
    lines = [f"algebra {spec.name}", f"mode {spec.mode}", "", "generators"]
    for g in spec.generators:
        if g.exponential:
            lines.append(f"  {g.name} exp")
        elif g.weight is not None:
            ws = " ".join(str(w) for w in g.weight)
            lines.append(f"  {g.name} weight {ws}")
        else:
            lines.append(f"  {g.name} ord")
    lines.append("")
    lines.append("brackets")
    ob, cb = ("[", "]") if spec.mode == "quantum" else ("{", "}")
    for (i, j), value in spec.bracket_entries:
        if spec.mode == "poisson":
            rhs = render_poisson(value, en, on)
        else:
            rhs = _render_raw_quantum(value, spec)
        lines.append(f"  {ob}{spec.gen_names[i]}, {spec.gen_names[j]}{cb} = {rhs}")
    if spec.reorder_kind == "shift":
        lines.extend(["", "reorder", "  shift"])
    elif spec.reorder_kind == "rules":
        lines.extend(["", "reorder"])
        from .ring import render_coeff

        for pos in sorted(spec.reorder_rules):
            for rule in spec.reorder_rules[pos]:
                tail = " ".join(on[p] for p in rule.tail)
                head = f"{on[pos]} : {rule.hbar_power} : {rule.order}"
                if tail:
                    head += f" : {tail}"
                coeff = render_coeff(rule.coeff, en)
                lines.append(f"  {head} = {coeff}")
    lines.extend(["", "coproduct"])
    for g in range(len(spec.gen_names)):
        value = spec.coproduct_table[g]
        if spec.mode == "poisson":
            rhs = render_tensor(value, en, on)
        else:
            rhs = _render_qt_raw(value, spec)
        lines.append(f"  D({spec.gen_names[g]}) = {rhs}")
    lines.extend(["", "cocommutator"])
    for g in range(len(spec.gen_names)):
        lines.append(f"  delta({spec.gen_names[g]}) = {_render_wedge(spec, g)}")
    lines.extend(["", "linear"])
    for (i, j), vec in spec.linear_table.items():
        parts = [(q, spec.gen_names[g]) for g, q in enumerate(vec) if q]
        from .ring import _join_signed

        lines.append(f"  [{spec.gen_names[i]}, {spec.gen_names[j]}] = {_join_signed(parts)}")
    if spec.casimirs:
        lines.extend(["", "casimirs"])
        for cname, value in spec.casimirs:
            if spec.mode == "poisson":
                rhs = render_poisson(value, en, on)
            else:
                rhs = _render_raw_quantum(value, spec)
            lines.append(f"  {cname} = {rhs}")
    return "\n".join(lines) + "\n"


def _render_wedge(spec: AlgebraSpec, g: int) -> str:
    t = spec.cocommutator_table[g]
    if t.is_zero():
        return "0"
    from .algspec import _leg_generator

    chunks = []
    for key in sorted(t.terms):
        q = t.terms[key]
        a = _leg_generator(spec, key.legs[0])
        b = _leg_generator(spec, key.legs[1])
        if a > b:
            continue  # antisymmetric partner is implied by the wedge
        body = f"wedge({spec.gen_names[a]}, {spec.gen_names[b]})"
        if abs(q) != 1:
            body = f"{abs(q)}*{body}"
        if not chunks:
            chunks.append(body if q > 0 else f"-{body}")
        else:
            chunks.append((" + " if q > 0 else " - ") + body)
    return "".join(chunks)
