"""Declarative description of one algebra: generators, tables, reorder rules.

An AlgebraSpec is produced by the definition-source parser and is immutable
afterwards; every engine operation takes the spec it acts under.  The same
type carries both commutative (poisson) and noncommutative (quantum)
structures; table values are PoissonElem/TensorElem for the former and raw
unordered term lists for the latter.
"""

from __future__ import annotations

from fractions import Fraction
from typing import NamedTuple

from .poisson import PoissonElem, TensorElem
from .ring import CoeffElem, Q, QZERO


class GeneratorInfo(NamedTuple):
    name: str
    exponential: bool
    weight: tuple | None  # adjoint weight over E, for ordinary generators


class DiffRule(NamedTuple):
    """One correction term of X*f = f*X + sum hbar**j * c_j * f^(j) * tail."""

    hbar_power: int
    coeff: CoeffElem
    order: int
    tail: tuple  # ordinary-generator positions


class AlgebraSpec:
    def __init__(
        self,
        name: str,
        mode: str,
        generators: tuple,
        bracket_entries: list,
        reorder_kind: str | None,
        reorder_rules: dict,
        coproduct_table: dict,
        cocommutator_table: dict,
        linear_table: dict,
        casimirs: tuple,
    ):
        self.name = name
        self.mode = mode
        self.generators = tuple(generators)
        self.gen_names = tuple(g.name for g in generators)
        self._index = {g.name: i for i, g in enumerate(generators)}
        self._e_globals = tuple(i for i, g in enumerate(generators) if g.exponential)
        self._ord_globals = tuple(i for i, g in enumerate(generators) if not g.exponential)
        self._e_slot = {g: s for s, g in enumerate(self._e_globals)}
        self._ord_pos = {g: p for p, g in enumerate(self._ord_globals)}
        self.rank = len(self._e_globals)
        self.n_ord = len(self._ord_globals)
        self.e_names = tuple(self.gen_names[g] for g in self._e_globals)
        self.ord_names = tuple(self.gen_names[g] for g in self._ord_globals)
        self.bracket_entries = list(bracket_entries)
        self.brackets = {}
        for pair, value in bracket_entries:
            self.brackets.setdefault(pair, value)
        self.reorder_kind = reorder_kind  # "shift" | "rules" | None (poisson)
        self.reorder_rules = dict(reorder_rules)
        self.coproduct_table = dict(coproduct_table)
        self.cocommutator_table = dict(cocommutator_table)
        self.linear_table = dict(linear_table)
        self.casimirs = tuple(casimirs)

    # -- generator bookkeeping ----------------------------------------

    def gen_index(self, name: str) -> int:
        return self._index[name]

    def is_exponential(self, g: int) -> bool:
        return self.generators[g].exponential

    def e_slot(self, g: int) -> int:
        return self._e_slot[g]

    def ord_pos(self, g: int) -> int:
        return self._ord_pos[g]

    def e_global(self, slot: int) -> int:
        return self._e_globals[slot]

    def ord_global(self, pos: int) -> int:
        return self._ord_globals[pos]

    def ord_weight(self, pos: int) -> tuple:
        w = self.generators[self.ord_global(pos)].weight
        return w if w is not None else (QZERO,) * self.rank

    # -- table access ---------------------------------------------------

    def bracket_poisson(self, i: int, j: int) -> PoissonElem:
        if i == j:
            return PoissonElem.zero(self.rank, self.n_ord)
        if (i, j) in self.brackets:
            return self.brackets[(i, j)]
        if (j, i) in self.brackets:
            return -self.brackets[(j, i)]
        return PoissonElem.zero(self.rank, self.n_ord)

    def bracket_quantum_raw(self, i: int, j: int) -> list:
        if i == j:
            return []
        if (i, j) in self.brackets:
            return self.brackets[(i, j)]
        if (j, i) in self.brackets:
            return [(-q, atoms) for q, atoms in self.brackets[(j, i)]]
        return []

    def linear_bracket(self, i: int, j: int) -> tuple:
        n = len(self.gen_names)
        if i == j:
            return (QZERO,) * n
        if (i, j) in self.linear_table:
            return self.linear_table[(i, j)]
        if (j, i) in self.linear_table:
            return tuple(-a for a in self.linear_table[(j, i)])
        return (QZERO,) * n

    def casimir(self, name: str):
        for n, v in self.casimirs:
            if n == name:
                return v
        raise KeyError(name)

    def __repr__(self):
        return f"AlgebraSpec({self.name!r}, {self.mode!r}, {len(self.gen_names)} generators)"


class LieBialgebraData(NamedTuple):
    """Structure constants f[k][i][j] and cocommutator constants c[i][j][k]."""

    names: tuple
    f: tuple  # f[k][i][j]: coefficient of X_k in [X_i, X_j]
    c: tuple  # c[i][j][k]: coefficient of X_j (x) X_k in delta(X_i)

    @classmethod
    def from_spec(cls, spec: AlgebraSpec) -> "LieBialgebraData":
        n = len(spec.gen_names)
        f = [[[QZERO] * n for _ in range(n)] for _ in range(n)]
        for i in range(n):
            for j in range(n):
                if i == j:
                    continue
                vec = spec.linear_bracket(i, j)
                for k in range(n):
                    f[k][i][j] = vec[k]
        c = [[[QZERO] * n for _ in range(n)] for _ in range(n)]
        for i in range(n):
            t = spec.cocommutator_table[i]
            for key, q in t.terms.items():
                j = _leg_generator(spec, key.legs[0])
                k = _leg_generator(spec, key.legs[1])
                c[i][j][k] += q
        freeze = lambda m: tuple(tuple(tuple(row) for row in plane) for plane in m)
        return cls(tuple(spec.gen_names), freeze(f), freeze(c))


def _leg_generator(spec: AlgebraSpec, leg) -> int:
    """Map a degree-one tensor leg to its global generator index."""
    mdeg, polydeg, expw = leg
    if any(expw):
        raise ValueError("cocommutator legs must be exponential-free")
    if sum(mdeg) + sum(polydeg) != 1:
        raise ValueError("cocommutator legs must have total degree one")
    for pos, d in enumerate(mdeg):
        if d:
            return spec.ord_global(pos)
    for slot, d in enumerate(polydeg):
        if d:
            return spec.e_global(slot)
    raise AssertionError


def validate_spec(spec: AlgebraSpec) -> list:
    """Collect structural violations; an empty list means the spec is coherent."""
    out = []
    n = len(spec.gen_names)

    seen = {}
    for pair, _value in spec.bracket_entries:
        i, j = pair
        unordered = frozenset(pair)
        if i == j:
            value = spec.brackets[pair]
            if not _value_is_zero(value):
                out.append(f"self-bracket ({spec.gen_names[i]},{spec.gen_names[i]}) must be 0")
            continue
        if unordered in seen:
            out.append(
                "both orientations of pair "
                f"({spec.gen_names[i]},{spec.gen_names[j]}) are entered"
            )
        seen[unordered] = pair

    for i in range(n):
        for j in range(i + 1, n):
            if frozenset((i, j)) not in seen:
                out.append(f"bracket table misses pair ({spec.gen_names[i]},{spec.gen_names[j]})")

    for i in spec._e_globals:
        for j in spec._e_globals:
            if i < j:
                value = spec.brackets.get((i, j), spec.brackets.get((j, i)))
                if value is not None and not _value_is_zero(value):
                    out.append(
                        "exponential-capable generators must commute: "
                        f"({spec.gen_names[i]},{spec.gen_names[j]}) is nonzero"
                    )

    for g in range(n):
        if g not in spec.coproduct_table:
            out.append(f"coproduct table misses generator {spec.gen_names[g]}")
        if g not in spec.cocommutator_table:
            out.append(f"cocommutator table misses generator {spec.gen_names[g]}")

    if spec.mode == "quantum":
        if spec.reorder_kind is None:
            out.append("quantum spec needs a reorder section")
        elif spec.reorder_kind == "shift":
            for pos in range(spec.n_ord):
                if spec.generators[spec.ord_global(pos)].weight is None:
                    out.append(
                        f"shift reordering needs a weight vector for {spec.ord_names[pos]}"
                    )
        else:
            if spec.rank != 1:
                out.append("differential reorder rules require exactly one exponential generator")
            for pos in range(spec.n_ord):
                if pos not in spec.reorder_rules:
                    out.append(f"no reorder rule covers generator {spec.ord_names[pos]}")
    return out


def _value_is_zero(value) -> bool:
    if isinstance(value, (PoissonElem, TensorElem)):
        return value.is_zero()
    return not value
