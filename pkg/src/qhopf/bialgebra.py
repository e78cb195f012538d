"""Linear-level checks on structure-constant data.

All three run over exact rationals in the generator basis, in declaration
order, and report named violating triples or pairs instead of raising.
"""

from __future__ import annotations

from itertools import combinations

from .algspec import LieBialgebraData
from .ring import QZERO


def lie_jacobi_check(data: LieBialgebraData) -> list:
    """Cyclic sum of f-contractions over all generator triples."""
    n = len(data.names)
    f = data.f
    out = []
    for i, j, k in combinations(range(n), 3):
        for l in range(n):
            total = QZERO
            for a, b, c in ((i, j, k), (j, k, i), (k, i, j)):
                for m in range(n):
                    total += f[m][a][b] * f[l][m][c]
            if total:
                out.append(
                    f"jacobi fails on ({data.names[i]},{data.names[j]},{data.names[k]})"
                    f" in component {data.names[l]}"
                )
                break
    return out


def cojacobi_check(data: LieBialgebraData) -> list:
    """The cocommutator constants, read as a dual bracket, satisfy Jacobi."""
    dual = LieBialgebraData(data.names, data.c, data.f)
    out = lie_jacobi_check(dual)
    return [v.replace("jacobi fails", "dual jacobi fails") for v in out]


def cocycle_check(data: LieBialgebraData) -> list:
    """Compatibility of bracket and cocommutator on every generator pair.

    delta([X,Y]) must equal the adjoint action of X on delta(Y) minus the
    adjoint action of Y on delta(X), each acting on both tensor legs.
    """
    n = len(data.names)
    f, c = data.f, data.c
    out = []
    for i, j in combinations(range(n), 2):
        for a in range(n):
            for b in range(n):
                lhs = sum((f[k][i][j] * c[k][a][b] for k in range(n)), QZERO)
                rhs = QZERO
                for m in range(n):
                    rhs += c[j][m][b] * f[a][i][m] + c[j][a][m] * f[b][i][m]
                    rhs -= c[i][m][b] * f[a][j][m] + c[i][a][m] * f[b][j][m]
                if lhs != rhs:
                    out.append(
                        f"cocycle fails on ({data.names[i]},{data.names[j]})"
                        f" at component ({data.names[a]},{data.names[b]})"
                    )
                    break
            else:
                continue
            break
    return out
