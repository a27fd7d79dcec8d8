"""Matrix representations of the D, E, W, V algebra, transfer-matrix walks, and the
exact stationary state of the open ASEP chain."""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass, field
from fractions import Fraction

from . import symbolic as sy
from .symbolic import ABAR, BBAR, KAPPA, ONE, ZERO, Polynomial


class DivergentParameters(ValueError):
    pass


class SingularSystem(ArithmeticError):
    pass


class ChainTooLarge(ValueError):
    pass


@dataclass(frozen=True)
class MatrixRep:
    rep_id: int
    N: int
    D: tuple
    E: tuple
    W: tuple
    V: tuple


def _matrix(N, entry):
    return tuple(tuple(entry(i, j) for j in range(N)) for i in range(N))


def build_rep(rep_id: int, N: int) -> MatrixRep:
    """Truncate representation ``rep_id`` to ``N x N`` (0-based indices below)."""
    if N < 1:
        raise ValueError("truncation must be positive")
    if rep_id == 1:
        D = _matrix(N, lambda i, j: BBAR if i == 0 else (ONE if j >= i else ZERO))
        E = _matrix(N, lambda i, j: ONE if i == j + 1 else ZERO)
        W = tuple(ABAR ** k for k in range(N))
        V = tuple(ONE if k == 0 else ZERO for k in range(N))
    elif rep_id == 2:
        D = _matrix(N, lambda i, j: ONE if j in (i, i + 1) else ZERO)
        E = _matrix(N, lambda i, j: ONE if i in (j, j + 1) else ZERO)
        W = tuple(KAPPA * sy.C ** k for k in range(N))
        V = tuple(KAPPA * sy.D ** k for k in range(N))
    elif rep_id == 3:

        def d3(i, j):
            if i == 0:
                return {0: BBAR, 1: KAPPA}.get(j, ZERO)
            return ONE if j in (i, i + 1) else ZERO

        def e3(i, j):
            if j == 0:
                return {0: ABAR, 1: KAPPA}.get(i, ZERO)
            return ONE if i in (j, j + 1) else ZERO

        D, E = _matrix(N, d3), _matrix(N, e3)
        W = V = tuple(ONE if k == 0 else ZERO for k in range(N))
    else:
        raise ValueError(f"unknown representation {rep_id}")
    return MatrixRep(rep_id, N, D, E, W, V)


def matmul(A, B):
    n, m, p = len(A), len(B), len(B[0])
    out = []
    for i in range(n):
        row = []
        for j in range(p):
            row.append(sy.total(A[i][k] * B[k][j] for k in range(m) if A[i][k] and B[k][j]))
        out.append(tuple(row))
    return tuple(out)


def vecmat(x, A):
    return tuple(sy.total(x[k] * A[k][j] for k in range(len(x)) if x[k] and A[k][j]) for j in range(len(A[0])))


def matvec(A, x):
    return tuple(sy.total(A[i][k] * x[k] for k in range(len(x)) if A[i][k] and x[k]) for i in range(len(A)))


@dataclass
class DehpReport:
    rep_id: int
    N: int
    violations: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations


def check_dehp(rep_id: int, N: int) -> DehpReport:
    """Check ``D+E = DE``, ``WE = abar W`` and ``DV = bbar V`` away from the
    truncation edge (0-based indices up to ``N-2``)."""
    if N < 3:
        raise ValueError("need N >= 3 for a non-trivial interior")
    rep = build_rep(rep_id, N)
    report = DehpReport(rep_id, N)
    DE = matmul(rep.D, rep.E)
    inner = range(N - 1)
    for i in inner:
        for j in inner:
            diff = sy.reduce_kappa(rep.D[i][j] + rep.E[i][j] - DE[i][j])
            if diff:
                report.violations.append(("D+E=DE", i, j, sy.to_text(diff)))
    WE = vecmat(rep.W, rep.E)
    DV = matvec(rep.D, rep.V)
    for k in inner:
        diff = sy.reduce_kappa(WE[k] - ABAR * rep.W[k])
        if diff:
            report.violations.append(("WE=abar W", k, None, sy.to_text(diff)))
        diff = sy.reduce_kappa(DV[k] - BBAR * rep.V[k])
        if diff:
            report.violations.append(("DV=bbar V", k, None, sy.to_text(diff)))
    return report


# --- transfer matrix -----------------------------------------------------------
#
# Vertex 2a-1 (odd) is row a of D, vertex 2b (even) is row b of E; vertex labels
# are 1-based.  A DE step is one odd -> even -> odd round trip.


def transfer_matrix(rep: MatrixRep):
    n = 2 * rep.N
    T = [[ZERO] * n for _ in range(n)]
    for a in range(rep.N):
        for b in range(rep.N):
            T[2 * a][2 * b + 1] = rep.D[a][b]
            T[2 * b + 1][2 * a] = rep.E[b][a]
    return tuple(tuple(row) for row in T)


def vertex_weight(rep: MatrixRep, v: int, terminal: bool = False) -> Polynomial:
    """Weight of odd vertex ``v``: a component of W, or of V at the walk's end."""
    if v % 2 == 0:
        raise ValueError("walks start and end on odd vertices")
    vec = rep.V if terminal else rep.W
    return vec[(v - 1) // 2]


def walk_polynomial(rep: MatrixRep, t: int, u: int, v: int) -> Polynomial:
    """``W(u) (T^t)_{u,v} V(v)`` for odd vertex labels ``u``, ``v``."""
    T = transfer_matrix(rep)
    x = [ZERO] * len(T)
    x[u - 1] = ONE
    for _ in range(t):
        x = vecmat(x, T)
    return vertex_weight(rep, u) * x[v - 1] * vertex_weight(rep, v, terminal=True)


def _walk_sum(rep: MatrixRep, L: int) -> Polynomial:
    # sum over all odd start and end vertices in one forward sweep
    T = transfer_matrix(rep)
    x = [ZERO] * len(T)
    for a in range(rep.N):
        x[2 * a] = rep.W[a]
    for _ in range(2 * L):
        x = vecmat(x, T)
    return sy.total(x[2 * b] * rep.V[b] for b in range(rep.N))


def z_transfer(rep_id: int, L: int, N: int | None = None, canonical: bool = True) -> Polynomial:
    """Z_L from the transfer matrix of representation ``rep_id``.

    Reps 1 and 3 are exact once ``N >= L + 1``; the default ``2L + 2`` leaves
    slack.  Rep 2 has an infinite geometric tail, so the finite fixed-point
    set of the combinatorial reduction is summed instead.
    """
    if L < 0:
        raise ValueError("L must be non-negative")
    if rep_id == 2:
        from .models import ModelId, enumerate_paths, total_weight

        raw = total_weight(enumerate_paths(ModelId.R2_2, L))
    elif rep_id in (1, 3):
        raw = _walk_sum(build_rep(rep_id, N or 2 * L + 2), L)
    else:
        raise ValueError(f"unknown representation {rep_id}")
    return sy.canonicalize(raw) if canonical else raw


def z_product(rep_id: int, L: int, N: int | None = None) -> Polynomial:
    """``W (DE)^L V`` by plain matrix products; an oracle for :func:`z_transfer`."""
    rep = build_rep(rep_id, N or 2 * L + 2)
    DE = matmul(rep.D, rep.E)
    x = rep.W
    for _ in range(L):
        x = vecmat(x, DE)
    return sy.canonicalize(sy.total(a * b for a, b in zip(x, rep.V)))


def z_numeric_rep2(L: int, c_val, d_val, tol=Fraction(1, 10 ** 9)) -> Fraction:
    """Partial sum of the rep-2 walk series at numeric ``c``, ``d``.

    Rows ``k >= L`` of ``(D2 E2)^L`` no longer see the boundary, so the tail
    is geometric in ``cd`` and the loop stops once its bound drops below ``tol``.
    """
    c_val, d_val, tol = Fraction(c_val), Fraction(d_val), Fraction(tol)
    ratio = abs(c_val * d_val)
    if ratio >= 1:
        raise DivergentParameters(f"|cd| = {ratio} >= 1")
    kappa2 = 1 - c_val * d_val
    acc = Fraction(0)
    k = 0
    while True:
        row = {k: Fraction(1)}
        for _ in range(L):
            row = _apply_de2(row)
        term = kappa2 * c_val ** k * sum(v * d_val ** j for j, v in row.items())
        acc += term
        if k >= L and abs(term) / (1 - ratio) < tol:
            return acc
        if k >= L and term == 0:
            return acc
        k += 1


def _apply_de2(row: dict) -> dict:
    # row vector times D2 then E2 on the infinite matrices
    y: dict = {}
    for j, v in row.items():
        y[j] = y.get(j, 0) + v
        y[j + 1] = y.get(j + 1, 0) + v
    z: dict = {}
    for j, v in y.items():
        z[j] = z.get(j, 0) + v
        if j:
            z[j - 1] = z.get(j - 1, 0) + v
    return z


# --- the Markov chain ------------------------------------------------------------


def _max_chain_l() -> int:
    return int(os.environ.get("ASEP_MAX_CHAIN_L", "10"))


@dataclass(frozen=True)
class ChainSpec:
    L: int
    alpha: Fraction
    beta: Fraction

    def __post_init__(self):
        object.__setattr__(self, "alpha", Fraction(self.alpha))
        object.__setattr__(self, "beta", Fraction(self.beta))
        if self.L < 1:
            raise ValueError("L must be positive")
        for name in ("alpha", "beta"):
            v = getattr(self, name)
            if not 0 < v <= 1:
                raise ValueError(f"{name} must lie in (0, 1]")

    @property
    def assignment(self) -> dict:
        return {"abar": 1 / self.alpha, "bbar": 1 / self.beta}


def states(L: int) -> list:
    return list(itertools.product((0, 1), repeat=L))


def matrix_product_weight(spec, tau) -> Polynomial:
    """Unnormalised ``W prod(tau_i D + (1 - tau_i) E) V`` in rep 3."""
    tau = tuple(tau)
    L = spec.L if isinstance(spec, ChainSpec) else int(spec)
    if len(tau) != L:
        raise ValueError("configuration length does not match L")
    rep = build_rep(3, L + 2)
    x = rep.W
    for t in tau:
        x = vecmat(x, rep.D if t else rep.E)
    return sy.canonicalize(sy.total(a * b for a, b in zip(x, rep.V)))


def mpa_weights(spec: ChainSpec) -> dict:
    a = spec.assignment
    return {tau: sy.evaluate(matrix_product_weight(spec, tau), a) for tau in states(spec.L)}


def mpa_distribution(spec: ChainSpec) -> dict:
    w = mpa_weights(spec)
    z = sum(w.values())
    return {tau: v / z for tau, v in w.items()}


def build_chain(spec: ChainSpec):
    """Column-stochastic ``M[to][from]``: entry at site 1 with probability alpha,
    exit at site L with beta, right hops with 1, and the diagonal closing each
    column.  Diagonal entries may be negative for large outflow."""
    if spec.L > _max_chain_l():
        raise ChainTooLarge(f"L = {spec.L} exceeds the chain cap")
    S = states(spec.L)
    index = {s: i for i, s in enumerate(S)}
    n = len(S)
    M = [[Fraction(0)] * n for _ in range(n)]
    for s in S:
        j = index[s]
        moves = []
        if s[0] == 0:
            moves.append(((1,) + s[1:], spec.alpha))
        if s[-1] == 1:
            moves.append((s[:-1] + (0,), spec.beta))
        for i in range(spec.L - 1):
            if s[i] == 1 and s[i + 1] == 0:
                moves.append((s[:i] + (0, 1) + s[i + 2 :], Fraction(1)))
        for target, rate in moves:
            M[index[target]][j] += rate
        M[j][j] = 1 - sum(rate for _, rate in moves)
    return S, M


def generator(spec: ChainSpec):
    S, M = build_chain(spec)
    Q = [[M[i][j] - (1 if i == j else 0) for j in range(len(S))] for i in range(len(S))]
    return S, Q


def solve_stationary(Q) -> list:
    """Unique ``p`` with ``Q p = 0`` and ``sum(p) = 1`` by exact elimination."""
    n = len(Q)
    # replace the last equation by the normalisation
    A = [list(row) + [Fraction(0)] for row in Q[:-1]]
    A.append([Fraction(1)] * n + [Fraction(1)])
    for col in range(n):
        piv = next((r for r in range(col, n) if A[r][col] != 0), None)
        if piv is None:
            raise SingularSystem("fixed space is not one-dimensional")
        A[col], A[piv] = A[piv], A[col]
        inv = 1 / A[col][col]
        A[col] = [v * inv for v in A[col]]
        for r in range(n):
            if r != col and A[r][col] != 0:
                f = A[r][col]
                A[r] = [a - f * b for a, b in zip(A[r], A[col])]
    return [A[i][n] for i in range(n)]


def stationary_exact(spec: ChainSpec) -> dict:
    S, M = build_chain(spec)
    n = len(S)
    _, Q = generator(spec)
    p = solve_stationary(Q)
    # both readings of the stationarity condition must hold
    for i in range(n):
        if sum(M[i][j] * p[j] for j in range(n)) != p[i]:
            raise SingularSystem("M p != p")
        if sum(Q[i][j] * p[j] for j in range(n)) != 0:
            raise SingularSystem("(M - I) p != 0")
    return dict(zip(S, p))


@dataclass
class StationaryCheck:
    spec: ChainSpec
    exact: dict
    mpa: dict
    z_value: Fraction
    z_expected: Fraction

    @property
    def passed(self) -> bool:
        return self.exact == self.mpa and self.z_value == self.z_expected


def check_stationary(spec: ChainSpec) -> StationaryCheck:
    exact = stationary_exact(spec)
    w = mpa_weights(spec)
    z = sum(w.values())
    mpa = {tau: v / z for tau, v in w.items()}
    expected = sy.evaluate(z_transfer(3, spec.L), spec.assignment)
    return StationaryCheck(spec, exact, mpa, z, expected)
