"""Ideal class groups of maximal monogenized cubic orders.

The group is computed from a factor base of prime ideals below the Minkowski
bound: relations come from the factorizations of rational primes (p) and from
principal ideals (alpha) for alpha scanned over growing coordinate boxes, and
the invariant factors fall out of the Smith normal form of the relation
matrix.  The box doubles until the answer repeats (or triviality is reached,
which is self-certifying since the relation cokernel only ever overestimates
the class group).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .cubicfield import (
    CubicFieldData,
    IdealLattice,
    PrimeIdealData,
    ideal_product,
    integral_element_norm,
    is_prime,
    norm_form_matrices,
    prime_ideals_above,
)
from .forms import BinaryCubicForm, invariants


def primes_up_to(n: int) -> list[int]:
    if n < 2:
        return []
    sieve = bytearray([1]) * (n + 1)
    sieve[0] = sieve[1] = 0
    for p in range(2, math.isqrt(n) + 1):
        if sieve[p]:
            sieve[p * p :: p] = bytearray(len(sieve[p * p :: p]))
    return [i for i, v in enumerate(sieve) if v]


def minkowski_bound(disc: int, signature: tuple[int, int]) -> float:
    """(2/9) * (4/pi)^r2 * sqrt|disc|; every ideal class has a representative
    of norm at most this."""
    if disc == 0:
        raise ValueError("disc = 0 has no Minkowski bound")
    r1, r2 = signature
    if (r1, r2) not in ((3, 0), (1, 1)) or (disc > 0) != (r2 == 0):
        raise ValueError(f"signature {signature} inconsistent with disc {disc}")
    return (2.0 / 9.0) * (4.0 / math.pi) ** r2 * math.sqrt(abs(disc))


# ---------------------------------------------------------------------------
# abelian group bookkeeping


@dataclass(frozen=True)
class AbelianGroupStructure:
    """Invariant factors d1 | d2 | ... | dk, all >= 2; () is the trivial group."""

    invariant_factors: tuple[int, ...]

    def __post_init__(self) -> None:
        fs = self.invariant_factors
        if any(d < 2 for d in fs):
            raise ValueError("invariant factors must be >= 2")
        if any(fs[i + 1] % fs[i] for i in range(len(fs) - 1)):
            raise ValueError(f"divisibility chain violated: {fs}")

    @property
    def order(self) -> int:
        return math.prod(self.invariant_factors)


def p_torsion_size(G: AbelianGroupStructure, p: int) -> int:
    """|G[p]| = p^(# invariant factors divisible by p)."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    return p ** sum(1 for d in G.invariant_factors if d % p == 0)


@dataclass(frozen=True)
class ClassGroupResult:
    group: AbelianGroupStructure
    stabilized: bool
    search_rounds: int


@dataclass(frozen=True)
class FactorBase:
    primes: tuple[PrimeIdealData, ...]
    bound: float


@dataclass(frozen=True)
class RelationMatrix:
    """Rows are factor-base exponent vectors of verified principal ideals."""

    rows: tuple[tuple[int, ...], ...]
    ncols: int


@dataclass(frozen=True)
class ClassGroupConfig:
    initial_box: int = 8
    max_rounds: int = 6
    valuation_cap: int = 12


DEFAULT_CONFIG = ClassGroupConfig()


# ---------------------------------------------------------------------------
# Smith normal form


def smith_normal_form(
    M: Sequence[Sequence[int]],
) -> tuple[list[int], list[list[int]], list[list[int]]]:
    """Diagonal d1 | d2 | ... plus unimodular U, V with U*M*V diagonal.

    Returns the full diagonal of length min(m, n); zeros sit at the end.
    """
    A = [list(map(int, row)) for row in M]
    m = len(A)
    n = len(A[0]) if m else 0
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    V = [[int(i == j) for j in range(n)] for i in range(n)]

    def row_op(i, j, q):  # row_i -= q * row_j
        A[i] = [a - q * b for a, b in zip(A[i], A[j])]
        U[i] = [a - q * b for a, b in zip(U[i], U[j])]

    def col_op(i, j, q):  # col_i -= q * col_j
        for r in range(m):
            A[r][i] -= q * A[r][j]
        for r in range(n):
            V[r][i] -= q * V[r][j]

    def swap_rows(i, j):
        if i != j:
            A[i], A[j] = A[j], A[i]
            U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        if i != j:
            for r in range(m):
                A[r][i], A[r][j] = A[r][j], A[r][i]
            for r in range(n):
                V[r][i], V[r][j] = V[r][j], V[r][i]

    k = min(m, n)
    for t in range(k):
        while True:
            pivot = None
            best = None
            for i in range(t, m):
                for j in range(t, n):
                    a = A[i][j]
                    if a and (best is None or abs(a) < best):
                        best = abs(a)
                        pivot = (i, j)
            if pivot is None:
                break
            swap_rows(t, pivot[0])
            swap_cols(t, pivot[1])
            dirty = False
            for i in range(t + 1, m):
                if A[i][t]:
                    row_op(i, t, A[i][t] // A[t][t])
                    if A[i][t]:
                        dirty = True
            for j in range(t + 1, n):
                if A[t][j]:
                    col_op(j, t, A[t][j] // A[t][t])
                    if A[t][j]:
                        dirty = True
            if dirty:
                continue
            # pivot divides its cleared row/column; now force it to divide
            # the whole trailing block so the diagonal forms a chain
            viol = None
            for i in range(t + 1, m):
                for j in range(t + 1, n):
                    if A[i][j] % A[t][t]:
                        viol = i
                        break
                if viol is not None:
                    break
            if viol is None:
                break
            row_op(t, viol, -1)  # pull the offending row up; loop re-clears
        if t < k and A[t][t] < 0:
            A[t] = [-a for a in A[t]]
            U[t] = [-a for a in U[t]]
    diag = [A[t][t] for t in range(k)]
    return diag, U, V


def invariant_factors_of_cokernel(
    rows: Sequence[Sequence[int]], ncols: int
) -> Optional[tuple[int, ...]]:
    """Invariant factors (>= 2) of Z^ncols / rowspan, or None if infinite."""
    if ncols == 0:
        return ()
    echelon = _row_echelon(rows, ncols)
    if len(echelon) < ncols:
        return None
    diag, _, _ = smith_normal_form(echelon)
    if any(d == 0 for d in diag):
        return None
    return tuple(d for d in diag if d > 1)


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    """g, u, v with u*a + v*b = g = gcd(a, b), g >= 0."""
    old_r, r = a, b
    old_u, u = 1, 0
    old_v, v = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_u, u = u, old_u - q * u
        old_v, v = v, old_v - q * v
    if old_r < 0:
        old_r, old_u, old_v = -old_r, -old_u, -old_v
    return old_r, old_u, old_v


def _row_echelon(rows: Sequence[Sequence[int]], ncols: int) -> list[list[int]]:
    """Integer row echelon basis of the row span (one row per pivot column).

    Pivot collisions are resolved with the extended gcd, so the result spans
    exactly the same lattice as the input rows.
    """
    pivots: dict[int, list[int]] = {}
    for row in rows:
        r = list(row)
        while True:
            c = next((i for i, x in enumerate(r) if x), None)
            if c is None:
                break
            if c not in pivots:
                pivots[c] = [-x for x in r] if r[c] < 0 else r
                break
            b = pivots[c]
            g, u, v = _xgcd(b[c], r[c])
            qb, qr = b[c] // g, r[c] // g
            new_b = [u * x + v * y for x, y in zip(b, r)]
            r = [qb * y - qr * x for x, y in zip(b, r)]
            pivots[c] = new_b
    return [pivots[c] for c in sorted(pivots)]


# ---------------------------------------------------------------------------
# factor base and relations


def build_factor_base(K: CubicFieldData) -> FactorBase:
    bound = minkowski_bound(K.disc, K.signature)
    fb: list[PrimeIdealData] = []
    for p in primes_up_to(int(bound)):
        for P in prime_ideals_above(K, p):
            if P.norm() <= bound:
                fb.append(P)
    fb.sort(key=lambda P: (P.p, P.residue_degree, P.local_factor))
    return FactorBase(primes=tuple(fb), bound=bound)


class _PowerCache:
    """Lazily extended powers P^k of one prime ideal."""

    def __init__(self, P: PrimeIdealData, K: CubicFieldData):
        self.P = P
        self.K = K
        self.powers: list[IdealLattice] = [P.lattice]

    def power(self, k: int) -> IdealLattice:
        while len(self.powers) < k:
            self.powers.append(
                ideal_product(self.powers[-1], self.P.lattice, self.K)
            )
        return self.powers[k - 1]

    def valuation(self, v: tuple[int, int, int], cap: int) -> Optional[int]:
        """v_P of the element, or None when it reaches the cap."""
        k = 0
        while k < cap:
            if not self.power(k + 1).contains(v):
                return k
            k += 1
        return None


def _norm_batch(x, y, z, T, T2):
    """det(x*Id + y*T + z*T2) on numpy int64 arrays."""
    m = [[x * (1 if i == j else 0) + int(T[i][j]) * y + int(T2[i][j]) * z
          for j in range(3)] for i in range(3)]
    return (
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    )


def _smooth_candidates(
    box: int,
    inner: int,
    fb_rational: list[int],
    g,
    T,
    T2,
    int64_safe: bool,
):
    """Yield (coords, |norm|) for box-shell elements whose norm is
    factor-base smooth.  One representative per +-alpha pair."""
    side = np.arange(-box, box + 1, dtype=np.int64)
    yz_y, yz_z = np.meshgrid(side, side, indexing="ij")
    yz_y = yz_y.ravel()
    yz_z = yz_z.ravel()
    for x in range(-box, box + 1):
        if abs(x) <= inner:
            shell = (np.abs(yz_y) > inner) | (np.abs(yz_z) > inner)
        else:
            shell = np.ones(yz_y.shape, dtype=bool)
        # one representative of {alpha, -alpha}
        canon = (yz_z > 0) | ((yz_z == 0) & (yz_y > 0)) | (
            (yz_z == 0) & (yz_y == 0) & (x > 0)
        )
        mask = shell & canon
        if not mask.any():
            continue
        ys = yz_y[mask]
        zs = yz_z[mask]
        if int64_safe:
            norms = np.abs(_norm_batch(np.int64(x), ys, zs, T, T2))
            rem = norms.copy()
            for p in fb_rational:
                while True:
                    div = rem % p == 0
                    if not div.any():
                        break
                    rem[div] //= p
            smooth = (rem == 1) & (norms > 0)
            for i in np.nonzero(smooth)[0]:
                yield (x, int(ys[i]), int(zs[i])), int(norms[i])
        else:  # exact fallback for out-of-range coefficient sizes
            for yv, zv in zip(ys.tolist(), zs.tolist()):
                nv = abs(integral_element_norm((x, yv, zv), g))
                if nv == 0:
                    continue
                rem = nv
                for p in fb_rational:
                    while rem % p == 0:
                        rem //= p
                if rem == 1:
                    yield (x, yv, zv), nv


def class_group(
    f: BinaryCubicForm,
    K: CubicFieldData,
    config: ClassGroupConfig = DEFAULT_CONFIG,
) -> ClassGroupResult:
    """Invariant factors of the ideal class group of the maximal order.

    Relations of the factor base are seeded from the rational primes up to
    the Minkowski bound and extended by scanning alpha = x + y*theta +
    z*theta^2 over doubling boxes; the run stabilizes when consecutive rounds
    agree (a computed trivial group is already exact and stops early, since
    missing relations can only enlarge the reported group).
    """
    if not K.maximal:
        raise ValueError("class_group needs a maximal order")
    fb = build_factor_base(K)
    if not fb.primes:
        return ClassGroupResult(AbelianGroupStructure(()), True, 0)

    n = len(fb.primes)
    index_of = {(P.p, P.local_factor): i for i, P in enumerate(fb.primes)}
    splits: dict[int, list[PrimeIdealData]] = {}
    for P in fb.primes:
        splits.setdefault(P.p, None)
    for p in splits:
        splits[p] = prime_ideals_above(K, p)
    caches: dict[tuple[int, tuple], _PowerCache] = {}

    def cache_for(P: PrimeIdealData) -> _PowerCache:
        key = (P.p, P.local_factor)
        if key not in caches:
            caches[key] = _PowerCache(P, K)
        return caches[key]

    rows: list[tuple[int, ...]] = []
    seen_rows: set[tuple[int, ...]] = set()

    def add_row(row: tuple[int, ...]) -> None:
        if any(row) and row not in seen_rows:
            seen_rows.add(row)
            rows.append(row)

    # seed relations: (p) for rational primes below the bound whose primes
    # all sit inside the factor base
    for p, above in splits.items():
        if all(P.norm() <= fb.bound for P in above):
            row = [0] * n
            for P in above:
                row[index_of[(P.p, P.local_factor)]] = P.ramification
            add_row(tuple(row))

    fb_rational = sorted(splits.keys())
    T, T2 = norm_form_matrices(K.minpoly)

    def element_row(v: tuple[int, int, int], nval: int) -> Optional[tuple[int, ...]]:
        row = [0] * n
        for p in fb_rational:
            vp = 0
            m = nval
            while m % p == 0:
                m //= p
                vp += 1
            if vp == 0:
                continue
            total = 0
            for P in splits[p]:
                val = cache_for(P).valuation(v, config.valuation_cap)
                if val is None:
                    return None  # valuation hit the cap: drop this element
                if val and P.norm() > fb.bound:
                    return None  # supported outside the factor base
                if val:
                    row[index_of[(P.p, P.local_factor)]] = val
                    total += val * P.residue_degree
            if total != vp:
                raise ArithmeticError(
                    f"valuation bookkeeping failed for {v} at p={p}"
                )
        return tuple(row)

    tmax = max(max(abs(c) for c in r) for r in T2) + max(
        max(abs(c) for c in r) for r in T
    ) + 1

    prev_factors: Optional[tuple[int, ...]] = None  # None: not yet full rank
    factors: Optional[tuple[int, ...]] = None
    stabilized = False
    rounds = 0
    inner = 0
    box = config.initial_box
    while rounds < config.max_rounds:
        rounds += 1
        int64_safe = 6 * (box * tmax) ** 3 < 2**62
        for v, nval in _smooth_candidates(
            box, inner, fb_rational, K.minpoly, T, T2, int64_safe
        ):
            row = element_row(v, nval)
            if row is not None:
                add_row(row)
        factors = invariant_factors_of_cokernel(rows, n)
        if factors == ():
            stabilized = True  # provably trivial: the cokernel only shrinks
            break
        if factors is not None and factors == prev_factors:
            stabilized = True
            break
        prev_factors = factors
        inner = box
        box *= 2

    if factors is None:
        # rank-deficient relation lattice: report the torsion part, flagged
        echelon = _row_echelon(rows, n)
        diag, _, _ = smith_normal_form(echelon) if echelon else ([], [], [])
        factors = tuple(d for d in diag if d > 1)
        return ClassGroupResult(AbelianGroupStructure(factors), False, rounds)
    return ClassGroupResult(AbelianGroupStructure(factors), stabilized, rounds)
