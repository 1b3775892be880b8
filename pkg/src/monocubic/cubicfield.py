"""Cubic orders Z[theta], maximality testing, and exact ideal arithmetic.

A canonical form (1, f1, f2, f3) hands us the monic cubic
g(x) = x^3 + f1*x^2 + f2*x + f3 and the order Z[theta] with theta a root of g.
Ideals are rank-3 sublattices stored in row-style Hermite normal form over the
power basis (1, theta, theta^2).  Everything is exact integer / rational
arithmetic; maximality is decided by Dedekind's criterion at primes whose
square divides the discriminant.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .forms import BinaryCubicForm, invariants

# ---------------------------------------------------------------------------
# polynomials over F_p: tuples of ints in [0, p), ascending degree, no
# trailing zeros (the zero polynomial is the empty tuple)

FpPoly = tuple[int, ...]


def _fp_trim(c: list[int]) -> FpPoly:
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def _fp_normalize(c: list[int], p: int) -> FpPoly:
    return _fp_trim([x % p for x in c])


def fp_mul(a: FpPoly, b: FpPoly, p: int) -> FpPoly:
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _fp_trim(out)


def fp_divmod(a: FpPoly, b: FpPoly, p: int) -> tuple[FpPoly, FpPoly]:
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    inv_lead = pow(b[-1], p - 2, p) if b[-1] != 1 else 1
    rem = list(a)
    deg_b = len(b) - 1
    quot = [0] * max(0, len(a) - deg_b)
    while len(rem) - 1 >= deg_b and any(rem):
        while rem and rem[-1] == 0:
            rem.pop()
        if len(rem) - 1 < deg_b:
            break
        shift = len(rem) - 1 - deg_b
        coef = (rem[-1] * inv_lead) % p
        quot[shift] = coef
        for i, bi in enumerate(b):
            rem[shift + i] = (rem[shift + i] - coef * bi) % p
    return _fp_trim(quot), _fp_trim(rem)


def fp_gcd(a: FpPoly, b: FpPoly, p: int) -> FpPoly:
    while b:
        a, b = b, fp_divmod(a, b, p)[1]
    if a and a[-1] != 1:  # make monic
        inv = pow(a[-1], p - 2, p)
        a = tuple((c * inv) % p for c in a)
    return a


def fp_eval(a: FpPoly, x: int, p: int) -> int:
    acc = 0
    for c in reversed(a):
        acc = (acc * x + c) % p
    return acc


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


# ---------------------------------------------------------------------------
# domain types


@dataclass(frozen=True)
class MonicCubic:
    """g(x) = x^3 + g1*x^2 + g2*x + g3."""

    g1: int
    g2: int
    g3: int

    def coefficients(self) -> tuple[int, int, int, int]:
        return (self.g3, self.g2, self.g1, 1)  # ascending

    def __call__(self, x: int) -> int:
        return ((x + self.g1) * x + self.g2) * x + self.g3

    def disc(self) -> int:
        g1, g2, g3 = self.g1, self.g2, self.g3
        return (
            18 * g1 * g2 * g3
            - 4 * g1**3 * g3
            + g1 * g1 * g2 * g2
            - 4 * g2**3
            - 27 * g3 * g3
        )

    def mod_p(self, p: int) -> FpPoly:
        return _fp_normalize([self.g3, self.g2, self.g1, 1], p)


@dataclass(frozen=True)
class RingStructure:
    """Multiplication table of the cubic ring on the basis (1, omega, theta).

    Each product is stored as its coordinate triple (rational part, omega
    part, theta part).
    """

    omega_theta: tuple[int, int, int]
    omega_sq: tuple[int, int, int]
    theta_sq: tuple[int, int, int]

    def multiply(
        self, u: tuple[int, int, int], v: tuple[int, int, int]
    ) -> tuple[int, int, int]:
        a, b, c = u
        d, e, g = v
        out = [a * d, a * e + b * d, a * g + c * d]
        for coeff, table in (
            (b * e, self.omega_sq),
            (b * g + c * e, self.omega_theta),
            (c * g, self.theta_sq),
        ):
            out[0] += coeff * table[0]
            out[1] += coeff * table[1]
            out[2] += coeff * table[2]
        return (out[0], out[1], out[2])


@dataclass(frozen=True)
class CubicFieldData:
    minpoly: MonicCubic
    disc: int
    signature: tuple[int, int]
    maximal: bool


@dataclass(frozen=True)
class FieldElement:
    """Coordinates with respect to (1, theta, theta^2); exact rationals."""

    x0: Fraction
    x1: Fraction
    x2: Fraction

    @classmethod
    def of(cls, x0, x1=0, x2=0) -> "FieldElement":
        return cls(Fraction(x0), Fraction(x1), Fraction(x2))


@dataclass(frozen=True)
class IdealLattice:
    """Rows of an upper-triangular HNF matrix spanning the ideal over Z."""

    rows: tuple[tuple[int, int, int], ...]

    def __post_init__(self) -> None:
        r = self.rows
        if len(r) != 3 or r[1][0] != 0 or r[2][0] != 0 or r[2][1] != 0:
            raise ValueError("ideal lattice must be upper-triangular 3x3")
        if r[0][0] <= 0 or r[1][1] <= 0 or r[2][2] <= 0:
            raise ValueError("ideal lattice needs positive diagonal")

    def diagonal(self) -> tuple[int, int, int]:
        return (self.rows[0][0], self.rows[1][1], self.rows[2][2])

    def contains(self, v: tuple[int, int, int]) -> bool:
        """Membership by forward substitution against the triangular rows."""
        x0, x1, x2 = v
        r = self.rows
        if x0 % r[0][0] != 0:
            return False
        c0 = x0 // r[0][0]
        x1 -= c0 * r[0][1]
        x2 -= c0 * r[0][2]
        if x1 % r[1][1] != 0:
            return False
        c1 = x1 // r[1][1]
        x2 -= c1 * r[1][2]
        return x2 % r[2][2] == 0


@dataclass(frozen=True)
class PrimeIdealData:
    p: int
    residue_degree: int
    ramification: int
    lattice: IdealLattice
    local_factor: FpPoly

    def norm(self) -> int:
        return self.p**self.residue_degree


# ---------------------------------------------------------------------------
# construction


def min_poly(f: BinaryCubicForm) -> MonicCubic:
    """Minimal polynomial of the distinguished generator of the cubic ring."""
    return MonicCubic(f.f1, f.f0 * f.f2, f.f0 * f.f0 * f.f3)


def ring_structure(f: BinaryCubicForm) -> RingStructure:
    f0, f1, f2, f3 = f.coefficients()
    return RingStructure(
        omega_theta=(-f0 * f3, 0, 0),
        omega_sq=(-f0 * f2, -f1, f0),
        theta_sq=(-f1 * f3, -f3, f2),
    )


def cubic_field_data(f: BinaryCubicForm) -> CubicFieldData:
    """Field data for a canonical irreducible form; runs the maximality test."""
    disc = invariants(f).disc
    if disc == 0:
        raise ValueError("degenerate form (disc = 0)")
    signature = (3, 0) if disc > 0 else (1, 1)
    return CubicFieldData(
        minpoly=min_poly(f),
        disc=disc,
        signature=signature,
        maximal=is_maximal(f),
    )


# ---------------------------------------------------------------------------
# factoring mod p and the Dedekind criterion


def factor_cubic_mod_p(g: MonicCubic, p: int) -> list[tuple[FpPoly, int]]:
    """Factor g mod p into monic irreducibles with multiplicities.

    Root scan plus division; whatever non-linear remainder survives with no
    roots in F_p is irreducible (degree <= 3).  Sorted by (degree, coeffs).
    """
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    poly = g.mod_p(p)
    factors: list[tuple[FpPoly, int]] = []
    for r in range(p):
        if not poly or len(poly) == 1:
            break
        if fp_eval(poly, r, p) != 0:
            continue
        lin = ((-r) % p, 1)
        mult = 0
        while True:
            q, rem = fp_divmod(poly, lin, p)
            if rem:
                break
            poly = q
            mult += 1
        factors.append((lin, mult))
    if poly and len(poly) > 1:
        factors.append((poly, 1))
    factors.sort(key=lambda t: (len(t[0]), t[0]))
    return factors


def _lift(poly: FpPoly) -> list[int]:
    return list(poly)


def _zx_mul(a: list[int], b: list[int]) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        for j, bj in enumerate(b):
            out[i + j] += ai * bj
    return out


def dedekind_p_maximal(g: MonicCubic, p: int) -> bool:
    """Dedekind's criterion: is Z[theta] maximal at p?

    With g = prod gi^ei mod p, put gstar = prod gi, h = prod gi^(ei-1), and
    M = (g - lift(gstar)*lift(h)) / p; the order is p-maximal iff
    gcd(M, gstar, h) = 1 over F_p.
    """
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    factors = factor_cubic_mod_p(g, p)
    gstar: FpPoly = (1,)
    hbar: FpPoly = (1,)
    for poly, e in factors:
        gstar = fp_mul(gstar, poly, p)
        for _ in range(e - 1):
            hbar = fp_mul(hbar, poly, p)
    if len(hbar) == 1:  # g squarefree mod p, nothing to check
        return True
    prod = _zx_mul(_lift(gstar), _lift(hbar))
    gz = [g.g3, g.g2, g.g1, 1]
    diff = [a - b for a, b in zip(gz, prod + [0] * (len(gz) - len(prod)))]
    assert all(c % p == 0 for c in diff)
    m_bar = _fp_normalize([c // p for c in diff], p)
    d = fp_gcd(fp_gcd(m_bar, gstar, p), hbar, p)
    return len(d) == 1


def _squared_prime_divisors(n: int) -> list[int]:
    """Primes p with p^2 | n, by trial division."""
    n = abs(n)
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            if e >= 2:
                out.append(p)
        p += 1 if p == 2 else 2
    return out


def is_maximal(f: BinaryCubicForm) -> bool:
    """True iff Z[theta] of the form is the maximal order of its fraction ring.

    Only primes with p^2 dividing the form discriminant can obstruct.
    """
    disc = invariants(f).disc
    if disc == 0:
        raise ValueError("disc = 0: no associated cubic ring of rank 3")
    g = min_poly(f)
    return all(dedekind_p_maximal(g, p) for p in _squared_prime_divisors(disc))


# ---------------------------------------------------------------------------
# ideal lattices


def hnf_3col(rows: list[tuple[int, int, int]] | list[list[int]]) -> IdealLattice:
    """Row-style HNF (positive diagonal, reduced above) of a rank-3 row span."""
    work = [list(r) for r in rows if any(r)]
    basis: list[list[int]] = []
    for col in range(3):
        pivots = [r for r in work if r[col] != 0]
        rest = [r for r in work if r[col] == 0]
        if not pivots:
            raise ValueError("row span has rank < 3")
        # euclidean elimination on this column
        while len(pivots) > 1:
            pivots.sort(key=lambda r: abs(r[col]))
            small = pivots[0]
            new_pivots = [small]
            for r in pivots[1:]:
                q = r[col] // small[col]
                reduced = [a - q * b for a, b in zip(r, small)]
                if reduced[col] != 0:
                    new_pivots.append(reduced)
                elif any(reduced):
                    rest.append(reduced)
            pivots = new_pivots
        pivot = pivots[0]
        if pivot[col] < 0:
            pivot = [-a for a in pivot]
        basis.append(pivot)
        work = rest
    # reduce entries above each diagonal
    for col in (1, 2):
        d = basis[col][col]
        for above in range(col):
            q = basis[above][col] // d
            if q:
                basis[above] = [a - q * b for a, b in zip(basis[above], basis[col])]
    return IdealLattice(tuple(tuple(r) for r in basis))


def _theta_companion(g: MonicCubic) -> tuple[tuple[int, ...], ...]:
    """Row i is theta * theta^i in the power basis."""
    return (
        (0, 1, 0),
        (0, 0, 1),
        (-g.g3, -g.g2, -g.g1),
    )


def multiply_elements(
    u: tuple[int, int, int], v: tuple[int, int, int], g: MonicCubic
) -> tuple[int, int, int]:
    """Product of two integral elements in the power basis, reduced by g."""
    conv = [0] * 5
    for i, ui in enumerate(u):
        if ui:
            for j, vj in enumerate(v):
                conv[i + j] += ui * vj
    # reduce theta^4, theta^3
    g1, g2, g3 = g.g1, g.g2, g.g3
    if conv[4]:
        c = conv[4]
        conv[3] -= c * g1
        conv[2] -= c * g2
        conv[1] -= c * g3
        conv[4] = 0
    if conv[3]:
        c = conv[3]
        conv[2] -= c * g1
        conv[1] -= c * g2
        conv[0] -= c * g3
        conv[3] = 0
    return (conv[0], conv[1], conv[2])


def unit_ideal() -> IdealLattice:
    return IdealLattice(((1, 0, 0), (0, 1, 0), (0, 0, 1)))


def principal_ideal(gen: tuple[int, int, int], g: MonicCubic) -> IdealLattice:
    rows = [multiply_elements(gen, b, g) for b in ((1, 0, 0), (0, 1, 0), (0, 0, 1))]
    return hnf_3col(rows)


def prime_ideals_above(K: CubicFieldData, p: int) -> list[PrimeIdealData]:
    """Prime ideals of the maximal order over p, via factoring g mod p.

    Valid only for maximal Z[theta] (index 1, so no exceptional primes).
    """
    if not K.maximal:
        raise ValueError("prime splitting by factorization needs a maximal order")
    g = K.minpoly
    out = []
    for poly, e in factor_cubic_mod_p(g, p):
        gen = _lift(poly) + [0] * max(0, 4 - len(poly))
        if gen[3]:  # degree-3 lift: fold theta^3 = -g1*theta^2 - g2*theta - g3
            gen = [
                gen[0] - gen[3] * g.g3,
                gen[1] - gen[3] * g.g2,
                gen[2] - gen[3] * g.g1,
                0,
            ]
        gen_t = (gen[0], gen[1], gen[2])
        rows = [(p, 0, 0), (0, p, 0), (0, 0, p)]
        for b in ((1, 0, 0), (0, 1, 0), (0, 0, 1)):
            rows.append(multiply_elements(gen_t, b, g))
        out.append(
            PrimeIdealData(
                p=p,
                residue_degree=len(poly) - 1,
                ramification=e,
                lattice=hnf_3col(rows),
                local_factor=poly,
            )
        )
    return out


def ideal_product(A: IdealLattice, B: IdealLattice, K: CubicFieldData) -> IdealLattice:
    g = K.minpoly
    rows = [multiply_elements(a, b, g) for a in A.rows for b in B.rows]
    return hnf_3col(rows)


def ideal_norm(A: IdealLattice) -> int:
    d = A.diagonal()
    return d[0] * d[1] * d[2]


def element_norm(alpha: FieldElement, K: CubicFieldData) -> Fraction:
    """Determinant of multiplication by alpha on the power basis."""
    g = K.minpoly
    t = _theta_companion(g)
    # rows of theta^2 * theta^i
    t2 = tuple(
        tuple(
            sum(t[i][k] * t[k][j] for k in range(3)) for j in range(3)
        )
        for i in range(3)
    )
    m = [
        [
            alpha.x0 * (1 if i == j else 0) + alpha.x1 * t[i][j] + alpha.x2 * t2[i][j]
            for j in range(3)
        ]
        for i in range(3)
    ]
    det = (
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    )
    return Fraction(det)


def norm_form_matrices(g: MonicCubic) -> tuple[tuple, tuple]:
    """Companion matrix T and T^2; N(x + y*theta + z*theta^2) is
    det(x*Id + y*T + z*T^2).  Used by callers that batch-evaluate norms."""
    t = _theta_companion(g)
    t2 = tuple(
        tuple(sum(t[i][k] * t[k][j] for k in range(3)) for j in range(3))
        for i in range(3)
    )
    return t, t2


def integral_element_norm(v: tuple[int, int, int], g: MonicCubic) -> int:
    """Exact norm of x + y*theta + z*theta^2 for integer coordinates."""
    x, y, z = v
    t, t2 = norm_form_matrices(g)
    m = [
        [x * (1 if i == j else 0) + y * t[i][j] + z * t2[i][j] for j in range(3)]
        for i in range(3)
    ]
    return (
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    )
