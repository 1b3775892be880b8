#!/usr/bin/env python3
"""Generate the class-group oracle fixture consumed by the test suite.

Standalone on purpose: this script must not import the monocubic package.
It re-derives everything it needs with sympy (polynomial factorization,
irreducibility, integer factorization) and mpmath (complex embeddings), and
computes each class group by a method unrelated to the package's
relation-matrix approach:

  * enumerate the prime ideals below the Minkowski bound;
  * close their classes under multiplication, comparing classes via
    principality tests of quotient-style integral ideals;
  * each principality test is a complete search: a generator, if one exists,
    can be moved by units into a bounded region of the logarithmic embedding;
    that region is tiled into cells and every lattice point of the ideal
    inside each cell's ellipsoid is enumerated (Fincke-Pohst) and checked
    exactly.  Units only need to generate a finite-index subgroup for the
    covering to be complete, so the unit search never has to prove
    fundamentality;
  * the abelian group type is read off from exact element-order counts.

Output: CSV with columns f1,f2,f3,field_disc,class_group covering every
maximal canonical form with height4 < 80000; class_group holds the
dash-separated invariant factors ('' for the trivial group).

Usage:
    python scripts/generate_oracle_fixture.py [--height4 80000] [--out PATH]

Runtime is tens of minutes; the result is committed so this only runs when
the fixture needs regenerating.
"""

from __future__ import annotations

import argparse
import csv
import itertools
import math
import sys
import time

import mpmath
import sympy
from sympy import Poly, symbols

X = symbols("x")

HEIGHT4_DEFAULT = 80000
MP_DPS = 60
CELL_WIDTH = 0.7          # log-space cell diameter per unit direction
LOG_PAD = 0.25            # additive slack on every per-embedding log bound
ELLIPSOID_MARGIN = 1.05   # multiplicative slack on the Fincke-Pohst radius


# ---------------------------------------------------------------------------
# form enumeration (coefficient loops, deliberately not the (I, J) walk the
# package uses)


def enumerate_candidate_forms(height4_bound: int):
    """All canonical (f1, f2, f3) with height4 < bound, any discriminant."""
    imax = 0
    while 4 * (imax + 1) ** 3 < height4_bound:
        imax += 1
    jmax = math.isqrt(height4_bound - 1)
    for f1 in (-1, 0, 1):
        f2_lo = (f1 * f1 - imax - 2) // 3
        f2_hi = (f1 * f1 + imax + 2) // 3
        for f2 in range(f2_lo, f2_hi + 1):
            bound3 = (2 + 9 * abs(f1) * abs(f2) + jmax) // 27 + 2
            for f3 in range(-bound3, bound3 + 1):
                I = f1 * f1 - 3 * f2
                J = -2 * f1**3 + 9 * f1 * f2 - 27 * f3
                h4 = max(4 * abs(I) ** 3, J * J)
                if h4 < height4_bound:
                    yield f1, f2, f3


def poly_of(f1: int, f2: int, f3: int) -> Poly:
    return Poly(X**3 + f1 * X**2 + f2 * X + f3, X)


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
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


def dedekind_maximal_at(g: Poly, p: int) -> bool:
    """Dedekind's criterion at p, entirely through sympy's GF(p) arithmetic.

    The criterion does not depend on the choice of lifts, so sympy's
    symmetric representatives are fine.
    """
    gp = Poly(g, modulus=p)
    _, factors = gp.factor_list()
    gstar = Poly(1, X, modulus=p)
    h = Poly(1, X, modulus=p)
    for q, e in factors:
        gstar = gstar * q
        for _ in range(e - 1):
            h = h * q
    if h.total_degree() == 0:
        return True
    lift_prod = Poly(gstar, X, domain="ZZ") * Poly(h, X, domain="ZZ")
    diff = g - lift_prod
    m = Poly([int(c) // p for c in diff.all_coeffs()], X, domain="ZZ")
    d = sympy.gcd(sympy.gcd(Poly(m, modulus=p), gstar), h)
    return d.total_degree() == 0


def is_maximal_form(g: Poly, disc: int) -> bool:
    for p, e in sympy.factorint(abs(disc)).items():
        if e >= 2 and not dedekind_maximal_at(g, int(p)):
            return False
    return True


# ---------------------------------------------------------------------------
# exact arithmetic in Z[theta] on the power basis (1, theta, theta^2)


class Order:
    def __init__(self, g1: int, g2: int, g3: int):
        self.g = (g1, g2, g3)
        t = ((0, 1, 0), (0, 0, 1), (-g3, -g2, -g1))
        self.t = t
        self.t2 = tuple(
            tuple(sum(t[i][k] * t[k][j] for k in range(3)) for j in range(3))
            for i in range(3)
        )

    def mult(self, u, v):
        g1, g2, g3 = self.g
        conv = [0] * 5
        for i in range(3):
            if u[i]:
                for j in range(3):
                    conv[i + j] += u[i] * v[j]
        if conv[4]:
            c = conv[4]
            conv[3] -= c * g1
            conv[2] -= c * g2
            conv[1] -= c * g3
        if conv[3]:
            c = conv[3]
            conv[2] -= c * g1
            conv[1] -= c * g2
            conv[0] -= c * g3
        return (conv[0], conv[1], conv[2])

    def norm(self, v) -> int:
        x, y, z = v
        m = [
            [
                x * (1 if i == j else 0) + y * self.t[i][j] + z * self.t2[i][j]
                for j in range(3)
            ]
            for i in range(3)
        ]
        return (
            m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
        )


def hnf3(rows):
    """Upper-triangular Hermite form (positive diagonal) of a rank-3 span."""
    work = [list(r) for r in rows if any(r)]
    out = []
    for col in range(3):
        sel = [r for r in work if r[col] != 0]
        rest = [r for r in work if r[col] == 0]
        if not sel:
            raise ValueError("rank deficient")
        while len(sel) > 1:
            sel.sort(key=lambda r: abs(r[col]))
            base = sel[0]
            keep = [base]
            for r in sel[1:]:
                q = r[col] // base[col]
                red = [a - q * b for a, b in zip(r, base)]
                if red[col]:
                    keep.append(red)
                elif any(red):
                    rest.append(red)
            sel = keep
        piv = sel[0] if sel[0][col] > 0 else [-a for a in sel[0]]
        out.append(piv)
        work = rest
    for col in (1, 2):
        d = out[col][col]
        for i in range(col):
            q = out[i][col] // d
            if q:
                out[i] = [a - q * b for a, b in zip(out[i], out[col])]
    return tuple(tuple(r) for r in out)


def hnf_contains(h, v) -> bool:
    x0, x1, x2 = v
    if x0 % h[0][0]:
        return False
    c = x0 // h[0][0]
    x1 -= c * h[0][1]
    x2 -= c * h[0][2]
    if x1 % h[1][1]:
        return False
    c = x1 // h[1][1]
    x2 -= c * h[1][2]
    return x2 % h[2][2] == 0


class PrimeIdeal:
    def __init__(self, order: Order, p: int, gen: tuple, f: int, e: int):
        self.order = order
        self.p = p
        self.gen = gen
        self.f = f
        self.e = e
        self.norm = p**f
        rows = [(p, 0, 0), (0, p, 0), (0, 0, p)]
        for b in ((1, 0, 0), (0, 1, 0), (0, 0, 1)):
            rows.append(order.mult(gen, b))
        self.hnf = hnf3(rows)
        self._powers = [self.hnf]

    def power_hnf(self, k: int):
        while len(self._powers) < k:
            prev = self._powers[-1]
            rows = [self.order.mult(a, b) for a in prev for b in self.hnf]
            self._powers.append(hnf3(rows))
        return self._powers[k - 1]

    def valuation(self, v) -> int:
        k = 0
        while hnf_contains(self.power_hnf(k + 1), v):
            k += 1
            if k > 60:
                raise ArithmeticError("runaway valuation")
        return k


def split_primes(order: Order, g: Poly, p: int):
    gp = Poly(g, modulus=p)
    _, factors = gp.factor_list()
    out = []
    for q, e in factors:
        qz = Poly(q, X, domain="ZZ")
        coeffs = [int(c) % p for c in reversed(qz.all_coeffs())]  # ascending
        coeffs += [0] * (4 - len(coeffs))
        gen = list(coeffs[:3])
        if coeffs[3]:
            g1, g2, g3 = order.g
            gen = [
                gen[0] - coeffs[3] * g3,
                gen[1] - coeffs[3] * g2,
                gen[2] - coeffs[3] * g1,
            ]
        out.append(PrimeIdeal(order, p, tuple(gen), q.degree(), e))
    out.sort(key=lambda P: (P.f, P.gen))
    return out


# ---------------------------------------------------------------------------
# embeddings, units, and complete generator searches


class FieldContext:
    """Unit data and bounded-search machinery for one cubic field.

    Log coordinates are per distinct embedding: 3 of them for a totally real
    field (multiplicities 1,1,1), 2 for a complex one (multiplicities 1,2).
    sum_j m_j * log|sigma_j(alpha)| = log|N(alpha)| and units sum to zero.
    """

    def __init__(self, g1: int, g2: int, g3: int, disc: int):
        self.order = Order(g1, g2, g3)
        self.g_poly = poly_of(g1, g2, g3)
        self.disc = disc
        self.rank = 2 if disc > 0 else 1
        mpmath.mp.dps = MP_DPS
        roots = mpmath.polyroots([1, g1, g2, g3], maxsteps=200, extraprec=150)
        reals = [r for r in roots if abs(mpmath.im(r)) < mpmath.mpf(10) ** -25]
        cplx = [r for r in roots if mpmath.im(r) > mpmath.mpf(10) ** -25]
        if disc > 0:
            assert len(reals) == 3
            self.embeddings = [mpmath.mpf(mpmath.re(r)) for r in reals]
            self.mults = (1, 1, 1)
        else:
            assert len(reals) == 1 and len(cplx) == 1
            self.embeddings = [mpmath.mpf(mpmath.re(reals[0])), cplx[0]]
            self.mults = (1, 2)
        self.unit_logs = self._find_unit_logs()
        self.cells = self._build_cells()

    def _abs_logs(self, v):
        out = []
        for emb in self.embeddings:
            val = v[0] + v[1] * emb + v[2] * emb * emb
            out.append(float(mpmath.log(abs(val))))
        return out

    def _find_unit_logs(self):
        """Log-vector basis of a finite-index subgroup of the unit group.

        Fundamental units can be far too large for direct search, so units
        are produced Buchmann-style: integer kernel combinations of the
        prime-ideal valuation vectors of smooth elements have trivial ideal,
        hence are units.  Each kernel row carries its exact integer
        combination over the scanned elements, so the unit's log vector is
        recomputed from scratch in mpmath (no error accumulation), and the
        unit itself is never materialized.  The log lattice is maintained
        with incremental size reduction to keep the basis short.
        """
        prime_table: dict[int, list[PrimeIdeal]] = {}
        col_index: dict = {}

        def columns_for(p: int):
            if p not in prime_table:
                prime_table[p] = split_primes(self.order, self.g_poly, p)
                for P in prime_table[p]:
                    col_index[(P.p, P.gen)] = len(col_index)
            return prime_table[p]

        mp_logs: list[list] = []  # per accepted element, mpmath log vector
        echelon: dict = {}  # pivot col -> (valuation dict, combo dict)
        basis: list[list[float]] = []  # reduced unit log lattice basis
        seen: set = set()
        m = self.mults

        def dot(a, b):
            return sum(mi * ai * bi for mi, ai, bi in zip(m, a, b))

        def reduce_basis() -> None:
            while True:
                basis.sort(key=lambda v: dot(v, v))
                while basis and dot(basis[0], basis[0]) < 0.02:
                    basis.pop(0)
                changed = False
                for i in range(1, len(basis)):
                    for j in range(i):
                        d = dot(basis[j], basis[j])
                        mu = round(dot(basis[i], basis[j]) / d)
                        if mu:
                            basis[i] = [
                                a - mu * b for a, b in zip(basis[i], basis[j])
                            ]
                            changed = True
                if not changed:
                    return

        def register_unit(combo: dict) -> None:
            if not combo or max(abs(c) for c in combo.values()) > 10**6:
                return  # keep log magnitudes small enough for float reduction
            logv = [
                float(sum(c * mp_logs[e][j] for e, c in combo.items()))
                for j in range(len(m))
            ]
            if max(abs(t) for t in logv) > 1e7:
                return
            v = list(logv)
            for _ in range(80):
                moved = False
                for b in basis:
                    mu = round(dot(v, b) / dot(b, b))
                    if mu:
                        v = [a - mu * t for a, t in zip(v, b)]
                        moved = True
                if not moved:
                    break
            # genuine cubic units have weighted log norm well above 0.1;
            # anything tiny here is numerical residue
            if dot(v, v) > 0.02:
                basis.append(v)
                reduce_basis()
                if len(basis) > self.rank:
                    raise ArithmeticError("unit log lattice exceeded rank")

        def consider(vec: dict, combo: dict) -> None:
            while True:
                c = min((k for k, x in vec.items() if x), default=None)
                if c is None:
                    register_unit(combo)
                    return
                if c not in echelon:
                    echelon[c] = (vec, combo)
                    return
                bvec, bcombo = echelon[c]
                g, u, v = _xgcd(bvec[c], vec[c])
                qb, qr = bvec[c] // g, vec[c] // g
                keys = set(bvec) | set(vec)
                new_b = {
                    k: u * bvec.get(k, 0) + v * vec.get(k, 0) for k in keys
                }
                ckeys = set(bcombo) | set(combo)
                new_bc = {
                    k: u * bcombo.get(k, 0) + v * combo.get(k, 0)
                    for k in ckeys
                }
                new_r = {
                    k: qb * vec.get(k, 0) - qr * bvec.get(k, 0) for k in keys
                }
                new_rc = {
                    k: qb * combo.get(k, 0) - qr * bcombo.get(k, 0)
                    for k in ckeys
                }
                if any(abs(x) > 10**6 for x in new_rc.values()) or any(
                    abs(x) > 10**6 for x in new_bc.values()
                ):
                    return  # relations are plentiful; drop rather than blow up
                echelon[c] = (
                    {k: x for k, x in new_b.items() if x},
                    {k: x for k, x in new_bc.items() if x},
                )
                vec = {k: x for k, x in new_r.items() if x}
                combo = {k: x for k, x in new_rc.items() if x}

        def mp_abs_logs(v3):
            out = []
            for emb in self.embeddings:
                val = v3[0] + v3[1] * emb + v3[2] * emb * emb
                out.append(mpmath.log(abs(val)))
            return out

        for box, smooth_bound in (
            (8, 60), (12, 150), (16, 300), (24, 600), (32, 1200)
        ):
            smooth_primes = list(sympy.primerange(2, smooth_bound))
            for x in range(-box, box + 1):
                for y in range(-box, box + 1):
                    for z in range(-box, box + 1):
                        v3 = (x, y, z)
                        if v3 <= (0, 0, 0) or v3 in seen:
                            continue
                        seen.add(v3)
                        nv = abs(self.order.norm(v3))
                        if nv == 0:
                            continue
                        rem = nv
                        hit = []
                        for p in smooth_primes:
                            if rem % p == 0:
                                hit.append(p)
                                while rem % p == 0:
                                    rem //= p
                        if rem != 1:
                            continue
                        vec: dict = {}
                        for p in hit:
                            for P in columns_for(p):
                                k = P.valuation(v3)
                                if k:
                                    vec[col_index[(P.p, P.gen)]] = k
                        mp_logs.append(mp_abs_logs(v3))
                        consider(vec, {len(mp_logs) - 1: 1})
                        if len(basis) == self.rank:
                            return [list(b) for b in basis]
        raise ArithmeticError("unit search failed to reach full rank")

    def _build_cells(self):
        """Centers and per-coordinate radii covering the unit parallelepiped
        {sum t_i * l_i : t in [-1/2, 1/2]^rank} in log space."""
        ncoord = len(self.mults)
        steps = [
            max(1, math.ceil(max(abs(t) for t in vec) / CELL_WIDTH))
            for vec in self.unit_logs
        ]
        cells = []
        for idx in itertools.product(*(range(s) for s in steps)):
            center = [0.0] * ncoord
            radius = [LOG_PAD] * ncoord
            for i, vec in enumerate(self.unit_logs):
                t = (idx[i] + 0.5) / steps[i] - 0.5
                for j in range(ncoord):
                    center[j] += t * vec[j]
                    radius[j] += abs(vec[j]) / (2 * steps[i])
            cells.append((center, radius))
        return cells

    def _gram(self, basis_rows, bounds):
        """Gram of Q(c) = sum_j m_j |sigma_j(sum_i c_i b_i)|^2 / B_j^2.

        Kept in mpmath precision: cells at the far corners of a large unit
        parallelepiped make this matrix extremely ill-conditioned.
        """
        gm = [[mpmath.mpf(0)] * 3 for _ in range(3)]
        for j, emb in enumerate(self.embeddings):
            re_row, im_row = [], []
            for b in basis_rows:
                val = b[0] + b[1] * emb + b[2] * emb * emb
                re_row.append(mpmath.re(val))
                im_row.append(mpmath.im(val))
            scale = mpmath.mpf(self.mults[j]) / mpmath.mpf(bounds[j]) ** 2
            for a in range(3):
                for c in range(3):
                    gm[a][c] += scale * (
                        re_row[a] * re_row[c] + im_row[a] * im_row[c]
                    )
        return gm

    @staticmethod
    def _enumerate_ellipsoid(gram, radius2):
        """Integer triples c with c^T G c <= radius2 (Fincke-Pohst)."""
        rm = [[mpmath.mpf(0)] * 3 for _ in range(3)]  # Cholesky, upper tri
        for i in range(3):
            s = gram[i][i] - sum(rm[k][i] ** 2 for k in range(i))
            if s <= 0:
                raise ArithmeticError("gram matrix not positive definite")
            rm[i][i] = mpmath.sqrt(s)
            for j in range(i + 1, 3):
                rm[i][j] = (
                    gram[i][j] - sum(rm[k][i] * rm[k][j] for k in range(i))
                ) / rm[i][i]
        r = [[float(rm[i][j]) for j in range(3)] for i in range(3)]
        out = []
        lim2 = math.sqrt(radius2) / r[2][2]
        for c2 in range(-int(lim2) - 1, int(lim2) + 2):
            t2 = (c2 * r[2][2]) ** 2
            if t2 > radius2:
                continue
            rem1 = radius2 - t2
            mid1 = -c2 * r[1][2] / r[1][1]
            half1 = math.sqrt(rem1) / r[1][1]
            for c1 in range(
                math.ceil(mid1 - half1) - 1, math.floor(mid1 + half1) + 2
            ):
                t1 = (c1 * r[1][1] + c2 * r[1][2]) ** 2
                if t1 + t2 > radius2:
                    continue
                rem0 = radius2 - t1 - t2
                mid0 = -(c1 * r[0][1] + c2 * r[0][2]) / r[0][0]
                half0 = math.sqrt(rem0) / r[0][0]
                for c0 in range(
                    math.ceil(mid0 - half0) - 1, math.floor(mid0 + half0) + 2
                ):
                    t0 = (c0 * r[0][0] + c1 * r[0][1] + c2 * r[0][2]) ** 2
                    if t0 + t1 + t2 <= radius2:
                        out.append((c0, c1, c2))
        return out

    def elements_with_norm_at_most(self, ideal_hnf, nbound: int):
        """All alpha in the ideal with 0 < |N(alpha)| <= nbound, up to sign
        and units, as a sorted list of (|N(alpha)|, coords)."""
        rows = ideal_hnf
        third = math.log(nbound) / 3.0
        seen = set()
        hits = []
        for center, radius in self.cells:
            bounds = [
                math.exp(third + center[j] + radius[j])
                for j in range(len(self.mults))
            ]
            gram = self._gram(rows, bounds)
            for c in self._enumerate_ellipsoid(gram, 3.0 * ELLIPSOID_MARGIN):
                if c == (0, 0, 0) or c in seen or tuple(-t for t in c) in seen:
                    continue
                seen.add(c)
                v = tuple(
                    c[0] * rows[0][k] + c[1] * rows[1][k] + c[2] * rows[2][k]
                    for k in range(3)
                )
                nv = abs(self.order.norm(v))
                if 0 < nv <= nbound:
                    hits.append((nv, v))
        hits.sort()
        return hits

    def is_principal(self, ideal_hnf) -> bool:
        n = ideal_hnf[0][0] * ideal_hnf[1][1] * ideal_hnf[2][2]
        if n == 1:
            return True
        return any(
            nv == n for nv, _ in self.elements_with_norm_at_most(ideal_hnf, n)
        )


# ---------------------------------------------------------------------------
# class group via closure of factor-base classes


class ClassGroupOracle:
    def __init__(self, ctx: FieldContext, g: Poly):
        self.ctx = ctx
        self.order = ctx.order
        r2 = 1 if ctx.disc < 0 else 0
        self.bound = (2.0 / 9.0) * (4.0 / math.pi) ** r2 * math.sqrt(abs(ctx.disc))
        self.primes_above: dict[int, list[PrimeIdeal]] = {}
        self.fb: list[PrimeIdeal] = []
        for p in sympy.primerange(2, int(self.bound) + 1):
            above = split_primes(self.order, g, int(p))
            self.primes_above[int(p)] = above
            for P in above:
                if P.norm <= self.bound:
                    self.fb.append(P)
        self._prime_index = {
            (P.p, P.gen): P for ps in self.primes_above.values() for P in ps
        }

    # -- factored ideals: dict (p, gen) -> exponent > 0

    def _materialize(self, factored):
        cur = ((1, 0, 0), (0, 1, 0), (0, 0, 1))
        for key in sorted(factored):
            pk = self._prime_index[key].power_hnf(factored[key])
            cur = hnf3([self.order.mult(a, b) for a in cur for b in pk])
        return cur

    def _norm_of(self, factored) -> int:
        n = 1
        for key, e in factored.items():
            n *= self._prime_index[key].norm ** e
        return n

    def _inverse_class(self, factored):
        """Integral ideal in the inverse class: prod_p (p)^c_p / factored."""
        out: dict = {}
        byp: dict[int, dict] = {}
        for key, e in factored.items():
            byp.setdefault(key[0], {})[key] = e
        for p, chunk in byp.items():
            c = max(-(-e // self._prime_index[k].e) for k, e in chunk.items())
            for P in self.primes_above[p]:
                key = (P.p, P.gen)
                e = c * P.e - chunk.get(key, 0)
                if e:
                    out[key] = e
        return out

    @staticmethod
    def _mul(a, b):
        out = dict(a)
        for k, e in b.items():
            out[k] = out.get(k, 0) + e
            if not out[k]:
                del out[k]
        return out

    def _factor_principal(self, v):
        """Factored form of (v); valid when all prime factors of N(v) are
        below the Minkowski bound, which reduction guarantees."""
        nv = abs(self.order.norm(v))
        out = {}
        for p, above in self.primes_above.items():
            if nv % p:
                continue
            check = 0
            for P in above:
                k = P.valuation(v)
                if k:
                    out[(P.p, P.gen)] = k
                    check += k * P.f
            vp = 0
            while nv % p == 0:
                nv //= p
                vp += 1
            if check != vp:
                raise ArithmeticError("valuation mismatch while factoring")
        if nv != 1:
            raise ArithmeticError("principal ideal not smooth over the table")
        return out

    def _sub(self, a, b):
        out = dict(a)
        for k, e in b.items():
            out[k] = out.get(k, 0) - e
            if out[k] < 0:
                raise ArithmeticError("negative exponent in ideal quotient")
            if not out[k]:
                del out[k]
        return out

    def _reduce(self, factored):
        """Integral ideal of norm <= bound in the *inverse* class."""
        h = self._materialize(factored)
        n = self._norm_of(factored)
        nbound = max(1, math.floor(self.bound * n))
        hits = self.ctx.elements_with_norm_at_most(h, nbound)
        if not hits:
            raise ArithmeticError("reduction found no short element")
        _, v = hits[0]
        return self._sub(self._factor_principal(v), factored)

    def class_group_type(self) -> tuple[int, ...]:
        if not self.fb:
            return ()
        reps = [dict()]
        cache = {self._materialize({}): 0}

        def classify(factored) -> int:
            h = self._materialize(factored)
            if h in cache:
                return cache[h]
            for idx, rep in enumerate(reps):
                probe = self._mul(factored, self._inverse_class(rep))
                if self.ctx.is_principal(self._materialize(probe)):
                    cache[h] = idx
                    return idx
            small = self._reduce(self._reduce(factored))
            small_h = self._materialize(small)
            if small_h in cache:
                raise ArithmeticError(
                    "classification inconsistency: new class reduces onto "
                    f"known class {cache[small_h]}"
                )
            reps.append(small)
            idx = len(reps) - 1
            cache[h] = idx
            cache[small_h] = idx
            return idx

        gen_keys = [(P.p, P.gen) for P in self.fb]
        cursor = 0
        while cursor < len(reps):
            for gk in gen_keys:
                classify(self._mul(reps[cursor], {gk: 1}))
            cursor += 1
        h = len(reps)
        if h == 1:
            return ()

        def class_mul(a: int, b: int) -> int:
            return classify(self._mul(reps[a], reps[b]))

        orders = []
        for idx in range(h):
            k = 1
            acc = idx
            while acc != 0:
                acc = class_mul(acc, idx)
                k += 1
                if k > h + 1:
                    raise ArithmeticError("element order exceeded group order")
            orders.append(k)

        # abelian type, one prime at a time, from the counts
        # c_k = #{x : x^(q^k) = e} = q^(sum_i min(lam_i, k))
        parts_by_prime: dict[int, list[int]] = {}
        for q in sympy.primefactors(h):
            deltas = []
            prev_e = 0
            k = 1
            while True:
                c_k = sum(1 for o in orders if (q**k) % o == 0)
                e_k = round(math.log(c_k, q))
                delta = e_k - prev_e  # #parts of lam that are >= k
                if delta == 0:
                    break
                deltas.append(delta)
                prev_e = e_k
                k += 1
            lam = [
                sum(1 for d in deltas if d >= j + 1) for j in range(deltas[0])
            ]
            parts_by_prime[q] = sorted(lam, reverse=True)

        width = max(len(v) for v in parts_by_prime.values())
        invs = []
        for i in range(width):
            d = 1
            for q, parts in parts_by_prime.items():
                if i < len(parts):
                    d *= q ** parts[i]
            invs.append(d)
        invs = sorted(d for d in invs if d > 1)
        total = math.prod(invs)
        if total != h:
            raise ArithmeticError(f"type {invs} inconsistent with order {h}")
        return tuple(invs)


# ---------------------------------------------------------------------------


def main() -> int:
    ap = argparse.ArgumentParser(
        description="generate the class-group oracle fixture"
    )
    ap.add_argument("--height4", type=int, default=HEIGHT4_DEFAULT)
    ap.add_argument(
        "--out", default="src/monocubic/data/cas_oracle_height4_lt_80000.csv"
    )
    ap.add_argument("--limit", type=int, default=0, help="debug: stop after N")
    args = ap.parse_args()

    rows = []
    t0 = time.time()
    for f1, f2, f3 in enumerate_candidate_forms(args.height4):
        g = poly_of(f1, f2, f3)
        disc = int(g.discriminant())
        if disc == 0 or not g.is_irreducible:
            continue
        if not is_maximal_form(g, disc):
            continue
        ctx = FieldContext(f1, f2, f3, disc)
        invs = ClassGroupOracle(ctx, g).class_group_type()
        rows.append((f1, f2, f3, disc, "-".join(str(d) for d in invs)))
        if len(rows) % 50 == 0:
            print(f"  {len(rows)} fields done ({time.time()-t0:.0f}s)", flush=True)
        if args.limit and len(rows) >= args.limit:
            break

    rows.sort()
    with open(args.out, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["f1", "f2", "f3", "field_disc", "class_group"])
        w.writerows(rows)
    print(
        f"{len(rows)} maximal forms written to {args.out} "
        f"in {time.time()-t0:.0f}s"
    )
    return 0


if __name__ == "__main__":
    sys.exit(main())
