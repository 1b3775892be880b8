"""Exact arithmetic on integral binary cubic forms.

A quadruple (f0, f1, f2, f3) stands for f0*x^3 + f1*x^2*y + f2*x*y^2 + f3*y^3.
Canonical representatives of the shear orbits have f0 = 1 and f1 in {-1, 0, 1};
`enumerate_forms` walks exactly one representative per orbit below a height
bound.  All arithmetic is on Python integers, so nothing here can overflow.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator, Literal, Optional

Sign = Literal["pos", "neg", "both"]

SIGNS: tuple[str, ...] = ("pos", "neg", "both")


@dataclass(frozen=True)
class BinaryCubicForm:
    f0: int
    f1: int
    f2: int
    f3: int

    def coefficients(self) -> tuple[int, int, int, int]:
        return (self.f0, self.f1, self.f2, self.f3)

    def __call__(self, x: int, y: int) -> int:
        return self.f0 * x**3 + self.f1 * x**2 * y + self.f2 * x * y**2 + self.f3 * y**3

    def is_canonical(self) -> bool:
        return self.f0 == 1 and self.f1 in (-1, 0, 1)


@dataclass(frozen=True)
class FormInvariants:
    I: int
    J: int
    disc: int
    height4: int  # 4*H = max(4|I|^3, J^2); scaled by 4 so it stays an integer

    @property
    def height(self) -> float:
        return self.height4 / 4.0


@dataclass(frozen=True)
class UnimodularMap:
    """Integer 2x2 matrix [[a, b], [c, d]] with determinant +-1."""

    a: int
    b: int
    c: int
    d: int

    def det(self) -> int:
        return self.a * self.d - self.b * self.c

    def __post_init__(self) -> None:
        if self.det() not in (1, -1):
            raise ValueError(f"matrix {self} is not unimodular (det={self.det()})")


@dataclass(frozen=True)
class ShearMap:
    """Lower-triangular unipotent map [[1, 0], [a, 1]]; always determinant 1."""

    a: int

    def to_unimodular(self) -> UnimodularMap:
        return UnimodularMap(1, 0, self.a, 1)


IDENTITY = UnimodularMap(1, 0, 0, 1)


def invariants(f: BinaryCubicForm) -> FormInvariants:
    f0, f1, f2, f3 = f.coefficients()
    I = f1 * f1 - 3 * f2
    J = -2 * f1**3 + 9 * f1 * f2 - 27 * f3
    disc = (
        f1 * f1 * f2 * f2
        - 4 * f0 * f2**3
        - 4 * f3 * f1**3
        - 27 * f0 * f0 * f3 * f3
        + 18 * f0 * f1 * f2 * f3
    )
    height4 = max(4 * abs(I) ** 3, J * J)
    return FormInvariants(I=I, J=J, disc=disc, height4=height4)


def act(g: UnimodularMap, f: BinaryCubicForm) -> BinaryCubicForm:
    """Twisted substitution action: (1/det g) * f((x, y) * g)."""
    a, b, c, d = g.a, g.b, g.c, g.d
    f0, f1, f2, f3 = f.coefficients()
    c0 = f0 * a**3 + f1 * a * a * b + f2 * a * b * b + f3 * b**3
    c1 = (
        3 * f0 * a * a * c
        + f1 * (a * a * d + 2 * a * b * c)
        + f2 * (2 * a * b * d + b * b * c)
        + 3 * f3 * b * b * d
    )
    c2 = (
        3 * f0 * a * c * c
        + f1 * (2 * a * c * d + b * c * c)
        + f2 * (a * d * d + 2 * b * c * d)
        + 3 * f3 * b * d * d
    )
    c3 = f0 * c**3 + f1 * c * c * d + f2 * c * d * d + f3 * d**3
    det = g.det()
    return BinaryCubicForm(det * c0, det * c1, det * c2, det * c3)


def apply_shear(a: int, f: BinaryCubicForm) -> BinaryCubicForm:
    """f(x + a*y, y) for a monic form; closed-form coefficient update."""
    if f.f0 != 1:
        raise ValueError("shear formulas assume leading coefficient 1")
    f1, f2, f3 = f.f1, f.f2, f.f3
    return BinaryCubicForm(
        1,
        3 * a + f1,
        3 * a * a + 2 * f1 * a + f2,
        a**3 + f1 * a * a + f2 * a + f3,
    )


def reduce(f: BinaryCubicForm) -> tuple[BinaryCubicForm, ShearMap]:
    """Unique shear-equivalent form with f1 in {-1, 0, 1}, and the shear used."""
    if f.f0 != 1:
        raise ValueError("only monic forms (f0 = 1) can be reduced")
    r = f.f1 % 3
    f1_new = r if r <= 1 else r - 3
    a = (f1_new - f.f1) // 3
    return apply_shear(a, f), ShearMap(a)


def form_from_IJ(I: int, J: int) -> Optional[BinaryCubicForm]:
    """Canonical form with the given invariants, or None when (I, J) has none.

    f1 is pinned by J mod 3; f2 and f3 must then come out integral.
    """
    r = J % 3
    f1 = r if r <= 1 else r - 3
    num2 = f1 * f1 - I
    if num2 % 3 != 0:
        return None
    f2 = num2 // 3
    num3 = -2 * f1**3 + 9 * f1 * f2 - J
    if num3 % 27 != 0:
        return None
    f3 = num3 // 27
    return BinaryCubicForm(1, f1, f2, f3)


def _divisors(n: int) -> Iterator[int]:
    n = abs(n)
    d = 1
    while d * d <= n:
        if n % d == 0:
            yield d
            if d != n // d:
                yield n // d
        d += 1


def is_irreducible(f: BinaryCubicForm) -> bool:
    """True iff x^3 + f1*x^2 + f2*x + f3 has no rational root.

    A monic integer cubic is reducible over Q exactly when it has an integer
    root dividing f3 (the root is 0 when f3 = 0).
    """
    if f.f0 != 1:
        raise ValueError("irreducibility test is for monic forms")
    f1, f2, f3 = f.f1, f.f2, f.f3
    if f3 == 0:
        return False
    for d in _divisors(f3):
        for root in (d, -d):
            if ((root + f1) * root + f2) * root + f3 == 0:
                return False
    return True


def _icbrt(n: int) -> int:
    """Largest integer c with c^3 <= n (n >= 0)."""
    if n < 0:
        raise ValueError("negative input")
    c = round(n ** (1.0 / 3.0))
    while c**3 > n:
        c -= 1
    while (c + 1) ** 3 <= n:
        c += 1
    return c


def max_abs_I(ymax: int) -> int:
    """Largest |I| compatible with |I|^3 < ymax."""
    c = _icbrt(ymax)
    return c - 1 if c**3 == ymax else c


def _sign_matches(disc: int, sign: str) -> bool:
    if sign == "both":
        return True
    if sign == "pos":
        return disc > 0
    if sign == "neg":
        return disc < 0
    raise ValueError(f"unknown sign filter {sign!r}")


def enumerate_tile(
    ymax: int,
    sign: Sign,
    i_lo: int,
    i_hi: int,
    irreducible_only: bool = False,
) -> Iterator[tuple[BinaryCubicForm, FormInvariants]]:
    """Canonical forms with I in [i_lo, i_hi), ordered by (I, J).

    Walks (f1, f2, f3) directly so only integral candidates are touched; the
    height cut is exact (|I|^3 < ymax and J^2 < 4*ymax), disc = 0 is dropped,
    and each surviving (I, J) appears exactly once.  Reducible forms are kept
    unless irreducible_only is set: the published reference counts tally every
    nondegenerate class and eject reducible ones only later in the pipeline.
    """
    if ymax < 1:
        raise ValueError("ymax must be >= 1")
    if sign not in SIGNS:
        raise ValueError(f"sign must be one of {SIGNS}")
    four_y = 4 * ymax
    j_bound = math.isqrt(four_y - 1)  # largest |J| with J^2 < 4*ymax
    for I in range(i_lo, i_hi):
        if abs(I) ** 3 >= ymax:
            continue
        res = I % 3
        if res == 2:
            continue
        f1_candidates = (0,) if res == 0 else (-1, 1)
        batch = []
        for f1 in f1_candidates:
            f2 = (f1 * f1 - I) // 3
            c = -2 * f1**3 + 9 * f1 * f2
            # J = c - 27*f3 with |J| <= j_bound
            f3_lo = -((j_bound - c) // 27)
            f3_hi = (j_bound + c) // 27
            for f3 in range(f3_lo, f3_hi + 1):
                J = c - 27 * f3
                if J * J >= four_y:
                    continue
                form = BinaryCubicForm(1, f1, f2, f3)
                inv = invariants(form)
                if inv.disc == 0 or not _sign_matches(inv.disc, sign):
                    continue
                if irreducible_only and not is_irreducible(form):
                    continue
                batch.append((J, form, inv))
        batch.sort(key=lambda t: t[0])
        for _, form, inv in batch:
            yield form, inv


def enumerate_forms(
    ymax: int, sign: Sign = "both", irreducible_only: bool = False
) -> Iterator[tuple[BinaryCubicForm, FormInvariants]]:
    """One canonical representative per shear class with height < ymax."""
    imax = max_abs_I(ymax)
    yield from enumerate_tile(ymax, sign, -imax, imax + 1, irreducible_only)
