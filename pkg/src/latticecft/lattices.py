"""Even positive definite lattices and their discriminant groups.

All arithmetic is exact: Gram data are Python ints, the discriminant
bilinear form is stored as rationals mod 1 and the quadratic form as
rationals mod 2.  The discriminant group A is always presented in
invariant-factor coordinates fixed once per lattice by a Smith normal
form of the Gram matrix, so element iteration and all derived matrices
are deterministic.
"""

from __future__ import annotations

import cmath
import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .errors import NotPositiveDefinite, NotSymmetric, OddDiagonal
from .exact import det_int

IntMatrix = tuple[tuple[int, ...], ...]


def _as_int_matrix(gram) -> IntMatrix:
    rows = []
    for row in gram:
        rows.append(tuple(int(x) for x in row))
    return tuple(rows)


@dataclass(frozen=True)
class EvenLattice:
    """Positive definite even lattice given by its Gram matrix."""

    gram: IntMatrix
    rank: int
    det: int
    level_ell: int


def validate_even_lattice(gram) -> EvenLattice:
    """Check symmetry, even diagonal and positive definiteness.

    The level is the gcd of all Gram entries: the set of values the
    bilinear form takes on the lattice is exactly the ideal those
    entries generate.
    """
    m = _as_int_matrix(gram)
    r = len(m)
    if r == 0 or any(len(row) != r for row in m):
        raise NotSymmetric("Gram matrix must be square and nonempty")
    for i in range(r):
        for j in range(r):
            if m[i][j] != m[j][i]:
                raise NotSymmetric(f"entry ({i},{j}) != ({j},{i})")
    for i in range(r):
        if m[i][i] % 2 != 0:
            raise OddDiagonal(f"diagonal entry {m[i][i]} at {i} is odd")
    for k in range(1, r + 1):
        minor = det_int([row[:k] for row in m[:k]])
        if minor <= 0:
            raise NotPositiveDefinite(f"leading {k}x{k} minor is {minor}")
    d = det_int(m)
    ell = 0
    for row in m:
        for x in row:
            ell = gcd(ell, x)
    return EvenLattice(gram=m, rank=r, det=d, level_ell=ell)


def smith_normal_form(m) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Return (U, D, V) with U*M*V = D, U and V unimodular and D diagonal
    with a divisibility chain d1 | d2 | ...  Works for any integer matrix."""
    u, d, v, _ = _snf_with_inverse(_as_int_matrix(m))
    return u, d, v


def _snf_with_inverse(m: IntMatrix):
    """Smith normal form that also tracks U^{-1} (needed for discriminant
    coordinates).  Returns (U, D, V, Uinv) with U*M*V = D."""
    a = [list(row) for row in m]
    rows = len(a)
    cols = len(a[0]) if rows else 0
    u = [[int(i == j) for j in range(rows)] for i in range(rows)]
    uinv = [[int(i == j) for j in range(rows)] for i in range(rows)]
    v = [[int(i == j) for j in range(cols)] for i in range(cols)]

    def row_swap(i, k):
        a[i], a[k] = a[k], a[i]
        u[i], u[k] = u[k], u[i]
        for r in uinv:
            r[i], r[k] = r[k], r[i]

    def row_add(i, k, c):
        # row i += c * row k
        for j in range(cols):
            a[i][j] += c * a[k][j]
        for j in range(rows):
            u[i][j] += c * u[k][j]
        for r in uinv:
            r[k] -= c * r[i]

    def row_neg(i):
        for j in range(cols):
            a[i][j] = -a[i][j]
        for j in range(rows):
            u[i][j] = -u[i][j]
        for r in uinv:
            r[i] = -r[i]

    def col_swap(j, k):
        for r in a:
            r[j], r[k] = r[k], r[j]
        for r in v:
            r[j], r[k] = r[k], r[j]

    def col_add(j, k, c):
        # col j += c * col k
        for r in a:
            r[j] += c * r[k]
        for r in v:
            r[j] += c * r[k]

    def col_neg(j):
        for r in a:
            r[j] = -r[j]
        for r in v:
            r[j] = -r[j]

    n = min(rows, cols)
    for t in range(n):
        while True:
            # move a minimal nonzero entry of the trailing block to (t,t)
            pivot = None
            best = None
            for i in range(t, rows):
                for j in range(t, cols):
                    x = abs(a[i][j])
                    if x and (best is None or x < best):
                        best, pivot = x, (i, j)
            if pivot is None:
                break
            pi, pj = pivot
            if pi != t:
                row_swap(t, pi)
            if pj != t:
                col_swap(t, pj)
            if a[t][t] < 0:
                row_neg(t)
            clean = True
            for i in range(t + 1, rows):
                q = a[i][t] // a[t][t]
                if q:
                    row_add(i, t, -q)
                if a[i][t]:
                    clean = False
            for j in range(t + 1, cols):
                q = a[t][j] // a[t][t]
                if q:
                    col_add(j, t, -q)
                if a[t][j]:
                    clean = False
            if clean:
                # pivot must also divide the rest of the block
                offender = None
                for i in range(t + 1, rows):
                    for j in range(t + 1, cols):
                        if a[i][j] % a[t][t]:
                            offender = i
                            break
                    if offender is not None:
                        break
                if offender is None:
                    break
                row_add(t, offender, 1)
    d = tuple(tuple(row) for row in a)
    return (tuple(tuple(r) for r in u), d,
            tuple(tuple(r) for r in v), tuple(tuple(r) for r in uinv))


@dataclass(frozen=True)
class GroupElement:
    """Element of a discriminant group in invariant-factor coordinates."""

    coords: tuple[int, ...]


class DiscriminantGroup:
    """The finite group A = (dual lattice)/(lattice) with its induced
    bilinear form mod 1 and quadratic form mod 2.

    Coordinates: A = prod Z/d_i over the nontrivial invariant factors
    d_1 | d_2 | ... of the Gram matrix; iteration over elements is
    lexicographic in these coordinates.
    """

    def __init__(self, lattice: EvenLattice):
        self.lattice = lattice
        gram = lattice.gram
        r = lattice.rank
        u, d, v, uinv = _snf_with_inverse(gram)
        all_factors = tuple(d[i][i] for i in range(r))
        keep = tuple(i for i in range(r) if all_factors[i] > 1)
        self.invariant_factors: tuple[int, ...] = tuple(all_factors[i] for i in keep)
        self.order = math.prod(self.invariant_factors) if keep else 1
        # lift of the i-th generator to the dual lattice: solve G x = Uinv e_i
        lifts = []
        for i in keep:
            col = [Fraction(uinv[k][i]) for k in range(r)]
            lifts.append(tuple(_solve_fraction(gram, col)))
        self.lift_vectors: tuple[tuple[Fraction, ...], ...] = tuple(lifts)
        k = len(keep)
        bil = [[Fraction(0)] * k for _ in range(k)]
        for i in range(k):
            for j in range(k):
                s = sum(self.lift_vectors[i][t] * uinv[t][keep[j]] for t in range(r))
                bil[i][j] = s % 1
        self.bilinear_matrix: tuple[tuple[Fraction, ...], ...] = tuple(
            tuple(row) for row in bil)
        quad = []
        for i in range(k):
            s = sum(self.lift_vectors[i][t] * uinv[t][keep[i]] for t in range(r))
            quad.append(s % 2)
        self.quadratic_diag: tuple[Fraction, ...] = tuple(quad)

    # -- elements ---------------------------------------------------------

    @property
    def zero(self) -> GroupElement:
        return GroupElement((0,) * len(self.invariant_factors))

    def element(self, coords) -> GroupElement:
        return GroupElement(self.reduce(tuple(coords)))

    def reduce(self, coords: tuple[int, ...]) -> tuple[int, ...]:
        if len(coords) != len(self.invariant_factors):
            raise ValueError("coordinate length does not match invariant factors")
        return tuple(c % d for c, d in zip(coords, self.invariant_factors))

    def elements(self):
        for coords in itertools.product(*(range(d) for d in self.invariant_factors)):
            yield GroupElement(coords)

    def add(self, a: GroupElement, b: GroupElement) -> GroupElement:
        return GroupElement(self.add_coords(a.coords, b.coords))

    def neg(self, a: GroupElement) -> GroupElement:
        return GroupElement(self.neg_coords(a.coords))

    def add_coords(self, a: tuple[int, ...], b: tuple[int, ...]) -> tuple[int, ...]:
        return tuple((x + y) % d for x, y, d in zip(a, b, self.invariant_factors))

    def neg_coords(self, a: tuple[int, ...]) -> tuple[int, ...]:
        return tuple((-x) % d for x, d in zip(a, self.invariant_factors))

    def generators(self) -> tuple[GroupElement, ...]:
        k = len(self.invariant_factors)
        return tuple(GroupElement(tuple(int(i == j) for j in range(k)))
                     for i in range(k))

    def lift(self, a: GroupElement) -> tuple[Fraction, ...]:
        """Representative of a in dual-lattice coordinates."""
        r = self.lattice.rank
        out = [Fraction(0)] * r
        for c, vec in zip(a.coords, self.lift_vectors):
            for t in range(r):
                out[t] += c * vec[t]
        return tuple(out)

    # -- forms ------------------------------------------------------------

    def bilinear(self, a: GroupElement, b: GroupElement) -> Fraction:
        return self.bilinear_coords(a.coords, b.coords)

    def bilinear_coords(self, a: tuple[int, ...], b: tuple[int, ...]) -> Fraction:
        s = Fraction(0)
        for i, x in enumerate(a):
            if x:
                row = self.bilinear_matrix[i]
                for j, y in enumerate(b):
                    if y:
                        s += x * y * row[j]
        return s % 1

    def quadratic(self, a: GroupElement) -> Fraction:
        c = a.coords
        s = Fraction(0)
        for i, x in enumerate(c):
            if x:
                s += x * x * self.quadratic_diag[i]
                for j in range(i + 1, len(c)):
                    if c[j]:
                        s += 2 * x * c[j] * self.bilinear_matrix[i][j]
        return s % 2

    def bilinear_float_table(self):
        """order x order table of float bilinear values, elements in
        lexicographic order; cached for hot loops."""
        tab = getattr(self, "_bft", None)
        if tab is None:
            els = list(self.elements())
            tab = [[float(self.bilinear(a, b)) for b in els] for a in els]
            self._bft = tab
        return tab

    def element_index(self, a: GroupElement) -> int:
        idx = 0
        for c, d in zip(a.coords, self.invariant_factors):
            idx = idx * d + c
        return idx

    def __repr__(self) -> str:
        return f"DiscriminantGroup(factors={self.invariant_factors})"


def _solve_fraction(gram: IntMatrix, rhs: list[Fraction]) -> list[Fraction]:
    """Solve gram * x = rhs exactly over the rationals."""
    r = len(gram)
    aug = [[Fraction(gram[i][j]) for j in range(r)] + [rhs[i]] for i in range(r)]
    for col in range(r):
        piv = next(i for i in range(col, r) if aug[i][col] != 0)
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = 1 / aug[col][col]
        aug[col] = [x * inv for x in aug[col]]
        for i in range(r):
            if i != col and aug[i][col] != 0:
                f = aug[i][col]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[col])]
    return [aug[i][r] for i in range(r)]


def discriminant_group(lat: EvenLattice) -> DiscriminantGroup:
    return DiscriminantGroup(lat)


def gauss_sum(disc: DiscriminantGroup) -> complex:
    """Sum of e^(pi i q(a)) over A; modulus sqrt|A|, argument encodes the
    lattice signature mod 8."""
    total = 0j
    for a in disc.elements():
        total += cmath.exp(1j * cmath.pi * float(disc.quadratic(a)))
    return total


def signature_mod8(disc: DiscriminantGroup, tol: float = 1e-9) -> int:
    """Signature mod 8 certified from the Gauss sum phase."""
    g = gauss_sum(disc)
    mod = abs(g)
    if abs(mod - math.sqrt(disc.order)) > tol * max(1.0, math.sqrt(disc.order)):
        raise ArithmeticError(f"Gauss sum modulus {mod} != sqrt({disc.order})")
    sigma = round((cmath.phase(g) / (2 * math.pi)) * 8) % 8
    if abs(g - mod * cmath.exp(2j * cmath.pi * sigma / 8)) > tol * max(1.0, mod):
        raise ArithmeticError("Gauss sum phase is not a multiple of 2*pi/8")
    return sigma


# Gram matrices bundled for the verification suite and the CLI.
A1_GRAM: IntMatrix = ((2,),)
A2_GRAM: IntMatrix = ((2, 1), (1, 2))
D4_GRAM: IntMatrix = ((2, -1, 0, 0), (-1, 2, -1, -1), (0, -1, 2, 0), (0, -1, 0, 2))
E8_GRAM: IntMatrix = (
    (2, -1, 0, 0, 0, 0, 0, 0),
    (-1, 2, -1, 0, 0, 0, 0, 0),
    (0, -1, 2, -1, 0, 0, 0, 0),
    (0, 0, -1, 2, -1, 0, 0, 0),
    (0, 0, 0, -1, 2, -1, 0, -1),
    (0, 0, 0, 0, -1, 2, -1, 0),
    (0, 0, 0, 0, 0, -1, 2, 0),
    (0, 0, 0, 0, -1, 0, 0, 2),
)

BUNDLED_GRAMS: dict[str, IntMatrix] = {
    "a1": A1_GRAM,
    "a2": A2_GRAM,
    "d4": D4_GRAM,
    "e8": E8_GRAM,
}

# extra small lattices used by tests and sweeps
EXTRA_GRAMS: dict[str, IntMatrix] = {
    "z4": ((4,),),
    "z6": ((6,),),
    "z8": ((8,),),
    "z2z2": ((2, 0), (0, 2)),
    "z2z8": ((2, 0), (0, 8)),
}
