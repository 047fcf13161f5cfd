"""Truncated positive-energy loop-group data.

Sector state spaces are pairs (dual-lattice shift, colored multipartition)
graded by energy <x,x>/2 + |partition|; characters are integer q-series
computed by generating functions and cross-checked against explicit state
enumeration.  The oscillator algebra is realized on the truncated basis
with [a_m, a_n^+] = m delta, the normalization in which the structure
constants stay integral.  Bogoliubov vacuum overlaps are the finite-mode
shadow of polarization changes: det(1 - T*T)^(1/4) against an honest
Gaussian quadrature.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import NonIntegralEnergy, NotContractive
from .lattices import DiscriminantGroup, EvenLattice, GroupElement

# ---------------------------------------------------------------------------
# loop cocycle


@dataclass(frozen=True)
class TrigLoop:
    """Lie-algebra-valued trigonometric polynomial, by Fourier modes
    {m: complex vector}; real loops have xi_{-m} = conj(xi_m)."""

    modes: tuple[tuple[int, tuple[complex, ...]], ...]
    rank: int

    @staticmethod
    def from_modes(modes: dict[int, np.ndarray]) -> "TrigLoop":
        rank = None
        out = []
        for m, vec in sorted(modes.items()):
            vec = tuple(complex(x) for x in np.atleast_1d(vec))
            rank = len(vec) if rank is None else rank
            if len(vec) != rank:
                raise ValueError("inconsistent coefficient lengths")
            out.append((int(m), vec))
        return TrigLoop(modes=tuple(out), rank=rank or 1)

    @staticmethod
    def from_cos_sin(const=None, cos: dict | None = None,
                     sin: dict | None = None) -> "TrigLoop":
        modes: dict[int, np.ndarray] = {}
        if const is not None:
            modes[0] = np.atleast_1d(np.asarray(const, dtype=complex))

        def bump(m, vec):
            vec = np.atleast_1d(np.asarray(vec, dtype=complex))
            modes[m] = modes.get(m, np.zeros_like(vec)) + vec

        for k, vec in (cos or {}).items():
            vec = np.atleast_1d(np.asarray(vec, dtype=complex))
            bump(k, vec / 2)
            bump(-k, vec / 2)
        for k, vec in (sin or {}).items():
            vec = np.atleast_1d(np.asarray(vec, dtype=complex))
            bump(k, vec / 2j)
            bump(-k, -vec / 2j)
        return TrigLoop.from_modes(modes)

    def coefficient(self, m: int) -> np.ndarray:
        for mm, vec in self.modes:
            if mm == m:
                return np.asarray(vec)
        return np.zeros(self.rank, dtype=complex)

    def __call__(self, angle: float) -> np.ndarray:
        out = np.zeros(self.rank, dtype=complex)
        for m, vec in self.modes:
            out += np.asarray(vec) * np.exp(1j * m * angle)
        return out.real if np.max(np.abs(out.imag)) < 1e-12 else out

    def derivative(self) -> "TrigLoop":
        return TrigLoop.from_modes({m: 1j * m * np.asarray(vec)
                                    for m, vec in self.modes})


def loop_cocycle(xi: TrigLoop, eta: TrigLoop, gram=None) -> float:
    """Integral over the circle of <xi, d eta>: by mode pairing equal to
    -2 pi i sum_m m <xi_m, eta_{-m}> (the inner product extended
    bilinearly, default the standard one)."""
    if xi.rank != eta.rank:
        raise ValueError("loops have different ranks")
    g = np.eye(xi.rank) if gram is None else np.asarray(gram, dtype=float)
    total = 0j
    for m, vec in xi.modes:
        if m == 0:
            continue
        other = eta.coefficient(-m)
        total += -2j * math.pi * m * (np.asarray(vec) @ g @ other)
    if abs(total.imag) > 1e-9 * max(1.0, abs(total)):
        raise ArithmeticError("cocycle of real loops should be real")
    return float(total.real)


# ---------------------------------------------------------------------------
# truncated oscillator algebra


@dataclass(frozen=True)
class ModeTruncation:
    rank: int
    max_mode: int
    max_energy: int

    def __post_init__(self):
        if self.rank < 1 or self.max_mode < 1 or self.max_energy < 0:
            raise ValueError("rank and max_mode positive, max_energy nonnegative")


Occupation = tuple[tuple[tuple[int, int], int], ...]  # ((mode, color), count)


def oscillator_basis(tr: ModeTruncation) -> list[Occupation]:
    """All colored occupation states with energy <= max_energy and modes
    <= max_mode, ordered by (energy, occupation)."""
    modes = [(n, c) for n in range(1, min(tr.max_mode, tr.max_energy) + 1)
             for c in range(tr.rank)]
    states: list[Occupation] = []

    def rec(i, remaining, acc):
        if i == len(modes):
            states.append(tuple(acc))
            return
        n, c = modes[i]
        k = 0
        while k * n <= remaining:
            if k:
                acc.append(((n, c), k))
            rec(i + 1, remaining - k * n, acc)
            if k:
                acc.pop()
            k += 1

    rec(0, tr.max_energy, [])
    states.sort(key=lambda occ: (occupation_energy(occ), occ))
    return states


def occupation_energy(occ: Occupation) -> int:
    return sum(n * k for (n, _), k in occ)


def mode_operators(tr: ModeTruncation):
    """Lowering/raising matrices per (mode, color) on the truncated basis,
    normalized so that [a_m, a_m^+] = m on states that stay inside the
    truncation."""
    basis = oscillator_basis(tr)
    index = {occ: i for i, occ in enumerate(basis)}
    dim = len(basis)
    out = {}
    for n in range(1, min(tr.max_mode, tr.max_energy) + 1):
        for c in range(tr.rank):
            a = np.zeros((dim, dim))
            adag = np.zeros((dim, dim))
            for i, occ in enumerate(basis):
                d = dict(occ)
                k = d.get((n, c), 0)
                if k:
                    d2 = dict(d)
                    d2[(n, c)] = k - 1
                    if d2[(n, c)] == 0:
                        del d2[(n, c)]
                    j = index[tuple(sorted(d2.items()))]
                    a[j, i] = math.sqrt(n * k)
                if occupation_energy(occ) + n <= tr.max_energy:
                    d2 = dict(d)
                    d2[(n, c)] = k + 1
                    j = index[tuple(sorted(d2.items()))]
                    adag[j, i] = math.sqrt(n * (k + 1))
            out[(n, c)] = (a, adag)
    return out


# ---------------------------------------------------------------------------
# sector characters


def _gram_quadratic(gram, v) -> Fraction:
    r = len(gram)
    return sum(v[i] * gram[i][j] * v[j] for i in range(r) for j in range(r))


def minimal_norm_lift(lat: EvenLattice, disc: DiscriminantGroup,
                      phi: GroupElement) -> tuple[Fraction, ...]:
    """Minimal-norm dual-lattice representative of the coset phi, ties
    broken lexicographically."""
    r = lat.rank
    lift0 = disc.lift(phi)
    q0 = _gram_quadratic(lat.gram, lift0)
    lam_min = float(np.min(np.linalg.eigvalsh(np.array(lat.gram, dtype=float))))
    half = int(math.ceil(math.sqrt(float(q0) / lam_min + 1e-12))) + 1 if q0 else 0
    best = None
    for mu in itertools.product(range(-half, half + 1), repeat=r):
        cand = tuple(l0 + m for l0, m in zip(lift0, mu))
        q = _gram_quadratic(lat.gram, cand)
        key = (q, cand)
        if best is None or key < best:
            best = key
    return best[1]


def _lattice_offsets(lat: EvenLattice, lift: tuple[Fraction, ...],
                     max_energy: int) -> list[int]:
    """Counts, by integer energy offset above the ground energy, of the
    coset vectors lift + Z^r."""
    r = lat.rank
    ground = _gram_quadratic(lat.gram, lift) / 2
    bound = ground + max_energy
    lam_min = float(np.min(np.linalg.eigvalsh(np.array(lat.gram, dtype=float))))
    half = int(math.ceil(math.sqrt(2 * float(bound) / lam_min + 1e-12))) + 1
    counts = [0] * (max_energy + 1)
    for mu in itertools.product(range(-half, half + 1), repeat=r):
        v = tuple(l0 + m for l0, m in zip(lift, mu))
        e = _gram_quadratic(lat.gram, v) / 2
        if e <= bound:
            off = e - ground
            if off.denominator != 1:
                raise NonIntegralEnergy(
                    f"coset energies differ by {off}, not an integer")
            counts[int(off)] += 1
    return counts


def partition_counts(max_energy: int, colors: int) -> list[int]:
    """Coefficients of prod_{k>=1} (1 - q^k)^(-colors) up to max_energy."""
    dp = [0] * (max_energy + 1)
    dp[0] = 1
    for k in range(1, max_energy + 1):
        for _ in range(colors):
            for n in range(k, max_energy + 1):
                dp[n] += dp[n - k]
    return dp


@dataclass(frozen=True)
class SectorCharacter:
    ground_energy: Fraction
    coefficients: tuple[int, ...]
    lift: tuple[Fraction, ...]


def sector_character(lat: EvenLattice, disc: DiscriminantGroup,
                     phi: GroupElement, max_energy: int) -> SectorCharacter:
    """Energy-graded dimensions of the sector phi: the theta series of the
    shifted lattice divided by rank copies of the Euler product, shifted
    by the ground energy."""
    lift = minimal_norm_lift(lat, disc, phi)
    ground = _gram_quadratic(lat.gram, lift) / 2
    offsets = _lattice_offsets(lat, lift, max_energy)
    osc = partition_counts(max_energy, lat.rank)
    coeffs = [0] * (max_energy + 1)
    for off, cnt in enumerate(offsets):
        if not cnt:
            continue
        for m in range(max_energy + 1 - off):
            coeffs[off + m] += cnt * osc[m]
    return SectorCharacter(ground_energy=ground, coefficients=tuple(coeffs),
                           lift=lift)


@dataclass(frozen=True)
class FockState:
    """A dual-lattice shift together with a colored multipartition."""

    sector_vector: tuple[Fraction, ...]
    occupation: Occupation

    def energy(self, lat: EvenLattice) -> Fraction:
        return _gram_quadratic(lat.gram, self.sector_vector) / 2 \
            + occupation_energy(self.occupation)


def enumerate_sector_states(lat: EvenLattice, disc: DiscriminantGroup,
                            phi: GroupElement, max_offset: int) -> list[FockState]:
    """Explicit states of the sector with energy up to ground + max_offset."""
    lift = minimal_norm_lift(lat, disc, phi)
    ground = _gram_quadratic(lat.gram, lift) / 2
    bound = ground + max_offset
    r = lat.rank
    lam_min = float(np.min(np.linalg.eigvalsh(np.array(lat.gram, dtype=float))))
    half = int(math.ceil(math.sqrt(2 * float(bound) / lam_min + 1e-12))) + 1
    tr = ModeTruncation(rank=r, max_mode=max(max_offset, 1),
                        max_energy=max_offset)
    osc_states = oscillator_basis(tr)
    out = []
    for mu in itertools.product(range(-half, half + 1), repeat=r):
        v = tuple(l0 + m for l0, m in zip(lift, mu))
        e_lat = _gram_quadratic(lat.gram, v) / 2
        if e_lat > bound:
            continue
        room = bound - e_lat
        for occ in osc_states:
            if occupation_energy(occ) <= room:
                out.append(FockState(sector_vector=v, occupation=occ))
    return out


# ---------------------------------------------------------------------------
# the annulus sewing identity


@dataclass(frozen=True)
class SewingReport:
    max_energy: int
    equal: bool
    lhs_table: tuple
    rhs_table: tuple


def _enumerated_partition_counts(max_energy: int, colors: int) -> list[int]:
    # explicit state enumeration; the independent route next to the
    # generating-function dp
    tr = ModeTruncation(rank=colors, max_mode=max(max_energy, 1),
                        max_energy=max_energy)
    counts = [0] * (max_energy + 1)
    for occ in oscillator_basis(tr):
        counts[occupation_energy(occ)] += 1
    return counts


def annulus_sewing_check(lat: EvenLattice, disc: DiscriminantGroup,
                         max_energy: int) -> SewingReport:
    """Two routes to the annulus character.

    Left: sum over sectors phi of the product of the sector character with
    itself in (q, qbar).  Right: direct enumeration of pairs of dual
    vectors whose difference is integral, weighted by enumerated
    oscillator counts.  Exact integer tables, keyed by the energy pair.
    """
    lhs: dict[tuple[Fraction, Fraction], int] = {}
    for phi in disc.elements():
        ch = sector_character(lat, disc, phi, max_energy)
        g0 = ch.ground_energy
        for m, cm in enumerate(ch.coefficients):
            if not cm:
                continue
            for n, cn in enumerate(ch.coefficients):
                if not cn:
                    continue
                e1, e2 = g0 + m, g0 + n
                if e1 + e2 <= max_energy:
                    key = (e1, e2)
                    lhs[key] = lhs.get(key, 0) + cm * cn

    rhs: dict[tuple[Fraction, Fraction], int] = {}
    r = lat.rank
    lam_min_dual = 1.0 / float(
        np.max(np.linalg.eigvalsh(np.array(lat.gram, dtype=float))))
    half = int(math.ceil(math.sqrt(2 * max_energy / lam_min_dual + 1e-12))) + 1
    gram_inv_cols = _dual_basis(lat.gram)
    duals = []
    for k in itertools.product(range(-half, half + 1), repeat=r):
        v = tuple(sum(gram_inv_cols[j][i] * k[j] for j in range(r))
                  for i in range(r))
        e = _gram_quadratic(lat.gram, v) / 2
        if e <= max_energy:
            duals.append((v, e))
    osc = _enumerated_partition_counts(max_energy, r)
    for v1, e1 in duals:
        for v2, e2 in duals:
            if e1 + e2 > max_energy:
                continue
            if any((x - y).denominator != 1 for x, y in zip(v1, v2)):
                continue  # not the same coset
            budget = max_energy - e1 - e2
            for m in range(int(budget) + 1):
                if not osc[m]:
                    continue
                for n in range(int(budget) - m + 1):
                    if not osc[n]:
                        continue
                    key = (e1 + m, e2 + n)
                    rhs[key] = rhs.get(key, 0) + osc[m] * osc[n]

    def freeze(table):
        return tuple(sorted(((str(k[0]), str(k[1])), v)
                            for k, v in table.items() if v))

    lhs_t, rhs_t = freeze(lhs), freeze(rhs)
    return SewingReport(max_energy=max_energy, equal=lhs_t == rhs_t,
                        lhs_table=lhs_t, rhs_table=rhs_t)


def _dual_basis(gram) -> list[list[Fraction]]:
    r = len(gram)
    cols = []
    for i in range(r):
        rhs = [Fraction(int(k == i)) for k in range(r)]
        aug = [[Fraction(gram[a][b]) for b in range(r)] + [rhs[a]]
               for a in range(r)]
        for col in range(r):
            piv = next(j for j in range(col, r) if aug[j][col] != 0)
            aug[col], aug[piv] = aug[piv], aug[col]
            inv = 1 / aug[col][col]
            aug[col] = [x * inv for x in aug[col]]
            for j in range(r):
                if j != col and aug[j][col] != 0:
                    f = aug[j][col]
                    aug[j] = [x - f * y for x, y in zip(aug[j], aug[col])]
        cols.append([aug[j][r] for j in range(r)])
    return cols


# ---------------------------------------------------------------------------
# Bogoliubov overlaps


def bogoliubov_overlap(t_matrix) -> float:
    """Vacuum overlap for a polarization change with block T:
    det(1 - T*T)^(1/4).  Requires the operator norm of T below 1."""
    t = np.atleast_2d(np.asarray(t_matrix, dtype=complex))
    if t.shape[0] != t.shape[1] or t.shape[0] > 4:
        raise ValueError("T must be square with dimension <= 4")
    norm = float(np.linalg.norm(t, 2))
    if norm >= 1.0:
        raise NotContractive(f"operator norm {norm} >= 1")
    det = np.linalg.det(np.eye(t.shape[0]) - t.conj().T @ t)
    return float(det.real) ** 0.25


def gaussian_overlap_quadrature(t_matrix, points_per_dim: int = 1601,
                                width: float = 10.0) -> float:
    """The same overlap from wavefunctions: |<psi_0, psi_T>| normalized,
    with psi_T(x) ~ exp(-x^T M x / 2), M = (1 - T)(1 + T)^{-1}, integrated
    on a tensor trapezoid grid.  Supports dimensions 1 and 2; T must be
    symmetric (a bona fide squeezed vacuum)."""
    t = np.atleast_2d(np.asarray(t_matrix, dtype=complex))
    dim = t.shape[0]
    if dim > 2:
        raise ValueError("quadrature oracle supports dimensions 1 and 2")
    if np.max(np.abs(t - t.T)) > 1e-12:
        raise ValueError("squeezed-vacuum wavefunctions need symmetric T")
    if float(np.linalg.norm(t, 2)) >= 1.0:
        raise NotContractive("operator norm >= 1")
    m = (np.eye(dim) - t) @ np.linalg.inv(np.eye(dim) + t)
    lam = float(np.min(np.linalg.eigvalsh(m.real)))
    span = width / math.sqrt(min(lam, 1.0))
    xs = np.linspace(-span, span, points_per_dim)
    if dim == 1:
        psi0 = np.exp(-xs ** 2 / 2)
        psit = np.exp(-m[0, 0] * xs ** 2 / 2)
        inner = np.trapezoid(np.conj(psi0) * psit, xs)
        n0 = np.trapezoid(np.abs(psi0) ** 2, xs)
        nt = np.trapezoid(np.abs(psit) ** 2, xs)
        return float(abs(inner) / math.sqrt(float(n0.real * nt.real)))
    x0, x1 = np.meshgrid(xs, xs, indexing="ij")
    quad = (m[0, 0] * x0 ** 2 + 2 * m[0, 1] * x0 * x1 + m[1, 1] * x1 ** 2)
    psi0 = np.exp(-(x0 ** 2 + x1 ** 2) / 2)
    psit = np.exp(-quad / 2)

    def integrate(f):
        return np.trapezoid(np.trapezoid(f, xs, axis=1), xs, axis=0)

    inner = integrate(np.conj(psi0) * psit)
    n0 = integrate(np.abs(psi0) ** 2)
    nt = integrate(np.abs(psit) ** 2)
    return float(abs(inner) / math.sqrt(float(n0.real * nt.real)))


# ---------------------------------------------------------------------------
# positivity


@dataclass(frozen=True)
class PositivityReport:
    ok: bool
    ground_energy: Fraction | None


def positive_energy_check(energies) -> PositivityReport:
    """True iff the grading has spectrum in ground + Z>=0 with ground >= 0."""
    vals = [Fraction(e) for e in energies]
    if not vals:
        return PositivityReport(ok=True, ground_energy=None)
    ground = min(vals)
    ok = ground >= 0 and all((e - ground).denominator == 1 for e in vals)
    return PositivityReport(ok=ok, ground_energy=ground)
