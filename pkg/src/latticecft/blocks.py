"""Conformal-block dimensions and modular data.

Block spaces attach to labeled surfaces: per component the dimension is
|A|^genus when the signed boundary-label sum vanishes and 0 otherwise,
multiplicatively over components.  The genus-1 block space C^A carries
the modular S and T matrices of the discriminant form; the framing
factor exp(-2 pi i sigma/24) is kept as metadata rather than folded into
T, so that (S T)^3 = exp(2 pi i sigma/8) S^2 is the relation the suite
verifies, with sigma certified by the Gauss-sum oracle.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import InvalidSplit, MissingLabel
from .lattices import DiscriminantGroup, EvenLattice, signature_mod8
from .surfaces import (
    IN,
    OUT,
    BlockLabel,
    Surface,
    delta_obstruction,
    glue,
)


@dataclass(frozen=True)
class BlockSpace:
    surface: Surface
    labels: BlockLabel
    dimension: int


def block_dimension(s: Surface, labels: BlockLabel,
                    disc: DiscriminantGroup) -> int:
    """Product over components of |A|^g, or 0 where the label obstruction
    is nonzero."""
    deltas = delta_obstruction(s, labels, disc)
    dim = 1
    for comp, d in zip(s.components, deltas):
        if d != disc.zero:
            return 0
        dim *= disc.order ** comp.genus
    return dim


def block_space(s: Surface, labels: BlockLabel,
                disc: DiscriminantGroup) -> BlockSpace:
    return BlockSpace(s, labels, block_dimension(s, labels, disc))


def verify_tensor_duality(s1: Surface, s2: Surface, labels: BlockLabel,
                          disc: DiscriminantGroup) -> dict:
    """Dimension checks for disjoint unions and orientation reversal."""
    union = s1.disjoint_union(s2)
    d_union = block_dimension(union, labels, disc)
    d_prod = block_dimension(s1, labels, disc) * block_dimension(s2, labels, disc)
    d1 = block_dimension(s1, labels, disc)
    d1_rev = block_dimension(s1.reversed(), labels.negated(disc), disc)
    return {
        "tensor_lhs": d_union,
        "tensor_rhs": d_prod,
        "duality_lhs": d1_rev,
        "duality_rhs": d1,
        "ok": d_union == d_prod and d1_rev == d1,
    }


@dataclass(frozen=True)
class FactorizationReport:
    lhs: int
    rhs: int
    equal: bool
    terms: tuple | None = None


def verify_factorization(s: Surface, pieces: tuple[Surface, ...],
                         matching: list[tuple[str, str]], labels: BlockLabel,
                         disc: DiscriminantGroup,
                         keep_terms: bool = False) -> FactorizationReport:
    """Compare dim E(s) with the label sum over the gluing circles of the
    product of piece block dimensions.

    The sum runs over |A|^k assignments; per piece component only the
    signed label total matters, so each component is reduced once to a
    constant part plus hooks into the assignment tuple.
    """
    if len(pieces) == 1:
        glued = glue(pieces[0], None, matching)
    elif len(pieces) == 2:
        glued = glue(pieces[0], pieces[1], matching)
    else:
        raise InvalidSplit("a split has one self-glued piece or two pieces")
    if glued.component_signature() != s.component_signature():
        raise InvalidSplit(
            f"gluing yields {glued.component_signature()}, "
            f"surface has {s.component_signature()}")
    if sorted(glued.circle_ids()) != sorted(s.circle_ids()):
        raise InvalidSplit("free boundary circles do not match the surface")

    lhs = block_dimension(s, labels, disc)
    match_slot = {}
    for idx, (out_id, in_id) in enumerate(matching):
        match_slot[out_id] = idx
        match_slot[in_id] = idx
    comp_data = []
    for piece in pieces:
        for comp in piece.components:
            const = disc.zero.coords
            hooks = []
            for circle in comp.boundaries:
                sign = 1 if circle.orientation == OUT else -1
                if circle.id in match_slot:
                    hooks.append((match_slot[circle.id], sign))
                else:
                    lam = labels.get(circle.id)
                    if lam is None:
                        raise MissingLabel(f"no label for circle {circle.id!r}")
                    coords = lam.coords if sign > 0 else disc.neg_coords(lam.coords)
                    const = disc.add_coords(const, coords)
            comp_data.append((const, tuple(hooks), disc.order ** comp.genus))

    elements = [a.coords for a in disc.elements()]
    rhs = 0
    terms = []
    for assignment in itertools.product(elements, repeat=len(matching)):
        term = 1
        for const, hooks, weight in comp_data:
            acc = const
            for idx, sign in hooks:
                lam = assignment[idx]
                acc = disc.add_coords(acc, lam if sign > 0
                                      else disc.neg_coords(lam))
            if any(acc):
                term = 0
                break
            term *= weight
        rhs += term
        if keep_terms:
            terms.append((assignment, term))
    return FactorizationReport(lhs=lhs, rhs=rhs, equal=lhs == rhs,
                               terms=tuple(terms) if keep_terms else None)


# ---------------------------------------------------------------------------
# modular data


@dataclass(frozen=True, eq=False)
class ModularData:
    S: np.ndarray
    T: np.ndarray
    signature: int
    central_charge_exponent: Fraction

    @property
    def framing_phase(self) -> complex:
        return np.exp(-2j * np.pi * self.signature / 24)

    def framed_T(self) -> np.ndarray:
        """T with the framing factor folded in; (S framed_T)^3 = S^2."""
        return self.T * self.framing_phase


def s_matrix(disc: DiscriminantGroup) -> np.ndarray:
    """S_{ab} = |A|^(-1/2) exp(-2 pi i b(a, b))."""
    els = list(disc.elements())
    n = disc.order
    s = np.empty((n, n), dtype=complex)
    for i, a in enumerate(els):
        for j, b in enumerate(els):
            s[i, j] = np.exp(-2j * np.pi * float(disc.bilinear(a, b)))
    return s / math.sqrt(n)


def t_matrix(disc: DiscriminantGroup) -> np.ndarray:
    """Diagonal of twists, T_a = exp(pi i q(a)).

    The framing factor exp(-2 pi i sigma/24) belongs to the determinant
    line metadata (see ModularData); keeping T bare is what makes
    (S T)^3 = exp(2 pi i sigma/8) S^2 hold verbatim.
    """
    els = list(disc.elements())
    return np.diag([np.exp(1j * np.pi * float(disc.quadratic(a))) for a in els])


def charge_conjugation(disc: DiscriminantGroup) -> np.ndarray:
    els = list(disc.elements())
    index = {a.coords: i for i, a in enumerate(els)}
    n = disc.order
    c = np.zeros((n, n))
    for i, a in enumerate(els):
        c[i, index[disc.neg(a).coords]] = 1.0
    return c


def modular_data(lat: EvenLattice, disc: DiscriminantGroup) -> ModularData:
    sigma = signature_mod8(disc)
    return ModularData(S=s_matrix(disc), T=t_matrix(disc), signature=sigma,
                       central_charge_exponent=Fraction(lat.level_ell * lat.rank))


def fusion_rules(disc: DiscriminantGroup):
    """N_{ab}^c from three-holed-sphere block dimensions: 1 iff c = a + b."""
    els = list(disc.elements())
    index = {a.coords: i for i, a in enumerate(els)}
    n = disc.order
    tensor = np.zeros((n, n, n), dtype=int)
    pants = Surface.pair_of_pants(("p0", "p1", "p2"), (IN, IN, OUT))
    for i, a in enumerate(els):
        for j, b in enumerate(els):
            for k, c in enumerate(els):
                labels = BlockLabel.from_dict({"p0": a, "p1": b, "p2": c})
                tensor[i, j, k] = block_dimension(pants, labels, disc)
    return tensor


@dataclass(frozen=True)
class VerlindeReport:
    verlinde_raw: complex
    rounded: int
    block_dim: int
    deviation: float
    equal: bool


def verlinde_check(s: Surface, labels: BlockLabel, disc: DiscriminantGroup,
                   guard: float = 1e-4) -> VerlindeReport:
    """Compare the S-matrix character sum with the block dimension.

    Connected components are handled through the tensor property; the
    per-component sum is sum_j S_{0j}^(2 - 2g - n) prod_i S_{l_i j} with
    incoming labels negated.  Rounding aborts if the value is farther
    than `guard` from an integer.
    """
    s_mat = s_matrix(disc)
    els = list(disc.elements())
    index = {a.coords: i for i, a in enumerate(els)}
    zero = index[disc.zero.coords]
    total = complex(1.0)
    for comp in s.components:
        n_lab = len(comp.boundaries)
        acc = 0j
        for j in range(disc.order):
            term = s_mat[zero, j] ** (2 - 2 * comp.genus - n_lab)
            for circle in comp.boundaries:
                lam = labels.get(circle.id)
                if lam is None:
                    raise MissingLabel(f"no label for circle {circle.id!r}")
                if circle.orientation == IN:
                    lam = disc.neg(lam)
                term *= s_mat[index[lam.coords], j]
            acc += term
        total *= acc
    rounded = int(round(total.real))
    deviation = abs(total - rounded)
    if deviation > guard:
        raise ArithmeticError(
            f"Verlinde sum {total} is not close to an integer; "
            f"deviation {deviation} exceeds the rounding guard {guard}")
    bdim = block_dimension(s, labels, disc)
    return VerlindeReport(verlinde_raw=complex(total), rounded=rounded,
                          block_dim=bdim, deviation=deviation,
                          equal=rounded == bdim)


@dataclass(frozen=True, eq=False)
class MappingClassReport:
    S: np.ndarray
    T: np.ndarray
    signature: int
    s4_deviation: float
    st3_deviation: float
    s2_is_charge_conjugation: float
    unitarity_deviation: float

    @property
    def ok(self) -> bool:
        return max(self.s4_deviation, self.st3_deviation,
                   self.s2_is_charge_conjugation,
                   self.unitarity_deviation) < 1e-9


def genus1_mcg_rep(disc: DiscriminantGroup) -> MappingClassReport:
    """SL(2,Z) action on the genus-1 block space C^A: verifies S^4 = 1,
    S^2 = charge conjugation and (S T)^3 = exp(2 pi i sigma/8) S^2."""
    s = s_matrix(disc)
    t = t_matrix(disc)
    sigma = signature_mod8(disc)
    n = disc.order
    eye = np.eye(n)
    s2 = s @ s
    st = s @ t
    st3 = st @ st @ st
    anomaly = np.exp(2j * np.pi * sigma / 8)
    return MappingClassReport(
        S=s, T=t, signature=sigma,
        s4_deviation=float(np.max(np.abs(s2 @ s2 - eye))),
        st3_deviation=float(np.max(np.abs(st3 - anomaly * s2))),
        s2_is_charge_conjugation=float(np.max(np.abs(s2 - charge_conjugation(disc)))),
        unitarity_deviation=float(np.max(np.abs(s @ s.conj().T - eye))),
    )
