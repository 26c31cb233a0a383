"""Expansion of hyperentangled states in the decomposition-state pair basis.

For each Bell index the two-particle hyperentangled state (system Bell state
times auxiliary state) is expanded, by explicit inner products, in the basis
of products of single-particle decomposition states. The sparse support of
that expansion, the affine law linking the two particles' indices and the
root-of-unity coefficient phases are then fitted from the computed tables,
never assumed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import _kernels
from .core import LOGIC_TOL, State, permute_factors, tensor_product
from .states import (
    ALL_CONVENTIONS,
    BellIndex,
    PhaseConvention,
    REFERENCE_CONVENTION,
    aux_state,
    bell_state,
    decomp_state,
)


class NoAffineLawError(RuntimeError):
    """The computed supports are not affine in the Bell and Bob indices."""


class PhaseNotRootOfUnityError(RuntimeError):
    """A coefficient phase is not an exact d-th root of unity."""


class NoMatchingConventionError(RuntimeError):
    """No sign convention reproduces the reference index law."""


def hyperentangled_state(
    d: int, i: int, j: int, convention: PhaseConvention
) -> State:
    """Bell state (i, j) times the auxiliary state, factors ordered for per-particle grouping.

    Shape (d, d, d, d) with factor order (B system, B auxiliary, A system,
    A auxiliary), so factors (0, 1) are Bob's particle and (2, 3) Alice's.
    """
    joint = tensor_product(bell_state(d, i, j, convention), aux_state(d))
    return permute_factors(joint, (0, 2, 1, 3))


@lru_cache(maxsize=None)
def _single_basis(d: int, decomp_sign: int) -> np.ndarray:
    """Rows: flattened decomposition-state amplitudes, row index k*d + m."""
    conv = PhaseConvention(1, decomp_sign)
    rows = np.empty((d * d, d * d), dtype=np.complex128)
    for k in range(d):
        for m in range(d):
            rows[k * d + m] = decomp_state(d, k, m, conv).amps
    rows.flags.writeable = False
    return rows


@lru_cache(maxsize=None)
def _pair_basis(d: int, decomp_sign: int) -> np.ndarray:
    """Rows: flattened pair states, row index ((k*d + m)*d + k')*d + m'."""
    single = _single_basis(d, decomp_sign)
    pair = np.kron(single, single)
    pair.flags.writeable = False
    return pair


def pair_coefficients(state: State, convention: PhaseConvention) -> np.ndarray:
    """Coefficients <alpha_km (x) alpha_k'm' | state> as an array indexed [k, m, k', m'].

    The state must have shape (d, d, d, d) ordered (B system, B auxiliary,
    A system, A auxiliary).
    """
    radices = state.radices
    if len(radices) != 4 or len(set(radices)) != 1:
        raise ValueError(f"expected shape (d, d, d, d), got {radices}")
    d = radices[0]
    basis = _pair_basis(d, convention.decomp_sign)
    coeffs = _kernels.project_rows(basis, state.amps)
    return coeffs.reshape(d, d, d, d)


@dataclass(frozen=True, eq=False)
class DecompositionTable:
    """Sparse expansion of one hyperentangled state over decomposition-state pairs.

    ``entries`` maps (k, m, k', m') to the complex coefficient, keeping only
    entries with magnitude above the logic threshold. The first index pair is
    Bob's particle, the second Alice's.
    """

    d: int
    bell: BellIndex
    convention: PhaseConvention
    entries: dict[tuple[int, int, int, int], complex]

    def support(self) -> frozenset[tuple[int, int, int, int]]:
        return frozenset(self.entries)

    def squared_weight(self) -> float:
        return float(sum(abs(c) ** 2 for c in self.entries.values()))

    def alice_index_of_bob(self) -> dict[tuple[int, int], tuple[int, int]]:
        """(k, m) -> (k', m') over the support; errors if Bob indices repeat."""
        out: dict[tuple[int, int], tuple[int, int]] = {}
        for (k, m, kp, mp) in self.entries:
            if (k, m) in out:
                raise ValueError(f"Bob index ({k}, {m}) occurs twice in the support")
            out[(k, m)] = (kp, mp)
        return out

    def phase_ints(self, tol: float = LOGIC_TOL) -> dict[tuple[int, int, int, int], int]:
        """Coefficient phases as integers r with phase exp(2j*pi*r/d)."""
        out = {}
        for key, coeff in self.entries.items():
            out[key] = _phase_int(coeff, self.d, tol)
        return out


def _phase_int(coeff: complex, d: int, tol: float) -> int:
    angle = math.atan2(coeff.imag, coeff.real)
    r = round(angle * d / (2 * math.pi)) % d
    residual = angle - 2 * math.pi * r / d
    residual = (residual + math.pi) % (2 * math.pi) - math.pi
    if abs(residual) > tol:
        raise PhaseNotRootOfUnityError(
            f"phase {angle} of coefficient {coeff} is {residual} radians away "
            f"from the nearest multiple of 2*pi/{d}"
        )
    return r


def decompose(
    d: int, i: int, j: int, convention: PhaseConvention
) -> DecompositionTable:
    """Expand one hyperentangled state over all decomposition-state pairs.

    The coefficients are explicit inner products of the (d, d, d, d) joint
    state with every product of single-particle decomposition states, Bob's
    factor first. Entries below the logic threshold are dropped.
    """
    if d > 6:
        raise ValueError(f"dimension {d} above the supported range (2..6)")
    state = hyperentangled_state(d, i, j, convention)
    coeffs = pair_coefficients(state, convention)
    entries: dict[tuple[int, int, int, int], complex] = {}
    for flat in np.flatnonzero(np.abs(coeffs) > LOGIC_TOL):
        k, m, kp, mp = np.unravel_index(int(flat), (d, d, d, d))
        entries[(int(k), int(m), int(kp), int(mp))] = complex(coeffs[k, m, kp, mp])
    return DecompositionTable(d, BellIndex(i, j), convention, entries)


@lru_cache(maxsize=None)
def _decompose_all_cached(
    d: int, bell_sign: int, decomp_sign: int
) -> tuple[DecompositionTable, ...]:
    conv = PhaseConvention(bell_sign, decomp_sign)
    return tuple(decompose(d, i, j, conv) for i in range(d) for j in range(d))


def decompose_all(
    d: int, convention: PhaseConvention
) -> dict[BellIndex, DecompositionTable]:
    """Decomposition tables for all d*d Bell indices under one convention."""
    tables = _decompose_all_cached(d, convention.bell_sign, convention.decomp_sign)
    return {t.bell: t for t in tables}


def reconstruct(table: DecompositionTable) -> State:
    """Rebuild the joint state from its table, for round-trip checks."""
    d = table.d
    amps = np.zeros(d**4, dtype=np.complex128)
    for (k, m, kp, mp), coeff in table.entries.items():
        pair = tensor_product(
            decomp_state(d, k, m, table.convention),
            decomp_state(d, kp, mp, table.convention),
        )
        amps = amps + coeff * pair.amps
    return State((d, d, d, d), amps)


@dataclass(frozen=True)
class IndexLaw:
    """Affine law k' = (s*k + t*i) mod d on the support, plus the m' = (m+j) mod d flag."""

    d: int
    s: int
    t: int
    m_law_holds: bool

    def alice_k(self, k: int, i: int) -> int:
        return (self.s * k + self.t * i) % self.d

    def alice_m(self, m: int, j: int) -> int:
        return (m + j) % self.d

    def decode(self, k: int, m: int, kp: int, mp: int) -> BellIndex:
        """Invert the law: recover (i, j) from an outcome pair's digits.

        Requires t coprime to d, which holds for every fitted law in the
        supported range (t is 1 or d-1).
        """
        t_inv = pow(self.t, -1, self.d)
        i = (t_inv * (kp - self.s * k)) % self.d
        j = (mp - m) % self.d
        return BellIndex(i, j)


def reference_index_law(d: int) -> IndexLaw:
    """The published general law: s = t = d - 1 with m' = (m + j) mod d."""
    return IndexLaw(d, d - 1, d - 1, True)


def _as_table_map(tables) -> dict[BellIndex, DecompositionTable]:
    if isinstance(tables, dict):
        mapping = dict(tables)
    else:
        mapping = {t.bell: t for t in tables}
    if not mapping:
        raise ValueError("no tables given")
    d = next(iter(mapping.values())).d
    expected = {BellIndex(i, j) for i in range(d) for j in range(d)}
    if set(mapping) != expected:
        raise ValueError(f"need all {d * d} Bell indices, got {len(mapping)}")
    return mapping


def fit_index_law(tables) -> IndexLaw:
    """Fit the unique affine index law reproducing every support tuple.

    Args:
        tables: the complete set of d*d decomposition tables for one
            (dimension, convention), as returned by :func:`decompose_all`.

    Raises:
        NoAffineLawError: no (s, t) pair reproduces all supports, which
            would indicate a construction bug.
    """
    mapping = _as_table_map(tables)
    d = next(iter(mapping.values())).d
    fits = []
    for s in range(d):
        for t in range(d):
            ok = True
            for bell, table in mapping.items():
                for (k, m, kp, mp) in table.entries:
                    if kp != (s * k + t * bell.i) % d:
                        ok = False
                        break
                if not ok:
                    break
            if ok:
                fits.append((s, t))
    if not fits:
        raise NoAffineLawError(f"support is not affine in (k, i) at d={d}")
    if len(fits) > 1:
        raise NoAffineLawError(f"ambiguous affine law at d={d}: {fits}")
    s, t = fits[0]
    m_ok = all(
        mp == (m + bell.j) % d
        for bell, table in mapping.items()
        for (k, m, kp, mp) in table.entries
    )
    return IndexLaw(d, s, t, m_ok)


@dataclass(frozen=True, eq=False)
class PhaseLaw:
    """Fitted root-of-unity coefficient phases.

    ``table`` maps (k, m, i, j) to the integer r with coefficient phase
    exp(2j*pi*r/d). ``closed_form`` is the lexicographically first triple
    (u, v, w) with r = (u*k'*j + v*i*j + w) mod d fitting every entry, or
    None when the three-parameter form fits nothing.
    """

    d: int
    table: dict[tuple[int, int, int, int], int]
    closed_form: tuple[int, int, int] | None


def fit_phase_law(tables) -> PhaseLaw:
    """Record every coefficient phase as an exact d-th root of unity and fit a closed form.

    Raises:
        PhaseNotRootOfUnityError: a coefficient phase deviates from every
            multiple of 2*pi/d by more than the logic tolerance.
    """
    mapping = _as_table_map(tables)
    d = next(iter(mapping.values())).d
    phase_table: dict[tuple[int, int, int, int], int] = {}
    entries = []  # (kp, i, j, r) for the closed-form fit
    for bell, table in sorted(mapping.items()):
        for (k, m, kp, mp), coeff in sorted(table.entries.items()):
            r = _phase_int(coeff, d, LOGIC_TOL)
            phase_table[(k, m, bell.i, bell.j)] = r
            entries.append((kp, bell.i, bell.j, r))
    closed_form = None
    for u in range(d):
        for v in range(d):
            for w in range(d):
                if all((u * kp * j + v * i * j + w) % d == r for kp, i, j, r in entries):
                    closed_form = (u, v, w)
                    break
            if closed_form:
                break
        if closed_form:
            break
    return PhaseLaw(d, phase_table, closed_form)


@dataclass(frozen=True, eq=False)
class ConventionSearch:
    """Result of fitting the index law under all four sign conventions."""

    d: int
    laws: dict[PhaseConvention, IndexLaw]
    matching: tuple[PhaseConvention, ...]

    @property
    def preferred(self) -> PhaseConvention:
        """The matching convention that keeps the decomposition states literal.

        With literal decomposition states (decomp_sign=+1) the analyser's
        conjugate-transform identities hold exactly as displayed, so that
        convention is preferred when it matches.
        """
        if REFERENCE_CONVENTION in self.matching:
            return REFERENCE_CONVENTION
        return self.matching[0]

    @property
    def law(self) -> IndexLaw:
        return self.laws[self.preferred]


def find_convention(d: int) -> ConventionSearch:
    """Search the four sign conventions for the ones matching the reference law.

    Only meaningful for d >= 3: at d = 2 every sign choice produces the same
    states, so nothing can be discriminated.

    Raises:
        ValueError: d < 3.
        NoMatchingConventionError: no convention fits s = t = d - 1, which
            would falsify the construction, not the reference tables.
    """
    if d < 3:
        raise ValueError("convention search needs d >= 3; all conventions coincide at d = 2")
    target = reference_index_law(d)
    laws: dict[PhaseConvention, IndexLaw] = {}
    matching = []
    for conv in ALL_CONVENTIONS:
        law = fit_index_law(decompose_all(d, conv))
        laws[conv] = law
        if law == target:
            matching.append(conv)
    if not matching:
        raise NoMatchingConventionError(f"no sign convention yields s = t = {d - 1} at d={d}")
    matching.sort(key=lambda c: (c != REFERENCE_CONVENTION,))
    return ConventionSearch(d, laws, tuple(matching))
