"""Constructors for the named state families of the protocol.

Three families, all for arbitrary dimension d:

  * two-particle Bell states in the system degree of freedom,
  * the maximally entangled two-particle auxiliary state,
  * single-particle "decomposition" states, maximally entangled between one
    particle's system and auxiliary degrees of freedom.

The exponent signs of the phase factors are an explicit PhaseConvention
parameter rather than a constant: the literal construction signs (+, +)
and the signs required by the reference decomposition tables disagree, and
which combination reconciles them is an empirical finding of this package
(see hdbsm.decomposition.find_convention).
"""

from __future__ import annotations

import string
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .core import LOGIC_TOL, State, apply_local_unitary, fidelity, tensor_product


class BellIndex(NamedTuple):
    """Index pair (i, j) of a two-particle Bell state: i the phase index, j the shift."""

    i: int
    j: int


class DecompIndex(NamedTuple):
    """Index pair (k, m) of a single-particle decomposition state."""

    k: int
    m: int


@dataclass(frozen=True)
class PhaseConvention:
    """Signs of the phase exponents in the Bell and decomposition families."""

    bell_sign: int = 1
    decomp_sign: int = 1

    def __post_init__(self) -> None:
        if self.bell_sign not in (1, -1) or self.decomp_sign not in (1, -1):
            raise ValueError("phase convention signs must be +1 or -1")

    def label(self) -> str:
        plus_minus = {1: "+", -1: "-"}
        return plus_minus[self.bell_sign] + plus_minus[self.decomp_sign]

    @classmethod
    def from_label(cls, label: str) -> "PhaseConvention":
        signs = {"+": 1, "-": -1}
        if len(label) != 2 or label[0] not in signs or label[1] not in signs:
            raise ValueError(f"convention label must be two of '+'/'-', got {label!r}")
        return cls(signs[label[0]], signs[label[1]])


#: The signs of the construction formulas taken literally.
LITERAL_CONVENTION = PhaseConvention(1, 1)

#: The convention that reproduces the reference decomposition tables while
#: keeping the decomposition states literal (so the analyser matrix identities
#: hold as displayed). See decomposition.find_convention for the derivation.
REFERENCE_CONVENTION = PhaseConvention(-1, 1)

ALL_CONVENTIONS = (
    PhaseConvention(1, 1),
    PhaseConvention(1, -1),
    PhaseConvention(-1, 1),
    PhaseConvention(-1, -1),
)


@dataclass(frozen=True)
class AuxLabelMap:
    """Bijection between auxiliary digit letters (a, b, c, ...) and digits.

    The default is alphabetical: a -> 0, b -> 1, c -> 2, ... The modular
    arithmetic on auxiliary labels in the construction rule treats the
    letters as residues, which forces this default; a permuted map is
    accepted for experiments and permutes the auxiliary digits everywhere.
    """

    d: int
    digit_of_letter: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        if self.d < 2:
            raise ValueError(f"dimension must be >= 2, got {self.d}")
        if self.d > len(string.ascii_lowercase):
            raise ValueError("auxiliary letters exhausted")
        mapping = self.digit_of_letter or tuple(range(self.d))
        if sorted(mapping) != list(range(self.d)):
            raise ValueError(f"label map must be a bijection on 0..{self.d - 1}")
        object.__setattr__(self, "digit_of_letter", tuple(int(x) for x in mapping))

    def digit(self, residue: int) -> int:
        """Physical auxiliary digit carried by the letter with the given residue."""
        return self.digit_of_letter[residue % self.d]

    def letter(self, residue: int) -> str:
        return string.ascii_lowercase[residue % self.d]


def _check_index(d: int, name: str, value: int) -> None:
    if not 0 <= value < d:
        raise ValueError(f"{name}={value} out of range for dimension {d}")


def _canonical_global_phase(amps: np.ndarray) -> np.ndarray:
    """Rotate a global phase so the first nonzero amplitude is real positive."""
    idx = np.flatnonzero(np.abs(amps) > LOGIC_TOL)
    if idx.size == 0:
        return amps
    pivot = amps[idx[0]]
    return amps * (abs(pivot) / pivot)


def bell_state(d: int, i: int, j: int, convention: PhaseConvention = LITERAL_CONVENTION) -> State:
    """Two-particle Bell state on the system degree of freedom.

    Shape (d, d), factor 0 the first particle's digit (particle B), factor 1
    the second particle's (particle A):

        (1/sqrt(d)) * sum_n exp(bell_sign*2j*pi*i*n/d) |n, (n+j) mod d>
    """
    _check_index(d, "i", i)
    _check_index(d, "j", j)
    amps = np.zeros((d, d), dtype=np.complex128)
    phases = np.exp(convention.bell_sign * 2j * np.pi * i * np.arange(d) / d)
    for n in range(d):
        amps[n, (n + j) % d] = phases[n]
    return State((d, d), amps.reshape(-1) / np.sqrt(d))


def aux_state(d: int) -> State:
    """Maximally entangled auxiliary state (1/sqrt(d)) * sum_p |p, p>."""
    amps = np.zeros((d, d), dtype=np.complex128)
    amps[np.arange(d), np.arange(d)] = 1.0
    return State((d, d), amps.reshape(-1) / np.sqrt(d))


def decomp_state(
    d: int,
    k: int,
    m: int,
    convention: PhaseConvention = LITERAL_CONVENTION,
    labels: AuxLabelMap | None = None,
) -> State:
    """Single-particle decomposition state across system and auxiliary factors.

    Shape (d, d), factor 0 the system digit, factor 1 the auxiliary digit:

        (1/sqrt(d)) * sum_q exp(decomp_sign*2j*pi*k*q/d) |q, L((q-m) mod d)>

    where L is the auxiliary label map (identity by default). Successive m
    shift the auxiliary letter of every term down by one, matching the
    construction rule that builds the m > 0 states from the m = 0 ones.
    """
    _check_index(d, "k", k)
    _check_index(d, "m", m)
    labels = labels or AuxLabelMap(d)
    if labels.d != d:
        raise ValueError("label map dimension mismatch")
    amps = np.zeros((d, d), dtype=np.complex128)
    phases = np.exp(convention.decomp_sign * 2j * np.pi * k * np.arange(d) / d)
    for q in range(d):
        amps[q, labels.digit(q - m)] = phases[q]
    return State((d, d), amps.reshape(-1) / np.sqrt(d))


def clock_matrix(d: int, exponent: int = 1) -> np.ndarray:
    """Diagonal clock matrix Z^exponent with Z|n> = exp(2j*pi*n/d)|n>."""
    return np.diag(np.exp(2j * np.pi * exponent * np.arange(d) / d))


def shift_matrix(d: int, exponent: int = 1) -> np.ndarray:
    """Cyclic shift matrix X^exponent with X|n> = |(n+1) mod d>."""
    u = np.zeros((d, d), dtype=np.complex128)
    u[(np.arange(d) + exponent) % d, np.arange(d)] = 1.0
    return u


class CalibrationError(RuntimeError):
    """No shift/clock monomial maps the base Bell state to the target."""


def _monomial_candidates(d: int):
    for a in range(d):
        for b in range(d):
            yield shift_matrix(d, a) @ clock_matrix(d, b)
            yield clock_matrix(d, b) @ shift_matrix(d, a)


def _search_monomial(source: State, target: State, d: int, factor: int) -> np.ndarray:
    for u in _monomial_candidates(d):
        if fidelity(target, apply_local_unitary(source, u, factor)) >= 1.0 - LOGIC_TOL:
            return u
    raise CalibrationError(
        "no shift/clock monomial reaches the target state; "
        "this indicates an inconsistent phase convention"
    )


def shift_clock_unitary(
    d: int, i: int, j: int, convention: PhaseConvention = LITERAL_CONVENTION
) -> np.ndarray:
    """Local unitary on particle A's system factor turning the (0, 0) Bell state into (i, j).

    The matrix is a monomial in the clock and shift matrices. The exact
    exponents and ordering are found by an exhaustive fidelity search rather
    than assumed, so the result is correct for either sign convention.

    Raises:
        CalibrationError: if no monomial achieves unit fidelity.
    """
    _check_index(d, "i", i)
    _check_index(d, "j", j)
    source = bell_state(d, 0, 0, convention)
    target = bell_state(d, i, j, convention)
    return _search_monomial(source, target, d, factor=1)
