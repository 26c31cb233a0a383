"""Measurement protocol built on the decomposition structure.

The d*d decomposition tables induce a partition of all d**4 single-particle
outcome pairs into d*d classes, one per Bell index: the decoding table.
Coincidence probabilities of any two-particle input over the outcome pairs
then classify the input by aggregating probability per class. A seeded
sampler turns probability tables into reproducible finite-shot records.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, NamedTuple

import numpy as np

from .core import LOGIC_TOL, State
from .decomposition import IndexLaw, decompose_all, pair_coefficients
from .states import BellIndex, DecompIndex, PhaseConvention


class OutcomePair(NamedTuple):
    """One coincidence event: Bob's and Alice's detector indices."""

    bob: DecompIndex
    alice: DecompIndex


class CollisionError(RuntimeError):
    """Two Bell indices claim the same outcome pair in the decoding table."""


UNREACHABLE = -1


@dataclass(frozen=True, eq=False)
class DecodingTable:
    """Total map from outcome pairs to Bell indices.

    ``bell_i`` and ``bell_j`` are int arrays indexed [k, m, k', m'];
    UNREACHABLE (-1) marks pairs no Bell input can produce. For the
    protocol's states no pair is unreachable: the classes partition all
    d**4 pairs into d*d groups of d*d.
    """

    d: int
    convention: PhaseConvention | None
    bell_i: np.ndarray
    bell_j: np.ndarray

    def lookup(self, pair: OutcomePair) -> BellIndex | None:
        idx = (pair.bob.k, pair.bob.m, pair.alice.k, pair.alice.m)
        i = int(self.bell_i[idx])
        if i == UNREACHABLE:
            return None
        return BellIndex(i, int(self.bell_j[idx]))

    def class_of(self, k: int, m: int, kp: int, mp: int) -> BellIndex | None:
        return self.lookup(OutcomePair(DecompIndex(k, m), DecompIndex(kp, mp)))

    def class_members(self, bell: BellIndex) -> list[OutcomePair]:
        mask = (self.bell_i == bell.i) & (self.bell_j == bell.j)
        return [
            OutcomePair(DecompIndex(int(k), int(m)), DecompIndex(int(kp), int(mp)))
            for k, m, kp, mp in zip(*np.nonzero(mask))
        ]

    def all_pairs(self) -> Iterator[OutcomePair]:
        d = self.d
        for k in range(d):
            for m in range(d):
                for kp in range(d):
                    for mp in range(d):
                        yield OutcomePair(DecompIndex(k, m), DecompIndex(kp, mp))


def build_decoding_table(d: int, convention: PhaseConvention) -> DecodingTable:
    """Derive the decoding table from the d*d computed decompositions.

    Raises:
        CollisionError: two Bell indices share an outcome pair, which would
            falsify distinguishability and must not occur.
    """
    bell_i = np.full((d, d, d, d), UNREACHABLE, dtype=np.int64)
    bell_j = np.full((d, d, d, d), UNREACHABLE, dtype=np.int64)
    for bell, table in decompose_all(d, convention).items():
        for key in table.entries:
            if bell_i[key] != UNREACHABLE:
                claimed = BellIndex(int(bell_i[key]), int(bell_j[key]))
                raise CollisionError(
                    f"outcome pair {key} claimed by both {claimed} and {bell}"
                )
            bell_i[key] = bell.i
            bell_j[key] = bell.j
    bell_i.flags.writeable = False
    bell_j.flags.writeable = False
    return DecodingTable(d, convention, bell_i, bell_j)


def decoding_table_from_law(law: IndexLaw) -> DecodingTable:
    """Build the decoding table directly from an affine index law.

    Independent of any computed decomposition: used to cross-check the
    table derived from the brute-force supports.
    """
    d = law.d
    bell_i = np.empty((d, d, d, d), dtype=np.int64)
    bell_j = np.empty((d, d, d, d), dtype=np.int64)
    for k in range(d):
        for m in range(d):
            for kp in range(d):
                for mp in range(d):
                    bell = law.decode(k, m, kp, mp)
                    bell_i[k, m, kp, mp] = bell.i
                    bell_j[k, m, kp, mp] = bell.j
    bell_i.flags.writeable = False
    bell_j.flags.writeable = False
    return DecodingTable(d, None, bell_i, bell_j)


@dataclass(frozen=True, eq=False)
class CoincidenceTable:
    """Probabilities of every outcome pair, indexed [k, m, k', m']."""

    d: int
    probs: np.ndarray

    def __post_init__(self) -> None:
        probs = np.ascontiguousarray(self.probs, dtype=np.float64)
        if probs.shape != (self.d,) * 4:
            raise ValueError(f"probability array shape {probs.shape} is not (d,)*4")
        probs.flags.writeable = False
        object.__setattr__(self, "probs", probs)

    def total(self) -> float:
        return float(self.probs.sum())

    def probability(self, pair: OutcomePair) -> float:
        return float(self.probs[pair.bob.k, pair.bob.m, pair.alice.k, pair.alice.m])

    def as_dict(self) -> dict[OutcomePair, float]:
        d = self.d
        return {
            OutcomePair(DecompIndex(k, m), DecompIndex(kp, mp)): float(
                self.probs[k, m, kp, mp]
            )
            for k in range(d)
            for m in range(d)
            for kp in range(d)
            for mp in range(d)
        }


def coincidence_probabilities(
    state: State, convention: PhaseConvention
) -> CoincidenceTable:
    """Projection probabilities of a two-particle state onto all decomposition pairs.

    Args:
        state: normalized state of shape (d, d, d, d) ordered
            (B system, B auxiliary, A system, A auxiliary).
        convention: phase convention of the decomposition states.

    Raises:
        ValueError: wrong shape or norm off by more than 1e-6.
    """
    if abs(state.norm() - 1.0) > 1e-6:
        raise ValueError(f"input state norm {state.norm():.9f} is not 1")
    coeffs = pair_coefficients(state, convention)
    return CoincidenceTable(state.radices[0], np.abs(coeffs) ** 2)


def mix_with_white_noise(table: CoincidenceTable, noise: float) -> CoincidenceTable:
    """Admix an isotropic background: (1 - noise) * table + noise * uniform.

    The admixture acts at the probability level; noise = 1 gives the
    maximally mixed outcome distribution.
    """
    if not 0.0 <= noise <= 1.0:
        raise ValueError(f"noise weight {noise} outside [0, 1]")
    uniform = 1.0 / table.d**4
    return CoincidenceTable(table.d, (1.0 - noise) * table.probs + noise * uniform)


@dataclass(frozen=True)
class Classification:
    """Argmax Bell class of a coincidence distribution.

    ``confidence`` is the total probability mass of the winning class. Ties
    (within the logic tolerance) are reported, with the lexicographically
    smallest index as the nominal winner.
    """

    bell: BellIndex
    confidence: float
    tie: bool
    tied_with: tuple[BellIndex, ...]
    class_masses: dict[BellIndex, float]


def classify_table(table: CoincidenceTable, decoding: DecodingTable) -> Classification:
    """Aggregate a coincidence table by decoding class and take the argmax."""
    if table.d != decoding.d:
        raise ValueError("table and decoding dimensions differ")
    d = table.d
    masses: dict[BellIndex, float] = {}
    for i in range(d):
        for j in range(d):
            mask = (decoding.bell_i == i) & (decoding.bell_j == j)
            masses[BellIndex(i, j)] = float(table.probs[mask].sum())
    best = max(masses.values())
    tied = tuple(sorted(b for b, mass in masses.items() if mass >= best - LOGIC_TOL))
    winner = tied[0]
    return Classification(
        bell=winner,
        confidence=masses[winner],
        tie=len(tied) > 1,
        tied_with=tied,
        class_masses=masses,
    )


def classify(state: State, convention: PhaseConvention) -> Classification:
    """Classify a two-particle state by its decomposition-pair coincidences."""
    table = coincidence_probabilities(state, convention)
    decoding = build_decoding_table(table.d, convention)
    return classify_table(table, decoding)


@dataclass(frozen=True, eq=False)
class ShotRecord:
    """Outcome counts of a finite sampling run, indexed like the table."""

    seed: int
    shots: int
    counts: np.ndarray

    def count(self, pair: OutcomePair) -> int:
        return int(self.counts[pair.bob.k, pair.bob.m, pair.alice.k, pair.alice.m])

    def nonzero(self) -> dict[OutcomePair, int]:
        out = {}
        d = self.counts.shape[0]
        for flat in np.flatnonzero(self.counts.reshape(-1)):
            k, m, kp, mp = np.unravel_index(int(flat), (d,) * 4)
            pair = OutcomePair(DecompIndex(int(k), int(m)), DecompIndex(int(kp), int(mp)))
            out[pair] = int(self.counts[k, m, kp, mp])
        return out


def sample_outcomes(table: CoincidenceTable, shots: int, seed: int) -> ShotRecord:
    """Multinomial draw from a coincidence table with a deterministic generator.

    Sampling is inverse-CDF over PCG64 uniforms: the cumulative distribution
    is searched with each of ``shots`` uniform doubles from
    ``numpy.random.Generator(numpy.random.PCG64(seed))``. Identical
    (table, shots, seed) give bit-identical counts on every platform.
    Outcomes of exactly zero probability can never be drawn.
    """
    if shots < 1:
        raise ValueError(f"shots must be >= 1, got {shots}")
    flat = table.probs.reshape(-1)
    cdf = np.cumsum(flat / flat.sum())
    cdf[-1] = 1.0
    uniforms = np.random.Generator(np.random.PCG64(seed)).random(shots)
    indices = np.searchsorted(cdf, uniforms, side="right")
    counts = np.bincount(indices, minlength=flat.size).reshape(table.probs.shape)
    counts.flags.writeable = False
    return ShotRecord(seed=seed, shots=shots, counts=counts)
