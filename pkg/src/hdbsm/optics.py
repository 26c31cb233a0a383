"""Amplitude-level simulation of the proposed path/OAM measurement optics.

Pipeline per run: the ideal two-particle source state, preparation of an
arbitrary Bell index by a local unitary on one particle's path factor, and a
Bell state analyser per particle. The analyser first converts the OAM digit
into an expanded-path label (a pure relabeling that groups the d modes of
each decomposition m-sector together) and then applies one d-point conjugate
Fourier transform per group, so that detector (group m, port k) fires
exactly for the decomposition state with index (k, m).

Everything is ideal-amplitude simulation: no loss, no detector model, one
photon per arm. The OAM values of the d=3 proposal (-1, 0, +1) map to
digits (0, 1, 2) in alphabetical-label order.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .classifier import CoincidenceTable, ShotRecord, coincidence_probabilities, sample_outcomes
from .core import State, apply_local_unitary, fourier_matrix, permute_factors, tensor_product
from .states import BellIndex, DecompIndex, PhaseConvention, aux_state, bell_state, shift_clock_unitary


def prepare_source(d: int, convention: PhaseConvention) -> State:
    """Ideal source output: the (0, 0) Bell state times the auxiliary state.

    Shape (d, d, d, d) ordered (B system, B auxiliary, A system, A auxiliary).
    """
    if d > 6:
        raise ValueError(f"dimension {d} above the supported range (2..6)")
    joint = tensor_product(bell_state(d, 0, 0, convention), aux_state(d))
    return permute_factors(joint, (0, 2, 1, 3))


def prepare_bell(d: int, i: int, j: int, convention: PhaseConvention) -> State:
    """Source state steered to Bell index (i, j) by a local unitary on particle A's path."""
    unitary = shift_clock_unitary(d, i, j, convention)
    return apply_local_unitary(prepare_source(d, convention), unitary, factor=2)


def oam_sort(state: State) -> State:
    """Convert the OAM digit of a single-particle state into an expanded path label.

    Pure relabeling (path, oam) -> (group, port) with group = (path - oam)
    mod d and port = path. Group g then carries exactly the support of the
    decomposition states with m = g. Norm is preserved exactly and the map
    is invertible.
    """
    if len(state.radices) != 2 or state.radices[0] != state.radices[1]:
        raise ValueError(f"expected a single-particle (d, d) state, got {state.radices}")
    d = state.radices[0]
    grid = state.reshaped()
    out = np.empty((d, d), dtype=np.complex128)
    for group in range(d):
        for port in range(d):
            out[group, port] = grid[port, (port - group) % d]
    return State((d, d), out.reshape(-1))


@dataclass(frozen=True, eq=False)
class BsaLayout:
    """Analyser wiring: one unitary per expanded-path group plus the detector map."""

    d: int
    convention: PhaseConvention
    group_unitaries: tuple[np.ndarray, ...]

    def detector(self, group: int, port: int) -> DecompIndex:
        """Decomposition index measured by the detector at (group, port)."""
        return DecompIndex(k=port, m=group)


def bsa_layout(d: int, convention: PhaseConvention) -> BsaLayout:
    """Analyser layout for one particle.

    Every group carries the same transform: the Fourier matrix conjugate to
    the decomposition-state phases, so the projection onto the literal
    decomposition basis comes out exactly regardless of the convention.
    """
    transform = fourier_matrix(d, -convention.decomp_sign)
    transform.flags.writeable = False
    return BsaLayout(d, convention, (transform,) * d)


def analyse(state: State, layout: BsaLayout) -> np.ndarray:
    """Detector amplitudes of a single-particle state, indexed [k, m].

    The amplitude at detector (k, m) equals the overlap of the input with
    the decomposition state (k, m).
    """
    d = layout.d
    sorted_state = oam_sort(state).reshaped()
    out = np.empty((d, d), dtype=np.complex128)
    for group in range(d):
        out[:, group] = layout.group_unitaries[group] @ sorted_state[group]
    return out


def bsa_unitary(layout: BsaLayout) -> np.ndarray:
    """Whole analyser as one d*d by d*d unitary.

    Row index k*d + m (detector), column index path*d + oam (input mode):
    the OAM-to-path sort composed with the per-group transforms.
    """
    d = layout.d
    u = np.zeros((d * d, d * d), dtype=np.complex128)
    for group in range(d):
        transform = layout.group_unitaries[group]
        for port_out in range(d):
            for port_in in range(d):
                oam = (port_in - group) % d
                u[port_out * d + group, port_in * d + oam] = transform[port_out, port_in]
    return u


def pipeline_probabilities(state: State, layout: BsaLayout) -> CoincidenceTable:
    """Joint detector distribution of the two-particle optics, indexed [k, m, k', m'].

    Applies the analyser unitary to each particle's (system, auxiliary)
    factor pair and squares the resulting joint amplitudes.
    """
    d = layout.d
    if state.radices != (d,) * 4:
        raise ValueError(f"expected shape {(d,) * 4}, got {state.radices}")
    u = bsa_unitary(layout)
    joint = state.amps.reshape(d * d, d * d)
    detector_amps = u @ joint @ u.T
    return CoincidenceTable(d, np.abs(detector_amps.reshape((d,) * 4)) ** 2)


@dataclass(frozen=True, eq=False)
class ExperimentResult:
    """Everything one simulated run produces."""

    d: int
    bell: BellIndex
    convention: PhaseConvention
    probabilities: CoincidenceTable
    record: ShotRecord | None
    equivalence_gap: float

    @property
    def equivalent(self) -> bool:
        """Pipeline distribution matches the abstract projection probabilities."""
        return self.equivalence_gap < 1e-9


def run_experiment(
    d: int,
    i: int,
    j: int,
    shots: int,
    seed: int,
    convention: PhaseConvention,
) -> ExperimentResult:
    """Full optics run: prepare, analyse both particles, check, and sample.

    ``shots = 0`` produces the theoretical table only. The pipeline
    distribution is always compared entrywise against the abstract
    coincidence probabilities of the prepared state; the largest deviation
    is reported as ``equivalence_gap``.
    """
    state = prepare_bell(d, i, j, convention)
    layout = bsa_layout(d, convention)
    table = pipeline_probabilities(state, layout)
    abstract = coincidence_probabilities(state, convention)
    gap = float(np.max(np.abs(table.probs - abstract.probs)))
    record = sample_outcomes(table, shots, seed) if shots > 0 else None
    return ExperimentResult(d, BellIndex(i, j), convention, table, record, gap)
