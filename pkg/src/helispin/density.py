"""Reduction of a pure one-particle state to a 2x2 spin or helicity matrix.

Tracing out momentum turns the state into the weighted sum over grid nodes
of the outer product of its two-component amplitude with itself. When the
state is stored in the other basis, the amplitudes are first rotated node by
node (algebraically identical to conjugating each outer product with the
rotation, at half the per-node work).

Accumulation runs in a fixed node order with numpy's pairwise summation;
Hermitian symmetrization is applied exactly once, after accumulation, and
normalization is re-enforced by dividing by the on-grid norm so the trace is
1 to machine precision.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg2
from . import states as states_mod
from .errors import ConfigurationError, ContractViolationError, NumericalDomainError
from .quadrature import QuadratureGrid
from .states import OneParticleState
from .su2 import (
    SPIN,
    HELICITY,
    Basis,
    helicity_components_to_spin,
    spin_components_to_helicity,
)

HERMITICITY_TOL = 1e-10
TRACE_TOL = 1e-10
EIGENVALUE_TOL = 1e-10
NORM_TOL = 1e-6


@dataclass(frozen=True)
class DensityMatrix2:
    """2x2 Hermitian, unit-trace, positive-semidefinite matrix with a basis tag."""

    entries: np.ndarray
    basis: Basis

    def __post_init__(self) -> None:
        m = np.array(self.entries, dtype=np.complex128)  # owned copy
        if m.shape != (2, 2):
            raise ConfigurationError(f"expected a 2x2 matrix, got shape {m.shape}")
        if not np.all(np.isfinite(m)):
            raise NumericalDomainError("density matrix entries must be finite")
        if self.basis not in (SPIN, HELICITY):
            raise ConfigurationError(f"unknown basis tag {self.basis!r}")
        if np.max(np.abs(m - np.conj(m.T))) > HERMITICITY_TOL:
            raise ContractViolationError("density matrix is not Hermitian")
        tr = m[0, 0].real + m[1, 1].real
        if abs(tr - 1.0) > TRACE_TOL or abs(m[0, 0].imag + m[1, 1].imag) > TRACE_TOL:
            raise ContractViolationError(f"density matrix trace is {tr!r}, not 1")
        lo, hi = _eigenvalues_closed_form(m)
        if lo < -EIGENVALUE_TOL or hi > 1.0 + EIGENVALUE_TOL:
            raise ContractViolationError(
                f"eigenvalues ({hi}, {lo}) outside [0, 1] beyond tolerance"
            )
        m.setflags(write=False)
        object.__setattr__(self, "entries", m)

    def __getitem__(self, idx):
        return self.entries[idx]


def _eigenvalues_closed_form(m: np.ndarray) -> tuple[float, float]:
    """(low, high) eigenvalues of a Hermitian 2x2 via the quadratic formula."""
    mean = 0.5 * (m[0, 0].real + m[1, 1].real)
    radius = np.hypot(0.5 * (m[0, 0].real - m[1, 1].real), abs(m[0, 1]))
    return mean - radius, mean + radius


def accumulate_outer(measure: np.ndarray, up: np.ndarray, down: np.ndarray) -> np.ndarray:
    """Raw weighted sum of outer products (no symmetrization, no rescaling).

    Entry (a, b) is sum over nodes of measure * comp_a * conj(comp_b), each
    entry reduced by a single pairwise np.sum in node order.
    """
    comps = (up, down)
    out = np.empty((2, 2), dtype=np.complex128)
    for a in range(2):
        for b in range(2):
            out[a, b] = np.sum(measure * comps[a] * np.conj(comps[b]))
    return out


def density_from_samples(
    measure: np.ndarray, up: np.ndarray, down: np.ndarray, basis: Basis
) -> DensityMatrix2:
    """Shared accumulation kernel: weighted outer products, symmetrized once.

    The weights are expected to already include the p^2 factor of the measure
    and to describe a normalized ensemble (unit total probability).
    """
    measure = np.asarray(measure, dtype=np.float64)
    for arr, name in ((measure, "weights"), (up, "up"), (down, "down")):
        bad = ~np.isfinite(arr)
        if np.any(bad):
            i = int(np.argmax(bad))
            raise NumericalDomainError(f"non-finite {name} sample at node {i}")
    raw = accumulate_outer(measure, np.asarray(up), np.asarray(down))
    return DensityMatrix2(entries=linalg2.hermitize(raw), basis=basis)


def _slab_view(arr: np.ndarray, slab: slice) -> np.ndarray:
    # broadcastable components may have a length-1 radial axis
    return arr if arr.shape[0] == 1 else arr[slab]


def _angular_sum(values: np.ndarray, grid: QuadratureGrid) -> complex:
    """Weighted sum over the (theta, phi) sub-grid, azimuth first."""
    s_phi = (values * grid.azimuthal_weights).sum(axis=-1)
    return complex((s_phi * grid.polar_weights).sum())


def _raw_product(state: OneParticleState, grid: QuadratureGrid, target: Basis) -> np.ndarray:
    """Accumulation for radially separable states: the radial sum factors
    out of every entry, leaving small angular sums."""
    radial = states_mod.radial_values(state.product, grid)
    r_sum = float(np.sum(grid.radial_measure * np.abs(radial) ** 2))
    ang_up, ang_down = states_mod.angular_values(state.product, grid)
    if state.basis != target:
        transform = (
            spin_components_to_helicity
            if target == HELICITY
            else helicity_components_to_spin
        )
        ang_up, ang_down = transform(ang_up, ang_down, grid.theta_col, grid.phi_row)
    comps = (ang_up, ang_down)
    raw = np.empty((2, 2), dtype=np.complex128)
    shape = (grid.n_theta, grid.n_phi)
    for a in range(2):
        for b in range(2):
            product = np.broadcast_to(comps[a] * np.conj(comps[b]), shape)
            raw[a, b] = r_sum * _angular_sum(product, grid)
    return raw


def _raw_mesh(state: OneParticleState, grid: QuadratureGrid, target: Basis) -> np.ndarray:
    """Generic accumulation over the full mesh, one radial slab at a time.

    Each matrix entry is reduced azimuthal axis first, then polar, then
    radial, each with numpy's pairwise summation; slab partials are added in
    slab order. The result is therefore independent of how slabs would be
    scheduled across workers.
    """
    up, down = state.components_on(grid)
    if state.basis != target:
        transform = (
            spin_components_to_helicity
            if target == HELICITY
            else helicity_components_to_spin
        )
        up, down = transform(up, down, grid.theta_mesh, grid.phi_mesh)
    comps = (up, down)
    raw = np.zeros((2, 2), dtype=np.complex128)
    for slab in grid.radial_slabs():
        shape = (slab.stop - slab.start, grid.n_theta, grid.n_phi)
        for a in range(2):
            for b in range(2):
                product = np.broadcast_to(
                    _slab_view(comps[a], slab) * np.conj(_slab_view(comps[b], slab)),
                    shape,
                )
                s_phi = (product * grid.azimuthal_weights).sum(axis=2)
                s_theta = (s_phi * grid.polar_weights).sum(axis=1)
                raw[a, b] += (s_theta * grid.radial_measure[slab]).sum()
    return raw


def _reduce(state: OneParticleState, grid: QuadratureGrid, target: Basis) -> DensityMatrix2:
    if state.product is not None:
        raw = _raw_product(state, grid, target)
    else:
        raw = _raw_mesh(state, grid, target)
    norm = raw[0, 0].real + raw[1, 1].real
    if abs(norm - 1.0) > NORM_TOL:
        raise ContractViolationError(
            f"state must be normalized on the grid before reduction "
            f"(squared norm {norm:.6g})"
        )
    # re-enforce on-grid normalization so quadrature error never leaks into
    # the trace
    return DensityMatrix2(entries=linalg2.hermitize(raw / norm), basis=target)


def reduced_spin_density(state: OneParticleState, grid: QuadratureGrid) -> DensityMatrix2:
    """Trace out momentum, reporting the 2x2 matrix in the spin basis.

    Spin-tagged states reduce directly; helicity-tagged ones are rotated to
    the spin basis at each node first.
    """
    return _reduce(state, grid, SPIN)


def reduced_helicity_density(state: OneParticleState, grid: QuadratureGrid) -> DensityMatrix2:
    """Trace out momentum, reporting the 2x2 matrix in the helicity basis."""
    return _reduce(state, grid, HELICITY)
