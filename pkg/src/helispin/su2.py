"""Spin-1/2 frame rotation and spin <-> helicity amplitude transforms.

The rotation carrying the z axis into the direction (theta, phi) is
represented on two-spinors by

    D(theta, phi) = [[exp(-i*phi/2), 0], [0, exp(i*phi/2)]]
                    @ [[cos(theta/2), -sin(theta/2)], [sin(theta/2), cos(theta/2)]]

Spin-basis amplitudes transform into helicity-basis ones with the inverse
rotation, and back with the rotation itself. The inverse is always taken as
the conjugate transpose (D is exactly unitary), never a generic inverse.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

import numpy as np

from .errors import ConfigurationError, ContractViolationError
from .quadrature import Momentum

Basis = Literal["spin", "helicity"]
SPIN: Basis = "spin"
HELICITY: Basis = "helicity"


@dataclass(frozen=True)
class AmplitudePair:
    """The two complex amplitudes at one momentum, tagged with their basis."""

    up: complex
    down: complex
    basis: Basis

    def __post_init__(self) -> None:
        if self.basis not in (SPIN, HELICITY):
            raise ConfigurationError(f"unknown basis tag {self.basis!r}")
        if not (np.isfinite(self.up) and np.isfinite(self.down)):
            raise ConfigurationError("amplitude components must be finite")


def wigner_rotation(theta: float, phi: float) -> np.ndarray:
    """The 2x2 unitary rotating the spin quantization axis into (theta, phi).

    Unitary with determinant 1 by construction. At theta = 0 or pi the matrix
    is still returned as written, but the azimuthal phase there is purely
    conventional (the direction does not single out an azimuth).
    """
    if not (0.0 <= theta <= np.pi):
        raise ConfigurationError(f"theta must lie in [0, pi], got {theta}")
    if not (0.0 <= phi < 2.0 * np.pi):
        raise ConfigurationError(f"phi must lie in [0, 2*pi), got {phi}")
    c, s = np.cos(theta / 2.0), np.sin(theta / 2.0)
    e_minus = np.exp(-0.5j * phi)
    e_plus = np.exp(0.5j * phi)
    return np.array(
        [[e_minus * c, -e_minus * s], [e_plus * s, e_plus * c]], dtype=np.complex128
    )


def _half_angle_factors(theta, phi):
    """cos(theta/2), sin(theta/2), exp(-i*phi/2) for scalar or array input."""
    half = 0.5 * np.asarray(theta, dtype=np.float64)
    e_minus = np.exp(-0.5j * np.asarray(phi, dtype=np.float64))
    return np.cos(half), np.sin(half), e_minus


def spin_components_to_helicity(up, down, theta, phi):
    """Vectorized inverse-rotation transform of spin components.

    Applies the conjugate transpose of the rotation at each (theta, phi):
        up'   =  exp(+i*phi/2)*cos(theta/2)*up + exp(-i*phi/2)*sin(theta/2)*down
        down' = -exp(+i*phi/2)*sin(theta/2)*up + exp(-i*phi/2)*cos(theta/2)*down
    """
    c, s, e_minus = _half_angle_factors(theta, phi)
    e_plus = np.conj(e_minus)
    return (
        e_plus * c * up + e_minus * s * down,
        -e_plus * s * up + e_minus * c * down,
    )


def helicity_components_to_spin(up, down, theta, phi):
    """Vectorized rotation transform of helicity components (exact inverse
    of :func:`spin_components_to_helicity`)."""
    c, s, e_minus = _half_angle_factors(theta, phi)
    e_plus = np.conj(e_minus)
    return (
        e_minus * c * up - e_minus * s * down,
        e_plus * s * up + e_plus * c * down,
    )


def spin_to_helicity(a: AmplitudePair, direction: Momentum) -> AmplitudePair:
    """Re-express a spin-tagged amplitude pair in the helicity basis along
    the given momentum direction."""
    if a.basis != SPIN:
        raise ContractViolationError(f"expected a spin-tagged pair, got {a.basis!r}")
    up, down = spin_components_to_helicity(a.up, a.down, direction.theta, direction.phi)
    return AmplitudePair(up=complex(up), down=complex(down), basis=HELICITY)


def helicity_to_spin(a: AmplitudePair, direction: Momentum) -> AmplitudePair:
    """Re-express a helicity-tagged amplitude pair in the spin basis."""
    if a.basis != HELICITY:
        raise ContractViolationError(
            f"expected a helicity-tagged pair, got {a.basis!r}"
        )
    up, down = helicity_components_to_spin(a.up, a.down, direction.theta, direction.phi)
    return AmplitudePair(up=complex(up), down=complex(down), basis=SPIN)
