"""Pinned physical constants (SI) used across the package.

Values are fixed rather than imported from scipy so that outputs are
bit-reproducible across environments.
"""

FLUX_QUANTUM = 2.067833848e-15
"""Magnetic flux quantum h/2e in Wb."""

VACUUM_PERMITTIVITY = 8.8541878128e-12
"""Vacuum permittivity in F/m."""

SPEED_OF_LIGHT = 2.99792458e8
"""Speed of light in m/s."""

HBAR = 1.054571817e-34
"""Reduced Planck constant in J*s."""

ELEMENTARY_CHARGE = 1.602176634e-19
"""Elementary charge in C (also the eV -> J conversion factor)."""


def ev_to_rate(energy_ev: float) -> float:
    """Convert an energy in eV to an angular frequency E/hbar in rad/s."""
    return energy_ev * ELEMENTARY_CHARGE / HBAR
