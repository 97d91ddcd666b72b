"""Candidate port layouts for fluid antennas and their projections.

Ports are numbered 1..M throughout the package; a Selection is the 1-based
index set of the activated subset.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import IndexOutOfRange, InvalidConfig
from .linalg2 import Vec2

# Construction-time tolerances for layout invariants (meters).
CENTER_TOL_M = 1e-12
EXTENT_TOL_M = 1e-12


@dataclass(frozen=True)
class PortLayout:
    """An indexed set of port displacement vectors for one fluid antenna.

    Displacements are relative to the antenna phase center and must average
    to the zero vector. For two or more ports the largest pairwise distance
    must equal aperture_wavelengths * wavelength: the aperture is the
    physical extent, not a spacing. orientation_rad records the layout axis
    so a layout can be rebuilt with a different port count.
    """

    displacements: tuple[Vec2, ...]
    aperture_wavelengths: float
    wavelength: float
    orientation_rad: float = 0.0

    def __post_init__(self):
        n = len(self.displacements)
        if n < 1:
            raise InvalidConfig("layout needs at least one port")
        if not (self.wavelength > 0.0) or not math.isfinite(self.wavelength):
            raise InvalidConfig(f"wavelength must be positive, got {self.wavelength!r}")
        if self.aperture_wavelengths < 0.0 or not math.isfinite(self.aperture_wavelengths):
            raise InvalidConfig(
                f"aperture_wavelengths must be >= 0, got {self.aperture_wavelengths!r}"
            )
        mean_x = math.fsum(d.x for d in self.displacements) / n
        mean_y = math.fsum(d.y for d in self.displacements) / n
        if abs(mean_x) > CENTER_TOL_M or abs(mean_y) > CENTER_TOL_M:
            raise InvalidConfig(
                f"displacements must be centered, mean is ({mean_x:.3g}, {mean_y:.3g})"
            )
        if n >= 2:
            extent = max(
                (a - b).norm()
                for i, a in enumerate(self.displacements)
                for b in self.displacements[i + 1 :]
            )
            target = self.aperture_wavelengths * self.wavelength
            if abs(extent - target) > EXTENT_TOL_M:
                raise InvalidConfig(
                    f"layout extent {extent:.12g} m does not match aperture "
                    f"{target:.12g} m"
                )

    @property
    def count(self) -> int:
        return len(self.displacements)


@dataclass(frozen=True)
class Selection:
    """A strictly increasing tuple of activated 1-based port indices."""

    indices: tuple[int, ...]

    def __post_init__(self):
        prev = 0
        for i in self.indices:
            if not isinstance(i, int):
                raise InvalidConfig(f"port index must be an int, got {i!r}")
            if i <= prev:
                raise InvalidConfig(
                    f"indices must be strictly increasing and >= 1, got {self.indices}"
                )
            prev = i

    @property
    def n_s(self) -> int:
        return len(self.indices)

    def validate_for(self, layout: PortLayout) -> None:
        if self.indices and self.indices[-1] > layout.count:
            raise IndexOutOfRange(
                f"selection references port {self.indices[-1]} but the layout "
                f"has {layout.count} ports"
            )


def linear_layout(
    num_ports: int,
    aperture_wavelengths: float,
    wavelength: float,
    orientation_rad: float = 0.0,
) -> PortLayout:
    """Uniform endpoint-inclusive line of ports.

    Port m sits at ((m-1)/(M-1) - 1/2) * W * lambda along the unit vector
    (cos orientation, sin orientation), so the end-to-end extent is exactly
    W * lambda. A single-port layout degenerates to the origin.
    """
    if num_ports < 1:
        raise InvalidConfig(f"num_ports must be >= 1, got {num_ports}")
    if not (wavelength > 0.0) or not math.isfinite(wavelength):
        raise InvalidConfig(f"wavelength must be positive, got {wavelength!r}")
    if aperture_wavelengths < 0.0:
        raise InvalidConfig(
            f"aperture_wavelengths must be >= 0, got {aperture_wavelengths!r}"
        )
    axis = Vec2(math.cos(orientation_rad), math.sin(orientation_rad))
    if num_ports == 1:
        disp = (Vec2(0.0, 0.0),)
    else:
        span = aperture_wavelengths * wavelength
        disp = tuple(
            axis.scaled(((m - 1) / (num_ports - 1) - 0.5) * span)
            for m in range(1, num_ports + 1)
        )
    return PortLayout(
        displacements=disp,
        aperture_wavelengths=aperture_wavelengths,
        wavelength=wavelength,
        orientation_rad=orientation_rad,
    )


def perp_projection(layout: PortLayout, port: int, u_perp: Vec2) -> float:
    """Component of port ``port``'s displacement along ``u_perp`` (meters)."""
    if not 1 <= port <= layout.count:
        raise IndexOutOfRange(
            f"port {port} out of range 1..{layout.count}"
        )
    return u_perp.dot(layout.displacements[port - 1])
