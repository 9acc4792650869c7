"""Antenna array geometries and their phase-shifter response vectors.

All arrays use half-wavelength element spacing, so steering phases depend
only on angles, never on the carrier frequency.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = ["ArrayGeometry", "ula_response", "upa_response"]

HALF_PI = np.pi / 2.0


def ula_response(theta: float, m: int) -> np.ndarray:
    """Response of an m-element uniform linear array to angle ``theta``.

    Element k (0-based) is exp(j*pi*sin(theta)*k); the first element is
    exactly 1+0j and every entry has unit modulus.
    """
    if m < 1:
        raise ValueError(f"array needs at least one element, got m={m}")
    if not -HALF_PI <= theta <= HALF_PI:
        raise ValueError(f"theta={theta} outside [-pi/2, pi/2]")
    return np.exp(1j * np.pi * np.sin(theta) * np.arange(m))


def upa_response(azimuth: float, elevation: float, geometry: "ArrayGeometry") -> np.ndarray:
    """Response of a planar array: kron(vertical factor, horizontal factor).

    The vertical factor is the linear-array response in the elevation angle;
    the horizontal factor advances by pi*cos(elevation)*sin(azimuth) per
    column.  Azimuths beyond +-pi/2 are accepted (they alias onto the front
    hemisphere; a half-wavelength planar array cannot tell front from back).
    """
    if geometry.kind != "upa":
        raise ValueError(f"geometry kind {geometry.kind!r} is not a UPA")
    if not -HALF_PI <= elevation <= HALF_PI:
        raise ValueError(f"elevation={elevation} outside [-pi/2, pi/2]")
    vertical = np.exp(1j * np.pi * np.sin(elevation) * np.arange(geometry.m_vertical))
    step = np.pi * np.cos(elevation) * np.sin(azimuth)
    horizontal = np.exp(1j * step * np.arange(geometry.m_horizontal))
    return np.kron(vertical, horizontal)


@dataclass(frozen=True)
class ArrayGeometry:
    """Half-wavelength ULA or UPA.

    A ULA is encoded as a single column: ``m_horizontal == 1`` and
    ``m_vertical == M``.  Flat antenna index ``a`` maps to vertical row
    ``a // m_horizontal`` and horizontal column ``a % m_horizontal``.
    """

    kind: str
    m_horizontal: int
    m_vertical: int

    def __post_init__(self):
        if self.kind not in ("ula", "upa"):
            raise ValueError(f"kind must be 'ula' or 'upa', got {self.kind!r}")
        if self.m_horizontal < 1 or self.m_vertical < 1:
            raise ValueError("array dimensions must be >= 1")
        if self.kind == "ula" and self.m_horizontal != 1:
            raise ValueError("a ULA is encoded with m_horizontal == 1")

    @classmethod
    def ula(cls, m: int) -> "ArrayGeometry":
        return cls("ula", 1, m)

    @classmethod
    def upa(cls, m_horizontal: int, m_vertical: int) -> "ArrayGeometry":
        return cls("upa", m_horizontal, m_vertical)

    @property
    def size(self) -> int:
        return self.m_horizontal * self.m_vertical

    def response(self, azimuth: float, elevation: float) -> np.ndarray:
        """Full-array response vector; azimuth is ignored for a ULA."""
        if self.kind == "ula":
            return ula_response(elevation, self.m_vertical)
        return upa_response(azimuth, elevation, self)

    def vertical_index(self) -> np.ndarray:
        """Vertical row of each flat antenna index."""
        return np.arange(self.size) // self.m_horizontal

    def horizontal_index(self) -> np.ndarray:
        """Horizontal column of each flat antenna index."""
        return np.arange(self.size) % self.m_horizontal
