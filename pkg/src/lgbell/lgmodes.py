"""Laguerre-Gaussian mode fields on physical sample grids.

An LG mode is labelled by an angular index ``l`` (topological charge of the
helical phase ``exp(i*l*phi)``) and a radial index ``p`` (the intensity
pattern carries ``p + 1`` concentric rings).  The mode order is
``N = |l| + 2p + 1``.

Two waist conventions are supported:

``standard``
    Every mode shares the fundamental waist ``w0``; the physical mode radius
    then grows like ``w0 * sqrt(N)``.
``revised``
    Each mode gets a scaled waist ``w0 / sqrt(N)`` so that all orders share
    one physical beam size.  This keeps high-order modes inside a fixed
    modulator aperture and, combined with the fiber weighting in
    :mod:`lgbell.overlap`, restores radial orthogonality in detection.

All functions are pure; fields are vectorized over numpy coordinate arrays.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal, Sequence

import numpy as np

WaistMode = Literal["standard", "revised"]


class EmptyState(ValueError):
    """Raised when a field is requested for an empty / all-zero mode list."""


class GridTooCoarse(ValueError):
    """Raised when a grid cannot resolve the finest radial ring present."""


@dataclass(frozen=True)
class ModeIndex:
    """Angular-radial mode label ``(l, p)``.

    ``l`` may be any integer, ``p`` must be non-negative.
    """

    l: int
    p: int

    def __post_init__(self) -> None:
        if self.p < 0:
            raise ValueError(f"radial index p must be >= 0, got {self.p}")

    @property
    def order(self) -> int:
        """Mode order ``N = |l| + 2p + 1`` (always >= 1)."""
        return abs(self.l) + 2 * self.p + 1


@dataclass(frozen=True)
class BeamGeometry:
    """Physical beam parameters shared by a family of modes.

    Parameters
    ----------
    wavelength:
        Vacuum wavelength in meters.
    base_waist:
        Fundamental ``(0, 0)`` waist ``w0`` in meters.
    z:
        Default evaluation plane in meters (0 = waist plane).
    waist_mode:
        ``"standard"`` (shared waist) or ``"revised"`` (waist scaled by
        ``1/sqrt(N)`` per mode).
    """

    wavelength: float
    base_waist: float
    z: float = 0.0
    waist_mode: WaistMode = "standard"

    def __post_init__(self) -> None:
        if self.wavelength <= 0:
            raise ValueError("wavelength must be > 0")
        if self.base_waist <= 0:
            raise ValueError("base_waist must be > 0")
        if self.waist_mode not in ("standard", "revised"):
            raise ValueError(f"unknown waist_mode {self.waist_mode!r}")


def effective_waist(mode: ModeIndex, geom: BeamGeometry) -> float:
    """Waist of ``mode`` in meters: ``w0`` or ``w0 / sqrt(|l| + 2p + 1)``."""
    if geom.waist_mode == "revised":
        return geom.base_waist / math.sqrt(mode.order)
    return geom.base_waist


def rayleigh_range(mode: ModeIndex, geom: BeamGeometry) -> float:
    """Per-mode Rayleigh range ``pi * w^2 / lambda`` (uses the effective waist)."""
    w = effective_waist(mode, geom)
    return math.pi * w * w / geom.wavelength


def beam_radius(mode: ModeIndex, geom: BeamGeometry, z: float) -> float:
    """Gaussian ``1/e`` radius ``w(z) = w(0) * sqrt(1 + (z/z_r)^2)``."""
    w0 = effective_waist(mode, geom)
    zr = rayleigh_range(mode, geom)
    return w0 * math.sqrt(1.0 + (z / zr) ** 2)


def laguerre_poly(p: int, alpha: int, x):
    """Generalized Laguerre polynomial ``L_p^alpha(x)``.

    Evaluated with the ascending three-term recurrence

        (k+1) L_{k+1} = (2k + 1 + alpha - x) L_k - (k + alpha) L_{k-1},

    which stays stable for large ``x`` where the explicit alternating series
    loses precision.  Accepts scalars or numpy arrays for ``x``.
    """
    if p < 0:
        raise ValueError("p must be >= 0")
    if alpha < 0:
        raise ValueError("alpha must be >= 0")
    xs = np.asarray(x, dtype=float)
    prev = np.ones_like(xs)
    if p == 0:
        return float(prev) if xs.ndim == 0 else prev
    curr = 1.0 + alpha - xs
    for k in range(1, p):
        prev, curr = curr, ((2 * k + 1 + alpha - xs) * curr - (k + alpha) * prev) / (k + 1)
    return float(curr) if xs.ndim == 0 else curr


def lg_field(mode: ModeIndex, geom: BeamGeometry, r, phi, z: float | None = None):
    """Complex LG mode amplitude at cylindrical coordinates ``(r, phi, z)``.

    The field carries the normalization ``sqrt(2 p! / (pi (p+|l|)!)) / w(z)``
    (unit power in the transverse plane), the ring envelope
    ``(sqrt(2) r / w)^{|l|} L_p^{|l|}(2r^2/w^2) exp(-r^2/w^2)``, the helical
    phase ``l*phi``, the wavefront-curvature phase
    ``-k r^2 z / (2 (z^2 + z_r^2))`` and the Gouy phase
    ``(2p + |l| + 1) * arctan(z / z_r)``.

    ``z = None`` evaluates at the geometry's default plane.  ``r`` and
    ``phi`` may be numpy arrays (broadcast together).
    """
    la = abs(mode.l)
    w0 = effective_waist(mode, geom)
    zr = rayleigh_range(mode, geom)
    zv = geom.z if z is None else z
    wz = w0 * math.sqrt(1.0 + (zv / zr) ** 2)
    k = 2.0 * math.pi / geom.wavelength

    r = np.asarray(r, dtype=float)
    # factorials through log-gamma so p + |l| > 20 does not overflow
    norm = math.sqrt(2.0 / math.pi) * math.exp(
        0.5 * (math.lgamma(mode.p + 1) - math.lgamma(mode.p + la + 1))
    ) / wz
    rho2 = r * r / (wz * wz)
    envelope = (math.sqrt(2.0) * r / wz) ** la * laguerre_poly(mode.p, la, 2.0 * rho2) * np.exp(-rho2)
    phase = (
        mode.l * np.asarray(phi, dtype=float)
        - k * r * r * zv / (2.0 * (zv * zv + zr * zr))
        + mode.order * math.atan(zv / zr)
    )
    return norm * envelope * np.exp(1j * phase)


@dataclass(frozen=True)
class SampledField:
    """Complex scalar field on a centered square grid.

    ``extent`` is the physical half-width per axis in meters; samples sit at
    pixel centers, so the grid never contains the exact axis endpoints.
    """

    grid: np.ndarray
    extent: float

    def __post_init__(self) -> None:
        g = np.asarray(self.grid)
        if g.ndim != 2 or g.shape[0] != g.shape[1]:
            raise ValueError("grid must be a square 2-D array")
        if g.shape[0] < 2:
            raise ValueError("resolution must be >= 2")
        if self.extent <= 0:
            raise ValueError("extent must be > 0")
        if not np.all(np.isfinite(g.real)) or not np.all(np.isfinite(g.imag)):
            raise ValueError("field contains non-finite samples")

    @property
    def resolution(self) -> int:
        return self.grid.shape[0]

    @property
    def dx(self) -> float:
        """Sample pitch in meters."""
        return 2.0 * self.extent / self.resolution

    def axis(self) -> np.ndarray:
        """Pixel-center coordinates along one axis, in meters."""
        n = self.resolution
        return self.dx * (np.arange(n) - (n - 1) / 2.0)

    def coordinates(self) -> tuple[np.ndarray, np.ndarray]:
        """Meshgrid ``(x, y)`` of sample coordinates in meters."""
        ax = self.axis()
        return np.meshgrid(ax, ax)

    @property
    def intensity(self) -> np.ndarray:
        return np.abs(self.grid) ** 2

    @property
    def power(self) -> float:
        """Discrete transverse power ``sum |E|^2 dx dy``."""
        return float(np.sum(self.intensity) * self.dx * self.dx)

    def peak_normalized(self) -> "SampledField":
        """Copy scaled so the maximum amplitude modulus is 1."""
        peak = float(np.max(np.abs(self.grid)))
        if peak == 0.0:
            raise ValueError("cannot normalize an all-zero field")
        return SampledField(self.grid / peak, self.extent)


def default_extent(modes: Sequence[ModeIndex], geom: BeamGeometry) -> float:
    """Grid half-width covering every mode: ``4 * max(w_eff * sqrt(N))``.

    At that radius the Gaussian envelope has fallen far below 1e-8 of peak
    for every listed mode.
    """
    if not modes:
        raise EmptyState("no modes given")
    return 4.0 * max(effective_waist(m, geom) * math.sqrt(m.order) for m in modes)


def finest_ring_width(modes: Sequence[ModeIndex], geom: BeamGeometry) -> float:
    """Smallest radial ring pitch present, ``~ pi * w_eff / (2 sqrt(N))``.

    The estimate follows from the Bessel-like spacing of Laguerre zeros: in
    the radial coordinate the rings of a mode of order ``N`` are roughly
    equally spaced by ``pi * w / (2 sqrt(N))``.
    """
    if not modes:
        raise EmptyState("no modes given")
    return min(
        math.pi * effective_waist(m, geom) / (2.0 * math.sqrt(m.order)) for m in modes
    )


def render_field(
    state_coefficients: Sequence[tuple[ModeIndex, complex]],
    geom: BeamGeometry,
    resolution: int = 512,
    extent: float | None = None,
) -> SampledField:
    """Sample a coherent superposition ``sum_j c_j LG_j`` on a square grid.

    Raises :class:`EmptyState` when no mode carries weight and
    :class:`GridTooCoarse` when the finest ring of the superposition would be
    sampled fewer than 8 times per ring width.  When the modes are
    orthonormal on the grid the output power equals ``sum |c_j|^2``.
    """
    live = [(m, complex(c)) for m, c in state_coefficients if c != 0]
    if not live:
        raise EmptyState("state has no non-zero coefficients")
    if resolution < 2:
        raise ValueError("resolution must be >= 2")
    modes = [m for m, _ in live]
    if extent is None:
        extent = default_extent(modes, geom)
    if extent <= 0:
        raise ValueError("extent must be > 0")

    dx = 2.0 * extent / resolution
    ring = finest_ring_width(modes, geom)
    if 8.0 * dx > ring:
        need = math.ceil(16.0 * extent / ring)
        raise GridTooCoarse(
            f"{resolution}x{resolution} grid under-resolves the finest ring "
            f"({ring:.3e} m needs >= 8 samples); use resolution >= {need}"
        )

    ax = dx * (np.arange(resolution) - (resolution - 1) / 2.0)
    xx, yy = np.meshgrid(ax, ax)
    rr = np.hypot(xx, yy)
    pp = np.arctan2(yy, xx)
    field = np.zeros((resolution, resolution), dtype=complex)
    for m, c in live:
        field += c * lg_field(m, geom, rr, pp)
    return SampledField(field, float(extent))
