"""Phase-only hologram encoding of complex fields, with simulated readout.

A target field with normalized amplitude ``A <= 1`` and phase ``F0`` is
written onto a phase-only modulator as

    Phi = M * mod(F + 2 pi x / Lambda, 2 pi),
    M   = 1 + sincinv(A) / pi,          F = F0 - pi * M,

where ``Lambda`` is the blazed-grating period and ``sincinv`` inverts
``sin(x)/x`` on ``[-pi, 0]``.  The first diffraction order of
``exp(i Phi)`` then carries a field proportional to the target: the local
blaze depth ``M`` sets the diffracted amplitude, the ``-pi M`` term cancels
the amplitude-dependent phase offset of the first order.

:func:`reconstruct` verifies a hologram numerically: apply ``exp(i Phi)``
to an illumination field, isolate the first-order lobe in the far field
with a centered window of half the order spacing, demodulate the carrier
and transform back.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .lgmodes import SampledField


class AmplitudeOutOfRange(ValueError):
    """Target amplitude exceeds 1; normalize before encoding."""


class GratingUnresolvable(ValueError):
    """Grating period below two pixels cannot be displayed."""


class OrderOverlap(ValueError):
    """First-order window would clip the zero-order lobe."""


@dataclass(frozen=True)
class Hologram:
    """Phase grid in ``[0, 2 pi)`` with its physical pixel geometry."""

    phase: np.ndarray
    pixel_pitch: float
    grating_period: float
    bit_depth: int = 8

    def __post_init__(self) -> None:
        if self.pixel_pitch <= 0:
            raise ValueError("pixel_pitch must be > 0")
        if self.grating_period < 2.0 * self.pixel_pitch:
            raise GratingUnresolvable(
                f"grating period {self.grating_period:g} m needs >= 2 pixels "
                f"({2 * self.pixel_pitch:g} m)"
            )
        if self.bit_depth not in (8, 16):
            raise ValueError("bit_depth must be 8 or 16")
        p = np.asarray(self.phase)
        if p.min() < 0.0 or p.max() >= 2.0 * math.pi:
            raise ValueError("phase must lie in [0, 2 pi)")

    def quantized(self) -> np.ndarray:
        """Phase mapped linearly onto ``2**bit_depth`` gray levels."""
        levels = 2**self.bit_depth - 1
        data = np.round(self.phase / (2.0 * math.pi) * levels)
        return data.astype(np.uint8 if self.bit_depth == 8 else np.uint16)


def sinc_inverse(values):
    """Inverse of ``sin(x)/x`` restricted to ``[-pi, 0]``, by bisection.

    ``sin(x)/x`` rises monotonically from 0 at ``-pi`` to 1 at 0, so the
    inverse maps ``[0, 1] -> [-pi, 0]``.  Converges to ~3e-15 interval
    width; accepts scalars or arrays.
    """
    a = np.asarray(values, dtype=float)
    if a.min() < 0.0 or a.max() > 1.0:
        raise ValueError("sinc_inverse requires values in [0, 1]")
    lo = np.full_like(a, -math.pi)
    hi = np.zeros_like(a)
    for _ in range(52):
        mid = 0.5 * (lo + hi)
        fm = np.where(mid == 0.0, 1.0, np.sin(mid) / np.where(mid == 0.0, 1.0, mid))
        too_low = fm < a
        lo = np.where(too_low, mid, lo)
        hi = np.where(too_low, hi, mid)
    out = 0.5 * (lo + hi)
    return float(out) if out.ndim == 0 else out


def encode(
    target: SampledField,
    grating_period: float,
    pixel_pitch: float | None = None,
    bit_depth: int = 8,
) -> Hologram:
    """Encode a peak-normalized complex field as a phase-only hologram."""
    pitch = target.dx if pixel_pitch is None else pixel_pitch
    amplitude = np.abs(target.grid)
    peak = float(amplitude.max())
    if peak > 1.0 + 1e-9:
        raise AmplitudeOutOfRange(
            f"max target amplitude {peak:.6g} exceeds 1; normalize first"
        )
    amplitude = np.clip(amplitude, 0.0, 1.0)

    modulation = 1.0 + sinc_inverse(amplitude) / math.pi
    offset_phase = np.angle(target.grid) - math.pi * modulation
    x, _ = target.coordinates()
    blazed = np.mod(offset_phase + 2.0 * math.pi * x / grating_period, 2.0 * math.pi)
    phase = modulation * blazed
    # guard the half-open phase interval against rounding at exactly 2 pi
    phase = np.clip(phase, 0.0, np.nextafter(2.0 * math.pi, 0.0))
    return Hologram(phase, pitch, grating_period, bit_depth)


def reconstruct(holo: Hologram, illumination: SampledField) -> SampledField:
    """First-order readout of a hologram under the given illumination.

    The far field of ``illumination * exp(i Phi)`` is windowed around the
    first-order carrier frequency ``1/Lambda`` with a square window of half
    the order spacing, demodulated to zero frequency and transformed back.
    """
    if holo.phase.shape != illumination.grid.shape:
        raise ValueError("hologram and illumination grids are not conformable")
    field_width = 2.0 * illumination.extent
    if holo.grating_period > field_width / 4.0:
        raise OrderOverlap(
            f"grating period {holo.grating_period:g} m exceeds a quarter of the "
            f"field width {field_width:g} m; orders overlap"
        )

    n = illumination.resolution
    dx = illumination.dx
    field = illumination.grid * np.exp(1j * holo.phase)
    spectrum = np.fft.fftshift(np.fft.fft2(field))
    freqs = np.fft.fftshift(np.fft.fftfreq(n, d=dx))

    carrier = 1.0 / holo.grating_period
    half_window = 0.5 * carrier
    fx = freqs[None, :]
    fy = freqs[:, None]
    window = (np.abs(fx - carrier) <= half_window) & (np.abs(fy) <= half_window)
    windowed = np.where(window, spectrum, 0.0)

    # demodulate: integer-bin roll plus exact residual carrier removal
    center = np.argmin(np.abs(freqs))
    order_bin = int(np.argmin(np.abs(freqs - carrier)))
    windowed = np.roll(windowed, center - order_bin, axis=1)
    recon = np.fft.ifft2(np.fft.ifftshift(windowed))
    residual = carrier - freqs[order_bin]
    if residual != 0.0:
        x, _ = illumination.coordinates()
        recon = recon * np.exp(-2j * math.pi * residual * x)
    return SampledField(recon, illumination.extent)


def field_correlation(a: SampledField, b: SampledField) -> float:
    """Normalized overlap magnitude ``|<a|b>| / (||a|| ||b||)`` on the grid."""
    if a.grid.shape != b.grid.shape:
        raise ValueError("fields are not conformable")
    inner = np.vdot(a.grid, b.grid)
    norm = math.sqrt(float(np.vdot(a.grid, a.grid).real) * float(np.vdot(b.grid, b.grid).real))
    if norm == 0.0:
        return 0.0
    return abs(inner) / norm
