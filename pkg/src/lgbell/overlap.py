"""Pairwise LG mode overlaps by deterministic quadrature.

The overlap of a detection (probe) mode ``A`` with a generated (target)
mode ``B`` at the modulator plane is

    <A|B> = int_0^inf int_0^2pi  A~(r, phi) * B(r, phi) * [G(r, W)] r dr dphi

where ``A~`` is the probe field either complex-conjugated (``"conjugate"``
convention, a probe hologram carrying ``exp(-i l phi)``, the default) or
taken as-is (``"direct"``), and ``G(r, W) = sqrt(2/pi)/W * exp(-r^2/W^2)``
is the optional normalized Gaussian acceptance mode of a single-mode fiber,
imaged backward onto the modulator with mode size ``W``.

The quadrature is a tensor product: Gauss-Legendre in the radial direction
after the substitution ``u = (r/s)^2`` with ``s`` the smaller effective
waist of the pair (nodes concentrate where the finest rings live, and the
integrand becomes polynomial-times-exponential in ``u``), over a domain of
six times the larger physical mode radius, and a uniform trapezoid rule in
the periodic angular direction (spectrally accurate; integer-harmonic
factors vanish to machine precision).  Because every LG field separates as
``R(r) exp(i l phi)``, the 2-D tensor sum factorizes exactly into a radial
sum times an angular sum, which is how it is evaluated.

Node counts are doubled until two successive refinements agree within the
configured tolerance, else :class:`QuadratureNotConverged` is raised.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Literal

import numpy as np
from numpy.polynomial.legendre import leggauss

from .lgmodes import BeamGeometry, ModeIndex, effective_waist, lg_field

ProbeConvention = Literal["conjugate", "direct"]


class QuadratureNotConverged(RuntimeError):
    """Two successive grid refinements disagreed beyond tolerance."""

    def __init__(self, message: str, pair: tuple[ModeIndex, ModeIndex] | None = None):
        super().__init__(message)
        self.pair = pair


@dataclass(frozen=True)
class SmfWeight:
    """Gaussian fiber-acceptance weight, sized at the modulator plane.

    ``mode_size`` is the mode radius ``W`` in meters of the fiber's Gaussian
    mode imaged (magnified) backward onto the modulator.
    """

    mode_size: float

    def __post_init__(self) -> None:
        if self.mode_size <= 0:
            raise ValueError("mode_size must be > 0")

    def amplitude(self, r: np.ndarray) -> np.ndarray:
        """Normalized Gaussian mode amplitude ``G(r, W)`` (units 1/m)."""
        w = self.mode_size
        return math.sqrt(2.0 / math.pi) / w * np.exp(-(r * r) / (w * w))


@dataclass(frozen=True)
class QuadratureConfig:
    """Tensor quadrature controls.

    ``tolerance`` is the allowed change (relative to ``max(1, |value|)``)
    between successive node doublings; 1e-8 sits just above the node-count
    noise floor of high-order Gauss-Legendre rules on these long domains.
    """

    radial_nodes: int = 256
    angular_nodes: int = 256
    tolerance: float = 1e-8
    max_refinements: int = 3

    def __post_init__(self) -> None:
        if self.radial_nodes < 2 or self.angular_nodes < 2:
            raise ValueError("node counts must be >= 2")
        if self.tolerance <= 0:
            raise ValueError("tolerance must be > 0")
        if self.max_refinements < 0:
            raise ValueError("max_refinements must be >= 0")


DEFAULT_QUADRATURE = QuadratureConfig()


@lru_cache(maxsize=16)
def _gauss_nodes(n: int) -> tuple[np.ndarray, np.ndarray]:
    # leggauss is O(n^3); the handful of node counts in use are cached
    x, w = leggauss(n)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


@lru_cache(maxsize=1024)
def _angular_factor(delta_l: int, nodes: int) -> complex:
    """Trapezoid sum of ``exp(i delta_l phi)`` over one period."""
    phi = 2.0 * math.pi * np.arange(nodes) / nodes
    return complex(np.sum(np.exp(1j * delta_l * phi)) * (2.0 * math.pi / nodes))


def _radial_factor(
    mode_a: ModeIndex,
    mode_b: ModeIndex,
    geom: BeamGeometry,
    weight: SmfWeight | None,
    conjugate_probe: bool,
    nodes: int,
) -> complex:
    """Gauss-Legendre sum of ``A~_rad(r) B_rad(r) [G(r)] r dr``."""
    wa, wb = effective_waist(mode_a, geom), effective_waist(mode_b, geom)
    # substitution scale: the smaller waist, so the node clustering of the
    # mapped rule lands on the finest rings of the pair
    s = min(wa, wb)
    # domain: 6x the larger physical mode radius, tail < 1e-15
    r_max = 6.0 * max(wa * math.sqrt(mode_a.order), wb * math.sqrt(mode_b.order))
    u_max = (r_max / s) ** 2
    x, w = _gauss_nodes(nodes)
    u = 0.5 * u_max * (x + 1.0)
    wu = 0.5 * u_max * w
    r = s * np.sqrt(u)

    ra = lg_field(mode_a, geom, r, 0.0)
    rb = lg_field(mode_b, geom, r, 0.0)
    if conjugate_probe:
        ra = np.conj(ra)
    integrand = ra * rb
    if weight is not None:
        integrand = integrand * weight.amplitude(r)
    # int f(r) r dr = (s^2 / 2) int f(s sqrt(u)) du
    return complex(0.5 * s * s * np.sum(wu * integrand))


def overlap(
    mode_a: ModeIndex,
    mode_b: ModeIndex,
    geom: BeamGeometry,
    weight: SmfWeight | None = None,
    convention: ProbeConvention = "conjugate",
    quadrature: QuadratureConfig = DEFAULT_QUADRATURE,
) -> complex:
    """Overlap of probe ``mode_a`` with target ``mode_b``.

    Unweighted, same-waist overlaps reproduce the LG orthonormality deltas:
    under the default conjugate-probe convention the angular factor selects
    ``l_a == l_b``, under ``"direct"`` it selects ``l_a == -l_b``.
    """
    if convention not in ("conjugate", "direct"):
        raise ValueError(f"unknown probe convention {convention!r}")
    conjugate_probe = convention == "conjugate"
    delta_l = mode_b.l - mode_a.l if conjugate_probe else mode_b.l + mode_a.l

    nr, nphi = quadrature.radial_nodes, quadrature.angular_nodes
    previous = _angular_factor(delta_l, nphi) * _radial_factor(
        mode_a, mode_b, geom, weight, conjugate_probe, nr
    )
    for _ in range(quadrature.max_refinements):
        nr, nphi = 2 * nr, 2 * nphi
        current = _angular_factor(delta_l, nphi) * _radial_factor(
            mode_a, mode_b, geom, weight, conjugate_probe, nr
        )
        # weighted overlaps carry dimension 1/m, so allow a relative scale
        if abs(current - previous) <= quadrature.tolerance * max(1.0, abs(current)):
            return current
        previous = current
    raise QuadratureNotConverged(
        f"overlap of (l={mode_a.l},p={mode_a.p}) with (l={mode_b.l},p={mode_b.p}) "
        f"did not converge to {quadrature.tolerance:g} within "
        f"{quadrature.max_refinements} refinements",
        pair=(mode_a, mode_b),
    )


@dataclass(frozen=True)
class OverlapMatrix:
    """Complex overlap amplitudes of probe rows against target columns."""

    probes: tuple[ModeIndex, ...]
    targets: tuple[ModeIndex, ...]
    entries: np.ndarray

    @property
    def magnitude_squared(self) -> np.ndarray:
        return np.abs(self.entries) ** 2

    def row_normalized_mag2(self) -> np.ndarray:
        """``|entry|^2`` scaled so each row's maximum is 1 (plotting view)."""
        m2 = self.magnitude_squared
        peaks = m2.max(axis=1, keepdims=True)
        peaks[peaks == 0.0] = 1.0
        return m2 / peaks

    def normalized_entries(self) -> np.ndarray:
        """Entries rescaled by the diagonal self-overlaps (Cauchy-Schwarz view).

        Only meaningful when ``probes == targets``; the result is bounded by
        1 in modulus up to quadrature tolerance.
        """
        if self.probes != self.targets:
            raise ValueError("normalization requires probes == targets")
        diag = np.real(np.diag(self.entries))
        scale = np.sqrt(np.outer(diag, diag))
        return self.entries / scale


def orthogonality_matrix(
    probes: list[ModeIndex] | tuple[ModeIndex, ...],
    targets: list[ModeIndex] | tuple[ModeIndex, ...],
    geom: BeamGeometry,
    weight: SmfWeight | None = None,
    convention: ProbeConvention = "conjugate",
    quadrature: QuadratureConfig = DEFAULT_QUADRATURE,
) -> OverlapMatrix:
    """Assemble the pairwise overlap matrix ``entries[i, j] = <probes[i]|targets[j]>``."""
    if not probes or not targets:
        raise ValueError("probe and target lists must be non-empty")
    entries = np.zeros((len(probes), len(targets)), dtype=complex)
    for i, a in enumerate(probes):
        for j, b in enumerate(targets):
            entries[i, j] = overlap(a, b, geom, weight, convention, quadrature)
    return OverlapMatrix(tuple(probes), tuple(targets), entries)


def radial_family(count: int) -> list[ModeIndex]:
    """Modes ``(0, p)`` for ``p = 0 .. count-1``."""
    return [ModeIndex(0, p) for p in range(count)]


def angular_family(count: int) -> list[ModeIndex]:
    """Modes ``(l, 0)`` for ``l = 0 .. count-1``."""
    return [ModeIndex(l, 0) for l in range(count)]
