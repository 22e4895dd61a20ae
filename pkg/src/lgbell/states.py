"""d-dimensional angular-radial non-separable states and their measurements.

A state is a normalized superposition ``sum_j c_j |j>_L |j>_P`` carried by a
single beam, where slot ``j`` maps to a physical LG mode (``(l=j, p=j)`` by
default).  Analyzer projections use Fourier-type bases

    |theta>_L^a = 1/sqrt(d) sum_j exp(i theta_L^a j) |j>_L ,
    theta_L^a = (2 pi / d) (v + a/2) + offset_L,
    theta_P^b = (2 pi / d) (-w + (-1)^b / 4) + offset_P,

with setting labels ``a, b in {0, 1}`` and outcomes ``v, w in 0..d-1``.  The
joint detection amplitude is ``(1/d) sum_j c_j exp(-i j (theta_L + theta_P))``
so every outcome table sums to one.  (The commonly quoted ``1/d^{3/2}``
intensity prefactor does not conserve probability; the amplitude form above
is used as the single source of truth.)
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal, Sequence

import numpy as np

from .lgmodes import BeamGeometry, ModeIndex
from .overlap import DEFAULT_QUADRATURE, QuadratureConfig, SmfWeight, overlap

MAX_DIMENSION = 16

Party = Literal["angular", "radial"]


class DimensionOutOfRange(ValueError):
    """State dimension outside ``2 <= d <= MAX_DIMENSION``."""


class ConstraintViolated(ValueError):
    """Requested coefficients leave the probability simplex."""


class ArnsState:
    """Normalized angular-radial non-separable state.

    Coefficients are normalized on construction; ``mode_map`` assigns each
    slot ``j`` its physical LG mode and defaults to ``(l=j, p=j)``.
    """

    def __init__(
        self,
        coefficients: Sequence[complex],
        mode_map: Sequence[ModeIndex] | None = None,
        max_dimension: int = MAX_DIMENSION,
    ):
        c = np.asarray(coefficients, dtype=complex).ravel()
        if c.size < 2 or c.size > max_dimension:
            raise DimensionOutOfRange(
                f"dimension must satisfy 2 <= d <= {max_dimension}, got {c.size}"
            )
        norm = float(np.linalg.norm(c))
        if norm == 0.0:
            raise ValueError("coefficients must not all be zero")
        self._c = c / norm
        self._c.setflags(write=False)
        if mode_map is None:
            mode_map = tuple(ModeIndex(j, j) for j in range(c.size))
        else:
            mode_map = tuple(mode_map)
            if len(mode_map) != c.size:
                raise ValueError("mode_map length must equal the dimension")
        self.mode_map = mode_map

    @property
    def dimension(self) -> int:
        return self._c.size

    @property
    def coefficients(self) -> np.ndarray:
        return self._c

    def field_coefficients(self) -> list[tuple[ModeIndex, complex]]:
        """(mode, coefficient) pairs for rendering the physical beam."""
        return [(m, complex(c)) for m, c in zip(self.mode_map, self._c)]

    def __repr__(self) -> str:
        return f"ArnsState(d={self.dimension}, c={np.round(self._c, 6)})"


def make_mes(d: int, max_dimension: int = MAX_DIMENSION) -> ArnsState:
    """Maximally non-separable state with uniform coefficients ``1/sqrt(d)``."""
    if d < 2 or d > max_dimension:
        raise DimensionOutOfRange(f"d must be >= 2 and <= {max_dimension}, got {d}")
    return ArnsState(np.full(d, 1.0 / math.sqrt(d)))


def make_eps_state(eps0: float, eps1: float) -> ArnsState:
    """Three-term state ``sqrt(e0)|00> + sqrt(e1)|11> + sqrt(1-e0-e1)|22>``."""
    if eps0 < 0 or eps1 < 0 or eps0 + eps1 > 1 + 1e-12:
        raise ConstraintViolated(
            f"need eps0 >= 0, eps1 >= 0, eps0 + eps1 <= 1; got ({eps0}, {eps1})"
        )
    eps2 = max(1.0 - eps0 - eps1, 0.0)
    return ArnsState(np.sqrt([eps0, eps1, eps2]))


def analyzer_phase(party: Party, d: int, setting: int, outcome: int, offset: float = 0.0) -> float:
    """Analyzer phase ``theta`` for one party, setting and outcome."""
    if setting not in (0, 1):
        raise ValueError("setting label must be 0 or 1")
    if not 0 <= outcome < d:
        raise ValueError(f"outcome must be in 0..{d - 1}")
    if party == "angular":
        return 2.0 * math.pi / d * (outcome + setting / 2.0) + offset
    if party == "radial":
        return 2.0 * math.pi / d * (-outcome + (-1) ** setting / 4.0) + offset
    raise ValueError(f"unknown party {party!r}")


@dataclass(frozen=True)
class JointProbabilityTable:
    """Outcome probabilities ``P[v, w]`` for one analyzer setting pair."""

    d: int
    a: int
    b: int
    probabilities: np.ndarray

    @property
    def total(self) -> float:
        return float(self.probabilities.sum())


def joint_probability(
    state: ArnsState,
    a: int,
    b: int,
    phase_offsets: tuple[float, float] = (0.0, 0.0),
) -> JointProbabilityTable:
    """Joint outcome table ``P(v, w) = |(1/d) sum_j c_j e^{-i j (theta_L + theta_P)}|^2``."""
    if a not in (0, 1) or b not in (0, 1):
        raise ValueError("setting labels a and b must be 0 or 1")
    d = state.dimension
    outcomes = np.arange(d)
    theta_l = 2.0 * math.pi / d * (outcomes + a / 2.0) + phase_offsets[0]
    theta_p = 2.0 * math.pi / d * (-outcomes + (-1) ** b / 4.0) + phase_offsets[1]
    total = theta_l[:, None] + theta_p[None, :]
    j = np.arange(d)
    amps = np.exp(-1j * total[:, :, None] * j) @ state.coefficients / d
    table = np.abs(amps) ** 2
    return JointProbabilityTable(d, a, b, table)


def fringe_intensity(state: ArnsState, total_phase) -> np.ndarray:
    """Projection intensity versus combined phase, scaled so the uniform
    state peaks at 1: ``(1/d) |sum_j c_j e^{i j phi}|^2``."""
    phi = np.atleast_1d(np.asarray(total_phase, dtype=float))
    j = np.arange(state.dimension)
    amp = np.exp(1j * np.outer(phi, j)) @ state.coefficients
    return np.abs(amp) ** 2 / state.dimension


def fringe_scan(
    state: ArnsState,
    fixed_party_phase: float,
    scan_phases: Sequence[float],
    phase_offsets: tuple[float, float] = (0.0, 0.0),
) -> list[tuple[float, float]]:
    """Interference curve: fix the angular phase, scan the radial phase.

    Returns ``(scan phase, intensity)`` pairs; only the combined phase
    ``theta_L + theta_P + offsets`` enters the intensity.
    """
    scan = np.asarray(scan_phases, dtype=float)
    total = fixed_party_phase + scan + phase_offsets[0] + phase_offsets[1]
    intensity = fringe_intensity(state, total)
    return list(zip(scan.tolist(), intensity.tolist()))


def fringe_visibility(state: ArnsState, samples: int = 2520) -> float:
    """Visibility ``(I_max - I_min) / (I_max + I_min)`` of the fringe curve.

    The curve is sampled uniformly over one period of the combined phase;
    2520 samples place the exact nulls of every uniform state with
    ``d <= 10`` on the grid.  Because the intensity depends only on the sum
    of the two analyzer phases, a one-phase scan at any fixed conjugate
    phase reaches the same extremes as a full two-phase scan.
    """
    phi = 2.0 * math.pi * np.arange(samples) / samples
    curve = fringe_intensity(state, phi)
    hi, lo = float(curve.max()), float(curve.min())
    if hi + lo == 0.0:
        return 0.0
    return (hi - lo) / (hi + lo)


@dataclass(frozen=True)
class DecompositionDensity:
    """Projection powers ``I[m, j]`` for probe bras ``<m|_L <j|_P``."""

    powers: np.ndarray

    @property
    def power_visibility(self) -> float:
        """Diagonal power fraction ``sum_i I[i, i] / sum_{ij} I[i, j]``."""
        total = float(self.powers.sum())
        if total == 0.0:
            return 0.0
        return float(np.trace(self.powers)) / total

    def row_normalized(self) -> np.ndarray:
        """Rows scaled to their maxima (plotting view)."""
        peaks = self.powers.max(axis=1, keepdims=True).copy()
        peaks[peaks == 0.0] = 1.0
        return self.powers / peaks


def modal_decomposition(
    state: ArnsState,
    geometry: BeamGeometry | None = None,
    weight: SmfWeight | None = None,
    quadrature: QuadratureConfig = DEFAULT_QUADRATURE,
) -> DecompositionDensity:
    """Project a state onto the ``d^2`` bras ``<m|_L <j|_P``.

    With no geometry the projections are ideal (exact basis bras, diagonal
    result).  Passing a geometry (and optionally a fiber weight) evaluates
    each projection through the overlap engine, so radial crosstalk between
    the physical modes appears in the off-diagonal cells.
    """
    d = state.dimension
    ls = [m.l for m in state.mode_map]
    ps = [m.p for m in state.mode_map]
    if len(set(ls)) != d or len(set(ps)) != d:
        raise ValueError("mode_map must use distinct angular and radial labels")

    powers = np.zeros((d, d))
    if geometry is None:
        if weight is not None:
            raise ValueError("a fiber weight requires a geometry")
        for m in range(d):
            for j in range(d):
                amp = sum(
                    c
                    for (mode, c) in zip(state.mode_map, state.coefficients)
                    if mode.l == ls[m] and mode.p == ps[j]
                )
                powers[m, j] = abs(amp) ** 2
        return DecompositionDensity(powers)

    for m in range(d):
        for j in range(d):
            probe = ModeIndex(ls[m], ps[j])
            amp = 0.0 + 0.0j
            for mode, c in zip(state.mode_map, state.coefficients):
                if mode.l != probe.l:
                    continue  # angular integral vanishes identically
                amp += c * overlap(probe, mode, geometry, weight, "conjugate", quadrature)
            powers[m, j] = abs(amp) ** 2
    return DecompositionDensity(powers)


def family_decomposition(
    modes: Sequence[ModeIndex],
    geometry: BeamGeometry | None = None,
    weight: SmfWeight | None = None,
    quadrature: QuadratureConfig = DEFAULT_QUADRATURE,
) -> DecompositionDensity:
    """Crosstalk matrix of a pure-mode family: rows are generated modes,
    columns are detection probes from the same list."""
    modes = list(modes)
    if not modes:
        raise ValueError("mode list must be non-empty")
    n = len(modes)
    powers = np.zeros((n, n))
    for i, generated in enumerate(modes):
        for j, probe in enumerate(modes):
            if geometry is None:
                powers[i, j] = 1.0 if probe == generated else 0.0
            else:
                powers[i, j] = abs(
                    overlap(probe, generated, geometry, weight, "conjugate", quadrature)
                ) ** 2
    return DecompositionDensity(powers)
