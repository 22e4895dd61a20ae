"""Poisson resampling of measured powers and error propagation.

Every measured intensity cell (fringe point, outcome-table entry or
decomposition power) is jittered independently: a value ``I`` becomes a
Poisson draw with mean ``I * scale``, rescaled back by ``1/scale``.  The
derived quantity is recomputed per resample and summarized as (mean, one
standard deviation).

Randomness is pinned for bit-reproducibility: the generator is numpy's
PCG64, and resample ``i`` under master seed ``s`` always uses the stream
``SeedSequence([s, i])``, so results do not depend on evaluation order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

import numpy as np

from .bell import cglmp_from_tables
from .lgmodes import BeamGeometry
from .overlap import DEFAULT_QUADRATURE, QuadratureConfig, SmfWeight
from .states import (
    ArnsState,
    JointProbabilityTable,
    fringe_intensity,
    joint_probability,
    modal_decomposition,
)

Quantity = Literal["s_d", "visibility", "power_visibility"]


@dataclass(frozen=True)
class NoiseConfig:
    """Counting-noise model: counts per unit normalized intensity, resample
    count and master seed."""

    mean_counts_scale: float
    n_resamples: int = 1000
    rng_seed: int = 0

    def __post_init__(self) -> None:
        if self.mean_counts_scale <= 0:
            raise ValueError("mean_counts_scale must be > 0")
        if self.n_resamples < 2:
            raise ValueError("n_resamples must be >= 2")
        if self.rng_seed < 0:
            raise ValueError("rng_seed must be >= 0")


def _stream(seed: int, index: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, index])))


def poissonize(intensities, cfg: NoiseConfig, index: int = 0) -> np.ndarray:
    """One Poisson resample of non-negative intensities (stream ``index``)."""
    values = np.asarray(intensities, dtype=float)
    if values.size and values.min() < 0:
        raise ValueError("intensities must be >= 0")
    rng = _stream(cfg.rng_seed, index)
    counts = rng.poisson(values * cfg.mean_counts_scale)
    return counts / cfg.mean_counts_scale


def _noisy_bell(state: ArnsState, cfg: NoiseConfig, offsets) -> np.ndarray:
    tables = {
        (a, b): joint_probability(state, a, b, offsets) for a in (0, 1) for b in (0, 1)
    }
    keys = sorted(tables)
    base = np.concatenate([tables[k].probabilities.ravel() for k in keys])
    d = state.dimension
    out = np.empty(cfg.n_resamples)
    for i in range(cfg.n_resamples):
        noisy = poissonize(base, cfg, i).reshape(4, d, d)
        resampled = {}
        for block, key in enumerate(keys):
            table = noisy[block]
            total = table.sum()
            if total > 0:
                table = table / total
            resampled[key] = JointProbabilityTable(d, key[0], key[1], table)
        out[i], _ = cglmp_from_tables(resampled)
    return out


def _noisy_visibility(state: ArnsState, cfg: NoiseConfig) -> np.ndarray:
    # measure at the two fixed extremal phases of the noiseless curve, as an
    # experiment would; keeps the resampled estimator free of max-of-noise bias
    phases = 2.0 * math.pi * np.arange(2520) / 2520
    curve = fringe_intensity(state, phases)
    base = np.array([curve.max(), curve.min()])
    out = np.empty(cfg.n_resamples)
    for i in range(cfg.n_resamples):
        hi, lo = poissonize(base, cfg, i)
        out[i] = 0.0 if hi + lo == 0 else (hi - lo) / (hi + lo)
    return out


def _noisy_power_visibility(
    state: ArnsState,
    cfg: NoiseConfig,
    geometry: BeamGeometry | None,
    weight: SmfWeight | None,
    quadrature: QuadratureConfig,
) -> np.ndarray:
    base = modal_decomposition(state, geometry, weight, quadrature).powers
    d = base.shape[0]
    out = np.empty(cfg.n_resamples)
    for i in range(cfg.n_resamples):
        noisy = poissonize(base.ravel(), cfg, i).reshape(d, d)
        total = noisy.sum()
        out[i] = 0.0 if total == 0 else float(np.trace(noisy)) / total
    return out


def resample_quantity(
    quantity: Quantity,
    state: ArnsState,
    cfg: NoiseConfig,
    phase_offsets: tuple[float, float] = (0.0, 0.0),
    geometry: BeamGeometry | None = None,
    weight: SmfWeight | None = None,
    quadrature: QuadratureConfig = DEFAULT_QUADRATURE,
) -> np.ndarray:
    """Per-resample values of a derived quantity under counting noise."""
    if quantity == "s_d":
        return _noisy_bell(state, cfg, phase_offsets)
    if quantity == "visibility":
        return _noisy_visibility(state, cfg)
    if quantity == "power_visibility":
        return _noisy_power_visibility(state, cfg, geometry, weight, quadrature)
    raise ValueError(f"unknown quantity {quantity!r}")


def estimate_sigma(
    quantity: Quantity,
    state: ArnsState,
    cfg: NoiseConfig,
    phase_offsets: tuple[float, float] = (0.0, 0.0),
    geometry: BeamGeometry | None = None,
    weight: SmfWeight | None = None,
    quadrature: QuadratureConfig = DEFAULT_QUADRATURE,
) -> tuple[float, float]:
    """Sample mean and standard deviation of a quantity under counting noise."""
    values = resample_quantity(
        quantity, state, cfg, phase_offsets, geometry, weight, quadrature
    )
    return float(values.mean()), float(values.std(ddof=1))
