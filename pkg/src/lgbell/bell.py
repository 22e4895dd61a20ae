"""CGLMP Bell expression for d-outcome analyzer pairs, and separability maps.

The Bell quantity is the standard CGLMP combination of the four setting
tables (A settings on the angular party, B on the radial one):

    S_d = sum_{k=0}^{floor(d/2)-1} (1 - 2k/(d-1)) * (
            [P(A1=B1+k) + P(B1=A2+k+1) + P(A2=B2+k) + P(B2=A1+k)]
          - [P(A1=B1-k-1) + P(B1=A2-k) + P(A2=B2-k-1) + P(B2=A1-k-1)] )

with ``P(A_a = B_b + k) = sum_j P_ab(v=(j+k) mod d, w=j)`` and all outcome
arithmetic mod ``d``.  The setting labels map as ``(A1, A2, B1, B2) =
(a=0, a=1, b=0, b=1)``; with the analyzer phases of :mod:`lgbell.states`
this pins the uniform two-dimensional state at ``2*sqrt(2)`` and makes the
uniform-state values strictly increasing in ``d``.  Local models obey
``S_d <= 2``; the algebraic ceiling is 4.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .states import (
    ArnsState,
    JointProbabilityTable,
    fringe_visibility,
    joint_probability,
    make_eps_state,
    make_mes,
)

#: Measured Bell values (value, one standard deviation) reported for the
#: benchtop realization this library simulates; bundled for comparison
#: output only, never asserted against the simulation.
MEASURED_BELL_VALUES: dict[int, tuple[float, float]] = {
    4: (2.883, 0.017),
    5: (2.912, 0.018),
    10: (2.650, 0.035),
}

#: Two-dimensional Bell-violation visibility threshold (the rounded "71%").
VISIBILITY_THRESHOLD = 1.0 / math.sqrt(2.0)


class ResolutionTooLow(ValueError):
    """Surface grids need at least 16 samples per axis."""


def aligned_probability(table: JointProbabilityTable, shift: int, reverse: bool = False) -> float:
    """``P(A = B + shift)``, or ``P(B = A + shift)`` when ``reverse``.

    Outcome arithmetic is modular, so negative shifts are valid.
    """
    d = table.d
    p = table.probabilities
    j = np.arange(d)
    if reverse:
        return float(p[j, (j + shift) % d].sum())
    return float(p[(j + shift) % d, j].sum())


def cglmp_from_tables(tables: dict[tuple[int, int], JointProbabilityTable]) -> tuple[float, np.ndarray]:
    """Evaluate ``S_d`` and its per-k terms from the four setting tables."""
    d = tables[(0, 0)].d
    terms = np.zeros(d // 2)
    for k in range(d // 2):
        weight = 1.0 - 2.0 * k / (d - 1)
        positive = (
            aligned_probability(tables[(0, 0)], k)
            + aligned_probability(tables[(1, 0)], k + 1, reverse=True)
            + aligned_probability(tables[(1, 1)], k)
            + aligned_probability(tables[(0, 1)], k, reverse=True)
        )
        negative = (
            aligned_probability(tables[(0, 0)], -k - 1)
            + aligned_probability(tables[(1, 0)], -k, reverse=True)
            + aligned_probability(tables[(1, 1)], -k - 1)
            + aligned_probability(tables[(0, 1)], -k - 1, reverse=True)
        )
        terms[k] = weight * (positive - negative)
    return float(terms.sum()), terms


@dataclass(frozen=True)
class CglmpResult:
    """Bell value with its per-k breakdown and the tables that produced it."""

    d: int
    value: float
    terms: np.ndarray
    tables: dict[tuple[int, int], JointProbabilityTable] = field(repr=False)
    uncertainty: float | None = None

    def __post_init__(self) -> None:
        if abs(self.value - float(self.terms.sum())) > 1e-12:
            raise ValueError("terms must sum to the Bell value")
        if abs(self.value) > 4.0 + 1e-12:
            raise ValueError("|S| cannot exceed the algebraic ceiling 4")


def cglmp_s(state: ArnsState, phase_offsets: tuple[float, float] = (0.0, 0.0)) -> CglmpResult:
    """Bell value of a state under the four standard analyzer settings."""
    tables = {
        (a, b): joint_probability(state, a, b, phase_offsets)
        for a in (0, 1)
        for b in (0, 1)
    }
    value, terms = cglmp_from_tables(tables)
    return CglmpResult(state.dimension, value, terms, tables)


def mes_bound_scan(d_min: int = 2, d_max: int = 10) -> list[tuple[int, float]]:
    """Bell values of the uniform state per dimension (strictly increasing)."""
    if d_min < 2 or d_max < d_min:
        raise ValueError("need 2 <= d_min <= d_max")
    return [(d, cglmp_s(make_mes(d)).value) for d in range(d_min, d_max + 1)]


@dataclass(frozen=True)
class SurfaceGrid:
    """Bell value and visibility sampled over the (eps0, eps1) simplex.

    ``s_values`` / ``visibility`` are indexed ``[i, j]`` for
    ``(eps0[i], eps1[j])``; points outside the simplex hold NaN.  Boundary
    polylines are lists of ``(k, 2)`` arrays of (eps0, eps1) vertices on the
    sampled level sets; areas count simplex grid cells at or above the level.
    """

    eps0: np.ndarray
    eps1: np.ndarray
    s_values: np.ndarray
    visibility: np.ndarray
    s_boundary: list[np.ndarray]
    v_boundary: list[np.ndarray]
    area_s_violation: float
    area_v_violation: float
    argmax_s: tuple[float, float]


def _iso_segments(xs: np.ndarray, ys: np.ndarray, values: np.ndarray, level: float):
    """Marching-squares segments of the ``values == level`` set.

    Linear interpolation on cell edges; cells touching NaN are skipped.
    Yields ((x1, y1), (x2, y2)) pairs.
    """

    def cross(pa, pb, va, vb):
        t = (level - va) / (vb - va)
        return (pa[0] + t * (pb[0] - pa[0]), pa[1] + t * (pb[1] - pa[1]))

    n0, n1 = values.shape
    for i in range(n0 - 1):
        for j in range(n1 - 1):
            corners = (
                ((xs[i], ys[j]), values[i, j]),
                ((xs[i + 1], ys[j]), values[i + 1, j]),
                ((xs[i + 1], ys[j + 1]), values[i + 1, j + 1]),
                ((xs[i], ys[j + 1]), values[i, j + 1]),
            )
            if any(math.isnan(v) for _, v in corners):
                continue
            points = []
            for (pa, va), (pb, vb) in zip(corners, corners[1:] + corners[:1]):
                if (va >= level) != (vb >= level):
                    points.append(cross(pa, pb, va, vb))
            # ambiguous saddles yield 4 crossings; emit pairs in edge order
            for a, b in zip(points[0::2], points[1::2]):
                yield a, b


def _chain_segments(segments, decimals: int = 12) -> list[np.ndarray]:
    """Greedily join shared-endpoint segments into polylines."""
    key = lambda p: (round(p[0], decimals), round(p[1], decimals))
    adjacency: dict[tuple, list[int]] = {}
    segs = [tuple(map(tuple, s)) for s in segments]
    for idx, (a, b) in enumerate(segs):
        adjacency.setdefault(key(a), []).append(idx)
        adjacency.setdefault(key(b), []).append(idx)
    used = [False] * len(segs)
    polylines = []
    for start in range(len(segs)):
        if used[start]:
            continue
        used[start] = True
        a, b = segs[start]
        chain = [a, b]
        for endpoint, append in ((b, True), (a, False)):
            current = endpoint
            while True:
                candidates = [i for i in adjacency.get(key(current), []) if not used[i]]
                if not candidates:
                    break
                idx = candidates[0]
                used[idx] = True
                pa, pb = segs[idx]
                nxt = pb if key(pa) == key(current) else pa
                if append:
                    chain.append(nxt)
                else:
                    chain.insert(0, nxt)
                current = nxt
        polylines.append(np.asarray(chain))
    return polylines


def separability_surface(
    grid_resolution: int = 128,
    visibility_samples: int = 720,
) -> SurfaceGrid:
    """Map ``S`` and fringe visibility over the three-term coefficient simplex.

    At each simplex point the state ``sqrt(e0)|00> + sqrt(e1)|11> +
    sqrt(1-e0-e1)|22>`` is scored; level sets are extracted at ``S = 2`` and
    ``V = 1/sqrt(2)`` and the covered areas compared.
    """
    if grid_resolution < 16:
        raise ResolutionTooLow(f"grid resolution must be >= 16, got {grid_resolution}")
    axis = np.linspace(0.0, 1.0, grid_resolution)
    s_vals = np.full((grid_resolution, grid_resolution), np.nan)
    v_vals = np.full((grid_resolution, grid_resolution), np.nan)
    for i, e0 in enumerate(axis):
        for j, e1 in enumerate(axis):
            if e0 + e1 > 1.0 + 1e-12:
                continue
            state = make_eps_state(e0, e1)
            s_vals[i, j] = cglmp_s(state).value
            v_vals[i, j] = fringe_visibility(state, visibility_samples)

    cell = (axis[1] - axis[0]) ** 2
    area_s = float(np.nansum(s_vals >= 2.0)) * cell
    area_v = float(np.nansum(v_vals >= VISIBILITY_THRESHOLD)) * cell
    flat = np.nanargmax(s_vals)
    i_max, j_max = np.unravel_index(flat, s_vals.shape)
    return SurfaceGrid(
        eps0=axis,
        eps1=axis.copy(),
        s_values=s_vals,
        visibility=v_vals,
        s_boundary=_chain_segments(_iso_segments(axis, axis, s_vals, 2.0)),
        v_boundary=_chain_segments(_iso_segments(axis, axis, v_vals, VISIBILITY_THRESHOLD)),
        area_s_violation=area_s,
        area_v_violation=area_v,
        argmax_s=(float(axis[i_max]), float(axis[j_max])),
    )
