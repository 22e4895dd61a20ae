"""CSV and PGM export with atomic writes.

Every writer goes through :func:`atomic_write`: content lands in a
temporary file next to the destination and is renamed into place, so a
failed run never leaves a partial output.  Float formatting is fixed at
17 significant digits, which makes outputs byte-reproducible.
"""

from __future__ import annotations

import os
import tempfile
from contextlib import contextmanager
from typing import IO, Iterable

import numpy as np

from .holography import Hologram
from .lgmodes import SampledField
from .overlap import OverlapMatrix
from .states import DecompositionDensity, JointProbabilityTable

_FMT = "%.17g"


def _fmt(value: float) -> str:
    return _FMT % value


@contextmanager
def atomic_write(path: str | os.PathLike, binary: bool = False):
    """Yield a file object whose content replaces ``path`` only on success."""
    directory = os.path.dirname(os.fspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-lgbell-")
    handle: IO
    try:
        handle = os.fdopen(fd, "wb" if binary else "w")
        with handle:
            yield handle
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise


def write_pgm(path, data: np.ndarray) -> None:
    """Binary (P5) PGM of a uint8 or uint16 gray image."""
    if data.dtype == np.uint8:
        maxval = 255
    elif data.dtype == np.uint16:
        maxval = 65535
    else:
        raise ValueError("PGM data must be uint8 or uint16")
    h, w = data.shape
    with atomic_write(path, binary=True) as f:
        f.write(f"P5\n{w} {h}\n{maxval}\n".encode("ascii"))
        if maxval > 255:
            f.write(data.astype(">u2").tobytes())
        else:
            f.write(data.tobytes())


def field_intensity_pgm(path, field: SampledField) -> None:
    """8-bit PGM of a field's intensity, peak mapped to 255."""
    intensity = field.intensity
    peak = intensity.max()
    if peak == 0:
        raise ValueError("cannot export an all-zero field")
    write_pgm(path, np.round(intensity / peak * 255).astype(np.uint8))


def hologram_pgm(path, holo: Hologram) -> None:
    """PGM of a hologram's quantized phase (bit depth from the hologram)."""
    write_pgm(path, holo.quantized())


def field_csv(path, field: SampledField) -> None:
    """Complex field samples as rows ``x_m, y_m, re, im``."""
    xx, yy = field.coordinates()
    with atomic_write(path) as f:
        f.write("x_m,y_m,re,im\n")
        for x, y, v in zip(xx.ravel(), yy.ravel(), field.grid.ravel()):
            f.write(f"{_fmt(x)},{_fmt(y)},{_fmt(v.real)},{_fmt(v.imag)}\n")


def overlap_csv(path, matrix: OverlapMatrix, row_normalized: bool = False) -> None:
    """Overlap matrix rows ``probe_l, probe_p, target_l, target_p, re, im, mag2``.

    ``row_normalized`` appends a ``mag2_rownorm`` column (row maxima = 1).
    """
    header = "probe_l,probe_p,target_l,target_p,re,im,mag2"
    rownorm = matrix.row_normalized_mag2() if row_normalized else None
    if row_normalized:
        header += ",mag2_rownorm"
    with atomic_write(path) as f:
        f.write(header + "\n")
        for i, probe in enumerate(matrix.probes):
            for j, target in enumerate(matrix.targets):
                v = matrix.entries[i, j]
                row = (
                    f"{probe.l},{probe.p},{target.l},{target.p},"
                    f"{_fmt(v.real)},{_fmt(v.imag)},{_fmt(abs(v) ** 2)}"
                )
                if rownorm is not None:
                    row += f",{_fmt(rownorm[i, j])}"
                f.write(row + "\n")


def fringe_csv(path, curve: Iterable[tuple[float, float]]) -> None:
    with atomic_write(path) as f:
        f.write("theta_rad,intensity\n")
        for theta, intensity in curve:
            f.write(f"{_fmt(theta)},{_fmt(intensity)}\n")


def probability_csv(path, tables: Iterable[JointProbabilityTable]) -> None:
    with atomic_write(path) as f:
        f.write("a,b,v,w,p\n")
        for table in tables:
            for v in range(table.d):
                for w in range(table.d):
                    f.write(f"{table.a},{table.b},{v},{w},{_fmt(table.probabilities[v, w])}\n")


def decomposition_csv(path, density: DecompositionDensity) -> None:
    rownorm = density.row_normalized()
    with atomic_write(path) as f:
        f.write("m,j,power,row_normalized\n")
        n0, n1 = density.powers.shape
        for m in range(n0):
            for j in range(n1):
                f.write(f"{m},{j},{_fmt(density.powers[m, j])},{_fmt(rownorm[m, j])}\n")


def bell_scan_csv(path, rows: list[tuple[int, float, np.ndarray]]) -> None:
    """Rows of ``d, S`` plus per-k term columns (padded to the widest scan)."""
    width = max(len(terms) for _, _, terms in rows)
    header = "d,s" + "".join(f",term_{k}" for k in range(width))
    with atomic_write(path) as f:
        f.write(header + "\n")
        for d, s, terms in rows:
            cells = [str(d), _fmt(s)]
            cells += [_fmt(t) for t in terms]
            cells += [""] * (width - len(terms))
            f.write(",".join(cells) + "\n")


def bell_comparison_csv(path, theory: list[tuple[int, float]], measured: dict[int, tuple[float, float]]) -> None:
    """Computed bound per dimension merged with bundled measured values."""
    with atomic_write(path) as f:
        f.write("d,s_theory,s_measured,sigma_measured\n")
        for d, s in theory:
            if d in measured:
                value, sigma = measured[d]
                f.write(f"{d},{_fmt(s)},{_fmt(value)},{_fmt(sigma)}\n")
            else:
                f.write(f"{d},{_fmt(s)},,\n")


def surface_csv(path, eps0: np.ndarray, eps1: np.ndarray, s: np.ndarray, v: np.ndarray) -> None:
    """Simplex samples as rows ``eps0, eps1, s, v`` (outside points skipped)."""
    with atomic_write(path) as f:
        f.write("eps0,eps1,s,v\n")
        for i, e0 in enumerate(eps0):
            for j, e1 in enumerate(eps1):
                if np.isnan(s[i, j]):
                    continue
                f.write(f"{_fmt(e0)},{_fmt(e1)},{_fmt(s[i, j])},{_fmt(v[i, j])}\n")


def polyline_csv(path, polylines: list[np.ndarray]) -> None:
    """Ordered boundary vertices as rows ``polyline, eps0, eps1``."""
    with atomic_write(path) as f:
        f.write("polyline,eps0,eps1\n")
        for idx, line in enumerate(polylines):
            for e0, e1 in line:
                f.write(f"{idx},{_fmt(e0)},{_fmt(e1)}\n")


def resamples_csv(path, values: np.ndarray) -> None:
    with atomic_write(path) as f:
        f.write("resample_index,value\n")
        for i, v in enumerate(values):
            f.write(f"{i},{_fmt(v)}\n")
