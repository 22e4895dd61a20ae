"""Command-line front end: figure-style pipelines over the library modules.

Subcommands: render, overlap-matrix, decompose, fringe, cglmp, surface,
hologram, sigma.  Each run validates every numeric parameter before any
computation, writes declared outputs atomically, prints a one-line JSON
summary to stdout and exits 0 (success), 1 (computation error) or 2
(usage / validation error).

Lengths are accepted in meters with optional SI suffixes (``nm``, ``um``,
``mm``, ``cm``, ``m``), e.g. ``--waist 2mm --wavelength 780nm``.  Defaults
may also come from an INI-style config file (one section per subcommand,
keys named like the long flags); explicit flags win.
"""

from __future__ import annotations

import argparse
import configparser
import json
import math
import sys

import numpy as np

from . import fileio
from .bell import (
    MEASURED_BELL_VALUES,
    ResolutionTooLow,
    cglmp_s,
    mes_bound_scan,
    separability_surface,
)
from .holography import (
    AmplitudeOutOfRange,
    GratingUnresolvable,
    OrderOverlap,
    encode,
    field_correlation,
    reconstruct,
)
from .lgmodes import (
    BeamGeometry,
    EmptyState,
    GridTooCoarse,
    ModeIndex,
    SampledField,
    default_extent,
    render_field,
)
from .noise import NoiseConfig, estimate_sigma, resample_quantity
from .overlap import (
    QuadratureNotConverged,
    SmfWeight,
    angular_family,
    orthogonality_matrix,
    radial_family,
)
from .states import (
    ArnsState,
    ConstraintViolated,
    DimensionOutOfRange,
    family_decomposition,
    fringe_scan,
    fringe_visibility,
    joint_probability,
    make_eps_state,
    make_mes,
    modal_decomposition,
)

_VALIDATION_ERRORS = (
    DimensionOutOfRange,
    ConstraintViolated,
    EmptyState,
    GridTooCoarse,
    ResolutionTooLow,
    AmplitudeOutOfRange,
    GratingUnresolvable,
    ValueError,
)
_COMPUTATION_ERRORS = (QuadratureNotConverged, OrderOverlap, ArithmeticError, OSError)

_LENGTH_SUFFIXES = (("nm", 1e-9), ("um", 1e-6), ("mm", 1e-3), ("cm", 1e-2), ("m", 1.0))


class CliError(Exception):
    """Validation failure; the message names the offending flag."""


def parse_length(text: str) -> float:
    """Length in meters from e.g. ``780nm``, ``2mm``, ``0.002``."""
    t = str(text).strip()
    for suffix, factor in _LENGTH_SUFFIXES:
        if t.endswith(suffix):
            head = t[: -len(suffix)].strip()
            if head:
                try:
                    return float(head) * factor
                except ValueError:
                    break
    try:
        return float(t)
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid length {text!r}") from None


def _parse_modes(text: str) -> list[ModeIndex]:
    """Mode list from ``l:p,l:p,...``."""
    modes = []
    for item in text.split(","):
        l_str, _, p_str = item.partition(":")
        try:
            modes.append(ModeIndex(int(l_str), int(p_str)))
        except ValueError as exc:
            raise argparse.ArgumentTypeError(f"invalid mode {item!r}: {exc}") from None
    return modes


# converters used when filling flags from a config file; every entry is a
# known key for its subcommand, anything else in the file is rejected
_FLAG = "flag"
_COMMON_GEOMETRY = {"wavelength": parse_length, "waist": parse_length, "waist-mode": str, "z": parse_length}
_COMMON_STATE = {"state": str, "d": int, "eps0": float, "eps1": float}
_CONFIG_SCHEMA: dict[str, dict[str, object]] = {
    "render": {
        **_COMMON_GEOMETRY,
        **_COMMON_STATE,
        "l": int,
        "p": int,
        "resolution": int,
        "extent": parse_length,
        "out-csv": str,
        "out-pgm": str,
    },
    "overlap-matrix": {
        **_COMMON_GEOMETRY,
        "family": str,
        "size": int,
        "probes": str,
        "targets": str,
        "smf-w": parse_length,
        "convention": str,
        "row-normalized": _FLAG,
        "out": str,
    },
    "decompose": {
        **_COMMON_GEOMETRY,
        **_COMMON_STATE,
        "family": str,
        "size": int,
        "model": str,
        "smf-w": parse_length,
        "out": str,
    },
    "fringe": {
        **_COMMON_STATE,
        "fixed-phase": float,
        "points": int,
        "offset-l": float,
        "offset-p": float,
        "out": str,
    },
    "cglmp": {
        **_COMMON_STATE,
        "offset-l": float,
        "offset-p": float,
        "scan": str,
        "out": str,
        "comparison-out": str,
    },
    "surface": {"resolution": int, "out": str},
    "hologram": {
        **_COMMON_GEOMETRY,
        **_COMMON_STATE,
        "l": int,
        "p": int,
        "resolution": int,
        "extent": parse_length,
        "grating-period": parse_length,
        "pitch": parse_length,
        "bits": int,
        "out": str,
        "verify": _FLAG,
        "recon-csv": str,
    },
    "sigma": {
        **_COMMON_GEOMETRY,
        **_COMMON_STATE,
        "quantity": str,
        "scale": float,
        "resamples": int,
        "seed": int,
        "model": str,
        "smf-w": parse_length,
        "out": str,
    },
}


def _add_geometry_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--wavelength", type=parse_length, default=None,
                        help="vacuum wavelength in meters, SI suffixes allowed (default 780nm)")
    parser.add_argument("--waist", type=parse_length, default=None,
                        help="fundamental beam waist w0 in meters (default 2mm)")
    parser.add_argument("--waist-mode", choices=("standard", "revised"), default=None,
                        help="waist convention: shared w0 or w0/sqrt(N) per mode (default revised)")
    parser.add_argument("--z", type=parse_length, default=None,
                        help="evaluation plane in meters from the waist (default 0)")


def _add_state_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--state", choices=("mes", "eps"), default=None,
                        help="state family: uniform d-term (mes) or three-term eps state")
    parser.add_argument("--d", type=int, default=None, help="state dimension (2..16)")
    parser.add_argument("--eps0", type=float, default=None, help="first eps-state weight (dimensionless)")
    parser.add_argument("--eps1", type=float, default=None, help="second eps-state weight (dimensionless)")


def _geometry(args) -> BeamGeometry:
    wavelength = args.wavelength if args.wavelength is not None else 780e-9
    waist = args.waist if args.waist is not None else 2e-3
    mode = args.waist_mode if args.waist_mode is not None else "revised"
    z = args.z if args.z is not None else 0.0
    if wavelength <= 0:
        raise CliError("--wavelength must be > 0")
    if waist <= 0:
        raise CliError("--waist must be > 0")
    return BeamGeometry(wavelength, waist, z, mode)


def _state(args) -> ArnsState:
    kind = args.state if args.state is not None else "mes"
    if kind == "mes":
        if args.d is None:
            raise CliError("--state mes requires --d")
        if args.d < 2:
            raise CliError("--d must be >= 2")
        if args.d > 16:
            raise CliError("--d must be <= 16")
        return make_mes(args.d)
    if args.eps0 is None or args.eps1 is None:
        raise CliError("--state eps requires --eps0 and --eps1")
    if args.eps0 < 0 or args.eps1 < 0 or args.eps0 + args.eps1 > 1:
        raise CliError("--eps0/--eps1 must be >= 0 with eps0 + eps1 <= 1")
    return make_eps_state(args.eps0, args.eps1)


def _mode_selection(args) -> list[tuple[ModeIndex, complex]]:
    """Either one pure (l, p) mode or a state superposition."""
    if args.l is not None or args.p is not None:
        if args.l is None or args.p is None:
            raise CliError("--l and --p must be given together")
        if args.p < 0:
            raise CliError("--p must be >= 0")
        if args.state is not None:
            raise CliError("give either --l/--p or --state, not both")
        return [(ModeIndex(args.l, args.p), 1.0 + 0.0j)]
    return _state(args).field_coefficients()


def _cmd_render(args) -> dict:
    if args.out_csv is None and args.out_pgm is None:
        raise CliError("render requires --out-csv and/or --out-pgm")
    resolution = args.resolution if args.resolution is not None else 512
    if resolution < 2:
        raise CliError("--resolution must be >= 2")
    geom = _geometry(args)
    coefficients = _mode_selection(args)
    field = render_field(coefficients, geom, resolution, args.extent)
    outputs = []
    if args.out_csv:
        fileio.field_csv(args.out_csv, field)
        outputs.append(args.out_csv)
    if args.out_pgm:
        fileio.field_intensity_pgm(args.out_pgm, field)
        outputs.append(args.out_pgm)
    return {
        "command": "render",
        "resolution": resolution,
        "extent_m": field.extent,
        "power": field.power,
        "outputs": outputs,
    }


def _cmd_overlap_matrix(args) -> dict:
    if args.out is None:
        raise CliError("overlap-matrix requires --out")
    if args.probes is not None or args.targets is not None:
        if args.probes is None or args.targets is None:
            raise CliError("--probes and --targets must be given together")
        probes, targets = _parse_modes(args.probes), _parse_modes(args.targets)
    else:
        family = args.family if args.family is not None else "radial"
        size = args.size if args.size is not None else 11
        if size < 1:
            raise CliError("--size must be >= 1")
        probes = radial_family(size) if family == "radial" else angular_family(size)
        targets = probes
    geom = _geometry(args)
    weight = SmfWeight(args.smf_w) if args.smf_w is not None else None
    convention = args.convention if args.convention is not None else "conjugate"
    matrix = orthogonality_matrix(probes, targets, geom, weight, convention)
    fileio.overlap_csv(args.out, matrix, row_normalized=bool(args.row_normalized))
    rownorm = matrix.row_normalized_mag2()
    off = rownorm - np.eye(*rownorm.shape) if rownorm.shape[0] == rownorm.shape[1] else rownorm
    return {
        "command": "overlap-matrix",
        "rows": len(probes),
        "cols": len(targets),
        "weighted": weight is not None,
        "max_offdiag_rownorm": float(off.max()),
        "outputs": [args.out],
    }


def _cmd_decompose(args) -> dict:
    if args.out is None:
        raise CliError("decompose requires --out")
    model = args.model if args.model is not None else "ideal"
    geom = weight = None
    if model == "physical":
        geom = _geometry(args)
        if args.smf_w is not None:
            weight = SmfWeight(args.smf_w)
    elif model != "ideal":
        raise CliError("--model must be ideal or physical")
    if args.family is not None:
        size = args.size if args.size is not None else 11
        if size < 1:
            raise CliError("--size must be >= 1")
        modes = radial_family(size) if args.family == "radial" else angular_family(size)
        density = family_decomposition(modes, geom, weight)
        subject = f"{args.family} family ({size})"
    else:
        state = _state(args)
        density = modal_decomposition(state, geom, weight)
        subject = f"state d={state.dimension}"
    fileio.decomposition_csv(args.out, density)
    return {
        "command": "decompose",
        "subject": subject,
        "model": model,
        "power_visibility": density.power_visibility,
        "outputs": [args.out],
    }


def _cmd_fringe(args) -> dict:
    state = _state(args)
    points = args.points if args.points is not None else 360
    if points < 2:
        raise CliError("--points must be >= 2")
    fixed = args.fixed_phase if args.fixed_phase is not None else 0.0
    offsets = (
        args.offset_l if args.offset_l is not None else 0.0,
        args.offset_p if args.offset_p is not None else 0.0,
    )
    scan = (2.0 * math.pi * np.arange(points) / points).tolist()
    curve = fringe_scan(state, fixed, scan, offsets)
    outputs = []
    if args.out:
        fileio.fringe_csv(args.out, curve)
        outputs.append(args.out)
    return {
        "command": "fringe",
        "d": state.dimension,
        "fixed_phase_rad": fixed,
        "points": points,
        "visibility": fringe_visibility(state),
        "outputs": outputs,
    }


def _cmd_cglmp(args) -> dict:
    offsets = (
        args.offset_l if args.offset_l is not None else 0.0,
        args.offset_p if args.offset_p is not None else 0.0,
    )
    if args.scan is not None:
        lo_str, _, hi_str = args.scan.partition(":")
        try:
            lo, hi = int(lo_str), int(hi_str)
        except ValueError:
            raise CliError("--scan must look like 2:10") from None
        if lo < 2 or hi < lo or hi > 16:
            raise CliError("--scan range must satisfy 2 <= lo <= hi <= 16")
        rows = []
        for d in range(lo, hi + 1):
            result = cglmp_s(make_mes(d), offsets)
            rows.append((d, result.value, result.terms))
        outputs = []
        if args.out:
            fileio.bell_scan_csv(args.out, rows)
            outputs.append(args.out)
        if args.comparison_out:
            fileio.bell_comparison_csv(
                args.comparison_out, [(d, s) for d, s, _ in rows], MEASURED_BELL_VALUES
            )
            outputs.append(args.comparison_out)
        return {
            "command": "cglmp",
            "scan": [lo, hi],
            "s": {str(d): s for d, s, _ in rows},
            "outputs": outputs,
        }

    state = _state(args)
    result = cglmp_s(state, offsets)
    outputs = []
    if args.out:
        fileio.bell_scan_csv(args.out, [(result.d, result.value, result.terms)])
        outputs.append(args.out)
    return {
        "command": "cglmp",
        "d": result.d,
        "s": result.value,
        "terms": [float(t) for t in result.terms],
        "outputs": outputs,
    }


def _cmd_surface(args) -> dict:
    if args.out is None:
        raise CliError("surface requires --out")
    resolution = args.resolution if args.resolution is not None else 128
    if resolution < 16:
        raise CliError("--resolution must be >= 16")
    grid = separability_surface(resolution)
    stem = args.out[:-4] if args.out.endswith(".csv") else args.out
    boundary_s = f"{stem}_boundary_s.csv"
    boundary_v = f"{stem}_boundary_v.csv"
    fileio.surface_csv(args.out, grid.eps0, grid.eps1, grid.s_values, grid.visibility)
    fileio.polyline_csv(boundary_s, grid.s_boundary)
    fileio.polyline_csv(boundary_v, grid.v_boundary)
    return {
        "command": "surface",
        "resolution": resolution,
        "argmax_s": list(grid.argmax_s),
        "s_max": float(np.nanmax(grid.s_values)),
        "area_s_violation": grid.area_s_violation,
        "area_v_violation": grid.area_v_violation,
        "outputs": [args.out, boundary_s, boundary_v],
    }


def _cmd_hologram(args) -> dict:
    if args.out is None:
        raise CliError("hologram requires --out")
    resolution = args.resolution if args.resolution is not None else 1024
    if resolution < 2:
        raise CliError("--resolution must be >= 2")
    bits = args.bits if args.bits is not None else 8
    if bits not in (8, 16):
        raise CliError("--bits must be 8 or 16")
    geom = _geometry(args)
    coefficients = _mode_selection(args)
    extent = args.extent if args.extent is not None else default_extent(
        [m for m, _ in coefficients], geom
    )
    pitch = args.pitch if args.pitch is not None else 2.0 * extent / resolution
    grating = args.grating_period if args.grating_period is not None else 10.0 * pitch
    if grating < 2.0 * pitch:
        raise CliError("--grating-period must be >= 2 pixels")
    if grating > 2.0 * extent / 4.0:
        raise CliError("--grating-period exceeds a quarter of the field width")

    field = render_field(coefficients, geom, resolution, extent).peak_normalized()
    holo = encode(field, grating, pitch, bits)
    fileio.hologram_pgm(args.out, holo)
    outputs = [args.out]
    summary = {
        "command": "hologram",
        "resolution": resolution,
        "extent_m": extent,
        "grating_period_m": grating,
        "pixel_pitch_m": pitch,
        "bits": bits,
        "outputs": outputs,
    }
    if args.verify or args.recon_csv:
        illumination = SampledField(np.ones((resolution, resolution), dtype=complex), extent)
        recon = reconstruct(holo, illumination)
        summary["correlation"] = field_correlation(field, recon)
        if args.recon_csv:
            fileio.field_csv(args.recon_csv, recon)
            outputs.append(args.recon_csv)
    return summary


def _cmd_sigma(args) -> dict:
    quantity_flag = args.quantity if args.quantity is not None else "s-d"
    quantity = quantity_flag.replace("-", "_")
    if quantity not in ("s_d", "visibility", "power_visibility"):
        raise CliError("--quantity must be s-d, visibility or power-visibility")
    scale = args.scale if args.scale is not None else 1e4
    if scale <= 0:
        raise CliError("--scale must be > 0")
    resamples = args.resamples if args.resamples is not None else 1000
    if resamples < 2:
        raise CliError("--resamples must be >= 2")
    seed = args.seed if args.seed is not None else 0
    if seed < 0:
        raise CliError("--seed must be >= 0")
    state = _state(args)
    geom = weight = None
    if quantity == "power_visibility" and (args.model or "ideal") == "physical":
        geom = _geometry(args)
        if args.smf_w is not None:
            weight = SmfWeight(args.smf_w)
    cfg = NoiseConfig(scale, resamples, seed)
    values = resample_quantity(quantity, state, cfg, geometry=geom, weight=weight)
    mean, sigma = float(values.mean()), float(values.std(ddof=1))
    outputs = []
    if args.out:
        fileio.resamples_csv(args.out, values)
        outputs.append(args.out)
    return {
        "command": "sigma",
        "quantity": quantity,
        "mean": mean,
        "sigma": sigma,
        "n": resamples,
        "seed": seed,
        "outputs": outputs,
    }


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lgbell",
        description="Laguerre-Gaussian non-separable state simulations",
    )
    parser.add_argument("--config", default=None,
                        help="INI config file; one section per subcommand, flags override")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("render", help="sample a mode or state superposition on a grid")
    _add_geometry_flags(p)
    _add_state_flags(p)
    p.add_argument("--l", type=int, default=None, help="angular index of a single mode (dimensionless)")
    p.add_argument("--p", type=int, default=None, help="radial index of a single mode (dimensionless)")
    p.add_argument("--resolution", type=int, default=None, help="samples per axis (default 512)")
    p.add_argument("--extent", type=parse_length, default=None,
                   help="grid half-width in meters (default: 4x the largest mode radius)")
    p.add_argument("--out-csv", default=None, help="field CSV output path (x_m,y_m,re,im)")
    p.add_argument("--out-pgm", default=None, help="intensity PGM output path (peak = 255)")
    p.set_defaults(handler=_cmd_render)

    p = sub.add_parser("overlap-matrix", help="pairwise mode overlaps, optionally fiber-weighted")
    _add_geometry_flags(p)
    p.add_argument("--family", choices=("radial", "angular"), default=None,
                   help="probe family: (0,p) radial or (l,0) angular (default radial)")
    p.add_argument("--size", type=int, default=None, help="family size (default 11)")
    p.add_argument("--probes", default=None, help="explicit probe modes as l:p,l:p,...")
    p.add_argument("--targets", default=None, help="explicit target modes as l:p,l:p,...")
    p.add_argument("--smf-w", type=parse_length, default=None,
                   help="fiber Gaussian mode size W in meters at the modulator plane (omit for unweighted)")
    p.add_argument("--convention", choices=("conjugate", "direct"), default=None,
                   help="probe convention (default conjugate)")
    p.add_argument("--row-normalized", action="store_true", default=None,
                   help="append a row-normalized |overlap|^2 column")
    p.add_argument("--out", default=None, help="overlap CSV output path")
    p.set_defaults(handler=_cmd_overlap_matrix)

    p = sub.add_parser("decompose", help="projective decomposition density and power visibility")
    _add_geometry_flags(p)
    _add_state_flags(p)
    p.add_argument("--family", choices=("radial", "angular"), default=None,
                   help="decompose a pure-mode family instead of a state")
    p.add_argument("--size", type=int, default=None, help="family size (default 11)")
    p.add_argument("--model", choices=("ideal", "physical"), default=None,
                   help="ideal basis bras or physical overlap projections (default ideal)")
    p.add_argument("--smf-w", type=parse_length, default=None,
                   help="fiber Gaussian mode size W in meters (physical model only)")
    p.add_argument("--out", default=None, help="decomposition CSV output path")
    p.set_defaults(handler=_cmd_decompose)

    p = sub.add_parser("fringe", help="interference curve versus the scanned radial phase")
    _add_state_flags(p)
    p.add_argument("--fixed-phase", type=float, default=None,
                   help="fixed angular analyzer phase in radians (default 0)")
    p.add_argument("--points", type=int, default=None, help="scan samples over one period (default 360)")
    p.add_argument("--offset-l", type=float, default=None, help="angular phase offset in radians (default 0)")
    p.add_argument("--offset-p", type=float, default=None, help="radial phase offset in radians (default 0)")
    p.add_argument("--out", default=None, help="fringe CSV output path (theta_rad,intensity)")
    p.set_defaults(handler=_cmd_fringe)

    p = sub.add_parser("cglmp", help="Bell expression of a state, or a dimension scan")
    _add_state_flags(p)
    p.add_argument("--offset-l", type=float, default=None, help="angular phase offset in radians (default 0)")
    p.add_argument("--offset-p", type=float, default=None, help="radial phase offset in radians (default 0)")
    p.add_argument("--scan", default=None, help="scan uniform states over d, e.g. 2:10")
    p.add_argument("--out", default=None, help="CSV output path (d,s,term_k...)")
    p.add_argument("--comparison-out", default=None,
                   help="CSV merging the computed scan with bundled measured values")
    p.set_defaults(handler=_cmd_cglmp)

    p = sub.add_parser("surface", help="Bell value and visibility over the eps-state simplex")
    p.add_argument("--resolution", type=int, default=None, help="grid samples per axis, >= 16 (default 128)")
    p.add_argument("--out", default=None, help="surface CSV output path (eps0,eps1,s,v)")
    p.set_defaults(handler=_cmd_surface)

    p = sub.add_parser("hologram", help="encode a mode or state as a phase-only hologram")
    _add_geometry_flags(p)
    _add_state_flags(p)
    p.add_argument("--l", type=int, default=None, help="angular index of a single mode (dimensionless)")
    p.add_argument("--p", type=int, default=None, help="radial index of a single mode (dimensionless)")
    p.add_argument("--resolution", type=int, default=None, help="samples per axis (default 1024)")
    p.add_argument("--extent", type=parse_length, default=None,
                   help="grid half-width in meters (default: 4x the largest mode radius)")
    p.add_argument("--grating-period", type=parse_length, default=None,
                   help="blazed grating period in meters (default 10 pixels)")
    p.add_argument("--pitch", type=parse_length, default=None,
                   help="pixel pitch in meters (default: grid pitch)")
    p.add_argument("--bits", type=int, default=None, help="phase quantization bit depth, 8 or 16 (default 8)")
    p.add_argument("--out", default=None, help="hologram PGM output path")
    p.add_argument("--verify", action="store_true", default=None,
                   help="reconstruct the first order and report the correlation")
    p.add_argument("--recon-csv", default=None, help="reconstructed field CSV output path")
    p.set_defaults(handler=_cmd_hologram)

    p = sub.add_parser("sigma", help="counting-noise mean and standard deviation of a quantity")
    _add_geometry_flags(p)
    _add_state_flags(p)
    p.add_argument("--quantity", choices=("s-d", "visibility", "power-visibility"), default=None,
                   help="quantity to resample (default s-d)")
    p.add_argument("--scale", type=float, default=None,
                   help="mean counts per unit normalized intensity (default 1e4)")
    p.add_argument("--resamples", type=int, default=None, help="number of resamples (default 1000)")
    p.add_argument("--seed", type=int, default=None, help="master RNG seed (default 0)")
    p.add_argument("--model", choices=("ideal", "physical"), default=None,
                   help="decomposition model for power-visibility (default ideal)")
    p.add_argument("--smf-w", type=parse_length, default=None,
                   help="fiber Gaussian mode size W in meters (physical model only)")
    p.add_argument("--out", default=None, help="per-resample CSV output path")
    p.set_defaults(handler=_cmd_sigma)

    return parser


def _apply_config(args: argparse.Namespace) -> None:
    """Fill flags still unset from the config file section for the subcommand."""
    if not args.config:
        return
    parser = configparser.ConfigParser()
    read = parser.read(args.config)
    if not read:
        raise CliError(f"--config file {args.config!r} not found")
    if args.command not in parser:
        return
    schema = _CONFIG_SCHEMA[args.command]
    for key, raw in parser[args.command].items():
        if key not in schema:
            raise CliError(f"unknown config key {key!r} in section [{args.command}]")
        attr = key.replace("-", "_")
        if getattr(args, attr) is not None:
            continue  # explicit flag wins
        converter = schema[key]
        if converter is _FLAG:
            value = raw.strip().lower() in ("1", "true", "yes", "on")
        else:
            try:
                value = converter(raw)  # type: ignore[operator]
            except (ValueError, argparse.ArgumentTypeError) as exc:
                raise CliError(f"invalid config value {key} = {raw!r}: {exc}") from None
        setattr(args, attr, value)


def run(argv: list[str] | None = None) -> int:
    """Execute one CLI invocation; returns the process exit code."""
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        _apply_config(args)
        summary = args.handler(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except _COMPUTATION_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except _VALIDATION_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    print(json.dumps(summary))
    return 0


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
