"""Deterministic command-line front end.

Every run emits a CSV file plus a ``<name>.manifest.txt`` companion holding
the fully resolved parameter set, derived quantities and warnings.
Identical invocations produce byte-identical outputs: no timestamps, no
absolute paths, full-precision (round-trip exact) floating-point text.

Exit codes: 0 success, 2 invalid input, 3 no phase-matching solution.
Angles are degrees and wavelengths micrometres on the command line;
CSV columns are radians/SI as named.  Flag values override ``--config``
file entries, which override built-in defaults.
"""

from __future__ import annotations

import argparse
import math
import sys
import warnings as _warnings
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Sequence

import numpy as np

from . import __version__, crystal, phasematch, quantum, threewave

EXIT_OK = 0
EXIT_INVALID_INPUT = 2
EXIT_NO_SOLUTION = 3


def _parse_phase(text: str) -> float:
    """Phase in radians; the literals pi, -pi and pi/2 are accepted."""
    t = str(text).strip().lower()
    if t == "pi":
        return math.pi
    if t == "-pi":
        return -math.pi
    if t == "pi/2":
        return math.pi / 2
    return float(t)


def _parse_float_list(text: str) -> list[float]:
    values = [float(part) for part in str(text).split(",") if part.strip()]
    if not values:
        raise ValueError("empty value list")
    return values


def _fmt(value: Any) -> str:
    if isinstance(value, float):
        return repr(float(value))  # plain-float repr even for numpy scalars
    return str(value)


@dataclass
class Param:
    name: str
    convert: Callable[[str], Any]
    default: Any
    help: str


@dataclass
class CommandResult:
    header: list[str]
    rows: list[list[Any]]
    derived: list[tuple[str, Any]] = field(default_factory=list)
    stdout_lines: list[str] = field(default_factory=list)


def _linspace(lo: float, hi: float, points: int) -> list[float]:
    if points < 1:
        raise ValueError("need at least one grid point")
    if points == 1:
        return [lo]
    return [lo + (hi - lo) * k / (points - 1) for k in range(points)]


def _symmetric_grid(half_width: float, points: int) -> list[float]:
    """Grid on [-half_width, half_width]; the midpoint of an odd grid is
    exactly zero."""
    if points < 2:
        raise ValueError("need at least two grid points")
    return [half_width * (2 * k - (points - 1)) / (points - 1) for k in range(points)]


# ---------------------------------------------------------------------------
# command implementations


def _run_indices(p: dict, xtal: crystal.UniaxialCrystal) -> CommandResult:
    if p["points"] < 2:
        raise ValueError("points must be at least 2")
    if not p["lambda_min_um"] < p["lambda_max_um"]:
        raise ValueError("lambda-min-um must be below lambda-max-um")
    derived: list[tuple[str, Any]] = []
    theta_deg = p["theta_deg"]
    if theta_deg is None:
        solution = phasematch.solve_collinear(
            xtal, phasematch.PhaseMatchType.TYPE_I, p["pump_um"], 2.0 * p["pump_um"])
        theta_deg = math.degrees(solution.theta_cut)
        derived.append(("theta_source", "type-I collinear solve at the pump"))
    theta = math.radians(theta_deg)
    derived.append(("theta_deg_used", theta_deg))
    rows = []
    for lam in _linspace(p["lambda_min_um"], p["lambda_max_um"], p["points"]):
        rows.append([lam,
                     crystal.index_ordinary(xtal, lam),
                     crystal.index_extraordinary_principal(xtal, lam),
                     crystal.index_extraordinary(xtal, lam, theta)])
    derived.append(("crossing_n_e_theta_at_pump",
                    crystal.index_extraordinary(xtal, p["pump_um"], theta)))
    derived.append(("crossing_n_o_at_twice_pump",
                    crystal.index_ordinary(xtal, 2.0 * p["pump_um"])))
    return CommandResult(["lambda_um", "n_o", "n_e_principal", "n_e_theta"], rows, derived)


def _solution_row(sol: phasematch.MatchSolution) -> list[Any]:
    return [sol.match_type.label, sol.lambda_p_um, sol.lambda_s_um, sol.lambda_i_um,
            sol.theta_cut, sol.theta_s, sol.theta_i, sol.phi_s,
            sol.theta_s_ext, sol.theta_i_ext, sol.residual]


_MATCH_HEADER = ["type", "lambda_p_um", "lambda_s_um", "lambda_i_um",
                 "theta_cut_rad", "theta_s_rad", "theta_i_rad", "phi_s_rad",
                 "theta_s_ext_rad", "theta_i_ext_rad", "residual_rad_per_um"]


def _run_match(p: dict, xtal: crystal.UniaxialCrystal) -> CommandResult:
    match_type = phasematch.PhaseMatchType.from_label(p["type"])
    lambda_s = p["signal_um"] if p["signal_um"] is not None else 2.0 * p["pump_um"]
    theta_s = math.radians(p["theta_s_deg"])
    if theta_s == 0.0:
        sol = phasematch.solve_collinear(xtal, match_type, p["pump_um"], lambda_s)
    else:
        lambda_i = phasematch.idler_wavelength(p["pump_um"], lambda_s)
        sol = phasematch.solve_noncollinear(
            xtal, match_type, p["pump_um"], lambda_s, lambda_i,
            theta_s, math.radians(p["phi_s_deg"]))
    derived = [
        ("signal_um_used", lambda_s),
        ("theta_cut_deg", math.degrees(sol.theta_cut)),
        ("theta_s_ext_deg", math.degrees(sol.theta_s_ext)),
        ("theta_i_ext_deg", math.degrees(sol.theta_i_ext)),
        ("lambda_i_um", sol.lambda_i_um),
        ("residual_rad_per_um", sol.residual),
    ]
    stdout_lines = [
        f"{match_type.label} matching: pump {sol.lambda_p_um} um -> "
        f"signal {sol.lambda_s_um} um + idler {sol.lambda_i_um} um",
        f"  cut angle theta_cut = {math.degrees(sol.theta_cut):.6f} deg",
        f"  internal signal/idler polar angles = "
        f"{math.degrees(sol.theta_s):.6f} / {math.degrees(sol.theta_i):.6f} deg",
        f"  external signal/idler angles = "
        f"{math.degrees(sol.theta_s_ext):.6f} / {math.degrees(sol.theta_i_ext):.6f} deg",
        f"  residual |dk| = {sol.residual:.3e} rad/um",
    ]
    return CommandResult(_MATCH_HEADER, [_solution_row(sol)], derived, stdout_lines)


def _run_cones(p: dict, xtal: crystal.UniaxialCrystal) -> CommandResult:
    match_type = phasematch.PhaseMatchType.from_label(p["type"])
    lambda_center = p["signal_um"] if p["signal_um"] is not None else 2.0 * p["pump_um"]
    derived: list[tuple[str, Any]] = [("signal_um_used", lambda_center)]
    theta_cut_deg = p["theta_cut_deg"]
    if theta_cut_deg is None:
        tuning = phasematch.solve_noncollinear(
            xtal, match_type, p["pump_um"], lambda_center,
            phasematch.idler_wavelength(p["pump_um"], lambda_center),
            math.radians(p["tune_theta_s_deg"]), math.radians(p["tune_phi_s_deg"]))
        theta_cut_deg = math.degrees(tuning.theta_cut)
        derived.append(("theta_cut_source",
                        f"noncollinear solve at internal signal angle "
                        f"{p['tune_theta_s_deg']} deg, azimuth {p['tune_phi_s_deg']} deg"))
    derived.append(("theta_cut_deg_used", theta_cut_deg))
    geometry = phasematch.Geometry(math.radians(theta_cut_deg), p["length_mm"] * 1e-3)
    if p["signal_points"] == 1:
        lambda_grid = [lambda_center]
    else:
        half = p["signal_span_um"] / 2.0
        lambda_grid = _linspace(lambda_center - half, lambda_center + half,
                                p["signal_points"])
    azimuths = phasematch.azimuth_grid(p["azimuths"])
    points = phasematch.emission_cones(
        xtal, geometry, match_type, p["pump_um"], lambda_grid, azimuths,
        p["detector_mm"] * 1e-3)
    rows = [[pt.lambda_s_um, pt.phi, pt.theta_ext, pt.x_mm, pt.y_mm, pt.weight, pt.branch]
            for pt in points]
    first = [pt for pt in points if pt.lambda_s_um == lambda_grid[0]]
    crossings = phasematch.ring_intersections(first)
    derived.append(("intersection_count", len(crossings)))
    for k, (x, y) in enumerate(crossings, 1):
        derived.append((f"intersection_{k}_x_mm", x))
        derived.append((f"intersection_{k}_y_mm", y))
    stdout_lines = [
        f"emitted {len(rows)} ring points over {len(lambda_grid)} wavelength(s)",
        f"e/o ring intersections at {lambda_grid[0]} um: {len(crossings)}",
    ]
    return CommandResult(
        ["lambda_s_um", "phi_rad", "theta_ext_rad", "x_mm", "y_mm", "weight", "branch"],
        rows, derived, stdout_lines)


def _run_shg(p: dict, xtal: crystal.UniaxialCrystal) -> CommandResult:
    lambda_1 = p["lambda1_um"]
    lambda_2 = p["lambda2_um"] if p["lambda2_um"] is not None else lambda_1
    lambda_3 = 1.0 / (1.0 / lambda_1 + 1.0 / lambda_2)
    n1 = p["n1"] if p["n1"] is not None else crystal.index_ordinary(xtal, lambda_1)
    n2 = p["n2"] if p["n2"] is not None else crystal.index_ordinary(xtal, lambda_2)
    n3 = p["n3"] if p["n3"] is not None else crystal.index_ordinary(xtal, lambda_3)
    omega_3 = 2.0 * math.pi * threewave.SPEED_OF_LIGHT / (lambda_3 * 1e-6)
    d_eff = p["deff_pm_v"] * 1e-12
    length = p["length_mm"] * 1e-3
    peak = threewave.shg_intensity(p["i1_w_m2"], p["i2_w_m2"], omega_3,
                                   n1, n2, n3, d_eff, length, 0.0)
    rows = []
    for dk_per_mm in _linspace(p["dk_min_per_mm"], p["dk_max_per_mm"], p["points"]):
        dk = dk_per_mm * 1e3
        i3 = threewave.shg_intensity(p["i1_w_m2"], p["i2_w_m2"], omega_3,
                                     n1, n2, n3, d_eff, length, dk)
        rows.append([dk, threewave.sinc(dk * length / 2.0) ** 2, i3])
    derived = [("lambda2_um_used", lambda_2), ("lambda3_um", lambda_3),
               ("n1_used", n1), ("n2_used", n2), ("n3_used", n3),
               ("i3_peak_w_m2", peak)]
    return CommandResult(["delta_k_rad_per_m", "sinc2", "intensity_w_m2"], rows, derived)


def _run_gain(p: dict, xtal: crystal.UniaxialCrystal) -> CommandResult:
    n1 = p["n1"] if p["n1"] is not None else crystal.index_ordinary(xtal, p["lambda_s_um"])
    n2 = p["n2"] if p["n2"] is not None else crystal.index_ordinary(xtal, p["lambda_i_um"])
    omega_1 = 2.0 * math.pi * threewave.SPEED_OF_LIGHT / (p["lambda_s_um"] * 1e-6)
    omega_2 = 2.0 * math.pi * threewave.SPEED_OF_LIGHT / (p["lambda_i_um"] * 1e-6)
    chi_eff = p["chi_eff_pm_v"] * 1e-12
    z_end = p["z_mm"] * 1e-3
    traj = threewave.integrate_coupled(
        complex(p["a1_v_per_m"]), complex(p["a2_v_per_m"]), complex(p["pump_v_per_m"]),
        p["dk_per_m"], chi_eff, z_end, p["steps"], omega_1, omega_2, n1, n2)
    defects = threewave.flux_defect_series(traj, omega_1, omega_2, n1, n2)
    rows = []
    for k in range(len(traj.z)):
        a1, a2 = traj.a1[k], traj.a2[k]
        rows.append([float(traj.z[k]), float(a1.real), float(a1.imag),
                     float(a2.real), float(a2.imag),
                     threewave.intensity(a1, n1), threewave.intensity(a2, n2),
                     float(defects[k])])
    alpha = threewave.gain_rate(chi_eff, abs(p["pump_v_per_m"]), omega_1, omega_2, n1, n2)
    derived = [("n1_used", n1), ("n2_used", n2), ("alpha_per_m", alpha),
               ("alpha_z", alpha * z_end),
               ("max_flux_defect", float(np.max(defects)))]
    return CommandResult(
        ["z_m", "re_a1", "im_a1", "re_a2", "im_a2", "I1", "I2", "flux_defect"],
        rows, derived)


def _pair_rows(r_values: Sequence[float], n_max: int, order: int) -> list[list[Any]]:
    rows = []
    for r in r_values:
        state = quantum.spdc_evolve(r, n_max=n_max, series_order=order)
        probs = quantum.pair_statistics(state)
        rows.append([r, float(probs[0]), float(probs[1]), float(probs[2]),
                     float(probs[3]), quantum.heralded_g2(state)])
    return rows


_PAIR_STATS_HEADER = ["r", "p0", "p1", "p2", "p3", "g2"]


def _run_pairs_stats(p: dict, xtal: crystal.UniaxialCrystal) -> CommandResult:
    if p["n_max"] < 3:
        raise ValueError("n-max must be at least 3 for p0..p3 columns")
    grid = _linspace(p["r_min"], p["r_max"], p["r_points"])
    return CommandResult(_PAIR_STATS_HEADER, _pair_rows(grid, p["n_max"], p["order"]))


def _run_pairs_g2(p: dict, xtal: crystal.UniaxialCrystal) -> CommandResult:
    if p["n_max"] < 3:
        raise ValueError("n-max must be at least 3 for p0..p3 columns")
    return CommandResult(_PAIR_STATS_HEADER,
                         _pair_rows(p["r_list"], p["n_max"], p["order"]))


def _run_pairs_hom(p: dict, xtal: crystal.UniaxialCrystal) -> CommandResult:
    taus_s = [t * 1e-12 for t in _symmetric_grid(p["tau_max_ps"], p["points"])]
    curve = quantum.hom_dip_curve(np.array(taus_s), p["sigma_t_ps"] * 1e-12,
                                  p["visibility"])
    rows = [[taus_s[k], float(curve[k])] for k in range(len(taus_s))]
    return CommandResult(["tau_s", "p_coincidence"], rows)


def _run_pairs_chsh(p: dict, xtal: crystal.UniaxialCrystal) -> CommandResult:
    state = quantum.bell_state(p["phi"])
    a = math.radians(p["a_deg"])
    a_prime = math.radians(p["a_prime_deg"])
    b = math.radians(p["b_deg"])
    b_prime = math.radians(p["b_prime_deg"])
    s = quantum.chsh_s(state, a, a_prime, b, b_prime)
    row = [a, a_prime, b, b_prime, p["phi"], s]
    return CommandResult(
        ["a_rad", "a_prime_rad", "b_rad", "b_prime_rad", "phi_rad", "S"],
        [row], [("S", s)], [f"S = {s!r}"])


def _run_pairs_fringe(p: dict, xtal: crystal.UniaxialCrystal) -> CommandResult:
    if p["points"] < 3:
        raise ValueError("points must be at least 3")
    state = quantum.bell_state(p["phi"])
    a_fixed = math.radians(p["a_fixed_deg"])
    b_grid = [math.pi * k / (p["points"] - 1) for k in range(p["points"])]
    rows = [[b, quantum.coincidence_probability(state, a_fixed, b)] for b in b_grid]
    vis = quantum.visibility(state, a_fixed, np.array(b_grid))
    return CommandResult(["b_rad", "p_coincidence"], rows, [("visibility", vis)],
                         [f"visibility = {vis!r}"])


# ---------------------------------------------------------------------------
# parameter tables

_COMMON = [Param("crystal", str, "BBO", "built-in name 'BBO' or coefficient-file path")]

_TABLES: dict[str, list[Param]] = {
    "indices": _COMMON + [
        Param("lambda_min_um", float, 0.3, "grid start, um"),
        Param("lambda_max_um", float, 1.2, "grid end, um"),
        Param("points", int, 181, "grid size"),
        Param("pump_um", float, 0.4, "pump wavelength for the crossing, um"),
        Param("theta_deg", float, None,
              "angle to the optic axis for the n_e(theta) column; "
              "defaults to the type-I collinear cut for the pump"),
    ],
    "match": _COMMON + [
        Param("type", str, "I", "phase-match type: I, II-EO or II-OE"),
        Param("pump_um", float, 0.4, "pump wavelength, um"),
        Param("signal_um", float, None, "signal wavelength, um (default degenerate)"),
        Param("theta_s_deg", float, 0.0,
              "internal signal polar angle, deg (0 = collinear)"),
        Param("phi_s_deg", float, 0.0, "signal azimuth, deg"),
    ],
    "cones": _COMMON + [
        Param("type", str, "II-EO", "phase-match type: I, II-EO or II-OE"),
        Param("pump_um", float, 0.405, "pump wavelength, um"),
        Param("signal_um", float, None, "center signal wavelength, um (default degenerate)"),
        Param("signal_span_um", float, 0.0, "width of the signal wavelength grid, um"),
        Param("signal_points", int, 1, "signal wavelength grid size"),
        Param("azimuths", int, 720, "azimuth grid size"),
        Param("theta_cut_deg", float, None,
              "cut angle, deg; defaults to the noncollinear solve at the tuning angles"),
        Param("tune_theta_s_deg", float, 1.8, "tuning internal signal angle, deg"),
        Param("tune_phi_s_deg", float, 90.0, "tuning signal azimuth, deg"),
        Param("length_mm", float, 1.0, "crystal length, mm"),
        Param("detector_mm", float, 100.0, "detection-plane distance, mm"),
    ],
    "shg": _COMMON + [
        Param("i1_w_m2", float, 1e12, "intensity of wave 1, W/m^2"),
        Param("i2_w_m2", float, 1e12, "intensity of wave 2, W/m^2"),
        Param("lambda1_um", float, 0.8, "wavelength of wave 1, um"),
        Param("lambda2_um", float, None, "wavelength of wave 2, um (default = wave 1)"),
        Param("n1", float, None, "index of wave 1 (default n_o at its wavelength)"),
        Param("n2", float, None, "index of wave 2 (default n_o at its wavelength)"),
        Param("n3", float, None, "index of the sum wave (default n_o)"),
        Param("deff_pm_v", float, 2.0, "effective nonlinear coefficient, pm/V"),
        Param("length_mm", float, 1.0, "crystal length, mm"),
        Param("dk_min_per_mm", float, -20.0, "sweep start, rad/mm"),
        Param("dk_max_per_mm", float, 20.0, "sweep end, rad/mm"),
        Param("points", int, 201, "sweep size"),
    ],
    "gain": _COMMON + [
        Param("a1_v_per_m", float, 1e3, "initial signal amplitude, V/m"),
        Param("a2_v_per_m", float, 0.0, "initial idler amplitude, V/m"),
        Param("pump_v_per_m", float, 5e8, "pump amplitude, V/m (held constant)"),
        Param("lambda_s_um", float, 0.81, "signal wavelength, um"),
        Param("lambda_i_um", float, 0.81, "idler wavelength, um"),
        Param("n1", float, None, "signal index (default n_o at its wavelength)"),
        Param("n2", float, None, "idler index (default n_o at its wavelength)"),
        Param("chi_eff_pm_v", float, 4.4, "effective susceptibility, pm/V"),
        Param("dk_per_m", float, 0.0, "wave-vector mismatch, rad/m"),
        Param("z_mm", float, 0.2, "propagation length, mm"),
        Param("steps", int, 1000, "RK4 steps"),
    ],
    "pairs stats": _COMMON + [
        Param("r_min", float, 0.05, "interaction parameter sweep start"),
        Param("r_max", float, 0.5, "interaction parameter sweep end"),
        Param("r_points", int, 10, "sweep size"),
        Param("n_max", int, 8, "Fock cutoff"),
        Param("order", int, 12, "operator series order"),
    ],
    "pairs g2": _COMMON + [
        Param("r_list", _parse_float_list, [0.05, 0.1, 0.2, 0.3, 0.5],
              "comma-separated interaction parameters"),
        Param("n_max", int, 8, "Fock cutoff"),
        Param("order", int, 12, "operator series order"),
    ],
    "pairs hom": _COMMON + [
        Param("sigma_t_ps", float, 1.0, "coherence time, ps"),
        Param("visibility", float, 1.0, "dip visibility"),
        Param("tau_max_ps", float, 3.0, "half-width of the delay scan, ps"),
        Param("points", int, 121, "scan size"),
    ],
    "pairs chsh": _COMMON + [
        Param("phi", _parse_phase, math.pi,
              "relative phase of the entangled state, rad ('pi' accepted)"),
        Param("a_deg", float, 0.0, "analyzer angle a, deg"),
        Param("a_prime_deg", float, 45.0, "analyzer angle a', deg"),
        Param("b_deg", float, 22.5, "analyzer angle b, deg"),
        Param("b_prime_deg", float, 67.5, "analyzer angle b', deg"),
    ],
    "pairs fringe": _COMMON + [
        Param("phi", _parse_phase, math.pi,
              "relative phase of the entangled state, rad ('pi' accepted)"),
        Param("a_fixed_deg", float, 45.0, "fixed signal analyzer angle, deg"),
        Param("points", int, 73, "idler analyzer grid over [0, 180] deg"),
    ],
}

_RUNNERS: dict[str, Callable[[dict, crystal.UniaxialCrystal], CommandResult]] = {
    "indices": _run_indices,
    "match": _run_match,
    "cones": _run_cones,
    "shg": _run_shg,
    "gain": _run_gain,
    "pairs stats": _run_pairs_stats,
    "pairs g2": _run_pairs_g2,
    "pairs hom": _run_pairs_hom,
    "pairs chsh": _run_pairs_chsh,
    "pairs fringe": _run_pairs_fringe,
}

_DEFAULT_OUT = {
    "indices": "indices.csv",
    "match": "match.csv",
    "cones": "cones.csv",
    "shg": "shg.csv",
    "gain": "gain.csv",
    "pairs stats": "pairs_stats.csv",
    "pairs g2": "pairs_g2.csv",
    "pairs hom": "pairs_hom.csv",
    "pairs chsh": "pairs_chsh.csv",
    "pairs fringe": "pairs_fringe.csv",
}


def _add_params(parser: argparse.ArgumentParser, table: list[Param]) -> None:
    parser.add_argument("--config", default=None,
                        help="key = value file with parameter defaults")
    parser.add_argument("--out", default=None, help="output CSV path")
    for param in table:
        flag = "--" + param.name.replace("_", "-")
        shown = param.default if param.default is not None else "derived"
        parser.add_argument(flag, dest=param.name, type=param.convert, default=None,
                            help=f"{param.help} (default: {shown})")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spdclab",
        description="Phase matching, three-wave mixing and photon-pair "
                    "statistics with deterministic CSV output.")
    parser.add_argument("--version", action="version",
                        version=f"spdclab {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for command in ("indices", "match", "cones", "shg", "gain"):
        _add_params(sub.add_parser(command), _TABLES[command])
    pairs = sub.add_parser("pairs", help="photon-pair statistics and correlations")
    pairs_sub = pairs.add_subparsers(dest="mode", required=True)
    for mode in ("stats", "g2", "hom", "chsh", "fringe"):
        _add_params(pairs_sub.add_parser(mode), _TABLES[f"pairs {mode}"])
    return parser


def _resolve_params(args: argparse.Namespace, table: list[Param],
                    config: dict[str, str]) -> dict[str, Any]:
    resolved: dict[str, Any] = {}
    for param in table:
        cli_value = getattr(args, param.name)
        if cli_value is not None:
            resolved[param.name] = cli_value
        elif param.name in config:
            resolved[param.name] = param.convert(config[param.name])
        else:
            resolved[param.name] = param.default
    return resolved


def _write_outputs(out_path: str, command: str, params: dict[str, Any],
                   result: CommandResult, warning_messages: list[str]) -> None:
    out = Path(out_path)
    manifest = out.with_suffix(".manifest.txt")
    csv_lines = [f"# manifest: {manifest.name}", ",".join(result.header)]
    for row in result.rows:
        csv_lines.append(",".join(_fmt(v) for v in row))
    manifest_lines = [f"# run manifest for {out.name}",
                      f"tool = spdclab {__version__}",
                      f"command = {command}"]
    for name in sorted(params):
        value = params[name]
        if isinstance(value, list):
            value = ",".join(_fmt(v) for v in value)
        manifest_lines.append(f"{name} = {_fmt(value)}")
    for name, value in result.derived:
        manifest_lines.append(f"derived_{name} = {_fmt(value)}")
    for message in warning_messages:
        manifest_lines.append(f"warning = {message}")
    with open(manifest, "w", encoding="utf-8", newline="") as fh:
        fh.write("\n".join(manifest_lines) + "\n")
    with open(out, "w", encoding="utf-8", newline="") as fh:
        fh.write("\n".join(csv_lines) + "\n")


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    command = args.command if args.command != "pairs" else f"pairs {args.mode}"
    table = _TABLES[command]
    try:
        config = crystal.read_key_value_file(args.config) if args.config else {}
        params = _resolve_params(args, table, config)
        xtal = crystal.get_crystal(params["crystal"])
        with _warnings.catch_warnings(record=True) as caught:
            _warnings.simplefilter("always")
            result = _RUNNERS[command](params, xtal)
        warning_messages = [str(w.message) for w in caught]
    except phasematch.NoSolutionError as exc:
        print(f"no solution: {exc}", file=sys.stderr)
        return EXIT_NO_SOLUTION
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID_INPUT
    if args.out is not None:
        out_path = args.out
    else:
        out_path = config.get("out", _DEFAULT_OUT[command])
    _write_outputs(out_path, command, params, result, warning_messages)
    for line in result.stdout_lines:
        print(line)
    for message in warning_messages:
        print(f"warning: {message}", file=sys.stderr)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
