"""Phase-matching solvers for collinear and noncollinear three-wave mixing.

Lab frame: the pump propagates along +z inside the crystal and the optic
axis lies in the x-z plane, tilted by ``theta_cut`` from z, so the
optic-axis meridian is the phi = 0 plane.  A wave direction is (theta,
phi): polar angle from the pump axis and azimuth from +x.  Wave-vector
magnitudes are rad/um throughout.

The pump is always extraordinary (negative uniaxial crystal); the daughter
polarizations follow the matching type.  Solvers drive the scalar
longitudinal mismatch to zero by bracketing plus bisection, with the
transverse components nulled by construction.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .crystal import UniaxialCrystal, index_extraordinary, index_ordinary
from .threewave import sinc

TWO_PI = 2.0 * math.pi

# |n_p/lambda_p - n_s/lambda_s - n_i/lambda_i| bound for the collinear
# solver (1/um, no 2*pi), and the |dk_z| bound (rad/um) for the
# noncollinear one.
COLLINEAR_FTOL = 1e-12
NONCOLLINEAR_DKZ_TOL = 1e-10

_BRACKET_SCAN_POINTS = 181
_WEIGHT_FLOOR = 1e-6


class NoSolutionError(RuntimeError):
    """The scalar mismatch has no sign change on the searched bracket."""

    def __init__(self, message: str, theta_lo: float, theta_hi: float,
                 f_lo: float, f_hi: float):
        super().__init__(
            f"{message}: f({math.degrees(theta_lo):.3f} deg) = {f_lo:.6e}, "
            f"f({math.degrees(theta_hi):.3f} deg) = {f_hi:.6e}"
        )
        self.theta_lo = theta_lo
        self.theta_hi = theta_hi
        self.f_lo = f_lo
        self.f_hi = f_hi


class TotalInternalReflectionError(ValueError):
    """Internal angle too steep for the wave to leave the exit face."""


class PhaseMatchType(enum.Enum):
    """Polarization assignment pump -> signal + idler."""

    TYPE_I = ("e", "o", "o")
    TYPE_II_EO = ("e", "e", "o")
    TYPE_II_OE = ("e", "o", "e")

    def __init__(self, pump_pol: str, signal_pol: str, idler_pol: str):
        self.pump_pol = pump_pol
        self.signal_pol = signal_pol
        self.idler_pol = idler_pol

    @classmethod
    def from_label(cls, label: str) -> "PhaseMatchType":
        key = label.strip().upper().replace("_", "-")
        table = {
            "I": cls.TYPE_I, "1": cls.TYPE_I, "TYPE-I": cls.TYPE_I,
            "II-EO": cls.TYPE_II_EO, "2-EO": cls.TYPE_II_EO, "TYPE-II-EO": cls.TYPE_II_EO,
            "II-OE": cls.TYPE_II_OE, "2-OE": cls.TYPE_II_OE, "TYPE-II-OE": cls.TYPE_II_OE,
        }
        if key not in table:
            raise ValueError(
                f"unknown phase-match type {label!r}: use I, II-EO or II-OE"
            )
        return table[key]

    @property
    def label(self) -> str:
        return {"TYPE_I": "I", "TYPE_II_EO": "II-EO", "TYPE_II_OE": "II-OE"}[self.name]


@dataclass(frozen=True)
class Geometry:
    """Crystal cut and length: internal pump direction is z, the optic axis
    sits ``theta_cut`` away from it in the x-z plane."""

    theta_cut: float  # rad, in (0, pi/2)
    length_m: float

    def __post_init__(self):
        if not (0.0 < self.theta_cut < math.pi / 2):
            raise ValueError("theta_cut must lie in (0, pi/2)")
        if self.length_m < 0:
            raise ValueError("crystal length must be non-negative")


@dataclass(frozen=True)
class WaveConfig:
    """One propagating wave: vacuum wavelength, polarization and direction."""

    wavelength_um: float
    polarization: str  # 'o' or 'e'
    theta: float = 0.0
    phi: float = 0.0

    def __post_init__(self):
        if self.polarization not in ("o", "e"):
            raise ValueError("polarization must be 'o' or 'e'")
        if not (0.0 <= self.theta < math.pi / 2):
            raise ValueError("polar angle must lie in [0, pi/2)")
        if not (0.0 <= self.phi < TWO_PI):
            raise ValueError("azimuth must lie in [0, 2*pi)")


@dataclass(frozen=True)
class KVector:
    magnitude: float        # rad/um
    direction: np.ndarray   # unit vector, lab frame

    def vector(self) -> np.ndarray:
        return self.magnitude * self.direction


@dataclass(frozen=True)
class MatchSolution:
    """A solved phase-matching geometry.

    ``residual`` is the re-evaluated |dk| (rad/um) of the solution and is
    bounded by ``tolerance``; the idler azimuth is phi_s + pi.
    """

    match_type: PhaseMatchType
    lambda_p_um: float
    lambda_s_um: float
    lambda_i_um: float
    theta_cut: float
    theta_s: float
    theta_i: float
    phi_s: float
    theta_s_ext: float
    theta_i_ext: float
    residual: float
    tolerance: float

    @property
    def phi_i(self) -> float:
        return (self.phi_s + math.pi) % TWO_PI


def angle_to_optic_axis(direction: tuple[float, float], geometry: Geometry) -> float:
    """Angle between a wave direction (theta, phi) and the optic axis:
    cos(theta_oa) = cos(theta) cos(theta_cut) + sin(theta) cos(phi) sin(theta_cut).
    """
    theta, phi = direction
    c = (math.cos(theta) * math.cos(geometry.theta_cut)
         + math.sin(theta) * math.cos(phi) * math.sin(geometry.theta_cut))
    return math.acos(min(1.0, max(-1.0, c)))


def direction_vector(theta: float, phi: float) -> np.ndarray:
    sin_t = math.sin(theta)
    return np.array([sin_t * math.cos(phi), sin_t * math.sin(phi), math.cos(theta)])


def wave_vector(crystal: UniaxialCrystal, wave: WaveConfig, geometry: Geometry) -> KVector:
    """k of a wave in the crystal: ordinary waves use n_o, extraordinary
    waves the ellipsoid index at their angle to the optic axis."""
    if wave.polarization == "o":
        n = index_ordinary(crystal, wave.wavelength_um)
    else:
        theta_oa = angle_to_optic_axis((wave.theta, wave.phi), geometry)
        n = index_extraordinary(crystal, wave.wavelength_um, theta_oa)
    return KVector(TWO_PI * n / wave.wavelength_um, direction_vector(wave.theta, wave.phi))


def mismatch(pump: KVector, signal: KVector, idler: KVector) -> np.ndarray:
    """Vector mismatch dk = k_p - k_s - k_i (rad/um), no tolerance applied."""
    return pump.vector() - signal.vector() - idler.vector()


def idler_wavelength(lambda_p_um: float, lambda_s_um: float) -> float:
    """Idler wavelength from energy conservation 1/lp = 1/ls + 1/li."""
    if lambda_s_um <= lambda_p_um:
        raise ValueError("signal wavelength must exceed the pump wavelength")
    return 1.0 / (1.0 / lambda_p_um - 1.0 / lambda_s_um)


def snell_external(theta_internal: float, n: float) -> float:
    """External angle at a flat exit face normal to the pump axis:
    sin(theta_ext) = n sin(theta_int)."""
    s = n * math.sin(theta_internal)
    if s > 1.0:
        raise TotalInternalReflectionError(
            f"n sin(theta) = {s:.6f} > 1: the wave cannot leave the crystal"
        )
    return math.asin(s)


def _index_at(crystal: UniaxialCrystal, lam_um: float, pol: str,
              theta: float, phi: float, theta_cut: float) -> float:
    if pol == "o":
        return index_ordinary(crystal, lam_um)
    c = (math.cos(theta) * math.cos(theta_cut)
         + math.sin(theta) * math.cos(phi) * math.sin(theta_cut))
    theta_oa = math.acos(min(1.0, max(-1.0, c)))
    return index_extraordinary(crystal, lam_um, theta_oa)


def _k_at(crystal: UniaxialCrystal, lam_um: float, pol: str,
          theta: float, phi: float, theta_cut: float) -> float:
    return TWO_PI * _index_at(crystal, lam_um, pol, theta, phi, theta_cut) / lam_um


def _bisect(f: Callable[[float], float], lo: float, hi: float,
            f_lo: float, f_hi: float, xtol: float = 1e-15) -> float:
    if f_lo == 0.0:
        return lo
    if f_hi == 0.0:
        return hi
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        f_mid = f(mid)
        if f_mid == 0.0:
            return mid
        if f_lo * f_mid < 0.0:
            hi, f_hi = mid, f_mid
        else:
            lo, f_lo = mid, f_mid
        if hi - lo <= xtol:
            break
    return 0.5 * (lo + hi)


def _bracket_and_bisect(f: Callable[[float], float], lo: float, hi: float,
                        what: str) -> float:
    """Scan [lo, hi] for the first sign change of f, then bisect it."""
    thetas = [lo + (hi - lo) * k / (_BRACKET_SCAN_POINTS - 1)
              for k in range(_BRACKET_SCAN_POINTS)]
    values = [f(t) for t in thetas]
    for k in range(_BRACKET_SCAN_POINTS - 1):
        if values[k] == 0.0:
            return thetas[k]
        if values[k] * values[k + 1] < 0.0:
            return _bisect(f, thetas[k], thetas[k + 1], values[k], values[k + 1])
    if values[-1] == 0.0:
        return thetas[-1]
    raise NoSolutionError(what, lo, hi, values[0], values[-1])


def solve_collinear(crystal: UniaxialCrystal, match_type: PhaseMatchType,
                    lambda_p_um: float, lambda_s_um: float) -> MatchSolution:
    """Cut angle for collinear matching at the given pump/signal pair.

    Solves f(theta) = n_p(theta)/lp - n_s/ls - n_i/li = 0 over (0, 90) deg
    to |f| < 1e-12 1/um.  The idler wavelength follows from energy
    conservation and must sit inside the transparency window.
    """
    lambda_i_um = idler_wavelength(lambda_p_um, lambda_s_um)

    def f(theta: float) -> float:
        n_p = _index_at(crystal, lambda_p_um, "e", 0.0, 0.0, theta)
        n_s = _index_at(crystal, lambda_s_um, match_type.signal_pol, 0.0, 0.0, theta)
        n_i = _index_at(crystal, lambda_i_um, match_type.idler_pol, 0.0, 0.0, theta)
        return n_p / lambda_p_um - n_s / lambda_s_um - n_i / lambda_i_um

    theta_cut = _bracket_and_bisect(
        f, 0.0, math.pi / 2,
        f"no collinear {match_type.label} solution for pump {lambda_p_um} um, "
        f"signal {lambda_s_um} um",
    )
    residual = abs(f(theta_cut))
    if residual > COLLINEAR_FTOL:
        raise NoSolutionError(
            f"collinear bisection stalled at |f| = {residual:.3e} 1/um",
            theta_cut, theta_cut, residual, residual,
        )
    return MatchSolution(
        match_type=match_type,
        lambda_p_um=lambda_p_um,
        lambda_s_um=lambda_s_um,
        lambda_i_um=lambda_i_um,
        theta_cut=theta_cut,
        theta_s=0.0,
        theta_i=0.0,
        phi_s=0.0,
        theta_s_ext=0.0,
        theta_i_ext=0.0,
        residual=TWO_PI * residual,
        tolerance=TWO_PI * COLLINEAR_FTOL,
    )


_MAX_SIGNAL_POLAR = math.radians(10.0)
_IDLER_POLAR_CAP = 0.6  # rad, safe bracket for the transverse balance


def _idler_polar(crystal: UniaxialCrystal, match_type: PhaseMatchType,
                 lambda_i_um: float, transverse_k: float,
                 phi_i: float, theta_cut: float) -> tuple[float, float]:
    """Idler polar angle nulling the transverse mismatch:
    k_i(theta_i) sin(theta_i) = transverse_k.  Returns (theta_i, k_i)."""
    if match_type.idler_pol == "o":
        k_i = TWO_PI * index_ordinary(crystal, lambda_i_um) / lambda_i_um
        ratio = transverse_k / k_i
        if ratio > 1.0:
            raise NoSolutionError("transverse balance impossible for the idler",
                                  0.0, math.pi / 2, -transverse_k, k_i - transverse_k)
        return math.asin(ratio), k_i

    def h(theta_i: float) -> float:
        k = _k_at(crystal, lambda_i_um, "e", theta_i, phi_i, theta_cut)
        return k * math.sin(theta_i) - transverse_k

    h_lo = h(0.0)
    h_hi = h(_IDLER_POLAR_CAP)
    if h_lo * h_hi > 0.0:
        raise NoSolutionError("transverse balance impossible for the idler",
                              0.0, _IDLER_POLAR_CAP, h_lo, h_hi)
    theta_i = _bisect(h, 0.0, _IDLER_POLAR_CAP, h_lo, h_hi)
    return theta_i, _k_at(crystal, lambda_i_um, "e", theta_i, phi_i, theta_cut)


def solve_noncollinear(crystal: UniaxialCrystal, match_type: PhaseMatchType,
                       lambda_p_um: float, lambda_s_um: float, lambda_i_um: float,
                       theta_s: float, phi_s: float = 0.0) -> MatchSolution:
    """Cut angle and idler direction for a signal emitted at (theta_s, phi_s).

    The idler azimuth is phi_s + pi and its polar angle nulls the
    transverse mismatch, so only the longitudinal component dk_z is left
    for the outer bisection over theta_cut (driven below 1e-10 rad/um).
    theta_s = 0 reduces to the collinear problem and is delegated.
    """
    inv_defect = abs(1.0 / lambda_p_um - 1.0 / lambda_s_um - 1.0 / lambda_i_um)
    if inv_defect > 1e-12 / lambda_p_um:
        raise ValueError(
            "wavelengths violate energy conservation: "
            f"1/lp - 1/ls - 1/li = {inv_defect:.3e} 1/um"
        )
    if theta_s == 0.0:
        return solve_collinear(crystal, match_type, lambda_p_um, lambda_s_um)
    if not (0.0 < theta_s < _MAX_SIGNAL_POLAR):
        raise ValueError("internal signal polar angle must lie in [0, 10) deg")

    phi_i = (phi_s + math.pi) % TWO_PI

    def parts(theta_cut: float) -> tuple[float, float, float, float]:
        k_s = _k_at(crystal, lambda_s_um, match_type.signal_pol, theta_s, phi_s, theta_cut)
        theta_i, k_i = _idler_polar(crystal, match_type, lambda_i_um,
                                    k_s * math.sin(theta_s), phi_i, theta_cut)
        return k_s, k_i, theta_i, _k_at(crystal, lambda_p_um, "e", 0.0, 0.0, theta_cut)

    def g(theta_cut: float) -> float:
        k_s, k_i, theta_i, k_p = parts(theta_cut)
        return k_p - k_s * math.cos(theta_s) - k_i * math.cos(theta_i)

    eps = 1e-9
    theta_cut = _bracket_and_bisect(
        g, eps, math.pi / 2 - eps,
        f"no noncollinear {match_type.label} solution for pump {lambda_p_um} um, "
        f"signal {lambda_s_um} um at {math.degrees(theta_s):.3f} deg",
    )
    k_s, k_i, theta_i, k_p = parts(theta_cut)
    dk_z = k_p - k_s * math.cos(theta_s) - k_i * math.cos(theta_i)
    if abs(dk_z) > NONCOLLINEAR_DKZ_TOL:
        raise NoSolutionError(
            f"noncollinear bisection stalled at |dk_z| = {abs(dk_z):.3e} rad/um",
            theta_cut, theta_cut, dk_z, dk_z,
        )
    dk_t = k_s * math.sin(theta_s) - k_i * math.sin(theta_i)
    n_s = k_s * lambda_s_um / TWO_PI
    n_i = k_i * lambda_i_um / TWO_PI
    return MatchSolution(
        match_type=match_type,
        lambda_p_um=lambda_p_um,
        lambda_s_um=lambda_s_um,
        lambda_i_um=lambda_i_um,
        theta_cut=theta_cut,
        theta_s=theta_s,
        theta_i=theta_i,
        phi_s=phi_s % TWO_PI,
        theta_s_ext=snell_external(theta_s, n_s),
        theta_i_ext=snell_external(theta_i, n_i),
        residual=math.hypot(dk_t, dk_z),
        tolerance=NONCOLLINEAR_DKZ_TOL,
    )


@dataclass(frozen=True)
class RingPoint:
    """One point of an emission ring on the detection plane."""

    lambda_s_um: float
    phi: float          # lab azimuth of this point, rad
    theta_internal: float
    theta_ext: float
    x_mm: float
    y_mm: float
    weight: float       # sinc^2(dk_z L / 2)
    branch: str         # 'e' or 'o'


def azimuth_grid(count: int) -> list[float]:
    """Uniform azimuths offset by half a step, avoiding the mirror plane
    and its normal where ring crossings sit in symmetric geometries."""
    if count < 4:
        raise ValueError("need at least 4 azimuths")
    return [(k + 0.5) * TWO_PI / count for k in range(count)]


def emission_cones(crystal: UniaxialCrystal, geometry: Geometry,
                   match_type: PhaseMatchType, lambda_p_um: float,
                   signal_wavelengths_um: Sequence[float],
                   azimuths: Sequence[float],
                   detector_distance_m: float) -> list[RingPoint]:
    """Ring cross-sections on a detection plane behind the crystal.

    For each (lambda_s, phi) the signal polar angle minimizing |dk_z| with
    the transverse mismatch nulled is found; the signal point and its
    paired idler point (azimuth phi + pi) are emitted with the sinc^2
    weight of the residual mismatch.  Points below the 1e-6 weight floor
    or trapped by total internal reflection are dropped.  Output order is
    deterministic: wavelength outer, azimuth inner, signal before idler.
    """
    if len(signal_wavelengths_um) == 0 or len(azimuths) == 0:
        raise ValueError("wavelength and azimuth grids must be non-empty")
    if detector_distance_m <= 0:
        raise ValueError("detector distance must be positive")
    theta_cut = geometry.theta_cut
    length_um = geometry.length_m * 1e6
    distance_mm = detector_distance_m * 1e3
    points: list[RingPoint] = []
    for lam_s in signal_wavelengths_um:
        lam_i = idler_wavelength(lambda_p_um, lam_s)
        k_p = _k_at(crystal, lambda_p_um, "e", 0.0, 0.0, theta_cut)
        for phi in azimuths:
            phi_i = (phi + math.pi) % TWO_PI

            def dk_z_at(theta_sv: float) -> tuple[float, float, float, float]:
                k_s = _k_at(crystal, lam_s, match_type.signal_pol, theta_sv, phi, theta_cut)
                theta_i, k_i = _idler_polar(crystal, match_type, lam_i,
                                            k_s * math.sin(theta_sv), phi_i, theta_cut)
                return (k_p - k_s * math.cos(theta_sv) - k_i * math.cos(theta_i),
                        theta_i, k_s, k_i)

            f0 = dk_z_at(0.0)[0]
            if f0 >= 0.0:
                theta_sv = 0.0
            else:
                hi = 0.02
                f_hi = dk_z_at(hi)[0]
                while f_hi < 0.0 and hi < 0.5:
                    hi = min(0.5, hi * 1.6)
                    f_hi = dk_z_at(hi)[0]
                if f_hi < 0.0:
                    theta_sv = hi  # best effort at the cap, weight decides
                else:
                    theta_sv = _bisect(lambda t: dk_z_at(t)[0], 0.0, hi, f0, f_hi)
            dk_z, theta_i, k_s, k_i = dk_z_at(theta_sv)
            weight = sinc(dk_z * length_um / 2.0) ** 2
            if weight < _WEIGHT_FLOOR:
                continue
            n_s = k_s * lam_s / TWO_PI
            n_i = k_i * lam_i / TWO_PI
            try:
                theta_s_ext = snell_external(theta_sv, n_s)
                theta_i_ext = snell_external(theta_i, n_i)
            except TotalInternalReflectionError:
                continue
            r_s = distance_mm * math.tan(theta_s_ext)
            r_i = distance_mm * math.tan(theta_i_ext)
            cos_phi, sin_phi = math.cos(phi), math.sin(phi)
            points.append(RingPoint(lam_s, phi, theta_sv, theta_s_ext,
                                    r_s * cos_phi, r_s * sin_phi,
                                    weight, match_type.signal_pol))
            points.append(RingPoint(lam_s, phi_i, theta_i, theta_i_ext,
                                    -r_i * cos_phi, -r_i * sin_phi,
                                    weight, match_type.idler_pol))
    return points


def ring_intersections(points: Sequence[RingPoint]) -> list[tuple[float, float]]:
    """Crossing points of the e-branch and o-branch rings.

    Both rings are treated as radial curves r(phi) about the pump axis;
    crossings are sign changes of their difference, located by linear
    interpolation.  Pass the points of a single signal wavelength.
    Returns (x_mm, y_mm) pairs ordered by azimuth; empty when a branch is
    missing (e.g. type I, where both daughters are ordinary).
    """
    def radial(branch: str) -> tuple[np.ndarray, np.ndarray]:
        pts = sorted((p.phi, math.hypot(p.x_mm, p.y_mm))
                     for p in points if p.branch == branch)
        phis = np.array([p[0] for p in pts])
        radii = np.array([p[1] for p in pts])
        return phis, radii

    phi_e, r_e = radial("e")
    phi_o, r_o = radial("o")
    if len(phi_e) < 2 or len(phi_o) < 2:
        return []
    r_o_on_e = np.interp(phi_e, phi_o, r_o, period=TWO_PI)
    diff = r_e - r_o_on_e
    crossings: list[tuple[float, float]] = []
    n = len(diff)
    for k in range(n):
        k_next = (k + 1) % n
        a, b = diff[k], diff[k_next]
        if a == 0.0:
            crossings.append((float(r_e[k] * math.cos(phi_e[k])),
                              float(r_e[k] * math.sin(phi_e[k]))))
        elif a * b < 0.0:
            frac = a / (a - b)
            gap = (phi_e[k_next] - phi_e[k]) % TWO_PI
            phi_x = phi_e[k] + frac * gap
            r_x = r_e[k] + frac * (r_e[k_next] - r_e[k])
            crossings.append((float(r_x * math.cos(phi_x)),
                              float(r_x * math.sin(phi_x))))
    return crossings
