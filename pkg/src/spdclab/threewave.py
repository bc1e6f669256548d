"""Classical three-wave mixing under an undepleted pump.

Covers the sinc^2 conversion law for sum-frequency/second-harmonic
generation, the hyperbolic analytic solutions of parametric
amplification, and a fixed-step RK4 integrator for the coupled amplitude
equations

    dA1/dz = i (w1 / n1 c) chi_eff A3 A2* exp(i dk z)
    dA2/dz = i (w2 / n2 c) chi_eff A3 A1* exp(i dk z)

with the pump amplitude A3 held constant.  SI units: amplitudes V/m,
lengths m, angular frequencies rad/s, dk rad/m.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

SPEED_OF_LIGHT = 299_792_458.0      # m/s
VACUUM_PERMITTIVITY = 8.8541878128e-12  # F/m


class PumpZeroError(ValueError):
    """Gain requested with a vanishing pump amplitude."""


def sinc(x: float) -> float:
    """sin(x)/x, with a series branch near zero so sinc(0) = 1 exactly."""
    if abs(x) < 1e-4:
        x2 = x * x
        return 1.0 - x2 / 6.0 + x2 * x2 / 120.0
    return math.sin(x) / x


def d_eff_bbo_type2(theta: float, phi: float, d11: float, d22: float) -> float:
    """Effective nonlinear coefficient for type-II mixing in BBO:
    (d11 sin(3 phi) + d22 cos(3 phi)) cos(2 theta)."""
    return (d11 * math.sin(3.0 * phi) + d22 * math.cos(3.0 * phi)) * math.cos(2.0 * theta)


def intensity(amplitude: complex, n: float) -> float:
    """Optical intensity I = 2 n eps0 c |A|^2 (W/m^2)."""
    return float(2.0 * n * VACUUM_PERMITTIVITY * SPEED_OF_LIGHT * abs(amplitude) ** 2)


@dataclass(frozen=True)
class FieldAmplitude:
    """Complex field amplitude of one wave with its wavelength and index."""

    amplitude: complex
    wavelength_um: float
    n: float

    @property
    def omega(self) -> float:
        return 2.0 * math.pi * SPEED_OF_LIGHT / (self.wavelength_um * 1e-6)

    @property
    def intensity(self) -> float:
        return intensity(self.amplitude, self.n)


def shg_intensity(intensity_1: float, intensity_2: float, omega_3: float,
                  n1: float, n2: float, n3: float, d_eff: float,
                  length: float, delta_k: float) -> float:
    """Generated intensity of the sum wave after a crystal of ``length``:

        I3 = 8 d_eff^2 w3^2 I1 I2 / (n1 n2 n3 eps0 c^3) * L^2
             * sinc^2(dk L / 2)
    """
    if intensity_1 < 0 or intensity_2 < 0:
        raise ValueError("intensities must be non-negative")
    if length < 0:
        raise ValueError("length must be non-negative")
    peak = (8.0 * d_eff ** 2 * omega_3 ** 2 * intensity_1 * intensity_2
            / (n1 * n2 * n3 * VACUUM_PERMITTIVITY * SPEED_OF_LIGHT ** 3))
    return peak * length ** 2 * sinc(delta_k * length / 2.0) ** 2


def gain_rate(chi_eff: float, pump_magnitude: float, omega_1: float,
              omega_2: float, n1: float, n2: float) -> float:
    """Parametric gain rate alpha = chi_eff |A3| sqrt(w1 w2 / (n1 n2)) / c."""
    return chi_eff * pump_magnitude / SPEED_OF_LIGHT * math.sqrt(omega_1 * omega_2 / (n1 * n2))


def parametric_gain_analytic(a1_0: complex, pump: complex, z: float,
                             omega_1: float, omega_2: float,
                             n1: float, n2: float,
                             chi_eff: float) -> tuple[complex, complex]:
    """Closed-form amplified signal and generated idler at dk = 0:

        A1(z) = A1(0) cosh(alpha z)
        A2(z) = i sqrt(w2 n1 / (w1 n2)) (A3/|A3|) A1*(0) sinh(alpha z)

    The idler magnitude carries no pump factor beyond the phase; this is
    the normalization under which the photon-flux difference of the two
    waves is conserved exactly (cosh^2 - sinh^2 = 1).
    """
    if z < 0:
        raise ValueError("z must be non-negative")
    if pump == 0:
        if z == 0.0:
            return complex(a1_0), 0j
        raise PumpZeroError("pump amplitude is zero: gain rate undefined")
    alpha = gain_rate(chi_eff, abs(pump), omega_1, omega_2, n1, n2)
    a1 = a1_0 * math.cosh(alpha * z)
    a2 = (1j * math.sqrt(omega_2 * n1 / (omega_1 * n2)) * (pump / abs(pump))
          * a1_0.conjugate() * math.sinh(alpha * z))
    return a1, a2


@dataclass(frozen=True)
class Trajectory:
    """Sampled signal/idler amplitudes along the crystal."""

    z: np.ndarray
    a1: np.ndarray
    a2: np.ndarray


def integrate_coupled(a1_0: complex, a2_0: complex, pump: complex,
                      delta_k: float, chi_eff: float, z_end: float, steps: int,
                      omega_1: float, omega_2: float,
                      n1: float, n2: float) -> Trajectory:
    """Fixed-step RK4 integration of the coupled amplitude pair, sampled at
    every step (steps + 1 points including z = 0)."""
    if steps < 1:
        raise ValueError("need at least one step")
    if z_end < 0:
        raise ValueError("z_end must be non-negative")
    c1 = 1j * omega_1 / (n1 * SPEED_OF_LIGHT) * chi_eff * pump
    c2 = 1j * omega_2 / (n2 * SPEED_OF_LIGHT) * chi_eff * pump
    h = z_end / steps

    def deriv(z: float, y1: complex, y2: complex) -> tuple[complex, complex]:
        phase = cmath.exp(1j * delta_k * z)
        return c1 * y2.conjugate() * phase, c2 * y1.conjugate() * phase

    zs = [0.0]
    a1s = [complex(a1_0)]
    a2s = [complex(a2_0)]
    y1, y2 = complex(a1_0), complex(a2_0)
    for step in range(steps):
        z0 = step * h
        k1 = deriv(z0, y1, y2)
        k2 = deriv(z0 + h / 2, y1 + h / 2 * k1[0], y2 + h / 2 * k1[1])
        k3 = deriv(z0 + h / 2, y1 + h / 2 * k2[0], y2 + h / 2 * k2[1])
        k4 = deriv(z0 + h, y1 + h * k3[0], y2 + h * k3[1])
        y1 = y1 + h / 6 * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0])
        y2 = y2 + h / 6 * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1])
        zs.append((step + 1) * h)
        a1s.append(y1)
        a2s.append(y2)
    return Trajectory(np.array(zs), np.array(a1s), np.array(a2s))


def flux_defect_series(trajectory: Trajectory, omega_1: float, omega_2: float,
                       n1: float, n2: float) -> np.ndarray:
    """Photon-flux imbalance |(I1/w1 - I2/w2) - initial| at every sample,
    normalized by the initial total photon flux (zero when there is none)."""
    flux_1 = 2.0 * n1 * VACUUM_PERMITTIVITY * SPEED_OF_LIGHT * np.abs(trajectory.a1) ** 2 / omega_1
    flux_2 = 2.0 * n2 * VACUUM_PERMITTIVITY * SPEED_OF_LIGHT * np.abs(trajectory.a2) ** 2 / omega_2
    diff = flux_1 - flux_2
    defect = np.abs(diff - diff[0])
    norm = flux_1[0] + flux_2[0]
    if norm == 0.0:
        return defect
    return defect / norm


def manley_rowe_defect(trajectory: Trajectory, omega_1: float, omega_2: float,
                       n1: float, n2: float) -> float:
    """Worst photon-flux imbalance along the trajectory; zero for an exact
    solution of the coupled equations."""
    if len(trajectory.z) == 0:
        raise ValueError("trajectory is empty")
    return float(np.max(flux_defect_series(trajectory, omega_1, omega_2, n1, n2)))
