"""Independent reference computations the test suite checks the library against.

Everything here deliberately avoids the code paths under test: the scan
oracle never calls the bisection solvers, the finite-difference walk-off
never touches the analytic derivative, and the squeezed-state amplitudes
come from the closed form rather than the operator series.
"""

import math

from spdclab.crystal import index_extraordinary, index_ordinary

# signal/idler polarizations per matching type label
DAUGHTER_POLS = {"I": ("o", "o"), "II-EO": ("e", "o"), "II-OE": ("o", "e")}


def collinear_mismatch_fn(xtal, label, lambda_p, lambda_s):
    """Scalar mismatch f(theta) = n_p/lp - n_s/ls - n_i/li (1/um) for a
    collinear geometry, built directly from the index primitives."""
    lambda_i = 1.0 / (1.0 / lambda_p - 1.0 / lambda_s)
    sig_pol, idl_pol = DAUGHTER_POLS[label]
    fixed = 0.0
    if sig_pol == "o":
        fixed += index_ordinary(xtal, lambda_s) / lambda_s
    if idl_pol == "o":
        fixed += index_ordinary(xtal, lambda_i) / lambda_i

    def f(theta):
        total = fixed
        if sig_pol == "e":
            total += index_extraordinary(xtal, lambda_s, theta) / lambda_s
        if idl_pol == "e":
            total += index_extraordinary(xtal, lambda_i, theta) / lambda_i
        return index_extraordinary(xtal, lambda_p, theta) / lambda_p - total

    return f


def scan_collinear(xtal, label, lambda_p, lambda_s, step_deg=0.01):
    """Brute-force 0.01-degree scan for the collinear matching angle.

    Returns the midpoint of the first sign-change bracket in radians, or
    None when the mismatch never changes sign on (0, 90) deg.
    """
    f = collinear_mismatch_fn(xtal, label, lambda_p, lambda_s)
    steps = int(round(90.0 / step_deg))
    prev_theta = 0.0
    prev_value = f(0.0)
    for k in range(1, steps + 1):
        theta = math.radians(k * step_deg)
        value = f(theta)
        if prev_value == 0.0:
            return prev_theta
        if prev_value * value < 0.0:
            return 0.5 * (prev_theta + theta)
        prev_theta, prev_value = theta, value
    return None


def walkoff_finite_difference(xtal, lambda_um, theta, step=1e-6):
    """Central finite difference of -(1/n) dn/dtheta through the ellipsoid."""
    n = index_extraordinary(xtal, lambda_um, theta)
    slope = (index_extraordinary(xtal, lambda_um, theta + step)
             - index_extraordinary(xtal, lambda_um, theta - step)) / (2.0 * step)
    return -slope / n


def squeezed_pair_amplitudes(r, n_max):
    """Closed-form two-mode-squeezed-vacuum amplitudes tanh(r)^n / cosh(r)."""
    t = math.tanh(r)
    ch = math.cosh(r)
    return [t ** n / ch for n in range(n_max + 1)]


def squeezed_pair_probs(r, n_max):
    return [a * a for a in squeezed_pair_amplitudes(r, n_max)]


def heralded_g2_from_probs(probs):
    """Threshold-detector heralded autocorrelation by direct enumeration
    over a pair-number distribution."""
    herald = sum(probs[1:])
    both = sum(p * (1.0 - 2.0 * 0.5 ** n) for n, p in enumerate(probs) if n >= 1)
    single = sum(p * (1.0 - 0.5 ** n) for n, p in enumerate(probs) if n >= 1)
    return both * herald / single ** 2
