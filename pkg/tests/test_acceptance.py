"""End-to-end acceptance criteria, one printed pass/fail line each.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the lines.
"""

import math
import subprocess
import sys
import time

import numpy as np

from spdclab import quantum, threewave
from spdclab.crystal import (
    BBO,
    index_extraordinary_principal,
    index_ordinary,
)
from spdclab.phasematch import (
    Geometry,
    PhaseMatchType,
    azimuth_grid,
    emission_cones,
    idler_wavelength,
    ring_intersections,
    solve_collinear,
    solve_noncollinear,
)
from oracles import (
    heralded_g2_from_probs,
    scan_collinear,
    squeezed_pair_amplitudes,
    squeezed_pair_probs,
)

_MODULE_T0 = time.perf_counter()


def _report(index, name, ok, detail=""):
    status = "PASS" if ok else "FAIL"
    tail = f"  ({detail})" if detail else ""
    print(f"[{status}] acceptance {index}: {name}{tail}")
    assert ok, f"acceptance {index} {name}: {detail}"


def test_01_sellmeier_fidelity():
    t0 = time.perf_counter()
    ok = True
    details = []
    for lam in (0.4, 0.8, 0.81):
        lam2 = lam * lam
        hand_o = math.sqrt(2.7405 + 0.0184 / (lam2 - 0.0179) - 0.0155 * lam2)
        hand_e = math.sqrt(2.3730 + 0.0128 / (lam2 - 0.0156) - 0.0044 * lam2)
        n_o = index_ordinary(BBO, lam)
        n_e = index_extraordinary_principal(BBO, lam)
        ok &= abs(n_o - hand_o) <= 1e-12 * hand_o
        ok &= abs(n_e - hand_e) <= 1e-12 * hand_e
        details.append(f"{lam}um: n_o={n_o:.6f} n_e={n_e:.6f}")
    # frozen six-figure values from the hand evaluation
    ok &= round(index_ordinary(BBO, 0.4), 6) == 1.693371
    ok &= round(index_ordinary(BBO, 0.8), 6) == 1.661372
    ok &= round(index_extraordinary_principal(BBO, 0.4), 6) == 1.568738
    ok &= round(index_extraordinary_principal(BBO, 0.8), 6) == 1.546184
    elapsed = time.perf_counter() - t0
    ok &= elapsed < 1.0
    _report(1, "Sellmeier fidelity vs hand-evaluated closed forms", ok,
            "; ".join(details) + f"; {elapsed:.2f}s")


def test_02_collinear_solver_vs_scan_oracle():
    t0 = time.perf_counter()
    labels = {"I": PhaseMatchType.TYPE_I, "II-EO": PhaseMatchType.TYPE_II_EO,
              "II-OE": PhaseMatchType.TYPE_II_OE}
    cases = [("I", 0.4, 0.8), ("II-EO", 0.405, 0.81)]
    rng = np.random.default_rng(20260808)
    attempts = 0
    while len(cases) < 22 and attempts < 300:
        attempts += 1
        label = ("I", "II-EO", "II-OE")[int(rng.integers(0, 3))]
        lambda_p = float(rng.uniform(0.35, 0.55))
        lambda_s = lambda_p * float(rng.uniform(1.9, 2.6))
        if scan_collinear(BBO, label, lambda_p, lambda_s, step_deg=0.5) is None:
            continue  # cheap pre-screen; the fine scan below is the oracle
        cases.append((label, lambda_p, lambda_s))
    ok = len(cases) == 22
    worst = 0.0
    for label, lambda_p, lambda_s in cases:
        oracle = scan_collinear(BBO, label, lambda_p, lambda_s)
        if oracle is None:
            ok = False
            continue
        sol = solve_collinear(BBO, labels[label], lambda_p, lambda_s)
        worst = max(worst, abs(math.degrees(sol.theta_cut - oracle)))
    ok &= worst < 0.02
    degenerate = math.degrees(solve_collinear(BBO, PhaseMatchType.TYPE_I, 0.4, 0.8).theta_cut)
    ok &= abs(degenerate - 29.0) < 0.1
    elapsed = time.perf_counter() - t0
    ok &= elapsed < 5.0
    _report(2, "collinear solver vs 0.01-degree scan oracle", ok,
            f"{len(cases)} instances, worst gap {worst:.4f} deg; type-I degenerate "
            f"cut {degenerate:.3f} deg (31.7 deg is sometimes quoted for this cut; "
            f"recorded as a discrepancy, not a target); {elapsed:.2f}s")


def test_03_noncollinear_cones():
    t0 = time.perf_counter()
    lam_i = idler_wavelength(0.405, 0.81)
    ok = True
    externals = []
    for phi_deg in (0.0, 45.0, 90.0, 135.0, 180.0):
        sol = solve_noncollinear(BBO, PhaseMatchType.TYPE_II_EO, 0.405, 0.81, lam_i,
                                 math.radians(1.8), math.radians(phi_deg))
        ext = math.degrees(sol.theta_s_ext)
        externals.append(ext)
        ok &= 2.0 <= ext <= 4.0
        ok &= sol.residual < 1e-10
    tuned = solve_noncollinear(BBO, PhaseMatchType.TYPE_II_EO, 0.405, 0.81, lam_i,
                               math.radians(1.8), math.pi / 2)
    points = emission_cones(BBO, Geometry(tuned.theta_cut, 1e-3),
                            PhaseMatchType.TYPE_II_EO, 0.405, [0.81],
                            azimuth_grid(720), 0.1)
    crossings = ring_intersections(points)
    ok &= len(crossings) == 2
    elapsed = time.perf_counter() - t0
    ok &= elapsed < 30.0
    _report(3, "noncollinear geometry and intersecting cones", ok,
            f"external signal angles {min(externals):.2f}-{max(externals):.2f} deg "
            f"(target 3 +/- 1), {len(crossings)} ring intersections; {elapsed:.2f}s")


def test_04_shg_conversion_law():
    omega = 2.0 * math.pi * threewave.SPEED_OF_LIGHT / 0.4e-6
    length = 1e-3
    peak = threewave.shg_intensity(1e12, 1e12, omega, 1.66, 1.66, 1.69, 2e-12, length, 0.0)
    ok = peak > 0.0
    for m in (1, 2, 3):
        dk = 2.0 * m * math.pi / length
        ok &= threewave.shg_intensity(1e12, 1e12, omega, 1.66, 1.66, 1.69,
                                      2e-12, length, dk) <= 1e-30 * peak
    doubled = threewave.shg_intensity(1e12, 1e12, omega, 1.66, 1.66, 1.69,
                                      2e-12, 2.0 * length, 0.0)
    ratio = doubled / peak
    ok &= abs(ratio - 4.0) <= 1e-9
    _report(4, "sinc^2 conversion law", ok,
            f"zeros at dk L/2 = m pi below 1e-30 of peak, L doubling ratio {ratio!r}")


def test_05_parametric_gain_ode():
    lam = 0.81e-6
    omega = 2.0 * math.pi * threewave.SPEED_OF_LIGHT / lam
    n = 1.661
    chi = 4.4e-12
    pump = 5e8 + 0j
    alpha = threewave.gain_rate(chi, abs(pump), omega, omega, n, n)
    z_end = 2.0 / alpha
    traj = threewave.integrate_coupled(1e3 + 0j, 0j, pump, 0.0, chi, z_end, 1000,
                                       omega, omega, n, n)
    a1_ref, a2_ref = threewave.parametric_gain_analytic(1e3 + 0j, pump, z_end,
                                                        omega, omega, n, n, chi)
    err1 = abs(traj.a1[-1] - a1_ref) / abs(a1_ref)
    err2 = abs(traj.a2[-1] - a2_ref) / abs(a2_ref)
    ok = err1 < 1e-6 and err2 < 1e-6
    errors = []
    for steps in (100, 200, 400):
        t = threewave.integrate_coupled(1e3 + 0j, 0j, pump, 0.0, chi, z_end, steps,
                                        omega, omega, n, n)
        errors.append(abs(t.a1[-1] - a1_ref))
    orders = [math.log2(errors[k] / errors[k + 1]) for k in range(2)]
    ok &= all(3.7 <= o <= 4.3 for o in orders)
    defect = threewave.manley_rowe_defect(traj, omega, omega, n, n)
    ok &= defect < 1e-9
    empty = threewave.integrate_coupled(0j, 0j, pump, 0.0, chi, z_end, 100,
                                        omega, omega, n, n)
    ok &= bool(np.all(empty.a1 == 0.0) and np.all(empty.a2 == 0.0))
    _report(5, "RK4 vs hyperbolic gain solutions", ok,
            f"endpoint rel err {max(err1, err2):.2e}, orders "
            f"{orders[0]:.2f}/{orders[1]:.2f}, flux defect {defect:.2e}, "
            f"zero seed stays dark")


def test_06_squeezer_series_vs_closed_form():
    ok = True
    worst = 0.0
    for r in (0.05, 0.1, 0.2, 0.3):
        state = quantum.spdc_evolve(r, n_max=8, series_order=12)
        closed = np.array(squeezed_pair_amplitudes(r, 8))
        diag = np.real(np.diagonal(state.amplitudes))
        worst = max(worst, float(np.max(np.abs(diag - closed))))
    ok &= worst < 1e-6
    first = quantum.spdc_evolve(0.2, n_max=8, series_order=1)
    amps = first.amplitudes
    mask = np.ones_like(amps, dtype=bool)
    mask[0, 0] = mask[1, 1] = False
    ok &= bool(np.all(amps[mask] == 0.0))
    ok &= abs(amps[1, 1] / amps[0, 0] - 0.2) < 1e-14
    _report(6, "operator series vs closed-form squeezed amplitudes", ok,
            f"max abs diff {worst:.2e} (r <= 0.3, n_max 8, order 12); "
            f"first order keeps the two-term structure")


def test_07_hom_interference():
    out = quantum.beamsplitter_transform(quantum.fock_state(1, 1, 2))
    coincidence = abs(out.amplitudes[1, 1]) ** 2
    ok = coincidence == 0.0
    ok &= quantum.hom_coincidence(1.0) == 0.0
    ok &= quantum.hom_coincidence(0.0) == 0.5
    taus = np.linspace(-4e-12, 4e-12, 81)
    curve = quantum.hom_dip_curve(taus, 1e-12, 1.0)
    ok &= int(np.argmin(curve)) == 40 and taus[40] == 0.0
    _report(7, "Hong-Ou-Mandel bunching", ok,
            "splitter-matrix coincidence exactly 0, distinguishable baseline 1/2, "
            "dip minimum at zero delay")


def test_08_chsh():
    singlet = quantum.bell_state(math.pi)
    canonical = (0.0, math.pi / 4, math.pi / 8, 3.0 * math.pi / 8)
    s = quantum.chsh_s(singlet, *canonical)
    ok = abs(s - 2.0 * math.sqrt(2.0)) < 1e-9
    product = quantum.PolarizationState(np.array([[1.0, 0.0], [0.0, 0.0]], dtype=complex))
    rng = np.random.default_rng(8)
    worst_product = 0.0
    for _ in range(10_000):
        a, ap, b, bp = rng.uniform(0.0, math.pi, 4)
        worst_product = max(worst_product, quantum.chsh_s(product, a, ap, b, bp))
    ok &= worst_product <= 2.0 + 1e-9
    drift = 0.0
    for delta in np.linspace(-1.0, 1.0, 21):
        rotated = quantum.chsh_s(singlet, *(angle + float(delta) for angle in canonical))
        drift = max(drift, abs(rotated - s))
    ok &= drift < 1e-9
    _report(8, "CHSH correlations", ok,
            f"S = {s:.9f} (2*sqrt2 target, exceeds 2.5), product-state max "
            f"{worst_product:.6f} <= 2, singlet rotation drift {drift:.1e}")


def test_09_heralded_g2():
    values = [quantum.heralded_g2(quantum.spdc_evolve(r, n_max=10, series_order=16))
              for r in (0.05, 0.1, 0.2, 0.3, 0.5)]
    ok = all(high > low for low, high in zip(values, values[1:]))
    small = quantum.heralded_g2(quantum.spdc_evolve(0.05, n_max=6, series_order=12))
    oracle = heralded_g2_from_probs(squeezed_pair_probs(0.05, 6))
    ok &= small < 0.02
    ok &= abs(small - oracle) < 1e-4
    _report(9, "heralded autocorrelation trend", ok,
            f"g2 strictly increasing over r grid, g2(0.05) = {small:.4f} < 0.02 "
            f"(enumeration oracle {oracle:.4f})")


def test_10_determinism_and_robustness(tmp_path):
    def run(args, cwd):
        return subprocess.run([sys.executable, "-m", "spdclab", *args],
                              cwd=cwd, capture_output=True, text=True)

    ok = True
    for command in (["indices", "--out", "x.csv"],
                    ["pairs", "g2", "--out", "x.csv"],
                    ["cones", "--azimuths", "120", "--out", "x.csv"]):
        dirs = []
        for sub in ("first", "second"):
            workdir = tmp_path / f"{command[0]}_{sub}"
            workdir.mkdir(parents=True)
            result = run(command, workdir)
            ok &= result.returncode == 0
            dirs.append(workdir)
        ok &= (dirs[0] / "x.csv").read_bytes() == (dirs[1] / "x.csv").read_bytes()
        ok &= ((dirs[0] / "x.manifest.txt").read_bytes()
               == (dirs[1] / "x.manifest.txt").read_bytes())
    bad = tmp_path / "bad"
    bad.mkdir()
    for args in (["indices", "--lambda-min-um", "0.05", "--out", "y.csv"],
                 ["match", "--type", "nope", "--out", "y.csv"],
                 ["match", "--pump-um", "0.3", "--signal-um", "0.31", "--out", "y.csv"],
                 ["pairs", "g2", "--r-list", "oops", "--out", "y.csv"],
                 ["gain", "--steps", "0", "--out", "y.csv"]):
        result = run(args, bad)
        ok &= result.returncode == 2
        ok &= not list(bad.iterdir())
    elapsed = time.perf_counter() - _MODULE_T0
    ok &= elapsed < 60.0
    _report(10, "byte-identical reruns, clean failures", ok,
            f"3 commands byte-stable, 5 invalid inputs exit 2 with no partial "
            f"files, acceptance module wall clock {elapsed:.1f}s < 60s")
