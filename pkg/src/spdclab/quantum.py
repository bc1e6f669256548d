"""Truncated two-mode Fock simulation of photon-pair generation.

A classical undepleted pump turns the three-mode pair-creation interaction
into a two-mode squeezer with a single dimensionless strength ``r``; states
live on an (n_max + 1)^2 signal/idler Fock grid.  On top of the number
statistics sit the derived observables: heralded autocorrelation,
beamsplitter (Hong-Ou-Mandel) interference, and the polarization-
entanglement correlations used for CHSH tests.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

SQRT_HALF = 1.0 / math.sqrt(2.0)


class TruncationWarning(UserWarning):
    """The Fock cutoff swallowed a non-negligible part of the state."""


class NondiagonalStateError(ValueError):
    """Operation defined only for states with equal signal/idler numbers."""


class NoHeraldError(ValueError):
    """Heralded quantity requested on a state that never fires the herald."""


class DegenerateFringeError(ValueError):
    """Fringe visibility undefined: the scanned probabilities are all zero."""


@dataclass(frozen=True)
class PairState:
    """Two-mode Fock state: ``amplitudes[n_signal, n_idler]``."""

    amplitudes: np.ndarray
    r: float = 0.0

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=complex)
        if amps.ndim != 2 or amps.shape[0] != amps.shape[1]:
            raise ValueError("amplitudes must be a square 2-d array")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @property
    def n_max(self) -> int:
        return self.amplitudes.shape[0] - 1

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def normalized(self) -> "PairState":
        n = self.norm()
        if n == 0.0:
            raise ValueError("cannot normalize the zero vector")
        return PairState(self.amplitudes / n, r=self.r)


def vacuum_state(n_max: int = 8) -> PairState:
    amps = np.zeros((n_max + 1, n_max + 1), dtype=complex)
    amps[0, 0] = 1.0
    return PairState(amps)


def fock_state(n_signal: int, n_idler: int, n_max: int = 8) -> PairState:
    if not (0 <= n_signal <= n_max and 0 <= n_idler <= n_max):
        raise ValueError("occupation exceeds the cutoff")
    amps = np.zeros((n_max + 1, n_max + 1), dtype=complex)
    amps[n_signal, n_idler] = 1.0
    return PairState(amps)


_AXIS = {"signal": 0, "idler": 1}


def apply_ladder(state: PairState, mode: str, kind: str) -> PairState:
    """Creation or annihilation on one mode, linearly and without
    renormalization.  Creation out of the top Fock level is dropped (the
    truncation loss shows up in the norm); annihilating vacuum gives the
    zero vector.
    """
    if mode not in _AXIS:
        raise ValueError("mode must be 'signal' or 'idler'")
    if kind not in ("create", "annihilate"):
        raise ValueError("kind must be 'create' or 'annihilate'")
    axis = _AXIS[mode]
    amps = state.amplitudes
    n_max = state.n_max
    out = np.zeros_like(amps)
    roots = np.sqrt(np.arange(1.0, n_max + 1.0))
    scale = roots[:, None] if axis == 0 else roots[None, :]
    if kind == "create":
        if axis == 0:
            out[1:, :] = scale * amps[:-1, :]
        else:
            out[:, 1:] = scale * amps[:, :-1]
    else:
        if axis == 0:
            out[:-1, :] = scale * amps[1:, :]
        else:
            out[:, :-1] = scale * amps[:, 1:]
    return PairState(out, r=state.r)


def mean_photon_number(state: PairState, mode: str) -> float:
    """Expectation of the number operator on one mode's marginal."""
    if mode not in _AXIS:
        raise ValueError("mode must be 'signal' or 'idler'")
    probs = np.abs(state.amplitudes) ** 2
    marginal = probs.sum(axis=1 - _AXIS[mode])
    return float(np.dot(np.arange(len(marginal)), marginal))


def spdc_evolve(r: float, n_max: int = 8, series_order: int = 12) -> PairState:
    """Pair state generated from vacuum by the two-mode squeezer.

    Applies the operator series sum_m (r (a_s+ a_i+ - a_s a_i))^m / m! to
    vacuum on a workspace large enough to hold every term (the full series
    reaches pair number ``series_order`` at most), then truncates to
    ``n_max`` and renormalizes.  Only the diagonal (n, n) amplitudes are
    populated, all real and non-negative for r >= 0.  A TruncationWarning
    fires when the cutoff removes more than 1e-6 of the squared norm,
    i.e. when r is too large for n_max.
    """
    if r < 0:
        raise ValueError("interaction parameter must be non-negative")
    if n_max < 1 or series_order < 1:
        raise ValueError("n_max and series_order must be at least 1")
    work = max(n_max, series_order)
    size = work + 1
    amps = np.zeros((size, size), dtype=complex)
    amps[0, 0] = 1.0
    term = amps.copy()
    roots = np.sqrt(np.arange(1.0, size))
    for m in range(1, series_order + 1):
        up = np.zeros_like(term)
        up[1:, 1:] = roots[:, None] * roots[None, :] * term[:-1, :-1]
        down = np.zeros_like(term)
        down[:-1, :-1] = roots[:, None] * roots[None, :] * term[1:, 1:]
        term = (r / m) * (up - down)
        amps += term
    truncated = amps[: n_max + 1, : n_max + 1].copy()
    total = float(np.sum(np.abs(amps) ** 2))
    kept = float(np.sum(np.abs(truncated) ** 2))
    if (total - kept) / total > 1e-6:
        warnings.warn(
            f"Fock cutoff n_max={n_max} removes {(total - kept) / total:.3e} "
            f"of the squared norm at r={r}; increase n_max",
            TruncationWarning,
            stacklevel=2,
        )
    truncated /= math.sqrt(kept)
    return PairState(truncated, r=r)


def pair_statistics(state: PairState) -> np.ndarray:
    """Pair-number distribution p(n) = |c(n, n)|^2 of a diagonal state."""
    amps = state.amplitudes
    off_weight = float(np.sum(np.abs(amps) ** 2) - np.sum(np.abs(np.diagonal(amps)) ** 2))
    if off_weight > 1e-12:
        raise NondiagonalStateError(
            f"state carries {off_weight:.3e} weight outside the (n, n) diagonal"
        )
    return np.abs(np.diagonal(amps)) ** 2


def heralded_g2(state: PairState) -> float:
    """Heralded second-order autocorrelation of the signal arm.

    Ideal model: a detection of at least one idler photon heralds; the
    signal mode hits a balanced splitter watched by two unit-efficiency
    threshold detectors.  With n signal photons splitting binomially,
    P(both fire) = 1 - 2^(1-n) and P(one side fires) = 1 - 2^-n, so

        g2 = P(coincidence | herald) / (P(d1 | herald) P(d2 | herald))

    by exact enumeration over the pair-number distribution.
    """
    probs = pair_statistics(state)
    herald = float(probs[1:].sum())
    if herald == 0.0:
        raise NoHeraldError("herald probability is zero")
    both = 0.0
    single = 0.0
    for n in range(1, len(probs)):
        both += probs[n] * (1.0 - 2.0 * 0.5 ** n)
        single += probs[n] * (1.0 - 0.5 ** n)
    return float(both * herald / single ** 2)


def hom_coincidence(overlap: float) -> float:
    """Coincidence probability for two single photons on a balanced
    splitter with mode-overlap amplitude ``overlap``:
    P = (1 - overlap^2) / 2.  Fully indistinguishable photons bunch
    (P = 0); fully distinguishable ones split classically (P = 1/2)."""
    if not (0.0 <= overlap <= 1.0):
        raise ValueError("overlap must lie in [0, 1]")
    return 0.5 * (1.0 - overlap * overlap)


def hom_dip_curve(delays_s: np.ndarray, coherence_time_s: float,
                  visibility: float) -> np.ndarray:
    """Coincidence probability against arrival-time delay, Gaussian
    spectral model: P(tau) = (1 - V exp(-(tau/sigma)^2)) / 2."""
    if coherence_time_s <= 0:
        raise ValueError("coherence time must be positive")
    if not (0.0 <= visibility <= 1.0):
        raise ValueError("visibility must lie in [0, 1]")
    tau = np.asarray(delays_s, dtype=float)
    return 0.5 * (1.0 - visibility * np.exp(-((tau / coherence_time_s) ** 2)))


def beamsplitter_transform(state: PairState) -> PairState:
    """Balanced-splitter Fock transform of a two-mode state.

    Symmetric convention a1+ -> (b1+ + i b2+)/sqrt2, a2+ -> (i b1+ + b2+)/sqrt2.
    The output grid doubles so no component is lost; the map is unitary on
    every input basis state.
    """
    n_max = state.n_max
    big = 2 * n_max
    out = np.zeros((big + 1, big + 1), dtype=complex)
    fact = [math.factorial(k) for k in range(big + 1)]
    for n in range(n_max + 1):
        for m in range(n_max + 1):
            amp = state.amplitudes[n, m]
            if amp == 0:
                continue
            pref = amp / math.sqrt(fact[n] * fact[m]) / 2.0 ** ((n + m) / 2.0)
            for j in range(n + 1):
                for k in range(m + 1):
                    coeff = (math.comb(n, j) * math.comb(m, k)
                             * 1j ** (n - j) * 1j ** k)
                    n1 = j + k
                    n2 = (n - j) + (m - k)
                    out[n1, n2] += pref * coeff * math.sqrt(fact[n1] * fact[n2])
    return PairState(out, r=state.r)


_H, _V = 0, 1


@dataclass(frozen=True)
class PolarizationState:
    """Two-photon polarization state, ``amplitudes[idler, signal]`` with
    H = 0, V = 1."""

    amplitudes: np.ndarray = field(default_factory=lambda: np.zeros((2, 2), dtype=complex))

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=complex)
        if amps.shape != (2, 2):
            raise ValueError("amplitudes must be a 2x2 array")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))


def bell_state(phi: float = 0.0) -> PolarizationState:
    """(|H_i V_s> + e^{i phi} |V_i H_s>) / sqrt(2); phi = pi gives the
    singlet-like anticorrelated state."""
    amps = np.zeros((2, 2), dtype=complex)
    amps[_H, _V] = SQRT_HALF
    amps[_V, _H] = SQRT_HALF * np.exp(1j * phi)
    return PolarizationState(amps)


def _analyzer(angle: float) -> np.ndarray:
    return np.array([math.cos(angle), math.sin(angle)])


def coincidence_probability(state: PolarizationState, signal_angle: float,
                            idler_angle: float) -> float:
    """Probability that both analyzers transmit: |<a_s, b_i | psi>|^2."""
    amp = _analyzer(idler_angle) @ state.amplitudes @ _analyzer(signal_angle)
    return float(abs(amp) ** 2)


def correlation(state: PolarizationState, signal_angle: float,
                idler_angle: float) -> float:
    """Polarization correlation E(a, b) built from the four coincidence
    probabilities of a setting and its orthogonal complements."""
    quarter = math.pi / 2
    return (coincidence_probability(state, signal_angle, idler_angle)
            + coincidence_probability(state, signal_angle + quarter, idler_angle + quarter)
            - coincidence_probability(state, signal_angle, idler_angle + quarter)
            - coincidence_probability(state, signal_angle + quarter, idler_angle))


def chsh_s(state: PolarizationState, a: float, a_prime: float,
           b: float, b_prime: float) -> float:
    """CHSH combination |E(a,b) - E(a,b') + E(a',b) + E(a',b')|."""
    return abs(correlation(state, a, b) - correlation(state, a, b_prime)
               + correlation(state, a_prime, b) + correlation(state, a_prime, b_prime))


def visibility(state: PolarizationState, signal_angle: float,
               idler_angles: np.ndarray) -> float:
    """Fringe visibility (Pmax - Pmin) / (Pmax + Pmin) of the coincidence
    rate scanned over the idler analyzer; the scan must span at least one
    fringe period."""
    probs = [coincidence_probability(state, signal_angle, b) for b in idler_angles]
    p_max = max(probs)
    p_min = min(probs)
    if p_max + p_min == 0.0:
        raise DegenerateFringeError("coincidence fringe identically zero")
    return (p_max - p_min) / (p_max + p_min)
