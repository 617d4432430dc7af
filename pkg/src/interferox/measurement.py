"""Impulsive pointer-measurement model and weak values.

A strong, short system-pointer coupling -a*Q*p_y (free Hamiltonians
dropped) translates the pointer packet of the branch with eigenvalue q
rigidly to a*q*t, leaving amplitudes and packet widths untouched.  The
entangled state is then a sum over branches of (amplitude, packet); once
the packets separate, reading the actual pointer position selects one
branch with Born frequencies.  A single-coordinate pointer can be undone
by a mirrored coupling sequence; replicating the coordinate models the
many-degrees-of-freedom route to practical irreversibility.
"""

import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import (AmbiguousRegion, NeverSeparates, OrthogonalPostSelection)


@dataclass(frozen=True)
class ObservableSpectrum:
    """Distinct eigenvalues q_k with branch amplitudes c_k, sum |c_k|^2 = 1."""
    eigenvalues: tuple
    amplitudes: tuple

    def __post_init__(self):
        qs = tuple(float(q) for q in self.eigenvalues)
        cs = tuple(complex(c) for c in self.amplitudes)
        object.__setattr__(self, "eigenvalues", qs)
        object.__setattr__(self, "amplitudes", cs)
        if len(qs) != len(cs) or not qs:
            raise ValueError("need matching, nonempty eigenvalue/amplitude lists")
        if len(set(qs)) != len(qs):
            raise ValueError("eigenvalues must be distinct")
        total = sum(abs(c) ** 2 for c in cs)
        if abs(total - 1.0) > 1e-12:
            raise ValueError(f"branch probabilities sum to {total!r}, not 1")

    @property
    def probabilities(self) -> np.ndarray:
        return np.array([abs(c) ** 2 for c in self.amplitudes])


@dataclass(frozen=True)
class PointerPacket:
    """Gaussian pointer wave packet; width is constant under the impulsive
    coupling and phase_drift cancels in every density and overlap."""
    center: float = 0.0
    width: float = 1.0
    phase_drift: float = 0.0

    def __post_init__(self):
        if self.width <= 0:
            raise ValueError("packet width must be positive")


@dataclass(frozen=True)
class ImpulsiveRun:
    spectrum: ObservableSpectrum
    packet: PointerPacket = PointerPacket()
    coupling: float = 1.0   # a, pointer units per (eigenvalue * s)
    duration: float = 10.0  # s

    def __post_init__(self):
        if not math.isfinite(self.coupling * self.duration):
            raise ValueError("coupling * duration must be finite")

    def centers(self, t: float) -> np.ndarray:
        """Branch packet centers at time t: initial + a*q_k*t."""
        return self.packet.center + self.coupling * t * np.asarray(
            self.spectrum.eigenvalues)


def evolve_impulsive(run: ImpulsiveRun, t: float):
    """Branch list [(c_k, packet centered at a*q_k*t)], exact for -a*Q*p_y."""
    if not 0 <= t <= run.duration:
        raise ValueError(f"t = {t!r} outside [0, duration]")
    return [(c, replace(run.packet, center=float(mu)))
            for c, mu in zip(run.spectrum.amplitudes, run.centers(t))]


def packet_overlap(run: ImpulsiveRun, j: int, k: int, t: float) -> complex:
    """<g_j(t)|g_k(t)> = exp(-Delta^2/(8 sigma^2)), Delta = a*t*(q_j - q_k).

    Rigid translations of a common real envelope keep the overlap real.
    """
    delta = run.coupling * t * (run.spectrum.eigenvalues[j]
                                - run.spectrum.eigenvalues[k])
    return complex(math.exp(-delta ** 2 / (8 * run.packet.width ** 2)))


def multi_dof_overlap(run: ImpulsiveRun, j: int, k: int, t: float, d: int) -> float:
    """Inter-branch overlap with d identically coupled pointer coordinates.

    The d-dimensional Gaussian integral factorizes, giving
    exp(-d * Delta^2 / (8 sigma^2)): exponential suppression in d.
    """
    if d < 1:
        raise ValueError("d must be >= 1")
    delta = run.coupling * t * (run.spectrum.eigenvalues[j]
                                - run.spectrum.eigenvalues[k])
    return math.exp(-d * delta ** 2 / (8 * run.packet.width ** 2))


def separation_time(run: ImpulsiveRun, kappa: float) -> float:
    """Smallest t with every adjacent pair of packet centers kappa*sigma apart."""
    if kappa <= 0:
        raise ValueError("kappa must be positive")
    qs = sorted(run.spectrum.eigenvalues)
    if len(qs) < 2:
        raise ValueError("separation needs at least two branches")
    gap = min(b - a for a, b in zip(qs, qs[1:]))
    speed = abs(run.coupling) * gap
    if speed == 0:
        raise NeverSeparates("packets share a velocity; they never separate")
    return kappa * run.packet.width / speed


def _log_densities(run: ImpulsiveRun, t: float, y):
    y = np.atleast_1d(np.asarray(y, dtype=float))
    sigma = run.packet.width
    centers = run.centers(t)
    probs = run.spectrum.probabilities
    with np.errstate(divide="ignore"):
        logp = np.log(probs)
    return logp[:, None] - (y[None, :] - centers[:, None]) ** 2 / (2 * sigma ** 2)


def select_outcome(run: ImpulsiveRun, t: float, y0: float) -> int:
    """Branch whose weighted packet density dominates at the pointer reading.

    Raises AmbiguousRegion when the two leading densities agree to a
    relative 1e-6 (only possible in the crossover between packets).
    """
    ld = _log_densities(run, t, y0)[:, 0]
    order = np.argsort(ld)
    top, second = order[-1], order[-2] if ld.size > 1 else order[-1]
    if ld.size > 1 and ld[top] - ld[second] < 1e-6:
        raise AmbiguousRegion(
            f"branch densities at y0={y0:g} agree to 1e-6 "
            f"(branches {top} and {second})")
    return int(top)


def sample_pointer(run: ImpulsiveRun, t: float, shots: int, seed: int) -> np.ndarray:
    """Draw pointer readings from the marginal sum_k |c_k|^2 |g_k(y,t)|^2."""
    rng = np.random.default_rng(seed)
    comp = rng.choice(len(run.spectrum.eigenvalues), size=shots,
                      p=run.spectrum.probabilities)
    return run.centers(t)[comp] + run.packet.width * rng.standard_normal(shots)


def outcome_frequencies(run: ImpulsiveRun, t: float, shots: int, seed: int) -> np.ndarray:
    """Empirical branch frequencies of select_outcome over sampled readings."""
    ys = sample_pointer(run, t, shots, seed)
    ld = _log_densities(run, t, ys)
    if ld.shape[0] > 1:
        part = np.partition(ld, -2, axis=0)
        if np.any(part[-1] - part[-2] < 1e-6):
            raise AmbiguousRegion("a sampled reading fell between packets")
    picks = np.argmax(ld, axis=0)
    return np.bincount(picks, minlength=ld.shape[0]) / shots


def reverse_measurement(run: ImpulsiveRun, t: float, correct_sign: bool = True) -> float:
    """Fidelity after the mirrored coupling sequence.

    After the forward coupling (+a for t), apply -2a then +a (each for t),
    the impulsive version of a doubled-width reversed field stage followed
    by a copy of the first; every branch center returns to the origin and
    the product state is recovered exactly.  With the correction signs
    flipped the net displacement is 2*Delta_k per branch instead.
    """
    a = run.coupling
    seq = (-2 * a, a) if correct_sign else (2 * a, -a)
    residual = (a + sum(seq)) * t * np.asarray(run.spectrum.eigenvalues)
    overlaps = np.exp(-residual ** 2 / (8 * run.packet.width ** 2))
    amp = float(np.dot(run.spectrum.probabilities, overlaps))
    return amp ** 2


@dataclass(frozen=True)
class WeakMeasurementSetup:
    """Pre-selected |i>, post-selected |f>, and a Hermitian operator A."""
    pre_state: np.ndarray
    post_state: np.ndarray
    operator: np.ndarray

    def __post_init__(self):
        i = np.asarray(self.pre_state, dtype=complex).ravel()
        f = np.asarray(self.post_state, dtype=complex).ravel()
        a = np.asarray(self.operator, dtype=complex)
        object.__setattr__(self, "pre_state", i)
        object.__setattr__(self, "post_state", f)
        object.__setattr__(self, "operator", a)
        if a.shape != (i.size, i.size) or f.size != i.size:
            raise ValueError("operator and states have incompatible shapes")
        for name, v in (("pre", i), ("post", f)):
            if abs(np.vdot(v, v).real - 1.0) > 1e-10:
                raise ValueError(f"{name}-selected state is not normalized")
        if not np.allclose(a, a.conj().T, atol=1e-12):
            raise ValueError("operator must be Hermitian")


def weak_value(setup: WeakMeasurementSetup) -> complex:
    """<f|A|i> / <f|i>; may lie far outside the eigenvalue range."""
    denom = np.vdot(setup.post_state, setup.pre_state)
    if abs(denom) < 1e-12:
        raise OrthogonalPostSelection(
            f"|<f|i>| = {abs(denom):.3g} below 1e-12; weak value undefined")
    numer = np.vdot(setup.post_state, setup.operator @ setup.pre_state)
    return complex(numer / denom)


def run_report(run: ImpulsiveRun, shots: int, seed: int, kappa: float = 5.0,
               t: float | None = None) -> dict:
    """JSON-ready summary: branch table, overlap matrix, separation time,
    reversal fidelity, and sampled outcome frequencies."""
    t_sep = separation_time(run, kappa)
    t_read = min(run.duration, 2 * t_sep) if t is None else t
    freqs = outcome_frequencies(run, t_read, shots, seed)
    k = len(run.spectrum.eigenvalues)
    overlaps = [[packet_overlap(run, i, j, t_read).real for j in range(k)]
                for i in range(k)]
    return {
        "coupling": run.coupling,
        "pointer_width": run.packet.width,
        "readout_time_s": t_read,
        "separation_time_s": t_sep,
        "kappa": kappa,
        "shots": shots,
        "seed": seed,
        "branches": [
            {"eigenvalue": q, "probability": float(p),
             "center": float(mu), "frequency": float(f)}
            for q, p, mu, f in zip(run.spectrum.eigenvalues,
                                   run.spectrum.probabilities,
                                   run.centers(t_read), freqs)],
        "overlap_matrix": overlaps,
        "reversal_fidelity": reverse_measurement(run, t_read),
    }
