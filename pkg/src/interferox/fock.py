"""Two-mode Fock-state optics for single-photon beam-splitter experiments.

A lossless symmetric splitter with complex reflection/transmission pair
(R, T) maps the input creation operators to

    a1+ -> R ar+ + T at+,      a2+ -> T ar+ + R at+,

so a single photon in port 1 leaves as R|1,0> + T|0,1>.  Detection
amplitudes, coincidence statistics, and a frustrated-total-internal-
reflection transmission model for a prism gap live here too.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import CutoffExceeded, LosslessnessViolation

INVARIANT_TOL = 1e-12   # internal consistency checks
VALIDATE_TOL = 1e-9     # user-supplied coefficient pairs


@dataclass(frozen=True)
class BeamSplitterCoeffs:
    """Complex reflection/transmission amplitude pair of a lossless splitter."""
    r: complex
    t: complex

    @property
    def reflectance(self) -> float:
        return abs(self.r) ** 2

    @property
    def transmittance(self) -> float:
        return abs(self.t) ** 2


def validate_coeffs(r: complex, t: complex, tol: float = VALIDATE_TOL) -> BeamSplitterCoeffs:
    """Check the losslessness conditions |R|^2+|T|^2=1 and RT*+TR*=0.

    Raises LosslessnessViolation rather than normalizing silently.
    """
    r = complex(r)
    t = complex(t)
    norm_defect = abs(abs(r) ** 2 + abs(t) ** 2 - 1.0)
    phase_defect = abs(r * t.conjugate() + t * r.conjugate())
    if norm_defect > tol:
        raise LosslessnessViolation(
            f"|R|^2+|T|^2 = {abs(r)**2 + abs(t)**2:.15g} differs from 1 by {norm_defect:.3g}")
    if phase_defect > tol:
        raise LosslessnessViolation(
            f"RT*+TR* = {r * t.conjugate() + t * r.conjugate():.15g} is not 0 "
            f"(magnitude {phase_defect:.3g})")
    return BeamSplitterCoeffs(r, t)


class TwoModeFockState:
    """Superposition over two-mode occupation pairs (n1, n2) up to a cutoff."""

    def __init__(self, amplitudes, cutoff: int = 2):
        if cutoff < 1:
            raise ValueError("cutoff must be >= 1")
        self.cutoff = int(cutoff)
        self.amplitudes = {}
        for (n1, n2), amp in dict(amplitudes).items():
            if n1 < 0 or n2 < 0 or n1 != int(n1) or n2 != int(n2):
                raise ValueError(f"occupations must be nonnegative integers, got {(n1, n2)}")
            if n1 + n2 > self.cutoff:
                raise CutoffExceeded(
                    f"occupation {(n1, n2)} exceeds total-photon cutoff {self.cutoff}")
            amp = complex(amp)
            if amp != 0:
                self.amplitudes[(int(n1), int(n2))] = amp

    @classmethod
    def single_photon(cls, port: int = 1, cutoff: int = 2) -> "TwoModeFockState":
        """|1,0> or |0,1> depending on the input port."""
        if port not in (1, 2):
            raise ValueError("port must be 1 or 2")
        occ = (1, 0) if port == 1 else (0, 1)
        return cls({occ: 1.0}, cutoff=cutoff)

    @classmethod
    def vacuum(cls, cutoff: int = 2) -> "TwoModeFockState":
        return cls({(0, 0): 1.0}, cutoff=cutoff)

    def norm(self) -> float:
        return math.sqrt(sum(abs(a) ** 2 for a in self.amplitudes.values()))

    def amplitude(self, n1: int, n2: int) -> complex:
        return self.amplitudes.get((n1, n2), 0.0 + 0.0j)

    def total_photons(self) -> set:
        return {n1 + n2 for n1, n2 in self.amplitudes}

    def __repr__(self):
        terms = ", ".join(f"{occ}: {amp:.6g}" for occ, amp in sorted(self.amplitudes.items()))
        return f"TwoModeFockState({{{terms}}}, cutoff={self.cutoff})"


def apply_beam_splitter(state: TwoModeFockState, bs: BeamSplitterCoeffs) -> TwoModeFockState:
    """Transform a two-mode state through a lossless splitter.

    Each input occupation expands binomially under
    a1+ -> R ar+ + T at+ and a2+ -> T ar+ + R at+; photon number is
    conserved, so a valid input can never overflow the cutoff.
    """
    r, t = complex(bs.r), complex(bs.t)
    out: dict = {}
    for (n1, n2), amp in state.amplitudes.items():
        if n1 + n2 > state.cutoff:
            raise CutoffExceeded(f"input occupation {(n1, n2)} beyond cutoff {state.cutoff}")
        base = amp / math.sqrt(math.factorial(n1) * math.factorial(n2))
        for k in range(n1 + 1):
            c1 = math.comb(n1, k) * r ** k * t ** (n1 - k)
            for j in range(n2 + 1):
                c2 = math.comb(n2, j) * t ** j * r ** (n2 - j)
                m1 = k + j
                m2 = (n1 - k) + (n2 - j)
                w = base * c1 * c2 * math.sqrt(math.factorial(m1) * math.factorial(m2))
                out[(m1, m2)] = out.get((m1, m2), 0.0 + 0.0j) + w
    result = TwoModeFockState(out, cutoff=state.cutoff)
    drift = abs(result.norm() - state.norm())
    if drift > 1e-10:
        raise LosslessnessViolation(f"norm drifted by {drift:.3g} under splitter transform")
    return result


@dataclass(frozen=True)
class DetectionAmplitudes:
    """Single-photon detection amplitudes at the two outputs plus coincidence."""
    a_r: complex
    a_t: complex
    a_c: complex

    @property
    def probabilities(self):
        return abs(self.a_r) ** 2, abs(self.a_t) ** 2, abs(self.a_c) ** 2


def detection_amplitudes(state: TwoModeFockState) -> DetectionAmplitudes:
    """Project onto |1,0>, |0,1> and the coincidence occupation |1,1>."""
    return DetectionAmplitudes(
        a_r=state.amplitude(1, 0),
        a_t=state.amplitude(0, 1),
        a_c=state.amplitude(1, 1),
    )


def sample_detections(state: TwoModeFockState, shots: int, seed: int):
    """Monte Carlo detector counts (n_r, n_t, n_coincidence) from Born weights.

    Deterministic for a fixed seed; a zero coincidence amplitude yields a
    count of exactly zero, not merely a small one.  Batches may be merged
    by summation using seed + batch_index.
    """
    if shots < 0:
        raise ValueError("shots must be >= 0")
    if shots == 0:
        return 0, 0, 0
    amps = detection_amplitudes(state)
    p_r, p_t, p_c = amps.probabilities
    p_rest = max(0.0, 1.0 - p_r - p_t - p_c)
    probs = np.array([p_r, p_t, p_c, p_rest])
    probs = probs / probs.sum()
    rng = np.random.default_rng(seed)
    n_r, n_t, n_c, _ = rng.multinomial(shots, probs)
    return int(n_r), int(n_t), int(n_c)


@dataclass(frozen=True)
class GapGeometry:
    """Prism-gap geometry for the tunneling beam splitter."""
    gap: float                      # m
    wavelength: float               # m
    refractive_index: float = 1.5   # prism glass
    incidence_angle: float = math.pi / 4  # rad, beyond the critical angle

    def __post_init__(self):
        if self.gap < 0:
            raise ValueError("gap must be >= 0")
        if self.wavelength <= 0:
            raise ValueError("wavelength must be > 0")
        if self.refractive_index <= 1:
            raise ValueError("refractive index must exceed 1")
        if not 0 < self.incidence_angle < math.pi / 2:
            raise ValueError("incidence angle must lie in (0, pi/2)")
        n_sin = self.refractive_index * math.sin(self.incidence_angle)
        if n_sin <= 1:
            raise ValueError("incidence below the critical angle: no frustrated reflection")


def gap_transmission(geom: GapGeometry) -> BeamSplitterCoeffs:
    """FTIR transmission through a sub-wavelength gap between two prisms.

    Barrier-tunneling form |T|^2 = 1/(1 + beta sinh^2(kappa g)) with
    kappa the evanescent decay constant of the gap; |T|^2 -> 1 as the
    prisms touch and decays exponentially for gaps of several wavelengths.
    Phases follow the symmetric convention: T real positive, R = i|R|.
    """
    n = geom.refractive_index
    s2 = (n * math.sin(geom.incidence_angle)) ** 2
    kappa = (2 * math.pi / geom.wavelength) * math.sqrt(s2 - 1.0)
    beta = (n ** 2 - 1.0) ** 2 / (4.0 * n ** 2 * math.cos(geom.incidence_angle) ** 2 * (s2 - 1.0))
    t2 = 1.0 / (1.0 + beta * math.sinh(kappa * geom.gap) ** 2)
    t = math.sqrt(t2)
    r = 1j * math.sqrt(max(0.0, 1.0 - t2))
    return validate_coeffs(r, t, tol=INVARIANT_TOL)
