"""Causal-interpretation engine for the two-slit configuration.

The wavefunction is the closed-form superposition of two spreading
Gaussian packets released from the slits, so trajectory validation is
free of PDE discretization error.  The polar decomposition psi = R *
exp(i S / hbar) supplies the quantum potential Q = -hbar^2/(2m) *
laplacian(R)/R and the guidance velocity v = grad(S)/m; trajectories
follow v and are checked for equivariance and non-crossing.
"""

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.stats import chi2 as _chi2

from ._kernels import integrate_ensemble_kernel
from .errors import NodeProximity
from .wavefield import sample_photon_positions

ELECTRON_MASS = 9.1093837015e-31  # kg
HBAR = 1.054571817e-34            # J s


@dataclass(frozen=True)
class AnalyticTwoSlitWave:
    """Superposition of two spreading Gaussian packets released at +/- a/2."""
    separation: float = 100e-6          # m between slit centers
    sigma0: float = 10e-6               # m initial packet width
    mass: float = ELECTRON_MASS         # kg
    hbar: float = HBAR                  # J s
    v_z: float = 1e5                    # m/s forward speed (maps t to plane z)
    c1: complex = 1 / math.sqrt(2)      # slit at +a/2
    c2: complex = 1 / math.sqrt(2)      # slit at -a/2

    def __post_init__(self):
        if self.sigma0 <= 0 or self.mass <= 0 or self.hbar <= 0:
            raise ValueError("sigma0, mass and hbar must be positive")
        if abs(abs(self.c1) ** 2 + abs(self.c2) ** 2 - 1.0) > 1e-12:
            raise ValueError("slit amplitudes must satisfy |c1|^2+|c2|^2=1")

    @property
    def x1(self) -> float:
        return +self.separation / 2

    @property
    def x2(self) -> float:
        return -self.separation / 2

    @property
    def spread_rate(self) -> float:
        """b with packet scale alpha(t) = 1 + i*b*t."""
        return self.hbar / (2 * self.mass * self.sigma0 ** 2)

    @property
    def spreading_time(self) -> float:
        """Time at which a packet width has grown by sqrt(2)."""
        return 1.0 / self.spread_rate

    def sigma_t(self, t: float) -> float:
        return self.sigma0 * math.hypot(1.0, self.spread_rate * t)

    @property
    def norm_factor(self) -> float:
        overlap = math.exp(-self.separation ** 2 / (8 * self.sigma0 ** 2))
        g = 1.0 + 2.0 * (self.c1.conjugate() * self.c2).real * overlap
        return 1.0 / math.sqrt(g)

    def path_probabilities(self) -> tuple:
        """Born weights of the two slits (overlap-corrected normalization)."""
        n2 = self.norm_factor ** 2
        return (abs(self.c1) ** 2 * n2, abs(self.c2) ** 2 * n2)


def evaluate_wave(wave: AnalyticTwoSlitWave, x, t: float) -> np.ndarray:
    """Closed-form wavefunction values at positions x and time t >= 0."""
    if t < 0:
        raise ValueError("t must be >= 0")
    x = np.asarray(x, dtype=float)
    alpha = 1.0 + 1j * wave.spread_rate * t
    pref = wave.norm_factor * (2 * np.pi * wave.sigma0 ** 2) ** -0.25 / np.sqrt(alpha)
    e1 = np.exp(-(x - wave.x1) ** 2 / (4 * wave.sigma0 ** 2 * alpha))
    e2 = np.exp(-(x - wave.x2) ** 2 / (4 * wave.sigma0 ** 2 * alpha))
    return pref * (wave.c1 * e1 + wave.c2 * e2)


def wave_velocity(wave: AnalyticTwoSlitWave, x, t: float) -> np.ndarray:
    """Guidance velocity v = (hbar/m) Im(d_x psi / psi), analytic form."""
    x = np.asarray(x, dtype=float)
    alpha = 1.0 + 1j * wave.spread_rate * t
    s2 = wave.sigma0 ** 2
    d1 = x - wave.x1
    d2 = x - wave.x2
    e1 = np.exp(-d1 ** 2 / (4 * s2 * alpha))
    e2 = np.exp(-d2 ** 2 / (4 * s2 * alpha))
    num = -(wave.c1 * d1 * e1 + wave.c2 * d2 * e2)
    den = 2 * s2 * alpha * (wave.c1 * e1 + wave.c2 * e2)
    return (wave.hbar / wave.mass) * np.imag(num / den)


@dataclass
class RSFields:
    """Polar decomposition of sampled psi: amplitude R >= 0 and continuous
    action S with psi = R exp(i S / hbar)."""
    r: np.ndarray
    s: np.ndarray
    node_indices: np.ndarray  # exact zeros: phase/velocity undefined there


def _unwrap_sequential(phase: np.ndarray, threshold: float) -> np.ndarray:
    out = phase.copy()
    offset = 0.0
    for i in range(1, out.size):
        d = phase[i] - phase[i - 1]
        if d > threshold:
            offset -= 2 * np.pi
        elif d < -threshold:
            offset += 2 * np.pi
        out[i] = phase[i] + offset
    return out


def rs_decompose(psi, hbar: float = HBAR) -> RSFields:
    """R = |psi| and S = hbar * (sequentially unwrapped phase).

    Jumps beyond 0.9*2pi between neighbors are treated as branch wraps;
    genuine ~pi flips across nodes are left alone.  Exact zeros are
    reported in node_indices rather than raised.
    """
    psi = np.asarray(psi, dtype=complex)
    r = np.abs(psi)
    nodes = np.flatnonzero(r == 0.0)
    s = hbar * _unwrap_sequential(np.angle(psi), 0.9 * 2 * np.pi)
    return RSFields(r=r, s=s, node_indices=nodes)


def quantum_potential(r, dx: float, mass: float, hbar: float = HBAR,
                      threshold: float = 1e-8) -> np.ndarray:
    """Q = -hbar^2/(2m) * laplacian(R)/R by central differences.

    Entries where R falls below threshold * max(R) (and the two boundary
    samples, where the stencil is undefined) are returned as NaN markers.
    """
    r = np.asarray(r, dtype=float)
    q = np.full(r.size, np.nan)
    lap = (r[:-2] - 2 * r[1:-1] + r[2:]) / dx ** 2
    good = r[1:-1] > threshold * r.max()
    q[1:-1][good] = -(hbar ** 2 / (2 * mass)) * lap[good] / r[1:-1][good]
    return q


def velocity_field(s, dx: float, mass: float) -> np.ndarray:
    """v = (d_x S)/m with central differences (one-sided at the ends)."""
    return np.gradient(np.asarray(s, dtype=float), dx) / mass


@dataclass
class Trajectory:
    times: np.ndarray
    positions: np.ndarray
    x0: float


@dataclass
class EnsembleResult:
    times: np.ndarray
    positions: np.ndarray   # (n_particles, n_times), ordered as the inputs
    aborted: np.ndarray     # bool per particle; excluded from statistics

    @property
    def final_positions(self) -> np.ndarray:
        return self.positions[~self.aborted, -1]

    @property
    def n_aborted(self) -> int:
        return int(self.aborted.sum())


def _kernel_args(wave: AnalyticTwoSlitWave):
    return (wave.x1, wave.x2, wave.sigma0 ** 2, wave.spread_rate,
            wave.hbar / wave.mass, wave.norm_factor * wave.c1,
            wave.norm_factor * wave.c2)


def integrate_ensemble(wave: AnalyticTwoSlitWave, x0s, t_span, dt: float,
                       backend=None) -> EnsembleResult:
    """RK4-integrate many trajectories on the analytic guidance field."""
    t0, t1 = t_span
    if dt <= 0 or t1 <= t0:
        raise ValueError("need dt > 0 and an increasing time span")
    n_steps = max(1, round((t1 - t0) / dt))
    step = (t1 - t0) / n_steps
    pos, aborted = integrate_ensemble_kernel(
        np.asarray(x0s, dtype=float), t0, step, n_steps, *_kernel_args(wave),
        backend=backend)
    times = t0 + step * np.arange(n_steps + 1)
    return EnsembleResult(times=times, positions=pos.T, aborted=aborted)


def integrate_trajectory(wave: AnalyticTwoSlitWave, x0: float, t_span,
                         dt: float, backend=None) -> Trajectory:
    """Single trajectory; raises NodeProximity if |psi| collapses under it."""
    res = integrate_ensemble(wave, [x0], t_span, dt, backend=backend)
    if res.aborted[0]:
        raise NodeProximity(f"trajectory from x0={x0:g} entered a node region")
    return Trajectory(times=res.times, positions=res.positions[0], x0=x0)


def sample_initial_positions(wave: AnalyticTwoSlitWave, n: int, seed: int,
                             half_width: float | None = None,
                             n_grid: int = 20001) -> np.ndarray:
    """Draw starts from |psi(.,0)|^2, sorted ascending (handy for
    non-crossing checks)."""
    if half_width is None:
        half_width = wave.separation / 2 + 8 * wave.sigma0
    x = np.linspace(-half_width, half_width, n_grid)
    density = np.abs(evaluate_wave(wave, x, 0.0)) ** 2
    draws = sample_photon_positions(density, x[1] - x[0], x[0], n, seed)
    return np.sort(draws)


def non_crossing_check(positions: np.ndarray):
    """Verify trajectories ordered by start never change order.

    positions is (n_particles, n_times) with rows sorted by x0.  Returns
    (True, None) or (False, (time_index, pair_index)) at the first
    violation.
    """
    positions = np.asarray(positions, dtype=float)
    if positions.ndim != 2 or positions.shape[0] < 2:
        return True, None
    gaps = np.diff(positions, axis=0)
    bad = gaps <= 0
    if not bad.any():
        return True, None
    pair, when = np.unravel_index(np.argmax(bad), bad.shape)
    first_t = int(np.flatnonzero(bad.any(axis=0))[0])
    first_pair = int(np.flatnonzero(bad[:, first_t])[0])
    return False, (first_t, first_pair)


def equivariance_pvalue(wave: AnalyticTwoSlitWave, t: float, finals,
                        n_bins: int = 50, min_expected: float = 5.0) -> float:
    """Chi-square p-value of the final particle histogram against a direct
    quadrature of |psi(., t)|^2 (the independent prediction)."""
    finals = np.asarray(finals, dtype=float)
    n = finals.size
    half = wave.separation / 2 + 5 * wave.sigma_t(t)
    fine = np.linspace(-half, half, 40001)
    dens = np.abs(evaluate_wave(wave, fine, t)) ** 2
    cdf = np.concatenate([[0.0], np.cumsum((dens[1:] + dens[:-1]) / 2)])
    cdf /= cdf[-1]
    edges = np.linspace(-half, half, n_bins + 1)
    probs = np.diff(np.interp(edges, fine, cdf))
    # open-ended edge bins soak up the (tiny) tail mass
    probs[0] += cdf[0]
    probs[-1] += 1.0 - cdf[-1]
    counts, _ = np.histogram(finals, bins=edges)
    counts[0] += int(np.sum(finals < edges[0]))
    counts[-1] += int(np.sum(finals > edges[-1]))
    # merge low-expectation bins into their neighbor (standard chi-square care)
    exp_counts, obs_counts = [], []
    acc_e = acc_o = 0.0
    for e, o in zip(probs * n, counts):
        acc_e += e
        acc_o += o
        if acc_e >= min_expected:
            exp_counts.append(acc_e)
            obs_counts.append(acc_o)
            acc_e = acc_o = 0.0
    if acc_e > 0 and exp_counts:
        exp_counts[-1] += acc_e
        obs_counts[-1] += acc_o
    exp_arr = np.array(exp_counts) * (n / sum(exp_counts))
    obs_arr = np.array(obs_counts, dtype=float)
    stat = float(np.sum((obs_arr - exp_arr) ** 2 / exp_arr))
    dof = len(exp_arr) - 1
    return float(_chi2.sf(stat, dof))


def write_trajectories_csv(path, times, positions):
    """CSV export `t_s,x_m,trajectory_id`, one row per (trajectory, time)."""
    with open(path, "w") as fh:
        fh.write("t_s,x_m,trajectory_id\n")
        for tid, row in enumerate(positions):
            for t, x in zip(times, row):
                fh.write(f"{t:.17g},{x:.17g},{tid}\n")


def write_fields_csv(path, x, r, s, q, v):
    with open(path, "w") as fh:
        fh.write("x_m,R,S,Q,v\n")
        for vals in zip(x, r, s, q, v):
            fh.write(",".join(f"{val:.17g}" for val in vals) + "\n")
