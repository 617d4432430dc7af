"""Scenario orchestration for the four bench experiments.

Each runner wires the physics modules together with the published bench
values as defaults, writes CSV/JSON artifacts into an output directory,
and returns a ScenarioResult whose metrics carry every number the
corresponding argument rests on.  All runs are reproducible bit-for-bit
from (config, seed).
"""

import dataclasses
import json
import math
import os
from dataclasses import dataclass, field
from datetime import datetime, timezone

import numpy as np

from . import bohm as bohm_mod
from . import fock, measurement, wavefield
from .duality import DualityReport, PathDistribution, distinguishability_trace
from .errors import MissingData, NoExtrema

MANIFEST_TIMESTAMP_KEY = "generated_at"  # the one field excluded from diffs


# ------------------------------------------------------------------- configs

@dataclass(frozen=True)
class GhaConfig:
    """Prism-gap single-photon run; gaps in meters."""
    gaps: tuple = tuple(np.linspace(0.0, 2.0, 10) * 650e-9)
    wavelength: float = 650e-9
    refractive_index: float = 1.5
    incidence_angle: float = math.pi / 4
    shots: int = 100_000
    seed: int = 42


@dataclass(frozen=True)
class BggpConfig:
    """Birefringent-crystal single-photon run (ordinary/extraordinary)."""
    theta: float = math.pi / 4   # input polarization angle, rad
    shots: int = 100_000
    seed: int = 42


@dataclass(frozen=True)
class AfsharConfig:
    """Two-pinhole bench: 650 nm, 250 um pinholes 2 mm apart, fringe plane
    at 4 m, 3 cm lens at 4.2 m imaging onto a plane 1.38 m behind it."""
    wavelength: float = 650e-9
    pinhole_width: float = 250e-6
    pinhole_separation: float = 2000e-6
    z_fringe: float = 4.0
    z_lens: float = 4.2
    z_image: float = 1.38
    lens_diameter: float = 0.03
    focal_length: float = 0.0       # 0 -> derived from the imaging condition
    wire_width: float = 100e-6
    n_wires: int = 6
    grid_samples: int = 2 ** 14
    grid_span: float = 0.040
    pad_factor: int = 16
    central_fringes: float = 3.2    # extrema region, in fringe spacings
    shots: int = 100_000
    seed: int = 42

    @property
    def focal(self) -> float:
        if self.focal_length > 0:
            return self.focal_length
        return 1.0 / (1.0 / self.z_lens + 1.0 / self.z_image)

    @property
    def fringe_spacing(self) -> float:
        return self.wavelength * self.z_fringe / self.pinhole_separation

    @property
    def dx(self) -> float:
        return self.grid_span / self.grid_samples

    @property
    def origin(self) -> float:
        return -self.grid_span / 2


@dataclass(frozen=True)
class BohmConfig:
    separation: float = 100e-6
    sigma0: float = 10e-6
    mass: float = bohm_mod.ELECTRON_MASS
    hbar: float = bohm_mod.HBAR
    v_z: float = 1e5
    p_slit1: float = 0.5            # |c1|^2
    t_final: float = 0.0            # 0 -> 6 spreading times
    n_steps: int = 600
    n_particles: int = 2000
    seed: int = 42
    export_stride: int = 10
    backend: str = ""               # "" -> INTERFEROX_BACKEND / auto

    def wave(self) -> bohm_mod.AnalyticTwoSlitWave:
        return bohm_mod.AnalyticTwoSlitWave(
            separation=self.separation, sigma0=self.sigma0, mass=self.mass,
            hbar=self.hbar, v_z=self.v_z,
            c1=math.sqrt(self.p_slit1), c2=math.sqrt(1 - self.p_slit1))

    def horizon(self) -> float:
        if self.t_final > 0:
            return self.t_final
        return 6.0 * self.wave().spreading_time


@dataclass(frozen=True)
class MeasureConfig:
    """Impulsive pointer run (spin-1 triplet by default) and weak-value case."""
    eigenvalues: tuple = (-1.0, 0.0, 1.0)
    probabilities: tuple = (1 / 3, 1 / 3, 1 / 3)
    pointer_width: float = 1.0
    coupling: float = 1.0
    duration: float = 50.0
    kappa: float = 5.0
    d_max: int = 20
    chi: float = math.pi / 4 - 0.1  # weak-value post-selection angle
    shots: int = 10_000
    seed: int = 42

    def run(self) -> measurement.ImpulsiveRun:
        amps = tuple(math.sqrt(p) for p in self.probabilities)
        return measurement.ImpulsiveRun(
            spectrum=measurement.ObservableSpectrum(self.eigenvalues, amps),
            packet=measurement.PointerPacket(0.0, self.pointer_width),
            coupling=self.coupling, duration=self.duration)


@dataclass
class ScenarioResult:
    scenario: str
    params: dict
    metrics: dict
    files: list


# ------------------------------------------------------------------- helpers

def _ensure_dir(path):
    os.makedirs(path, exist_ok=True)
    return path


def _check_finite(metrics, prefix=""):
    for key, val in metrics.items():
        if isinstance(val, dict):
            _check_finite(val, prefix=f"{prefix}{key}.")
        elif isinstance(val, (list, tuple)):
            arr = np.asarray(val, dtype=float)
            if arr.size and not np.all(np.isfinite(arr)):
                raise ValueError(f"metric {prefix}{key} is not finite")
        elif isinstance(val, float) and not math.isfinite(val):
            raise ValueError(f"metric {prefix}{key} is not finite")


def write_json(path, payload):
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def save_manifest(result: ScenarioResult, out_dir) -> str:
    _check_finite(result.metrics)
    path = os.path.join(out_dir, "manifest.json")
    write_json(path, {
        "scenario": result.scenario,
        "params": result.params,
        "metrics": result.metrics,
        "files": result.files,
        MANIFEST_TIMESTAMP_KEY: datetime.now(timezone.utc).isoformat(),
    })
    return path


def _params_dict(cfg) -> dict:
    out = {}
    for key, val in dataclasses.asdict(cfg).items():
        if isinstance(val, tuple):
            out[key] = list(val)
        else:
            out[key] = val
    return out


@dataclass
class FringeStats:
    """Visibility bookkeeping over a fringe region.

    Minima count as fringe minima only when the modulation against their
    neighboring maxima exceeds min_modulation; a smooth envelope (single
    open pinhole) then reports zero visibility instead of its slope.
    """
    v: float
    i_max: float | None
    i_min: float | None
    minima_positions: np.ndarray
    minima_values: np.ndarray
    maxima_positions: np.ndarray
    maxima_values: np.ndarray


def fringe_statistics(profile, dx, origin, region,
                      min_modulation: float = 0.05) -> FringeStats:
    empty = np.array([])
    try:
        ext = wavefield.find_extrema(profile, dx, origin, region=region)
    except NoExtrema:
        return FringeStats(0.0, None, None, empty, empty, empty, empty)
    if ext.maxima_positions.size == 0:
        return FringeStats(0.0, None, ext.i_min, ext.minima_positions,
                           ext.minima_values, empty, empty)
    i_max = float(ext.maxima_values.max())
    keep_pos, keep_val = [], []
    mpos = ext.maxima_positions
    mval = ext.maxima_values
    for pos, val in zip(ext.minima_positions, ext.minima_values):
        neighbors = []
        left = mpos < pos
        if left.any():
            neighbors.append(mval[left][np.argmax(mpos[left])])
        right = mpos > pos
        if right.any():
            neighbors.append(mval[right][np.argmin(mpos[right])])
        if not neighbors:
            continue
        ref = float(np.mean(neighbors))
        if ref + val > 0 and (ref - val) / (ref + val) > min_modulation:
            keep_pos.append(pos)
            keep_val.append(val)
    if not keep_pos:
        return FringeStats(0.0, i_max, None, empty, empty, mpos, mval)
    keep_pos = np.array(keep_pos)
    keep_val = np.array(keep_val)
    i_min = float(keep_val.min())
    v = (i_max - i_min) / (i_max + i_min)
    return FringeStats(v, i_max, i_min, keep_pos, keep_val, mpos, mval)


# ----------------------------------------------------------------------- GHA

def run_gha(config: GhaConfig, out_dir) -> ScenarioResult:
    """Sweep the prism gap; tally single-photon counts per detector."""
    _ensure_dir(out_dir)
    rows = []
    total_coinc = 0
    for i, gap in enumerate(config.gaps):
        geom = fock.GapGeometry(gap=gap, wavelength=config.wavelength,
                                refractive_index=config.refractive_index,
                                incidence_angle=config.incidence_angle)
        coeffs = fock.gap_transmission(geom)
        state = fock.apply_beam_splitter(
            fock.TwoModeFockState.single_photon(port=1), coeffs)
        n_r, n_t, n_c = fock.sample_detections(state, config.shots,
                                               config.seed + i)
        total_coinc += n_c
        rows.append((gap, coeffs.transmittance, coeffs.reflectance,
                     n_r, n_t, n_c))
    csv_path = os.path.join(out_dir, "gha_counts.csv")
    with open(csv_path, "w") as fh:
        fh.write("gap_m,transmittance,reflectance,"
                 "n_reflected,n_transmitted,n_coincidence\n")
        for gap, t2, r2, n_r, n_t, n_c in rows:
            fh.write(f"{gap:.17g},{t2:.17g},{r2:.17g},{n_r},{n_t},{n_c}\n")
    metrics = {
        "n_settings": len(rows),
        "shots_per_setting": config.shots,
        "total_coincidences": total_coinc,
        "transmittance_at_zero_gap": rows[0][1] if config.gaps[0] == 0 else None,
        "transmittances": [r[1] for r in rows],
    }
    metrics = {k: v for k, v in metrics.items() if v is not None}
    result = ScenarioResult("gha", _params_dict(config), metrics, [csv_path])
    result.files.append(save_manifest(result, out_dir))
    return result


# ---------------------------------------------------------------------- BGGP

def run_bggp(config: BggpConfig, out_dir) -> ScenarioResult:
    """Calcite birefringence as a two-output split (cos t, sin t) of the
    polarization qubit; anticoincidence logic identical to the gap bench."""
    _ensure_dir(out_dir)
    if not 0 <= config.theta < math.pi:
        raise ValueError("polarization angle must lie in [0, pi)")
    amp_o = math.cos(config.theta)
    amp_e = math.sin(config.theta)
    state = fock.TwoModeFockState({(1, 0): amp_o, (0, 1): amp_e})
    n_o, n_e, n_c = fock.sample_detections(state, config.shots, config.seed)
    csv_path = os.path.join(out_dir, "bggp_counts.csv")
    with open(csv_path, "w") as fh:
        fh.write("theta_rad,p_ordinary,p_extraordinary,"
                 "n_ordinary,n_extraordinary,n_coincidence\n")
        fh.write(f"{config.theta:.17g},{amp_o**2:.17g},{amp_e**2:.17g},"
                 f"{n_o},{n_e},{n_c}\n")
    metrics = {
        "p_ordinary": amp_o ** 2,
        "p_extraordinary": amp_e ** 2,
        "freq_ordinary": n_o / config.shots if config.shots else 0.0,
        "coincidences": n_c,
        "shots": config.shots,
    }
    result = ScenarioResult("bggp", _params_dict(config), metrics, [csv_path])
    result.files.append(save_manifest(result, out_dir))
    return result


# -------------------------------------------------------------------- Afshar

def _aperture_field(config: AfsharConfig, centers) -> wavefield.ScalarField:
    spec = wavefield.ApertureSpec(centers=tuple(centers),
                                  width=config.pinhole_width)
    return wavefield.make_aperture_field(
        spec, config.grid_samples, config.dx, config.origin, config.wavelength)


def _both_centers(config: AfsharConfig):
    return (+config.pinhole_separation / 2, -config.pinhole_separation / 2)


def _fringe_plane(config: AfsharConfig, centers):
    field = wavefield.propagate(_aperture_field(config, centers),
                                config.z_fringe, pad_factor=config.pad_factor)
    profile = wavefield.intensity(field)
    half = config.central_fringes * config.fringe_spacing
    stats = fringe_statistics(profile, config.dx, config.origin, (-half, half))
    return field, profile, stats


def measured_wire_grid(config: AfsharConfig) -> wavefield.WireGrid:
    """Wire positions from the simulated fringe measurement itself (the
    pipeline consumes its own dark-fringe positions, not analytic ones)."""
    _, _, stats = _fringe_plane(config, _both_centers(config))
    pos = stats.minima_positions
    if pos.size < config.n_wires:
        raise MissingData(f"found only {pos.size} dark fringes for "
                          f"{config.n_wires} wires")
    order = np.argsort(np.abs(pos))
    chosen = np.sort(pos[order][:config.n_wires])
    return wavefield.WireGrid(tuple(chosen), config.wire_width)


def _image_plane(config: AfsharConfig, centers, grid=None):
    """Carry a pinhole field to the image plane, optionally through the
    wire grid at the fringe plane."""
    lens = wavefield.ThinLens(config.focal, config.lens_diameter)
    field = _aperture_field(config, centers)
    losses = {}
    if grid is None:
        field = wavefield.propagate(field, config.z_lens,
                                    pad_factor=config.pad_factor)
    else:
        field = wavefield.propagate(field, config.z_fringe,
                                    pad_factor=config.pad_factor)
        before = wavefield.total_flux(field)
        field = wavefield.apply_mask(field, grid)
        after = wavefield.total_flux(field)
        losses["mask_loss"] = (before - after) / before
        field = wavefield.propagate(field, config.z_lens - config.z_fringe,
                                    pad_factor=config.pad_factor)
    field = wavefield.apply_lens(field, lens)
    field = wavefield.propagate(field, config.z_image,
                                pad_factor=config.pad_factor)
    return field, losses


def _normalized(profile, dx):
    total = float(np.sum(profile) * dx)
    return profile / total


def _image_peak_separation(config: AfsharConfig, profile) -> float:
    ext = wavefield.find_extrema(profile, config.dx, config.origin,
                                 region=(-1.5e-3, 1.5e-3))
    top = np.argsort(ext.maxima_values)[-2:]
    return float(abs(np.diff(np.sort(ext.maxima_positions[top]))[0]))


def run_afshar(stage, config: AfsharConfig, out_dir) -> ScenarioResult:
    """Stages: 1 fringe metrology, 2 open imaging control, 3 grid-and-lens
    run with a one-pinhole control, 3a photon-count detectors at the
    image plane."""
    stage = str(stage)
    if stage not in ("1", "2", "3", "3a"):
        raise ValueError(f"unknown stage {stage!r}")
    _ensure_dir(out_dir)
    both = _both_centers(config)
    p2_only = (both[1],)       # pinhole 1 closed
    p1_only = (both[0],)
    x = config.origin + config.dx * np.arange(config.grid_samples)
    files = []
    metrics = {}

    def save_profile(name, profile):
        path = os.path.join(out_dir, name)
        wavefield.write_profile_csv(path, x, profile)
        files.append(path)

    if stage == "1":
        _, profile, stats = _fringe_plane(config, both)
        save_profile("sigma1_profile.csv", profile)
        minima_path = os.path.join(out_dir, "fringe_minima.csv")
        with open(minima_path, "w") as fh:
            fh.write("x_m\n")
            for pos in stats.minima_positions:
                fh.write(f"{pos:.17g}\n")
        files.append(minima_path)
        spacing = np.diff(np.sort(stats.minima_positions))
        expected = config.fringe_spacing
        offsets = [abs(p - (round(p / expected - 0.5) + 0.5) * expected)
                   for p in stats.minima_positions]
        metrics.update({
            "visibility": stats.v,
            "i_max": stats.i_max,
            "i_min": stats.i_min,
            "n_minima": int(stats.minima_positions.size),
            "minima_positions_m": stats.minima_positions.tolist(),
            "mean_minima_spacing_m": float(spacing.mean()),
            "expected_spacing_m": expected,
            "max_half_integer_offset_m": float(max(offsets)),
        })
        result = ScenarioResult("afshar1", _params_dict(config), metrics, files)
        result.files.append(save_manifest(result, out_dir))
        return result

    if stage == "2":
        img, _ = _image_plane(config, both)
        img_p1, _ = _image_plane(config, p1_only)
        img_p2, _ = _image_plane(config, p2_only)
        prof = wavefield.intensity(img)
        prof1 = wavefield.intensity(img_p1)
        prof2 = wavefield.intensity(img_p2)
        save_profile("image_profile.csv", prof)
        save_profile("image_pinhole1.csv", prof1)
        save_profile("image_pinhole2.csv", prof2)
        mag = config.z_image / config.z_lens
        metrics.update({
            "focal_length_m": config.focal,
            "image_flux": wavefield.total_flux(img),
            "image_flux_pinhole1": wavefield.total_flux(img_p1),
            "image_flux_pinhole2": wavefield.total_flux(img_p2),
            "image_peak_separation_m": _image_peak_separation(config, prof),
            "expected_separation_m": mag * config.pinhole_separation,
            "magnification": mag,
            "d_trace": distinguishability_trace(
                _normalized(prof1, config.dx), _normalized(prof2, config.dx),
                config.dx),
        })
        result = ScenarioResult("afshar2", _params_dict(config), metrics, files)
        result.files.append(save_manifest(result, out_dir))
        return result

    # stages 3 and 3a share the full grid-and-lens pipeline
    _, sigma1_profile, stats = _fringe_plane(config, both)
    grid = measured_wire_grid(config)
    save_profile("sigma1_profile.csv", sigma1_profile)

    img_ref, _ = _image_plane(config, both)
    img_grid, losses_two = _image_plane(config, both, grid=grid)
    ref_prof = wavefield.intensity(img_ref)
    grid_prof = wavefield.intensity(img_grid)
    save_profile("image_ref_profile.csv", ref_prof)
    save_profile("image_grid_profile.csv", grid_prof)

    # one-pinhole control: pinhole 1 closed, same grid in place
    ctrl_ref, _ = _image_plane(config, p2_only)
    ctrl_grid, losses_one = _image_plane(config, p2_only, grid=grid)
    _, ctrl_sigma1, ctrl_stats = _fringe_plane(config, p2_only)

    # clean single-pinhole images: the imaging channel's which-path signals
    img_p1, _ = _image_plane(config, p1_only)
    p1_prof = wavefield.intensity(img_p1)
    p2_prof = wavefield.intensity(ctrl_ref)
    save_profile("image_pinhole1.csv", p1_prof)
    save_profile("image_pinhole2.csv", p2_prof)

    flux_ref = wavefield.total_flux(img_ref)
    flux_grid = wavefield.total_flux(img_grid)
    l1 = float(np.sum(np.abs(grid_prof - ref_prof))
               / np.sum(ref_prof))

    ap_1 = wavefield.total_flux(_aperture_field(config, p1_only))
    ap_2 = wavefield.total_flux(_aperture_field(config, p2_only))
    path = PathDistribution((ap_1 / (ap_1 + ap_2), ap_2 / (ap_1 + ap_2)))
    d_trace = distinguishability_trace(
        _normalized(p1_prof, config.dx), _normalized(p2_prof, config.dx),
        config.dx)
    report = DualityReport.build(v=stats.v, path=path, d_trace=d_trace)
    control_report = DualityReport.build(
        v=ctrl_stats.v, path=PathDistribution((0.0, 1.0)), d_trace=d_trace)

    metrics.update({
        "visibility": stats.v,
        "wire_positions_m": list(grid.wire_centers),
        "wire_width_m": config.wire_width,
        "mask_loss_two_pinhole": losses_two["mask_loss"],
        "mask_loss_one_pinhole": losses_one["mask_loss"],
        "flux_ratio_two_pinhole": flux_grid / flux_ref,
        "flux_ratio_one_pinhole": (wavefield.total_flux(ctrl_grid)
                                   / wavefield.total_flux(ctrl_ref)),
        "image_l1_distortion": l1,
        "d_trace": d_trace,
        "path_probabilities": list(path.probabilities),
        "duality": report.to_json(),
        "duality_control": control_report.to_json(),
    })
    duality_path = os.path.join(out_dir, "duality.json")
    write_json(duality_path, {"main": report.to_json(),
                              "one_pinhole_control": control_report.to_json()})
    files.append(duality_path)

    if stage == "3a":
        # mirror-separated ideal counters, split at the image midpoint
        samples = wavefield.sample_photon_positions(
            grid_prof, config.dx, config.origin, config.shots, config.seed)
        sample_path = os.path.join(out_dir, "photon_samples.csv")
        wavefield.write_samples_csv(sample_path, samples)
        files.append(sample_path)
        n_det1 = int(np.sum(samples < 0.0))   # image of pinhole 1 (inverted)
        sigma1_samples = wavefield.sample_photon_positions(
            sigma1_profile, config.dx, config.origin, config.shots,
            config.seed + 1)
        on_wires = np.zeros(sigma1_samples.size, dtype=bool)
        for c in grid.wire_centers:
            on_wires |= np.abs(sigma1_samples - c) <= config.wire_width / 2
        metrics.update({
            "shots": config.shots,
            "counts_detector1": n_det1,
            "counts_detector2": int(config.shots - n_det1),
            "frac_detector1": n_det1 / config.shots,
            "wire_support_fraction": float(on_wires.mean()),
        })

    name = "afshar3a" if stage == "3a" else "afshar3"
    result = ScenarioResult(name, _params_dict(config), metrics, files)
    result.files.append(save_manifest(result, out_dir))
    return result


def duality_summary(result) -> DualityReport:
    """Rebuild the duality report from a ScenarioResult or manifest dict."""
    metrics = result.metrics if isinstance(result, ScenarioResult) \
        else result.get("metrics", {})
    needed = ("visibility", "d_trace", "path_probabilities")
    if any(k not in metrics for k in needed):
        raise MissingData(
            "scenario lacks fringe and image data; run afshar stage 3 or 3a")
    return DualityReport.build(
        v=metrics["visibility"],
        path=PathDistribution(tuple(metrics["path_probabilities"])),
        d_trace=metrics["d_trace"])


# ---------------------------------------------------------------------- Bohm

def run_bohm(config: BohmConfig, out_dir) -> ScenarioResult:
    """Trajectory ensemble: equivariance, non-crossing, axis invariance."""
    _ensure_dir(out_dir)
    wave = config.wave()
    horizon = config.horizon()
    dt = horizon / config.n_steps
    x0s = bohm_mod.sample_initial_positions(wave, config.n_particles,
                                            config.seed)
    backend = config.backend or None
    ens = bohm_mod.integrate_ensemble(wave, x0s, (0.0, horizon), dt,
                                      backend=backend)
    ok, violation = bohm_mod.non_crossing_check(
        ens.positions[~ens.aborted])
    pval = bohm_mod.equivariance_pvalue(wave, horizon, ens.final_positions)

    axis = bohm_mod.integrate_trajectory(wave, 0.0, (0.0, horizon), dt,
                                         backend=backend) \
        if abs(wave.c1 - wave.c2) < 1e-15 else None

    traj_path = os.path.join(out_dir, "trajectories.csv")
    stride = max(1, config.export_stride)
    bohm_mod.write_trajectories_csv(traj_path, ens.times[::stride],
                                    ens.positions[:, ::stride])
    files = [traj_path]

    half = wave.separation / 2 + 4 * wave.sigma_t(horizon)
    grid = np.linspace(-half, half, 2048)
    psi = bohm_mod.evaluate_wave(wave, grid, horizon)
    rs = bohm_mod.rs_decompose(psi, wave.hbar)
    q = bohm_mod.quantum_potential(rs.r, grid[1] - grid[0], wave.mass,
                                   wave.hbar)
    v = bohm_mod.velocity_field(rs.s, grid[1] - grid[0], wave.mass)
    fields_path = os.path.join(out_dir, "fields.csv")
    bohm_mod.write_fields_csv(fields_path, grid, rs.r, rs.s, q, v)
    files.append(fields_path)

    metrics = {
        "n_particles": config.n_particles,
        "n_steps": config.n_steps,
        "t_final_s": horizon,
        "backend": config.backend or "auto",
        "chi2_pvalue": pval,
        "non_crossing": bool(ok),
        "n_aborted": ens.n_aborted,
    }
    if axis is not None:
        metrics["axis_max_drift_m"] = float(np.max(np.abs(axis.positions)))
    result = ScenarioResult("bohm", _params_dict(config), metrics, files)
    result.files.append(save_manifest(result, out_dir))
    return result


# --------------------------------------------------------------- measurement

def run_measure_impulsive(config: MeasureConfig, out_dir) -> ScenarioResult:
    _ensure_dir(out_dir)
    run = config.run()
    report = measurement.run_report(run, config.shots, config.seed,
                                    kappa=config.kappa)
    t_sep = report["separation_time_s"]
    single = measurement.packet_overlap(run, 0, len(config.eigenvalues) - 1,
                                        t_sep).real
    report["dof_suppression"] = [
        {"d": d, "overlap": measurement.multi_dof_overlap(
            run, 0, len(config.eigenvalues) - 1, t_sep, d)}
        for d in range(1, config.d_max + 1)]
    report["single_overlap_at_separation"] = single
    path = os.path.join(out_dir, "impulsive_report.json")
    write_json(path, report)
    metrics = {
        "separation_time_s": t_sep,
        "reversal_fidelity": report["reversal_fidelity"],
        "frequencies": [b["frequency"] for b in report["branches"]],
        "probabilities": [b["probability"] for b in report["branches"]],
    }
    result = ScenarioResult("measure_impulsive", _params_dict(config),
                            metrics, [path])
    result.files.append(save_manifest(result, out_dir))
    return result


def run_measure_weak(config: MeasureConfig, out_dir) -> ScenarioResult:
    _ensure_dir(out_dir)
    chi = config.chi
    setup = measurement.WeakMeasurementSetup(
        pre_state=np.array([1.0, 1.0]) / math.sqrt(2),
        post_state=np.array([math.cos(chi), -math.sin(chi)]),
        operator=np.diag([1.0, -1.0]))
    value = measurement.weak_value(setup)
    path = os.path.join(out_dir, "weak_report.json")
    write_json(path, {
        "chi": chi,
        "weak_value_re": value.real,
        "weak_value_im": value.imag,
        "eigenvalue_range": [-1.0, 1.0],
        "anomalous": bool(abs(value.real) > 1.0),
    })
    metrics = {"weak_value_re": value.real, "weak_value_im": value.imag,
               "chi": chi}
    result = ScenarioResult("measure_weak", _params_dict(config), metrics,
                            [path])
    result.files.append(save_manifest(result, out_dir))
    return result
