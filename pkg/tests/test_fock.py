import math

import numpy as np
import pytest

from interferox import fock
from interferox.errors import CutoffExceeded, LosslessnessViolation

RT2 = 1 / math.sqrt(2)


def random_valid_coeffs(rng):
    """Random lossless pair: t = cos(eta) e^{i phi}, r = sin(eta) e^{i(phi +/- pi/2)}."""
    eta = rng.uniform(0, math.pi / 2)
    phi = rng.uniform(0, 2 * math.pi)
    sign = rng.choice([-1.0, 1.0])
    t = math.cos(eta) * np.exp(1j * phi)
    r = math.sin(eta) * np.exp(1j * (phi + sign * math.pi / 2))
    return fock.validate_coeffs(r, t)


def random_single_photon_state(rng):
    a = rng.normal(size=2) + 1j * rng.normal(size=2)
    a /= np.linalg.norm(a)
    return fock.TwoModeFockState({(1, 0): a[0], (0, 1): a[1]})


def test_validate_canonical_5050():
    bs = fock.validate_coeffs(1j * RT2, RT2)
    assert bs.reflectance == pytest.approx(0.5)
    assert bs.transmittance == pytest.approx(0.5)


def test_validate_perfect_mirror():
    bs = fock.validate_coeffs(1.0, 0.0)
    assert bs.reflectance == 1.0


def test_validate_rejects_phase_violation():
    # |R|^2+|T|^2 = 1 but RT*+TR* = 1 != 0
    with pytest.raises(LosslessnessViolation):
        fock.validate_coeffs(RT2, RT2)


def test_validate_rejects_norm_violation():
    with pytest.raises(LosslessnessViolation):
        fock.validate_coeffs(1j, 1.0)


def test_single_photon_splits_into_entangled_pair():
    bs = fock.validate_coeffs(1j * 0.6, 0.8)
    out = fock.apply_beam_splitter(fock.TwoModeFockState.single_photon(1), bs)
    assert out.amplitude(1, 0) == pytest.approx(1j * 0.6)
    assert out.amplitude(0, 1) == pytest.approx(0.8)


def test_vacuum_is_fixed_point():
    bs = fock.validate_coeffs(1j * RT2, RT2)
    out = fock.apply_beam_splitter(fock.TwoModeFockState.vacuum(), bs)
    assert out.amplitude(0, 0) == pytest.approx(1.0)
    assert out.norm() == pytest.approx(1.0)


def test_5050_probabilities():
    bs = fock.validate_coeffs(1j * RT2, RT2)
    out = fock.apply_beam_splitter(fock.TwoModeFockState.single_photon(1), bs)
    p_r, p_t, p_c = fock.detection_amplitudes(out).probabilities
    assert p_r == pytest.approx(0.5)
    assert p_t == pytest.approx(0.5)
    assert p_c == 0.0


def test_detection_amplitudes_match_coefficients():
    rng = np.random.default_rng(11)
    for _ in range(50):
        bs = random_valid_coeffs(rng)
        out = fock.apply_beam_splitter(fock.TwoModeFockState.single_photon(1), bs)
        amps = fock.detection_amplitudes(out)
        assert amps.a_r == pytest.approx(bs.r, abs=1e-14)
        assert amps.a_t == pytest.approx(bs.t, abs=1e-14)
        assert amps.a_c == 0.0  # exact anticoincidence, not merely small


def test_vacuum_detection_amplitudes_are_zero():
    amps = fock.detection_amplitudes(fock.TwoModeFockState.vacuum())
    assert amps.a_r == amps.a_t == amps.a_c == 0.0


def test_unitarity_random_states_and_splitters():
    rng = np.random.default_rng(202)
    for _ in range(300):
        bs = random_valid_coeffs(rng)
        state = random_single_photon_state(rng)
        out = fock.apply_beam_splitter(state, bs)
        assert abs(out.norm() - 1.0) < 1e-10
        amps = fock.detection_amplitudes(out)
        p_r, p_t, p_c = amps.probabilities
        assert p_c == 0.0
        assert p_r + p_t == pytest.approx(1.0, abs=1e-12)


def test_two_photon_sector_stays_unitary():
    rng = np.random.default_rng(5)
    for _ in range(20):
        bs = random_valid_coeffs(rng)
        state = fock.TwoModeFockState({(1, 1): 1.0})
        out = fock.apply_beam_splitter(state, bs)
        assert abs(out.norm() - 1.0) < 1e-10
        assert out.total_photons() == {2}


def test_cutoff_enforced_at_construction():
    with pytest.raises(CutoffExceeded):
        fock.TwoModeFockState({(2, 1): 1.0}, cutoff=2)


def test_sampling_5050_within_3sigma():
    bs = fock.validate_coeffs(1j * RT2, RT2)
    out = fock.apply_beam_splitter(fock.TwoModeFockState.single_photon(1), bs)
    n_r, n_t, n_c = fock.sample_detections(out, 10_000, seed=42)
    assert 0.485 <= n_r / 10_000 <= 0.515
    assert n_c == 0
    assert n_r + n_t == 10_000


def test_sampling_consistency_4sigma():
    rng = np.random.default_rng(17)
    shots = 20_000
    for seed in range(5):
        bs = random_valid_coeffs(rng)
        out = fock.apply_beam_splitter(fock.TwoModeFockState.single_photon(1), bs)
        p = bs.reflectance
        n_r, _, n_c = fock.sample_detections(out, shots, seed=seed)
        bound = 4 * math.sqrt(max(p * (1 - p), 1e-12) / shots)
        assert abs(n_r / shots - p) <= bound + 1e-12
        assert n_c == 0


def test_sampling_zero_shots():
    state = fock.TwoModeFockState.single_photon(1)
    assert fock.sample_detections(state, 0, seed=1) == (0, 0, 0)


def test_sampling_deterministic_per_seed():
    bs = fock.validate_coeffs(1j * 0.6, 0.8)
    out = fock.apply_beam_splitter(fock.TwoModeFockState.single_photon(1), bs)
    assert fock.sample_detections(out, 5000, seed=9) == \
        fock.sample_detections(out, 5000, seed=9)


def test_gap_contact_transmits_fully():
    geom = fock.GapGeometry(gap=0.0, wavelength=650e-9)
    assert fock.gap_transmission(geom).transmittance == pytest.approx(1.0)


def test_gap_ten_wavelengths_is_opaque():
    geom = fock.GapGeometry(gap=10 * 650e-9, wavelength=650e-9)
    assert fock.gap_transmission(geom).transmittance < 1e-6


def test_gap_one_wavelength_is_partial():
    geom = fock.GapGeometry(gap=650e-9, wavelength=650e-9)
    t2 = fock.gap_transmission(geom).transmittance
    assert 0.0 < t2 < 1.0


def test_gap_transmission_monotone_and_lossless():
    lam = 650e-9
    gaps = np.linspace(0, 3 * lam, 40)
    last = np.inf
    for g in gaps:
        coeffs = fock.gap_transmission(fock.GapGeometry(gap=g, wavelength=lam))
        # re-validates both losslessness conditions
        fock.validate_coeffs(coeffs.r, coeffs.t, tol=1e-12)
        assert coeffs.transmittance <= last + 1e-15
        last = coeffs.transmittance


def test_gap_geometry_validation():
    with pytest.raises(ValueError):
        fock.GapGeometry(gap=-1e-9, wavelength=650e-9)
    with pytest.raises(ValueError):
        fock.GapGeometry(gap=0, wavelength=650e-9, refractive_index=0.9)
    with pytest.raises(ValueError):
        # below the critical angle there is nothing to frustrate
        fock.GapGeometry(gap=0, wavelength=650e-9, incidence_angle=0.1)
