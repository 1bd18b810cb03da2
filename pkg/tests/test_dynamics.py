import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bellspin.core import (
    BELL_KINDS,
    IDENTITY,
    S1x,
    S1z,
    S1zS2z,
    S2x,
    SpinSystem,
    bell_state,
    expectation,
    fidelity,
    product_state,
    pseudo_pure,
    spin_operator,
)
from bellspin.dynamics import (
    CP_AMPLITUDE,
    change_basis,
    cp_block,
    cp_propagator,
    dhh_amplitudes,
    dhh_block,
    dhh_time,
    h_free,
    h_lab,
    h_rf,
    hard_pulse,
    is_unitary,
    matrix_exponential,
    off_sector_magnitude,
    propagate,
    pulse_propagator,
    quantum_order_projector,
    sector_block,
)

from oracles import propagator_oracle, random_density_matrix, random_hermitian, rotation_z_closed_form

SYS = SpinSystem()
J = SYS.J

# (initial x-product state, mode, target x-Bell state)
DHH_MAPPINGS = [
    ("du", "delta", "S0"),
    ("ud", "delta", "T0"),
    ("uu", "sigma", "psi_plus"),
    ("dd", "sigma", "psi_minus"),
]


def projector(psi):
    return np.outer(psi, psi.conj())


def test_h_rf_without_rf_is_coupling():
    assert np.array_equal(h_rf(SYS, 0.0, 0.0), h_free(SYS))
    assert np.allclose(h_free(SYS), J * S1zS2z)


def test_h_rf_form():
    w1, w2 = 1.3 * J, 0.4 * J
    assert np.allclose(h_rf(SYS, w1, w2), -w1 * S1x - w2 * S2x + J * S1zS2z, atol=0)


@given(st.floats(0, 10), st.floats(0, 10))
def test_delta_sigma_algebra(a, b):
    w1, w2 = dhh_amplitudes("delta", J, (a + 0.5) * J)
    assert w1 - w2 == pytest.approx(J / 2)
    assert w1 == pytest.approx(((w1 + w2) + (w1 - w2)) / 2)
    w1, w2 = dhh_amplitudes("sigma", J, min(b, 0.5) * J)
    assert w1 + w2 == pytest.approx(J / 2)


def test_zero_quantum_splitting():
    w1, w2 = dhh_amplitudes("delta", J)
    block = sector_block(h_rf(SYS, w1, w2), "x", "zero")
    ev = np.linalg.eigvalsh(block)
    assert ev[1] - ev[0] == pytest.approx(J / math.sqrt(2), rel=1e-12)


def test_h_lab_hermitian():
    H = h_lab(SYS)
    assert np.max(np.abs(H - H.conj().T)) < 1e-12 * np.max(np.abs(H))


def test_dhh_amplitudes_reject_negative():
    with pytest.raises(ValueError):
        dhh_amplitudes("sigma", J, J)  # w2 = -J/4
    with pytest.raises(ValueError):
        dhh_amplitudes("delta", J, 0.0)
    with pytest.raises(ValueError):
        dhh_amplitudes("gamma", J)


def test_propagate_zero_time(rng):
    rho = random_density_matrix(rng)
    assert np.allclose(propagate(rho, random_hermitian(rng), 0.0), rho, atol=1e-15)
    with pytest.raises(ValueError):
        propagate(rho, random_hermitian(rng), -1.0)


def test_identity_is_fixed_point(rng):
    for _ in range(10):
        out = propagate(IDENTITY / 4, random_hermitian(rng, J), rng.uniform(0, 1))
        assert np.allclose(out, IDENTITY / 4, atol=1e-15)


def test_group_property(rng):
    for _ in range(20):
        rho, H, t = random_density_matrix(rng), random_hermitian(rng, J), rng.uniform(0, 0.05)
        twice = propagate(propagate(rho, H, t / 2), H, t / 2)
        assert np.max(np.abs(twice - propagate(rho, H, t))) < 1e-10


def test_matrix_exponential_of_zero():
    assert np.allclose(matrix_exponential(np.zeros((4, 4)), 1.0), IDENTITY, atol=0)


def test_z_rotation_closed_form():
    U = matrix_exponential(2 * np.pi * S1z, 1.0)
    assert np.allclose(U, rotation_z_closed_form(2 * np.pi), atol=1e-14)
    # a 2pi turn of a spin-1/2 flips the sign of its states
    assert np.allclose(U, -IDENTITY, atol=1e-14)


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**32 - 1), st.floats(0, 0.1))
def test_matrix_exponential_against_series_oracle(seed, t):
    rng = np.random.default_rng(seed)
    H = random_hermitian(rng, J)
    U = matrix_exponential(H, t)
    assert np.max(np.abs(U - propagator_oracle(H, t))) < 1e-10
    assert is_unitary(U)
    assert abs(abs(np.linalg.det(U)) - 1) < 1e-10


def test_matrix_exponential_rejects_non_hermitian():
    with pytest.raises(ValueError):
        matrix_exponential(np.triu(np.ones((4, 4))), 1.0)


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_purity_and_spectrum_conserved(seed):
    rng = np.random.default_rng(seed)
    rho = random_density_matrix(rng)
    out = propagate(rho, random_hermitian(rng, J), rng.uniform(0, 0.1))
    assert abs(np.trace(out @ out) - np.trace(rho @ rho)) < 1e-10
    assert np.allclose(np.linalg.eigvalsh(out), np.linalg.eigvalsh(rho), atol=1e-10)


def test_hard_pulse_z_to_x(rng):
    rho = IDENTITY / 4 + 0.3 * S1z + 0.1 * spin_operator(2, "z")
    out = hard_pulse(rho, 1, np.pi / 2, "y")
    assert expectation(out, S1x) == pytest.approx(expectation(rho, S1z), abs=1e-14)
    r = random_density_matrix(rng)
    assert np.allclose(hard_pulse(r, 2, 0.0, "x"), r)


def test_hard_pulse_phases_are_inverse(rng):
    r = random_density_matrix(rng)
    for ax, inv in (("x", "-x"), ("y", "-y")):
        assert np.allclose(hard_pulse(hard_pulse(r, 1, 0.7, ax), 1, 0.7, inv), r, atol=1e-14)
    assert np.allclose(pulse_propagator(1, 0.7, "-y"), pulse_propagator(1, -0.7, "y"))


def test_pulses_rotate_t0_x_to_z():
    rho = projector(bell_state("T0", "x"))
    rho = hard_pulse(hard_pulse(rho, 1, -np.pi / 2, "y"), 2, -np.pi / 2, "y")
    assert fidelity(rho, bell_state("T0", "z")) == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("start, mode, target", DHH_MAPPINGS)
def test_dhh_mappings(start, mode, target):
    out = dhh_block(projector(product_state(start, "x")), mode, SYS)
    assert fidelity(out, bell_state(target, "x")) >= 1 - 1e-9


@pytest.mark.parametrize("start, mode, target", DHH_MAPPINGS)
def test_dhh_mappings_with_series_oracle(start, mode, target):
    w1, w2 = dhh_amplitudes(mode, J)
    U = propagator_oracle(h_rf(SYS, -w1, -w2), dhh_time(J))
    psi = U @ product_state(start, "x")
    assert abs(np.vdot(bell_state(target, "x"), psi)) ** 2 >= 1 - 1e-9


def test_plus_x_phase_swaps_labels():
    out = dhh_block(projector(product_state("du", "x")), "delta", SYS, phase="x")
    assert fidelity(out, bell_state("T0", "x")) >= 1 - 1e-9


@pytest.mark.parametrize("sigma", [2.0, 5.0, 10.0])
def test_dhh_delta_independent_of_sigma(sigma):
    rho = projector(product_state("ud", "x"))
    ref = dhh_block(rho, "delta", SYS)
    out = dhh_block(rho, "delta", SYS, free_param=sigma * J)
    assert abs(fidelity(out, bell_state("T0", "x")) - fidelity(ref, bell_state("T0", "x"))) < 1e-9


@pytest.mark.parametrize("delta", [0.0, 0.25, -0.25])
def test_dhh_sigma_independent_of_delta(delta):
    rho = projector(product_state("uu", "x"))
    out = dhh_block(rho, "sigma", SYS, free_param=delta * J)
    assert fidelity(out, bell_state("psi_plus", "x")) >= 1 - 1e-9


def test_dhh_timing_is_optimal():
    rho = projector(product_state("du", "x"))
    ts = dhh_time(J) * np.linspace(0.8, 1.2, 21)
    fids = [fidelity(dhh_block(rho, "delta", SYS, t=t), bell_state("S0", "x")) for t in ts]
    assert int(np.argmax(fids)) == 10


@settings(max_examples=100, deadline=None)
@given(st.floats(-20, 20), st.floats(-20, 20), st.floats(0, 0.1))
def test_sector_preservation(a, b, t):
    U = matrix_exponential(h_rf(SYS, a * J, b * J), t)
    assert off_sector_magnitude(U, "x") < 1e-12


def test_cp_double_quantum_turns_full_circle():
    block = sector_block(cp_propagator(SYS), "x", "double")
    phase = block[0, 0]
    assert abs(abs(phase) - 1) < 1e-9
    assert np.max(np.abs(block - phase * np.eye(2))) < 1e-9


def test_cp_amplitude_value():
    assert CP_AMPLITUDE == pytest.approx(math.sqrt(15) / 4)


def test_cp_equalizes_x_polarizations():
    e1, e2 = SYS.eps1, SYS.eps2
    rho = IDENTITY / 4 + e1 * S1x + e2 * S2x
    out = cp_block(rho, SYS)
    assert abs(expectation(out, S1x) - (e1 + e2) / 2) < 1e-9
    assert abs(expectation(out, S2x) - (e1 + e2) / 2) < 1e-9
    # remainder lives in the x zero-quantum sector
    dev = out - IDENTITY / 4 - (e1 + e2) / 2 * (S1x + S2x)
    zq = quantum_order_projector(dev, "x", "zero")
    assert np.linalg.norm(zq) > 1e-3 * (e1 - e2)
    assert np.allclose(dev, zq, atol=1e-15)


def test_cp_leaves_identity():
    assert np.max(np.abs(cp_block(IDENTITY / 4, SYS) - IDENTITY / 4)) < 1e-15


def test_sector_projectors():
    S0 = projector(bell_state("S0", "x"))
    assert np.allclose(quantum_order_projector(S0, "x", "zero"), S0, atol=1e-15)
    assert np.allclose(quantum_order_projector(S0, "x", "double"), 0, atol=1e-15)
    pp = projector(bell_state("psi_plus", "x"))
    assert np.allclose(quantum_order_projector(pp, "x", "double"), pp, atol=1e-15)


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_sector_projectors_complete_on_block_diagonal(seed):
    rng = np.random.default_rng(seed)
    rho = random_density_matrix(rng)
    # block-diagonalize in the x basis by evolving under a sector-preserving projection
    M = change_basis(rho, "x")
    M[np.ix_([1, 2], [0, 3])] = 0
    M[np.ix_([0, 3], [1, 2])] = 0
    V = np.column_stack([product_state(s, "x") for s in ("uu", "ud", "du", "dd")])
    block = V @ M @ V.conj().T
    total = quantum_order_projector(block, "x", "zero") + quantum_order_projector(block, "x", "double")
    assert np.allclose(total, block, atol=1e-14)


def test_dhh_with_pseudo_pure_input():
    c = 1e-4
    out = dhh_block(pseudo_pure(product_state("dd", "x"), c), "sigma", SYS)
    expected = pseudo_pure(bell_state("psi_minus", "x"), c)
    assert np.max(np.abs(out - expected)) < 1e-15
