import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from quditkit._linalg import unitary_defect
from quditkit.errors import InvalidState, ShapeMismatch, StepTooLarge
from quditkit.quantum_dynamics import (
    LindbladModel,
    coherence_decay_model,
    coherence_transfer_fidelity,
    cp_map,
    fidelity,
    lindblad_propagate,
    lindblad_trajectory,
    matrix_exponential,
    propagate_unitary,
    two_level_coherence,
    unitary_superoperator,
    unvec,
    vec,
)
from quditkit.spin_algebra import angular_momentum_ops


def taylor_expm(a, terms=60):
    """Scaled-and-squared Taylor series, independent of scipy."""
    norm = np.abs(a).sum(axis=1).max()
    squarings = max(0, int(np.ceil(np.log2(max(norm, 1e-300)))) + 1)
    b = a / 2 ** squarings
    out = np.eye(a.shape[0], dtype=complex)
    term = np.eye(a.shape[0], dtype=complex)
    for n in range(1, terms):
        term = term @ b / n
        out = out + term
    for _ in range(squarings):
        out = out @ out
    return out


def random_hermitian(rng, d, scale=1.0):
    a = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    return scale * (a + a.conj().T) / 2


def random_density(rng, d):
    a = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    rho = a @ a.conj().T
    return rho / np.trace(rho)


def random_model(rng, d, njumps=2, rate=0.3):
    jumps = [(rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d)), rate * rng.uniform(0.2, 1.0))
             for _ in range(njumps)]
    return LindbladModel(random_hermitian(rng, d), jumps)


def test_expm_identity_and_pauli():
    np.testing.assert_allclose(matrix_exponential(np.zeros((3, 3))), np.eye(3))
    jx = angular_momentum_ops(1)[0]
    np.testing.assert_allclose(matrix_exponential(-1j * np.pi * jx), -1j * np.array([[0, 1], [1, 0]]),
                               atol=1e-14)


def test_expm_against_taylor_oracle():
    rng = np.random.default_rng(11)
    for _ in range(30):
        d = rng.integers(2, 7)
        a = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
        a /= np.linalg.norm(a, 2)
        assert np.max(np.abs(matrix_exponential(a) - taylor_expm(a))) <= 1e-12


def test_expm_of_skew_hermitian_is_unitary():
    rng = np.random.default_rng(2)
    u = matrix_exponential(-1j * random_hermitian(rng, 6, 3.0))
    assert unitary_defect(u) <= 1e-10


def test_expm_rejects_non_square():
    with pytest.raises(ShapeMismatch):
        matrix_exponential(np.zeros((2, 3)))


def test_single_step_jz_two_pi():
    jz = angular_momentum_ops(1)[2]
    np.testing.assert_allclose(propagate_unitary([(jz, 2 * np.pi)]), -np.eye(2), atol=1e-14)


def test_commuting_steps_merge():
    jz = angular_momentum_ops(3)[2]
    a = propagate_unitary([(jz, 0.3), (2 * jz, 0.5)])
    b = propagate_unitary([(jz, 1.3)])
    np.testing.assert_allclose(a, b, atol=1e-13)


def test_long_random_schedule_stays_unitary():
    rng = np.random.default_rng(5)
    steps = [(random_hermitian(rng, 5), rng.uniform(0.01, 0.2)) for _ in range(500)]
    assert unitary_defect(propagate_unitary(steps)) <= 1e-9


def test_schedule_composition_order():
    rng = np.random.default_rng(6)
    s1 = [(random_hermitian(rng, 4), 0.4) for _ in range(3)]
    s2 = [(random_hermitian(rng, 4), 0.7) for _ in range(2)]
    np.testing.assert_allclose(propagate_unitary(s1 + s2),
                               propagate_unitary(s2) @ propagate_unitary(s1), atol=1e-10)


def test_schedule_errors():
    with pytest.raises(ShapeMismatch):
        propagate_unitary([])
    with pytest.raises(ShapeMismatch):
        propagate_unitary([(np.eye(2), 1.0), (np.eye(3), 1.0)])


def test_closed_lindblad_matches_conjugation():
    rng = np.random.default_rng(7)
    h = random_hermitian(rng, 4)
    rho = random_density(rng, 4)
    u = propagate_unitary([(h, 1.5)])
    out = lindblad_propagate(LindbladModel(h), rho, 1.5)
    np.testing.assert_allclose(out, u @ rho @ u.conj().T, atol=1e-8)


def test_spontaneous_decay_population():
    gamma = 0.8
    lower = np.array([[0, 1], [0, 0]], dtype=complex)  # |g><e| with g = index 0
    model = LindbladModel(np.zeros((2, 2)), [(lower, gamma)])
    rho0 = np.diag([0.0, 1.0]).astype(complex)
    times, states = lindblad_trajectory(model, rho0, 3.0, samples=30)
    np.testing.assert_allclose(states[:, 1, 1].real, np.exp(-gamma * times), atol=1e-9)


def test_rk4_matches_superoperator_on_random_models():
    rng = np.random.default_rng(8)
    for _ in range(20):
        model = random_model(rng, 3)
        rho = random_density(rng, 3)
        t = 1.7
        exact = unvec(cp_map(model, t) @ vec(rho))
        assert np.max(np.abs(lindblad_propagate(model, rho, t) - exact)) <= 1e-8


def test_cp_map_identity_at_zero_and_closed_form():
    rng = np.random.default_rng(9)
    model = random_model(rng, 3)
    np.testing.assert_allclose(cp_map(model, 0.0), np.eye(9), atol=1e-15)
    jz = angular_momentum_ops(2)[2]
    u = propagate_unitary([(jz, 0.9)])
    np.testing.assert_allclose(cp_map(LindbladModel(jz), 0.9), unitary_superoperator(u), atol=1e-12)


def test_cp_map_trace_preserving():
    rng = np.random.default_rng(10)
    model = random_model(rng, 4, njumps=3)
    e = cp_map(model, 2.0)
    for _ in range(50):
        rho = random_density(rng, 4)
        assert abs(np.trace(unvec(e @ vec(rho))) - 1.0) <= 1e-8


def test_positivity_preserved():
    rng = np.random.default_rng(12)
    for _ in range(5):
        model = random_model(rng, 3)
        _, states = lindblad_trajectory(model, random_density(rng, 3), 2.0, samples=10)
        for rho in states:
            assert np.linalg.eigvalsh((rho + rho.conj().T) / 2).min() >= -1e-7


def test_no_jump_evolution_loses_trace():
    rng = np.random.default_rng(13)
    model = random_model(rng, 3)
    lossy = LindbladModel(model.effective_hamiltonian())
    _, states = lindblad_trajectory(lossy, random_density(rng, 3), 2.0, samples=20)
    traces = np.einsum("nii->n", states).real
    assert traces.max() <= 1 + 1e-9
    assert np.all(np.diff(traces) <= 1e-12)


def test_step_too_large_detected():
    rng = np.random.default_rng(14)
    model = LindbladModel(random_hermitian(rng, 3, 10.0), [(np.eye(3), 5.0)])
    model.jumps.append((rng.normal(size=(3, 3)).astype(complex), 20.0))
    with pytest.raises(StepTooLarge):
        lindblad_propagate(model, random_density(rng, 3), 5.0, dt=1.0)


def test_invalid_initial_state():
    model = LindbladModel(np.eye(2))
    with pytest.raises(InvalidState):
        lindblad_propagate(model, np.diag([0.7, 0.7]), 1.0)
    with pytest.raises(InvalidState):
        lindblad_propagate(model, np.diag([1.5, -0.5]), 1.0)


def test_fidelity_basics():
    rng = np.random.default_rng(15)
    u = propagate_unitary([(random_hermitian(rng, 4), 1.0)])
    assert fidelity("unitary", u, u) == pytest.approx(1.0)
    assert fidelity("unitary", u, np.exp(0.7j) * u) == pytest.approx(1.0)
    assert fidelity("state", np.array([1, 0]), np.array([0, 1])) == 0.0
    rho = random_density(rng, 3)
    psi = np.array([1, 0, 0], dtype=complex)
    assert fidelity("state", psi, rho) == pytest.approx(rho[0, 0].real)
    with pytest.raises(ShapeMismatch):
        fidelity("unitary", np.eye(2), np.eye(3))


def test_isometry_reduces_to_unitary():
    rng = np.random.default_rng(16)
    u = propagate_unitary([(random_hermitian(rng, 5), 1.0)])
    v = propagate_unitary([(random_hermitian(rng, 5), 1.0)])
    assert fidelity("isometry", u, v) == pytest.approx(fidelity("unitary", u, v))
    assert fidelity("isometry", u[:, :2], u[:, :2]) == pytest.approx(1.0)


def test_process_fidelity_depolarizing():
    ident = np.eye(4, dtype=complex)
    depol = np.outer(vec(np.eye(2) / 2), vec(np.eye(2)))
    assert fidelity("process", ident, depol) == pytest.approx(0.25)
    assert fidelity("process", ident, depol, square=True) == pytest.approx(0.0625)


def test_coherence_limits():
    assert two_level_coherence(0.0, 1.0, 60.0) == pytest.approx(1.0)
    assert abs(two_level_coherence(0.0, 2.0, 0.0)) == 0.0
    with pytest.raises(ValueError):
        two_level_coherence(1.0, 0.0, 1.0)


@pytest.mark.parametrize("delta", [0.0, 0.3, 1.0, 4.0])
def test_coherence_closed_form_matches_lindblad(delta):
    gamma, t = 1.0, 10.0
    model, rho0 = coherence_decay_model(delta, gamma)
    rho = lindblad_propagate(model, rho0, t)
    ratio = rho[2, 3] / rho0[0, 1]
    assert abs(ratio - two_level_coherence(delta, gamma, t)) <= 1e-6
    target = np.array([0, 0, 1, 1]) / np.sqrt(2)
    assert fidelity("state", target, rho) == pytest.approx(coherence_transfer_fidelity(delta, gamma, t), abs=1e-6)


def test_infidelity_curve_monotone_toward_zero():
    ratios = np.linspace(3.0, 0.0, 61)
    infid = [1 - coherence_transfer_fidelity(r, 1.0, 10.0) for r in ratios]
    assert np.all(np.diff(infid) < 0)
    assert infid[-1] < 1e-4


@settings(max_examples=30, deadline=None)
@given(st.floats(-5, 5), st.floats(0.1, 5), st.floats(0, 20))
def test_coherence_bounded(delta, gamma, t):
    assert abs(two_level_coherence(delta, gamma, t)) <= 1.0 + 1e-12
