import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from quditkit import atomic_models as am
from quditkit import grape
from quditkit.errors import AmbiguousBranch, ConfigError, DegenerateLevel, InvalidQuantumNumbers
from quditkit.spin_algebra import SpinQuantum, angular_momentum_ops, rank_weights


# ---------------------------------------------------------------- qudecimal control

def test_qudecimal_hamiltonian_phase_endpoints():
    ctl = am.QudecimalControl()
    ix, iy, iz = angular_momentum_ops(SpinQuantum(9))
    assert np.allclose(am.qudecimal_hamiltonian(ctl, 0.0), iz @ iz + ix)
    assert np.allclose(am.qudecimal_hamiltonian(ctl, 0.5), iz @ iz + iy)


def test_qudecimal_rejects_nonpositive_rf():
    with pytest.raises(ConfigError):
        am.QudecimalControl(omega_rf=0.0)


@pytest.mark.parametrize("two_j", [1, 3, 5])
def test_qudecimal_generators_are_controllable(two_j):
    drift, x, y = am.QudecimalControl(spin=SpinQuantum(two_j)).terms()
    ok, rank = grape.controllability_check([drift, x, y])
    d = two_j + 1
    assert ok and rank == d * d - 1


def test_linear_drift_is_not_controllable():
    ix, iy, iz = angular_momentum_ops(SpinQuantum(3))
    ok, rank = grape.controllability_check([iz, ix, iy])
    assert not ok and rank == 3


# ---------------------------------------------------------------- Rabi ratios

@pytest.mark.parametrize("two_f,two_fp", [(9, 11), (9, 9), (3, 5), (1, 3)])
def test_rabi_ratio_reference_is_one(two_f, two_fp):
    assert am.rabi_cg_ratio(two_f, two_fp, -two_f) == pytest.approx(1.0)


@pytest.mark.parametrize("two_f", [1, 3, 9])
def test_rabi_ratios_even_for_stretched_upper_level(two_f):
    r = am.rabi_ratios(two_f, two_f + 2)
    assert np.allclose(r, r[::-1])


def test_rabi_ratios_peak_value():
    # F=9/2 -> F'=11/2 pi light: ratio of center to edge CG, from the closed form
    # <F+1,M|F,M;1,0>^2 = (F+1)^2 - M^2 over (F+1)(2F+1)
    f = 4.5
    expect = np.sqrt(((f + 1) ** 2 - 0.25) / ((f + 1) ** 2 - f ** 2))
    assert am.rabi_ratios(9, 11).max() == pytest.approx(expect)
    assert expect == pytest.approx(1.732, abs=1e-3)


def test_rabi_ratio_bad_projection():
    with pytest.raises(InvalidQuantumNumbers):
        am.rabi_cg_ratio(9, 11, 10)
    with pytest.raises(InvalidQuantumNumbers):
        am.rabi_cg_ratio(1, 7, 1)


# ---------------------------------------------------------------- dressing

@given(st.floats(0.5, 20), st.floats(0.1, 10))
@settings(max_examples=40, deadline=None)
def test_single_atom_light_shift_is_eigenvalue(delta, omega):
    h = np.array([[0, omega / 2], [omega / 2, -delta]])
    vals = np.linalg.eigvalsh(h)
    ls = am.single_atom_light_shift(delta, omega)
    assert np.min(np.abs(vals - ls)) < 1e-10
    # adiabatically connected to 0: the weak-drive shift is omega^2 / (4 delta)
    assert abs(ls) <= omega ** 2 / (4 * delta) + 1e-12


def test_dressed_levels_without_drive():
    vals, e, vec = am.two_atom_dressed_levels(3.0, 5.0, 0.0, 0.0)
    assert e == 0.0
    assert np.allclose(vec, [1, 0, 0])
    assert np.allclose(sorted(vals), [-5, -3, 0])


def test_dressed_levels_symmetric_dark_state():
    # equal couplings: (|r_i j> - |i r_j>)/sqrt2 decouples at energy -delta
    vals, _, _ = am.two_atom_dressed_levels(4.0, 4.0, 2.0, 2.0)
    assert np.min(np.abs(vals + 4.0)) < 1e-12


def test_dressed_levels_resonant_branch_is_ambiguous():
    with pytest.raises(AmbiguousBranch):
        am.two_atom_dressed_levels(0.0, 0.0, 1.0, 1.0)
    _, e, _ = am.two_atom_dressed_levels(0.0, 0.0, 1.0, 1.0, tie_break="lower")
    assert e == pytest.approx(-1 / np.sqrt(2))


def test_entangler_vanishes_without_light():
    ent = am.rydberg_entangler(am.EntanglerSpec(omega_L=0.0))
    assert np.allclose(ent.energies, 0) and np.allclose(ent.decay, 0)


def test_entangler_is_exchange_symmetric():
    ent = am.rydberg_entangler(am.EntanglerSpec())
    assert np.allclose(ent.energies, ent.energies.T, atol=1e-14)
    assert np.allclose(ent.entangling, ent.entangling.T, atol=1e-14)


def test_entangling_energy_scales_as_fourth_power():
    lo = np.array([2e-2, 4e-2])
    vals = [np.abs(am.rydberg_entangler(am.EntanglerSpec(omega_L=w)).entangling).max() for w in lo]
    slope = np.log(vals[1] / vals[0]) / np.log(2)
    assert slope == pytest.approx(4.0, abs=0.3)


def test_entangler_has_rank_above_two_content():
    ent = am.rydberg_entangler(am.EntanglerSpec())
    spec = grape.tensor_overlap_spectrum(ent.hamiltonian())
    high = sum(v for (k, _), v in spec.items() if k > 2)
    assert high > 1e-3 * sum(spec.values())


def test_tensor_overlap_matches_full_expansion_small():
    # oracle: the full spherical tensor expansion from spin_algebra on a 4x4 operator
    rng = np.random.default_rng(3)
    h = np.diag(rng.normal(size=4)).astype(complex)
    spec = grape.tensor_overlap_spectrum(h)
    w = rank_weights(h, SpinQuantum(3))
    for k in range(4):
        got = sum(v for (kk, _), v in spec.items() if kk == k)
        assert got == pytest.approx(w[k], abs=1e-10)


def test_decay_rate_ratio_to_rf():
    spec = am.EntanglerSpec()
    assert spec.decay_rate() == pytest.approx(1.137e-4, rel=1e-3)


# ---------------------------------------------------------------- dressed rf

def _embedded_rf_oracle(ent, g_ratio):
    """Project the bare two-atom rf Hamiltonian on (2d)^2 onto the dressed pairs."""
    spec = ent.spec
    d = ent.dim
    fa = [op[::-1, ::-1] for op in angular_momentum_ops(spec.two_f)]
    lo = (spec.two_fp - spec.two_f) // 2
    fr = [op[::-1, ::-1][lo:lo + d, lo:lo + d] for op in angular_momentum_ops(spec.two_fp)]
    out = []
    for k in range(2):
        h1 = np.zeros((2 * d, 2 * d), dtype=complex)
        h1[:d, :d] = fa[k]
        h1[d:, d:] = g_ratio * fr[k]
        big = np.kron(h1, np.eye(2 * d)) + np.kron(np.eye(2 * d), h1)
        vecs = np.zeros(((2 * d) ** 2, d * d), dtype=complex)
        for i in range(d):
            for j in range(d):
                c = ent.dressed_coeffs[i, j]
                vecs[i * 2 * d + j, i * d + j] += c[0]
                vecs[(d + i) * 2 * d + j, i * d + j] += c[1]
                vecs[i * 2 * d + d + j, i * d + j] += c[2]
        out.append(vecs.conj().T @ big @ vecs)
    return out


@pytest.mark.parametrize("two_f,two_fp", [(2, 4), (3, 5)])
def test_dressed_rf_matches_embedded_projection(two_f, two_fp):
    ent = am.rydberg_entangler(am.EntanglerSpec(two_f=two_f, two_fp=two_fp))
    x, y, _ = am.dressed_rf_terms(ent, g_ratio=2.0)
    ox, oy = _embedded_rf_oracle(ent, 2.0)
    assert np.allclose(x, ox, atol=1e-12)
    assert np.allclose(y, oy, atol=1e-12)


def test_dressed_rf_undressed_limit_is_collective_spin():
    ent = am.rydberg_entangler(am.EntanglerSpec(two_f=2, two_fp=4, omega_L=0.0))
    x, y, z = am.dressed_rf_terms(ent)
    fx, fy, _ = [op[::-1, ::-1] for op in angular_momentum_ops(2)]
    eye = np.eye(3)
    assert np.allclose(x, np.kron(fx, eye) + np.kron(eye, fx))
    assert np.allclose(y, np.kron(fy, eye) + np.kron(eye, fy))
    assert np.allclose(z, 0)


def test_dressed_rf_hamiltonian_hermitian():
    ent = am.rydberg_entangler(am.EntanglerSpec(two_f=2, two_fp=4))
    h = am.dressed_rf_hamiltonian(ent, 0.7, omega_0=0.3)
    assert np.allclose(h, h.conj().T)
    hd = am.dressed_rf_hamiltonian(ent, 0.7, with_decay=True)
    assert np.all(np.diag(hd).imag <= 0)


# ---------------------------------------------------------------- dual manifold

@given(st.floats(0.1, 5), st.floats(0, 10))
@settings(max_examples=30, deadline=None)
def test_dual_manifold_precession_rates(om, w0):
    h_a, h_r = am.dual_manifold_rf(om, w0, 0.3)
    ea = np.ptp(np.linalg.eigvalsh(h_a))
    er = np.ptp(np.linalg.eigvalsh(h_r))
    ra, rr = am.dual_manifold_rabi(om, w0)
    assert ea == pytest.approx(ra, rel=1e-9)
    assert er == pytest.approx(rr, rel=1e-9)


def test_dual_manifold_pure_drive_at_resonance():
    h_a, h_r = am.dual_manifold_rf(1.0, 0.0, 0.0)
    fx = angular_momentum_ops(1)[0]
    assert np.allclose(h_a, fx) and np.allclose(h_r, 2 * fx)


# ---------------------------------------------------------------- transfer

def test_transfer_without_drive_is_diagonal():
    c = am.transfer_couplings(3, 3)
    h = am.transfer_rabi_hamiltonian(0.4, [0.1, 0.2, 0.3, 0.4], c, 0.0, 1.0)
    assert np.allclose(h, np.diag(np.diag(h)))
    assert np.allclose(np.diag(h).real, [0, 0, 0, 0, -0.5, -0.6, -0.7, -0.8])


def test_transfer_couplings_reference_and_sign():
    c = am.transfer_couplings(3, 3)
    assert c[-1] == pytest.approx(1.0)
    # same-F pi couplings are proportional to M
    assert np.allclose(c, np.array([-3, -1, 1, 3]) / 3)


# ---------------------------------------------------------------- optical pumping

def test_simplified_pumping_support_is_rank_at_most_two():
    spin = SpinQuantum(9)
    spec = am.OpticalPumpingSpec(alpha=0.3, beta=0.7)
    for w, rate in am.optical_pumping_jumps(spec, spin):
        assert rate == 1.0
        weights = rank_weights(w, spin)
        assert np.sum(weights[3:]) < 1e-20
        assert weights[0] < 1e-20


def test_simplified_pumping_pure_rank_two():
    spin = SpinQuantum(5)
    spec = am.OpticalPumpingSpec(alpha=0.0, beta=1.0)
    for w, _ in am.optical_pumping_jumps(spec, spin):
        weights = rank_weights(w, spin)
        assert weights[1] < 1e-20


def test_pumping_spec_validation():
    with pytest.raises(ConfigError):
        am.OpticalPumpingSpec()
    with pytest.raises(ConfigError):
        am.OpticalPumpingSpec(alpha=0.1, beta=0.1, levels={11: (1.0, 1, 0, 0)})
    with pytest.raises(ConfigError):
        am.OpticalPumpingSpec(alpha=0.1)
    with pytest.raises(ConfigError):
        am.OpticalPumpingSpec(alpha=0.1, beta=0.1, linewidth=0)


@pytest.mark.parametrize("two_f,two_fp", [(9, 11), (9, 9), (9, 7), (3, 5)])
def test_tensor_form_reproduces_explicit_dyadic(two_f, two_fp):
    rng = np.random.default_rng(two_f + 10 * two_fp)
    spin = SpinQuantum(two_f)
    coeffs = am.dyadic_coefficients(two_f, two_fp)
    for _ in range(3):
        eps = rng.normal(size=3) + 1j * rng.normal(size=3)
        eps /= np.linalg.norm(eps)
        for q in (-1, 0, 1):
            explicit = am.dyadic(two_f, two_fp, q, eps)
            tensor = am._dyadic_tensor_form(spin, am._spherical_unit(q).conj(), eps, *coeffs)
            assert np.allclose(explicit, tensor, atol=1e-12)


def test_dyadic_coefficients_known_values():
    assert np.allclose(am.dyadic_coefficients(9, 11), (0.4, -0.109090909, -0.018181818), atol=1e-8)


def test_full_pumping_sum_is_positive():
    spin = SpinQuantum(9)
    levels = {tf: (d, *am.dyadic_coefficients(9, tf)) for tf, d in ((7, 1.0), (9, -0.5), (11, -2.0))}
    spec = am.OpticalPumpingSpec(rabi=0.5, linewidth=1.0, polarization=(1, 1j, 0.3), levels=levels)
    jumps = am.optical_pumping_jumps(spec, spin)
    total = sum(r * w.conj().T @ w for w, r in jumps)
    assert np.linalg.eigvalsh(total).min() > -1e-12


# ---------------------------------------------------------------- hyperfine stack

def test_autler_townes_splitting_alone():
    spec = am.HyperfineSpec(A=0.0, Q=0.0)
    om = 100.0
    vals = np.linalg.eigvalsh(am.hyperfine_stack(spec, om))
    g = om / (2 * np.sqrt(2))
    expect = np.sort(np.r_[np.full(20, -g), np.zeros(10), np.full(20, g)])
    assert np.allclose(vals, expect)


@pytest.mark.parametrize("two_m", [9, 7, 5, 3, 1, -5])
def test_strong_dressing_isolates_mj_zero(two_m):
    spec = am.HyperfineSpec()
    h = am.hyperfine_stack(spec, 1000.0)
    _, w = am.eigenspace_overlap(h, am.stack_index(spec, 0, two_m))
    assert w >= 0.99


@pytest.mark.parametrize("two_m", [9, 7, 5, 3, 1])
def test_first_order_shift_closed_form(two_m):
    spec = am.HyperfineSpec()
    h0 = am.hyperfine_stack(am.HyperfineSpec(A=0.0, Q=0.0), 1000.0)
    v = am.hyperfine_stack(spec, 1000.0) - h0
    e1, e2 = am.perturbation_shifts(h0, v, am.stack_index(spec, 0, two_m))
    assert e1 == pytest.approx(am.first_order_quadrupole_shift(spec, two_m))
    exact, _ = am.eigenspace_overlap(h0 + v, am.stack_index(spec, 0, two_m))
    assert abs(e1 + e2 - exact) <= 0.05 * abs(exact)


def test_first_order_shift_edge_value():
    assert am.first_order_quadrupole_shift(am.HyperfineSpec(), 9) == pytest.approx(-19.5)


def test_perturbation_diagonal_v_has_no_second_order():
    h0 = np.diag([0.0, 1.0, 3.0])
    v = np.diag([0.2, -0.1, 0.4])
    assert am.perturbation_shifts(h0, v, 1) == pytest.approx((-0.1, 0.0))


def test_perturbation_two_level_second_order():
    h0 = np.diag([0.0, 2.0])
    v = np.array([[0.0, 0.1], [0.1, 0.0]])
    e1, e2 = am.perturbation_shifts(h0, v, 0)
    assert e1 == 0.0 and e2 == pytest.approx(-0.005)


def test_shared_partner_model_is_degenerate():
    spec = am.HyperfineSpec()
    h0 = am.hyperfine_stack(am.HyperfineSpec(A=0.0, Q=0.0), 1000.0, model="shared")
    v = am.hyperfine_stack(spec, 1000.0, model="shared") - h0
    with pytest.raises(DegenerateLevel):
        am.perturbation_shifts(h0, v, am.stack_index(spec, 0, 9))


@pytest.mark.parametrize("two_m", [9, 7, 5, 3, 1])
def test_quartic_weight_product_matches_fit(two_m):
    assert am.quartic_lightshift_weight(two_m) == pytest.approx(am.quartic_fit(two_m / 2), abs=5e-3)


@pytest.mark.parametrize("two_m", [9, 7, 5, 3, 1])
def test_quartic_product_is_two_thirds_of_rank_two(two_m):
    assert am.quartic_lightshift_weight(two_m) == pytest.approx(2 / 3 * am.rank2_cg_squared(two_m))


# ---------------------------------------------------------------- kappa

def test_control_figure_of_merit_order():
    assert am.control_figure_of_merit() == pytest.approx(6.8e3, rel=0.1)


def test_light_shift_quadratic_in_m():
    levels = {7: 500.0, 9: -500.0}
    v = am.pi_light_shift(9, levels)
    ms = np.array(SpinQuantum(9).two_ms()) / 2
    fit = np.polyval(np.polyfit(ms, v, 2), ms)
    assert np.allclose(fit, v, atol=1e-12)
