import itertools
from fractions import Fraction
from math import sqrt

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from sympy import Rational
from sympy.physics.quantum.cg import CG

from quditkit._linalg import commutator, unitary_defect
from quditkit.errors import InvalidIndex, InvalidQuantumNumbers, NonUnitAxis
from quditkit.spin_algebra import (
    SpinQuantum,
    angular_momentum_ops,
    clebsch_gordan,
    clebsch_gordan_exact,
    off_rank_leakage,
    random_rotation,
    rank_weights,
    sa_basis,
    sa_error_basis,
    spherical_tensor,
    su2_generator,
    tensor_basis,
    twice,
    wigner_rotation,
)

SPINS = [SpinQuantum(t) for t in range(0, 10)]


def test_spin_quantum_fields():
    s = SpinQuantum.from_j(4.5)
    assert s.two_j == 9 and s.dim == 10 and s.half_integer
    with pytest.raises(InvalidQuantumNumbers):
        SpinQuantum(-1)
    with pytest.raises(InvalidQuantumNumbers):
        twice(0.25)


def test_spin_half_matrices():
    jx, jy, jz = angular_momentum_ops(1)
    np.testing.assert_allclose(jz, np.diag([0.5, -0.5]))
    np.testing.assert_allclose(jx, [[0, 0.5], [0.5, 0]])
    np.testing.assert_allclose(jy, [[0, -0.5j], [0.5j, 0]])


def test_spin_one_jz():
    np.testing.assert_allclose(angular_momentum_ops(2)[2], np.diag([1.0, 0.0, -1.0]))


def test_trace_jz_squared_nine_halves():
    jz = angular_momentum_ops(9)[2]
    assert np.trace(jz @ jz).real == pytest.approx(82.5, abs=1e-12)


@pytest.mark.parametrize("spin", SPINS)
def test_commutation_and_casimir(spin):
    jx, jy, jz = angular_momentum_ops(spin)
    for a, b, c in ((jx, jy, jz), (jy, jz, jx), (jz, jx, jy)):
        assert np.max(np.abs(commutator(a, b) - 1j * c), initial=0) <= 1e-12
    j = spin.j
    cas = jx @ jx + jy @ jy + jz @ jz
    assert np.max(np.abs(cas - j * (j + 1) * np.eye(spin.dim))) <= 1e-12


def _sympy_cg(tj1, tm1, tj2, tm2, tj, tm):
    r = lambda x: Rational(x, 2)
    return float(CG(r(tj1), r(tm1), r(tj2), r(tm2), r(tj), r(tm)).doit())


def _valid_args(max_two_j=8):
    out = []
    for tj1, tj2 in itertools.product(range(max_two_j + 1), repeat=2):
        for tj in range(abs(tj1 - tj2), tj1 + tj2 + 1, 2):
            for tm1 in range(-tj1, tj1 + 1, 2):
                for tm2 in range(-tj2, tj2 + 1, 2):
                    if abs(tm1 + tm2) <= tj:
                        out.append((tj1, tm1, tj2, tm2, tj, tm1 + tm2))
    return out


def test_cg_matches_sympy_on_sample():
    rng = np.random.default_rng(3)
    args = _valid_args(7)
    for i in rng.choice(len(args), size=300, replace=False):
        a = args[i]
        assert clebsch_gordan(*a) == pytest.approx(_sympy_cg(*a), abs=1e-13)


def test_cg_j_plus_one_closed_form():
    # <j+1, m | 1, 0; j, m> = sqrt(((j+1)^2 - m^2) / ((2j+1)(j+1)))
    for tj in range(0, 20):
        j = tj / 2
        for tm in range(-tj, tj + 1, 2):
            m = tm / 2
            ref = sqrt(((j + 1) ** 2 - m * m) / ((2 * j + 1) * (j + 1)))
            assert clebsch_gordan(2, 0, tj, tm, tj + 2, tm) == pytest.approx(ref, abs=1e-12)
    assert clebsch_gordan(2, 0, 1, 1, 3, 1) == pytest.approx(sqrt(2 / 3), abs=1e-15)


def test_cg_thirteen_halves_family():
    for tm in range(-11, 12, 2):
        m = tm / 2
        ref = 0.5 * sqrt((169 - 4 * m * m) / 78)
        assert clebsch_gordan(2, 0, 11, tm, 13, tm) == pytest.approx(ref, abs=1e-12)


def test_cg_stretched_and_selection():
    for tj1, tj2 in itertools.product(range(6), repeat=2):
        assert clebsch_gordan(tj1, tj1, tj2, tj2, tj1 + tj2, tj1 + tj2) == pytest.approx(1.0)
    assert clebsch_gordan(2, 0, 1, 1, 3, -1) == 0.0


def test_cg_exact_is_rational():
    sign, sq = clebsch_gordan_exact(2, 0, 1, 1, 3, 1)
    assert sign == 1 and sq == Fraction(2, 3)


def test_cg_invalid():
    with pytest.raises(InvalidQuantumNumbers):
        clebsch_gordan(2, 0, 2, 0, 6, 0)
    with pytest.raises(InvalidQuantumNumbers):
        clebsch_gordan(2, 4, 2, 0, 2, 4)
    with pytest.raises(InvalidQuantumNumbers):
        clebsch_gordan(2, 1, 2, 0, 2, 1)


triads = st.tuples(st.integers(0, 9), st.integers(0, 9)).flatmap(
    lambda p: st.tuples(
        st.just(p[0]), st.just(p[1]),
        st.sampled_from(list(range(abs(p[0] - p[1]), p[0] + p[1] + 1, 2))),
    )
)


@settings(max_examples=60, deadline=None)
@given(triads)
def test_cg_column_orthonormality(triad):
    tj1, tj2, tj = triad
    for tm in range(-tj, tj + 1, 2):
        tot = sum(
            clebsch_gordan(tj1, tm1, tj2, tm - tm1, tj, tm) ** 2
            for tm1 in range(-tj1, tj1 + 1, 2)
            if abs(tm - tm1) <= tj2
        )
        assert tot == pytest.approx(1.0, abs=1e-12)


@settings(max_examples=80, deadline=None)
@given(triads, st.data())
def test_cg_reflection_symmetry(triad, data):
    tj1, tj2, tj = triad
    tm1 = data.draw(st.sampled_from(list(range(-tj1, tj1 + 1, 2))))
    tm2 = data.draw(st.sampled_from(list(range(-tj2, tj2 + 1, 2))))
    if abs(tm1 + tm2) > tj:
        return
    lhs = clebsch_gordan(tj1, tm1, tj2, tm2, tj, tm1 + tm2)
    phase = (-1) ** ((tj1 + tj2 - tj) // 2)
    rhs = phase * clebsch_gordan(tj1, -tm1, tj2, -tm2, tj, -tm1 - tm2)
    assert lhs == pytest.approx(rhs, abs=1e-13)


def test_wigner_identity_and_beta_pi():
    for spin in SPINS:
        np.testing.assert_allclose(wigner_rotation(spin, 0, 0, 0), np.eye(spin.dim), atol=1e-14)
        d = wigner_rotation(spin, 0, np.pi, 0)
        ref = np.zeros((spin.dim, spin.dim))
        for tm in spin.two_ms():
            # d^J_{m', m}(pi) = (-1)^(J - m) delta_{m', -m}
            ref[spin.index(-tm), spin.index(tm)] = (-1) ** ((spin.two_j - tm) // 2)
        np.testing.assert_allclose(d, ref, atol=1e-12)


def test_wigner_unitary_random():
    rng = np.random.default_rng(0)
    for spin in SPINS:
        for _ in range(5):
            d = wigner_rotation(spin, *rng.uniform(-np.pi, np.pi, 3))
            assert unitary_defect(d) <= 1e-10


def test_wigner_matches_exponential_product():
    spin = SpinQuantum(5)
    jx, jy, jz = angular_momentum_ops(spin)
    from scipy.linalg import expm
    a, b, g = 0.3, 1.1, -0.7
    ref = expm(-1j * a * jz) @ expm(-1j * b * jy) @ expm(-1j * g * jz)
    np.testing.assert_allclose(wigner_rotation(spin, a, b, g), ref, atol=1e-12)


def test_scalar_and_vector_tensors():
    for spin in SPINS:
        np.testing.assert_allclose(spherical_tensor(spin, 0, 0), np.eye(spin.dim) / np.sqrt(spin.dim), atol=1e-14)
        if spin.two_j == 0:
            continue
        j = spin.j
        jz = angular_momentum_ops(spin)[2]
        ref = jz / np.sqrt(j * (j + 1) * (2 * j + 1) / 3)
        np.testing.assert_allclose(spherical_tensor(spin, 1, 0), ref, atol=1e-12)


def test_tensor_support_rule():
    spin = SpinQuantum(5)
    t = spherical_tensor(spin, 3, 2)
    ms = spin.two_ms()
    for r, c in zip(*np.nonzero(np.abs(t) > 0)):
        assert ms[r] == ms[c] + 4


def test_tensor_orthonormal_and_complete_nine_halves():
    spin = SpinQuantum(9)
    mats = np.array([t.ravel() for _, t in tensor_basis(spin)])
    gram = mats.conj() @ mats.T
    assert mats.shape[0] == 100
    assert np.max(np.abs(gram - np.eye(100))) <= 1e-12


def test_tensor_invalid_index():
    with pytest.raises(InvalidIndex):
        spherical_tensor(3, 4, 0)
    with pytest.raises(InvalidIndex):
        spherical_tensor(3, 1, 2)


def test_sa_basis_orthonormal_nine_halves():
    spin = SpinQuantum(9)
    ops = sa_basis(spin)
    assert len(ops) == 100
    mats = np.array([m.ravel() for _, m in ops])
    assert np.max(np.abs(mats.conj() @ mats.T - np.eye(100))) <= 1e-12


def test_sa_errors():
    with pytest.raises(InvalidIndex):
        sa_error_basis(3, 2, 0, "A")
    with pytest.raises(InvalidIndex):
        sa_error_basis(3, 2, 0)
    with pytest.raises(InvalidIndex):
        sa_error_basis(3, 4, 1)


def _kitten(spin, m, sign):
    v = spin.ket(-spin.two_j + 2 * m) + sign * spin.ket(spin.two_j - 2 * m)
    return v / np.linalg.norm(v)


def test_odd_rank_diagonal_tensor_flips_cat_sign():
    spin = SpinQuantum(9)
    plus, minus = _kitten(spin, 0, 1), _kitten(spin, 0, -1)
    out = sa_error_basis(spin, 1, 0, "S") @ plus
    assert abs(np.vdot(plus, out)) <= 1e-12
    assert abs(abs(np.vdot(minus, out)) - np.linalg.norm(out)) <= 1e-12
    out2 = sa_error_basis(spin, 2, 0, "S") @ plus
    assert abs(np.vdot(minus, out2)) <= 1e-12


def test_sa_action_on_kittens_stays_in_kitten_pair():
    # S^(k)_q |+>_l has support only on the kitten pairs l - q and l + q,
    # where l + q folds back through the midlevel once it passes J
    spin = SpinQuantum(9)
    for k in range(1, 4):
        for q in range(1, k + 1):
            for part in ("S", "A"):
                op = sa_error_basis(spin, k, q, part)
                for l in range(5):
                    for sign in (1, -1):
                        out = op @ _kitten(spin, l, sign)
                        allowed = {l - q, min(l + q, spin.two_j - l - q)}
                        for m in range(5):
                            if m in allowed:
                                continue
                            for s2 in (1, -1):
                                assert abs(np.vdot(_kitten(spin, m, s2), out)) <= 1e-12


def test_sa_kitten_coefficients_from_tensor_action():
    # direct CG weight: <+_{l+q}| S^(k)_q |+_l> equals the matrix-element sum
    spin = SpinQuantum(9)
    k, q, l = 2, 1, 1
    s = sa_error_basis(spin, k, q, "S")
    tp = spherical_tensor(spin, k, q)
    tm = spherical_tensor(spin, k, -q)
    lhs = np.vdot(_kitten(spin, l + q, 1), s @ _kitten(spin, l, 1))
    rhs = np.vdot(_kitten(spin, l + q, 1), (tp + tm) @ _kitten(spin, l, 1)) / np.sqrt(2)
    assert lhs == pytest.approx(rhs, abs=1e-13)
    assert abs(lhs) > 1e-3


def test_su2_generator_pauli():
    x = su2_generator(1, (1, 0, 0), np.pi)
    np.testing.assert_allclose(x, -1j * np.array([[0, 1], [1, 0]]), atol=1e-14)
    with pytest.raises(NonUnitAxis):
        su2_generator(1, (1, 1, 0), 0.3)


def test_su2_pi_x_flips_kittens():
    spin = SpinQuantum(9)
    x = su2_generator(spin, (1, 0, 0), np.pi)
    for m in range(spin.dim):
        out = x @ spin.ket(-spin.two_j + 2 * m)
        target = spin.ket(spin.two_j - 2 * m)
        assert abs(abs(np.vdot(target, out)) - 1) <= 1e-12


def test_su2_rank_preservation_all_ranks():
    rng = np.random.default_rng(11)
    for spin in (SpinQuantum(3), SpinQuantum(9)):
        basis = tensor_basis(spin)
        for _ in range(100 if spin.two_j == 3 else 20):
            u = random_rotation(spin, rng)
            for (k, q), t in basis:
                assert off_rank_leakage(u @ t @ u.conj().T, spin, k) <= 1e-9


def test_rank_weights_of_quadratic_operator():
    spin = SpinQuantum(9)
    jx, _, jz = angular_momentum_ops(spin)
    w = rank_weights(jx @ jz + jz @ jz, spin)
    assert np.all(w[3:] <= 1e-20)
    assert w[2] > 0
