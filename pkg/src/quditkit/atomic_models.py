"""Hamiltonians and noise operators for 87Sr spin qudits.

Frequencies are in units of the rf Rabi frequency unless a docstring says MHz.
Qudit levels are labelled i = 0..d-1 with projection M_i = -F + i, so level
order here is ascending in M. The spin_algebra matrices use descending order;
``_level_ops`` flips them.
"""

from dataclasses import dataclass, field
from types import MappingProxyType

import numpy as np

from ._linalg import dag, kron
from .errors import AmbiguousBranch, ConfigError, DegenerateLevel, InvalidQuantumNumbers, ShapeMismatch
from .spin_algebra import SpinQuantum, _spin, angular_momentum_ops, clebsch_gordan, spherical_tensor

CONSTANTS = MappingProxyType({
    "gamma_3p1_khz": 7.5,            # 5s5p 3P1 linewidth / 2pi
    "hf_3p1_79_mhz": 1130.0,         # 3P1 F'=7/2 to F'=9/2 splitting / 2pi
    "hf_3p1_911_mhz": 1463.0,        # 3P1 F'=9/2 to F'=11/2 splitting / 2pi
    "g_nuclear_hz_per_gauss": -184.0,
    "a_1p1_mhz": -3.4,               # 5s5p 1P1 magnetic dipole constant
    "q_1p1_mhz": 39.0,               # 5s5p 1P1 electric quadrupole constant
    "gamma_1p1_mhz": 32.0,
    "rydberg_lifetime_us": 140.0,
    "omega_rf_mhz": 10.0,            # rf Rabi frequency / 2pi for the entangler
})


def cg(two_j1, two_m1, two_j2, two_m2, two_j, two_m):
    """Clebsch-Gordan coefficient that is zero, not an error, when |m| > j."""
    if abs(two_m) > two_j or abs(two_m1) > two_j1 or abs(two_m2) > two_j2:
        return 0.0
    if two_m1 + two_m2 != two_m:
        return 0.0
    return clebsch_gordan(two_j1, two_m1, two_j2, two_m2, two_j, two_m)


def _level_ops(two_f):
    """(Fx, Fy, Fz) in ascending-M level order."""
    return tuple(op[::-1, ::-1].copy() for op in angular_momentum_ops(two_f))


# ---------------------------------------------------------------- qudecimal control

@dataclass(frozen=True)
class QudecimalControl:
    omega_rf: float = 1.0
    beta: float = 1.0
    spin: SpinQuantum = field(default_factory=lambda: SpinQuantum(9))

    def __post_init__(self):
        if self.omega_rf <= 0:
            raise ConfigError("omega_rf", "must be positive")
        object.__setattr__(self, "spin", _spin(self.spin))

    def terms(self):
        """(drift, X, Y) with H(c) = drift + Omega cos(pi c) Ix + Omega sin(pi c) Iy."""
        ix, iy, iz = angular_momentum_ops(self.spin)
        return self.beta * iz @ iz, self.omega_rf * ix, self.omega_rf * iy


def qudecimal_hamiltonian(ctl, c):
    drift, x, y = ctl.terms()
    return np.cos(np.pi * c) * x + np.sin(np.pi * c) * y + drift


# ---------------------------------------------------------------- Rabi ratios

def rabi_cg_ratio(two_f, two_fp, two_m, two_m_ref=None):
    """<F',M|F,M;1,0> / <F',M_ref|F,M_ref;1,0> for pi light; M_ref defaults to -F."""
    if abs(two_m) > two_f or (two_f - two_m) % 2:
        raise InvalidQuantumNumbers(f"M = {two_m}/2 is not a projection of F = {two_f}/2")
    if abs(two_fp - two_f) > 2:
        raise InvalidQuantumNumbers("pi transition needs |F' - F| <= 1")
    two_m_ref = -two_f if two_m_ref is None else two_m_ref
    ref = cg(two_f, two_m_ref, 2, 0, two_fp, two_m_ref)
    if ref == 0.0:
        raise InvalidQuantumNumbers("reference transition is forbidden")
    return cg(two_f, two_m, 2, 0, two_fp, two_m) / ref


def rabi_ratios(two_f, two_fp, two_m_ref=None):
    """Ratios for all levels in ascending-M order."""
    return np.array([rabi_cg_ratio(two_f, two_fp, -two_f + 2 * i, two_m_ref)
                     for i in range(two_f + 1)])


# ---------------------------------------------------------------- Rydberg dressing

def single_atom_light_shift(delta, omega_r):
    """Ground-branch energy of [[0, W/2], [W/2, -delta]]."""
    if omega_r == 0:
        return 0.0
    return float(-delta / 2 + np.sign(delta or 1.0) * 0.5 * np.hypot(delta, omega_r))


def two_atom_dressed_levels(delta_i, delta_j, omega_ri, omega_rj, tie_break="raise"):
    """Perfect-blockade three-level problem in the basis (|ij>, |r_i j>, |i r_j>).

    Returns (eigenvalues ascending, ground_energy, ground_vector). The ground branch
    is the eigenvector with the largest |<ij|.>|; its phase makes <ij|.> positive.
    """
    h = np.array([[0.0, omega_ri / 2, omega_rj / 2],
                  [omega_ri / 2, -delta_i, 0.0],
                  [omega_rj / 2, 0.0, -delta_j]])
    vals, vecs = np.linalg.eigh(h)
    weight = np.abs(vecs[0])
    order = np.argsort(-weight, kind="stable")
    if weight[order[0]] - weight[order[1]] < 1e-9:
        if tie_break == "raise":
            raise AmbiguousBranch(f"two branches overlap |ij> equally ({weight[order[0]]:.6f})")
        best = min(order[:2], key=lambda k: vals[k])
    else:
        best = order[0]
    vec = vecs[:, best] * np.sign(vecs[0, best] or 1.0)
    return vals, float(vals[best]), vec


@dataclass(frozen=True)
class EntanglerSpec:
    """Laser and Zeeman parameters. Detuning of level i is delta_L + delta_Z * M_i."""

    two_f: int = 9
    two_fp: int = 11
    omega_L: float = 6.0
    delta_L: float = 6.0
    delta_Z: float = 1.0
    lifetime_us: float = CONSTANTS["rydberg_lifetime_us"]
    omega_rf_mhz: float = CONSTANTS["omega_rf_mhz"]

    @property
    def dim(self):
        return self.two_f + 1

    def projections(self):
        return np.arange(self.dim) - self.two_f / 2

    def detunings(self):
        return self.delta_L + self.delta_Z * self.projections()

    def rabi(self):
        return self.omega_L * rabi_ratios(self.two_f, self.two_fp)

    def decay_rate(self):
        """Rydberg decay rate in rf units: 1 / (tau * Omega_rf)."""
        return 1.0 / (self.lifetime_us * 1e-6 * 2 * np.pi * self.omega_rf_mhz * 1e6)


@dataclass
class DressedEntangler:
    spec: EntanglerSpec
    energies: np.ndarray
    decay: np.ndarray
    dressed_coeffs: np.ndarray  # (d, d, 3): C_ij, C_{r_i j}, C_{i r_j}
    entangling: np.ndarray      # E^ij minus both single-atom light shifts

    @property
    def dim(self):
        return self.energies.shape[0]

    def hamiltonian(self, with_decay=False):
        """Diagonal H_ent in the pair basis |i j> -> i*d + j; effective if ``with_decay``."""
        diag = self.energies.ravel().astype(complex)
        if with_decay:
            diag = diag - 0.5j * self.decay.ravel()
        return np.diag(diag)


def rydberg_entangler(spec, with_decay=True, tie_break="raise"):
    d = spec.dim
    deltas, rabi = spec.detunings(), spec.rabi()
    gamma = spec.decay_rate() if with_decay else 0.0
    energies = np.zeros((d, d))
    decay = np.zeros((d, d))
    coeffs = np.zeros((d, d, 3))
    ent = np.zeros((d, d))
    ls = [single_atom_light_shift(deltas[i], rabi[i]) for i in range(d)]
    for i in range(d):
        for j in range(d):
            _, e, vec = two_atom_dressed_levels(deltas[i], deltas[j], rabi[i], rabi[j], tie_break)
            energies[i, j] = e
            coeffs[i, j] = vec
            decay[i, j] = (vec[1] ** 2 + vec[2] ** 2) * gamma
            ent[i, j] = e - ls[i] - ls[j]
    return DressedEntangler(spec, energies, decay, coeffs, ent)


def dressed_rf_terms(entangler, g_ratio=2.0, omega_0=0.0):
    """(X, Y, Z) with H~[phi] = cos(phi) X + sin(phi) Y + Z in the dressed pair basis.

    X and Y are per unit rf Rabi frequency. Z carries the omega_0 F_z^r term.
    """
    spec = entangler.spec
    d = entangler.dim
    fa = _level_ops(spec.two_f)
    # Rydberg operators restricted to the projections reached from the qudit levels
    lo = (spec.two_fp - spec.two_f) // 2
    fr = tuple(op[lo:lo + d, lo:lo + d] for op in _level_ops(spec.two_fp))
    c = entangler.dressed_coeffs.reshape(d * d, 3)
    eye = np.eye(d)

    def assemble(ha, hr):
        aa = np.kron(ha, eye) + np.kron(eye, ha)
        ra = np.kron(hr, eye) + np.kron(eye, ha)
        ar = np.kron(ha, eye) + np.kron(eye, hr)
        return (np.outer(c[:, 0], c[:, 0]) * aa + np.outer(c[:, 1], c[:, 1]) * ra
                + np.outer(c[:, 2], c[:, 2]) * ar)

    zero = np.zeros((d, d))
    x = assemble(fa[0], g_ratio * fr[0])
    y = assemble(fa[1], g_ratio * fr[1])
    z = assemble(zero, omega_0 * fr[2])
    return x, y, z


def dressed_rf_hamiltonian(entangler, phi, omega_rf=1.0, omega_0=0.0, g_ratio=2.0, with_decay=False):
    """H~[phi] + H_ent."""
    x, y, z = dressed_rf_terms(entangler, g_ratio, omega_0)
    return omega_rf * (np.cos(phi) * x + np.sin(phi) * y) + z + entangler.hamiltonian(with_decay)


# ---------------------------------------------------------------- dual-manifold rf

def dual_manifold_rf(omega_rf, omega_0, phi, two_f=1, g_ratio=2.0):
    """Rotating-frame (H_a, H_r) for rf at 4/3 of the auxiliary Zeeman frequency."""
    fx, fy, fz = angular_momentum_ops(two_f)
    drive = np.cos(phi) * fx + np.sin(phi) * fy
    h_a = omega_rf * drive - omega_0 / 3 * fz
    h_r = g_ratio * omega_rf * drive + g_ratio * omega_0 / 3 * fz
    return h_a, h_r


def dual_manifold_rabi(omega_rf, omega_0):
    """Total precession rates (Omega_a, Omega_r)."""
    om_a = np.hypot(omega_rf, omega_0 / 3)
    return om_a, 2 * om_a


# ---------------------------------------------------------------- transfer between manifolds

def transfer_couplings(two_f, two_fe):
    """CG ratios of a pi transition F -> F_e relative to the M = +F transition, ascending M."""
    return rabi_ratios(two_f, two_fe, two_m_ref=two_f)


def transfer_terms(couplings, zeeman):
    """Generators (excited projector, X, Y, Zeeman) on g (first d) plus e (last d) levels.

    H = -Delta n_e - sum_M delta_M |e,M><e,M| + Re(W) X + Im(W) Y with W = Omega e^{i phi}.
    """
    couplings = np.asarray(couplings, dtype=float)
    d = couplings.size
    sp = np.zeros((2 * d, 2 * d), dtype=complex)
    sp[d:, :d] = np.diag(couplings)  # sigma^+ = |e,M><g,M|
    n_e = np.diag(np.r_[np.zeros(d), np.ones(d)]).astype(complex)
    zee = np.diag(np.r_[np.zeros(d), np.asarray(zeeman, dtype=float)]).astype(complex)
    x = sp + dag(sp)
    y = 1j * sp - 1j * dag(sp)
    return -n_e, x, y, -zee


def transfer_rabi_hamiltonian(detuning, zeeman, couplings, omega, phase):
    """-sum_M (Delta + delta_M)|e,M><e,M| + sum_M C_M Omega (e^{i phi} sigma^+_M + h.c.)."""
    ne, x, y, zee = transfer_terms(couplings, zeeman)
    return detuning * ne + zee + omega * (np.cos(phase) * x + np.sin(phase) * y)


# ---------------------------------------------------------------- optical pumping

def _spherical_unit(q):
    """Cartesian components of the spherical basis vector e_q."""
    if q == 0:
        return np.array([0.0, 0.0, 1.0], dtype=complex)
    return -q * np.array([1.0, 1j * q, 0.0]) / np.sqrt(2)


@dataclass(frozen=True)
class OpticalPumpingSpec:
    """Either the full dyadic (``levels``) or the simplified (alpha, beta) pair.

    ``levels`` maps 2F' to (detuning, C0, C1, C2) per excited hyperfine level.
    """

    rabi: float = 1.0
    linewidth: float = 1.0
    polarization: tuple = (0.0, 0.0, 1.0)
    levels: dict | None = None
    alpha: float | None = None
    beta: float | None = None

    def __post_init__(self):
        if self.linewidth <= 0:
            raise ConfigError("linewidth", "must be positive")
        full = self.levels is not None
        simple = self.alpha is not None or self.beta is not None
        if full == simple:
            raise ConfigError("levels", "give exactly one of levels or (alpha, beta)")
        if simple and (self.alpha is None or self.beta is None):
            raise ConfigError("alpha", "simplified form needs both alpha and beta")

    @property
    def kind(self):
        return "full" if self.levels is not None else "simplified"


def _dyadic_tensor_form(spin, eq_conj, eps, c0, c1, c2):
    f = angular_momentum_ops(spin)
    dim = spin.dim
    fe = sum(eq_conj[k] * f[k] for k in range(3))
    fl = sum(eps[k] * f[k] for k in range(3))
    fcross = sum(np.cross(eq_conj, eps)[k] * f[k] for k in range(3))
    f2 = sum(op @ op for op in f)
    dot = np.dot(eq_conj, eps)
    return (c0 * dot * np.eye(dim) + 1j * c1 * fcross
            + c2 * ((fe @ fl + fl @ fe) / 2 - dot / 3 * f2))


def optical_pumping_jumps(spec, spin):
    """[(W_q, rate)] for q = -1, 0, +1."""
    spin = _spin(spin)
    if spec.kind == "simplified":
        t = lambda k, q: spherical_tensor(spin, k, q)
        c = np.sqrt(0.75) * spec.beta
        ops = {-1: 1j * spec.alpha * t(1, 1) + c * t(2, 1),
               0: spec.beta * t(2, 0),
               1: 1j * spec.alpha * t(1, -1) - c * t(2, -1)}
        return [(ops[q], spec.linewidth) for q in (-1, 0, 1)]
    eps = np.asarray(spec.polarization, dtype=complex)
    eps = eps / np.linalg.norm(eps)
    out = []
    for q in (-1, 0, 1):
        eq_conj = _spherical_unit(q).conj()
        w = np.zeros((spin.dim, spin.dim), dtype=complex)
        for _, (delta, c0, c1, c2) in spec.levels.items():
            amp = (spec.rabi / 2) / (delta + 0.5j * spec.linewidth)
            w += amp * _dyadic_tensor_form(spin, eq_conj, eps, c0, c1, c2)
        out.append((w, spec.linewidth))
    return out


def raising_operator(two_f, two_fp, q, strength=1.0):
    """<F',M'|D_q|F,M> = strength * <F',M'|F,M;1,q>, shape (2F'+1, 2F+1), descending M."""
    ground, excited = SpinQuantum(two_f), SpinQuantum(two_fp)
    d = np.zeros((excited.dim, ground.dim))
    for col, two_m in enumerate(ground.two_ms()):
        two_mp = two_m + 2 * q
        if abs(two_mp) <= two_fp:
            d[excited.index(two_mp), col] = strength * cg(two_f, two_m, 2, 2 * q, two_fp, two_mp)
    return d


def dyadic(two_f, two_fp, q, eps, strength=1.0):
    """(e_q^* . D^dag)(eps . D) on the ground spin: absorb eps, emit e_q."""
    eps = np.asarray(eps, dtype=complex)
    # eps . D with D_p the spherical components; e_p . e_p'^* = delta
    absorb = sum(np.vdot(_spherical_unit(p), eps) * raising_operator(two_f, two_fp, p, strength)
                 for p in (-1, 0, 1))
    emit = raising_operator(two_f, two_fp, q, strength)
    return dag(emit) @ absorb


def dyadic_coefficients(two_f, two_fp, strength=1.0):
    """(C0, C1, C2) of the rank decomposition of the dyadic D^dag D.

    Fitted by least squares on the pi-absorption dyadics for all three emitted
    polarizations, which between them fix every rank.
    """
    spin = SpinQuantum(two_f)
    z = np.array([0.0, 0.0, 1.0], dtype=complex)
    cols, rhs = [], []
    for q in (-1, 0, 1):
        eq_conj = _spherical_unit(q).conj()
        target = dyadic(two_f, two_fp, q, z, strength)
        basis = [_dyadic_tensor_form(spin, eq_conj, z, *unit) for unit in np.eye(3)]
        cols.append(np.array([b.ravel() for b in basis]).T)
        rhs.append(target.ravel())
    a = np.vstack(cols)
    sol, *_ = np.linalg.lstsq(a, np.concatenate(rhs), rcond=None)
    return tuple(float(v.real) for v in sol)


# ---------------------------------------------------------------- hyperfine stack

@dataclass(frozen=True)
class HyperfineSpec:
    """A and Q in MHz; doubled nuclear and electronic spins."""

    A: float = CONSTANTS["a_1p1_mhz"]
    Q: float = CONSTANTS["q_1p1_mhz"]
    two_i: int = 9
    two_j: int = 2

    def quadrupole_prime(self):
        i, j = self.two_i / 2, self.two_j / 2
        if self.two_i < 2 or self.two_j < 2:
            return 0.0
        return self.Q / (2 * i * j * (2 * i - 1) * (2 * j - 1))


def hyperfine_hamiltonian(spec):
    """A I.J + Q'[3(I.J)^2 + 3/2 I.J - I(I+1)J(J+1)] on |M_J> (x) |M_I>, descending order."""
    jo = angular_momentum_ops(spec.two_j)
    io = angular_momentum_ops(spec.two_i)
    ij = sum(kron(a, b) for a, b in zip(jo, io))
    dim = ij.shape[0]
    h = spec.A * ij
    qp = spec.quadrupole_prime()
    if qp:
        i, j = spec.two_i / 2, spec.two_j / 2
        h = h + qp * (3 * ij @ ij + 1.5 * ij - i * (i + 1) * j * (j + 1) * np.eye(dim))
    return h


def first_order_quadrupole_shift(spec, two_m_i):
    """Q'[3(I(I+1) - M^2) - I(I+1)J(J+1)] for the M_J = 0 level (J = 1)."""
    i, j, m = spec.two_i / 2, spec.two_j / 2, two_m_i / 2
    return spec.quadrupole_prime() * (3 * (i * (i + 1) - m * m) - i * (i + 1) * j * (j + 1))


def quartic_lightshift_weight(two_m):
    """<13/2,M|1,0;11/2,M>^2 <11/2,M|1,0;9/2,M>^2: relative coupling of |M_J=0, M_I=M>
    to F'=13/2 through the intermediate F=11/2 dipole path."""
    a = cg(11, two_m, 2, 0, 13, two_m)
    b = cg(9, two_m, 2, 0, 11, two_m)
    return (a * b) ** 2


def rank2_cg_squared(two_m):
    """|<13/2,M|2,0;9/2,M>|^2."""
    return cg(9, two_m, 4, 0, 13, two_m) ** 2


def quartic_fit(m):
    return 0.3 - 0.017 * m ** 2 + 2.3e-4 * m ** 4


def hyperfine_stack(spec, autler_townes_rabi, lightshift=0.0, model="split"):
    """H_hf + H_AT (+ a tensor shift lightshift * w(M_I) on M_J = 0) in MHz.

    Basis: the 3 M_J levels of J = 1 (descending) times M_I, then the partner levels.
    ``model="split"`` gives each of M_J = +1, -1 its own partner, so both dress to
    +-Omega/(2 sqrt 2). ``model="shared"`` couples both to a single partner.
    """
    if spec.two_j != 2:
        raise ConfigError("two_j", "the Autler-Townes stack is defined for J = 1")
    di = spec.two_i + 1
    eye_i = np.eye(di)
    npart = {"split": 2, "shared": 1}.get(model)
    if npart is None:
        raise ConfigError("model", f"unknown model {model!r}")
    na = 3 * di
    dim = na + npart * di
    h = np.zeros((dim, dim), dtype=complex)
    h[:na, :na] = hyperfine_hamiltonian(spec)
    g = autler_townes_rabi / (2 * np.sqrt(2))
    # M_J = +1 is row block 0, M_J = -1 is row block 2
    up, down = slice(0, di), slice(2 * di, 3 * di)
    p_up = slice(na, na + di)
    p_down = slice(na + di, na + 2 * di) if model == "split" else p_up
    h[up, p_up] += -g * eye_i
    h[down, p_down] += g * eye_i
    h[p_up, up] += -g * eye_i
    h[p_down, down] += g * eye_i
    if lightshift:
        two_ms = SpinQuantum(spec.two_i).two_ms()
        w = np.array([quartic_lightshift_weight(tm) for tm in two_ms])
        h[di:2 * di, di:2 * di] += lightshift * np.diag(w)
    return h


def stack_index(spec, two_m_j, two_m_i):
    """Row of |M_J, M_I> in ``hyperfine_stack``."""
    return SpinQuantum(spec.two_j).index(two_m_j) * (spec.two_i + 1) + SpinQuantum(spec.two_i).index(two_m_i)


def perturbation_shifts(h0, v, state, gap_tol=1e-6, coupling_tol=1e-12):
    """(first, second) order shifts of the eigenstate of h0 at basis index ``state``.

    Degenerate levels are allowed only when V does not couple them to the target.
    """
    h0 = np.asarray(h0, dtype=complex)
    v = np.asarray(v, dtype=complex)
    if h0.shape != v.shape:
        raise ShapeMismatch(f"H0 {h0.shape} vs V {v.shape}")
    vals, vecs = np.linalg.eigh(h0)
    n = np.zeros(h0.shape[0], dtype=complex)
    n[state] = 1.0
    e_n = np.vdot(n, h0 @ n).real
    if np.linalg.norm(h0 @ n - e_n * n) > 1e-9 * max(1.0, np.abs(h0).max()):
        raise ShapeMismatch(f"basis state {state} is not an eigenstate of H0")
    vn = v @ n
    e1 = np.vdot(n, vn).real
    near = np.abs(vals - e_n) < gap_tol
    # coupling of the target to the rest of its degenerate space
    deg = vecs[:, near]
    leak = deg @ (dag(deg) @ vn) - e1 * n
    if np.linalg.norm(leak) > coupling_tol * max(1.0, np.abs(v).max()):
        raise DegenerateLevel(f"level {state} is degenerate with states coupled by V")
    far = ~near
    amps = dag(vecs[:, far]) @ vn
    e2 = float(np.sum(np.abs(amps) ** 2 / (e_n - vals[far])))
    return float(e1), e2


# ---------------------------------------------------------------- control figure of merit

def pi_light_shift(two_i, levels, rabi=1.0, two_j_ground=0):
    """V(M) = sum_F' Omega^2/(4 Delta_F') <F',M|I,M;1,0>^2 for levels {2F': Delta_F'}."""
    ms = SpinQuantum(two_i).two_ms()
    return np.array([sum(rabi ** 2 / (4 * d) * cg(two_i, tm, 2, 0, tf, tm) ** 2
                         for tf, d in levels.items()) for tm in ms])


def scattering_rates(two_i, levels, linewidth, rabi=1.0):
    """gamma(M) = Gamma sum_F' Omega^2/(4 Delta_F'^2) <F',M|I,M;1,0>^2."""
    ms = SpinQuantum(two_i).two_ms()
    return np.array([linewidth * sum(rabi ** 2 / (4 * d * d) * cg(two_i, tm, 2, 0, tf, tm) ** 2
                                     for tf, d in levels.items()) for tm in ms])


def control_figure_of_merit(two_i=9, detuning_fraction=0.5, weights=None,
                            hf_79=CONSTANTS["hf_3p1_79_mhz"], hf_911=CONSTANTS["hf_3p1_911_mhz"],
                            linewidth_mhz=CONSTANTS["gamma_3p1_khz"] * 1e-3):
    """kappa = |M^2 coefficient of the tensor shift| / sublevel-averaged scattering rate.

    The laser sits between F'=9/2 (at 0) and F'=7/2 (at +hf_79), a fraction
    ``detuning_fraction`` of the way; F'=11/2 is hf_911 below F'=9/2.
    """
    nu = detuning_fraction * hf_79
    levels = {7: hf_79 - nu, 9: -nu, 11: -hf_911 - nu}
    shift = pi_light_shift(two_i, levels)
    gam = scattering_rates(two_i, levels, linewidth_mhz)
    ms = np.array(SpinQuantum(two_i).two_ms()) / 2
    quad = np.polyfit(ms, shift, 2)[0]
    w = np.full(ms.size, 1.0 / ms.size) if weights is None else np.asarray(weights) / np.sum(weights)
    return float(abs(quad) / np.dot(w, gam))


def eigenspace_overlap(h, index, tol=1e-6):
    """(energy, weight) of basis state ``index`` on the eigenspace it overlaps most.

    Degenerate eigenvectors are arbitrary mixtures, so the weight is summed over
    every eigenvalue within ``tol`` of the best match.
    """
    vals, vecs = np.linalg.eigh(h)
    w = np.abs(vecs[index]) ** 2
    e = vals[np.argmax(w)]
    return float(e), float(w[np.abs(vals - e) < tol].sum())
