"""Qubit-in-qudit spin-cat code.

Levels use the descending order of ``spin_algebra`` (index 0 is m = J). Kitten k
holds the logical pair |0_k> = |-J+k>, |1_k> = |J-k>, with cat states
|+-_k> = (|0_k> +- |1_k>)/sqrt 2. The logical flip X = i^{2J} exp(-i pi Jx) maps
|m> to |-m> with no phase, so it is an involution and swaps the two halves.
"""

from dataclasses import dataclass
from itertools import product

import numpy as np

from ._linalg import dag, expm_hermitian, kron
from .errors import InvalidIndex, InvalidState, ShapeMismatch, UnsupportedConfiguration
from .spin_algebra import SpinQuantum, _spin, angular_momentum_ops, ladder_ops, wigner_rotation


@dataclass(frozen=True)
class CatCode:
    spin: SpinQuantum

    def __post_init__(self):
        object.__setattr__(self, "spin", _spin(self.spin))

    @property
    def dim(self):
        return self.spin.dim

    @property
    def n_kittens(self):
        """Number of kitten pairs; the integer-J midlevel belongs to none."""
        return self.dim // 2

    def require_half_integer(self):
        if self.spin.two_j % 2 == 0:
            raise UnsupportedConfiguration(
                f"J = {self.spin.j} is an integer; the midlevel m = 0 is in neither sector")


@dataclass(frozen=True)
class KittenLabel:
    m: int
    sign: int = 1

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise InvalidIndex("kitten sign must be +1 or -1")


@dataclass(frozen=True)
class ErrorMonomial:
    """Jx^l Jy^m Jz^n."""

    l: int
    m: int
    n: int

    @property
    def degree(self):
        return self.l + self.m + self.n

    def matrix(self, spin):
        jx, jy, jz = angular_momentum_ops(spin)
        mp = np.linalg.matrix_power
        return mp(jx, self.l) @ mp(jy, self.m) @ mp(jz, self.n)


@dataclass(frozen=True)
class RepetitionEncoding:
    """|0_L> = |+>^n, |1_L> = |->^n on n copies of the cat code."""

    n_rep: int
    base: CatCode

    def __post_init__(self):
        if self.n_rep < 3 or self.n_rep % 2 == 0:
            raise InvalidIndex("repetition length must be odd and >= 3")

    @property
    def dim(self):
        return self.base.dim ** self.n_rep


def _code(code):
    if isinstance(code, CatCode):
        return code
    return CatCode(code)


# ---------------------------------------------------------------- states and sectors

def kitten_levels(code, m):
    """Indices of (|0_m>, |1_m>)."""
    code = _code(code)
    if not 0 <= m < code.n_kittens:
        raise InvalidIndex(f"kitten index {m} outside 0..{code.n_kittens - 1}")
    return code.dim - 1 - m, m


def logical_basis(code, m, bit):
    code = _code(code)
    i0, i1 = kitten_levels(code, m)
    v = np.zeros(code.dim, dtype=complex)
    v[(i0, i1)[bit]] = 1.0
    return v


def code_states(code, label):
    """(|-J+m> +- |J-m>)/sqrt 2."""
    code = _code(code)
    i0, i1 = kitten_levels(code, label.m)
    v = np.zeros(code.dim, dtype=complex)
    v[i0] = 1 / np.sqrt(2)
    v[i1] = label.sign / np.sqrt(2)
    return v


def kitten_qubit(code, m, alpha, beta):
    """alpha|0_m> + beta|1_m>."""
    return alpha * logical_basis(code, m, 0) + beta * logical_basis(code, m, 1)


def subspace_projectors(code):
    """(Pi0, Pi1): lower (m < 0) and upper (m > 0) halves."""
    code = _code(code)
    code.require_half_integer()
    half = code.dim // 2
    upper = np.r_[np.ones(half), np.zeros(half)]
    return np.diag(1 - upper).astype(complex), np.diag(upper).astype(complex)


def kitten_projector(code, m):
    code = _code(code)
    p = np.zeros((code.dim, code.dim), dtype=complex)
    for i in kitten_levels(code, m):
        p[i, i] = 1.0
    return p


def sector_z(code):
    """Pi0 - Pi1: maps |+_k> to |-_k> on every kitten."""
    p0, p1 = subspace_projectors(code)
    return p0 - p1


# ---------------------------------------------------------------- gates

def _phase(code):
    return 1j ** code.spin.two_j


def logical_gate(code, kind, theta=None):
    """Rank-preserving logical gates.

    X, Y, Z are i^{2J} exp(-i pi J_axis); the phase makes X the pure flip m -> -m.
    CNOT and Toffoli act on d^2 and d^3 dimensional spaces; ZZ takes ``theta``.
    """
    code = _code(code)
    j = angular_momentum_ops(code.spin)
    if kind in ("X", "Y", "Z"):
        axis = "XYZ".index(kind)
        return _phase(code) * expm_hermitian(j[axis], np.pi)
    code.require_half_integer()
    eye = np.eye(code.dim)
    p0, p1 = subspace_projectors(code)
    x = logical_gate(code, "X")
    if kind == "CNOT":
        return kron(p0, eye) + kron(p1, x)
    if kind == "CZ":
        return kron(p0, eye) + kron(p1, sector_z(code))
    if kind == "ZZ":
        if theta is None:
            raise InvalidIndex("ZZ needs theta")
        zz = np.diag(kron(sector_z(code), sector_z(code))).real
        return np.diag(np.exp(-1j * theta * zz))
    if kind == "Toffoli":
        both = kron(p1, p1)
        return kron(np.eye(code.dim ** 2) - both, eye) + kron(both, x)
    raise InvalidIndex(f"unknown gate {kind!r}")


def vs_swap(code):
    """Pi0 Pi0 + Pi1 Pi1 + X Pi0 (x) X Pi1 + X Pi1 (x) X Pi0: swaps kitten indices."""
    code = _code(code)
    p0, p1 = subspace_projectors(code)
    x = logical_gate(code, "X")
    return kron(p0, p0) + kron(p1, p1) + kron(x @ p0, x @ p1) + kron(x @ p1, x @ p0)


def swap_operator(d):
    s = np.zeros((d * d, d * d))
    for i, k in product(range(d), repeat=2):
        s[k * d + i, i * d + k] = 1.0
    return s


# ---------------------------------------------------------------- errors and KL conditions

def correctable_error_set(code):
    """Monomials Jx^l Jy^m Jz^n with l + m + n <= floor((2J - 1)/2)."""
    code = _code(code)
    kmax = max(code.spin.two_j - 1, 0) // 2
    return [ErrorMonomial(l, m, n) for l in range(kmax + 1) for m in range(kmax + 1)
            for n in range(kmax + 1) if l + m + n <= kmax]


def codewords(code):
    """(|0_L>, |1_L>) for a CatCode (the cat pair) or a RepetitionEncoding."""
    if isinstance(code, RepetitionEncoding):
        plus = code_states(code.base, KittenLabel(0, 1))
        minus = code_states(code.base, KittenLabel(0, -1))
        return kron(*[plus] * code.n_rep).ravel(), kron(*[minus] * code.n_rep).ravel()
    code = _code(code)
    return code_states(code, KittenLabel(0, 1)), code_states(code, KittenLabel(0, -1))


def embed(op, site, n, d):
    """``op`` on spin ``site`` of n spins."""
    return kron(*[op if s == site else np.eye(d) for s in range(n)])


def single_spin_errors(encoding, monomials=None):
    """Each monomial of the base code placed on each spin (identity counted once)."""
    base = encoding.base
    monomials = correctable_error_set(base) if monomials is None else monomials
    d = base.dim
    out = [np.eye(encoding.dim)]
    for site in range(encoding.n_rep):
        for mono in monomials:
            if mono.degree == 0:
                continue
            out.append(embed(mono.matrix(base.spin), site, encoding.n_rep, d))
    return out


def kl_check(code, errors, tol=1e-9):
    """(passes, worst |<c_i|E_a^dag E_b|c_j> - C_ab delta_ij|)."""
    words = np.array(codewords(code)).T
    dim = words.shape[0]
    vecs = []
    for e in errors:
        e = np.asarray(e)
        if e.shape != (dim, dim):
            raise ShapeMismatch(f"error of shape {e.shape} on a {dim}-dimensional code")
        vecs.append(e @ words)
    ev = np.stack(vecs)  # (n_err, dim, 2)
    gram = np.einsum("aki,bkj->abij", ev.conj(), ev)
    off = np.abs(gram[:, :, 0, 1]).max()
    diag = np.abs(gram[:, :, 0, 0] - gram[:, :, 1, 1]).max()
    worst = float(max(off, diag))
    return worst <= tol, worst


# ---------------------------------------------------------------- phase code

@dataclass
class PhaseCode:
    encoding: RepetitionEncoding
    syndromes: list

    def decode(self, bits):
        """Minimum-weight set of spins (0-based) to correct with Z for syndrome +-1 bits."""
        n = self.encoding.n_rep
        bits = [int(b) for b in bits]
        if len(bits) != n - 1 or any(b not in (1, -1) for b in bits):
            raise InvalidState(f"need {n - 1} syndrome values of +-1")
        # flips f_i with f_i xor f_{i+1} = (bit_i == -1); two candidate patterns
        pattern = [0]
        for b in bits:
            pattern.append(pattern[-1] ^ (b == -1))
        if sum(pattern) > n // 2:
            pattern = [1 - p for p in pattern]
        return tuple(i for i, p in enumerate(pattern) if p)

    def correction(self, bits):
        z = sector_z(self.encoding.base)
        n, d = self.encoding.n_rep, self.encoding.base.dim
        u = np.eye(self.encoding.dim, dtype=complex)
        for site in self.decode(bits):
            u = embed(z, site, n, d) @ u
        return u

    def measure(self, state):
        """Syndrome bits of a state in the code space plus at most one Z per spin."""
        out = []
        for s in self.syndromes:
            val = np.vdot(state, s @ state).real
            if abs(abs(val) - 1) > 1e-9:
                raise InvalidState("state is not a syndrome eigenstate")
            out.append(int(np.sign(val)))
        return out


def phase_code(encoding):
    """Stabilizers X_i X_{i+1} (X the logical flip) and the majority decoder."""
    x = logical_gate(encoding.base, "X")
    n, d = encoding.n_rep, encoding.base.dim
    syn = [embed(x, i, n, d) @ embed(x, i + 1, n, d) for i in range(n - 1)]
    return PhaseCode(encoding, syn)


def phase_recovery(encoding, rho):
    """Measure all syndromes, apply the decoded Z corrections, and average over outcomes."""
    pc = phase_code(encoding)
    eye = np.eye(encoding.dim)
    out = np.zeros_like(rho)
    for bits in product((1, -1), repeat=encoding.n_rep - 1):
        proj = eye
        for b, s in zip(bits, pc.syndromes):
            proj = proj @ (eye + b * s) / 2
        u = pc.correction(bits) @ proj
        out += u @ rho @ dag(u)
    return out


# ---------------------------------------------------------------- amplitude recovery

def amplitude_recovery(code, rho):
    """Swap the data kitten into a fresh |+_0> ancilla with V_s and keep the ancilla."""
    code = _code(code)
    d = code.dim
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (d, d):
        raise ShapeMismatch(f"need a {d}x{d} density matrix")
    anc = code_states(code, KittenLabel(0, 1))
    vs = vs_swap(code)
    big = vs @ np.kron(rho, np.outer(anc, anc.conj())) @ dag(vs)
    return np.einsum("aiaj->ij", big.reshape(d, d, d, d))


def kitten_shift(code, m):
    """Partial isometry |b_m> -> |b_0>."""
    code = _code(code)
    u = np.zeros((code.dim, code.dim), dtype=complex)
    for bit in (0, 1):
        u += np.outer(logical_basis(code, 0, bit), logical_basis(code, m, bit))
    return u


def measured_amplitude_recovery(code, rho):
    """Reference channel: measure the kitten index, shift it back to 0."""
    code = _code(code)
    out = np.zeros((code.dim, code.dim), dtype=complex)
    for m in range(code.n_kittens):
        k = kitten_shift(code, m)
        out += k @ rho @ dag(k)
    return out


def channel_distance(chan_a, chan_b, d):
    """Max Hilbert-Schmidt distance of two channels over the matrix units |a><b|."""
    worst = 0.0
    for a, b in product(range(d), repeat=2):
        e = np.zeros((d, d), dtype=complex)
        e[a, b] = 1.0
        worst = max(worst, float(np.linalg.norm(chan_a(e) - chan_b(e))))
    return worst


def amplitude_recovery_kraus(code):
    """Kraus operators (<i| x 1) V_s (1 x |+_0>) of ``amplitude_recovery``."""
    code = _code(code)
    d = code.dim
    anc = code_states(code, KittenLabel(0, 1))
    v = vs_swap(code).reshape(d, d, d, d)  # (out1, out2, in1, in2)
    return [np.einsum("bcd,d->bc", v[i], anc) for i in range(d)]


def apply_local_channel(rho, kraus, site, n, d):
    """Apply a single-spin channel to spin ``site`` of an n-spin density matrix."""
    t = rho.reshape([d] * 2 * n)
    out = np.zeros_like(t)
    for k in kraus:
        u = np.tensordot(k, t, axes=([1], [site]))
        u = np.moveaxis(u, 0, site)
        u = np.tensordot(u, k.conj(), axes=([n + site], [1]))
        out += np.moveaxis(u, -1, n + site)
    return out.reshape(rho.shape)


def amplitude_recovery_multi(encoding, rho):
    """Amplitude recovery applied to every spin of a repetition block."""
    base = encoding.base
    kraus = amplitude_recovery_kraus(base)
    for site in range(encoding.n_rep):
        rho = apply_local_channel(rho, kraus, site, encoding.n_rep, base.dim)
    return rho


# ---------------------------------------------------------------- error rates and gadgets

def rotation_error_ratio(code, theta):
    """First-order (p_phase, p_amp) for small rotations about z and x."""
    code = _code(code)
    if abs(theta) > 0.3:
        raise InvalidIndex("small-angle formulas need |theta| <= 0.3")
    j = code.spin.j
    return (theta * j) ** 2, theta ** 2 * j / 2


def rotation_error_exact(code, theta):
    """(|<-|U_Z|+>|^2, weight of U_X|+> on kitten 1)."""
    code = _code(code)
    jx, _, jz = angular_momentum_ops(code.spin)
    plus = code_states(code, KittenLabel(0, 1))
    minus = code_states(code, KittenLabel(0, -1))
    p_phase = abs(np.vdot(minus, expm_hermitian(jz, theta) @ plus)) ** 2
    out = expm_hermitian(jx, theta) @ plus
    p_amp = float(np.real(np.vdot(out, kitten_projector(code, 1) @ out))) if code.n_kittens > 1 else 0.0
    return float(p_phase), p_amp


def hadamard_gadget(code, alpha, beta, m=0):
    """Teleported Hadamard on kitten m: CZ to a |+_m> ancilla, X-measure the data, flip on -.

    Returns {outcome: (probability, corrected ancilla state)}.
    """
    code = _code(code)
    d = code.dim
    data = kitten_qubit(code, m, alpha, beta)
    anc = code_states(code, KittenLabel(m, 1))
    state = logical_gate(code, "CZ") @ np.kron(data, anc)
    flip = logical_gate(code, "X")
    out = {}
    for sign in (1, -1):
        proj = sum(np.outer(code_states(code, KittenLabel(k, sign)),
                            code_states(code, KittenLabel(k, sign)).conj()) for k in range(code.n_kittens))
        branch = np.kron(proj, np.eye(d)) @ state
        p = float(np.vdot(branch, branch).real)
        reduced = branch.reshape(d, d)
        # data is in the measured cat; read off the ancilla
        cat = code_states(code, KittenLabel(m, sign))
        anc_state = cat.conj() @ reduced
        anc_state = anc_state / np.linalg.norm(anc_state)
        if sign == -1:
            anc_state = flip @ anc_state
        out[sign] = (p, anc_state)
    return out


def hadamard_gadget_check(code, rng=None, samples=10_000, trials=3):
    """(gadget exact for random inputs, best SU(2) overlap |<+|U|0_0>|^2 over sampled rotations)."""
    code = _code(code)
    rng = np.random.default_rng(0) if rng is None else rng
    ok = True
    for _ in range(trials):
        a, b = rng.normal(size=2) + 1j * rng.normal(size=2)
        nrm = np.hypot(abs(a), abs(b))
        a, b = a / nrm, b / nrm
        target = (a * code_states(code, KittenLabel(0, 1)) + b * code_states(code, KittenLabel(0, -1)))
        for p, st in hadamard_gadget(code, a, b).values():
            ok &= abs(abs(np.vdot(target, st)) - 1) < 1e-10 and abs(p - 0.5) < 1e-10
    plus = code_states(code, KittenLabel(0, 1))
    zero = logical_basis(code, 0, 0)
    best = 0.0
    angles = rng.uniform(0, 2 * np.pi, size=(samples, 3))
    angles[:, 1] = np.arccos(rng.uniform(-1, 1, size=samples))
    for al, be, ga in angles:
        u = wigner_rotation(code.spin, al, be, ga)
        best = max(best, abs(np.vdot(plus, u @ zero)) ** 2)
    return bool(ok), float(best)


def one_axis_twisted_cat(code):
    """exp(-i pi Jx / 2) exp(-i pi Jz^2 / 2) |Jx = J>."""
    code = _code(code)
    jx, _, jz = angular_momentum_ops(code.spin)
    _, vecs = np.linalg.eigh(jx)
    start = vecs[:, -1]
    return expm_hermitian(jx, np.pi / 2) @ expm_hermitian(jz @ jz, np.pi / 2) @ start


def optical_pumping_event(code, q=1):
    """Normalized J_+ (q = 1) or J_- (q = -1) jump, a one-level amplitude error."""
    code = _code(code)
    jp, jm = ladder_ops(code.spin)
    op = jp if q == 1 else jm
    return op / np.linalg.norm(op, 2)
