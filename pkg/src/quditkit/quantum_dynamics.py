"""Closed- and open-system propagation and the fidelity functionals.

Density matrices are vectorized by column stacking, ``vec(rho) = rho.ravel(order="F")``,
so ``vec(A rho B) = (B^T kron A) vec(rho)``.
"""

from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from ._linalg import as_matrix, dag, expm, expm_hermitian, is_hermitian, require_square
from .errors import InvalidState, ShapeMismatch, StepTooLarge

TRACE_DRIFT_LIMIT = 1e-4


def matrix_exponential(a):
    return expm(a)


def propagate_unitary(steps):
    """Ordered product of exp(-i H_j t_j) over ``steps`` = [(H_j, t_j), ...], first step rightmost.

    Non-Hermitian generators are allowed and give a non-unitary propagator.
    """
    steps = list(steps)
    if not steps:
        raise ShapeMismatch("empty schedule")
    u = None
    for h, t in steps:
        h = require_square(h)
        if t <= 0:
            raise ShapeMismatch(f"step durations must be positive, got {t}")
        if u is None:
            u = np.eye(h.shape[0], dtype=complex)
        elif h.shape != u.shape:
            raise ShapeMismatch(f"step generator shape {h.shape} differs from {u.shape}")
        step = expm_hermitian(h, t) if is_hermitian(h, 1e-12) else expm(-1j * t * h)
        u = step @ u
    return u


@dataclass
class LindbladModel:
    """H plus jumps [(L, rate), ...]; the generator is
    -i[H, rho] + sum rate (L rho L^dag - {L^dag L, rho}/2), with H allowed non-Hermitian."""

    hamiltonian: np.ndarray
    jumps: list = field(default_factory=list)

    def __post_init__(self):
        self.hamiltonian = require_square(self.hamiltonian)
        d = self.dim
        clean = []
        for op, rate in self.jumps:
            op = as_matrix(op)
            if op.shape != (d, d):
                raise ShapeMismatch(f"jump operator shape {op.shape} does not match H {(d, d)}")
            if rate < 0:
                raise ShapeMismatch(f"negative jump rate {rate}")
            clean.append((op, float(rate)))
        self.jumps = clean

    @property
    def dim(self):
        return self.hamiltonian.shape[0]

    def scaled_jumps(self):
        d = self.dim
        if not self.jumps:
            return np.zeros((0, d, d), dtype=complex)
        return np.array([np.sqrt(rate) * op for op, rate in self.jumps])

    def effective_hamiltonian(self):
        """H - (i/2) sum rate L^dag L: the no-jump generator."""
        heff = self.hamiltonian.copy()
        for op, rate in self.jumps:
            heff = heff - 0.5j * rate * (dag(op) @ op)
        return heff

    def max_rate(self):
        return max((rate * np.linalg.norm(op, 2) ** 2 for op, rate in self.jumps), default=0.0)


def vec(rho):
    return np.asarray(rho).ravel(order="F")


def unvec(v):
    d = int(round(np.sqrt(v.size)))
    return np.asarray(v).reshape((d, d), order="F")


def lindbladian(model):
    """Superoperator of the master equation acting on column-stacked rho."""
    d = model.dim
    eye = np.eye(d)
    h = model.hamiltonian
    # -i(H rho - rho H^dag) also covers a non-Hermitian H
    sup = -1j * np.kron(eye, h) + 1j * np.kron(h.conj(), eye)
    for op, rate in model.jumps:
        ld = dag(op) @ op
        sup += rate * (np.kron(op.conj(), op)
                       - 0.5 * np.kron(eye, ld) - 0.5 * np.kron(ld.T, eye))
    return sup


def cp_map(model, t):
    """exp(t L) as a d^2 x d^2 matrix on column-stacked density matrices."""
    return expm(t * lindbladian(model))


def check_density_matrix(rho, tol=1e-9):
    rho = require_square(rho)
    if not is_hermitian(rho, tol):
        raise InvalidState("density matrix is not Hermitian")
    if abs(np.trace(rho) - 1.0) > tol:
        raise InvalidState(f"density matrix trace is {np.trace(rho).real:.3g}, expected 1")
    if np.linalg.eigvalsh(rho).min() < -tol:
        raise InvalidState("density matrix is not positive semidefinite")
    return rho


def default_step(model, t):
    """Step with rate*dt <= 0.01 and |H|*dt <= 0.01, rounded so it divides t."""
    scale = max(model.max_rate() / 0.01, np.linalg.norm(model.hamiltonian, 2) / 0.01, 1e-300)
    nsteps = max(1, int(np.ceil(t * scale)))
    return t / nsteps, nsteps


def lindblad_trajectory(model, rho0, t, dt=None, samples=1, validate=True):
    """RK4 integration; returns (times, states) at ``samples`` equal intervals plus t=0."""
    rho0 = check_density_matrix(rho0) if validate else require_square(rho0)
    if rho0.shape[0] != model.dim:
        raise ShapeMismatch(f"rho0 is {rho0.shape}, model dimension is {model.dim}")
    if dt is None:
        dt, nsteps = default_step(model, t)
    else:
        nsteps = max(1, int(round(t / dt)))
        dt = t / nsteps
    samples = max(1, min(int(samples), nsteps))
    # round the step count up so samples land on steps
    nsteps = int(np.ceil(nsteps / samples)) * samples
    dt = t / nsteps
    states = _kernels.rk4_lindblad(model.effective_hamiltonian(), model.scaled_jumps(),
                                   rho0, dt, nsteps, nsteps // samples)
    _check_trace(model, rho0, states)
    times = np.linspace(0.0, t, samples + 1)
    return times, states


def _check_trace(model, rho0, states):
    tr0 = np.trace(rho0).real
    traces = np.einsum("nii->n", states)
    if not np.all(np.isfinite(traces)):
        raise StepTooLarge("integration produced non-finite values; reduce dt")
    if is_hermitian(model.hamiltonian, 1e-12):
        drift = np.max(np.abs(traces - tr0))
        if drift > TRACE_DRIFT_LIMIT:
            raise StepTooLarge(f"trace drifted by {drift:.3g}; reduce dt")
    elif np.max(traces.real) > tr0 + TRACE_DRIFT_LIMIT:
        raise StepTooLarge("trace grew under a lossy generator; reduce dt")


def lindblad_propagate(model, rho0, t, dt=None, validate=True):
    """rho(t) from fixed-step RK4."""
    return lindblad_trajectory(model, rho0, t, dt, 1, validate)[1][-1]


# ---------------------------------------------------------------- fidelities

def _as_density(x):
    x = np.asarray(x, dtype=complex)
    if x.ndim == 1:
        return np.outer(x, x.conj())
    return x


def fidelity(kind, target, achieved, square=False):
    """Overlap of ``achieved`` with ``target``; ``kind`` is state, unitary, isometry or process.

    ``square`` only affects the process kind, whose default is the un-squared
    |Tr(E_tar^dag E)| / d^2.
    """
    target = np.asarray(target, dtype=complex)
    achieved = np.asarray(achieved, dtype=complex)
    if target.shape != achieved.shape and kind != "state":
        raise ShapeMismatch(f"target {target.shape} vs achieved {achieved.shape}")
    if kind == "state":
        if target.ndim == 1 and achieved.ndim == 1:
            if target.shape != achieved.shape:
                raise ShapeMismatch(f"target {target.shape} vs achieved {achieved.shape}")
            return float(abs(np.vdot(target, achieved)) ** 2)
        a, b = _as_density(target), _as_density(achieved)
        if a.shape != b.shape:
            raise ShapeMismatch(f"target {a.shape} vs achieved {b.shape}")
        return float(np.real(np.trace(a @ b)))
    if kind in ("unitary", "isometry"):
        if target.ndim != 2:
            raise ShapeMismatch("unitary and isometry targets are matrices")
        k = target.shape[1]
        return float(abs(np.vdot(target, achieved)) ** 2 / k ** 2)
    if kind == "process":
        d2 = target.shape[0]
        val = abs(np.vdot(target, achieved)) / d2
        return float(val ** 2 if square else val)
    raise ShapeMismatch(f"unknown fidelity kind {kind!r}")


def unitary_superoperator(u):
    """Column-stacking superoperator of rho -> U rho U^dag."""
    return np.kron(u.conj(), u)


# ---------------------------------------------------------------- two-level decay

def two_level_coherence(delta, gamma, t):
    """Ground-state coherence transferred by decay from two excited levels split by delta.

    Returned as the ratio rho_g01(t) / rho_e01(0).
    """
    if gamma <= 0:
        raise ValueError("gamma must be positive")
    z = 1j * delta + gamma
    return gamma / z * (1.0 - np.exp(-z * t))


def coherence_decay_model(delta, gamma):
    """Four levels (e0, e1, g0, g1): e1 shifted by -delta, e_k decays to g_k at rate gamma.

    Both decays emit the same photon mode, so one jump operator carries the coherence.
    """
    h = np.zeros((4, 4), dtype=complex)
    h[1, 1] = -delta
    op = np.zeros((4, 4), dtype=complex)
    op[2, 0] = op[3, 1] = 1.0
    jumps = [(op, gamma)]
    rho0 = np.zeros((4, 4), dtype=complex)
    rho0[:2, :2] = 0.5
    return LindbladModel(h, jumps), rho0


def coherence_transfer_fidelity(delta, gamma, t):
    """Overlap of the decayed state with (g0 + g1)/sqrt(2), starting from (e0 + e1)/sqrt(2)."""
    ground_pop = 1.0 - np.exp(-gamma * t)
    return 0.5 * ground_pop + 0.5 * np.real(two_level_coherence(delta, gamma, t))
