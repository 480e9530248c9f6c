"""Piecewise-constant optimal control (GRAPE) and the digital layered optimizer.

A ``ControlProblem`` is a weighted ensemble of ``Channel`` objects that share
one waveform. Each channel has its own drift, control generators and target
pair (P, V): the channel fidelity is |Tr(V^dag U P)|^2 / k^2 with k the number
of columns of P. State maps, unitaries, isometries, robust two-point control
and the dual-manifold rf problem all reduce to this form.
"""

from dataclasses import dataclass, field
from math import ceil

import numpy as np
from scipy.optimize import minimize

from . import _kernels
from ._linalg import dag, expm, expm_hermitian, is_hermitian, require_square
from .errors import ConfigError, Diverged, ShapeMismatch
from .spin_algebra import SpinQuantum, angular_momentum_ops, clebsch_gordan


# ---------------------------------------------------------------- counting

def min_parameters(k, d):
    """Parameters needed for a K-dimensional isometry in a D-dimensional space."""
    if not 1 <= k <= d:
        raise ConfigError("k", f"need 1 <= K <= D, got K={k}, D={d}")
    return 2 * k * d - k * k - 1


def symmetric_dim(d):
    return d * (d + 1) // 2


def min_parameters_symmetric(k, d=10):
    """Symmetric two-qudit gate on a k-level qudit embedded in d levels."""
    return min_parameters(symmetric_dim(k), symmetric_dim(d))


def symmetrizer(d):
    """Isometry (d^2, d(d+1)/2) onto the exchange-symmetric two-qudit subspace."""
    cols = []
    for i in range(d):
        for j in range(i, d):
            v = np.zeros(d * d)
            v[i * d + j] += 1.0
            v[j * d + i] += 1.0
            cols.append(v / np.linalg.norm(v))
    return np.array(cols).T


def min_layers(d):
    """Layers of (local SU(d) x SU(d), entangler) needed to reach SU(d^2)."""
    if d < 2:
        raise ConfigError("d", "need d >= 2")
    d2 = d * d
    num, den = d2 * (d2 + 1), 2 * (2 * d2 - 1)
    return -(-num // den)


# ---------------------------------------------------------------- target library

def gell_mann_basis(d):
    """Symmetric, antisymmetric and diagonal generalized Gell-Mann matrices."""
    if d < 2:
        raise ConfigError("d", "need d >= 2")
    out = []
    for j in range(d):
        for k in range(j + 1, d):
            s = np.zeros((d, d), dtype=complex)
            s[j, k] = s[k, j] = 1.0
            out.append(s)
    for j in range(d):
        for k in range(j + 1, d):
            a = np.zeros((d, d), dtype=complex)
            a[j, k], a[k, j] = -1j, 1j
            out.append(a)
    for l in range(1, d):
        diag = np.zeros(d)
        diag[:l] = 1.0
        diag[l] = -l
        out.append(np.diag(diag * np.sqrt(2.0 / (l * (l + 1)))).astype(complex))
    return out


def fourier_gate(d):
    """Qudit Hadamard H_d|j> = sum_k w^{jk}|k>/sqrt(d)."""
    w = np.exp(2j * np.pi / d)
    idx = np.arange(d)
    return w ** np.outer(idx, idx) / np.sqrt(d)


def haar_unitary(d, rng):
    z = (rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def haar_state(d, rng):
    v = rng.normal(size=d) + 1j * rng.normal(size=d)
    return v / np.linalg.norm(v)


def target_library(name, d, theta=np.pi / 2, seed=0):
    if d < 2:
        raise ConfigError("d", "need d >= 2")
    if name == "cphase":
        w = np.exp(2j * np.pi / d)
        idx = np.arange(d)
        return np.diag((w ** np.outer(idx, idx)).ravel())
    if name == "csum":
        u = np.zeros((d * d, d * d), dtype=complex)
        for i in range(d):
            for j in range(d):
                u[i * d + (i + j) % d, i * d + j] = 1.0
        return u
    if name == "hadamard_d":
        return fourier_gate(d)
    if name == "molmer_sorensen":
        jz = np.diag(angular_momentum_ops(d - 1)[2]).real
        total = (jz[:, None] + jz[None, :]).ravel()
        return np.diag(np.exp(-0.5j * theta * total ** 2))
    if name == "haar_random":
        return haar_unitary(d, np.random.default_rng(seed))
    raise ConfigError("name", f"unknown target {name!r}")


# ---------------------------------------------------------------- controls

@dataclass
class LinearControl:
    """H += c * generator."""

    generator: np.ndarray

    def h(self, c):
        return c * self.generator

    def dh(self, c):
        return self.generator


@dataclass
class PhaseControl:
    """H += cos(pi c) X + sin(pi c) Y, with c the phase in units of pi."""

    x: np.ndarray
    y: np.ndarray

    def h(self, c):
        return np.cos(np.pi * c) * self.x + np.sin(np.pi * c) * self.y

    def dh(self, c):
        return np.pi * (-np.sin(np.pi * c) * self.x + np.cos(np.pi * c) * self.y)


@dataclass
class Channel:
    drift: np.ndarray
    controls: list
    p: np.ndarray
    v: np.ndarray
    weight: float = 1.0

    def __post_init__(self):
        self.drift = require_square(self.drift)
        d = self.drift.shape[0]
        self.p = np.asarray(self.p, dtype=complex).reshape(d, -1)
        self.v = np.asarray(self.v, dtype=complex).reshape(d, -1)
        if self.p.shape != self.v.shape:
            raise ShapeMismatch(f"P {self.p.shape} vs V {self.v.shape}")
        for c in self.controls:
            gens = [c.generator] if isinstance(c, LinearControl) else [c.x, c.y]
            if any(np.shape(g) != (d, d) for g in gens):
                raise ShapeMismatch("control generator does not match the drift")

    @property
    def k(self):
        return self.p.shape[1]

    def step_hamiltonians(self, values):
        """(hs, dhs) for a waveform of shape (n, m)."""
        n = values.shape[0]
        d = self.drift.shape[0]
        m = len(self.controls)
        hs = np.broadcast_to(self.drift, (n, d, d)).copy()
        dhs = np.empty((n, m, d, d), dtype=complex)
        for j in range(n):
            for c, ctl in enumerate(self.controls):
                hs[j] += ctl.h(values[j, c])
                dhs[j, c] = ctl.dh(values[j, c])
        return hs, dhs


@dataclass
class ControlProblem:
    channels: list
    total_time: float
    name: str = "problem"

    def __post_init__(self):
        if self.total_time <= 0:
            raise ConfigError("total_time", "must be positive")
        if not self.channels:
            raise ConfigError("channels", "need at least one channel")
        m = {len(ch.controls) for ch in self.channels}
        if len(m) != 1:
            raise ShapeMismatch("channels disagree on the number of controls")
        w = sum(ch.weight for ch in self.channels)
        for ch in self.channels:
            ch.weight = ch.weight / w

    @property
    def n_controls(self):
        return len(self.channels[0].controls)


def state_problem(drift, controls, psi0, psi1, total_time):
    return ControlProblem([Channel(drift, controls, psi0, psi1)], total_time, "state")


def unitary_problem(drift, controls, target, total_time):
    d = target.shape[0]
    return ControlProblem([Channel(drift, controls, np.eye(d), target)], total_time, "unitary")


def isometry_problem(drift, controls, target, inputs, total_time):
    """Target V (d, k) applied to the input columns ``inputs`` (d, k)."""
    return ControlProblem([Channel(drift, controls, inputs, target)], total_time, "isometry")


def robust_problem(problem, generator, delta):
    """Two-point ensemble H -> H +- delta * generator with equal weights."""
    chans = []
    for ch in problem.channels:
        for sgn in (1.0, -1.0):
            chans.append(Channel(ch.drift + sgn * delta * generator, ch.controls, ch.p, ch.v,
                                 ch.weight / 2))
    return ControlProblem(chans, problem.total_time, problem.name + "-robust")


# ---------------------------------------------------------------- waveforms

@dataclass
class PiecewiseWaveform:
    values: np.ndarray   # (n, m)
    dt: float
    slew_cap: float | None = None

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float)
        if self.values.ndim == 1:
            self.values = self.values[:, None]
        if self.values.shape[0] < 1:
            raise ConfigError("values", "waveform needs at least one step")

    @property
    def n(self):
        return self.values.shape[0]

    def max_slew(self):
        return float(np.max(np.abs(np.diff(self.values, axis=0)), initial=0.0))


def _to_values(x, n, m, slew_cap):
    """Map optimizer variables to the waveform; with a slew cap they are increments."""
    x = x.reshape(n, m)
    if slew_cap is None:
        return x, None
    inc = slew_cap * np.tanh(x[1:])
    vals = np.vstack([x[:1], x[:1] + np.cumsum(inc, axis=0)])
    return vals, inc


def _from_values(vals, slew_cap):
    if slew_cap is None:
        return vals.ravel().copy()
    inc = np.clip(np.diff(vals, axis=0) / slew_cap, -0.999999, 0.999999)
    return np.vstack([vals[:1], np.arctanh(inc)]).ravel()


def _chain_slew(grad_vals, x, n, m, slew_cap):
    if slew_cap is None:
        return grad_vals.ravel()
    g = grad_vals.reshape(n, m)
    out = np.empty_like(g)
    # c_j = x_0 + sum_{i<=j, i>=1} cap tanh(x_i)
    tail = np.cumsum(g[::-1], axis=0)[::-1]
    out[0] = tail[0]
    xr = x.reshape(n, m)
    out[1:] = tail[1:] * slew_cap * (1 - np.tanh(xr[1:]) ** 2)
    return out.ravel()


# ---------------------------------------------------------------- objective

def fidelity_and_gradient(problem, values, dt=None):
    """Ensemble fidelity and dF/dc of shape (n, m)."""
    values = np.asarray(values, dtype=float)
    if values.ndim == 1:
        values = values[:, None]
    if not np.all(np.isfinite(values)):
        raise Diverged("waveform contains non-finite values")
    n = values.shape[0]
    dt = problem.total_time / n if dt is None else dt
    fid = 0.0
    grad = np.zeros_like(values)
    for ch in problem.channels:
        hs, dhs = ch.step_hamiltonians(values)
        g, dg = _kernels.grape_overlap_grad(hs, dhs, dt, ch.p, ch.v)
        k2 = ch.k ** 2
        fid += ch.weight * abs(g) ** 2 / k2
        grad += ch.weight * 2.0 * np.real(np.conj(g) * dg) / k2
    if not np.isfinite(fid) or not np.all(np.isfinite(grad)):
        raise Diverged("objective or gradient is not finite")
    return float(fid), grad


def objective(problem, values):
    return fidelity_and_gradient(problem, values)[0]


def objective_gradient(problem, values):
    return fidelity_and_gradient(problem, values)[1]


def robust_objective(problem, generator, delta, values):
    """(F[+delta] + F[-delta]) / 2."""
    return objective(robust_problem(problem, generator, delta), values)


def propagator(channel, values, dt, extra=None):
    """Full propagator of one channel; ``extra`` is added to every step (may be non-Hermitian)."""
    values = np.atleast_2d(np.asarray(values, dtype=float).T).T
    hs, _ = channel.step_hamiltonians(values)
    d = channel.drift.shape[0]
    u = np.eye(d, dtype=complex)
    for h in hs:
        if extra is not None:
            h = h + extra
        step = expm_hermitian(h, dt) if is_hermitian(h, 1e-12) else expm(-1j * dt * h)
        u = step @ u
    return u


def channel_fidelity(channel, values, dt, extra=None):
    u = propagator(channel, values, dt, extra)
    return float(abs(np.vdot(channel.v, u @ channel.p)) ** 2 / channel.k ** 2)


# ---------------------------------------------------------------- optimizer

@dataclass
class GrapeConfig:
    max_iters: int = 5000
    ftol: float = 1e-10
    seed: int = 0
    slew_cap: float | None = None
    target_infidelity: float = 0.0
    method: str = "lbfgs"
    init: str = "random"          # "random" (uniform +-0.1) or "zeros"
    init_scale: float = 0.1


@dataclass
class GrapeResult:
    waveform: PiecewiseWaveform
    fidelity: float
    trace: list = field(default_factory=list)
    iterations: int = 0

    @property
    def infidelity(self):
        return 1.0 - self.fidelity


class _Tracker:
    def __init__(self, problem, n, m, cfg):
        self.problem, self.n, self.m, self.cfg = problem, n, m, cfg
        self.best_f = -np.inf
        self.best_x = None
        self.trace = []
        self.evals = 0

    def __call__(self, x):
        vals, _ = _to_values(x, self.n, self.m, self.cfg.slew_cap)
        f, g = fidelity_and_gradient(self.problem, vals)
        self.evals += 1
        if f > self.best_f:
            self.best_f, self.best_x = f, x.copy()
        return f, _chain_slew(g, x, self.n, self.m, self.cfg.slew_cap)

    def record(self):
        self.trace.append(self.best_f)
        if self.cfg.target_infidelity and 1.0 - self.best_f <= self.cfg.target_infidelity:
            raise StopIteration


def _initial(problem, n, cfg, init_values):
    m = problem.n_controls
    if init_values is not None:
        vals = np.asarray(init_values, dtype=float).reshape(n, m)
    elif cfg.init == "zeros":
        vals = np.zeros((n, m))
    else:
        rng = np.random.default_rng(cfg.seed)
        vals = rng.uniform(-cfg.init_scale, cfg.init_scale, size=(n, m))
        if cfg.slew_cap is not None:
            # keep the start inside the cap
            vals = np.cumsum(np.vstack([vals[:1], np.clip(np.diff(vals, axis=0), -0.5 * cfg.slew_cap,
                                                          0.5 * cfg.slew_cap)]), axis=0)
    return _from_values(vals, cfg.slew_cap)


def _ascent(track, x, cfg):
    f, g = track(x)
    step = 1e-2
    for it in range(cfg.max_iters):
        track.record()
        while True:
            x_new = x + step * g
            f_new, g_new = track(x_new)
            if f_new > f:
                break
            step *= 0.5
            if step < 1e-14:
                return it
        improved = f_new - f
        x, f, g = x_new, f_new, g_new
        step *= 1.5
        if improved < cfg.ftol:
            return it + 1
    return cfg.max_iters


def grape_optimize(problem, steps, config=None, init_values=None):
    """Maximize the ensemble fidelity over a piecewise-constant waveform of ``steps`` steps."""
    cfg = config or GrapeConfig()
    if steps < 1:
        raise ConfigError("steps", "need at least one step")
    n, m = steps, problem.n_controls
    dt = problem.total_time / n
    track = _Tracker(problem, n, m, cfg)
    x0 = _initial(problem, n, cfg, init_values)
    f0, _ = track(x0)
    iters = 0
    if not (cfg.target_infidelity and 1.0 - f0 <= cfg.target_infidelity) and 1.0 - f0 > 1e-15:
        try:
            if cfg.method == "lbfgs":
                res = minimize(lambda x: tuple(-v for v in track(x)), x0, jac=True, method="L-BFGS-B",
                               callback=lambda xk: track.record(),
                               options={"maxiter": cfg.max_iters, "ftol": cfg.ftol, "gtol": 1e-12,
                                        "maxcor": 30})
                iters = int(res.nit)
            elif cfg.method == "ascent":
                iters = _ascent(track, x0, cfg)
            else:
                raise ConfigError("method", f"unknown method {cfg.method!r}")
        except StopIteration:
            iters = len(track.trace)
    if not track.trace or track.trace[-1] < track.best_f:
        track.trace.append(track.best_f)
    vals, _ = _to_values(track.best_x, n, m, cfg.slew_cap)
    wf = PiecewiseWaveform(vals.copy(), dt, cfg.slew_cap)
    return GrapeResult(wf, track.best_f, track.trace, iters)


def grape_with_restarts(problem, steps, config=None, restarts=3, init_values=None):
    """Run with seeds seed, seed+1, ... until the target infidelity is met; keep the best."""
    cfg = config or GrapeConfig()
    best = None
    for r in range(restarts):
        c = GrapeConfig(**{**cfg.__dict__, "seed": cfg.seed + r})
        res = grape_optimize(problem, steps, c, init_values if r == 0 else None)
        if best is None or res.fidelity > best.fidelity:
            best = res
        if cfg.target_infidelity and best.infidelity <= cfg.target_infidelity:
            break
    return best


# ---------------------------------------------------------------- bandwidth

def lowpass_filter(values, dt, corner):
    """Sampler for c(t) = corner * int_0^t c_ideal(s) exp(-corner (t - s)) ds, c(0) = 0."""
    if corner <= 0:
        raise ConfigError("corner", "must be positive")
    vals = np.asarray(values, dtype=float)
    n = vals.shape[0]
    starts = np.zeros_like(vals)
    decay = np.exp(-corner * dt)
    for j in range(1, n):
        starts[j] = vals[j - 1] + (starts[j - 1] - vals[j - 1]) * decay

    def sample(t):
        t = np.asarray(t, dtype=float)
        j = np.clip((t // dt).astype(int), 0, n - 1)
        tau = t - j * dt
        e = np.exp(-corner * tau)
        if vals.ndim > 1:
            e = e[..., None]
        return vals[j] + (starts[j] - vals[j]) * e

    return sample


def filtered_fidelity(problem, values, corner, substeps=20):
    """Fidelity after low-pass filtering, evaluated on a finer piecewise grid."""
    values = np.atleast_2d(np.asarray(values, dtype=float).T).T
    n = values.shape[0]
    dt = problem.total_time / n
    fine_dt = dt / substeps
    mids = (np.arange(n * substeps) + 0.5) * fine_dt
    fine = lowpass_filter(values, dt, corner)(mids)
    return objective(problem, fine)


# ---------------------------------------------------------------- controllability

def _herm_vec(h):
    return np.concatenate([h.real.ravel(), h.imag.ravel()])


def controllability_check(generators, tol=1e-9):
    """(controllable, rank) of the Lie closure of i*generators modulo the identity."""
    gens = [require_square(g) for g in generators]
    d = gens[0].shape[0]
    target = d * d - 1
    eye = np.eye(d)
    basis_vecs, basis_ops = [], []

    def add(h):
        h = h - np.trace(h) / d * eye
        v = _herm_vec(h)
        for b in basis_vecs:
            v = v - np.dot(b, v) * b
        norm = np.linalg.norm(v)
        if norm <= tol * max(1.0, np.linalg.norm(_herm_vec(h))):
            return False
        v = v / norm
        basis_vecs.append(v)
        basis_ops.append((v[:d * d] + 1j * v[d * d:]).reshape(d, d))
        return True

    for g in gens:
        add(g)
    frontier = list(range(len(basis_ops)))
    while frontier and len(basis_ops) < target:
        new = []
        for a in frontier:
            for b in range(len(basis_ops)):
                if len(basis_ops) >= target:
                    break
                c = 1j * (basis_ops[a] @ basis_ops[b] - basis_ops[b] @ basis_ops[a])
                if add(c):
                    new.append(len(basis_ops) - 1)
        frontier = new
    rank = len(basis_ops)
    return rank == target, rank


def tensor_overlap_spectrum(op):
    """C^(K)_q = |Tr(op T^(K)_q^dag)|^2 treating the D-dimensional space as spin (D-1)/2.

    Only the diagonals of ``op`` that are nonzero are expanded. Returns {(K, q): C}.
    """
    op = require_square(op)
    dim = op.shape[0]
    spin = SpinQuantum(dim - 1)
    two_j = spin.two_j
    two_ms = spin.two_ms()
    out = {}
    # op[row, col] with row index for m + q, col for m; descending order means row = col - q
    for q in range(-(dim - 1), dim):
        diag = np.array([op[c - q, c] if 0 <= c - q < dim else 0.0 for c in range(dim)])
        if np.max(np.abs(diag), initial=0.0) < 1e-14:
            continue
        for k in range(abs(q), dim):
            norm = np.sqrt((2 * k + 1) / (two_j + 1))
            acc = 0.0
            for c, two_mp in enumerate(two_ms):
                if 0 <= c - q < dim and diag[c] != 0:
                    acc += diag[c] * norm * clebsch_gordan(two_j, two_mp, 2 * k, 2 * q, two_j, two_mp + 2 * q)
            out[(k, q)] = float(abs(acc) ** 2)
    return out


# ---------------------------------------------------------------- layered (Lie group) optimizer

@dataclass
class LayeredCircuit:
    times: np.ndarray      # (N,)
    alphas: np.ndarray     # (N, d^2 - 1)
    betas: np.ndarray      # (N, d^2 - 1)
    sign_alternation: bool = False

    def signs(self):
        n = self.times.size
        return np.array([(-1) ** j if self.sign_alternation else 1 for j in range(n)], dtype=float)


def layered_unitary(circuit, h_ent):
    """prod_j exp(-i s_j H_ent t_j) (U1(alpha_j) x U2(beta_j)), first layer rightmost.

    ``h_ent`` may be non-Hermitian (effective decay); the signs only flip its real part.
    """
    d2 = h_ent.shape[0]
    d = int(round(np.sqrt(d2)))
    lam = gell_mann_basis(d)
    eye = np.eye(d)
    herm = (h_ent + dag(h_ent)) / 2
    anti = h_ent - herm
    u = np.eye(d2, dtype=complex)
    for t, a, b, s in zip(circuit.times, circuit.alphas, circuit.betas, circuit.signs()):
        la = np.einsum("a,aij->ij", a, lam)
        lb = np.einsum("a,aij->ij", b, lam)
        u = np.kron(expm_hermitian(la), expm_hermitian(lb)) @ u
        h = s * herm + anti
        u = (expm_hermitian(h, t) if is_hermitian(h, 1e-14) else expm(-1j * t * h)) @ u
    return u


def layered_optimize(target, h_ent, layers, mode="local", config=None, restarts=4):
    """Optimize the layered circuit for ``target`` with ``h_ent`` (matrix or entangler).

    Each layer is a local step (generators Lambda x 1 and 1 x Lambda, unit time) and
    an entangling step (generator s_j H_ent, duration t_j >= 0). In ``global_sign_flip``
    mode alpha_j = beta_j and s_j alternates.

    A non-Hermitian ``h_ent`` carries decay: its Hermitian part drives the circuit and
    the objective becomes F * exp(-gamma_bar * sum t_j), gamma_bar = -2 Im Tr(h_ent) / D,
    which favours short entangling times.
    """
    cfg = config or GrapeConfig()
    h_ent = h_ent.hamiltonian() if hasattr(h_ent, "hamiltonian") else h_ent
    h_ent = require_square(h_ent)
    gamma_bar = max(-2 * np.trace(h_ent).imag / h_ent.shape[0], 0.0)
    h_ent = (h_ent + dag(h_ent)) / 2
    if layers < 1:
        raise ConfigError("layers", "need N >= 1")
    if mode not in ("local", "global_sign_flip"):
        raise ConfigError("mode", f"unknown mode {mode!r}")
    h_ent = require_square(h_ent)
    d2 = h_ent.shape[0]
    d = int(round(np.sqrt(d2)))
    lam = gell_mann_basis(d)
    g = d * d - 1
    eye = np.eye(d)
    left = [np.kron(l, eye) for l in lam]
    right = [np.kron(eye, l) for l in lam]
    glob = mode == "global_sign_flip"
    signs = np.array([(-1) ** j if glob else 1 for j in range(layers)], dtype=float)
    gens = np.array(left + right + [h_ent])
    nsteps = 2 * layers
    ngen = gens.shape[0]
    p = np.eye(d2, dtype=complex)
    nper = g + 1 if glob else 2 * g + 1

    def unpack(x):
        x = x.reshape(layers, nper)
        a = x[:, :g]
        b = a if glob else x[:, g:2 * g]
        return a, b, x[:, -1]

    def fg(x):
        a, b, t = unpack(x)
        coeffs = np.zeros((nsteps, ngen))
        coeffs[0::2, :g] = a
        coeffs[0::2, g:2 * g] = b
        coeffs[1::2, -1] = signs * t
        hs = np.einsum("sk,kij->sij", coeffs, gens)
        dhs = np.broadcast_to(gens, (nsteps,) + gens.shape)
        ov, dov = _kernels.grape_overlap_grad(hs, dhs, 1.0, p, target)
        f = abs(ov) ** 2 / d2 ** 2
        df = 2 * np.real(np.conj(ov) * dov) / d2 ** 2
        if not np.isfinite(f):
            raise Diverged("layered objective is not finite")
        if gamma_bar:
            w = np.exp(-gamma_bar * t.sum())
            f, df = f * w, df * w
            df[1::2, -1] -= gamma_bar * f * signs
        out = np.zeros((layers, nper))
        if glob:
            out[:, :g] = df[0::2, :g] + df[0::2, g:2 * g]
        else:
            out[:, :g] = df[0::2, :g]
            out[:, g:2 * g] = df[0::2, g:2 * g]
        out[:, -1] = df[1::2, -1] * signs
        return f, out.ravel()

    rng = np.random.default_rng(cfg.seed)
    scale = 1.0 / max(np.abs(np.diag(h_ent)).max(), 1e-12)
    best = None
    for r in range(restarts):
        x0 = rng.uniform(-1, 1, size=(layers, nper))
        x0[:, -1] = rng.uniform(0.2, 2.0, size=layers) * scale
        bounds = [(None, None)] * (nper - 1) + [(0.0, None)]
        res = minimize(lambda x: tuple(-v for v in fg(x)), x0.ravel(), jac=True, method="L-BFGS-B",
                       bounds=bounds * layers,
                       options={"maxiter": cfg.max_iters, "ftol": cfg.ftol, "gtol": 1e-12})
        f = -res.fun
        if best is None or f > best[0]:
            best = (f, res.x)
        if cfg.target_infidelity and 1 - best[0] <= cfg.target_infidelity:
            break
    a, b, t = unpack(best[1])
    circuit = LayeredCircuit(t.copy(), a.copy(), b.copy(), glob)
    return circuit, float(best[0])
