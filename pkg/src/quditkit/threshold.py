"""Error bounds for the logical CNOT gadget of the repetition-concatenated spin-cat code.

A gadget is described by ``GadgetConfig`` (repetition size n, phase-EC rounds r1,
amplitude-EC rounds r2, spin). Per-CNOT noise is ``NoiseParams``: the phase-flip
probability ``eps`` and the probabilities ``p1``/``p2`` of one or two amplitude
jumps. A noise *mapping* turns a single physical error rate into ``NoiseParams``.
"""

from dataclasses import dataclass, field
from functools import lru_cache
from math import comb

import numpy as np
from scipy.optimize import brentq

from . import _kernels
from .errors import ConfigError, UnsupportedConfiguration
from .spin_algebra import SpinQuantum, sa_basis, spherical_tensor

EPS_CSS = 0.67e-3


@dataclass(frozen=True)
class GadgetConfig:
    n: int
    r1: int
    r2: int
    two_j: int = 9
    k_max_rule: str = "lower"
    s: int | None = None

    def __post_init__(self):
        if self.n < 1 or self.n % 2 == 0:
            raise ConfigError("n", f"must be a positive odd integer, got {self.n}")
        if self.r1 < 1 or self.r1 % 2 == 0:
            raise ConfigError("r1", f"must be a positive odd integer, got {self.r1}")
        if self.r2 < 0:
            raise ConfigError("r2", f"must be non-negative, got {self.r2}")
        if self.k_max_rule not in ("lower", "upper"):
            raise ConfigError("k_max_rule", "expected 'lower' or 'upper'")

    @property
    def r(self):
        return self.r1 + self.r2

    @property
    def k_max(self):
        """Jumps needed for a logical amplitude error: floor((2J-1)/2) or floor((2J+1)/2)."""
        if self.k_max_rule == "lower":
            return (self.two_j - 1) // 2
        return (self.two_j + 1) // 2

    @property
    def cnots_before_amp(self):
        return 2 * self.r if self.s is None else self.s


@dataclass(frozen=True)
class NoiseParams:
    eps: float
    p1: float = 0.0
    p2: float = 0.0
    ancilla_leak: tuple = field(default=(0.0, 0.0, 0.0, 0.0))

    def __post_init__(self):
        for name in ("eps", "p1", "p2"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ConfigError(name, f"probability out of [0, 1]: {v}")
        if self.p1 + self.p2 > 1.0 + 1e-15:
            raise ConfigError("p1", "p1 + p2 exceeds 1")
        leak = tuple(float(x) for x in self.ancilla_leak)
        if len(leak) != 4 or min(leak) < 0 or sum(leak) > 1.0 + 1e-15:
            raise ConfigError("ancilla_leak", "need four probabilities with sum <= 1")
        object.__setattr__(self, "ancilla_leak", leak)


def _majority(n):
    return comb(n, (n + 1) // 2)


def phase_block_bounds(cfg, noise):
    """(eps_target, eps_control) for the logical phase error of each block."""
    e = noise.eps
    h = (cfg.n + 1) // 2
    target = _majority(cfg.n) * (2 * cfg.r * e + e) ** h
    control = _majority(cfg.n) * (4 * cfg.r * e + e) ** h
    return target, control


def syndrome_bound(cfg, noise):
    """Failure probability of the r1-round majority-voted syndrome extraction."""
    h = (cfg.r1 + 1) // 2
    return 2 * (cfg.n - 1) * comb(cfg.r1, h) * (6 * noise.eps) ** h


def jump_cascade_prob(s, k_max, k_start, noise):
    """Exact probability that s CNOTs push a level-k_start kitten to at least k_max."""
    if s < 0:
        raise ConfigError("s", "CNOT count must be non-negative")
    return _kernels.jump_tail(s, k_max - k_start, noise.p1, noise.p2)


def amplitude_bounds(cfg, noise):
    """(eps_target_amp, eps_control_amp, eps_ec_amp)."""
    km = cfg.k_max
    q2r = jump_cascade_prob(2 * cfg.r, km, 0, noise)
    q1 = jump_cascade_prob(1, km, 0, noise)
    target = 2 * cfg.n * q2r + cfg.n * q1
    control = cfg.n * q2r + cfg.n * q1
    leak = noise.ancilla_leak
    weights = (1.0 - sum(leak),) + leak
    s = cfg.cnots_before_amp
    per_round = sum(w * jump_cascade_prob(s, km, k, noise) for k, w in enumerate(weights) if w)
    ec = 2 * cfg.n * cfg.r2 * per_round
    return target, control, ec


def error_budget(cfg, noise):
    """All six contributions to the logical CNOT error, keyed by name."""
    pt, pc = phase_block_bounds(cfg, noise)
    at, ac, aec = amplitude_bounds(cfg, noise)
    return {
        "phase_ec": syndrome_bound(cfg, noise),
        "phase_control": pc,
        "phase_target": pt,
        "amp_ec": aec,
        "amp_control": ac,
        "amp_target": at,
    }


def total_logical_error(cfg, noise):
    return sum(error_budget(cfg, noise).values())


# ---------------------------------------------------------------- noise mappings

def _split(eps, phase_w, one_w, two_w, event_w, normalize):
    """Scale relative (flip, one-jump, two-jump) weights to probabilities.

    ``normalize="event"``: eps is the probability of any error event that acts
    nontrivially on the code, which has total weight ``event_w``.
    ``normalize="phase"``: eps is the phase-flip probability itself.
    """
    if normalize == "event":
        scale = eps / event_w
    elif normalize == "phase":
        scale = eps / phase_w
    else:
        raise ConfigError("normalize", f"unknown normalization {normalize!r}")
    p1, p2 = scale * one_w, scale * two_w
    if p1 + p2 > 1.0:
        p1, p2 = p1 / (p1 + p2), p2 / (p1 + p2)
    return float(min(scale * phase_w, 1.0)), float(p1), float(p2)


@dataclass(frozen=True)
class RotationMapping:
    """Small random rotations: single jumps are 1/(2J) as likely as phase flips.

    Flips and jumps are distinct events, so their weights 2J and 1 add.
    """

    two_j: int = 9
    normalize: str = "event"
    ancilla_leak: tuple = (0.0, 0.0, 0.0, 0.0)

    def __call__(self, eps):
        phase, p1, p2 = _split(eps, float(self.two_j), 1.0, 0.0, self.two_j + 1.0, self.normalize)
        return NoiseParams(phase, p1, p2, self.ancilla_leak)


@lru_cache(maxsize=16)
def classify_sa_errors(two_j):
    """For every S/A basis element: (jumps, flips_cat_sign) from its action on |+>."""
    spin = SpinQuantum(two_j)
    if two_j % 2 == 0:
        raise UnsupportedConfiguration("cat classification needs half-integer J")
    plus = (spin.ket(-two_j) + spin.ket(two_j)) / np.sqrt(2)
    table = {}
    for (kind, k, q), op in sa_basis(spin):
        out = op @ plus
        if np.linalg.norm(out) < 1e-12:
            table[(kind, k, q)] = (q, False)
            continue
        up = spin.ket(-two_j + 2 * q)
        down = spin.ket(two_j - 2 * q)
        same = abs(np.vdot(up + down, out)) ** 2
        flip = abs(np.vdot(up - down, out)) ** 2
        table[(kind, k, q)] = (q, flip > same)
    return table


def simplified_pumping_jumps(two_j, alpha, beta):
    """W_0, W_+1, W_-1 of the simplified optical-pumping model."""
    t = lambda k, q: spherical_tensor(two_j, k, q)
    c = np.sqrt(0.75) * beta
    return {
        0: beta * t(2, 0),
        1: 1j * alpha * t(1, -1) - c * t(2, -1),
        -1: 1j * alpha * t(1, 1) + c * t(2, 1),
    }


@lru_cache(maxsize=64)
def pumping_error_weights(two_j, alpha, beta):
    """Unnormalized (phase_flip, one_jump, two_jump, any_error) weights of the pumping jumps.

    A single S/A component can both move the kitten level and flip the cat sign,
    so ``any_error`` counts each nontrivial component once.
    """
    table = classify_sa_errors(two_j)
    spin = SpinQuantum(two_j)
    basis = sa_basis(spin)
    phase = one = two = event = 0.0
    for w in simplified_pumping_jumps(two_j, alpha, beta).values():
        for key, op in basis:
            weight = abs(np.vdot(op, w)) ** 2
            jumps, flips = table[key]
            if flips:
                phase += weight
            if flips or jumps:
                event += weight
            if jumps == 1:
                one += weight
            elif jumps >= 2:
                two += weight
    return phase, one, two, event


@dataclass(frozen=True)
class PumpingMapping:
    """Optical pumping: error statistics from the S/A content of the simplified W_q."""

    two_j: int = 9
    alpha: float = 0.0137
    beta: float = 0.2
    normalize: str = "event"
    ancilla_leak: tuple = (0.0, 0.0, 0.0, 0.0)

    def weights(self):
        return pumping_error_weights(self.two_j, self.alpha, self.beta)

    def __call__(self, eps):
        phase, p1, p2 = _split(eps, *self.weights(), self.normalize)
        return NoiseParams(phase, p1, p2, self.ancilla_leak)


# ---------------------------------------------------------------- crossings

def crossing(cfg, mapping, target="css_line", lo=1e-6, hi=0.05, rtol=1e-8):
    """Physical error where the logical error meets eps_CSS (or the line y = eps).

    Returns None when the logical error does not cross inside [lo, hi].
    """
    if target == "css_line":
        gap = lambda e: total_logical_error(cfg, mapping(e)) - EPS_CSS
    elif target == "identity_line":
        gap = lambda e: total_logical_error(cfg, mapping(e)) - e
    else:
        raise ConfigError("target", f"unknown target {target!r}")
    glo, ghi = gap(lo), gap(hi)
    if not (np.isfinite(glo) and np.isfinite(ghi)) or glo * ghi > 0:
        return None
    return brentq(gap, lo, hi, rtol=rtol, xtol=1e-15)


def threshold_scan(cfg, mapping, ns, target="css_line", lo=1e-6, hi=0.05):
    """Crossing for each repetition size; returns (rows, best_n)."""
    rows = []
    for n in ns:
        c = GadgetConfig(n, cfg.r1, cfg.r2, cfg.two_j, cfg.k_max_rule, cfg.s)
        eps = crossing(c, mapping, target, lo, hi)
        row = {"n": n, "eps": eps}
        if eps is not None:
            budget = error_budget(c, mapping(eps))
            row["eps_logical"] = sum(budget.values())
            row["phase_part"] = budget["phase_ec"] + budget["phase_control"] + budget["phase_target"]
            row["amp_part"] = budget["amp_ec"] + budget["amp_control"] + budget["amp_target"]
        rows.append(row)
    found = [r for r in rows if r["eps"] is not None]
    best = max(found, key=lambda r: r["eps"])["n"] if found else None
    return rows, best
