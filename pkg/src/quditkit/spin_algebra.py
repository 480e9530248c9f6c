"""Angular-momentum algebra for a single spin.

Quantum numbers are stored doubled (``two_j = 2J``) so half-integers are exact
integers. Matrix rows and columns are ordered m = J, J-1, ..., -J, which makes
``Jz = diag(J, ..., -J)``. Clebsch-Gordan coefficients follow the
Condon-Shortley phase convention.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial, sqrt

import numpy as np

from ._linalg import dag, expm_hermitian
from .errors import InvalidIndex, InvalidQuantumNumbers, NonUnitAxis


@dataclass(frozen=True)
class SpinQuantum:
    two_j: int

    def __post_init__(self):
        if not isinstance(self.two_j, (int, np.integer)) or self.two_j < 0:
            raise InvalidQuantumNumbers(f"two_j must be a non-negative integer, got {self.two_j!r}")

    @classmethod
    def from_j(cls, j):
        return cls(twice(j))

    @property
    def dim(self):
        return self.two_j + 1

    @property
    def j(self):
        return self.two_j / 2

    @property
    def half_integer(self):
        return self.two_j % 2 == 1

    def two_ms(self):
        """Doubled projections in matrix order (J down to -J)."""
        return list(range(self.two_j, -self.two_j - 1, -2))

    def index(self, two_m):
        """Row index of the basis state |J, m>."""
        if abs(two_m) > self.two_j or (self.two_j - two_m) % 2:
            raise InvalidQuantumNumbers(f"m={two_m}/2 is not a projection of J={self.two_j}/2")
        return (self.two_j - two_m) // 2

    def ket(self, two_m):
        v = np.zeros(self.dim, dtype=complex)
        v[self.index(two_m)] = 1.0
        return v


def twice(x):
    """Return 2x as an int, rejecting values that are not half-integers."""
    f = Fraction(x).limit_denominator(4) if isinstance(x, float) else Fraction(x)
    two = 2 * f
    if two.denominator != 1:
        raise InvalidQuantumNumbers(f"{x!r} is not a half-integer")
    return int(two)


def _spin(spin):
    return spin if isinstance(spin, SpinQuantum) else SpinQuantum(int(spin))


@lru_cache(maxsize=None)
def _ladder(two_j):
    j = two_j / 2
    ms = np.arange(two_j, -two_j - 1, -2) / 2
    jp = np.zeros((two_j + 1, two_j + 1))
    for row in range(two_j):
        m = ms[row + 1]
        jp[row, row + 1] = sqrt(j * (j + 1) - m * (m + 1))
    return jp, ms


def angular_momentum_ops(spin):
    """Return (Jx, Jy, Jz) for the given spin (``SpinQuantum`` or ``two_j``)."""
    spin = _spin(spin)
    jp, ms = _ladder(spin.two_j)
    jp = jp.astype(complex)
    jm = jp.T.copy()
    jx = (jp + jm) / 2
    jy = (jp - jm) / 2j
    jz = np.diag(ms).astype(complex)
    return jx, jy, jz


def ladder_ops(spin):
    """Return (J+, J-)."""
    spin = _spin(spin)
    jp, _ = _ladder(spin.two_j)
    return jp.astype(complex), jp.T.astype(complex)


def _check_triad(two_j1, two_m1, two_j2, two_m2, two_j, two_m):
    for tj, tm in ((two_j1, two_m1), (two_j2, two_m2), (two_j, two_m)):
        if tj < 0 or abs(tm) > tj or (tj - tm) % 2:
            raise InvalidQuantumNumbers(f"bad (2j, 2m) = ({tj}, {tm})")
    if not abs(two_j1 - two_j2) <= two_j <= two_j1 + two_j2 or (two_j1 + two_j2 + two_j) % 2:
        raise InvalidQuantumNumbers(f"triangle rule fails for 2j = ({two_j1}, {two_j2}, {two_j})")


@lru_cache(maxsize=65536)
def clebsch_gordan_exact(two_j1, two_m1, two_j2, two_m2, two_j, two_m):
    """Exact CG coefficient as (sign, squared value) with the square a Fraction.

    Arguments are doubled quantum numbers for <J M | j1 m1; j2 m2>.
    """
    _check_triad(two_j1, two_m1, two_j2, two_m2, two_j, two_m)
    if two_m1 + two_m2 != two_m:
        return 0, Fraction(0)
    # all factorial arguments below are integers because of the parity checks
    a = (two_j1 + two_j2 - two_j) // 2
    b = (two_j1 - two_m1) // 2
    c = (two_j2 + two_m2) // 2
    e = (two_j - two_j2 + two_m1) // 2
    f = (two_j - two_j1 - two_m2) // 2
    pref = Fraction(
        (two_j + 1)
        * factorial((two_j + two_j1 - two_j2) // 2)
        * factorial((two_j - two_j1 + two_j2) // 2)
        * factorial(a),
        factorial((two_j1 + two_j2 + two_j) // 2 + 1),
    )
    pref *= (
        factorial((two_j + two_m) // 2)
        * factorial((two_j - two_m) // 2)
        * factorial(b)
        * factorial((two_j1 + two_m1) // 2)
        * factorial((two_j2 - two_m2) // 2)
        * factorial(c)
    )
    total = Fraction(0)
    for k in range(max(0, -e, -f), min(a, b, c) + 1):
        den = (
            factorial(k)
            * factorial(a - k)
            * factorial(b - k)
            * factorial(c - k)
            * factorial(e + k)
            * factorial(f + k)
        )
        total += Fraction((-1) ** k, den)
    if total == 0:
        return 0, Fraction(0)
    return (1 if total > 0 else -1), pref * total * total


def clebsch_gordan(two_j1, two_m1, two_j2, two_m2, two_j, two_m):
    """<J M | j1 m1; j2 m2> in the Condon-Shortley convention, doubled arguments."""
    sign, sq = clebsch_gordan_exact(two_j1, two_m1, two_j2, two_m2, two_j, two_m)
    if sign == 0:
        return 0.0
    return sign * sqrt(float(sq))


def wigner_rotation(spin, alpha, beta, gamma):
    """D(alpha, beta, gamma) = exp(-i alpha Jz) exp(-i beta Jy) exp(-i gamma Jz)."""
    spin = _spin(spin)
    _, jy, jz = angular_momentum_ops(spin)
    phases = np.diag(jz).real
    dy = expm_hermitian(jy, beta)
    return np.exp(-1j * alpha * phases)[:, None] * dy * np.exp(-1j * gamma * phases)[None, :]


def _check_tensor_index(spin, k, q):
    if not (0 <= k <= spin.two_j) or abs(q) > k:
        raise InvalidIndex(f"(k, q) = ({k}, {q}) invalid for 2J = {spin.two_j}")


@lru_cache(maxsize=4096)
def _spherical_tensor_cached(two_j, k, q):
    spin = SpinQuantum(two_j)
    t = np.zeros((spin.dim, spin.dim))
    norm = sqrt((2 * k + 1) / (two_j + 1))
    for col, two_mp in enumerate(spin.two_ms()):
        two_m = two_mp + 2 * q
        if abs(two_m) > two_j:
            continue
        t[spin.index(two_m), col] = norm * clebsch_gordan(two_j, two_mp, 2 * k, 2 * q, two_j, two_m)
    t.flags.writeable = False
    return t


def spherical_tensor(spin, k, q):
    """Normalized irreducible tensor T^(k)_q with Tr(T^dag T) = 1."""
    spin = _spin(spin)
    _check_tensor_index(spin, k, q)
    return _spherical_tensor_cached(spin.two_j, k, q).astype(complex)


def sa_error_basis(spin, k, q, part="both"):
    """Symmetric/antisymmetric combinations of T^(k)_{+q} and T^(k)_{-q}.

    ``part`` selects "S", "A" or "both"; "both" returns the tuple (S, A).
    For q = 0 only S exists and equals T^(k)_0.
    """
    spin = _spin(spin)
    if q < 0:
        raise InvalidIndex("the S/A basis is labelled by q >= 0")
    _check_tensor_index(spin, k, q)
    if part not in ("S", "A", "both"):
        raise InvalidIndex(f"unknown part {part!r}")
    if q == 0:
        if part != "S":
            raise InvalidIndex("the antisymmetric operator A is undefined for q = 0")
        return spherical_tensor(spin, k, 0)
    tp = spherical_tensor(spin, k, q)
    tm = spherical_tensor(spin, k, -q)
    sgn = (-1) ** k
    s = (tp + sgn * tm) / np.sqrt(2)
    a = (tp - sgn * tm) / np.sqrt(2)
    return {"S": s, "A": a, "both": (s, a)}[part]


def sa_basis(spin):
    """All (2J+1)^2 S/A operators as a list of ((kind, k, q), matrix)."""
    spin = _spin(spin)
    out = []
    for k in range(spin.two_j + 1):
        out.append((("S", k, 0), sa_error_basis(spin, k, 0, "S")))
        for q in range(1, k + 1):
            s, a = sa_error_basis(spin, k, q)
            out.append((("S", k, q), s))
            out.append((("A", k, q), a))
    return out


def tensor_basis(spin):
    """All T^(k)_q as a list of ((k, q), matrix), ordered by k then q."""
    spin = _spin(spin)
    return [((k, q), spherical_tensor(spin, k, q))
            for k in range(spin.two_j + 1) for q in range(-k, k + 1)]


@lru_cache(maxsize=64)
def _tensor_stack(two_j):
    basis = tensor_basis(SpinQuantum(two_j))
    keys = [key for key, _ in basis]
    stack = np.array([t.ravel() for _, t in basis]).conj()
    ranks = np.array([k for k, _ in keys])
    stack.flags.writeable = False
    return keys, stack, ranks


def tensor_coefficients(op, spin):
    """Array of Tr(T^(k)_q^dag op) in ``tensor_basis`` order, with the rank of each entry."""
    spin = _spin(spin)
    _, stack, ranks = _tensor_stack(spin.two_j)
    return stack @ np.asarray(op, dtype=complex).ravel(), ranks


def tensor_components(op, spin):
    """Coefficients c_kq = Tr(T^(k)_q^dag op), keyed by (k, q)."""
    spin = _spin(spin)
    keys, _, _ = _tensor_stack(spin.two_j)
    coeffs, _ = tensor_coefficients(op, spin)
    return dict(zip(keys, coeffs))


def rank_weights(op, spin):
    """Squared weight of ``op`` on each tensor rank k = 0..2J."""
    spin = _spin(spin)
    coeffs, ranks = tensor_coefficients(op, spin)
    return np.bincount(ranks, weights=np.abs(coeffs) ** 2, minlength=spin.two_j + 1)


def su2_generator(spin, axis, theta):
    """exp(-i theta n.J) for a unit axis n."""
    spin = _spin(spin)
    n = np.asarray(axis, dtype=float)
    if n.shape != (3,) or abs(np.linalg.norm(n) - 1.0) > 1e-9:
        raise NonUnitAxis(f"axis {axis!r} is not a unit 3-vector")
    jx, jy, jz = angular_momentum_ops(spin)
    return expm_hermitian(n[0] * jx + n[1] * jy + n[2] * jz, theta)


def random_rotation(spin, rng):
    """Haar-ish SU(2) element from uniformly sampled Euler angles."""
    alpha, gamma = rng.uniform(0, 2 * np.pi, size=2)
    beta = np.arccos(rng.uniform(-1, 1))
    return wigner_rotation(spin, alpha, beta, gamma)


def off_rank_leakage(op, spin, k):
    """Largest |coefficient| of ``op`` on tensors of rank other than k."""
    coeffs, ranks = tensor_coefficients(op, spin)
    return float(np.max(np.abs(coeffs[ranks != k]), initial=0.0))


def conjugate(u, op):
    return u @ op @ dag(u)
