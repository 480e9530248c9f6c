"""Hot loops with a numba build and a plain-numpy build.

Set ``QUDITKIT_NUMBA=0`` before import to force the numpy versions. Both builds
expose the same three functions and are checked against each other in the tests
and timed in ``benchmarks/bench_kernels.py``.
"""

import os

import numpy as np

_WANT_NUMBA = os.environ.get("QUDITKIT_NUMBA", "1").strip().lower() not in ("0", "false", "no", "off")

try:
    import numba
except ImportError:  # pragma: no cover
    numba = None


# ---------------------------------------------------------------- numpy builds

def jump_tail_numpy(s, need, p1, p2):
    """P(sum of s i.i.d. jumps in {0,1,2} reaches ``need``), jump probs (1-p1-p2, p1, p2)."""
    if need <= 0:
        return 1.0
    p0 = 1.0 - p1 - p2
    dist = np.zeros(need + 1)
    dist[0] = 1.0
    for _ in range(s):
        live = dist[:need]
        new = np.zeros(need + 1)
        new[:need] += p0 * live
        new[1:] += p1 * live
        new[2:] += p2 * live[:need - 1]
        # a double jump from need-1 overshoots; the top bin is absorbing
        new[need] += p2 * live[need - 1] + dist[need]
        dist = new
    return float(dist[need])


def _lindblad_rhs_numpy(rho, heff, jumps):
    out = -1j * (heff @ rho - rho @ heff.conj().T)
    for L in jumps:
        out += L @ rho @ L.conj().T
    return out


def rk4_lindblad_numpy(heff, jumps, rho0, dt, nsteps, every):
    """Fixed-step RK4; returns states at steps 0, every, 2*every, ..., nsteps."""
    rho = rho0.astype(np.complex128).copy()
    nsamp = nsteps // every + 1
    out = np.empty((nsamp,) + rho.shape, dtype=np.complex128)
    out[0] = rho
    for step in range(1, nsteps + 1):
        k1 = _lindblad_rhs_numpy(rho, heff, jumps)
        k2 = _lindblad_rhs_numpy(rho + 0.5 * dt * k1, heff, jumps)
        k3 = _lindblad_rhs_numpy(rho + 0.5 * dt * k2, heff, jumps)
        k4 = _lindblad_rhs_numpy(rho + dt * k3, heff, jumps)
        rho = rho + (dt / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
        if step % every == 0:
            out[step // every] = rho
    return out


def _phase_kernel(w, dt):
    """G_ab for d exp(-i dt H) in the eigenbasis of H."""
    la = w[:, :, None]
    lb = w[:, None, :]
    half = 0.5 * (la - lb) * dt
    return -1j * dt * np.exp(-0.5j * (la + lb) * dt) * np.sinc(half / np.pi)


def grape_overlap_grad_numpy(hs, dhs, dt, p, vt):
    """Overlap g = Tr(vt^dag U p) and dg/dc_{j,m} for Hermitian step generators.

    hs: (n, d, d) step Hamiltonians; dhs: (n, m, d, d) their control derivatives;
    p: (d, k) input isometry; vt: (d, k) target image.
    """
    n, d, _ = hs.shape
    w, v = np.linalg.eigh(hs)
    vd = np.conj(np.swapaxes(v, -1, -2))
    us = (v * np.exp(-1j * dt * w)[:, None, :]) @ vd
    fwd = np.empty((n + 1,) + p.shape, dtype=np.complex128)
    fwd[0] = p
    for j in range(n):
        fwd[j + 1] = us[j] @ fwd[j]
    bwd = np.empty_like(fwd)
    bwd[n] = vt
    for j in range(n - 1, -1, -1):
        bwd[j] = us[j].conj().T @ bwd[j + 1]
    g = np.vdot(vt, fwd[n])
    # M_j = rho_{j-1} lambda_j^dag rotated into the step eigenbasis
    m = vd @ (fwd[:-1] @ np.conj(np.swapaxes(bwd[1:], -1, -2))) @ v
    gk = _phase_kernel(w, dt)
    dh_eig = np.einsum("nab,nmbc,ncd->nmad", vd, dhs, v, optimize=True)
    dg = np.einsum("nba,nab,nmab->nm", m, gk, dh_eig, optimize=True)
    return g, dg


# ---------------------------------------------------------------- numba builds

if numba is not None:

    @numba.njit(cache=True)
    def jump_tail_numba(s, need, p1, p2):
        if need <= 0:
            return 1.0
        p0 = 1.0 - p1 - p2
        dist = np.zeros(need + 1)
        new = np.zeros(need + 1)
        dist[0] = 1.0
        for _ in range(s):
            for t in range(need + 1):
                new[t] = 0.0
            for t in range(need):
                mass = dist[t]
                new[t] += p0 * mass
                new[min(t + 1, need)] += p1 * mass
                new[min(t + 2, need)] += p2 * mass
            new[need] += dist[need]
            for t in range(need + 1):
                dist[t] = new[t]
        return dist[need]

    @numba.njit(cache=True)
    def _lindblad_rhs_numba(rho, heff, jumps, out):
        d = rho.shape[0]
        a = heff @ rho
        for r in range(d):
            for c in range(d):
                acc = 0j
                for k in range(d):
                    acc += rho[r, k] * np.conj(heff[c, k])
                out[r, c] = -1j * (a[r, c] - acc)
        for q in range(jumps.shape[0]):
            L = jumps[q]
            lr = L @ rho
            for r in range(d):
                for c in range(d):
                    acc = 0j
                    for k in range(d):
                        acc += lr[r, k] * np.conj(L[c, k])
                    out[r, c] += acc

    @numba.njit(cache=True)
    def rk4_lindblad_numba(heff, jumps, rho0, dt, nsteps, every):
        d = rho0.shape[0]
        rho = rho0.copy()
        nsamp = nsteps // every + 1
        out = np.empty((nsamp, d, d), dtype=np.complex128)
        out[0] = rho
        k1 = np.empty((d, d), dtype=np.complex128)
        k2 = np.empty_like(k1)
        k3 = np.empty_like(k1)
        k4 = np.empty_like(k1)
        for step in range(1, nsteps + 1):
            _lindblad_rhs_numba(rho, heff, jumps, k1)
            _lindblad_rhs_numba(rho + 0.5 * dt * k1, heff, jumps, k2)
            _lindblad_rhs_numba(rho + 0.5 * dt * k2, heff, jumps, k3)
            _lindblad_rhs_numba(rho + dt * k3, heff, jumps, k4)
            rho = rho + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
            if step % every == 0:
                out[step // every] = rho
        return out

    @numba.njit(cache=True)
    def grape_overlap_grad_numba(hs, dhs, dt, p, vt):
        n, d, _ = hs.shape
        nc = dhs.shape[1]
        k = p.shape[1]
        ws = np.empty((n, d))
        vs = np.empty((n, d, d), dtype=np.complex128)
        us = np.empty((n, d, d), dtype=np.complex128)
        for j in range(n):
            w, v = np.linalg.eigh(hs[j])
            ws[j] = w
            vs[j] = v
            ph = np.exp(-1j * dt * w)
            us[j] = (v * ph) @ np.conj(v.T)
        fwd = np.empty((n + 1, d, k), dtype=np.complex128)
        fwd[0] = p
        for j in range(n):
            fwd[j + 1] = us[j] @ fwd[j]
        bwd = np.empty((n + 1, d, k), dtype=np.complex128)
        bwd[n] = vt
        for j in range(n - 1, -1, -1):
            bwd[j] = np.conj(us[j].T) @ bwd[j + 1]
        g = 0j
        for a in range(d):
            for b in range(k):
                g += np.conj(vt[a, b]) * fwd[n, a, b]
        dg = np.empty((n, nc), dtype=np.complex128)
        gk = np.empty((d, d), dtype=np.complex128)
        for j in range(n):
            v = vs[j]
            vd = np.conj(v.T)
            m = vd @ (fwd[j] @ np.conj(bwd[j + 1].T)) @ v
            w = ws[j]
            for a in range(d):
                for b in range(d):
                    x = 0.5 * (w[a] - w[b]) * dt
                    sinc = 1.0 if x == 0.0 else np.sin(x) / x
                    gk[a, b] = -1j * dt * np.exp(-0.5j * (w[a] + w[b]) * dt) * sinc
            for c in range(nc):
                dh = vd @ dhs[j, c] @ v
                acc = 0j
                for a in range(d):
                    for b in range(d):
                        acc += m[b, a] * gk[a, b] * dh[a, b]
                dg[j, c] = acc
        return g, dg

    NUMBA_AVAILABLE = True
else:  # pragma: no cover
    NUMBA_AVAILABLE = False

USE_NUMBA = _WANT_NUMBA and NUMBA_AVAILABLE


def jump_tail(s, need, p1, p2):
    if USE_NUMBA:
        return float(jump_tail_numba(int(s), int(need), float(p1), float(p2)))
    return jump_tail_numpy(int(s), int(need), float(p1), float(p2))


def rk4_lindblad(heff, jumps, rho0, dt, nsteps, every=None):
    heff = np.ascontiguousarray(heff, dtype=np.complex128)
    d = heff.shape[0]
    jumps = np.ascontiguousarray(
        np.reshape(np.asarray(jumps, dtype=np.complex128), (-1, d, d)))
    rho0 = np.ascontiguousarray(rho0, dtype=np.complex128)
    every = int(every or nsteps or 1)
    if USE_NUMBA:
        return rk4_lindblad_numba(heff, jumps, rho0, float(dt), int(nsteps), every)
    return rk4_lindblad_numpy(heff, jumps, rho0, float(dt), int(nsteps), every)


def grape_overlap_grad(hs, dhs, dt, p, vt):
    args = (np.ascontiguousarray(hs, dtype=np.complex128),
            np.ascontiguousarray(dhs, dtype=np.complex128),
            float(dt),
            np.ascontiguousarray(p, dtype=np.complex128),
            np.ascontiguousarray(vt, dtype=np.complex128))
    if USE_NUMBA:
        return grape_overlap_grad_numba(*args)
    return grape_overlap_grad_numpy(*args)
