"""Named numerical experiments driven by the CLI.

Each runner takes ``(params, rng_factory, outdir)`` and returns a ``Outcome``.
``rng_factory(i)`` gives the i-th independent random stream of the run.
Times are in units of 1/Omega_rf throughout.
"""

import time
from dataclasses import dataclass, field
from math import sqrt
from pathlib import Path

import numpy as np

from . import atomic_models as am
from . import grape as G
from . import quantum_dynamics as qd
from . import spin_cat as sc
from . import threshold as th
from .spin_algebra import (
    SpinQuantum,
    angular_momentum_ops,
    clebsch_gordan,
    off_rank_leakage,
    random_rotation,
    tensor_basis,
)


@dataclass
class Outcome:
    metrics: dict
    artifacts: list = field(default_factory=list)
    converged: bool = True


@dataclass(frozen=True)
class Param:
    default: object
    check: str | None = None  # "positive", "nonneg", "odd" or None


@dataclass(frozen=True)
class Scenario:
    runner: object
    params: dict
    stochastic: bool = False


def write_csv(path, header, rows):
    """Comma-separated with a header; complex columns expand to ``<name>_re,<name>_im``."""
    rows = [list(r) for r in rows]
    is_complex = [any(isinstance(r[i], complex) or np.iscomplexobj(r[i]) for r in rows)
                  for i in range(len(header))]
    cols = []
    for name, cplx in zip(header, is_complex):
        cols += [f"{name}_re", f"{name}_im"] if cplx else [name]
    lines = [",".join(cols)]
    for r in rows:
        out = []
        for v, cplx in zip(r, is_complex):
            if cplx:
                out += [repr(float(np.real(v))), repr(float(np.imag(v)))]
            else:
                out.append("" if v is None else (repr(float(v)) if isinstance(v, (float, np.floating)) else str(v)))
        lines.append(",".join(out))
    Path(path).write_text("\n".join(lines) + "\n")
    return Path(path).name


def _timed(fn):
    t0 = time.perf_counter()
    out = fn()
    return out, time.perf_counter() - t0


# ---------------------------------------------------------------- counting tables

def run_tables(p, rng, out):
    rows1 = [(k, G.min_parameters_symmetric(k)) for k in p["symmetric_k"]]
    rows2 = [(d, G.min_layers(d)) for d in p["layer_dims"]]
    arts = [write_csv(out / "min_parameters.csv", ["k", "min_parameters"], rows1),
            write_csv(out / "min_layers.csv", ["d", "min_layers"], rows2)]
    return Outcome({"min_parameters": [r[1] for r in rows1], "min_layers": [r[1] for r in rows2]}, arts)


# ---------------------------------------------------------------- angular momentum

def run_algebra_suite(p, rng, out):
    def body():
        err = 0.0
        for tj in range(0, p["max_two_j"] + 1):
            j = tj / 2
            for tm in range(-tj, tj + 1, 2):
                m = tm / 2
                ref = sqrt(((j + 1) ** 2 - m * m) / ((2 * j + 1) * (j + 1)))
                err = max(err, abs(clebsch_gordan(2, 0, tj, tm, tj + 2, tm) - ref))
        for tm in range(-11, 12, 2):
            ref = 0.5 * sqrt((169 - 4 * (tm / 2) ** 2) / 78)
            err = max(err, abs(clebsch_gordan(2, 0, 11, tm, 13, tm) - ref))
        ortho = leak = 0.0
        r = rng(0)
        for tj in range(1, p["max_two_j"] + 1):
            spin = SpinQuantum(tj)
            basis = tensor_basis(spin)
            mats = np.array([t.ravel() for _, t in basis])
            ortho = max(ortho, np.abs(mats.conj() @ mats.T - np.eye(len(basis))).max())
            for _ in range(p["rotations"]):
                u = random_rotation(spin, r)
                for (k, _q), t in basis:
                    leak = max(leak, off_rank_leakage(u @ t @ u.conj().T, spin, k))
        return err, ortho, leak

    (err, ortho, leak), wall = _timed(body)
    return Outcome({"cg_closed_form_error": err, "tensor_orthonormality_error": float(ortho),
                    "rank_leakage": float(leak), "runtime_s": wall})


def run_quartic_fit(p, rng, out):
    rows = []
    for tm in range(-9, 10, 2):
        m = tm / 2
        rows.append((m, am.rank2_cg_squared(tm), am.quartic_lightshift_weight(tm), am.quartic_fit(m)))
    arts = [write_csv(out / "quartic.csv", ["M", "cg_squared", "lightshift_weight", "fit"], rows)]
    return Outcome({"cg_squared_max_dev": max(abs(r[1] - r[3]) for r in rows),
                    "lightshift_weight_max_dev": max(abs(r[2] - r[3]) for r in rows)}, arts)


# ---------------------------------------------------------------- GRAPE

def _qudecimal(two_j, beta):
    return am.QudecimalControl(beta=beta, spin=SpinQuantum(two_j)).terms()


def _waveform_artifacts(out, prefix, res):
    wf = res.waveform
    t = np.arange(wf.n) * wf.dt
    rows = [(ti, *v) for ti, v in zip(t, wf.values)]
    names = [f"c{i}" for i in range(wf.values.shape[1])]
    arts = [write_csv(out / f"{prefix}waveform.csv", ["t", *names], rows)]
    arts.append(write_csv(out / f"{prefix}trace.csv", ["iteration", "fidelity"], enumerate(res.trace)))
    return arts


def run_state_prep(p, rng, out):
    drift, x, y = _qudecimal(p["two_j"], p["beta"])
    d = p["two_j"] + 1
    psi1 = G.haar_state(d, rng(0))
    prob = G.state_problem(drift, [G.PhaseControl(x, y)], np.eye(d)[-1], psi1, p["total_time_over_pi"] * np.pi)
    cfg = G.GrapeConfig(seed=int(rng(1).integers(2**31)), target_infidelity=p["target_infidelity"])
    res, wall = _timed(lambda: G.grape_with_restarts(prob, p["steps"], cfg, p["restarts"]))
    return Outcome({"fidelity": res.fidelity, "infidelity": res.infidelity, "runtime_s": wall},
                   _waveform_artifacts(out, "", res), res.fidelity >= p["min_fidelity"])


def run_state_maps(p, rng, out):
    drift, x, y = _qudecimal(p["two_j"], p["beta"])
    d = p["two_j"] + 1
    rows = []
    for i in range(p["seeds"]):
        r = rng(i)
        prob = G.state_problem(drift, [G.PhaseControl(x, y)], G.haar_state(d, r), G.haar_state(d, r),
                               p["total_time_over_pi"] * np.pi)
        cfg = G.GrapeConfig(seed=int(r.integers(2**31)), target_infidelity=p["target_infidelity"])
        res, wall = _timed(lambda: G.grape_with_restarts(prob, p["steps"], cfg, p["restarts"]))
        rows.append((i, res.infidelity, wall))
    ok = sum(r[1] <= p["max_infidelity"] for r in rows)
    arts = [write_csv(out / "seeds.csv", ["seed", "infidelity", "runtime_s"], rows)]
    return Outcome({"successes": ok, "seeds": len(rows), "max_runtime_s": max(r[2] for r in rows)},
                   arts, ok >= p["min_successes"])


def run_unitary_maps(p, rng, out):
    drift, x, y = _qudecimal(p["two_j"], p["beta"])
    d = p["two_j"] + 1
    rows = []
    for i in range(p["seeds"]):
        r = rng(i)
        prob = G.unitary_problem(drift, [G.LinearControl(x), G.LinearControl(y)], G.haar_unitary(d, r),
                                 p["total_time_over_pi"] * np.pi)
        cfg = G.GrapeConfig(seed=int(r.integers(2**31)), target_infidelity=p["target_infidelity"])
        res, wall = _timed(lambda: G.grape_with_restarts(prob, p["steps"], cfg, p["restarts"]))
        rows.append((i, res.infidelity, wall))
    ok = sum(r[1] <= p["max_infidelity"] for r in rows)
    arts = [write_csv(out / "seeds.csv", ["seed", "infidelity", "runtime_s"], rows)]
    return Outcome({"successes": ok, "seeds": len(rows), "max_runtime_s": max(r[2] for r in rows)},
                   arts, ok >= p["min_successes"])


def _rand_herm(r, d):
    a = r.normal(size=(d, d)) + 1j * r.normal(size=(d, d))
    return (a + a.conj().T) / 2


def random_control_problem(r, max_dim=5):
    """A random state, unitary or isometry problem with linear and phase controls, d <= max_dim."""
    d = int(r.integers(2, max_dim + 1))
    controls = []
    for _ in range(int(r.integers(1, 3))):
        if r.random() < 0.5:
            controls.append(G.LinearControl(_rand_herm(r, d)))
        else:
            controls.append(G.PhaseControl(_rand_herm(r, d), _rand_herm(r, d)))
    drift = _rand_herm(r, d)
    kind = int(r.integers(3))
    if kind == 0:
        return G.state_problem(drift, controls, G.haar_state(d, r), G.haar_state(d, r), 1.0)
    if kind == 1:
        return G.unitary_problem(drift, controls, G.haar_unitary(d, r), 1.0)
    k = int(r.integers(1, d + 1))
    return G.isometry_problem(drift, controls, G.haar_unitary(d, r)[:, :k], np.eye(d)[:, :k], 1.0)


def gradient_error(prob, vals, h=1e-6):
    """Relative error of the analytic gradient against central differences."""
    _, grad = G.fidelity_and_gradient(prob, vals)
    fd = np.zeros_like(vals)
    for idx in np.ndindex(vals.shape):
        up, dn = vals.copy(), vals.copy()
        up[idx] += h
        dn[idx] -= h
        fd[idx] = (G.objective(prob, up) - G.objective(prob, dn)) / (2 * h)
    return float(np.linalg.norm(grad - fd) / max(np.linalg.norm(fd), 1e-12))


def run_gradient_check(p, rng, out):
    rows = []
    for i in range(p["problems"]):
        r = rng(i)
        prob = random_control_problem(r, p["max_dim"])
        vals = r.uniform(-1, 1, size=(int(r.integers(2, 7)), prob.n_controls))
        rows.append((i, prob.channels[0].drift.shape[0], prob.name, gradient_error(prob, vals)))
    arts = [write_csv(out / "gradient.csv", ["problem", "d", "kind", "relative_error"], rows)]
    return Outcome({"max_relative_error": max(r[3] for r in rows), "problems": len(rows)}, arts)


# ---------------------------------------------------------------- open systems

def _random_model(r, d, njumps=2, rate=0.3):
    jumps = [(r.normal(size=(d, d)) + 1j * r.normal(size=(d, d)), rate * r.uniform(0.2, 1.0))
             for _ in range(njumps)]
    return qd.LindbladModel(_rand_herm(r, d), jumps)


def _random_density(r, d):
    a = r.normal(size=(d, d)) + 1j * r.normal(size=(d, d))
    rho = a @ a.conj().T
    return rho / np.trace(rho)


def run_lindblad_crosscheck(p, rng, out):
    worst = 0.0
    for i in range(p["models"]):
        r = rng(i)
        model, rho = _random_model(r, 3), _random_density(r, 3)
        exact = qd.unvec(qd.cp_map(model, p["time"]) @ qd.vec(rho))
        worst = max(worst, float(np.abs(qd.lindblad_propagate(model, rho, p["time"]) - exact).max()))
    coh = 0.0
    for delta in (0.0, 0.3, 1.0, 4.0):
        model, rho0 = qd.coherence_decay_model(delta, 1.0)
        rho = qd.lindblad_propagate(model, rho0, 10.0)
        coh = max(coh, abs(rho[2, 3] / rho0[0, 1] - qd.two_level_coherence(delta, 1.0, 10.0)))
    ratios = np.linspace(3.0, 0.0, 61)
    infid = np.array([1 - qd.coherence_transfer_fidelity(x, 1.0, 10.0) for x in ratios])
    arts = [write_csv(out / "infidelity_vs_detuning.csv", ["delta_over_gamma", "infidelity"],
                      zip(ratios, infid))]
    return Outcome({"rk4_vs_cp_map": worst, "coherence_closed_form_error": float(coh),
                    "curve_monotone": bool(np.all(np.diff(infid) < 0)), "curve_endpoint": float(infid[-1])},
                   arts)


# ---------------------------------------------------------------- entangler

def run_entangler_cphase(p, rng, out):
    rows = []
    for d, layers in zip(p["dims"], p["layers"]):
        spec = am.EntanglerSpec(two_f=d - 1, two_fp=d + 1, delta_L=p["delta_L"], delta_Z=p["delta_Z"],
                                lifetime_us=p["lifetime_us"], omega_rf_mhz=p["omega_rf_per_2pi_mhz"])
        ent = am.rydberg_entangler(spec)
        target = G.target_library("cphase", d)
        cfg = G.GrapeConfig(seed=int(rng(d).integers(2**31)))
        (circ, _), wall = _timed(lambda: G.layered_optimize(target, ent.hamiltonian(True), layers,
                                                            p["mode"], cfg, p["restarts"]))
        fid = lambda u: abs(np.trace(target.conj().T @ u)) ** 2 / d ** 4
        closed = 1 - fid(G.layered_unitary(circ, ent.hamiltonian(False)))
        lossy = fid(G.layered_unitary(circ, ent.hamiltonian(True)))
        rows.append((d, layers, closed, lossy, float(np.sum(circ.times)), wall))
    arts = [write_csv(out / "cphase.csv",
                      ["d", "layers", "closed_infidelity", "decay_fidelity", "entangling_time", "runtime_s"],
                      rows)]
    fids = [r[3] for r in rows]
    metrics = {f"d{r[0]}_{k}": v for r in rows
               for k, v in (("closed_infidelity", r[2]), ("decay_fidelity", r[3]), ("entangling_time", r[4]))}
    metrics["fidelity_decreases_with_d"] = bool(np.all(np.diff(fids) < 0))
    return Outcome(metrics, arts, all(r[2] <= p["max_closed_infidelity"] for r in rows))


# ---------------------------------------------------------------- dual manifold

def dual_manifold_problem(omega_0, total_time, omega_rf=1.0):
    """X on the lower manifold and identity on the upper one under a shared rf phase."""
    jx, jy, jz = angular_momentum_ops(1)
    a = G.Channel(-omega_0 / 3 * jz, [G.PhaseControl(omega_rf * jx, omega_rf * jy)], np.eye(2),
                  np.array([[0, 1], [1, 0]]))
    r = G.Channel(2 * omega_0 / 3 * jz, [G.PhaseControl(2 * omega_rf * jx, 2 * omega_rf * jy)],
                  np.eye(2), np.eye(2))
    return G.ControlProblem([a, r], total_time, "dual-manifold")


def run_dual_manifold(p, rng, out):
    t = p["total_time_over_pi"] * np.pi
    if p["time_unit"] == "effective_rabi":
        t /= am.dual_manifold_rabi(1.0, p["omega_0"])[0]
    prob = dual_manifold_problem(p["omega_0"], t)
    cfg = G.GrapeConfig(seed=int(rng(0).integers(2**31)), init_scale=1.0,
                        target_infidelity=p["target_infidelity"])
    res, wall = _timed(lambda: G.grape_with_restarts(prob, p["steps"], cfg, p["restarts"]))
    per = [G.channel_fidelity(ch, res.waveform.values, res.waveform.dt) for ch in prob.channels]
    return Outcome({"infidelity": res.infidelity, "manifold_a_fidelity": per[0],
                    "manifold_r_fidelity": per[1], "total_time": t, "runtime_s": wall},
                   _waveform_artifacts(out, "", res), res.infidelity <= p["max_infidelity"])


# ---------------------------------------------------------------- robust control

def run_robust_state_prep(p, rng, out):
    drift, x, y = _qudecimal(p["two_j"], p["beta"])
    d = p["two_j"] + 1
    gen = drift / p["beta"]
    delta = p["relative_error"] * p["beta"]
    psi1 = G.haar_state(d, rng(0))
    prob = G.state_problem(drift, [G.PhaseControl(x, y)], np.eye(d)[-1], psi1, p["total_time_over_pi"] * np.pi)
    cfg = G.GrapeConfig(init="zeros")
    plain = G.grape_optimize(prob, p["steps"], cfg)
    robust = G.grape_optimize(G.robust_problem(prob, gen, delta), p["steps"], cfg)
    worst = lambda v: min(G.objective(G.state_problem(drift + s * delta * gen, [G.PhaseControl(x, y)],
                                                      np.eye(d)[-1], psi1, prob.total_time), v)
                          for s in (-1.0, 1.0))
    wp, wr = worst(plain.waveform.values), worst(robust.waveform.values)
    arts = _waveform_artifacts(out, "plain_", plain) + _waveform_artifacts(out, "robust_", robust)
    return Outcome({"plain_nominal": plain.fidelity, "plain_worst": wp, "robust_worst": wr,
                    "robust_beats_plain": bool(wr > wp)}, arts)


# ---------------------------------------------------------------- spin-cat code

def kl_boundary(two_j):
    """(passes at degree floor((2J-1)/2), fails one degree higher) on a 3-spin repetition code."""
    code = sc.CatCode(two_j)
    enc = sc.RepetitionEncoding(3, code)
    kmax = (two_j - 1) // 2
    higher = [sc.ErrorMonomial(l, m, n) for l in range(kmax + 2) for m in range(kmax + 2)
              for n in range(kmax + 2) if l + m + n == kmax + 1]
    ok_low, _ = sc.kl_check(enc, sc.single_spin_errors(enc))
    ok_high, _ = sc.kl_check(enc, sc.single_spin_errors(enc, sc.correctable_error_set(code) + higher))
    return ok_low, not ok_high


def _rand_qubit(r):
    v = r.normal(size=2) + 1j * r.normal(size=2)
    return v / np.linalg.norm(v)


def run_spin_cat_suite(p, rng, out):
    r = rng(0)

    def body():
        m = {}
        ortho = swap = cnot_err = amp = 0.0
        for tj in p["two_js"]:
            code = sc.CatCode(tj)
            basis = np.array([sc.logical_basis(code, k, b) for k in range(code.n_kittens) for b in (0, 1)])
            ortho = max(ortho, np.abs(basis.conj() @ basis.T - np.eye(len(basis))).max())
            vs, cnot = sc.vs_swap(code), sc.logical_gate(code, "CNOT")
            for k in range(code.n_kittens):
                for l in range(code.n_kittens):
                    a, b = _rand_qubit(r)
                    c, d = _rand_qubit(r)
                    got = vs @ np.kron(sc.kitten_qubit(code, k, a, b), sc.kitten_qubit(code, l, c, d))
                    want = np.kron(sc.kitten_qubit(code, k, c, d), sc.kitten_qubit(code, l, a, b))
                    swap = max(swap, np.abs(got - want).max())
                    for x, y in np.ndindex(2, 2):
                        v = np.kron(sc.logical_basis(code, k, x), sc.logical_basis(code, l, y))
                        w = np.kron(sc.logical_basis(code, k, x), sc.logical_basis(code, l, x ^ y))
                        cnot_err = max(cnot_err, np.abs(cnot @ v - w).max())
            amp = max(amp, sc.channel_distance(lambda q: sc.amplitude_recovery(code, q),
                                               lambda q: sc.measured_amplitude_recovery(code, q), code.dim))
            m[f"kl_boundary_2j{tj}"] = all(kl_boundary(tj))
        m.update(kitten_orthonormality=float(ortho), vs_swap_error=float(swap),
                 cnot_uniformity_error=float(cnot_err), amplitude_channel_distance=float(amp))
        enc = sc.RepetitionEncoding(3, sc.CatCode(3))
        comm = 0.0
        for _ in range(2):
            rho = _random_density(r, enc.dim)
            one = sc.amplitude_recovery_multi(enc, sc.phase_recovery(enc, rho))
            two = sc.phase_recovery(enc, sc.amplitude_recovery_multi(enc, rho))
            comm = max(comm, np.abs(one - two).max())
        m["recovery_commutator"] = float(comm)
        enc = sc.RepetitionEncoding(3, sc.CatCode(9))
        zero, one = sc.codewords(enc)
        a, b = _rand_qubit(r)
        psi = a * zero + b * one
        bad = sc.embed(sc.optical_pumping_event(enc.base, 1), 0, 3, 10) @ psi
        bad /= np.linalg.norm(bad)
        fixed = sc.amplitude_recovery_multi(enc, sc.phase_recovery(enc, np.outer(bad, bad.conj())))
        m["pumping_example_error"] = float(np.abs(fixed - np.outer(psi, psi.conj())).max())
        return m

    m, wall = _timed(body)
    m["runtime_s"] = wall
    return Outcome(m)


def run_catcode(p, rng, out):
    """Single-code checks used by the ``catcode`` command."""
    code = sc.CatCode(p["two_j"])
    action = p["action"]
    if action == "check-kl":
        enc = sc.RepetitionEncoding(p["n_rep"], code)
        ok, worst = sc.kl_check(enc, sc.single_spin_errors(enc))
        low, high = kl_boundary(p["two_j"]) if p["n_rep"] == 3 else (None, None)
        return Outcome({"kl_passes": bool(ok), "kl_worst": worst, "boundary_low_passes": low,
                        "boundary_high_fails": high})
    if action == "gates":
        rows = []
        for kind in ("X", "Y", "Z", "CNOT", "CZ", "ZZ", "Toffoli"):
            u = sc.logical_gate(code, kind, 0.3 if kind == "ZZ" else None)
            rows.append((kind, u.shape[0], float(np.abs(u @ u.conj().T - np.eye(u.shape[0])).max())))
        return Outcome({"gates": len(rows), "max_unitarity_error": max(r[2] for r in rows)},
                       [write_csv(out / "gates.csv", ["gate", "dim", "unitarity_error"], rows)])
    if action == "recovery-demo":
        dist = sc.channel_distance(lambda q: sc.amplitude_recovery(code, q),
                                   lambda q: sc.measured_amplitude_recovery(code, q), code.dim)
        rows = []
        a, b = _rand_qubit(rng(0))
        clean = sc.kitten_qubit(code, 0, a, b)
        for k in range(code.n_kittens):
            hit = sc.kitten_qubit(code, k, a, b)
            fixed = sc.amplitude_recovery(code, np.outer(hit, hit.conj()))
            rows.append((k, float(np.real(clean.conj() @ fixed @ clean))))
        return Outcome({"channel_distance": dist, "min_recovered_fidelity": min(r[1] for r in rows)},
                       [write_csv(out / "recovery.csv", ["kitten", "fidelity"], rows)])
    raise ValueError(action)


# ---------------------------------------------------------------- threshold

def _mapping(p):
    if p["mapping"] == "rotation":
        return th.RotationMapping(p["two_j"])
    return th.PumpingMapping(p["two_j"], p["alpha"], p["beta"])


def run_threshold(p, rng, out):
    base = th.GadgetConfig(p["n"], p["r1"], p["r2"], p["two_j"], p["k_max_rule"])
    metrics = {}
    for name in ("rotation", "optical"):
        mp = th.RotationMapping(p["two_j"]) if name == "rotation" else \
            th.PumpingMapping(p["two_j"], p["alpha"], p["beta"])
        metrics[f"{name}_crossing"] = th.crossing(base, mp)
    mapping = _mapping(p)
    rows, best = th.threshold_scan(base, mapping, range(p["sweep_min"], p["sweep_max"] + 1, 2))
    header = ["n", "eps", "eps_logical", "phase_part", "amp_part"]
    arts = [write_csv(out / "scan.csv", header, [[r.get(h) for h in header] for r in rows])]
    metrics["sweet_spot_n"] = best
    metrics["scan"] = [{k: r.get(k) for k in header} for r in rows]
    return Outcome(metrics, arts)


SCENARIOS = {
    "tables": Scenario(run_tables, {"symmetric_k": Param([2, 3, 5, 7]), "layer_dims": Param([3, 5, 7])}),
    "algebra-suite": Scenario(run_algebra_suite, {"max_two_j": Param(9, "positive"),
                                                  "rotations": Param(10, "positive")}, True),
    "quartic-fit": Scenario(run_quartic_fit, {}),
    "qudecimal-state-prep": Scenario(run_state_prep, {
        "two_j": Param(9, "positive"), "beta": Param(1.0, "positive"), "steps": Param(120, "positive"),
        "total_time_over_pi": Param(6.0, "positive"), "target_infidelity": Param(1e-4, "nonneg"),
        "restarts": Param(3, "positive"), "min_fidelity": Param(0.999, "nonneg")}, True),
    "grape-state-maps": Scenario(run_state_maps, {
        "two_j": Param(9, "positive"), "beta": Param(1.0, "positive"), "steps": Param(120, "positive"),
        "total_time_over_pi": Param(6.0, "positive"), "target_infidelity": Param(1e-4, "nonneg"),
        "restarts": Param(2, "positive"), "seeds": Param(20, "positive"),
        "max_infidelity": Param(1e-3, "nonneg"), "min_successes": Param(18, "nonneg")}, True),
    "grape-unitary-maps": Scenario(run_unitary_maps, {
        "two_j": Param(3, "positive"), "beta": Param(1.0, "positive"), "steps": Param(40, "positive"),
        "total_time_over_pi": Param(4.0, "positive"), "target_infidelity": Param(1e-4, "nonneg"),
        "restarts": Param(3, "positive"), "seeds": Param(10, "positive"),
        "max_infidelity": Param(1e-3, "nonneg"), "min_successes": Param(9, "nonneg")}, True),
    "gradient-check": Scenario(run_gradient_check, {"problems": Param(50, "positive"),
                                                    "max_dim": Param(5, "positive")}, True),
    "lindblad-crosscheck": Scenario(run_lindblad_crosscheck, {"models": Param(20, "positive"),
                                                              "time": Param(1.7, "positive")}, True),
    "entangler-cphase": Scenario(run_entangler_cphase, {
        "dims": Param([2, 3, 4]), "layers": Param([3, 6, 10]), "delta_L": Param(4.0),
        "delta_Z": Param(2.0), "lifetime_us": Param(140.0, "positive"),
        "omega_rf_per_2pi_mhz": Param(10.0, "positive"), "mode": Param("local"),
        "restarts": Param(4, "positive"), "max_closed_infidelity": Param(1e-3, "nonneg")}, True),
    "dual-manifold": Scenario(run_dual_manifold, {
        "omega_0": Param(3.0, "nonneg"), "total_time_over_pi": Param(sqrt(2), "positive"),
        "time_unit": Param("rf"), "steps": Param(2, "positive"), "restarts": Param(20, "positive"),
        "target_infidelity": Param(1e-6, "nonneg"), "max_infidelity": Param(1e-3, "nonneg")}, True),
    "robust-state-prep": Scenario(run_robust_state_prep, {
        "two_j": Param(9, "positive"), "beta": Param(0.4, "positive"), "relative_error": Param(0.005, "nonneg"),
        "steps": Param(120, "positive"), "total_time_over_pi": Param(4.5, "positive")}, True),
    "spin-cat-suite": Scenario(run_spin_cat_suite, {"two_js": Param([3, 5, 9])}, True),
    "catcode": Scenario(run_catcode, {"two_j": Param(9, "odd"), "action": Param("check-kl"),
                                      "n_rep": Param(3, "odd")}, True),
    "threshold": Scenario(run_threshold, {
        "n": Param(21, "odd"), "r1": Param(7, "odd"), "r2": Param(1, "nonneg"), "two_j": Param(9, "odd"),
        "k_max_rule": Param("lower"), "mapping": Param("rotation"), "alpha": Param(0.0137, "nonneg"),
        "beta": Param(0.2, "nonneg"), "sweep_min": Param(3, "odd"), "sweep_max": Param(41, "odd")}),
}

CHOICES = {"time_unit": ("rf", "effective_rabi"), "mode": ("local", "global_sign_flip"),
           "k_max_rule": ("lower", "upper"), "mapping": ("rotation", "optical"),
           "action": ("check-kl", "gates", "recovery-demo")}
