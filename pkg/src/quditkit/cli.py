"""Command-line front end: scenario configs, reproducible runs, CSV and JSON artifacts."""

import argparse
import hashlib
import json
import sys
import time
import zlib
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import numpy as np
import yaml

from .errors import ConfigError, QuditKitError
from .experiments import CHOICES, SCENARIOS, write_csv

TOP_KEYS = {"scenario", "seed", "out", "params", "version"}


@dataclass
class RunConfig:
    scenario: str
    params: dict
    seed: int | None = None
    out: str = "runs"
    version: int = 1
    raw: dict = field(default_factory=dict, repr=False)


def _check_value(path, value, default, check):
    if isinstance(default, bool):
        if not isinstance(value, bool):
            raise ConfigError(path, f"expected true/false, got {value!r}")
        return value
    if isinstance(default, int) and not isinstance(default, bool):
        if not isinstance(value, int) or isinstance(value, bool):
            raise ConfigError(path, f"expected an integer, got {value!r}")
    elif isinstance(default, float):
        if not isinstance(value, (int, float)) or isinstance(value, bool):
            raise ConfigError(path, f"expected a number, got {value!r}")
        value = float(value)
    elif isinstance(default, list):
        if not isinstance(value, list):
            raise ConfigError(path, f"expected a list, got {value!r}")
    elif isinstance(default, str):
        if not isinstance(value, str):
            raise ConfigError(path, f"expected a string, got {value!r}")
    if check == "positive" and not value > 0:
        raise ConfigError(path, f"must be positive, got {value}")
    if check == "nonneg" and not value >= 0:
        raise ConfigError(path, f"must be non-negative, got {value}")
    if check == "odd" and value % 2 != 1:
        raise ConfigError(path, f"must be odd, got {value}")
    key = path.rsplit(".", 1)[-1]
    if key in CHOICES and value not in CHOICES[key]:
        raise ConfigError(path, f"expected one of {CHOICES[key]}, got {value!r}")
    return value


def parse_config(data):
    """Validate a mapping into a RunConfig; errors name the offending field path."""
    if not isinstance(data, dict):
        raise ConfigError("<root>", "config must be a mapping")
    unknown = set(data) - TOP_KEYS
    if unknown:
        raise ConfigError(sorted(unknown)[0], "unknown key")
    name = data.get("scenario")
    if name not in SCENARIOS:
        raise ConfigError("scenario", f"unknown scenario {name!r}")
    spec = SCENARIOS[name]
    given = data.get("params") or {}
    if not isinstance(given, dict):
        raise ConfigError("params", "must be a mapping")
    unknown = set(given) - set(spec.params)
    if unknown:
        raise ConfigError(f"params.{sorted(unknown)[0]}", "unknown key")
    params = {}
    for key, prm in spec.params.items():
        value = given.get(key, prm.default)
        params[key] = _check_value(f"params.{key}", value, prm.default, prm.check)
    seed = data.get("seed")
    if spec.stochastic and seed is None:
        raise ConfigError("seed", "required for a stochastic scenario")
    if seed is not None and (not isinstance(seed, int) or isinstance(seed, bool) or not 0 <= seed < 2**64):
        raise ConfigError("seed", f"expected a 64-bit unsigned integer, got {seed!r}")
    out = data.get("out", "runs")
    if not isinstance(out, str):
        raise ConfigError("out", "must be a path string")
    return RunConfig(name, params, seed, out, data.get("version", 1), data)


def load_config(path):
    with open(path) as fh:
        return parse_config(yaml.safe_load(fh))


def config_hash(cfg):
    """SHA-256 of the canonical (key-sorted) resolved config."""
    canon = {"scenario": cfg.scenario, "params": cfg.params, "seed": cfg.seed, "version": cfg.version}
    blob = json.dumps(canon, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()


def stream_factory(seed, scenario):
    """Counter-based streams keyed by (seed, scenario); stream i is the i-th draw family."""
    tag = zlib.crc32(scenario.encode())

    def make(i):
        return np.random.Generator(np.random.Philox(key=[seed or 0, tag], counter=[int(i), 0, 0, 0]))

    return make


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (np.floating, float)):
        return float(x)
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, np.bool_):
        return bool(x)
    if isinstance(x, complex):
        return [x.real, x.imag]
    return x


def run_dir(cfg, out=None):
    return Path(out or cfg.out) / f"{cfg.scenario}-{config_hash(cfg)[:12]}"


def run(cfg, out=None):
    """Execute one scenario; returns the manifest dict (also written as manifest.json)."""
    outdir = run_dir(cfg, out)
    outdir.mkdir(parents=True, exist_ok=True)
    t0 = time.perf_counter()
    res = SCENARIOS[cfg.scenario].runner(cfg.params, stream_factory(cfg.seed, cfg.scenario), outdir)
    manifest = {
        "scenario": cfg.scenario,
        "version": cfg.version,
        "config_hash": config_hash(cfg),
        "seed": cfg.seed,
        "params": cfg.params,
        "metrics": res.metrics,
        "converged": res.converged,
        "wall_time_s": time.perf_counter() - t0,
        "artifacts": sorted(res.artifacts),
    }
    manifest = _jsonable(manifest)
    (outdir / "manifest.json").write_text(json.dumps(manifest, indent=2, sort_keys=True), encoding="utf-8")
    return manifest


# ---------------------------------------------------------------- report

_VOLATILE = ("runtime_s", "max_runtime_s")


def _stable_metrics(m):
    return {k: v for k, v in m.items() if not k.endswith(_VOLATILE)}


def report(manifests):
    """Merge manifests into one summary.

    Threshold scans become one crossing table sorted by n, with a column per mapping.
    """
    if not manifests:
        raise ConfigError("manifests", "need at least one manifest")
    runs, conflicts, scan = [], [], {}
    seen, versions = {}, {}
    for m in manifests:
        versions.setdefault(m["scenario"], set()).add(m.get("version"))
        key = (m["scenario"], m.get("seed"), json.dumps(m.get("params"), sort_keys=True))
        if key in seen:
            if _stable_metrics(seen[key]["metrics"]) != _stable_metrics(m["metrics"]):
                conflicts.append({"scenario": m["scenario"], "reason": "non-deterministic metrics"})
            continue
        seen[key] = m
        runs.append({k: m[k] for k in ("scenario", "config_hash", "seed", "converged", "metrics")})
        if m["scenario"] == "threshold":
            label = m.get("params", {}).get("mapping") or m["config_hash"][:12]
            for row in m["metrics"].get("scan", []):
                scan.setdefault(row["n"], {"n": row["n"]})[label] = row["eps"]
    for name, vs in sorted(versions.items()):
        if len(vs) > 1:
            conflicts.append({"scenario": name, "reason": "conflicting versions", "versions": sorted(vs)})
    summary = {"runs": runs, "conflicts": conflicts}
    if scan:
        summary["threshold_scan"] = [scan[n] for n in sorted(scan)]
    return summary


def format_table(summary):
    lines = [f"{'scenario':<24} {'converged':<9} metrics"]
    for r in summary["runs"]:
        shown = {k: v for k, v in r["metrics"].items() if not isinstance(v, (list, dict))}
        body = ", ".join(f"{k}={v:.6g}" if isinstance(v, float) else f"{k}={v}" for k, v in shown.items())
        lines.append(f"{r['scenario']:<24} {str(r['converged']):<9} {body}")
    if "threshold_scan" in summary:
        lines.append("")
        labels = sorted({k for row in summary["threshold_scan"] for k in row if k != "n"})
        lines.append(f"{'n':>4} " + " ".join(f"{lab:>12}" for lab in labels))
        for row in summary["threshold_scan"]:
            cells = [row.get(lab) for lab in labels]
            lines.append(f"{row['n']:>4} " + " ".join(
                f"{'none' if c is None else format(c, '.6g'):>12}" for c in cells))
    for c in summary["conflicts"]:
        lines.append(f"CONFLICT {c}")
    return "\n".join(lines)


# ---------------------------------------------------------------- sub-commands

def bundled_scenarios():
    """Paths of the checked-in scenario configs."""
    root = resources.files("quditkit") / "scenarios"
    return sorted(Path(str(p)) for p in root.iterdir() if p.name.endswith(".yaml"))


def _print_manifest(m):
    shown = {k: v for k, v in m["metrics"].items() if k != "scan"}
    print(json.dumps({"scenario": m["scenario"], "converged": m["converged"], "metrics": shown},
                     indent=2, sort_keys=True))


def _run_one(path, out):
    return run(load_config(path), out)


def cmd_run(args):
    paths = args.config
    if args.jobs > 1 and len(paths) > 1:
        with ProcessPoolExecutor(args.jobs) as pool:
            manifests = list(pool.map(_run_one, paths, [args.out] * len(paths)))
    else:
        manifests = [_run_one(p, args.out) for p in paths]
    for m in manifests:
        _print_manifest(m)
    return 0 if all(m["converged"] for m in manifests) else 3


def cmd_report(args):
    manifests = [json.loads(Path(p).read_text(encoding="utf-8")) for p in args.manifests]
    summary = report(manifests)
    Path(args.out).write_text(json.dumps(summary, indent=2, sort_keys=True), encoding="utf-8")
    print(format_table(summary))
    return 1 if summary["conflicts"] else 0


def _adhoc(scenario, params, seed, out):
    cfg = parse_config({"scenario": scenario, "params": params, "seed": seed, "out": out})
    m = run(cfg)
    _print_manifest(m)
    return 0 if m["converged"] else 3


def cmd_spin_ops(args):
    from .spin_algebra import angular_momentum_ops, ladder_ops, spherical_tensor
    if args.op == "tensor":
        op = spherical_tensor(args.two_j, args.k, args.q)
    elif args.op in ("jp", "jm"):
        op = ladder_ops(args.two_j)[0 if args.op == "jp" else 1]
    else:
        op = angular_momentum_ops(args.two_j)["xyz".index(args.op[1])]
    rows = [(i, j, complex(op[i, j])) for i, j in np.ndindex(op.shape)]
    write_csv(args.out, ["row", "col", "value"], rows)
    print(f"wrote {op.shape[0]}x{op.shape[1]} operator to {args.out}")
    return 0


def cmd_model(args):
    from . import atomic_models as am
    if args.kind == "entangler":
        spec = am.EntanglerSpec(two_f=args.two_j, two_fp=args.two_j + 2, delta_L=args.delta_l,
                                delta_Z=args.delta_z)
        ent = am.rydberg_entangler(spec)
        d = ent.dim
        rows = [(i, j, 10 * i + j, ent.energies[i, j], ent.entangling[i, j], ent.decay[i, j])
                for i in range(d) for j in range(d)]
        write_csv(args.out, ["i", "j", "f", "energy", "entangling", "decay"], rows)
    elif args.kind == "rabi-ratios":
        r = am.rabi_ratios(args.two_j, args.two_j + 2)
        m = np.arange(args.two_j + 1) - args.two_j / 2
        write_csv(args.out, ["M", "ratio"], zip(m, r))
    else:
        h = am.qudecimal_hamiltonian(am.QudecimalControl(spin=args.two_j), args.phase)
        rows = [(i, j, complex(h[i, j])) for i, j in np.ndindex(h.shape)]
        write_csv(args.out, ["row", "col", "value"], rows)
    print(f"wrote {args.kind} table to {args.out}")
    return 0


def cmd_grape(args):
    names = {"qudecimal-state-prep": "qudecimal-state-prep", "state-maps": "grape-state-maps",
             "unitary-maps": "grape-unitary-maps", "dual-manifold": "dual-manifold",
             "robust-state-prep": "robust-state-prep"}
    params = {"steps": args.steps} if args.steps is not None else {}
    cfg = parse_config({"scenario": names[args.problem], "params": params, "seed": args.seed, "out": args.out})
    m = run(cfg)
    if args.trace:
        print(f"trace: {run_dir(cfg) / 'trace.csv'}")
    _print_manifest(m)
    return 0 if m["converged"] else 3


def cmd_simulate(args):
    from . import quantum_dynamics as qd
    model, rho0 = qd.coherence_decay_model(args.delta, args.gamma)
    times, states = qd.lindblad_trajectory(model, rho0, args.time, samples=args.samples)
    rows = [(t, complex(s[2, 3] / rho0[0, 1]), float(s.trace().real)) for t, s in zip(times, states)]
    write_csv(args.out, ["t", "coherence", "trace"], rows)
    print(f"wrote {len(rows)} samples to {args.out}")
    return 0


def cmd_catcode(args):
    return _adhoc("catcode", {"two_j": args.two_j, "action": args.action, "n_rep": args.n_rep},
                  args.seed, args.out)


def _parse_range(text):
    lo, _, hi = text.partition("..")
    return int(lo), int(hi or lo)


def cmd_threshold(args):
    data = yaml.safe_load(Path(args.config).read_text()) if args.config else {"scenario": "threshold"}
    data.setdefault("params", {})
    if args.sweep_n:
        data["params"]["sweep_min"], data["params"]["sweep_max"] = _parse_range(args.sweep_n)
    cfg = parse_config(data)
    m = run(cfg, args.run_dir)
    if args.out:
        header = ["n", "eps", "eps_logical", "phase_part", "amp_part"]
        write_csv(args.out, header, [[r.get(h) for h in header] for r in m["metrics"]["scan"]])
    _print_manifest(m)
    return 0


def build_parser():
    p = argparse.ArgumentParser(prog="quditkit", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("spin-ops", help="write a spin operator as CSV")
    s.add_argument("--two-j", type=int, required=True)
    s.add_argument("--op", choices=["jx", "jy", "jz", "jp", "jm", "tensor"], default="jz")
    s.add_argument("--k", type=int, default=0)
    s.add_argument("--q", type=int, default=0)
    s.add_argument("--out", default="spin_op.csv")
    s.set_defaults(func=cmd_spin_ops)

    s = sub.add_parser("model", help="tabulate an atomic model")
    s.add_argument("--kind", choices=["entangler", "rabi-ratios", "qudecimal"], default="entangler")
    s.add_argument("--two-j", type=int, default=9)
    s.add_argument("--delta-l", type=float, default=6.0)
    s.add_argument("--delta-z", type=float, default=1.0)
    s.add_argument("--phase", type=float, default=0.0, help="rf phase in units of pi")
    s.add_argument("--out", default="model.csv")
    s.set_defaults(func=cmd_model)

    s = sub.add_parser("grape", help="optimize a control waveform")
    s.add_argument("--problem", choices=["qudecimal-state-prep", "state-maps", "unitary-maps",
                                         "dual-manifold", "robust-state-prep"], required=True)
    s.add_argument("--steps", type=int)
    s.add_argument("--seed", type=int, required=True)
    s.add_argument("--out", default="runs")
    s.add_argument("--trace", action="store_true", help="report the fidelity-trace path")
    s.set_defaults(func=cmd_grape)

    s = sub.add_parser("simulate", help="Lindblad trajectory of the coherence-transfer model")
    s.add_argument("--delta", type=float, default=0.0)
    s.add_argument("--gamma", type=float, default=1.0)
    s.add_argument("--time", type=float, default=10.0)
    s.add_argument("--samples", type=int, default=50)
    s.add_argument("--out", default="trajectory.csv")
    s.set_defaults(func=cmd_simulate)

    s = sub.add_parser("catcode", help="spin-cat code checks")
    s.add_argument("--two-j", type=int, required=True)
    s.add_argument("action", choices=list(CHOICES["action"]))
    s.add_argument("--n-rep", type=int, default=3)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--out", default="runs")
    s.set_defaults(func=cmd_catcode)

    s = sub.add_parser("threshold", help="threshold crossing scan")
    s.add_argument("--config")
    s.add_argument("--sweep-n", help="odd range lo..hi")
    s.add_argument("--out", help="scan CSV path")
    s.add_argument("--run-dir", default="runs")
    s.set_defaults(func=cmd_threshold)

    s = sub.add_parser("run", help="run scenario config files")
    s.add_argument("config", nargs="+")
    s.add_argument("--out", help="override the output directory")
    s.add_argument("--jobs", type=int, default=1)
    s.set_defaults(func=cmd_run)

    s = sub.add_parser("report", help="merge run manifests")
    s.add_argument("manifests", nargs="+")
    s.add_argument("--out", default="summary.json")
    s.set_defaults(func=cmd_report)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except QuditKitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
