"""Command line interface: freqset / discretize / experiment."""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor

from . import __version__
from .l1disc import FalsifierEffort, certify_l1
from .l2disc import bss_weighted_sparsify, frobenius_rga_pointset, l2_certificate, random_l2_pointset
from .spaces import FrequencySet, build_box, build_hyperbolic_cross, grid_P, real_trig_system

EXIT_OK = 0
EXIT_TARGET = 1  # ran fine but a requested target was not met
EXIT_USAGE = 2  # bad arguments or config

CSV_COLUMNS = ("space", "N", "m", "method", "seed", "eps", "r_min", "r_max", "runtime_ms")


def parse_space(spec: str) -> FrequencySet:
    """cross:<n>:<dim> or box:<N1>x<N2>x..."""
    kind, _, rest = spec.partition(":")
    try:
        if kind == "cross":
            n_str, _, d_str = rest.partition(":")
            return build_hyperbolic_cross(int(n_str), int(d_str or "1"))
        if kind == "box":
            return build_box([int(v) for v in rest.split("x")])
    except (ValueError, TypeError) as exc:
        raise argparse.ArgumentTypeError(f"bad space spec {spec!r}: {exc}") from None
    raise argparse.ArgumentTypeError(f"unknown space kind {kind!r} (use cross:n:d or box:N1xN2)")


def parse_seeds(spec: str) -> list[int]:
    """'0..9' (inclusive) or '1,4,7'."""
    if ".." in spec:
        lo, _, hi = spec.partition("..")
        return list(range(int(lo), int(hi) + 1))
    return [int(v) for v in spec.split(",")]


def fmt(x) -> str:
    if x is None:
        return ""
    if isinstance(x, float):
        return "%.12g" % x
    return str(x)


def build_pointset(system, method: str, m: int, seed: int, bss_d: float):
    if method == "random":
        ps, _ = random_l2_pointset(system, m, seed=seed)
        return ps
    if method == "greedy":
        return frobenius_rga_pointset(system, m).pointset
    if method == "bss":
        return bss_weighted_sparsify(system, bss_d).pointset
    if method == "grid":
        return grid_P(system.freqs.max_abs)
    raise ValueError(f"unknown method {method!r}")


def run_job(job: tuple) -> dict:
    (spec, m, method, seed, do_l1, effort_name, bss_d, oversample) = job
    Q = parse_space(spec)
    system = real_trig_system(Q, oversample=oversample)
    t0 = time.perf_counter()
    ps = build_pointset(system, method, m, seed, bss_d)
    cert = l2_certificate(system, ps)
    r_min = r_max = None
    if do_l1:
        effort = FalsifierEffort.quick() if effort_name == "quick" else FalsifierEffort()
        l1 = certify_l1(ps, Q, effort=effort, seed=seed)
        r_min, r_max = l1.r_min, l1.r_max
    ms = 1000.0 * (time.perf_counter() - t0)
    return {
        "space": spec,
        "N": system.size,
        "m": ps.m,
        "method": method,
        "seed": seed,
        "eps": cert.eps,
        "r_min": r_min,
        "r_max": r_max,
        "runtime_ms": ms,
    }


EXPERIMENT_KEYS = {
    "space": str,
    "m": int,
    "methods": str,
    "seeds": str,
    "l1": lambda s: s.lower() in ("1", "true", "yes"),
    "effort": str,
    "bss_d": float,
    "oversample": int,
    "eps_target": float,
}

EXPERIMENT_DEFAULTS = {
    "space": "cross:2:1",
    "m": 56,
    "methods": "random",
    "seeds": "0..4",
    "l1": False,
    "effort": "quick",
    "bss_d": 4.0,
    "oversample": 4,
    "eps_target": None,
}


class ConfigError(Exception):
    """Validation failure: maps to exit code 2."""


def parse_config(pairs: list[str]) -> dict:
    cfg = dict(EXPERIMENT_DEFAULTS)
    for pair in pairs:
        key, sep, val = pair.partition("=")
        if not sep:
            raise ConfigError(f"config entries must be key=value, got {pair!r}")
        if key not in EXPERIMENT_KEYS:
            raise ConfigError(f"unknown config key {key!r} (known: {', '.join(sorted(EXPERIMENT_KEYS))})")
        cfg[key] = EXPERIMENT_KEYS[key](val)
    return cfg


def config_sha(cfg: dict) -> str:
    canon = json.dumps({k: cfg[k] for k in sorted(cfg)}, default=str)
    return hashlib.sha256(canon.encode()).hexdigest()[:16]


def cmd_freqset(args) -> int:
    Q = parse_space(args.space)
    print(f"space {args.space}: dim={Q.dim} size={len(Q)} max_abs={[int(v) for v in Q.max_abs]}")
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(Q.to_json())
        print(f"wrote {args.out}")
    return EXIT_OK


def cmd_discretize(args) -> int:
    Q = parse_space(args.space)
    system = real_trig_system(Q, oversample=args.oversample)
    ps = build_pointset(system, args.method, args.m, args.seed, args.bss_d)
    cert = l2_certificate(system, ps)
    print(f"space {args.space} N={system.size} method={args.method} m={ps.m}")
    print(f"eps={fmt(cert.eps)} lam_min={fmt(cert.lam_min)} lam_max={fmt(cert.lam_max)}")
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(ps.to_json())
        print(f"wrote {args.out}")
    if args.eps_target is not None and cert.eps > args.eps_target:
        print(f"eps target {args.eps_target} not met", file=sys.stderr)
        return EXIT_TARGET
    return EXIT_OK


def cmd_experiment(args) -> int:
    cfg = parse_config(args.config)
    jobs = []
    for method in cfg["methods"].split(","):
        for seed in parse_seeds(cfg["seeds"]):
            jobs.append((cfg["space"], cfg["m"], method.strip(), seed, cfg["l1"], cfg["effort"], cfg["bss_d"], cfg["oversample"]))
    if args.workers > 1:
        with ProcessPoolExecutor(max_workers=args.workers) as pool:
            rows = list(pool.map(run_job, jobs))
    else:
        rows = [run_job(j) for j in jobs]

    lines = [f"# normdisc={__version__} config_sha256={config_sha(cfg)}", ",".join(CSV_COLUMNS)]
    lines += [",".join(fmt(r[c]) for c in CSV_COLUMNS) for r in rows]
    text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)

    failed = False
    if cfg["eps_target"] is not None:
        failed |= any(r["eps"] > cfg["eps_target"] for r in rows)
    if cfg["l1"]:
        failed |= any(not (0.5 <= r["r_min"] and r["r_max"] <= 1.5) for r in rows)
    return EXIT_TARGET if failed else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="normdisc", description="norm discretization point sets and certificates")
    ap.add_argument("--version", action="version", version=f"normdisc {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("freqset", help="describe a frequency set")
    p.add_argument("--space", required=True)
    p.add_argument("--out", help="write the set as JSON")
    p.set_defaults(fn=cmd_freqset)

    p = sub.add_parser("discretize", help="build one point set and certify it in L2")
    p.add_argument("--space", required=True)
    p.add_argument("--method", default="random", choices=("random", "greedy", "bss", "grid"))
    p.add_argument("--m", type=int, default=64)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--bss-d", dest="bss_d", type=float, default=4.0)
    p.add_argument("--oversample", type=int, default=4)
    p.add_argument("--eps-target", dest="eps_target", type=float)
    p.add_argument("--out", help="write the point set as JSON")
    p.set_defaults(fn=cmd_discretize)

    p = sub.add_parser("experiment", help="sweep methods x seeds, emit CSV")
    p.add_argument("--config", nargs="*", default=[], metavar="KEY=VALUE")
    p.add_argument("--out", help="CSV path (default stdout)")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(fn=cmd_experiment)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:  # argparse exits 2 on usage errors already
        return int(exc.code or 0)
    try:
        return args.fn(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, argparse.ArgumentTypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
